use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use waveguide_core::field::Field2D;
use waveguide_core::functionals::*;
use waveguide_core::groundstate::nehari_scale;
use waveguide_core::soliton::{line_soliton, m_line, SolitonParams};
use waveguide_core::{make_grid, GridSpec};

fn grid() -> GridSpec {
    make_grid(16.0, 128, 8, 3.0).unwrap()
}

/// Smooth, decaying, y-dependent random data.
fn random_bump(seed: u64, g: GridSpec) -> Field2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let w = rng.gen_range(0.5..2.0);
    let x0 = rng.gen_range(-2.0..2.0);
    Field2D::from_fn(g, |x, y| {
        let env = (-w * (x - x0) * (x - x0)).exp();
        C64::new(env * (1.5 + a[0] * y.cos() + a[1] * (2.0 * y).sin()), env * (a[2] + a[3] * y.sin()))
    })
}

#[test]
fn cubic_soliton_functionals_closed_form() {
    // R = √2 sech x, ‖R‖² = 4, ‖R'‖² = 4/3, ‖R‖⁴_4 = 16/3 per unit y-length
    let g = make_grid(40.0, 1024, 4, 3.0).unwrap();
    let r = Field2D::lift(&line_soliton(SolitonParams::new(3.0, 1.0).unwrap(), &g).unwrap());
    let f = functionals(&r, 1.0).unwrap();
    let tp = 2.0 * PI;
    assert!((f.mass - 2.0 * tp).abs() < 1e-10);
    assert!((f.hamiltonian - tp * (2.0 / 3.0 - 4.0 / 3.0)).abs() < 1e-10);
    assert!((f.action - tp * m_line(3.0, 1.0).unwrap()).abs() < 1e-10);
    assert!(f.nehari.abs() < 1e-10);
    assert!((f.i_omega - f.action).abs() < 1e-10);
    assert!((f.x_norm - (tp * (4.0 / 3.0 + 4.0)).sqrt()).abs() < 1e-10);
}

#[test]
fn transverse_energy_of_cos_y() {
    // ‖|D_y|^{1/2} (e^{-x²} cos y)‖² = ∫e^{-2x²} dx · π
    let g = make_grid(10.0, 256, 8, 3.0).unwrap();
    let u = Field2D::from_fn(g, |x, y| C64::new((-x * x).exp() * y.cos(), 0.0));
    let n = Norms::of(&u);
    assert!((n.transverse - (PI / 2.0).sqrt() * PI).abs() < 1e-12);
}

#[test]
fn rejects_non_positive_frequency() {
    let u = random_bump(1, grid());
    assert!(functionals(&u, 0.0).is_err());
    assert!(functionals(&u, f64::INFINITY).is_err());
}

#[test]
fn gradient_vanishes_at_the_soliton() {
    let g = make_grid(40.0, 1024, 4, 3.0).unwrap();
    let r = Field2D::lift(&line_soliton(SolitonParams::new(3.0, 1.0).unwrap(), &g).unwrap());
    assert!(action_gradient(&r, ActionWeights::standard(1.0)).sup_norm() < 1e-10);
}

fn action(u: &Field2D, omega: f64) -> f64 {
    functionals(u, omega).unwrap().action
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nehari_is_the_radial_derivative(seed in any::<u64>(), omega in 0.1..3.0f64) {
        let u = random_bump(seed, grid());
        let h = 1e-4;
        let fd = (action(&u.scale(1.0 + h), omega) - action(&u.scale(1.0 - h), omega)) / (2.0 * h);
        let n = functionals(&u, omega).unwrap().nehari;
        let scale = Norms::of(&u).x_norm_sq().max(1.0);
        prop_assert!((n - fd).abs() < 1e-6 * scale, "{n} vs {fd}");
    }

    #[test]
    fn gradient_matches_directional_derivative(s1 in any::<u64>(), s2 in any::<u64>(), omega in 0.1..3.0f64) {
        let g = grid();
        let u = random_bump(s1, g);
        let v = random_bump(s2, g);
        let h = 1e-5;
        let fd = (action(&u.axpy(h, &v), omega) - action(&u.axpy(-h, &v), omega)) / (2.0 * h);
        let grad = action_gradient(&u, ActionWeights::standard(omega)).dot(&v);
        prop_assert!((grad - fd).abs() < 1e-6 * fd.abs().max(1.0), "{grad} vs {fd}");
    }

    #[test]
    fn action_equals_i_on_the_nehari_manifold(seed in any::<u64>(), omega in 0.1..3.0f64) {
        let u = random_bump(seed, grid());
        let (_, v) = nehari_scale(&u, omega).unwrap();
        let f = functionals(&v, omega).unwrap();
        prop_assert!(f.nehari.abs() < 1e-10 * f.x_norm * f.x_norm);
        prop_assert!((f.action - f.i_omega).abs() < 1e-10 * f.action.abs());
    }

    #[test]
    fn functionals_are_gauge_invariant(seed in any::<u64>(), theta in -4.0..4.0f64, z in -2.0..2.0f64) {
        // fine enough in x that |u|^{p+1} is resolved under fractional shifts
        let u = random_bump(seed, make_grid(16.0, 512, 8, 3.0).unwrap());
        let a = functionals(&u, 0.7).unwrap();
        let b = functionals(&u.rotate(theta).translate_x(z), 0.7).unwrap();
        for (x, y) in [(a.mass, b.mass), (a.hamiltonian, b.hamiltonian), (a.action, b.action), (a.x_norm, b.x_norm)] {
            prop_assert!((x - y).abs() < 1e-9 * x.abs().max(1.0), "{x} vs {y}");
        }
    }
}
