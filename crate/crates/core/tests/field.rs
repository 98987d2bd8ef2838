use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use waveguide_core::field::{apply_multiplier, project_low_modes, Field2D};
use waveguide_core::grid::default_nx;
use waveguide_core::{make_grid, GridSpec};

fn grid() -> GridSpec {
    make_grid(12.0, 64, 8, 3.0).unwrap()
}

fn random_field(seed: u64) -> Field2D {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = grid();
    let values = (0..g.len()).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    Field2D::new(g, values).unwrap()
}

fn project_x_band(u: &Field2D) -> Field2D {
    let cut = 0.5 * std::f64::consts::PI / u.grid().dx();
    apply_multiplier(u, |xi| if xi.abs() < cut { 1.0 } else { 0.0 }, |_| 0.0).unwrap()
}

#[test]
fn grid_arithmetic() {
    let g = make_grid(40.0, 1024, 32, 3.0).unwrap();
    assert_eq!(g.dx(), 0.078125);
    assert_eq!(g.x(0), -40.0);
    assert!((g.dy() - std::f64::consts::PI / 16.0).abs() < 1e-15);
    assert!(make_grid(40.0, 1000, 32, 3.0).is_err());
    assert!(make_grid(40.0, 1024, 31, 3.0).is_err());
    assert!(make_grid(40.0, 1024, 32, 5.0).is_err());
    assert!(make_grid(0.0, 1024, 32, 3.0).is_err());
}

#[test]
fn default_grid_resolution() {
    let g = GridSpec::default_for(3.0, 0.01).unwrap();
    assert_eq!((g.x_halfwidth, g.nx, g.ny), (250.0, 1024, 32));
    assert_eq!(GridSpec::default_for(3.0, 1.0).unwrap().nx, 1024);
    assert_eq!(default_nx(4.0, 5.0, 40.0), 2048);
}

#[test]
fn fractional_derivative_on_a_single_mode() {
    // |D_y| e^{3iy} = 3 e^{3iy}
    let g = grid();
    let u = Field2D::from_fn(g, |x, y| C64::from_polar((-x * x).exp(), 3.0 * y));
    let du = apply_multiplier(&u, |_| 0.0, |n| n.abs() as f64).unwrap();
    assert!(du.sub(&u.scale(3.0)).sup_norm() < 1e-12);
}

#[test]
fn second_derivative_of_a_gaussian() {
    let g = make_grid(12.0, 256, 4, 3.0).unwrap();
    let u = Field2D::from_fn(g, |x, _| C64::new((-x * x).exp(), 0.0));
    let oracle = Field2D::from_fn(g, |x, _| C64::new((2.0 - 4.0 * x * x) * (-x * x).exp(), 0.0));
    let lu = apply_multiplier(&u, |xi| xi * xi, |_| 0.0).unwrap();
    assert!(lu.sub(&oracle).sup_norm() < 1e-10);
}

#[test]
fn rejects_non_finite_input() {
    let g = grid();
    let u = Field2D::from_fn(g, |x, _| C64::new(if x == 0.0 { f64::NAN } else { 0.0 }, 0.0));
    assert!(apply_multiplier(&u, |_| 0.0, |_| 0.0).is_err());
    assert!(Field2D::new(g, vec![C64::new(0.0, 0.0); 3]).is_err());
}

#[test]
fn low_mode_projection() {
    let g = grid();
    let u = Field2D::from_fn(g, |x, y| C64::new((-x * x).exp() * (1.0 + y.cos() + (3.0 * y).sin()), 0.0));
    let v = Field2D::from_fn(g, |x, y| C64::new((-x * x).exp() * (1.0 + y.cos()), 0.0));
    assert!(project_low_modes(&u, 1).sub(&v).sup_norm() < 1e-13);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parseval(seed in any::<u64>()) {
        let u = random_field(seed);
        let phys = u.l2_norm_sq();
        let spec = u.spectrum().weighted_norm_sq(|_, _| 1.0);
        prop_assert!((phys - spec).abs() <= 1e-12 * phys);
    }

    #[test]
    fn unit_symbol_is_identity(seed in any::<u64>()) {
        let u = random_field(seed);
        let id = apply_multiplier(&u, |_| 1.0, |_| 0.0).unwrap();
        let split = apply_multiplier(&u, |_| 0.25, |_| 0.75).unwrap();
        let zero = apply_multiplier(&u, |_| 0.0, |_| 0.0).unwrap();
        prop_assert!(id.sub(&u).sup_norm() < 1e-12);
        prop_assert!(split.sub(&u).sup_norm() < 1e-12);
        prop_assert!(zero.sup_norm() < 1e-12);
    }

    #[test]
    fn real_multipliers_are_self_adjoint(s1 in any::<u64>(), s2 in any::<u64>()) {
        let u = random_field(s1);
        let v = random_field(s2);
        let a = |xi: f64| xi * xi + 0.3 * xi.abs();
        let b = |n: i64| (n.abs() as f64).sqrt();
        let mu = apply_multiplier(&u, a, b).unwrap();
        let mv = apply_multiplier(&v, a, b).unwrap();
        let lhs = mu.inner(&v);
        let rhs = u.inner(&mv);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
    }

    #[test]
    fn translation_round_trip(seed in any::<u64>(), z in -3.0..3.0f64) {
        // band-limited data: the Nyquist mode has no unambiguous shift
        let u = project_x_band(&random_field(seed));
        let back = u.translate_x(z).translate_x(-z);
        prop_assert!(back.sub(&u).sup_norm() < 1e-11);
        prop_assert!((u.translate_x(z).l2_norm() - u.l2_norm()).abs() < 1e-11 * u.l2_norm());
    }

    #[test]
    fn rotation_preserves_norms(seed in any::<u64>(), theta in -7.0..7.0f64) {
        let u = random_field(seed);
        prop_assert!((u.rotate(theta).l2_norm() - u.l2_norm()).abs() < 1e-12 * u.l2_norm());
    }
}
