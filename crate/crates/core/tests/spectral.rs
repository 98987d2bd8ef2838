use faer::Mat;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use waveguide_core::field::Field1D;
use waveguide_core::soliton::*;
use waveguide_core::spectral::*;
use waveguide_core::{make_grid, Error, GridSpec};

fn grid() -> GridSpec {
    make_grid(40.0, 512, 2, 3.0).unwrap()
}

fn overlap(a: &Field1D, b: &Field1D) -> f64 {
    a.dot(b).abs() / (a.l2_norm() * b.l2_norm())
}

#[test]
fn negative_direction_of_l_plus() {
    for (p, omega) in [(2.0, 0.2), (3.0, 1.0), (4.0, 5.0)] {
        let g = GridSpec::default_for(p, omega).unwrap();
        let op = build_operator(p, omega, 0.0, Branch::Plus, &g).unwrap();
        let e = &lowest_eigenpairs(&op, 1).unwrap()[0];
        let target = -omega / omega_p(p).unwrap();
        assert!((e.value - target).abs() < 1e-6 * target.abs(), "p={p} omega={omega}: {}", e.value);
        let phi = soliton_power_eigenfunction(SolitonParams::new(p, omega).unwrap(), &g).unwrap();
        assert!(overlap(&e.vector, &phi) > 0.9999);
    }
}

#[test]
fn kernels_of_both_operators() {
    let g = grid();
    let s = SolitonParams::new(3.0, 1.0).unwrap();
    let minus = build_operator(3.0, 1.0, 0.0, Branch::Minus, &g).unwrap();
    let r = line_soliton(s, &g).unwrap();
    assert!(minus.apply(&r).l2_norm() / r.l2_norm() < 1e-8);
    let pairs = lowest_eigenpairs(&minus, 2).unwrap();
    assert!(pairs[0].value.abs() < 1e-8);
    assert!(pairs[1].value > 0.1);
    assert!(overlap(&pairs[0].vector, &r) > 0.9999);

    let plus = build_operator(3.0, 1.0, 0.0, Branch::Plus, &g).unwrap();
    let dr = soliton_x_derivative(s, &g).unwrap();
    assert!(plus.apply(&dr).l2_norm() < 1e-7);
    let pairs = lowest_eigenpairs(&plus, 2).unwrap();
    assert!(pairs[1].value.abs() < 1e-7);
    assert!(overlap(&pairs[1].vector, &dr) > 0.9999);
}

#[test]
fn eigenvectors_are_normalized_in_the_continuum_sense() {
    let g = grid();
    let op = build_operator(3.0, 1.0, 0.0, Branch::Plus, &g).unwrap();
    for e in lowest_eigenpairs(&op, 3).unwrap() {
        assert!((e.vector.l2_norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn mode_shift_moves_the_spectrum() {
    let g = grid();
    let a0 = build_operator(3.0, 1.0, 0.0, Branch::Plus, &g).unwrap();
    let a1 = build_operator(3.0, 1.0, 1.0, Branch::Plus, &g).unwrap();
    assert!((lowest_eigenpairs(&a1, 1).unwrap()[0].value + 2.0).abs() < 2e-6);
    let e0 = a0.eigenvalues().unwrap();
    let e1 = a1.eigenvalues().unwrap();
    assert!(e0.iter().zip(&e1).all(|(x, y)| (y - x - 1.0).abs() < 1e-9));
    assert!(a0.asymmetry() < 1e-12);
}

#[test]
fn bound_states_sit_below_the_continuum() {
    // p = 3: L_+ has eigenvalues -3ω and 0 below ω; L_- only 0
    let g = grid();
    let plus = discrete_spectrum(&build_operator(3.0, 1.0, 0.0, Branch::Plus, &g).unwrap()).unwrap();
    let minus = discrete_spectrum(&build_operator(3.0, 1.0, 0.0, Branch::Minus, &g).unwrap()).unwrap();
    assert_eq!(plus.len(), 2, "{plus:?}");
    assert_eq!(minus.len(), 1, "{minus:?}");
}

#[test]
fn rejects_bad_inputs() {
    let g = grid();
    assert!(build_operator(3.0, 0.0, 0.0, Branch::Plus, &g).is_err());
    assert!(build_operator(3.0, 1.0, -1.0, Branch::Plus, &g).is_err());
    let op = build_operator(3.0, 1.0, 0.0, Branch::Plus, &g).unwrap();
    assert!(lowest_eigenpairs(&op, 0).is_err());
    assert!(lowest_eigenpairs(&op, 513).is_err());
}

#[test]
fn growth_rate_unstable_and_stable() {
    let g = grid();
    let unstable = growth_rate(3.0, 1.0, 1.0, &g).unwrap();
    assert!(unstable.lambda0 > 1.0);
    assert!(unstable.residual < 1e-8);
    assert!(unstable.non_real.is_empty());
    let stable = growth_rate(3.0, 0.2, 1.0, &g).unwrap();
    assert!(stable.lambda0 < 1e-6);
    let kernel = growth_rate(3.0, 1.0, 3.0, &g).unwrap();
    assert!(kernel.lambda0 < 1e-5);
}

#[test]
fn growth_rate_agrees_with_the_symmetrized_propagator() {
    // The propagator diagonalizes L_-^{1/2} L_+ L_-^{1/2} with a symmetric
    // solver, so its long-time growth is an independent estimate of λ₀.
    let g = grid();
    let lambda0 = growth_rate(3.0, 1.0, 1.0, &g).unwrap().lambda0;
    let prop = LinearizedPropagator::new(3.0, 1.0, 1, &g).unwrap();
    let v = Field1D::from_fn(g, |x| (-(x - 0.3) * (x - 0.3)).exp());
    let zero = Field1D::zeros(g);
    let (r1, i1) = prop.propagate(&v, &zero, 10.0).unwrap();
    let (r2, i2) = prop.propagate(&v, &zero, 12.0).unwrap();
    let n1 = (r1.l2_norm().powi(2) + i1.l2_norm().powi(2)).sqrt();
    let n2 = (r2.l2_norm().powi(2) + i2.l2_norm().powi(2)).sqrt();
    let slope = (n2 / n1).ln() / 2.0;
    assert!((slope - lambda0).abs() < 1e-6 * lambda0, "{slope} vs {lambda0}");
}

#[test]
fn eigenvector_grows_exponentially() {
    let g = grid();
    let b = growth_rate(3.0, 1.0, 1.0, &g).unwrap();
    let (re, im) = propagate_linearized((&b.eigvec_re, &b.eigvec_im), 1, 1.0, 3.0, 1.0, &g).unwrap();
    let f = b.lambda0.exp();
    let err = (re.sub(&b.eigvec_re.scale(f)).l2_norm().powi(2) + im.sub(&b.eigvec_im.scale(f)).l2_norm().powi(2)).sqrt();
    let norm = (b.eigvec_re.l2_norm().powi(2) + b.eigvec_im.l2_norm().powi(2)).sqrt() * f;
    assert!(err < 1e-6 * norm);
}

#[test]
fn propagator_at_time_zero_is_identity() {
    let g = make_grid(30.0, 128, 2, 3.0).unwrap();
    let v = Field1D::from_fn(g, |x| (-x * x).exp());
    let w = Field1D::from_fn(g, |x| x * (-x * x).exp());
    for n in [0, 1] {
        let (a, b) = propagate_linearized((&v, &w), n, 0.0, 3.0, 1.0, &g).unwrap();
        assert!(a.sub(&v).sup_norm() < 1e-12 && b.sub(&w).sup_norm() < 1e-12);
    }
    assert!(propagate_linearized((&v, &w), 1, -1.0, 3.0, 1.0, &g).is_err());
}

#[test]
fn dense_and_modal_routes_agree_on_a_stable_mode() {
    // ω = 0.2 < ω_p, so n = 1 takes the modal route
    let g = make_grid(40.0, 128, 2, 3.0).unwrap();
    let v = Field1D::from_fn(g, |x| (-x * x).exp());
    let w = Field1D::from_fn(g, |x| 0.5 * x * (-x * x).exp());
    let (a, b) = propagate_linearized((&v, &w), 1, 0.8, 3.0, 0.2, &g).unwrap();
    // dense reference: expm of the full block with shift 1
    let plus = build_operator(3.0, 0.2, 1.0, Branch::Plus, &g).unwrap().matrix;
    let minus = build_operator(3.0, 0.2, 1.0, Branch::Minus, &g).unwrap().matrix;
    let n = g.nx;
    let block = Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) => 0.8 * minus[(i, j - n)],
        (false, true) => -0.8 * plus[(i - n, j)],
        _ => 0.0,
    });
    let e = expm(&block);
    let x: Vec<f64> = v.values().iter().chain(w.values()).cloned().collect();
    let out: Vec<f64> = (0..2 * n).map(|i| (0..2 * n).map(|j| e[(i, j)] * x[j]).sum()).collect();
    let ra = Field1D::new(g, out[..n].to_vec()).unwrap();
    let rb = Field1D::new(g, out[n..].to_vec()).unwrap();
    assert!(a.sub(&ra).sup_norm() < 1e-9);
    assert!(b.sub(&rb).sup_norm() < 1e-9);
}

#[test]
fn threshold_scan_recovers_the_critical_frequency() {
    let g = make_grid(40.0, 512, 2, 3.0).unwrap();
    let w = threshold_scan(3.0, &g, (0.1, 1.0), 1e-4).unwrap();
    assert!((w - 1.0 / 3.0).abs() < 1e-3);
    assert!(matches!(threshold_scan(3.0, &g, (0.5, 1.0), 1e-4), Err(Error::NoBracket { .. })));
}

#[test]
fn spectrum_rows_have_small_residuals() {
    let rows = spectrum_rows(3.0, 1.0, 0.0, 3, &grid()).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.residual < 1e-9));
    assert!(rows[0].csv_line().starts_with("3,1,0,0,-3.0000000"));
    assert_eq!(SPECTRUM_CSV_HEADER.split(',').count(), 6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn semigroup_growth_bound(seed in any::<u64>()) {
        let g = make_grid(40.0, 256, 2, 3.0).unwrap();
        let lambda0 = growth_rate(3.0, 1.0, 1.0, &g).unwrap().lambda0;
        let prop = LinearizedPropagator::new(3.0, 1.0, 1, &g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let re = Field1D::from_fn(g, |x| (c[0] + c[1] * x) * (-0.3 * x * x).exp());
        let im = Field1D::from_fn(g, |x| (c[2] + c[3] * x * x) * (-0.2 * x * x).exp());
        let n0 = (re.l2_norm().powi(2) + im.l2_norm().powi(2)).sqrt();
        for k in 0..=10 {
            let t = 0.5 * k as f64;
            let (a, b) = prop.propagate(&re, &im, t).unwrap();
            let nt = (a.l2_norm().powi(2) + b.l2_norm().powi(2)).sqrt();
            prop_assert!(nt <= 2.0 * ((lambda0 + 0.01) * t).exp() * n0, "t={t}: {nt} vs {n0}");
        }
    }

    #[test]
    fn instability_for_every_sub_critical_shift(frac in 0.05..0.95f64) {
        let g = make_grid(40.0, 256, 2, 3.0).unwrap();
        let nu = 1.0 / omega_p(3.0).unwrap();
        let b = growth_rate(3.0, 1.0, frac * nu, &g).unwrap();
        prop_assert!(b.lambda0 > 0.0);
        prop_assert!(b.residual < 1e-8);
    }
}
