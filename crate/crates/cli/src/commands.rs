use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;
use waveguide_core::evolution::{
    instability_mode, run_experiment, EvolutionConfig, InitialData, Termination, TRAJECTORY_CSV_HEADER,
};
use waveguide_core::field::Field2D;
use waveguide_core::functionals::x_norm;
use waveguide_core::groundstate::{find_omega_star_in, m_omega, ScanRow, GAP_TOL, SCAN_CSV_HEADER};
use waveguide_core::spectral::{build_operator, growth_rate, spectrum_rows, threshold_scan, Branch, SPECTRUM_CSV_HEADER};
use waveguide_core::{line_soliton, omega_p, GridSpec, SolitonParams};

use crate::config::RunConfig;
use crate::output::RunOutput;
use crate::CliError;

/// Orbital distance at which an evolution counts as having left the orbit.
const EXIT_RADIUS: f64 = 0.05;

fn collect<T: Send>(items: Vec<Result<T, CliError>>) -> Result<Vec<T>, CliError> {
    items.into_iter().collect()
}

fn default_range(cfg: &RunConfig, wp: f64) -> (f64, f64) {
    (cfg.omega_min.unwrap_or(wp / 4.0), cfg.omega_max.unwrap_or(4.0 * wp))
}

pub fn spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    let omega = cfg.omega.unwrap_or(1.0);
    let g = cfg.grid(omega)?;
    let mut out = RunOutput::create(cfg)?;
    let mut rows = spectrum_rows(cfg.p, omega, 0.0, cfg.k, &g)?;
    rows.extend(spectrum_rows(cfg.p, omega, 1.0, cfg.k, &g)?);
    out.lines("l_plus.csv", SPECTRUM_CSV_HEADER, rows.iter().map(|r| r.csv_line()))?;

    // λ(a) is positive on (0, ν) with -ν the bottom of L_+ at a = 0
    let nu = -rows[0].eigenvalue;
    let shifts: Vec<f64> = (0..cfg.a_steps).map(|i| nu.max(0.0) * (i + 1) as f64 / (cfg.a_steps + 1) as f64).collect();
    let curve = collect(
        shifts
            .par_iter()
            .map(|&a| {
                let s = growth_rate(cfg.p, omega, a, &g)?;
                Ok(format!("{omega},{a},{:.12e},{:.3e}", s.lambda0, s.residual))
            })
            .collect(),
    )?;
    out.lines("growth.csv", "omega,a,lambda0,residual", curve)?;
    let at_one = growth_rate(cfg.p, omega, 1.0, &g)?;
    let summary = json!({
        "omega": omega,
        "omega_p": omega_p(cfg.p)?,
        "grid": g,
        "l_plus_bottom": rows[0].eigenvalue,
        "unstable_band_edge": nu,
        "lambda0_at_a1": at_one.lambda0,
    });
    out.json("spectrum.json", &summary)?;
    out.finish(cfg, summary)
}

pub fn threshold(cfg: &RunConfig) -> Result<(), CliError> {
    let wp = omega_p(cfg.p)?;
    let (lo, hi) = default_range(cfg, wp);
    let g = cfg.grid_for_range(lo, hi)?;
    let mut out = RunOutput::create(cfg)?;
    let found = threshold_scan(cfg.p, &g, (lo, hi), cfg.tol.unwrap_or(1e-5))?;
    let omegas = RunConfig { omega_steps: Some(cfg.omega_steps.unwrap_or(10)), omega_min: Some(lo), omega_max: Some(hi), ..cfg.clone() }
        .frequencies(wp)?;
    let rows = collect(
        omegas
            .par_iter()
            .map(|&w| {
                let bottom = build_operator(cfg.p, w, 1.0, Branch::Plus, &g)?.eigenvalues()?[0];
                let lambda0 = growth_rate(cfg.p, w, 1.0, &g)?.lambda0;
                Ok(format!("{w},{bottom:.12e},{lambda0:.12e}"))
            })
            .collect(),
    )?;
    out.lines("threshold_scan.csv", "omega,l_plus_1_bottom,lambda0", rows)?;
    let summary = json!({
        "p": cfg.p,
        "omega_p_numeric": found,
        "omega_p_exact": wp,
        "relative_error": (found - wp).abs() / wp,
        "range": [lo, hi],
        "grid": g,
    });
    out.json("threshold.json", &summary)?;
    out.finish(cfg, summary)
}

pub fn groundstate(cfg: &RunConfig) -> Result<(), CliError> {
    let omegas = cfg.frequencies(2.0 * omega_p(cfg.p)?)?;
    let (lo, hi) = omegas.iter().fold((f64::MAX, 0.0_f64), |(a, b), &w| (a.min(w), b.max(w)));
    let g = cfg.grid_for_range(lo, hi)?;
    let mut out = RunOutput::create(cfg)?;
    let results = collect(
        omegas
            .par_iter()
            .map(|&w| {
                let gs = m_omega(cfg.p, w, &g)?;
                Ok((ScanRow::from_result(cfg.p, w, &gs)?, gs))
            })
            .collect(),
    )?;
    for (i, (row, gs)) in results.iter().enumerate() {
        out.field(&format!("gs_{i:03}.wgf"), &gs.q)?;
        out.json(&format!("gs_{i:03}.json"), &gs.summary(row.omega))?;
    }
    out.lines("scan.csv", SCAN_CSV_HEADER, results.iter().map(|(r, _)| r.csv_line()))?;
    let unconverged: Vec<f64> = results.iter().filter(|(_, gs)| !gs.converged).map(|(r, _)| r.omega).collect();
    let summary = json!({ "p": cfg.p, "grid": g, "frequencies": omegas.len(), "unconverged": unconverged });
    out.finish(cfg, summary)?;
    if unconverged.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("ground state did not converge at omega = {unconverged:?}")))
    }
}

pub fn omegastar(cfg: &RunConfig) -> Result<(), CliError> {
    let wp = omega_p(cfg.p)?;
    let range = default_range(cfg, wp);
    let g = cfg.grid(wp)?;
    let mut out = RunOutput::create(cfg)?;
    let star = find_omega_star_in(cfg.p, &g, range, cfg.tol.unwrap_or(1e-3), GAP_TOL)?;
    let summary = json!({
        "p": cfg.p,
        "omega_star": star.omega_star,
        "omega_p": wp,
        "omega_star_le_omega_p": star.omega_star <= wp + cfg.tol.unwrap_or(1e-3),
        "gap_tol": GAP_TOL,
        "range": [range.0, range.1],
        "grid": g,
    });
    out.json("omegastar.json", &json!({ "result": summary, "evaluations": star.evaluations }))?;
    out.finish(cfg, summary)
}

/// Smooth seeded perturbation with `‖η‖_X = 1`, localized like `R_ω`.
fn smooth_noise(seed: u64, omega: f64, g: &GridSpec) -> Result<Field2D, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: Vec<(f64, f64)> = (0..12).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let s = omega.sqrt();
    let eta = Field2D::from_fn(*g, |x, y| {
        let env = (-0.5 * (s * x).powi(2)).exp();
        let mut z = C64::new(0.0, 0.0);
        for (i, &(a, b)) in c.iter().enumerate() {
            let (m, n) = ((i / 4) as i32, (i % 4) as f64);
            let w = env * (s * x).powi(m) * (n * y + a).cos();
            z += C64::new(a * w, b * w);
        }
        z
    });
    let norm = x_norm(&eta);
    Ok(eta.scale(1.0 / norm))
}

pub fn evolve(cfg: &RunConfig) -> Result<(), CliError> {
    let omega = cfg.omega.unwrap_or(2.0 * omega_p(cfg.p)?);
    let g = cfg.grid(omega)?;
    let mut out = RunOutput::create(cfg)?;
    let (initial, lambda0) = if cfg.noise > 0.0 {
        let r = Field2D::lift(&line_soliton(SolitonParams::new(cfg.p, omega)?, &g)?);
        let (chi, lambda0) = instability_mode(omega, &g)?;
        let u = r.axpy(cfg.delta, &chi).axpy(cfg.noise, &smooth_noise(cfg.seed, omega, &g)?);
        (InitialData::Custom(u), Some(lambda0))
    } else if cfg.delta > 0.0 {
        (InitialData::SolitonPlusChi { delta: cfg.delta }, None)
    } else {
        (InitialData::Soliton, None)
    };
    let mut ecfg = EvolutionConfig::new(g, omega, cfg.dt, cfg.t_final, initial);
    ecfg.record_every = cfg.record_every;
    ecfg.dealias = cfg.dealias;
    let rec = run_experiment(&ecfg)?;
    out.lines("trajectory.csv", TRAJECTORY_CSV_HEADER, rec.csv_lines())?;
    out.field("final.wgf", &rec.final_state)?;
    let summary = json!({
        "p": cfg.p,
        "omega": omega,
        "delta": cfg.delta,
        "noise": cfg.noise,
        "seed": cfg.seed,
        "grid": g,
        "termination": rec.termination,
        "recorded_steps": rec.times.len(),
        "final_time": rec.times.last(),
        "lambda0": rec.lambda0.or(lambda0),
        "fitted_growth_rate": rec.fitted_growth_rate,
        "max_mass_drift": rec.max_mass_drift(),
        "max_energy_drift": rec.max_energy_drift(),
        "max_orbital_distance": rec.max_orbital_distance(),
        "exit_radius": EXIT_RADIUS,
        "exit_time": rec.exit_time(EXIT_RADIUS),
    });
    out.json("trajectory.json", &summary)?;
    out.finish(cfg, summary)?;
    match rec.termination {
        Termination::Completed => Ok(()),
        t => Err(CliError::Numerical(format!("evolution stopped early: {t:?}"))),
    }
}
