//! Strang split-step integration of
//! `i ψ_t + ψ_xx - |D_y| ψ + |ψ|^{p-1} ψ = 0`, conservation tracking,
//! orbital distance to the line-soliton orbit and the perturbation
//! experiments built on them.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::{fft1, fft2, Field1D, Field2D};
use crate::functionals::{x_norm, Norms};
use crate::grid::{check_omega, GridSpec};
use crate::soliton::{line_soliton, SolitonParams};
use crate::spectral::growth_rate;

/// Precomputed Strang step for a fixed grid and time step.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: GridSpec,
    dt: f64,
    multiplier: Vec<C64>,
    nonlinear: bool,
}

impl Stepper {
    pub fn new(grid: &GridSpec, dt: f64, dealias: bool) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(invalid(format!("dt must be positive, got {dt}")));
        }
        if dt * grid.max_linear_symbol() >= PI {
            return Err(invalid(format!(
                "dt = {dt} violates the phase-wrap guard dt * max symbol < pi (max symbol {:.1})",
                grid.max_linear_symbol()
            )));
        }
        let (nx, ny) = (grid.nx, grid.ny);
        let mut multiplier = Vec::with_capacity(grid.len());
        for kx in 0..nx {
            let xi = grid.xi(kx);
            let kxs = if kx <= nx / 2 { kx } else { nx - kx };
            for ky in 0..ny {
                let n = grid.mode(ky);
                let kept = !dealias || (3 * kxs <= nx && 3 * n.unsigned_abs() as usize <= ny);
                multiplier.push(if kept {
                    C64::from_polar(1.0, -dt * (xi * xi + n.abs() as f64))
                } else {
                    C64::new(0.0, 0.0)
                });
            }
        }
        Ok(Self { grid: *grid, dt, multiplier, nonlinear: true })
    }

    /// Linear flow only; for diagnostics.
    pub fn without_nonlinearity(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn half_nonlinear(&self, buf: &mut [C64]) {
        let e = self.grid.p - 1.0;
        let h = 0.5 * self.dt;
        for z in buf.iter_mut() {
            let r = z.norm();
            if r > 0.0 {
                *z *= C64::from_polar(1.0, h * r.powf(e));
            }
        }
    }

    /// Advances the raw samples by one step in place.
    pub fn step_in_place(&self, buf: &mut [C64]) {
        if self.nonlinear {
            self.half_nonlinear(buf);
        }
        fft2(buf, self.grid.nx, self.grid.ny, false);
        for (z, m) in buf.iter_mut().zip(&self.multiplier) {
            *z *= m;
        }
        fft2(buf, self.grid.nx, self.grid.ny, true);
        if self.nonlinear {
            self.half_nonlinear(buf);
        }
    }

    pub fn step(&self, u: &Field2D) -> Result<Field2D> {
        if !u.grid().same_discretization(&self.grid) {
            return Err(Error::GridMismatch("field and stepper grids differ".into()));
        }
        let mut buf = u.values().to_vec();
        self.step_in_place(&mut buf);
        Field2D::new(*u.grid(), buf)
    }
}

/// One Strang step: half nonlinear phase, exact linear multiplier
/// `e^{-i dt (ξ² + |n|)}`, half nonlinear phase. A non-finite result is an
/// error; the input is the last good state.
pub fn split_step(u: &Field2D, dt: f64, grid: &GridSpec) -> Result<Field2D> {
    Stepper::new(grid, dt, false)?.step(u)
}

/// Optimal phase and translation of the soliton orbit relative to `ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitalFit {
    pub distance: f64,
    pub theta: f64,
    pub z: f64,
}

/// Correlation `c(z) = ⟨ψ, R(· - z)⟩_X` of the `n = 0` mode with shifted
/// copies of the soliton.
struct Correlation {
    coef: Vec<C64>,
    xi: Vec<f64>,
    nyquist: usize,
    scale: f64,
}

impl Correlation {
    fn new(psi: &Field2D, r: &Field1D) -> Self {
        let g = *psi.grid();
        let n = g.nx;
        let mut a = psi.mode_zero_profile();
        fft1(&mut a, n, false);
        let mut rh: Vec<C64> = r.values().iter().map(|&v| C64::new(v, 0.0)).collect();
        fft1(&mut rh, n, false);
        let xi: Vec<f64> = (0..n).map(|k| g.xi(k)).collect();
        let coef = (0..n).map(|k| a[k] * rh[k].conj() * (xi[k] * xi[k] + 1.0)).collect();
        Self { coef, xi, nyquist: n / 2, scale: 2.0 * PI * g.dx() / n as f64 }
    }

    /// `(c, c', c'')` at `z`.
    fn eval(&self, z: f64) -> (C64, C64, C64) {
        let (mut c, mut d1, mut d2) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
        for (k, (&b, &xi)) in self.coef.iter().zip(&self.xi).enumerate() {
            if k == self.nyquist {
                // the Nyquist mode translates as a cosine
                let (s, co) = (xi * z).sin_cos();
                c += b * co;
                d1 += b * (-xi * s);
                d2 += b * (-xi * xi * co);
            } else {
                let e = C64::from_polar(1.0, xi * z);
                c += b * e;
                d1 += b * e * C64::new(0.0, xi);
                d2 += b * e * (-xi * xi);
            }
        }
        (c * self.scale, d1 * self.scale, d2 * self.scale)
    }

    /// `|c|` at every whole-cell shift `z_j = j dx` with one inverse transform.
    fn on_grid(&self) -> Vec<f64> {
        let n = self.coef.len();
        let mut buf = self.coef.clone();
        fft1(&mut buf, n, true);
        buf.iter().map(|z| (z * (n as f64) * self.scale).norm()).collect()
    }
}

/// `inf_{θ, z} ‖ψ - e^{iθ} R_ω(· - z)‖_X` with its optimizers.
///
/// `θ` is the argument of the `X` inner product at fixed `z`; `z` comes from
/// a scan over grid shifts refined by golden-section search and polished with
/// Newton steps on `d|c|²/dz = 0`.
pub fn orbital_distance(psi: &Field2D, omega: f64) -> Result<OrbitalFit> {
    check_omega(omega)?;
    if !psi.is_finite() {
        return Err(Error::NonFinite("field passed to orbital_distance".into()));
    }
    let g = *psi.grid();
    let params = SolitonParams::new(g.p, omega)?;
    let r = line_soliton(params, &g)?;
    let corr = Correlation::new(psi, &r);
    let dx = g.dx();
    let l = g.x_halfwidth;

    let coarse = corr.on_grid();
    let j = (0..coarse.len()).max_by(|&a, &b| coarse[a].total_cmp(&coarse[b])).unwrap_or(0);
    let mut z0 = j as f64 * dx;
    if z0 > l {
        z0 -= 2.0 * l;
    }

    let objective = |z: f64| corr.eval(z).0.norm();
    let (mut a, mut b) = (z0 - dx, z0 + dx);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    while b - a > 1e-6 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = objective(x1);
        }
    }
    let mut z = 0.5 * (a + b);
    for _ in 0..6 {
        let (c, d1, d2) = corr.eval(z);
        let gz = (c.conj() * d1).re;
        let hz = d1.norm_sqr() + (c.conj() * d2).re;
        if !(hz < 0.0) {
            break;
        }
        let step = gz / hz;
        let candidate = z - step;
        if (candidate - z).abs() > dx || objective(candidate) < objective(z) * (1.0 - 1e-15) {
            break;
        }
        z = candidate;
        if step.abs() < 1e-15 * l {
            break;
        }
    }
    let theta = corr.eval(z).0.arg();
    let fitted = Field2D::lift(&r).translate_x(z).rotate(theta);
    let distance = x_norm(&psi.sub(&fitted));
    Ok(OrbitalFit { distance, theta, z })
}

/// `L²` norm of the `n = ±1` transverse modes. Since `R_ω` has no `y`
/// dependence this equals the `n = ±1` part of `e^{-iωt} ψ - R_ω`.
pub fn mode1_amplitude(psi: &Field2D) -> f64 {
    let g = *psi.grid();
    let ny = g.ny;
    let mut buf = psi.values().to_vec();
    fft1(&mut buf, ny, false);
    let mut s = 0.0;
    for row in buf.chunks(ny) {
        for (k, z) in row.iter().enumerate() {
            if g.mode(k).abs() == 1 {
                s += z.norm_sqr();
            }
        }
    }
    // Parseval in y: ∫|u|² dy = (2π/ny²) Σ|û|²
    (s * g.dx() * 2.0 * PI / (ny * ny) as f64).sqrt()
}

/// `f(R + v) - f(R) - Df(R) v` for `f(u) = |u|^{p-1} u`, where
/// `Df(R) v = p R^{p-1} Re v + i R^{p-1} Im v`.
pub fn nonlinear_remainder(v: &Field2D, omega: f64, grid: &GridSpec) -> Result<Field2D> {
    if !v.grid().same_discretization(grid) {
        return Err(Error::GridMismatch("perturbation is not on the given grid".into()));
    }
    if !v.is_finite() {
        return Err(Error::NonFinite("perturbation".into()));
    }
    let p = grid.p;
    let r = line_soliton(SolitonParams::new(p, omega)?, grid)?;
    let ny = grid.ny;
    let mut out = Vec::with_capacity(grid.len());
    for (ix, row) in v.values().chunks(ny).enumerate() {
        let rv = r.values()[ix];
        let rp = rv.abs().powf(p - 1.0);
        for &z in row {
            let u = C64::new(rv, 0.0) + z;
            let fu = if u.norm() > 0.0 { u * u.norm().powf(p - 1.0) } else { C64::new(0.0, 0.0) };
            let fr = rv * rp;
            let lin = C64::new(p * rp * z.re, rp * z.im);
            out.push(fu - fr - lin);
        }
    }
    Field2D::new(*grid, out)
}

/// The transverse instability mode: the eigenvector of `-J S_ω(1)` with
/// `Re χ = χ_R(x) cos y`, `Im χ = χ_I(x) cos y`, normalized in `X`, together
/// with its growth rate (zero in the stable regime).
pub fn instability_mode(omega: f64, grid: &GridSpec) -> Result<(Field2D, f64)> {
    let spec = growth_rate(grid.p, omega, 1.0, grid)?;
    let re = spec.eigvec_re.values();
    let im = spec.eigvec_im.values();
    let ys: Vec<f64> = grid.y_nodes().iter().map(|y| y.cos()).collect();
    let mut values = Vec::with_capacity(grid.len());
    for ix in 0..grid.nx {
        values.extend(ys.iter().map(|&c| C64::new(re[ix] * c, im[ix] * c)));
    }
    let chi = Field2D::new(*grid, values)?;
    let norm = x_norm(&chi);
    if !(norm > 0.0) {
        return Err(Error::ZeroField);
    }
    Ok((chi.scale(1.0 / norm), spec.lambda0))
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Soliton,
    /// `R_ω + δ χ` with the `X`-normalized transverse mode `χ`.
    SolitonPlusChi { delta: f64 },
    Custom(Field2D),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub grid: GridSpec,
    pub omega: f64,
    pub dt: f64,
    pub t_final: f64,
    pub record_every: usize,
    pub initial: InitialData,
    pub dealias: bool,
    /// Times at which full fields are kept (rounded to the nearest step).
    pub snapshot_times: Vec<f64>,
}

impl EvolutionConfig {
    pub fn new(grid: GridSpec, omega: f64, dt: f64, t_final: f64, initial: InitialData) -> Self {
        Self { grid, omega, dt, t_final, record_every: 10, initial, dealias: false, snapshot_times: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        check_omega(self.omega)?;
        if !(self.dt > 0.0 && self.t_final >= self.dt) {
            return Err(invalid(format!("need 0 < dt <= t_final, got dt = {}, t_final = {}", self.dt, self.t_final)));
        }
        if self.record_every == 0 {
            return Err(invalid("record_every must be at least 1"));
        }
        if self.dt * self.grid.max_linear_symbol() >= PI {
            return Err(invalid("dt violates the phase-wrap guard dt * max symbol < pi"));
        }
        match &self.initial {
            InitialData::SolitonPlusChi { delta } if !(delta.is_finite() && *delta >= 0.0) => {
                Err(invalid("delta must be non-negative"))
            }
            InitialData::Custom(u) if !u.grid().same_discretization(&self.grid) => {
                Err(Error::GridMismatch("custom initial data is not on the configured grid".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Completed,
    /// Mode-1 amplitude exceeded `1e3`.
    BlowUp,
    /// A NaN or infinity appeared; the record ends at the last good state.
    NonFinite,
}

#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub mass_drift: Vec<f64>,
    pub energy_drift: Vec<f64>,
    pub orbital_distance: Vec<f64>,
    pub mode1_amplitude: Vec<f64>,
    pub fitted_growth_rate: Option<f64>,
    /// Linear growth rate of the seeding mode, when one was used.
    pub lambda0: Option<f64>,
    pub termination: Termination,
    pub snapshots: Vec<(f64, Field2D)>,
    pub final_state: Field2D,
}

pub const TRAJECTORY_CSV_HEADER: &str = "t,mass_drift,energy_drift,orbital_distance,mode1_amplitude";

/// Amplitude at which a run is declared blown up.
pub const BLOW_UP_AMPLITUDE: f64 = 1e3;

/// Upper end of the growth-fit window; the lower end is `2δ`.
pub const FIT_WINDOW_TOP: f64 = 1e-2;

impl TrajectoryRecord {
    pub fn csv_lines(&self) -> Vec<String> {
        (0..self.times.len())
            .map(|i| {
                format!(
                    "{:.6},{:.6e},{:.6e},{:.9e},{:.9e}",
                    self.times[i],
                    self.mass_drift[i],
                    self.energy_drift[i],
                    self.orbital_distance[i],
                    self.mode1_amplitude[i]
                )
            })
            .collect()
    }

    /// First recorded time with orbital distance above `eps0`.
    pub fn exit_time(&self, eps0: f64) -> Option<f64> {
        self.times.iter().zip(&self.orbital_distance).find(|(_, &d)| d > eps0).map(|(&t, _)| t)
    }

    pub fn max_mass_drift(&self) -> f64 {
        self.mass_drift.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_energy_drift(&self) -> f64 {
        self.energy_drift.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_orbital_distance(&self) -> f64 {
        self.orbital_distance.iter().fold(0.0, |m, v| m.max(*v))
    }
}

/// Least-squares slope of `log(amplitude)` against `t` over samples with
/// amplitude in `[lo, hi]`; needs at least three samples.
pub fn fit_growth_rate(times: &[f64], amplitude: &[f64], lo: f64, hi: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(amplitude)
        .filter(|(_, &a)| a >= lo && a <= hi)
        .map(|(&t, &a)| (t, a.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn hamiltonian_of(n: &Norms, p: f64) -> f64 {
    0.5 * (n.grad_x + n.transverse) - n.lp / (p + 1.0)
}

fn relative(v: f64, v0: f64) -> f64 {
    if v0 != 0.0 {
        (v - v0) / v0.abs()
    } else {
        v - v0
    }
}

/// Integrates from the configured initial data and records diagnostics
/// every `record_every` steps (and at the final time).
pub fn run_experiment(config: &EvolutionConfig) -> Result<TrajectoryRecord> {
    config.validate()?;
    let g = config.grid;
    let p = g.p;
    let r = Field2D::lift(&line_soliton(SolitonParams::new(p, config.omega)?, &g)?);
    let (u0, delta, lambda0) = match &config.initial {
        InitialData::Soliton => (r.clone(), None, None),
        InitialData::SolitonPlusChi { delta } => {
            let (chi, lambda0) = instability_mode(config.omega, &g)?;
            (r.axpy(*delta, &chi), Some(*delta), Some(lambda0))
        }
        InitialData::Custom(u) => (u.clone(), None, None),
    };
    let stepper = Stepper::new(&g, config.dt, config.dealias)?;
    let steps = (config.t_final / config.dt).round() as usize;
    let snapshot_steps: Vec<usize> =
        config.snapshot_times.iter().map(|t| (t / config.dt).round() as usize).collect();

    let n0 = Norms::of(&u0);
    let (mass0, energy0) = (0.5 * n0.l2, hamiltonian_of(&n0, p));
    let mut rec = TrajectoryRecord {
        times: Vec::new(),
        mass_drift: Vec::new(),
        energy_drift: Vec::new(),
        orbital_distance: Vec::new(),
        mode1_amplitude: Vec::new(),
        fitted_growth_rate: None,
        lambda0,
        termination: Termination::Completed,
        snapshots: Vec::new(),
        final_state: u0.clone(),
    };
    let record = |rec: &mut TrajectoryRecord, t: f64, u: &Field2D| -> Result<f64> {
        let n = Norms::of(u);
        let amp = mode1_amplitude(u);
        rec.times.push(t);
        rec.mass_drift.push(relative(0.5 * n.l2, mass0));
        rec.energy_drift.push(relative(hamiltonian_of(&n, p), energy0));
        rec.orbital_distance.push(orbital_distance(u, config.omega)?.distance);
        rec.mode1_amplitude.push(amp);
        Ok(amp)
    };

    record(&mut rec, 0.0, &u0)?;
    if snapshot_steps.contains(&0) {
        rec.snapshots.push((0.0, u0.clone()));
    }
    let mut buf = u0.into_values();
    let mut last_good = buf.clone();
    for k in 1..=steps {
        stepper.step_in_place(&mut buf);
        let t = k as f64 * config.dt;
        let due = k % config.record_every == 0 || k == steps;
        let snap = snapshot_steps.contains(&k);
        if !(due || snap) {
            continue;
        }
        if buf.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            rec.termination = Termination::NonFinite;
            buf = last_good;
            break;
        }
        let u = Field2D::new(g, buf)?;
        if snap {
            rec.snapshots.push((t, u.clone()));
        }
        let amp = if due { record(&mut rec, t, &u)? } else { 0.0 };
        buf = u.into_values();
        last_good.copy_from_slice(&buf);
        if amp > BLOW_UP_AMPLITUDE {
            rec.termination = Termination::BlowUp;
            break;
        }
    }
    rec.final_state = Field2D::new(g, buf)?;
    if let Some(d) = delta {
        rec.fitted_growth_rate = fit_growth_rate(&rec.times, &rec.mode1_amplitude, 2.0 * d, FIT_WINDOW_TOP);
    }
    Ok(rec)
}

/// `‖e^{-iωt} ψ(t) - R_ω‖_X` at `t = t_final` starting from `R_ω`.
pub fn standing_wave_error(omega: f64, grid: &GridSpec, dt: f64, t_final: f64) -> Result<f64> {
    let r = Field2D::lift(&line_soliton(SolitonParams::new(grid.p, omega)?, grid)?);
    let stepper = Stepper::new(grid, dt, false)?;
    let steps = (t_final / dt).round() as usize;
    let mut buf = r.values().to_vec();
    for _ in 0..steps {
        stepper.step_in_place(&mut buf);
    }
    let u = Field2D::new(*grid, buf)?.rotate(-omega * steps as f64 * dt);
    Ok(x_norm(&u.sub(&r)))
}
