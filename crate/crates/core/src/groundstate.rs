//! Least-action standing waves on the cylinder.
//!
//! Minimizers of `S_ω` on the Nehari manifold are computed by a gradient
//! flow preconditioned with `G = -∂_xx + β|D_y| + ω` and projected back to
//! the manifold after every step. With unit step the update is
//! `u ↦ t · G^{-1}(|u|^{p-1}u)`, so saddle points with more than one
//! unstable direction (the line soliton above threshold) repel the iteration.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::{apply_complex_multiplier, Field1D, Field2D};
use crate::functionals::{action_gradient, ActionWeights, Norms};
use crate::grid::{check_exponent, check_omega, GridSpec};
use crate::lobpcg::Lobpcg;
use crate::soliton::{line_soliton, m_line, omega_p, SolitonParams};
use crate::spectral::{build_operator, Branch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symmetry {
    pub even_in_x: bool,
    pub real_valued: bool,
}

impl Default for Symmetry {
    fn default() -> Self {
        Self { even_in_x: true, real_valued: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundStateProblem {
    pub grid: GridSpec,
    pub omega: f64,
    /// Coefficient `β` of `‖|D_y|^{1/2}u‖²` in the action; `1` for `S_ω`.
    pub transverse_weight: f64,
    pub symmetry: Symmetry,
    pub max_iters: usize,
    pub step: f64,
    pub tol_residual: f64,
}

impl GroundStateProblem {
    pub fn new(grid: GridSpec, omega: f64) -> Result<Self> {
        let problem = Self {
            grid,
            omega,
            transverse_weight: 1.0,
            symmetry: Symmetry::default(),
            max_iters: 20_000,
            step: 1.0,
            tol_residual: 1e-9,
        };
        problem.validate()?;
        Ok(problem)
    }

    /// The `x`-rescaled problem whose minimum is `m̃_ω`: `β = 1/ω`, unit frequency.
    pub fn rescaled(grid: GridSpec, omega: f64) -> Result<Self> {
        check_omega(omega)?;
        let mut problem = Self::new(grid, 1.0)?;
        problem.transverse_weight = 1.0 / omega;
        Ok(problem)
    }

    pub fn weights(&self) -> ActionWeights {
        ActionWeights { transverse: self.transverse_weight, omega: self.omega }
    }

    pub fn validate(&self) -> Result<()> {
        check_omega(self.omega)?;
        if !(self.step > 0.0 && self.step <= 1.0) {
            return Err(invalid(format!("step must lie in (0, 1], got {}", self.step)));
        }
        if !(self.tol_residual > 0.0) {
            return Err(invalid("tol_residual must be positive"));
        }
        if !(self.transverse_weight > 0.0 && self.transverse_weight.is_finite()) {
            return Err(invalid("transverse weight must be positive"));
        }
        if self.max_iters == 0 {
            return Err(invalid("max_iters must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct GroundStateResult {
    pub q: Field2D,
    pub m_omega: f64,
    /// `|N(q)| / ‖q‖_X²`
    pub nehari_residual: f64,
    /// `‖S'(q)‖₂`
    pub el_residual: f64,
    pub iterations: usize,
    /// `‖|D_y|^{1/2} q‖₂²`
    pub y_dependence: f64,
    pub converged: bool,
}

/// Serializable summary of a [`GroundStateResult`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundStateSummary {
    pub p: f64,
    pub omega: f64,
    pub m_omega: f64,
    pub nehari_residual: f64,
    pub el_residual: f64,
    pub y_dependence: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl GroundStateResult {
    pub fn summary(&self, omega: f64) -> GroundStateSummary {
        GroundStateSummary {
            p: self.q.grid().p,
            omega,
            m_omega: self.m_omega,
            nehari_residual: self.nehari_residual,
            el_residual: self.el_residual,
            y_dependence: self.y_dependence,
            iterations: self.iterations,
            converged: self.converged,
        }
    }
}

fn nehari_scale_weighted(u: &Field2D, w: ActionWeights) -> Result<(f64, Field2D, Norms)> {
    if u.is_zero() {
        return Err(Error::ZeroField);
    }
    let p = u.grid().p;
    let n = Norms::of(u);
    if !(n.lp > 0.0) {
        return Err(Error::ZeroField);
    }
    let t = (w.quadratic(&n) / n.lp).powf(1.0 / (p - 1.0));
    let scaled = u.scale(t);
    let t2 = t * t;
    let norms = Norms {
        grad_x: n.grad_x * t2,
        transverse: n.transverse * t2,
        l2: n.l2 * t2,
        lp: n.lp * t.powf(p + 1.0),
    };
    Ok((t, scaled, norms))
}

/// `t(u) = (quadratic form / ‖u‖_{p+1}^{p+1})^{1/(p-1)}`, the unique `t > 0`
/// with `N_ω(t u) = 0`, together with `t u`.
pub fn nehari_scale(u: &Field2D, omega: f64) -> Result<(f64, Field2D)> {
    check_omega(omega)?;
    let (t, v, _) = nehari_scale_weighted(u, ActionWeights::standard(omega))?;
    Ok((t, v))
}

fn peak_index(u: &Field2D) -> (usize, usize) {
    let ny = u.grid().ny;
    let (mut best, mut at) = (-1.0, 0);
    for (i, z) in u.values().iter().enumerate() {
        let a = z.norm_sqr();
        if a > best {
            best = a;
            at = i;
        }
    }
    (at / ny, at % ny)
}

fn roll_y(u: &Field2D, cells: i64) -> Field2D {
    if cells == 0 {
        return u.clone();
    }
    let ny = u.grid().ny as i64;
    let mut values = u.values().to_vec();
    for (row_out, row_in) in values.chunks_mut(ny as usize).zip(u.values().chunks(ny as usize)) {
        for iy in 0..ny {
            row_out[iy as usize] = row_in[(iy - cells).rem_euclid(ny) as usize];
        }
    }
    Field2D::from_raw(*u.grid(), values)
}

/// Quotients the symmetry group: peak moved to `(0, 0)` by whole cells,
/// global phase removed, then the optional restrictions.
fn gauge_fix(u: &Field2D, sym: Symmetry, recenter_y: bool) -> Field2D {
    let g = *u.grid();
    let (ix, iy) = peak_index(u);
    let mut v = u.roll_x(g.nx as i64 / 2 - ix as i64);
    if recenter_y {
        v = roll_y(&v, g.ny as i64 / 2 - iy as i64);
    }
    let (ix, iy) = peak_index(&v);
    let phase = v.at(ix, iy).arg();
    v = v.rotate(-phase);
    if sym.real_valued {
        v = v.real_part();
    }
    if sym.even_in_x {
        v = v.add(&v.reflect_x()).scale(0.5);
    }
    v
}

/// Relative accuracy of an action evaluation (FFT plus grid sums): changes
/// below it are not descent information.
const ACTION_SLACK: f64 = 1e-12;

/// Nehari-projected preconditioned gradient descent from `initial`.
pub fn minimize_action(problem: &GroundStateProblem, initial: &Field2D) -> Result<GroundStateResult> {
    problem.validate()?;
    if !initial.grid().same_discretization(&problem.grid) || initial.grid().p != problem.grid.p {
        return Err(Error::GridMismatch("initial field is not on the problem grid".into()));
    }
    if !initial.is_finite() {
        return Err(Error::NonFinite("initial field".into()));
    }
    let w = problem.weights();
    let p = problem.grid.p;
    let sym = problem.symmetry;
    let precondition = |g: &Field2D| apply_complex_multiplier(g, |xi, n| C64::new(1.0 / w.symbol(xi, n), 0.0));

    let start = gauge_fix(initial, sym, true);
    let (_, mut u, mut norms) = nehari_scale_weighted(&start, w)?;
    let mut action = w.action(&norms, p);
    let mut grad = action_gradient(&u, w);
    let mut residual = grad.l2_norm();
    let mut tau = problem.step;
    let mut iterations = 0;

    while iterations < problem.max_iters && residual > problem.tol_residual {
        iterations += 1;
        let direction = precondition(&grad);
        let mut accepted = None;
        while tau > 1e-12 {
            // y-structure is only worth recentering when it is above roundoff
            let recenter_y = norms.transverse > 1e-20 * norms.l2;
            let trial = gauge_fix(&u.axpy(-tau, &direction), sym, recenter_y);
            if !trial.is_finite() || trial.is_zero() {
                tau *= 0.5;
                continue;
            }
            let (_, v, vn) = nehari_scale_weighted(&trial, w)?;
            let a = w.action(&vn, p);
            if a <= action + ACTION_SLACK * action.abs() {
                accepted = Some((v, vn, a));
                break;
            }
            tau *= 0.5;
        }
        let Some((v, vn, a)) = accepted else {
            // no descent left above roundoff
            break;
        };
        debug_assert!(a <= action + ACTION_SLACK * action.abs());
        u = v;
        norms = vn;
        action = a;
        grad = action_gradient(&u, w);
        residual = grad.l2_norm();
        tau = (2.0 * tau).min(problem.step);
    }

    if sym.real_valued && u.values()[u.grid().len() / 2 + u.grid().ny / 2].re < 0.0 {
        u = u.scale(-1.0);
    }
    let quad = w.quadratic(&norms);
    Ok(GroundStateResult {
        m_omega: w.i_functional(&norms, p),
        nehari_residual: (quad - norms.lp).abs() / norms.x_norm_sq(),
        el_residual: residual,
        iterations,
        y_dependence: norms.transverse,
        converged: residual <= problem.tol_residual,
        q: u,
    })
}

/// `R_ω(x) (1 + ε cos y)`.
pub fn perturbed_line_start(p: f64, omega: f64, grid: &GridSpec, eps: f64) -> Result<Field2D> {
    let r = line_soliton(SolitonParams::new(p, omega)?, grid)?;
    Ok(Field2D::lift_with(&r, |y| C64::new(1.0 + eps * y.cos(), 0.0)))
}

/// Default transverse profile of the trial function, `1 + cos(y)/2`.
pub fn default_rho(grid: &GridSpec) -> Vec<f64> {
    grid.y_nodes().iter().map(|y| 1.0 + 0.5 * y.cos()).collect()
}

/// High-frequency trial function
/// `ψ(x, y) = ρ(y)^{1/(p-1)} R_1(√ρ(y) x)` for `ρ` sampled at the `y`-nodes
/// and renormalized so that `∫ ρ^{(p+3)/(2(p-1))} dy = 2π`.
///
/// Returns `ψ` and the deficit `2π - ∫ ρ^{(5-p)/(2(p-1))} dy`.
pub fn trial_function(p: f64, grid: &GridSpec, rho: &[f64]) -> Result<(Field2D, f64)> {
    trial_function_at(p, 1.0, grid, rho)
}

/// The trial function in the original variables at frequency `ω`:
/// `ω^{1/(p-1)} ψ(√ω x, y) = R_{ωρ(y)}(x)`.
pub fn trial_function_at(p: f64, omega: f64, grid: &GridSpec, rho: &[f64]) -> Result<(Field2D, f64)> {
    check_exponent(p)?;
    check_omega(omega)?;
    if rho.len() != grid.ny {
        return Err(Error::GridMismatch(format!("rho has {} samples, grid has ny = {}", rho.len(), grid.ny)));
    }
    if rho.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(invalid("rho must be positive"));
    }
    let first = rho[0];
    if rho.iter().all(|r| (r - first).abs() <= 1e-14 * first) {
        return Err(invalid("rho must not be constant"));
    }
    let dy = grid.dy();
    let e_norm = (p + 3.0) / (2.0 * (p - 1.0));
    let total: f64 = rho.iter().map(|r| r.powf(e_norm)).sum::<f64>() * dy;
    let c = (2.0 * std::f64::consts::PI / total).powf(1.0 / e_norm);
    let rho: Vec<f64> = rho.iter().map(|r| r * c).collect();
    let e_def = (5.0 - p) / (2.0 * (p - 1.0));
    let deficit = 2.0 * std::f64::consts::PI - rho.iter().map(|r| r.powf(e_def)).sum::<f64>() * dy;

    let profiles: Vec<SolitonParams> =
        rho.iter().map(|r| SolitonParams::new(p, omega * r)).collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(grid.len());
    for ix in 0..grid.nx {
        let x = grid.x(ix);
        values.extend(profiles.iter().map(|s| C64::new(s.value(x), 0.0)));
    }
    Ok((Field2D::new(*grid, values)?, deficit))
}

/// Lowest-action result from the line-soliton start and, near and above
/// `ω_p`, from the trial-function start.
pub fn ground_state(problem: &GroundStateProblem) -> Result<GroundStateResult> {
    let g = problem.grid;
    let p = g.p;
    let mut best = minimize_action(problem, &perturbed_line_start(p, problem.omega, &g, 0.1)?)?;
    // ω/β is the physical frequency in both the original and rescaled forms
    if problem.omega / problem.transverse_weight >= 0.5 * omega_p(p)? {
        let (trial, _) = trial_function_at(p, problem.omega, &g, &default_rho(&g))?;
        let other = minimize_action(problem, &trial)?;
        let better = match (other.converged, best.converged) {
            (true, false) => true,
            (false, true) => false,
            _ => other.m_omega < best.m_omega,
        };
        if better {
            best = other;
        }
    }
    Ok(best)
}

/// `m_ω` with the default multi-start policy.
pub fn m_omega(p: f64, omega: f64, grid: &GridSpec) -> Result<GroundStateResult> {
    ground_state(&GroundStateProblem::new(grid.with_exponent(p)?, omega)?)
}

/// Grid on which the rescaled problem is the same discrete problem as the
/// original one on `grid`: half-width multiplied by `√ω`.
pub fn rescaled_grid(grid: &GridSpec, omega: f64) -> Result<GridSpec> {
    check_omega(omega)?;
    grid.with_halfwidth(grid.x_halfwidth * omega.sqrt())
}

/// `m̃_ω`, the minimum of the `x`-rescaled action, computed on the rescaled
/// image of `grid`.
pub fn m_tilde(p: f64, omega: f64, grid: &GridSpec) -> Result<GroundStateResult> {
    let g = rescaled_grid(&grid.with_exponent(p)?, omega)?;
    ground_state(&GroundStateProblem::rescaled(g, omega)?)
}

/// Relative defect of `m_ω = ω^{(p+1)/(p-1) - 1/2} m̃_ω`.
pub fn scaling_defect(p: f64, omega: f64, m: f64, m_tilde: f64) -> f64 {
    let scaled = omega.powf(crate::soliton::action_scaling_exponent(p)) * m_tilde;
    (m - scaled).abs() / m.abs()
}

/// `M_ω(q) = (‖∂_x q‖² + ‖|D_y|^{1/2} q‖² + ω‖q‖²) / ‖q‖_{p+1}²`.
pub fn rayleigh_quotient_check(q: &Field2D, omega: f64) -> Result<f64> {
    check_omega(omega)?;
    if q.is_zero() {
        return Err(Error::ZeroField);
    }
    let n = Norms::of(q);
    let p = q.grid().p;
    Ok(ActionWeights::standard(omega).quadratic(&n) / n.lp.powf(2.0 / (p + 1.0)))
}

/// `((p-1)/(2(p+1))) M^{(p+1)/(p-1)}`: the least action recovered from the
/// minimal quotient.
pub fn action_from_quotient(quotient: f64, p: f64) -> f64 {
    (p - 1.0) / (2.0 * (p + 1.0)) * quotient.powf((p + 1.0) / (p - 1.0))
}

/// `2π m_{ω,ℝ} - m_ω`, positive once the ground state leaves the line soliton.
pub fn action_gap(p: f64, omega: f64, grid: &GridSpec) -> Result<(f64, GroundStateResult)> {
    let line = 2.0 * std::f64::consts::PI * m_line(p, omega)?;
    let gs = m_omega(p, omega, grid)?;
    Ok((line - gs.m_omega, gs))
}

/// Relative gap threshold of the `ω_*` predicate. The gap is measured to
/// about `1e-13` on resolved grids and opens quadratically past the
/// bifurcation, so the threshold sets the overshoot `≈ √(GAP_TOL / c)`.
pub const GAP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaStar {
    pub omega_star: f64,
    /// `(ω, gap, y_dependence)` for every evaluated frequency, in order.
    pub evaluations: Vec<(f64, f64, f64)>,
}

/// Bisection for the frequency at which the action gap opens, on
/// `[ω_p/4, 4ω_p]`.
pub fn find_omega_star(p: f64, grid: &GridSpec, tol: f64) -> Result<OmegaStar> {
    let wp = omega_p(p)?;
    find_omega_star_in(p, grid, (wp / 4.0, 4.0 * wp), tol, GAP_TOL)
}

pub fn find_omega_star_in(
    p: f64,
    grid: &GridSpec,
    range: (f64, f64),
    tol: f64,
    gap_tol: f64,
) -> Result<OmegaStar> {
    if !(tol > 0.0 && gap_tol > 0.0) {
        return Err(invalid("tolerances must be positive"));
    }
    let (mut lo, mut hi) = range;
    check_omega(lo)?;
    if !(hi > lo) {
        return Err(invalid(format!("empty range ({lo}, {hi})")));
    }
    let mut evaluations = Vec::new();
    let mut open = |omega: f64| -> Result<bool> {
        let (gap, gs) = action_gap(p, omega, grid)?;
        evaluations.push((omega, gap, gs.y_dependence));
        Ok(gap > gap_tol * gs.m_omega)
    };
    let (at_lo, at_hi) = (open(lo)?, open(hi)?);
    if at_lo || !at_hi {
        return Err(Error::NoBracket {
            lo,
            hi,
            detail: format!("gap predicate is {at_lo} at lo and {at_hi} at hi"),
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if open(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(OmegaStar { omega_star: hi, evaluations })
}

/// One row of an `ω`-scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub omega: f64,
    pub m_omega: f64,
    pub two_pi_m_line: f64,
    pub gap: f64,
    pub y_dependence: f64,
}

pub const SCAN_CSV_HEADER: &str = "omega,m_omega,2pi_m_line,gap,y_dependence";

impl ScanRow {
    pub fn from_result(p: f64, omega: f64, gs: &GroundStateResult) -> Result<Self> {
        let line = 2.0 * std::f64::consts::PI * m_line(p, omega)?;
        Ok(Self {
            omega,
            m_omega: gs.m_omega,
            two_pi_m_line: line,
            gap: line - gs.m_omega,
            y_dependence: gs.y_dependence,
        })
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{:.15e},{:.15e},{:.6e},{:.6e}",
            self.omega, self.m_omega, self.two_pi_m_line, self.gap, self.y_dependence
        )
    }
}

/// Second eigenvalue of `L_{ω,g,+} = -∂_xx + |D_y| + ω - p|q|^{p-1}`.
///
/// For `y`-independent `q` the operator splits into the 1D blocks
/// `L + |n|`; otherwise the two lowest eigenvalues come from LOBPCG.
pub fn second_eigenvalue_lg(q: &Field2D, omega: f64, p: f64) -> Result<f64> {
    check_omega(omega)?;
    let g = *q.grid();
    if g.p != p {
        return Err(Error::GridMismatch(format!("grid exponent {} differs from {p}", g.p)));
    }
    if q.is_zero() {
        return Err(Error::ZeroField);
    }
    let n = Norms::of(q);
    if n.transverse <= 1e-16 * n.l2 {
        let profile: Vec<f64> = q.mode_zero_profile().iter().map(|z| z.norm()).collect();
        return second_eigenvalue_separable(&Field1D::new(g, profile)?, omega);
    }
    second_eigenvalue_iterative(q, omega)
}

/// Block route for `y`-independent profiles: eigenvalues of `L_0 + |n|`
/// over all resolved modes, counted with multiplicity.
pub fn second_eigenvalue_separable(profile: &Field1D, omega: f64) -> Result<f64> {
    let g = *profile.grid();
    let p = g.p;
    let mut m = build_operator(p, omega, 0.0, Branch::Plus, &g)?;
    // replace the soliton potential by the given profile
    let r = line_soliton(SolitonParams::new(p, omega)?, &g)?;
    for i in 0..g.nx {
        let v = p * r.values()[i].powf(p - 1.0) - p * profile.values()[i].abs().powf(p - 1.0);
        m.matrix[(i, i)] += v;
    }
    let base = m.eigenvalues()?;
    let mut all: Vec<f64> = Vec::new();
    for k in 0..g.ny {
        let shift = g.mode(k).abs() as f64;
        all.extend(base.iter().take(4).map(|e| e + shift));
    }
    all.sort_by(f64::total_cmp);
    Ok(all[1])
}

fn second_eigenvalue_iterative(q: &Field2D, omega: f64) -> Result<f64> {
    let g = *q.grid();
    let p = g.p;
    let pot: Vec<f64> = q.values().iter().map(|z| p * z.norm().powf(p - 1.0)).collect();
    let to_field = |v: &[f64]| Field2D::from_raw(g, v.iter().map(|&x| C64::new(x, 0.0)).collect());
    let apply = |v: &[f64]| -> Vec<f64> {
        let lin = apply_complex_multiplier(&to_field(v), |xi, n| C64::new(xi * xi + n.abs() as f64 + omega, 0.0));
        lin.values().iter().zip(v).zip(&pot).map(|((z, x), w)| z.re - w * x).collect()
    };
    let precondition = |v: &[f64]| -> Vec<f64> {
        let out = apply_complex_multiplier(&to_field(v), |xi, n| C64::new(1.0 / (xi * xi + n.abs() as f64 + omega), 0.0));
        out.values().iter().map(|z| z.re).collect()
    };
    let re = |f: &Field2D| -> Vec<f64> { f.values().iter().map(|z| z.re).collect() };
    let qx = apply_complex_multiplier(q, |xi, _| C64::new(0.0, xi));
    let qy = apply_complex_multiplier(q, |_, n| C64::new(0.0, n as f64));
    let generic: Vec<f64> = (0..g.len())
        .map(|i| {
            let t = i as f64;
            pot[i] * (0.3 + (0.013 * t).sin() + 0.5 * (0.0071 * t).cos())
        })
        .collect();
    let solver = Lobpcg { apply: &apply, precondition: &precondition, max_iters: 2000, tol: 1e-7 };
    let out = solver.solve(vec![re(q), re(&qx), re(&qy), generic], 2)?;
    Ok(out.values[1])
}

/// Adjacent-frequency comparison of least actions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub omega1: f64,
    pub omega2: f64,
    pub m1: f64,
    pub m2: f64,
    pub mass1: f64,
    pub mass2: f64,
    pub constant: f64,
    /// `m1 + M(Q1)Δ + CΔ² - m2`
    pub upper_margin: f64,
    /// `m2 - M(Q2)Δ + CΔ² - m1`
    pub lower_margin: f64,
    pub increasing: bool,
    pub pass: bool,
}

/// Compares `m` at two frequencies against
/// `m2 ≤ m1 + M(Q1)Δω + CΔω²` and `m1 ≤ m2 - M(Q2)Δω + CΔω²`,
/// both consequences of `S_{ω2} = S_{ω1} + Δω M` and Nehari rescaling.
pub fn continuity_check(p: f64, omega1: f64, omega2: f64, grid: &GridSpec, constant: f64) -> Result<ContinuityReport> {
    check_omega(omega1)?;
    if omega2 < omega1 {
        return Err(invalid("omega1 must not exceed omega2"));
    }
    let r1 = m_omega(p, omega1, grid)?;
    let r2 = if omega2 == omega1 { r1.clone() } else { m_omega(p, omega2, grid)? };
    Ok(continuity_from(omega1, omega2, &r1, &r2, constant))
}

pub fn continuity_from(
    omega1: f64,
    omega2: f64,
    r1: &GroundStateResult,
    r2: &GroundStateResult,
    constant: f64,
) -> ContinuityReport {
    let d = omega2 - omega1;
    let mass1 = 0.5 * r1.q.l2_norm_sq();
    let mass2 = 0.5 * r2.q.l2_norm_sq();
    let upper_margin = r1.m_omega + mass1 * d + constant * d * d - r2.m_omega;
    let lower_margin = r2.m_omega - mass2 * d + constant * d * d - r1.m_omega;
    let increasing = if d > 0.0 { r2.m_omega > r1.m_omega } else { true };
    ContinuityReport {
        omega1,
        omega2,
        m1: r1.m_omega,
        m2: r2.m_omega,
        mass1,
        mass2,
        constant,
        upper_margin,
        lower_margin,
        increasing,
        pass: increasing && upper_margin >= 0.0 && lower_margin >= 0.0,
    }
}
