//! Dense realizations of the per-mode linearized operators
//!
//! `L_{ω,±,a} = -∂_xx + ω + a - c R_ω^{p-1}` (`c = p` for `+`, `c = 1` for `-`)
//! on the periodized `x`-grid, the growth rate of `-J S_ω(a)`, the
//! `ω_p` bisection and the linearized propagator `exp(-t J S_ω(n))`.

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::field::{fft1, Field1D};
use crate::grid::{check_omega, GridSpec};
use crate::soliton::{line_soliton, SolitonParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `L_+`: potential `p R_ω^{p-1}`, acts on the real part.
    Plus,
    /// `L_-`: potential `R_ω^{p-1}`, acts on the imaginary part.
    Minus,
}

#[derive(Debug, Clone)]
pub struct Operator1D {
    pub grid: GridSpec,
    pub matrix: Mat<f64>,
    pub label: Branch,
    pub omega: f64,
    pub mode_shift: f64,
}

/// Matrix of `-∂_xx` for the trigonometric interpolant: circulant with
/// first column `(1/N) Σ_k ξ_k² e^{2πikm/N}`.
pub fn neg_laplacian_matrix(grid: &GridSpec) -> Mat<f64> {
    let n = grid.nx;
    let mut c: Vec<C64> = (0..n).map(|k| C64::new(grid.xi(k).powi(2), 0.0)).collect();
    fft1(&mut c, n, true);
    // symmetrize against roundoff so the matrix is exactly symmetric
    let col: Vec<f64> = (0..n).map(|m| 0.5 * (c[m].re + c[(n - m) % n].re)).collect();
    Mat::from_fn(n, n, |i, j| col[(i + n - j) % n])
}

pub(crate) fn potential(params: SolitonParams, grid: &GridSpec) -> Result<Vec<f64>> {
    let r = line_soliton(params, grid)?;
    Ok(r.values().iter().map(|v| v.powf(params.p - 1.0)).collect())
}

/// Builds `L_{ω,±,a}` as a dense symmetric matrix.
pub fn build_operator(
    p: f64,
    omega: f64,
    a: f64,
    sign: Branch,
    grid: &GridSpec,
) -> Result<Operator1D> {
    let params = SolitonParams::new(p, omega)?;
    if !(a.is_finite() && a >= 0.0) {
        return Err(invalid(format!("mode shift must be non-negative, got {a}")));
    }
    let v = potential(params, grid)?;
    let c = match sign {
        Branch::Plus => p,
        Branch::Minus => 1.0,
    };
    let mut matrix = neg_laplacian_matrix(grid);
    for (i, vi) in v.iter().enumerate() {
        matrix[(i, i)] += omega + a - c * vi;
    }
    Ok(Operator1D { grid: *grid, matrix, label: sign, omega, mode_shift: a })
}

pub(crate) fn matvec(m: &Mat<f64>, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; m.nrows()];
    for (j, &xj) in x.iter().enumerate() {
        if xj == 0.0 {
            continue;
        }
        for (yi, mij) in y.iter_mut().zip(m.col_as_slice(j)) {
            *yi += mij * xj;
        }
    }
    y
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl Operator1D {
    pub fn apply(&self, f: &Field1D) -> Field1D {
        Field1D::new(self.grid, matvec(&self.matrix, f.values())).expect("finite matvec")
    }

    /// Same operator with mode shift `a`: only the diagonal changes.
    pub fn shifted(&self, a: f64) -> Self {
        let mut matrix = self.matrix.clone();
        let d = a - self.mode_shift;
        for i in 0..matrix.nrows() {
            matrix[(i, i)] += d;
        }
        Self { matrix, mode_shift: a, ..self.clone() }
    }

    /// Largest entrywise asymmetry `|M_ij - M_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst = 0.0_f64;
        for j in 0..n {
            for i in 0..j {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)]).abs());
            }
        }
        worst
    }

    /// Bottom of the essential spectrum of the continuum operator, `ω + a`.
    pub fn essential_threshold(&self) -> f64 {
        self.omega + self.mode_shift
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.matrix
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    /// `L²`-normalized in the continuous sense, `∫ v² dx = 1`.
    pub vector: Field1D,
}

/// The `k` smallest eigenpairs in ascending order.
pub fn lowest_eigenpairs(op: &Operator1D, k: usize) -> Result<Vec<Eigenpair>> {
    let n = op.grid.nx;
    if k == 0 || k > n {
        return Err(invalid(format!("k must be in 1..={n}, got {k}")));
    }
    let evd = op
        .matrix
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let scale = 1.0 / op.grid.dx().sqrt();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
    order
        .into_iter()
        .take(k)
        .map(|j| {
            let v: Vec<f64> = (0..n).map(|i| u[(i, j)] * scale).collect();
            Ok(Eigenpair { value: s[j], vector: Field1D::new(op.grid, v)? })
        })
        .collect()
}

/// Eigenvalues below the essential threshold `ω + a`: the discretized
/// continuum starts at or above it, so these are the bound states. Values
/// within `1e-9` (relative) of the threshold are edge resonances, not bound
/// states; for integer `2/(p-1)` the potential is reflectionless and has one.
pub fn discrete_spectrum(op: &Operator1D) -> Result<Vec<f64>> {
    let edge = op.essential_threshold();
    let cut = edge - 1e-9 * edge.abs().max(1.0);
    Ok(op.eigenvalues()?.into_iter().filter(|&e| e < cut).collect())
}

/// Spectral data of `-J S_ω(a)` for one mode shift.
#[derive(Debug, Clone)]
pub struct BlockSpectrum {
    pub omega: f64,
    pub p: f64,
    pub a: f64,
    /// Largest real growth rate, zero when the block is spectrally stable.
    pub lambda0: f64,
    pub eigvec_re: Field1D,
    pub eigvec_im: Field1D,
    /// `‖(-J S_ω(a)) w - λ₀ w‖₂` for the normalized block vector `w`; when
    /// `λ₀ = 0` it is the eigen-residual of `-L_- L_+` for the reported vector.
    pub residual: f64,
    /// Eigenvalues `λ²` of `-L_- L_+` with imaginary part above `1e-6 |λ²|`.
    pub non_real: Vec<C64>,
}

/// `λ²` below this is treated as zero: the floor set by double precision on
/// a Jordan block at the origin.
const LAMBDA_SQ_FLOOR: f64 = 1e-12;

struct BlockPair {
    plus: Mat<f64>,
    minus: Mat<f64>,
}

impl BlockPair {
    fn new(p: f64, omega: f64, a: f64, grid: &GridSpec) -> Result<Self> {
        Ok(Self {
            plus: build_operator(p, omega, a, Branch::Plus, grid)?.matrix,
            minus: build_operator(p, omega, a, Branch::Minus, grid)?.matrix,
        })
    }

    fn n(&self) -> usize {
        self.plus.nrows()
    }

    /// `-J S = [[0, L_-], [-L_+, 0]]`.
    fn hamiltonian_matrix(&self) -> Mat<f64> {
        let n = self.n();
        Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, false) => self.minus[(i, j - n)],
            (false, true) => -self.plus[(i - n, j)],
            _ => 0.0,
        })
    }

    fn apply_block(&self, re: &[f64], im: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let top = matvec(&self.minus, im);
        let bottom: Vec<f64> = matvec(&self.plus, re).into_iter().map(|v| -v).collect();
        (top, bottom)
    }
}

fn inverse_iteration(m: &Mat<f64>, shift: f64, start: Vec<f64>, steps: usize) -> Vec<f64> {
    let n = m.nrows();
    let mut shifted = m.clone();
    for i in 0..n {
        shifted[(i, i)] -= shift;
    }
    let lu = shifted.partial_piv_lu();
    let mut x = start;
    for _ in 0..steps {
        let rhs = Mat::from_fn(n, 1, |i, _| x[i]);
        let sol = lu.solve(&rhs);
        let y: Vec<f64> = (0..n).map(|i| sol[(i, 0)]).collect();
        let ny = norm(&y);
        if !(ny.is_finite() && ny > 0.0) {
            break;
        }
        x = y.into_iter().map(|v| v / ny).collect();
    }
    x
}

fn start_vector(n: usize) -> Vec<f64> {
    // deterministic, generic (not orthogonal to smooth even or odd modes)
    (0..n).map(|i| 1.0 + 0.37 * ((i as f64) * 0.61).sin() + 0.11 * ((i as f64) * 1.37).cos()).collect()
}

/// Growth rate of `-J S_ω(a)` via the eigenvalues `λ²` of `-L_- L_+`.
///
/// The candidate `λ²` is refined with the two-sided Rayleigh quotient
/// `-(x·L_+x)/(x·L_-^{-1}x)` (left eigenvector `L_-^{-1}x`), and the block
/// eigenvector comes from inverse iteration on the `2n × 2n` block matrix.
pub fn growth_rate(p: f64, omega: f64, a: f64, grid: &GridSpec) -> Result<BlockSpectrum> {
    check_omega(omega)?;
    let ops = BlockPair::new(p, omega, a, grid)?;
    let n = ops.n();
    let product = {
        let mut b = &ops.minus * &ops.plus;
        b *= faer::Scale(-1.0);
        b
    };
    let eig = product.eigenvalues().map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let non_real: Vec<C64> = eig
        .iter()
        .filter(|z| z.im.abs() > 1e-6 * z.norm())
        .map(|z| C64::new(z.re, z.im))
        .collect();
    let top = eig
        .iter()
        .filter(|z| z.im.abs() <= 1e-6 * z.norm())
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(Error::Eigen("no real eigenvalue of -L_- L_+".into()));
    }

    let minus_chol = ops.minus.llt(Side::Lower).ok();
    let refine = |x: &[f64]| -> f64 {
        let lx = matvec(&ops.plus, x);
        match &minus_chol {
            Some(llt) => {
                let rhs = Mat::from_fn(n, 1, |i, _| x[i]);
                let y = llt.solve(&rhs);
                let denom: f64 = (0..n).map(|i| x[i] * y[(i, 0)]).sum();
                -dot(x, &lx) / denom
            }
            None => {
                let bx = matvec(&ops.minus, &lx);
                -dot(x, &bx) / dot(x, x)
            }
        }
    };

    let dx = grid.dx();
    let to_field = |v: &[f64], s: f64| Field1D::new(*grid, v.iter().map(|t| t * s).collect());

    if top > 0.0 {
        let lambda_guess = top.sqrt();
        let a_block = ops.hamiltonian_matrix();
        let mut start = start_vector(n);
        start.extend(start_vector(n).iter().map(|v| 0.5 * v));
        let w = inverse_iteration(&a_block, lambda_guess * (1.0 + 1e-9), start, 3);
        let (re, im) = w.split_at(n);
        let mu = refine(re);
        if mu > LAMBDA_SQ_FLOOR {
            let lambda0 = mu.sqrt();
            let (top_r, bot_r) = ops.apply_block(re, im);
            let r1: Vec<f64> = top_r.iter().zip(re).map(|(t, x)| t - lambda0 * x).collect();
            let r2: Vec<f64> = bot_r.iter().zip(im).map(|(t, x)| t - lambda0 * x).collect();
            let wn = (dot(re, re) + dot(im, im)).sqrt();
            let residual = (dot(&r1, &r1) + dot(&r2, &r2)).sqrt() / wn;
            // fix the sign so the real part is positive at its largest entry
            let imax = (0..n).max_by(|&i, &j| re[i].abs().total_cmp(&re[j].abs())).unwrap_or(0);
            let s = re[imax].signum() / (wn * dx.sqrt());
            return Ok(BlockSpectrum {
                omega,
                p,
                a,
                lambda0,
                eigvec_re: to_field(re, s)?,
                eigvec_im: to_field(im, s)?,
                residual,
                non_real,
            });
        }
    }

    // spectrally stable block: report the top eigenvector of -L_- L_+ as (x, 0)
    let product_shift = top + 1e-9 * top.abs().max(1.0);
    let x = inverse_iteration(&product, product_shift, start_vector(n), 3);
    let bx = matvec(&product, &x);
    let residual = bx.iter().zip(&x).map(|(b, v)| (b - top * v).powi(2)).sum::<f64>().sqrt() / norm(&x);
    let s = 1.0 / (norm(&x) * dx.sqrt());
    Ok(BlockSpectrum {
        omega,
        p,
        a,
        lambda0: 0.0,
        eigvec_re: to_field(&x, s)?,
        eigvec_im: Field1D::zeros(*grid),
        residual,
        non_real,
    })
}

/// Bisection for `ω_p` on the sign of the bottom of `L_{ω,+,1}`, which
/// equals `1 - ω/ω_p`.
pub fn threshold_scan(p: f64, grid: &GridSpec, omega_range: (f64, f64), tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = omega_range;
    if !(lo > 0.0 && hi > lo && tol > 0.0) {
        return Err(invalid(format!("bad bisection range ({lo}, {hi}) or tolerance {tol}")));
    }
    let bottom = |omega: f64| -> Result<f64> {
        let op = build_operator(p, omega, 1.0, Branch::Plus, grid)?;
        Ok(op.eigenvalues()?[0])
    };
    let (f_lo, f_hi) = (bottom(lo)?, bottom(hi)?);
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::NoBracket {
            lo,
            hi,
            detail: format!("bottom of L_+,1 is {f_lo:.4e} at lo and {f_hi:.4e} at hi"),
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if bottom(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `exp(-t J S_ω(n))` for a fixed mode, reusable across times.
///
/// For `n ≥ 1`, `L_-` is positive definite and the flow reduces to
/// `r'' = -K r` with `K = L_-^{1/2} L_+ L_-^{1/2}` symmetric, `p = L_-^{1/2} r`;
/// the `n = 0` block has a Jordan structure at zero and falls back to a
/// Padé matrix exponential of the full block.
pub struct LinearizedPropagator {
    grid: GridSpec,
    route: Route,
}

enum Route {
    Modal {
        sqrt_minus: Mat<f64>,
        inv_sqrt_minus: Mat<f64>,
        modes: Mat<f64>,
        theta: Vec<f64>,
    },
    Dense {
        block: Mat<f64>,
    },
}

impl LinearizedPropagator {
    pub fn new(p: f64, omega: f64, n: u32, grid: &GridSpec) -> Result<Self> {
        let ops = BlockPair::new(p, omega, n as f64, grid)?;
        if n == 0 {
            return Ok(Self { grid: *grid, route: Route::Dense { block: ops.hamiltonian_matrix() } });
        }
        let evd = ops
            .minus
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let d = evd.S().column_vector();
        let v = evd.U();
        let m = ops.n();
        if (0..m).any(|i| d[i] <= 0.0) {
            return Err(Error::Eigen("L_- is not positive definite".into()));
        }
        let sq: Vec<f64> = (0..m).map(|i| d[i].sqrt()).collect();
        let vs = Mat::from_fn(m, m, |i, j| v[(i, j)] * sq[j]);
        let vi = Mat::from_fn(m, m, |i, j| v[(i, j)] / sq[j]);
        let sqrt_minus = &vs * v.transpose();
        let inv_sqrt_minus = &vi * v.transpose();
        let k = &(&sqrt_minus * &ops.plus) * &sqrt_minus;
        let k = Mat::from_fn(m, m, |i, j| 0.5 * (k[(i, j)] + k[(j, i)]));
        let kevd = k.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
        let theta: Vec<f64> = (0..m).map(|i| kevd.S().column_vector()[i]).collect();
        Ok(Self {
            grid: *grid,
            route: Route::Modal { sqrt_minus, inv_sqrt_minus, modes: kevd.U().to_owned(), theta },
        })
    }

    pub fn propagate(&self, re: &Field1D, im: &Field1D, t: f64) -> Result<(Field1D, Field1D)> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(invalid(format!("time must be non-negative, got {t}")));
        }
        let n = self.grid.nx;
        let (out_re, out_im) = match &self.route {
            Route::Modal { sqrt_minus, inv_sqrt_minus, modes, theta } => {
                let r0 = matvec(inv_sqrt_minus, re.values());
                let dr0 = matvec(sqrt_minus, im.values());
                let wt = modes.transpose().to_owned();
                let s0 = matvec(&wt, &r0);
                let ds0 = matvec(&wt, &dr0);
                let mut s = vec![0.0; n];
                let mut ds = vec![0.0; n];
                for k in 0..n {
                    let (c, sn_over, dc, dsn) = modal_flow(theta[k], t);
                    s[k] = c * s0[k] + sn_over * ds0[k];
                    ds[k] = dc * s0[k] + dsn * ds0[k];
                }
                let r = matvec(modes, &s);
                let dr = matvec(modes, &ds);
                (matvec(sqrt_minus, &r), matvec(inv_sqrt_minus, &dr))
            }
            Route::Dense { block } => {
                let mut scaled = block.clone();
                scaled *= faer::Scale(t);
                let e = expm(&scaled);
                let mut w = re.values().to_vec();
                w.extend_from_slice(im.values());
                let out = matvec(&e, &w);
                (out[..n].to_vec(), out[n..].to_vec())
            }
        };
        Ok((Field1D::new(self.grid, out_re)?, Field1D::new(self.grid, out_im)?))
    }
}

/// Solution operator of `s'' = -θ s`: returns `(c, s/ω, c', s')` so that
/// `s(t) = c s0 + (s/ω) s0'` and `s'(t) = c' s0 + s' s0'`.
fn modal_flow(theta: f64, t: f64) -> (f64, f64, f64, f64) {
    if theta > 0.0 {
        let w = theta.sqrt();
        let (sn, c) = (w * t).sin_cos();
        (c, sn / w, -w * sn, c)
    } else if theta < 0.0 {
        let k = (-theta).sqrt();
        let (sh, ch) = ((k * t).sinh(), (k * t).cosh());
        (ch, sh / k, k * sh, ch)
    } else {
        (1.0, t, 0.0, 1.0)
    }
}

/// `exp(-t J S_ω(n))` applied to the block vector `(Re v, Im v)`.
pub fn propagate_linearized(
    v: (&Field1D, &Field1D),
    n: u32,
    t: f64,
    p: f64,
    omega: f64,
    grid: &GridSpec,
) -> Result<(Field1D, Field1D)> {
    LinearizedPropagator::new(p, omega, n, grid)?.propagate(v.0, v.1, t)
}

/// Scaling-and-squaring Padé(13) matrix exponential.
pub fn expm(a: &Mat<f64>) -> Mat<f64> {
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    const THETA13: f64 = 5.371920351148152;
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|j| a.col_as_slice(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let s = if norm1 > THETA13 { (norm1 / THETA13).log2().ceil() as i32 } else { 0 };
    let mut a = a.clone();
    a *= faer::Scale(0.5_f64.powi(s));
    let ident = Mat::<f64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let lin = |c: [f64; 4]| -> Mat<f64> {
        let mut m = &a6 * faer::Scale(c[3]);
        m += &a4 * faer::Scale(c[2]);
        m += &a2 * faer::Scale(c[1]);
        m += &ident * faer::Scale(c[0]);
        m
    };
    let u_inner = {
        let mut hi = &a6 * faer::Scale(B[13]);
        hi += &a4 * faer::Scale(B[11]);
        hi += &a2 * faer::Scale(B[9]);
        &a6 * &hi
    };
    let u = &a * &(&u_inner + &lin([B[1], B[3], B[5], B[7]]));
    let v_inner = {
        let mut hi = &a6 * faer::Scale(B[12]);
        hi += &a4 * faer::Scale(B[10]);
        hi += &a2 * faer::Scale(B[8]);
        &a6 * &hi
    };
    let v = &v_inner + &lin([B[0], B[2], B[4], B[6]]);
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.partial_piv_lu().solve(&p);
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// One row of a persisted spectrum scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub p: f64,
    pub omega: f64,
    pub a: f64,
    pub eigenvalue_index: usize,
    pub eigenvalue: f64,
    pub residual: f64,
}

pub const SPECTRUM_CSV_HEADER: &str = "p,omega,a,eigenvalue_index,eigenvalue,residual";

impl SpectrumRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{:.15e},{:.6e}",
            self.p, self.omega, self.a, self.eigenvalue_index, self.eigenvalue, self.residual
        )
    }
}

/// Lowest `k` eigenpairs of `L_{ω,+,a}` as CSV rows with their residuals.
pub fn spectrum_rows(p: f64, omega: f64, a: f64, k: usize, grid: &GridSpec) -> Result<Vec<SpectrumRow>> {
    let op = build_operator(p, omega, a, Branch::Plus, grid)?;
    let pairs = lowest_eigenpairs(&op, k)?;
    Ok(pairs
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let r = op.apply(&e.vector).sub(&e.vector.scale(e.value)).l2_norm();
            SpectrumRow { p, omega, a, eigenvalue_index: i, eigenvalue: e.value, residual: r }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn laplacian_matrix_matches_symbol_on_cosine() {
        let g = make_grid(std::f64::consts::PI, 32, 2, 3.0).unwrap();
        let m = neg_laplacian_matrix(&g);
        let f: Vec<f64> = g.x_nodes().iter().map(|x| (3.0 * x).cos()).collect();
        let lf = matvec(&m, &f);
        for (a, b) in lf.iter().zip(&f) {
            assert!((a - 9.0 * b).abs() < 1e-11);
        }
    }

    #[test]
    fn shift_adds_identity_exactly() {
        let g = make_grid(20.0, 64, 2, 3.0).unwrap();
        let a0 = build_operator(3.0, 1.0, 0.0, Branch::Plus, &g).unwrap();
        let a1 = build_operator(3.0, 1.0, 1.0, Branch::Plus, &g).unwrap();
        for i in 0..64 {
            for j in 0..64 {
                let expect = a0.matrix[(i, j)] + if i == j { 1.0 } else { 0.0 };
                assert!((a1.matrix[(i, j)] - expect).abs() < 1e-13);
            }
        }
        assert_eq!(a0.asymmetry(), 0.0);
    }

    #[test]
    fn rejects_negative_shift_and_bad_k() {
        let g = make_grid(20.0, 64, 2, 3.0).unwrap();
        assert!(build_operator(3.0, 1.0, -0.5, Branch::Plus, &g).is_err());
        let op = build_operator(3.0, 1.0, 0.0, Branch::Plus, &g).unwrap();
        assert!(lowest_eigenpairs(&op, 65).is_err());
        assert!(lowest_eigenpairs(&op, 0).is_err());
    }

    #[test]
    fn expm_of_rotation_generator() {
        let mut a = Mat::<f64>::zeros(2, 2);
        a[(0, 1)] = -30.0;
        a[(1, 0)] = 30.0;
        let e = expm(&a);
        assert!((e[(0, 0)] - 30f64.cos()).abs() < 1e-10);
        assert!((e[(1, 0)] - 30f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn threshold_requires_bracket() {
        let g = make_grid(40.0, 256, 2, 3.0).unwrap();
        assert!(matches!(threshold_scan(3.0, &g, (0.5, 1.0), 1e-3), Err(Error::NoBracket { .. })));
    }
}
