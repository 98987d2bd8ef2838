//! Block preconditioned conjugate gradient for the lowest eigenpairs of a
//! real symmetric operator given only through its action on vectors.

use faer::{Mat, Side};

use crate::error::{Error, Result};

pub(crate) struct Lobpcg<'a> {
    pub apply: &'a dyn Fn(&[f64]) -> Vec<f64>,
    pub precondition: &'a dyn Fn(&[f64]) -> Vec<f64>,
    pub max_iters: usize,
    /// Converged when `‖A x - θ x‖ ≤ tol · max(1, |θ|)` for the wanted pairs.
    pub tol: f64,
}

pub(crate) struct LobpcgOutput {
    pub values: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], s: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += s * xi;
    }
}

/// Modified Gram-Schmidt, twice, against `fixed` and among `vs`. Vectors
/// that lose more than `1e-10` of their norm are dropped.
fn orthonormalize(fixed: &[Vec<f64>], vs: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mut v in vs {
        let n0 = dot(&v, &v).sqrt();
        if !(n0 > 0.0 && n0.is_finite()) {
            continue;
        }
        for _ in 0..2 {
            for q in fixed.iter().chain(out.iter()) {
                let c = dot(q, &v);
                axpy(&mut v, -c, q);
            }
        }
        let n1 = dot(&v, &v).sqrt();
        if n1 > 1e-10 * n0 {
            v.iter_mut().for_each(|x| *x /= n1);
            out.push(v);
        }
    }
    out
}

fn combine(basis: &[Vec<f64>], coef: &Mat<f64>, col: usize, rows: std::ops::Range<usize>) -> Vec<f64> {
    let mut v = vec![0.0; basis[0].len()];
    for r in rows {
        axpy(&mut v, coef[(r, col)], &basis[r]);
    }
    v
}

impl Lobpcg<'_> {
    /// The `wanted` lowest eigenpairs, iterating a block of `start.len()`
    /// vectors (which should exceed `wanted` by a few).
    pub fn solve(&self, start: Vec<Vec<f64>>, wanted: usize) -> Result<LobpcgOutput> {
        let x = orthonormalize(&[], start);
        let m = x.len();
        if m < wanted {
            return Err(Error::Eigen("start block is rank deficient".into()));
        }
        let ax0: Vec<Vec<f64>> = x.iter().map(|v| (self.apply)(v)).collect();
        let (mut theta, mut x, mut ax) = rayleigh_ritz(&x, &ax0, m)?;
        let mut p: Vec<Vec<f64>> = Vec::new();
        let mut res = vec![f64::INFINITY; m];

        for it in 0..self.max_iters {
            let r = residual_block(&x, &ax, &theta);
            for (k, rk) in r.iter().enumerate() {
                res[k] = dot(rk, rk).sqrt();
            }
            if (0..wanted).all(|k| res[k] <= self.tol * theta[k].abs().max(1.0)) {
                return Ok(LobpcgOutput {
                    values: theta[..wanted].to_vec(),
                });
            }
            let w: Vec<Vec<f64>> = r.iter().map(|v| (self.precondition)(v)).collect();
            let w = orthonormalize(&x, w);
            let p_orth = orthonormalize(&x, p.clone());
            let p_orth = orthonormalize(&w, p_orth);
            let aw: Vec<Vec<f64>> = w.iter().map(|v| (self.apply)(v)).collect();
            // P was orthonormalized, so its image is recomputed
            let ap: Vec<Vec<f64>> = p_orth.iter().map(|v| (self.apply)(v)).collect();
            let mut basis = x.clone();
            basis.extend(w.iter().cloned());
            basis.extend(p_orth.iter().cloned());
            let mut abasis = ax.clone();
            abasis.extend(aw);
            abasis.extend(ap);
            // Rayleigh-Ritz on span{X, W, P}
            let (vals, coef) = small_eigen(&basis, &abasis)?;
            let mut new_x = Vec::with_capacity(m);
            let mut new_ax = Vec::with_capacity(m);
            let mut new_p = Vec::with_capacity(m);
            let nb = basis.len();
            for k in 0..m {
                new_x.push(combine(&basis, &coef, k, 0..nb));
                new_ax.push(combine(&abasis, &coef, k, 0..nb));
                new_p.push(combine(&basis, &coef, k, m..nb));
            }
            theta = vals[..m].to_vec();
            x = new_x;
            ax = new_ax;
            p = new_p;
            // refresh the images now and then against drift in the recurrences
            if it % 20 == 19 {
                x = orthonormalize(&[], x);
                if x.len() < m {
                    return Err(Error::Eigen("block collapsed".into()));
                }
                ax = x.iter().map(|v| (self.apply)(v)).collect();
                let (vals, xs, axs) = rayleigh_ritz(&x, &ax, m)?;
                theta = vals;
                x = xs;
                ax = axs;
                p.clear();
            }
        }
        Err(Error::NotConverged {
            iterations: self.max_iters,
            residual: res[..wanted].iter().cloned().fold(0.0, f64::max),
        })
    }
}

fn residual_block(x: &[Vec<f64>], ax: &[Vec<f64>], theta: &[f64]) -> Vec<Vec<f64>> {
    x.iter()
        .zip(ax)
        .zip(theta)
        .map(|((xv, av), &t)| av.iter().zip(xv).map(|(a, b)| a - t * b).collect())
        .collect()
}

/// Eigen-decomposition of the projected matrix `Bᵀ A B` for an orthonormal
/// basis `B`, ascending.
fn small_eigen(basis: &[Vec<f64>], abasis: &[Vec<f64>]) -> Result<(Vec<f64>, Mat<f64>)> {
    let n = basis.len();
    let g = Mat::from_fn(n, n, |i, j| 0.5 * (dot(&basis[i], &abasis[j]) + dot(&basis[j], &abasis[i])));
    let evd = g.self_adjoint_eigen(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let vals: Vec<f64> = (0..n).map(|i| s[i]).collect();
    Ok((vals, evd.U().to_owned()))
}

fn rayleigh_ritz(
    x: &[Vec<f64>],
    ax: &[Vec<f64>],
    m: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let (vals, coef) = small_eigen(x, ax)?;
    let n = x.len();
    let xs = (0..m).map(|k| combine(x, &coef, k, 0..n)).collect();
    let axs = (0..m).map(|k| combine(ax, &coef, k, 0..n)).collect();
    Ok((vals[..m].to_vec(), xs, axs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_operator() {
        let n = 200;
        let d: Vec<f64> = (0..n).map(|i| (i as f64) * 0.5 - 3.0).collect();
        let apply = |v: &[f64]| -> Vec<f64> { v.iter().zip(&d).map(|(a, b)| a * b).collect() };
        let pre = |v: &[f64]| -> Vec<f64> { v.to_vec() };
        let solver = Lobpcg { apply: &apply, precondition: &pre, max_iters: 500, tol: 1e-10 };
        let start: Vec<Vec<f64>> = (0..4)
            .map(|k| (0..n).map(|i| ((i * (k + 3)) as f64 * 0.7).sin() + 0.1).collect())
            .collect();
        let out = solver.solve(start, 2).unwrap();
        assert!((out.values[0] + 3.0).abs() < 1e-9);
        assert!((out.values[1] + 2.5).abs() < 1e-9);
    }
}
