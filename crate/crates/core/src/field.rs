//! Sampled fields on the grid and the Fourier calculus acting on them.
//!
//! Layout: `values[ix * ny + iy]`, i.e. row-major with `x` as the slow index.
//! Forward transforms are unnormalized; inverse transforms divide by the
//! number of samples, so multipliers act on coefficients directly.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::GridSpec;

struct Plans {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

thread_local! {
    static PLANNER: RefCell<(FftPlanner<f64>, HashMap<usize, Arc<Plans>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plans(n: usize) -> Arc<Plans> {
    PLANNER.with(|cell| {
        let (planner, cache) = &mut *cell.borrow_mut();
        cache
            .entry(n)
            .or_insert_with(|| {
                Arc::new(Plans {
                    fwd: planner.plan_fft_forward(n),
                    inv: planner.plan_fft_inverse(n),
                })
            })
            .clone()
    })
}

/// In-place 1D transform of a contiguous buffer (or several back-to-back
/// buffers of length `n`).
pub(crate) fn fft1(buf: &mut [C64], n: usize, inverse: bool) {
    let p = plans(n);
    if inverse {
        p.inv.process(buf);
        let s = 1.0 / n as f64;
        buf.iter_mut().for_each(|z| *z *= s);
    } else {
        p.fwd.process(buf);
    }
}

/// In-place 2D transform of an `nx × ny` row-major buffer.
pub(crate) fn fft2(buf: &mut [C64], nx: usize, ny: usize, inverse: bool) {
    // y direction: contiguous rows
    fft1(buf, ny, inverse);
    if nx == 1 {
        return;
    }
    // x direction through a transpose
    let mut t = vec![C64::new(0.0, 0.0); nx * ny];
    for ix in 0..nx {
        for iy in 0..ny {
            t[iy * nx + ix] = buf[ix * ny + iy];
        }
    }
    fft1(&mut t, nx, inverse);
    for ix in 0..nx {
        for iy in 0..ny {
            buf[ix * ny + iy] = t[iy * nx + ix];
        }
    }
}

fn check_finite_c(values: &[C64]) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite("field contains NaN or infinity".into()))
    }
}

/// Real samples of a profile on the `x`-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    grid: GridSpec,
    values: Vec<f64>,
}

impl Field1D {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nx {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, got {}",
                grid.nx,
                values.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("profile contains NaN or infinity".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.nx).map(|j| f(grid.x(j))).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, values: vec![0.0; grid.nx] }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| v * s)
    }

    /// `∫ f g dx` by the periodic trapezoid rule.
    pub fn dot(&self, other: &Field1D) -> f64 {
        self.grid.dx() * self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.l2_norm();
        if n == 0.0 {
            return Err(Error::ZeroField);
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn sub(&self, other: &Field1D) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    /// Applies the Fourier multiplier `symbol(ξ)`; the Nyquist bin uses
    /// `symbol(π/dx)`, so odd symbols should vanish there.
    pub fn apply_symbol(&self, symbol: impl Fn(f64) -> C64) -> Self {
        let nx = self.grid.nx;
        let mut buf: Vec<C64> = self.values.iter().map(|&v| C64::new(v, 0.0)).collect();
        fft1(&mut buf, nx, false);
        for (k, z) in buf.iter_mut().enumerate() {
            *z *= symbol(self.grid.xi(k));
        }
        fft1(&mut buf, nx, true);
        Self { grid: self.grid, values: buf.iter().map(|z| z.re).collect() }
    }

    /// Spectral derivative of order `order` (Nyquist bin zeroed for odd orders).
    pub fn derivative(&self, order: u32) -> Self {
        let nyq = std::f64::consts::PI / self.grid.dx();
        self.apply_symbol(|xi| {
            if order % 2 == 1 && (xi.abs() - nyq).abs() < 1e-9 * nyq {
                C64::new(0.0, 0.0)
            } else {
                C64::new(0.0, xi).powu(order)
            }
        })
    }
}

/// Complex samples `ψ(x_j, y_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    grid: GridSpec,
    values: Vec<C64>,
}

/// Fourier coefficients of a [`Field2D`], same layout as the field.
#[derive(Debug, Clone)]
pub struct Spectrum2D {
    grid: GridSpec,
    coeffs: Vec<C64>,
}

impl Field2D {
    pub fn new(grid: GridSpec, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        check_finite_c(&values)?;
        Ok(Self { grid, values })
    }

    pub(crate) fn from_raw(grid: GridSpec, values: Vec<C64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, values: vec![C64::new(0.0, 0.0); grid.len()] }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> C64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for ix in 0..grid.nx {
            let x = grid.x(ix);
            for iy in 0..grid.ny {
                values.push(f(x, grid.y(iy)));
            }
        }
        Self { grid, values }
    }

    /// `y`-independent extension of a profile.
    pub fn lift(profile: &Field1D) -> Self {
        Self::lift_with(profile, |_| C64::new(1.0, 0.0))
    }

    /// `profile(x) · g(y)`.
    pub fn lift_with(profile: &Field1D, g: impl Fn(f64) -> C64) -> Self {
        let grid = *profile.grid();
        let gy: Vec<C64> = (0..grid.ny).map(|k| g(grid.y(k))).collect();
        let mut values = Vec::with_capacity(grid.len());
        for &v in profile.values() {
            values.extend(gy.iter().map(|&c| c * v));
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn at(&self, ix: usize, iy: usize) -> C64 {
        self.values[ix * self.grid.ny + iy]
    }

    pub fn is_finite(&self) -> bool {
        check_finite_c(&self.values).is_ok()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn spectrum(&self) -> Spectrum2D {
        let mut coeffs = self.values.clone();
        fft2(&mut coeffs, self.grid.nx, self.grid.ny, false);
        Spectrum2D { grid: self.grid, coeffs }
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn rotate(&self, theta: f64) -> Self {
        let c = C64::from_polar(1.0, theta);
        self.map(|z| z * c)
    }

    pub fn zip_with(&self, other: &Field2D, f: impl Fn(C64, C64) -> C64) -> Self {
        debug_assert_eq!(self.values.len(), other.values.len());
        Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Field2D) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field2D) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: f64, other: &Field2D) -> Self {
        self.zip_with(other, |a, b| a + b * s)
    }

    /// `∫∫ u conj(v) dx dy`.
    pub fn inner(&self, other: &Field2D) -> C64 {
        let s: C64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        s * self.grid.cell_area()
    }

    /// Real `L²` inner product `Re ∫∫ u conj(v)`.
    pub fn dot(&self, other: &Field2D) -> f64 {
        self.inner(other).re
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_area()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// `∫∫ |u|^q`.
    pub fn lq_integral(&self, q: f64) -> f64 {
        self.values.iter().map(|z| z.norm().powf(q)).sum::<f64>() * self.grid.cell_area()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// `y`-average `(1/2π) ∫ u dy`, i.e. the `n = 0` Fourier coefficient profile.
    pub fn mode_zero_profile(&self) -> Vec<C64> {
        let ny = self.grid.ny;
        self.values
            .chunks(ny)
            .map(|row| row.iter().sum::<C64>() / ny as f64)
            .collect()
    }

    /// `∫ |u(x, y)|² dy` for every `x` node.
    pub fn transverse_density(&self) -> Vec<f64> {
        let dy = self.grid.dy();
        self.values
            .chunks(self.grid.ny)
            .map(|row| row.iter().map(|z| z.norm_sqr()).sum::<f64>() * dy)
            .collect()
    }

    /// Circular shift by whole grid cells along `x`: the output at node `j`
    /// is the input at node `j - cells`.
    pub fn roll_x(&self, cells: i64) -> Self {
        let nx = self.grid.nx as i64;
        let ny = self.grid.ny;
        let mut values = vec![C64::new(0.0, 0.0); self.values.len()];
        for ix in 0..nx {
            let src = (ix - cells).rem_euclid(nx) as usize;
            values[ix as usize * ny..(ix as usize + 1) * ny]
                .copy_from_slice(&self.values[src * ny..(src + 1) * ny]);
        }
        Self { grid: self.grid, values }
    }

    /// `u(x - z, y)` through the Fourier shift theorem (exact for the
    /// trigonometric interpolant).
    pub fn translate_x(&self, z: f64) -> Self {
        let nyq = std::f64::consts::PI / self.grid.dx();
        apply_complex_multiplier(self, |xi, _| {
            if (xi - nyq).abs() < 1e-9 * nyq {
                C64::new((xi * z).cos(), 0.0)
            } else {
                C64::from_polar(1.0, -xi * z)
            }
        })
    }

    /// `u(-x, y)` on the periodic grid.
    pub fn reflect_x(&self) -> Self {
        let ny = self.grid.ny;
        let mut values = vec![C64::new(0.0, 0.0); self.values.len()];
        for ix in 0..self.grid.nx {
            let m = self.grid.mirror_x(ix);
            values[ix * ny..(ix + 1) * ny].copy_from_slice(&self.values[m * ny..(m + 1) * ny]);
        }
        Self { grid: self.grid, values }
    }

    pub fn real_part(&self) -> Self {
        self.map(|z| C64::new(z.re, 0.0))
    }
}

impl Spectrum2D {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn field(&self) -> Field2D {
        let mut values = self.coeffs.clone();
        fft2(&mut values, self.grid.nx, self.grid.ny, true);
        Field2D { grid: self.grid, values }
    }

    /// `Σ w(ξ, n) |û|²` scaled so that `w ≡ 1` gives the `L²` norm squared.
    pub fn weighted_norm_sq(&self, w: impl Fn(f64, i64) -> f64) -> f64 {
        let ny = self.grid.ny;
        let mut s = 0.0;
        for kx in 0..self.grid.nx {
            let xi = self.grid.xi(kx);
            for ky in 0..ny {
                s += w(xi, self.grid.mode(ky)) * self.coeffs[kx * ny + ky].norm_sqr();
            }
        }
        s * self.grid.cell_area() / self.grid.len() as f64
    }

    /// `Re Σ w(ξ, n) û conj(v̂)` scaled like [`Self::weighted_norm_sq`].
    pub fn weighted_inner(&self, other: &Spectrum2D, w: impl Fn(f64, i64) -> f64) -> C64 {
        let ny = self.grid.ny;
        let mut s = C64::new(0.0, 0.0);
        for kx in 0..self.grid.nx {
            let xi = self.grid.xi(kx);
            for ky in 0..ny {
                let i = kx * ny + ky;
                s += self.coeffs[i] * other.coeffs[i].conj() * w(xi, self.grid.mode(ky));
            }
        }
        s * self.grid.cell_area() / self.grid.len() as f64
    }
}

/// Inverse transform of `(a(ξ) + b(n)) · û(ξ, n)`.
///
/// With `a = ξ²` this is `-∂_xx`; with `b = |n|^s` it is `|D_y|^s`.
pub fn apply_multiplier(
    u: &Field2D,
    a: impl Fn(f64) -> f64,
    b: impl Fn(i64) -> f64,
) -> Result<Field2D> {
    check_finite_c(&u.values)?;
    Ok(apply_complex_multiplier(u, |xi, n| C64::new(a(xi) + b(n), 0.0)))
}

pub(crate) fn apply_complex_multiplier(u: &Field2D, m: impl Fn(f64, i64) -> C64) -> Field2D {
    let grid = u.grid;
    let mut buf = u.values.clone();
    fft2(&mut buf, grid.nx, grid.ny, false);
    let ny = grid.ny;
    let ms: Vec<i64> = (0..ny).map(|k| grid.mode(k)).collect();
    for kx in 0..grid.nx {
        let xi = grid.xi(kx);
        for (ky, &n) in ms.iter().enumerate() {
            buf[kx * ny + ky] *= m(xi, n);
        }
    }
    fft2(&mut buf, grid.nx, grid.ny, true);
    Field2D { grid, values: buf }
}

/// `P_{≤k}`: keeps the `y`-modes with `|n| <= k`.
pub fn project_low_modes(u: &Field2D, k: u64) -> Field2D {
    filter_modes(u, |n| n.unsigned_abs() <= k)
}

/// Keeps the `y`-modes selected by `keep`; no `x` transform is needed.
pub fn filter_modes(u: &Field2D, keep: impl Fn(i64) -> bool) -> Field2D {
    let grid = u.grid;
    let ny = grid.ny;
    let mask: Vec<bool> = (0..ny).map(|k| keep(grid.mode(k))).collect();
    let mut buf = u.values.clone();
    fft1(&mut buf, ny, false);
    for row in buf.chunks_mut(ny) {
        for (z, &m) in row.iter_mut().zip(&mask) {
            if !m {
                *z = C64::new(0.0, 0.0);
            }
        }
    }
    fft1(&mut buf, ny, true);
    Field2D { grid, values: buf }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    fn grid() -> GridSpec {
        make_grid(10.0, 64, 8, 3.0).unwrap()
    }

    #[test]
    fn y_independent_field_is_killed_by_dy() {
        let g = grid();
        let u = Field2D::from_fn(g, |x, _| C64::new((-x * x).exp(), 0.0));
        let v = apply_multiplier(&u, |_| 0.0, |n| n.abs() as f64).unwrap();
        assert!(v.sup_norm() < 1e-14);
    }

    #[test]
    fn single_mode_is_scaled_by_its_frequency() {
        let g = grid();
        let n0 = 3.0;
        let u = Field2D::from_fn(g, |x, y| C64::from_polar((-x * x).exp(), n0 * y));
        let v = apply_multiplier(&u, |_| 0.0, |n| n.abs() as f64).unwrap();
        let err = v.sub(&u.scale(n0)).sup_norm();
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn projection_keeps_and_removes_modes() {
        let g = grid();
        let flat = Field2D::from_fn(g, |x, _| C64::new((-x * x).exp(), 0.0));
        assert!(project_low_modes(&flat, 0).sub(&flat).sup_norm() < 1e-14);
        let one = Field2D::from_fn(g, |x, y| C64::from_polar((-x * x).exp(), y));
        assert!(project_low_modes(&one, 0).sup_norm() < 1e-14);
    }

    #[test]
    fn roll_and_translate_agree_on_whole_cells() {
        let g = grid();
        let u = Field2D::from_fn(g, |x, y| C64::new((-x * x).exp() * (1.0 + y.cos()), x.sin() * (-x * x).exp()));
        let a = u.roll_x(3);
        let b = u.translate_x(3.0 * g.dx());
        assert!(a.sub(&b).sup_norm() < 1e-12);
    }

    #[test]
    fn reflect_is_an_involution() {
        let g = grid();
        let u = Field2D::from_fn(g, |x, y| C64::new(x + y, x * y));
        assert_eq!(u.reflect_x().reflect_x(), u);
    }

    #[test]
    fn spectral_derivative_of_gaussian() {
        let g = make_grid(10.0, 128, 2, 3.0).unwrap();
        let f = Field1D::from_fn(g, |x| (-x * x).exp());
        let d = f.derivative(1);
        let exact = Field1D::from_fn(g, |x| -2.0 * x * (-x * x).exp());
        assert!(d.sub(&exact).sup_norm() < 1e-10);
    }

    #[test]
    fn rejects_nonfinite_input() {
        let g = grid();
        let mut v = vec![C64::new(0.0, 0.0); g.len()];
        v[3] = C64::new(f64::NAN, 0.0);
        assert!(Field2D::new(g, v).is_err());
    }
}
