//! Discretization of the cylinder: a periodized interval `[-L, L)` in `x`
//! and the unit-circumference-`2π` torus in `y`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub const DEFAULT_NX: usize = 1024;
pub const DEFAULT_NY: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_halfwidth: f64,
    pub nx: usize,
    pub ny: usize,
    pub p: f64,
}

/// Validates and builds a grid.
pub fn make_grid(x_halfwidth: f64, nx: usize, ny: usize, p: f64) -> Result<GridSpec> {
    if !(x_halfwidth.is_finite() && x_halfwidth > 0.0) {
        return Err(invalid(format!("x_halfwidth must be positive, got {x_halfwidth}")));
    }
    if nx < 16 || !nx.is_power_of_two() {
        return Err(invalid(format!("nx must be a power of two >= 16, got {nx}")));
    }
    if ny < 2 || ny % 2 != 0 {
        return Err(invalid(format!("ny must be an even integer >= 2, got {ny}")));
    }
    check_exponent(p)?;
    Ok(GridSpec { x_halfwidth, nx, ny, p })
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if !(p > 1.0 && p < 5.0) {
        return Err(invalid(format!("p must lie in (1, 5), got {p}")));
    }
    Ok(())
}

pub(crate) fn check_omega(omega: f64) -> Result<()> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(invalid("omega must be positive"));
    }
    Ok(())
}

/// Half-width that keeps `R_ω` wraparound below roughly `1e-9`:
/// the soliton decays like `exp(-√ω |x|)`.
pub fn default_halfwidth(omega: f64) -> f64 {
    (25.0 / omega.sqrt()).max(40.0)
}

/// Smallest power of two `≥ 1024` with `b·dx ≤ 0.15`, where
/// `b = (p-1)√ω/2` is the sech rate of `R_ω`. The profile has complex
/// singularities at distance `π/(2b)` from the real axis, so this keeps the
/// spectral second derivative accurate to about `1e-12`.
pub fn default_nx(p: f64, omega: f64, x_halfwidth: f64) -> usize {
    let b = 0.5 * (p - 1.0) * omega.sqrt();
    let needed = (2.0 * x_halfwidth * b / 0.15).ceil() as usize;
    needed.next_power_of_two().max(DEFAULT_NX)
}

impl GridSpec {
    /// Half-width `default_halfwidth(ω)`, `ny = 32`, and `nx = 1024` unless
    /// the profile is too narrow for it (see [`default_nx`]).
    pub fn default_for(p: f64, omega: f64) -> Result<Self> {
        check_omega(omega)?;
        check_exponent(p)?;
        let l = default_halfwidth(omega);
        make_grid(l, default_nx(p, omega, l), DEFAULT_NY, p)
    }

    pub fn with_exponent(self, p: f64) -> Result<Self> {
        make_grid(self.x_halfwidth, self.nx, self.ny, p)
    }

    pub fn with_halfwidth(self, x_halfwidth: f64) -> Result<Self> {
        make_grid(x_halfwidth, self.nx, self.ny, self.p)
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.x_halfwidth / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        2.0 * PI / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.x_halfwidth + j as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        -PI + j as f64 * self.dy()
    }

    pub fn x_nodes(&self) -> Vec<f64> {
        (0..self.nx).map(|j| self.x(j)).collect()
    }

    pub fn y_nodes(&self) -> Vec<f64> {
        (0..self.ny).map(|j| self.y(j)).collect()
    }

    /// Angular wavenumber of FFT bin `k` along `x`. The Nyquist bin is
    /// reported with positive sign.
    pub fn xi(&self, k: usize) -> f64 {
        let n = self.nx as i64;
        let k = k as i64;
        let signed = if k <= n / 2 { k } else { k - n };
        PI / self.x_halfwidth * signed as f64
    }

    /// Integer `y`-mode of FFT bin `k`, with `|n| <= ny/2`.
    pub fn mode(&self, k: usize) -> i64 {
        let n = self.ny as i64;
        let k = k as i64;
        if k <= n / 2 {
            k
        } else {
            k - n
        }
    }

    /// Index of the mirror node `x -> -x` on the periodic grid.
    pub fn mirror_x(&self, j: usize) -> usize {
        (self.nx - j) % self.nx
    }

    /// Largest symbol of `-∂_xx + |D_y|` resolved by the grid.
    pub fn max_linear_symbol(&self) -> f64 {
        let xi = PI / self.dx();
        xi * xi + (self.ny / 2) as f64
    }

    pub(crate) fn same_discretization(&self, other: &GridSpec) -> bool {
        self.nx == other.nx && self.ny == other.ny && self.x_halfwidth == other.x_halfwidth
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_grid_spacing() {
        let g = make_grid(40.0, 1024, 32, 3.0).unwrap();
        assert_eq!(g.dx(), 0.078125);
        assert_eq!(g.x(0), -40.0);
        assert!((g.dy() - 2.0 * PI / 32.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_grid(40.0, 1000, 32, 3.0).is_err());
        assert!(make_grid(40.0, 1024, 32, 5.5).is_err());
        assert!(make_grid(40.0, 1024, 31, 3.0).is_err());
        assert!(make_grid(40.0, 8, 32, 3.0).is_err());
        assert!(make_grid(-1.0, 1024, 32, 3.0).is_err());
        assert!(make_grid(40.0, 1024, 32, 1.0).is_err());
    }

    #[test]
    fn modes_are_bounded_by_half_ny() {
        let g = make_grid(10.0, 16, 8, 3.0).unwrap();
        let modes: Vec<i64> = (0..8).map(|k| g.mode(k)).collect();
        assert_eq!(modes, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert!(modes.iter().all(|n| n.unsigned_abs() <= 4));
    }

    #[test]
    fn mirror_maps_x_to_minus_x() {
        let g = make_grid(10.0, 16, 2, 3.0).unwrap();
        for j in 0..16 {
            let m = g.mirror_x(j);
            assert!((g.x(m) + g.x(j)).abs() < 1e-12 || (g.x(j) + 10.0).abs() < 1e-12);
        }
    }

    #[test]
    fn default_halfwidth_grows_for_small_omega() {
        assert_eq!(default_halfwidth(1.0), 40.0);
        assert!((default_halfwidth(0.01) - 250.0).abs() < 1e-12);
    }
}
