//! The line soliton `R_ω(x)`, its derivative and powers, the critical
//! frequency `ω_p` and the one-dimensional ground-state level `m_{ω,ℝ}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field1D;
use crate::grid::{check_exponent, check_omega, default_halfwidth, make_grid, GridSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolitonParams {
    pub p: f64,
    pub omega: f64,
}

impl SolitonParams {
    pub fn new(p: f64, omega: f64) -> Result<Self> {
        check_exponent(p)?;
        check_omega(omega)?;
        Ok(Self { p, omega })
    }

    /// Peak value `((p+1)ω/2)^{1/(p-1)}`.
    pub fn amplitude(&self) -> f64 {
        ((self.p + 1.0) * self.omega / 2.0).powf(1.0 / (self.p - 1.0))
    }

    /// Inverse width `(p-1)√ω/2`.
    pub fn rate(&self) -> f64 {
        (self.p - 1.0) * self.omega.sqrt() / 2.0
    }

    /// Exponent of the `sech` profile, `2/(p-1)`.
    pub fn sech_power(&self) -> f64 {
        2.0 / (self.p - 1.0)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.amplitude() * sech_pow(self.rate() * x, self.sech_power())
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let z = self.rate() * x;
        -self.amplitude() * self.sech_power() * self.rate() * sech_pow(z, self.sech_power()) * z.tanh()
    }

    fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        if grid.p != self.p {
            return Err(Error::GridMismatch(format!(
                "grid exponent {} differs from soliton exponent {}",
                grid.p, self.p
            )));
        }
        Ok(())
    }
}

/// `sech(z)^q` without overflow: `(2 e^{-|z|} / (1 + e^{-2|z|}))^q`,
/// underflowing to zero in the far field.
pub fn sech_pow(z: f64, q: f64) -> f64 {
    let a = z.abs();
    let log_sech = std::f64::consts::LN_2 - a - (-2.0 * a).exp().ln_1p();
    (q * log_sech).exp()
}

/// Samples `R_ω(x) = ((p+1)ω/2)^{1/(p-1)} sech^{2/(p-1)}((p-1)√ω x / 2)`.
pub fn line_soliton(params: SolitonParams, grid: &GridSpec) -> Result<Field1D> {
    params.check_grid(grid)?;
    Ok(Field1D::from_fn(*grid, |x| params.value(x)))
}

/// Analytic `∂_x R_ω`.
pub fn soliton_x_derivative(params: SolitonParams, grid: &GridSpec) -> Result<Field1D> {
    params.check_grid(grid)?;
    Ok(Field1D::from_fn(*grid, |x| params.derivative(x)))
}

/// `R_ω^{(p+1)/2}`, the ground state of `L_{ω,+,0}`.
pub fn soliton_power_eigenfunction(params: SolitonParams, grid: &GridSpec) -> Result<Field1D> {
    params.check_grid(grid)?;
    let e = (params.p + 1.0) / 2.0;
    Ok(Field1D::from_fn(*grid, |x| params.value(x).powf(e)))
}

/// `ω_p = 4 / ((p-1)(p+3))`. Diverges as `p → 1⁺`.
pub fn omega_p(p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(4.0 / ((p - 1.0) * (p + 3.0)))
}

/// Exponent of the `ω`-scaling of the action levels, `(p+1)/(p-1) - 1/2`.
pub fn action_scaling_exponent(p: f64) -> f64 {
    (p + 1.0) / (p - 1.0) - 0.5
}

/// `((p-1)/(2(p+1))) ‖R_ω‖_{p+1}^{p+1}` on the given grid.
pub fn m_line_on(grid: &GridSpec, omega: f64) -> Result<f64> {
    let params = SolitonParams::new(grid.p, omega)?;
    let r = line_soliton(params, grid)?;
    let p = params.p;
    let lp: f64 = r.values().iter().map(|v| v.abs().powf(p + 1.0)).sum::<f64>() * grid.dx();
    Ok((p - 1.0) / (2.0 * (p + 1.0)) * lp)
}

fn quadrature_grid(p: f64, omega: f64) -> Result<GridSpec> {
    // resolve the width 1/√ω with at least ~50 points per unit width
    let l = default_halfwidth(omega);
    let mut nx = 4096;
    while 2.0 * l / (nx as f64) * omega.sqrt() > 0.02 && nx < (1 << 22) {
        nx *= 2;
    }
    make_grid(l, nx, 2, p)
}

/// `m_{ω,ℝ} = S_{ω,ℝ}(R_ω)` by quadrature, cross-checked against the
/// scaling law `ω^{(p+1)/(p-1) - 1/2} m_{1,ℝ}`.
pub fn m_line(p: f64, omega: f64) -> Result<f64> {
    check_exponent(p)?;
    check_omega(omega)?;
    let value = m_line_on(&quadrature_grid(p, omega)?, omega)?;
    let unit = m_line_on(&quadrature_grid(p, 1.0)?, 1.0)?;
    let scaled = omega.powf(action_scaling_exponent(p)) * unit;
    if (value - scaled).abs() > 1e-8 * scaled.abs() {
        return Err(Error::Consistency(format!(
            "m_line quadrature {value} disagrees with scaling law {scaled}"
        )));
    }
    Ok(value)
}
