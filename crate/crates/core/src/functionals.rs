//! Mass, Hamiltonian, action, Nehari functional and the energy-space norm.
//!
//! All functionals are evaluated with a single forward transform: the
//! quadratic parts are exact sums over Fourier coefficients and the
//! `L^{p+1}` part is a grid sum (spectrally accurate for smooth periodic data).

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{apply_complex_multiplier, Field2D};
use crate::grid::check_omega;

/// The four integrals every functional is assembled from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    /// `‖∂_x u‖²`
    pub grad_x: f64,
    /// `‖|D_y|^{1/2} u‖²`
    pub transverse: f64,
    /// `‖u‖²`
    pub l2: f64,
    /// `‖u‖_{p+1}^{p+1}`
    pub lp: f64,
}

impl Norms {
    pub fn of(u: &Field2D) -> Self {
        let spec = u.spectrum();
        let p = u.grid().p;
        Self {
            grad_x: spec.weighted_norm_sq(|xi, _| xi * xi),
            transverse: spec.weighted_norm_sq(|_, n| n.abs() as f64),
            l2: u.l2_norm_sq(),
            lp: u.lq_integral(p + 1.0),
        }
    }

    /// `‖u‖_X²`
    pub fn x_norm_sq(&self) -> f64 {
        self.grad_x + self.transverse + self.l2
    }
}

/// Coefficients of the quadratic form `‖∂_x u‖² + β ‖|D_y|^{1/2} u‖² + ω ‖u‖²`.
///
/// `β = 1` is the waveguide action; `β = 1/ω` with `ω = 1` is the
/// `x`-rescaled action whose minimizer is `Q̃_ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionWeights {
    pub transverse: f64,
    pub omega: f64,
}

impl ActionWeights {
    pub fn standard(omega: f64) -> Self {
        Self { transverse: 1.0, omega }
    }

    pub fn rescaled(omega: f64) -> Self {
        Self { transverse: 1.0 / omega, omega: 1.0 }
    }

    pub fn quadratic(&self, n: &Norms) -> f64 {
        n.grad_x + self.transverse * n.transverse + self.omega * n.l2
    }

    pub fn action(&self, n: &Norms, p: f64) -> f64 {
        0.5 * self.quadratic(n) - n.lp / (p + 1.0)
    }

    pub fn nehari(&self, n: &Norms) -> f64 {
        self.quadratic(n) - n.lp
    }

    /// `(1/2 - 1/(p+1))` times the quadratic form; equals the action on the
    /// Nehari manifold.
    pub fn i_functional(&self, n: &Norms, p: f64) -> f64 {
        (0.5 - 1.0 / (p + 1.0)) * self.quadratic(n)
    }

    /// Symbol of `-∂_xx + β|D_y| + ω`.
    pub fn symbol(&self, xi: f64, n: i64) -> f64 {
        xi * xi + self.transverse * n.abs() as f64 + self.omega
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub mass: f64,
    pub hamiltonian: f64,
    pub action: f64,
    pub nehari: f64,
    pub i_omega: f64,
    pub x_norm: f64,
    pub lp_norm_p1: f64,
}

/// Mass, energy, action, Nehari functional, `I_ω`, `‖u‖_X` and `‖u‖_{p+1}`.
pub fn functionals(u: &Field2D, omega: f64) -> Result<FunctionalReport> {
    check_omega(omega)?;
    let p = u.grid().p;
    let n = Norms::of(u);
    let w = ActionWeights::standard(omega);
    let mass = 0.5 * n.l2;
    let hamiltonian = 0.5 * (n.grad_x + n.transverse) - n.lp / (p + 1.0);
    Ok(FunctionalReport {
        mass,
        hamiltonian,
        action: hamiltonian + omega * mass,
        nehari: w.nehari(&n),
        i_omega: w.i_functional(&n, p),
        x_norm: n.x_norm_sq().sqrt(),
        lp_norm_p1: n.lp.powf(1.0 / (p + 1.0)),
    })
}

pub fn mass(u: &Field2D) -> f64 {
    0.5 * u.l2_norm_sq()
}

pub fn hamiltonian(u: &Field2D) -> f64 {
    let n = Norms::of(u);
    0.5 * (n.grad_x + n.transverse) - n.lp / (u.grid().p + 1.0)
}

/// `|u|^{p-1} u`
pub fn nonlinearity(u: &Field2D) -> Field2D {
    let p = u.grid().p;
    u.map(|z| {
        let r = z.norm();
        if r == 0.0 {
            C64::new(0.0, 0.0)
        } else {
            z * r.powf(p - 1.0)
        }
    })
}

/// `L²` gradient of the weighted action:
/// `-∂_xx u + β|D_y| u + ω u - |u|^{p-1} u`.
pub fn action_gradient(u: &Field2D, w: ActionWeights) -> Field2D {
    let lin = apply_complex_multiplier(u, |xi, n| C64::new(w.symbol(xi, n), 0.0));
    lin.sub(&nonlinearity(u))
}

/// `X` inner product `Re ∫∫ (∂_x u ∂_x v̄ + |D_y| u v̄ + u v̄)`, returned
/// complex so callers can optimize over a phase.
pub fn x_inner(u: &Field2D, v: &Field2D) -> C64 {
    u.spectrum()
        .weighted_inner(&v.spectrum(), |xi, n| xi * xi + n.abs() as f64 + 1.0)
}

pub fn x_norm(u: &Field2D) -> f64 {
    Norms::of(u).x_norm_sq().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field1D;
    use crate::grid::make_grid;
    use std::f64::consts::PI;

    #[test]
    fn zero_field_gives_zero_report() {
        let g = make_grid(10.0, 64, 4, 3.0).unwrap();
        let r = functionals(&Field2D::zeros(g), 1.0).unwrap();
        assert_eq!(r.mass, 0.0);
        assert_eq!(r.hamiltonian, 0.0);
        assert_eq!(r.action, 0.0);
        assert_eq!(r.nehari, 0.0);
        assert_eq!(r.x_norm, 0.0);
    }

    #[test]
    fn rejects_nonpositive_omega() {
        let g = make_grid(10.0, 64, 4, 3.0).unwrap();
        assert!(functionals(&Field2D::zeros(g), 0.0).is_err());
    }

    #[test]
    fn action_is_affine_in_omega() {
        let g = make_grid(40.0, 1024, 4, 3.0).unwrap();
        let r = Field1D::from_fn(g, |x| 2f64.sqrt() / x.cosh());
        let u = Field2D::lift(&r);
        let a1 = functionals(&u, 1.0).unwrap();
        let a2 = functionals(&u, 2.0).unwrap();
        assert!((a2.action - a2.mass - a1.action).abs() < 1e-12);
        assert!((a1.mass - 4.0 * PI).abs() < 1e-10);
    }
}
