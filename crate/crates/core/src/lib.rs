//! Numerics for the cubic-type Schrödinger equation on the cylinder `ℝ × 𝕋`
//! with a half-Laplacian in the periodic direction:
//!
//! `i ∂_t ψ + ∂_xx ψ - |D_y| ψ + |ψ|^{p-1} ψ = 0`.
//!
//! Line solitons `R_ω(x)` are `y`-independent standing waves. The crate
//! computes their transverse spectra, constrained action minimizers on the
//! cylinder, and split-step trajectories started near a line soliton.

pub mod error;
pub mod evolution;
pub mod field;
pub mod functionals;
pub mod grid;
pub mod groundstate;
pub mod io;
mod lobpcg;
pub mod soliton;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{Field1D, Field2D};
pub use grid::{make_grid, GridSpec};
pub use soliton::{line_soliton, m_line, omega_p, SolitonParams};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
