//! wasm-bindgen front end for the static page in `www/`.
//!
//! Every entry point takes the grid explicitly so the page can trade
//! resolution for speed; arrays come back flattened as `Float64Array`.

use wasm_bindgen::prelude::*;
use waveguide_core::groundstate::m_omega;
use waveguide_core::spectral::{growth_rate, spectrum_rows};
use waveguide_core::{line_soliton, m_line, make_grid, omega_p, GridSpec, SolitonParams};

fn js(e: waveguide_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn grid(p: f64, half_width: f64, nx: usize, ny: usize) -> Result<GridSpec, JsError> {
    make_grid(half_width, nx, ny, p).map_err(js)
}

#[wasm_bindgen(js_name = omegaP)]
pub fn omega_p_js(p: f64) -> Result<f64, JsError> {
    omega_p(p).map_err(js)
}

/// `[x_0, R(x_0), x_1, R(x_1), ...]`.
#[wasm_bindgen(js_name = solitonProfile)]
pub fn soliton_profile(p: f64, omega: f64, half_width: f64, nx: usize) -> Result<Vec<f64>, JsError> {
    let g = grid(p, half_width, nx, 2)?;
    let r = line_soliton(SolitonParams::new(p, omega).map_err(js)?, &g).map_err(js)?;
    Ok(g.x_nodes().into_iter().zip(r.values()).flat_map(|(x, &v)| [x, v]).collect())
}

/// Lowest `k` eigenvalues of `L_{+,a}`.
#[wasm_bindgen(js_name = lPlusSpectrum)]
pub fn l_plus_spectrum(p: f64, omega: f64, a: f64, k: usize, half_width: f64, nx: usize) -> Result<Vec<f64>, JsError> {
    let g = grid(p, half_width, nx, 2)?;
    Ok(spectrum_rows(p, omega, a, k, &g).map_err(js)?.iter().map(|r| r.eigenvalue).collect())
}

/// `[a_0, λ(a_0), a_1, λ(a_1), ...]` for `steps` shifts on `(0, a_max)`.
#[wasm_bindgen(js_name = growthCurve)]
pub fn growth_curve(p: f64, omega: f64, a_max: f64, steps: usize, half_width: f64, nx: usize) -> Result<Vec<f64>, JsError> {
    let g = grid(p, half_width, nx, 2)?;
    let mut out = Vec::with_capacity(2 * steps);
    for i in 0..steps {
        let a = a_max * (i + 1) as f64 / (steps + 1) as f64;
        out.push(a);
        out.push(growth_rate(p, omega, a, &g).map_err(js)?.lambda0);
    }
    Ok(out)
}

#[wasm_bindgen]
pub struct GroundState {
    nx: usize,
    ny: usize,
    density: Vec<f64>,
    action: f64,
    line_action: f64,
    y_dependence: f64,
    converged: bool,
}

#[wasm_bindgen]
impl GroundState {
    #[wasm_bindgen(getter)]
    pub fn nx(&self) -> usize {
        self.nx
    }

    #[wasm_bindgen(getter)]
    pub fn ny(&self) -> usize {
        self.ny
    }

    /// `|q|²`, x-major: entry `ix * ny + iy`.
    #[wasm_bindgen(getter)]
    pub fn density(&self) -> Vec<f64> {
        self.density.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn action(&self) -> f64 {
        self.action
    }

    /// `2π m_line(ω)`, the action of the line soliton on the cylinder.
    #[wasm_bindgen(getter, js_name = lineAction)]
    pub fn line_action(&self) -> f64 {
        self.line_action
    }

    #[wasm_bindgen(getter, js_name = yDependence)]
    pub fn y_dependence(&self) -> f64 {
        self.y_dependence
    }

    #[wasm_bindgen(getter)]
    pub fn converged(&self) -> bool {
        self.converged
    }
}

#[wasm_bindgen(js_name = groundState)]
pub fn ground_state(p: f64, omega: f64, half_width: f64, nx: usize, ny: usize) -> Result<GroundState, JsError> {
    let g = grid(p, half_width, nx, ny)?;
    let gs = m_omega(p, omega, &g).map_err(js)?;
    Ok(GroundState {
        nx,
        ny,
        density: gs.q.values().iter().map(|z| z.norm_sqr()).collect(),
        action: gs.m_omega,
        line_action: 2.0 * std::f64::consts::PI * m_line(p, omega).map_err(js)?,
        y_dependence: gs.y_dependence,
        converged: gs.converged,
    })
}
