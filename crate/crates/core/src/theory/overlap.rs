//! Growth rate of the second-moment terms as a function of the overlap `s = S/n`.

use crate::error::{RbError, Result};
use crate::params::RbParams;
use crate::report::columns;

/// `h(s) = r ln(1 + p/(1-p) s^k) - alpha s`.
pub fn overlap_h(params: &RbParams, s: f64) -> f64 {
    let odds = params.p / (1.0 - params.p);
    params.r * (odds * s.powi(params.k as i32)).ln_1p() - params.alpha * s
}

/// Closed-form second derivative of [`overlap_h`].
pub fn overlap_h2(params: &RbParams, s: f64) -> f64 {
    let (k, p, r) = (params.k as i32, params.p, params.r);
    let kf = k as f64;
    let sk = s.powi(k);
    let denom = 1.0 - p + p * sk;
    r * kf * p * s.powi(k - 2) * ((kf - 1.0) * (1.0 - p) - p * sk) / (denom * denom)
}

/// `g(s) = k(k-1)(s^k - s^(k-1)) / 2`, the finite-n correction inside the pair terms.
pub fn overlap_g(k: usize, s: f64) -> f64 {
    let kf = k as f64;
    kf * (kf - 1.0) * (s.powi(k as i32) - s.powi(k as i32 - 1)) / 2.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapCurve {
    pub s_grid: Vec<f64>,
    pub h_vals: Vec<f64>,
    pub h2_vals: Vec<f64>,
    pub g_vals: Vec<f64>,
    /// `ln f(s) = h(s) n ln n`
    pub log_f_vals: Vec<f64>,
}

impl OverlapCurve {
    pub fn h_columns(&self) -> String {
        columns(&self.s_grid, &self.h_vals)
    }

    pub fn h2_columns(&self) -> String {
        columns(&self.s_grid, &self.h2_vals)
    }

    pub fn g_columns(&self) -> String {
        columns(&self.s_grid, &self.g_vals)
    }

    pub fn log_f_columns(&self) -> String {
        columns(&self.s_grid, &self.log_f_vals)
    }
}

/// Samples `h`, `h''`, `g` and `ln f` on a uniform grid of `grid_size` points over `[0, 1]`.
pub fn overlap_curve(params: &RbParams, grid_size: usize) -> Result<OverlapCurve> {
    params.validate()?;
    if grid_size < 3 {
        return Err(RbError::invalid("grid_size", format!("{grid_size} < 3")));
    }
    let last = (grid_size - 1) as f64;
    let s_grid: Vec<f64> = (0..grid_size).map(|i| i as f64 / last).collect();
    let h_vals: Vec<f64> = s_grid.iter().map(|&s| overlap_h(params, s)).collect();
    let scale = params.n_ln_n();
    Ok(OverlapCurve {
        h2_vals: s_grid.iter().map(|&s| overlap_h2(params, s)).collect(),
        g_vals: s_grid.iter().map(|&s| overlap_g(params.k, s)).collect(),
        log_f_vals: h_vals.iter().map(|h| h * scale).collect(),
        h_vals,
        s_grid,
    })
}
