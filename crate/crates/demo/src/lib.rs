//! Browser bindings for three interactive views: the overlap exponent `h(s)`,
//! analytic window endpoints across `n`, and a small empirical `Pr(Sat)` curve.
//!
//! Each export returns a flat `Float64Array`; layouts are documented per function.

use wasm_bindgen::prelude::*;

use rblab::exp::{parse_grid, sweep, SweepConfig};
use rblab::solve::Budget;
use rblab::theory::{critical_r, overlap_curve, window, Axis};
use rblab::RbParams;

/// Largest size the in-browser sweep accepts; the solver is exact and single-threaded here.
pub const MAX_DEMO_N: usize = 24;
pub const MAX_DEMO_TRIALS: usize = 400;

fn js_err(e: impl ToString) -> JsError {
    JsError::new(&e.to_string())
}

pub fn overlap_values(k: usize, alpha: f64, p: f64, r: f64, points: usize) -> Result<Vec<f64>, String> {
    let params = RbParams::new(2, k, alpha, p, r).map_err(|e| e.to_string())?;
    let curve = overlap_curve(&params, points).map_err(|e| e.to_string())?;
    Ok(curve.s_grid.iter().zip(&curve.h_vals).flat_map(|(&s, &h)| [s, h]).collect())
}

/// `[s0, h0, s1, h1, ...]` on a uniform grid of `points` values of `s` in `[0, 1]`.
#[wasm_bindgen(js_name = overlapCurve)]
pub fn overlap_curve_js(k: usize, alpha: f64, p: f64, r: f64, points: usize) -> Result<Vec<f64>, JsError> {
    overlap_values(k, alpha, p, r, points).map_err(js_err)
}

pub fn window_values(k: usize, alpha: f64, p: f64, delta: f64, ns: &[usize]) -> Result<Vec<f64>, String> {
    let mut out = Vec::with_capacity(4 * ns.len());
    for &n in ns {
        let params = RbParams::new(n, k, alpha, p, critical_r(alpha, p)).map_err(|e| e.to_string())?;
        let w = window(&params, delta, Axis::R).map_err(|e| e.to_string())?;
        out.extend([n as f64, w.lower, w.critical(), w.upper]);
    }
    Ok(out)
}

/// `[n, r_minus, r_cr, r_plus]` for each of `steps` log-spaced sizes in `[n_lo, n_hi]`.
#[wasm_bindgen(js_name = windowSeries)]
pub fn window_series_js(
    k: usize,
    alpha: f64,
    p: f64,
    delta: f64,
    n_lo: usize,
    n_hi: usize,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    window_values(k, alpha, p, delta, &log_spaced(n_lo, n_hi, steps)).map_err(js_err)
}

/// Distinct integers spread geometrically over `[lo, hi]`.
pub fn log_spaced(lo: usize, hi: usize, steps: usize) -> Vec<usize> {
    let (lo, hi) = (lo.max(2), hi.max(lo.max(2)));
    if steps <= 1 || lo == hi {
        return vec![lo];
    }
    let ratio = (hi as f64 / lo as f64).ln() / (steps - 1) as f64;
    let mut ns: Vec<usize> = (0..steps)
        .map(|i| (lo as f64 * (ratio * i as f64).exp()).round() as usize)
        .collect();
    ns.dedup();
    ns
}

#[allow(clippy::too_many_arguments)]
pub fn transition_values(
    n: usize,
    k: usize,
    alpha: f64,
    p: f64,
    r_lo: f64,
    r_hi: f64,
    points: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>, String> {
    if n > MAX_DEMO_N || trials > MAX_DEMO_TRIALS {
        return Err(format!("demo limits: n <= {MAX_DEMO_N}, trials <= {MAX_DEMO_TRIALS}"));
    }
    let grid = parse_grid(&format!("{r_lo}:{r_hi}:{points}"))?;
    let mut cfg = SweepConfig::new(Axis::R, k, alpha, p, vec![n], grid);
    cfg.trials = trials;
    cfg.master_seed = seed;
    cfg.budget = Budget::nodes(200_000);
    cfg.record_timing = false;
    let rows = sweep(&cfg).map_err(|e| e.to_string())?;
    Ok(rows.iter().flat_map(|r| [r.value, r.prsat, r.ci_lo, r.ci_hi]).collect())
}

/// `[r, prsat, ci_lo, ci_hi]` per grid point of an exact-solver sweep at one `n`.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen(js_name = transitionCurve)]
pub fn transition_curve_js(
    n: usize,
    k: usize,
    alpha: f64,
    p: f64,
    r_lo: f64,
    r_hi: f64,
    points: usize,
    trials: usize,
    seed: u32,
) -> Result<Vec<f64>, JsError> {
    transition_values(n, k, alpha, p, r_lo, r_hi, points, trials, seed as u64).map_err(js_err)
}

#[wasm_bindgen(js_name = criticalR)]
pub fn critical_r_js(alpha: f64, p: f64) -> f64 {
    critical_r(alpha, p)
}
