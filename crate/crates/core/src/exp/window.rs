//! Empirical window extraction from noisy `Pr(Sat)` estimates.

use crate::error::{RbError, Result};

/// Weighted least-squares projection onto non-increasing sequences
/// (pool adjacent violators).
pub fn isotonic_decreasing(ys: &[f64], weights: &[f64]) -> Vec<f64> {
    assert_eq!(ys.len(), weights.len());
    // blocks of (mean, weight, length)
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(ys.len());
    for (&y, &w) in ys.iter().zip(weights) {
        blocks.push((y, w, 1));
        while blocks.len() > 1 {
            let (m2, w2, l2) = blocks[blocks.len() - 1];
            let (m1, w1, l1) = blocks[blocks.len() - 2];
            if m1 >= m2 {
                break;
            }
            blocks.truncate(blocks.len() - 2);
            let w = w1 + w2;
            let m = if w > 0.0 { (m1 * w1 + m2 * w2) / w } else { (m1 + m2) / 2.0 };
            blocks.push((m, w, l1 + l2));
        }
    }
    blocks.into_iter().flat_map(|(m, _, l)| std::iter::repeat_n(m, l)).collect()
}

/// First crossing of `level` by a non-increasing piecewise-linear curve.
pub fn crossing(xs: &[f64], fitted: &[f64], level: f64) -> Result<f64> {
    if fitted.first().is_none_or(|&f| f < level) {
        return Err(RbError::Range(format!("fitted curve starts below level {level}")));
    }
    for i in 0..fitted.len() - 1 {
        let (f0, f1) = (fitted[i], fitted[i + 1]);
        if f0 >= level && f1 < level {
            let t = (f0 - level) / (f0 - f1);
            return Ok(xs[i] + t * (xs[i + 1] - xs[i]));
        }
    }
    Err(RbError::Range(format!("fitted curve never drops below level {level}")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalWindow {
    pub n: usize,
    pub delta: f64,
    /// where the fitted curve crosses `1 - delta`
    pub lower: f64,
    /// where the fitted curve crosses `delta`
    pub upper: f64,
    pub width: f64,
    pub xs: Vec<f64>,
    pub fitted: Vec<f64>,
    /// weighted sum of squared residuals of the isotonic fit
    pub fit_residual: f64,
}

/// Fits a non-increasing curve to `(xs, ys)` and reads off the `1 - delta`
/// and `delta` crossings by linear interpolation.
pub fn empirical_window(n: usize, xs: &[f64], ys: &[f64], weights: &[f64], delta: f64) -> Result<EmpiricalWindow> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(RbError::invalid("delta", format!("delta = {delta} must lie in (0, 1/2)")));
    }
    if xs.len() != ys.len() || xs.len() != weights.len() {
        return Err(RbError::invalid("points", "xs, ys and weights differ in length"));
    }
    if xs.len() < 2 {
        return Err(RbError::InsufficientData(format!("{} grid points; need at least 2", xs.len())));
    }
    if !xs.windows(2).all(|w| w[0] < w[1]) {
        return Err(RbError::invalid("points", "axis values must be strictly increasing"));
    }
    let fitted = isotonic_decreasing(ys, weights);
    let fit_residual = ys
        .iter()
        .zip(&fitted)
        .zip(weights)
        .map(|((y, f), w)| w * (y - f) * (y - f))
        .sum();
    let lower = crossing(xs, &fitted, 1.0 - delta)?;
    let upper = crossing(xs, &fitted, delta)?;
    Ok(EmpiricalWindow {
        n,
        delta,
        lower,
        upper,
        width: upper - lower,
        xs: xs.to_vec(),
        fitted,
        fit_residual,
    })
}
