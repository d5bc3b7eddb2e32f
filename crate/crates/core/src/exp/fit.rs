use crate::error::{RbError, Result};

/// Ordinary least squares `y = intercept + slope x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// standard error of the slope; zero for two points or a perfect fit
    pub slope_stderr: f64,
}

pub fn ols(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return Err(RbError::InsufficientData(format!("{n} points for a line fit")));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(RbError::InsufficientData("all x values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let slope_stderr = if n > 2 {
        let sse: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        (sse / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LineFit { slope, intercept, slope_stderr })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub ns: Vec<usize>,
    pub widths: Vec<f64>,
    /// `1 / (n ln n)`
    pub upper_rate: Vec<f64>,
    /// `1 / (n^(1-epsilon) ln n)`
    pub lower_rate: Vec<f64>,
    pub epsilon: f64,
    /// slope of `ln width` against `ln(n ln n)`
    pub fit: LineFit,
}

/// Regresses `ln(width)` on `ln(n ln n)`. Reports, never judges.
pub fn scaling_fit(ns: &[usize], widths: &[f64], epsilon: f64) -> Result<ScalingFit> {
    if ns.len() != widths.len() {
        return Err(RbError::invalid("widths", "one width per n required"));
    }
    let mut distinct = ns.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(RbError::InsufficientData(format!("{} distinct n; need at least 3", distinct.len())));
    }
    if let Some(w) = widths.iter().find(|&&w| !(w > 0.0 && w.is_finite())) {
        return Err(RbError::InsufficientData(format!("width {w} is not positive")));
    }
    if ns.iter().any(|&n| n < 2) {
        return Err(RbError::invalid("n", "every n must be at least 2"));
    }
    let n_ln_n: Vec<f64> = ns.iter().map(|&n| n as f64 * (n as f64).ln()).collect();
    let xs: Vec<f64> = n_ln_n.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = widths.iter().map(|w| w.ln()).collect();
    Ok(ScalingFit {
        ns: ns.to_vec(),
        widths: widths.to_vec(),
        upper_rate: n_ln_n.iter().map(|v| 1.0 / v).collect(),
        lower_rate: ns
            .iter()
            .map(|&n| 1.0 / ((n as f64).powf(1.0 - epsilon) * (n as f64).ln()))
            .collect(),
        epsilon,
        fit: ols(&xs, &ys)?,
    })
}
