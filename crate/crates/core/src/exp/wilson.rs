use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{RbError, Result};

/// Two-sided standard normal quantile for `confidence`.
pub fn z_score(confidence: f64) -> f64 {
    let normal = Normal::standard();
    normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0)
}

/// Wilson score interval for a binomial proportion, clipped to `[0, 1]`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 || successes > trials {
        return Err(RbError::invalid("trials", format!("need 0 <= successes ({successes}) <= trials ({trials}), trials >= 1")));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(RbError::invalid("confidence", format!("{confidence} must lie in (0, 1)")));
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = z_score(confidence);
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (center - half).clamp(0.0, p) };
    let hi = if successes == trials { 1.0 } else { (center + half).clamp(p, 1.0) };
    Ok((lo, hi))
}
