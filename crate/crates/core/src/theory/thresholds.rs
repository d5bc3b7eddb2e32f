use std::fmt;

use crate::error::{RbError, Result};
use crate::params::RbParams;

/// Control axis a window or sweep moves along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    R,
    P,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::R => "r",
            Axis::P => "p",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Axis {
    type Err = RbError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r" => Ok(Axis::R),
            "p" => Ok(Axis::P),
            other => Err(RbError::invalid("axis", format!("expected `r` or `p`, found `{other}`"))),
        }
    }
}

/// `r_cr = -alpha / ln(1 - p)`.
pub fn critical_r(alpha: f64, p: f64) -> f64 {
    -alpha / (-p).ln_1p()
}

/// `p_cr = 1 - e^{-alpha / r}`.
pub fn critical_p(alpha: f64, r: f64) -> f64 {
    -(-alpha / r).exp_m1()
}

/// `alpha > 1/k` and `k >= 1/(1-p)`: the threshold in `r` is exact.
pub fn in_r_regime(alpha: f64, k: usize, p: f64) -> bool {
    alpha > 1.0 / k as f64 && k as f64 >= 1.0 / (1.0 - p)
}

/// `alpha > 1/k` and `k e^{-alpha/r} >= 1`: the threshold in `p` is exact.
pub fn in_p_regime(alpha: f64, k: usize, r: f64) -> bool {
    alpha > 1.0 / k as f64 && k as f64 * (-alpha / r).exp() >= 1.0
}

/// `c = alpha + 1 - r_cr k p`, the constant controlling the lower window edge in `r`.
pub fn window_constant_r(alpha: f64, k: usize, p: f64) -> f64 {
    alpha + 1.0 - critical_r(alpha, p) * k as f64 * p
}

/// `c = alpha + 1 - r k p_cr`, the constant controlling the lower window edge in `p`.
pub fn window_constant_p(alpha: f64, k: usize, r: f64) -> f64 {
    alpha + 1.0 - r * k as f64 * critical_p(alpha, r)
}

/// `epsilon = (c + |c|) / 2`.
pub fn epsilon_of(c: f64) -> f64 {
    (c + c.abs()) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowConstant {
    pub c: f64,
    pub epsilon: f64,
}

impl WindowConstant {
    fn new(c: f64) -> Self {
        WindowConstant { c, epsilon: epsilon_of(c) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport {
    pub r_cr: f64,
    pub p_cr: f64,
    pub r_regime: bool,
    pub p_regime: bool,
    /// Present iff `r_regime`.
    pub r_axis: Option<WindowConstant>,
    /// Present iff `p_regime`.
    pub p_axis: Option<WindowConstant>,
}

impl ThresholdReport {
    /// The constant for `axis`, or a regime error when its conditions fail.
    pub fn constant(&self, axis: Axis) -> Result<WindowConstant> {
        match axis {
            Axis::R => self.r_axis,
            Axis::P => self.p_axis,
        }
        .ok_or(RbError::Regime)
    }

    /// Errors when neither regime applies.
    pub fn require_regime(&self) -> Result<()> {
        if self.r_regime || self.p_regime {
            Ok(())
        } else {
            Err(RbError::Regime)
        }
    }

    pub fn critical(&self, axis: Axis) -> f64 {
        match axis {
            Axis::R => self.r_cr,
            Axis::P => self.p_cr,
        }
    }
}

/// Closed-form thresholds and window constants.
///
/// Thresholds are always reported; `c` and `epsilon` only for the axes whose
/// regime conditions hold (see [`ThresholdReport::require_regime`]).
pub fn thresholds(params: &RbParams) -> ThresholdReport {
    let r_regime = params.r_regime();
    let p_regime = params.p_regime();
    let r_axis = r_regime.then(|| WindowConstant::new(window_constant_r(params.alpha, params.k, params.p)));
    let p_axis = p_regime.then(|| WindowConstant::new(window_constant_p(params.alpha, params.k, params.r)));
    if let Some(wc) = r_axis {
        debug_assert!(wc.c < 1.0);
    }
    if let Some(wc) = p_axis {
        debug_assert!(wc.c < 1.0);
    }
    ThresholdReport {
        r_cr: critical_r(params.alpha, params.p),
        p_cr: critical_p(params.alpha, params.r),
        r_regime,
        p_regime,
        r_axis,
        p_axis,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_threshold_half() {
        let t = thresholds(&RbParams::new(10, 2, 1.0, 0.5, 1.0).unwrap());
        assert!((t.r_cr - 1.442695040888963).abs() < 1e-12);
        let wc = t.constant(Axis::R).unwrap();
        assert!((wc.c - (2.0 - 1.0 / 2f64.ln())).abs() < 1e-12);
        assert!((wc.c - 0.557305).abs() < 1e-6);
        assert_eq!(wc.epsilon, wc.c);
        assert!(matches!(t.constant(Axis::P), Err(RbError::Regime)));
    }

    #[test]
    fn p_threshold_k3() {
        let t = thresholds(&RbParams::new(10, 3, 1.0, 0.5, 1.0).unwrap());
        assert!((t.p_cr - 0.632120558828558).abs() < 1e-12);
        let wc = t.constant(Axis::P).unwrap();
        assert!((wc.c - 0.103638).abs() < 1e-6);
    }

    #[test]
    fn r_threshold_fractional_alpha() {
        // -0.8 / ln 0.75 to 30 digits: 2.78084759742576552830119952132
        assert!((critical_r(0.8, 0.25) - 2.780847597425766).abs() < 1e-12);
    }

    #[test]
    fn negative_c_gives_zero_epsilon() {
        assert_eq!(epsilon_of(-0.3), 0.0);
        assert_eq!(epsilon_of(0.3), 0.3);
    }

    #[test]
    fn no_regime() {
        // alpha below 1/k
        let t = thresholds(&RbParams::new(10, 2, 0.4, 0.5, 1.0).unwrap());
        assert!(t.r_axis.is_none() && t.p_axis.is_none());
        assert!(matches!(t.require_regime(), Err(RbError::Regime)));
        assert!(t.r_cr.is_finite() && t.p_cr.is_finite());
    }

    #[test]
    fn axis_parse() {
        assert_eq!("r".parse::<Axis>().unwrap(), Axis::R);
        assert_eq!("p".parse::<Axis>().unwrap(), Axis::P);
        assert!("q".parse::<Axis>().is_err());
    }
}
