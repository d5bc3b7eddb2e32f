//! Exact finite-n analytics: thresholds, moments, overlap diagnostics and
//! scaling-window endpoints.

mod moments;
mod numeric;
mod overlap;
mod thresholds;
mod window;

pub use moments::{log_expected_solutions, log_second_moment, pair_term, EvalMode, MomentModel, MomentReport};
pub use numeric::{choose_ratio, ln_choose, log_sum_exp};
pub use overlap::{overlap_curve, overlap_g, overlap_h, overlap_h2, OverlapCurve};
pub use thresholds::{
    critical_p, critical_r, epsilon_of, in_p_regime, in_r_regime, thresholds, window_constant_p, window_constant_r, Axis, ThresholdReport,
    WindowConstant,
};
pub use window::{
    cauchy_ratio, markov_upper_p, markov_upper_r, second_moment_lower_p, second_moment_lower_r, window,
    WindowReport, BISECTION_TOL, CAUCHY_TAG, MARKOV_TAG, SCAN_STEPS,
};
