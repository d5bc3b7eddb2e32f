//! Phase-transition experiments: sweeps, empirical windows, scaling fits.

mod config;
mod fit;
mod sweep;
mod wilson;
mod window;

pub use config::{parse_grid, SweepConfig};
pub use fit::{ols, scaling_fit, LineFit, ScalingFit};
pub use sweep::{
    curve_columns, parse_results, read_results, results_to_csv, run_point, sizes_in, sweep, sweep_to_file,
    width_columns, window_from_results, GridPointResult, CI_LEVEL, CSV_HEADER,
};
pub use wilson::{wilson_interval, z_score};
pub use window::{crossing, empirical_window, isotonic_decreasing, EmpiricalWindow};
