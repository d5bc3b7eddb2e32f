//! Monte Carlo sweeps over `(n, axis value)` grids with CSV persistence.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;

use super::config::SweepConfig;
use super::wilson::wilson_interval;
use super::window::{empirical_window, EmpiricalWindow};
use crate::error::{RbError, Result};
use crate::gen::{derive_seed, generate};
use crate::params::derive;
use crate::pool::map_indexed;
use crate::report::fmt_float;
use crate::solve::{solve, SolveStatus, SolverConfig};
use crate::theory::Axis;

pub const CSV_HEADER: &str =
    "n,axis,value,d,m,q,trials,sat,unsat,timeout,prsat,ci_lo,ci_hi,mean_nodes,mean_elapsed_ms";

/// Confidence level of the per-point intervals.
pub const CI_LEVEL: f64 = 0.95;

#[derive(Debug, Clone, PartialEq)]
pub struct GridPointResult {
    pub n: usize,
    pub axis: Axis,
    pub value: f64,
    pub d: u64,
    pub m: u64,
    pub q: u64,
    pub trials: u64,
    pub sat: u64,
    pub unsat: u64,
    pub timeout: u64,
    /// `sat / (sat + unsat)`; NaN when every trial timed out
    pub prsat: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub mean_nodes: f64,
    pub mean_elapsed_ms: f64,
}

impl GridPointResult {
    pub fn decided(&self) -> u64 {
        self.sat + self.unsat
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.axis,
            fmt_float(self.value),
            self.d,
            self.m,
            self.q,
            self.trials,
            self.sat,
            self.unsat,
            self.timeout,
            fmt_float(self.prsat),
            fmt_float(self.ci_lo),
            fmt_float(self.ci_hi),
            fmt_float(self.mean_nodes),
            fmt_float(self.mean_elapsed_ms),
        )
    }

    pub fn from_csv_row(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 15 {
            return Err(RbError::Parse { line: 0, reason: format!("expected 15 fields, found {}", f.len()) });
        }
        let bad = |i: usize| RbError::Parse { line: 0, reason: format!("bad field {} `{}`", i + 1, f[i]) };
        let u = |i: usize| f[i].parse::<u64>().map_err(|_| bad(i));
        let x = |i: usize| f[i].parse::<f64>().map_err(|_| bad(i));
        Ok(GridPointResult {
            n: u(0)? as usize,
            axis: f[1].parse().map_err(|_| bad(1))?,
            value: x(2)?,
            d: u(3)?,
            m: u(4)?,
            q: u(5)?,
            trials: u(6)?,
            sat: u(7)?,
            unsat: u(8)?,
            timeout: u(9)?,
            prsat: x(10)?,
            ci_lo: x(11)?,
            ci_hi: x(12)?,
            mean_nodes: x(13)?,
            mean_elapsed_ms: x(14)?,
        })
    }

    fn key(&self) -> (usize, String) {
        (self.n, fmt_float(self.value))
    }
}

/// Runs every trial of one grid point and tallies the outcomes.
pub fn run_point(cfg: &SweepConfig, n_index: usize, grid_index: usize) -> Result<GridPointResult> {
    let n = cfg.n_list[n_index];
    let value = cfg.grid[grid_index];
    let params = cfg.params_at(n, value);
    let sizes = derive(&params)?;
    let solver = SolverConfig::from(cfg.budget);
    let outcomes = map_indexed(cfg.trials, cfg.workers, |t| {
        let seed = derive_seed(cfg.master_seed, &[n_index as u64, grid_index as u64, t as u64]);
        generate(&params, seed).and_then(|inst| solve(&inst, &solver))
    });
    let (mut sat, mut unsat, mut timeout, mut nodes, mut elapsed) = (0u64, 0u64, 0u64, 0u128, 0f64);
    for out in outcomes {
        let out = out?;
        match out.status {
            SolveStatus::Sat => sat += 1,
            SolveStatus::Unsat => unsat += 1,
            SolveStatus::Timeout => timeout += 1,
        }
        nodes += out.nodes as u128;
        elapsed += out.elapsed.as_secs_f64() * 1e3;
    }
    let trials = cfg.trials as u64;
    let decided = sat + unsat;
    let (prsat, ci_lo, ci_hi) = if decided == 0 {
        (f64::NAN, 0.0, 1.0)
    } else {
        let (lo, hi) = wilson_interval(sat, decided, CI_LEVEL)?;
        (sat as f64 / decided as f64, lo, hi)
    };
    Ok(GridPointResult {
        n,
        axis: cfg.axis,
        value,
        d: sizes.d,
        m: sizes.m,
        q: sizes.q,
        trials,
        sat,
        unsat,
        timeout,
        prsat,
        ci_lo,
        ci_hi,
        mean_nodes: nodes as f64 / trials as f64,
        mean_elapsed_ms: if cfg.record_timing { elapsed / trials as f64 } else { 0.0 },
    })
}

/// All grid points in config order (`n` outer, axis value inner), in memory.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<GridPointResult>> {
    cfg.validate()?;
    let mut out = Vec::with_capacity(cfg.n_list.len() * cfg.grid.len());
    for ni in 0..cfg.n_list.len() {
        for gi in 0..cfg.grid.len() {
            out.push(run_point(cfg, ni, gi)?);
        }
    }
    Ok(out)
}

/// Like [`sweep`], appending each finished point to `path`.
///
/// Points already present in `path` are read back instead of rerun, so an
/// interrupted sweep resumes where it stopped.
pub fn sweep_to_file(cfg: &SweepConfig, path: &Path) -> Result<Vec<GridPointResult>> {
    cfg.validate()?;
    let done: HashMap<(usize, String), GridPointResult> = if path.exists() {
        read_results(path)?
            .into_iter()
            .filter(|r| r.axis == cfg.axis)
            .map(|r| (r.key(), r))
            .collect()
    } else {
        File::create(path)?.write_all(format!("{CSV_HEADER}\n").as_bytes())?;
        HashMap::new()
    };
    let mut file = OpenOptions::new().append(true).open(path)?;
    let mut out = Vec::new();
    for (ni, &n) in cfg.n_list.iter().enumerate() {
        for (gi, &v) in cfg.grid.iter().enumerate() {
            if let Some(r) = done.get(&(n, fmt_float(v))) {
                out.push(r.clone());
                continue;
            }
            let row = run_point(cfg, ni, gi)?.to_csv_row();
            writeln!(file, "{row}")?;
            file.flush()?;
            // hand back exactly what a later resume would read
            out.push(GridPointResult::from_csv_row(&row)?);
        }
    }
    Ok(out)
}

pub fn results_to_csv(results: &[GridPointResult]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in results {
        s.push_str(&r.to_csv_row());
        s.push('\n');
    }
    s
}

pub fn parse_results(text: &str) -> Result<Vec<GridPointResult>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    let mut records = reader.records();
    match records.next() {
        Some(Ok(h)) if h.iter().collect::<Vec<_>>().join(",") == CSV_HEADER => {}
        _ => return Err(RbError::Parse { line: 1, reason: "missing results header".into() }),
    }
    records
        .map(|rec| {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            GridPointResult::from_csv_row(&rec.iter().collect::<Vec<_>>().join(",")).map_err(|e| match e {
                RbError::Parse { reason, .. } => RbError::Parse { line, reason },
                other => other,
            })
        })
        .collect()
}

pub fn read_results(path: &Path) -> Result<Vec<GridPointResult>> {
    parse_results(&std::fs::read_to_string(path)?)
}

/// Distinct sizes in order of first appearance.
pub fn sizes_in(results: &[GridPointResult]) -> Vec<usize> {
    let mut ns = Vec::new();
    for r in results {
        if !ns.contains(&r.n) {
            ns.push(r.n);
        }
    }
    ns
}

/// Points for size `n` with at least one decided trial, sorted by axis value.
fn points_for(results: &[GridPointResult], n: usize) -> Vec<&GridPointResult> {
    let mut pts: Vec<&GridPointResult> = results.iter().filter(|r| r.n == n && r.decided() > 0).collect();
    pts.sort_by(|a, b| a.value.total_cmp(&b.value));
    pts
}

/// Empirical window for one size, weighting each point by its decided trials.
pub fn window_from_results(results: &[GridPointResult], n: usize, delta: f64) -> Result<EmpiricalWindow> {
    let pts = points_for(results, n);
    let xs: Vec<f64> = pts.iter().map(|r| r.value).collect();
    let ys: Vec<f64> = pts.iter().map(|r| r.prsat).collect();
    let ws: Vec<f64> = pts.iter().map(|r| r.decided() as f64).collect();
    empirical_window(n, &xs, &ys, &ws, delta)
}

/// `value prsat` columns for one size.
pub fn curve_columns(results: &[GridPointResult], n: usize) -> String {
    let pts = points_for(results, n);
    let xs: Vec<f64> = pts.iter().map(|r| r.value).collect();
    let ys: Vec<f64> = pts.iter().map(|r| r.prsat).collect();
    crate::report::columns(&xs, &ys)
}

/// `n width` columns.
pub fn width_columns(windows: &[EmpiricalWindow]) -> String {
    let xs: Vec<f64> = windows.iter().map(|w| w.n as f64).collect();
    let ys: Vec<f64> = windows.iter().map(|w| w.width).collect();
    crate::report::columns(&xs, &ys)
}
