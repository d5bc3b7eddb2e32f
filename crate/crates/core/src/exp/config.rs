//! Plain-text `key=value` sweep configuration.
//!
//! ```text
//! # r-sweep around the threshold
//! axis=r
//! k=2
//! alpha=0.8
//! p=0.25
//! n=12,16,20
//! grid=2.0:3.6:17        # lo:hi:steps, or a comma list
//! trials=200
//! seed=2024
//! node_budget=10000000
//! output=results.csv
//! ```

use std::path::PathBuf;
use std::time::Duration;

use crate::error::{RbError, Result};
use crate::params::{derive, RbParams};
use crate::solve::{Budget, DEFAULT_NODE_BUDGET};
use crate::theory::Axis;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub axis: Axis,
    pub k: usize,
    pub alpha: f64,
    /// `p` when sweeping `r`, `r` when sweeping `p`
    pub fixed: f64,
    pub grid: Vec<f64>,
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    pub budget: Budget,
    pub workers: usize,
    pub output: Option<PathBuf>,
    /// Record wall-clock means; off makes result files byte-reproducible.
    pub record_timing: bool,
}

impl SweepConfig {
    pub fn new(axis: Axis, k: usize, alpha: f64, fixed: f64, n_list: Vec<usize>, grid: Vec<f64>) -> Self {
        SweepConfig {
            axis,
            k,
            alpha,
            fixed,
            grid,
            n_list,
            trials: 100,
            master_seed: 0,
            budget: Budget::nodes(DEFAULT_NODE_BUDGET),
            workers: 1,
            output: None,
            record_timing: true,
        }
    }

    /// Parameters at size `n` and axis value `value`.
    pub fn params_at(&self, n: usize, value: f64) -> RbParams {
        let (p, r) = match self.axis {
            Axis::R => (self.fixed, value),
            Axis::P => (value, self.fixed),
        };
        RbParams { n, k: self.k, alpha: self.alpha, p, r, delta: crate::params::DEFAULT_DELTA }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(RbError::Config("trials must be at least 1".into()));
        }
        if self.grid.is_empty() || !self.grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(RbError::Config("grid must be non-empty and strictly increasing".into()));
        }
        if self.n_list.is_empty() {
            return Err(RbError::Config("n list is empty".into()));
        }
        for &n in &self.n_list {
            for &v in &self.grid {
                derive(&self.params_at(n, v))
                    .map_err(|e| RbError::Config(format!("grid point n={n} {}={v}: {e}", self.axis)))?;
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut axis = None;
        let mut k = None;
        let mut alpha = None;
        let mut p = None;
        let mut r = None;
        let mut grid = None;
        let mut n_list = None;
        let mut cfg = SweepConfig::new(Axis::R, 0, 0.0, 0.0, Vec::new(), Vec::new());
        let mut max_nodes = Some(DEFAULT_NODE_BUDGET);
        let mut max_time = None;

        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| RbError::Config(format!("line {}: {what}", i + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<f64>().map_err(|_| bad(&format!("bad number `{v}` for {key}")));
            let int = |v: &str| v.parse::<u64>().map_err(|_| bad(&format!("bad integer `{v}` for {key}")));
            match key {
                "axis" => axis = Some(value.parse::<Axis>().map_err(|e| bad(&e.to_string()))?),
                "k" => k = Some(int(value)? as usize),
                "alpha" => alpha = Some(num(value)?),
                "p" => p = Some(num(value)?),
                "r" => r = Some(num(value)?),
                "n" => n_list = Some(value.split(',').map(|v| int(v.trim()).map(|n| n as usize)).collect::<Result<Vec<_>>>()?),
                "grid" => grid = Some(parse_grid(value).map_err(|e| bad(&e))?),
                "trials" => cfg.trials = int(value)? as usize,
                "seed" => cfg.master_seed = int(value)?,
                "node_budget" => max_nodes = if value == "none" { None } else { Some(int(value)?) },
                "time_budget_ms" => max_time = if value == "none" { None } else { Some(Duration::from_millis(int(value)?)) },
                "workers" => cfg.workers = int(value)?.max(1) as usize,
                "output" => cfg.output = Some(PathBuf::from(value)),
                "timing" => {
                    cfg.record_timing = value.parse::<bool>().map_err(|_| bad("timing must be true or false"))?
                }
                other => return Err(bad(&format!("unknown key `{other}`"))),
            }
        }
        let missing = |what: &str| RbError::Config(format!("missing key `{what}`"));
        cfg.axis = axis.ok_or_else(|| missing("axis"))?;
        cfg.k = k.ok_or_else(|| missing("k"))?;
        cfg.alpha = alpha.ok_or_else(|| missing("alpha"))?;
        cfg.fixed = match cfg.axis {
            Axis::R => p.ok_or_else(|| missing("p"))?,
            Axis::P => r.ok_or_else(|| missing("r"))?,
        };
        cfg.grid = grid.ok_or_else(|| missing("grid"))?;
        cfg.n_list = n_list.ok_or_else(|| missing("n"))?;
        cfg.budget = Budget { max_nodes, max_time };
        cfg.validate()?;
        Ok(cfg)
    }

    /// The configuration as `key=value` text that [`SweepConfig::parse`] reads back.
    pub fn to_text(&self) -> String {
        use crate::report::fmt_float as g;
        let fixed_key = match self.axis {
            Axis::R => "p",
            Axis::P => "r",
        };
        let list = |v: &[f64]| v.iter().map(|x| g(*x)).collect::<Vec<_>>().join(",");
        let mut out = format!(
            "axis={}\nk={}\nalpha={}\n{fixed_key}={}\nn={}\ngrid={}\ntrials={}\nseed={}\n",
            self.axis,
            self.k,
            g(self.alpha),
            g(self.fixed),
            self.n_list.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
            list(&self.grid),
            self.trials,
            self.master_seed,
        );
        match self.budget.max_nodes {
            Some(n) => out.push_str(&format!("node_budget={n}\n")),
            None => out.push_str("node_budget=none\n"),
        }
        if let Some(t) = self.budget.max_time {
            out.push_str(&format!("time_budget_ms={}\n", t.as_millis()));
        }
        out.push_str(&format!("workers={}\ntiming={}\n", self.workers, self.record_timing));
        if let Some(path) = &self.output {
            out.push_str(&format!("output={}\n", path.display()));
        }
        out
    }
}

/// `lo:hi:steps` (inclusive, evenly spaced) or a comma-separated list.
pub fn parse_grid(text: &str) -> std::result::Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let num = |v: &str| v.parse::<f64>().map_err(|_| format!("bad grid number `{v}`"));
    match parts.as_slice() {
        [lo, hi, steps] => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            let steps: usize = steps.parse().map_err(|_| format!("bad step count `{steps}`"))?;
            match steps {
                0 => Err("grid needs at least one step".into()),
                1 => Ok(vec![lo]),
                _ => Ok((0..steps)
                    .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
                    .collect()),
            }
        }
        [list] => list.split(',').map(|v| num(v.trim())).collect(),
        _ => Err(format!("cannot parse grid `{text}`")),
    }
}
