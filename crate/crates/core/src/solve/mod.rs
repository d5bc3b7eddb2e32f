//! Exact satisfiability and model counting.
//!
//! The engine is a complete backtracking search with minimum-remaining-values
//! branching and forward checking over per-scope allowed-tuple bitsets.
//! Constraints sharing a scope are merged by intersecting their allowed sets.

mod brute;
mod clock;
mod engine;

use std::time::Duration;

pub use brute::{brute_force, BRUTE_FORCE_LIMIT};
pub use clock::Stopwatch;
pub use engine::{count, solve};

use crate::instance::Assignment;

/// Search limits. Exhausting either yields a timeout, never a wrong answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;
pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(10);

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: Some(DEFAULT_NODE_BUDGET), max_time: Some(DEFAULT_TIME_BUDGET) }
    }
}

impl Budget {
    /// Node limit only; outcomes are then independent of machine speed.
    pub fn nodes(max_nodes: u64) -> Self {
        Budget { max_nodes: Some(max_nodes), max_time: None }
    }

    pub fn unlimited() -> Self {
        Budget { max_nodes: None, max_time: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub budget: Budget,
    /// Largest `d^k` accepted for an allowed-tuple bitset.
    pub max_table_bits: u64,
}

pub const DEFAULT_MAX_TABLE_BITS: u64 = 1 << 26;

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { budget: Budget::default(), max_table_bits: DEFAULT_MAX_TABLE_BITS }
    }
}

impl From<Budget> for SolverConfig {
    fn from(budget: Budget) -> Self {
        SolverConfig { budget, ..SolverConfig::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Sat,
    Unsat,
    Timeout,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Sat => "SAT",
            SolveStatus::Unsat => "UNSAT",
            SolveStatus::Timeout => "TIMEOUT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    /// Present iff `status` is `Sat`; verified against the raw instance.
    pub witness: Option<Assignment>,
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountStatus {
    Exact,
    Timeout,
}

impl CountStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CountStatus::Exact => "EXACT",
            CountStatus::Timeout => "TIMEOUT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountOutcome {
    pub status: CountStatus,
    /// Exact model count when `status` is `Exact`; a partial count otherwise.
    pub count: u128,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// `status=.. nodes=.. elapsed_ms=..` record shared with the results files.
pub fn solve_record(out: &SolveOutcome) -> String {
    format!(
        "status={} nodes={} elapsed_ms={}",
        out.status.as_str(),
        out.nodes,
        crate::report::fmt_float(out.elapsed.as_secs_f64() * 1e3)
    )
}

pub fn count_record(out: &CountOutcome) -> String {
    format!(
        "status={} count={} nodes={} elapsed_ms={}",
        out.status.as_str(),
        out.count,
        out.nodes,
        crate::report::fmt_float(out.elapsed.as_secs_f64() * 1e3)
    )
}
