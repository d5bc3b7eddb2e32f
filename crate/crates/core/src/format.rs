//! The RBCSP v1 text format.
//!
//! ```text
//! RBCSP 1
//! n=<n> k=<k> d=<d> m=<m> q=<q> seed=<seed>
//! c <v_1> .. <v_k> : <t_1> .. <t_q>
//! ```
//!
//! One `c` line per constraint, scope ascending, tuple codes strictly
//! increasing, single spaces, LF-terminated lines.

use std::fmt::Write as _;

use crate::error::{RbError, Result};
use crate::instance::{Constraint, Instance};
use crate::params::DerivedSizes;

pub const MAGIC: &str = "RBCSP 1";

pub fn encode_instance(inst: &Instance) -> String {
    let s = &inst.sizes;
    let mut out = String::with_capacity(32 + inst.constraints.len() * (4 + 4 * (s.k + s.q as usize)));
    out.push_str(MAGIC);
    out.push('\n');
    let _ = writeln!(out, "n={} k={} d={} m={} q={} seed={}", s.n, s.k, s.d, s.m, s.q, inst.seed);
    for c in &inst.constraints {
        out.push('c');
        for v in &c.scope {
            let _ = write!(out, " {v}");
        }
        out.push_str(" :");
        for t in &c.illegal {
            let _ = write!(out, " {t}");
        }
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, reason: impl Into<String>) -> RbError {
    RbError::Parse { line, reason: reason.into() }
}

fn parse_header(line: &str) -> Result<(usize, usize, u64, u64, u64, u64)> {
    const KEYS: [&str; 6] = ["n", "k", "d", "m", "q", "seed"];
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != KEYS.len() {
        return Err(parse_err(2, format!("expected {} header fields, found {}", KEYS.len(), fields.len())));
    }
    let mut vals = [0u64; 6];
    for ((field, key), slot) in fields.iter().zip(KEYS).zip(vals.iter_mut()) {
        let value = field
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .ok_or_else(|| parse_err(2, format!("expected `{key}=<value>`, found `{field}`")))?;
        *slot = value
            .parse()
            .map_err(|_| parse_err(2, format!("bad integer for {key}: `{value}`")))?;
    }
    let [n, k, d, m, q, seed] = vals;
    let n = usize::try_from(n).map_err(|_| parse_err(2, "n too large"))?;
    let k = usize::try_from(k).map_err(|_| parse_err(2, "k too large"))?;
    Ok((n, k, d, m, q, seed))
}

fn parse_constraint(line_no: usize, line: &str, sizes: &DerivedSizes) -> Result<Constraint> {
    let body = line
        .strip_prefix("c ")
        .ok_or_else(|| parse_err(line_no, "constraint line must start with `c `"))?;
    let (scope_txt, illegal_txt) = match body.split_once(" :") {
        Some(parts) => parts,
        None => return Err(parse_err(line_no, "missing ` :` separator")),
    };
    let scope = scope_txt
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| parse_err(line_no, format!("bad variable index `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    let illegal = illegal_txt
        .split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| parse_err(line_no, format!("bad tuple code `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    let c = Constraint { scope, illegal };
    c.check_shape(sizes)
        .map_err(|reason| RbError::Invariant { line: line_no, reason })?;
    Ok(c)
}

/// Parses and validates an RBCSP v1 document.
pub fn decode_instance(text: &str) -> Result<Instance> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, MAGIC)) => {}
        Some((_, other)) => return Err(parse_err(1, format!("expected `{MAGIC}`, found `{other}`"))),
        None => return Err(parse_err(1, "empty document")),
    }
    let (_, header) = lines.next().ok_or_else(|| parse_err(2, "missing header line"))?;
    let (n, k, d, m, q, seed) = parse_header(header)?;
    let sizes = DerivedSizes::from_integers(n, k, d, m, q).map_err(|e| RbError::Invariant {
        line: 2,
        reason: e.to_string(),
    })?;

    let mut constraints = Vec::with_capacity(m.min(1 << 20) as usize);
    let mut last_line = 2;
    for _ in 0..m {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| parse_err(last_line + 1, format!("header declares m = {m} constraints, found {}", constraints.len())))?;
        constraints.push(parse_constraint(line_no, line, &sizes)?);
        last_line = line_no;
    }
    if let Some((line_no, _)) = lines.find(|(_, l)| !l.is_empty()) {
        return Err(parse_err(line_no, format!("unexpected content after {m} constraints")));
    }
    Instance::new(sizes, seed, constraints)
}
