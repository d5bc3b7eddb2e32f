use std::collections::BTreeMap;

use super::clock::Stopwatch;
use super::{CountOutcome, CountStatus, SolveOutcome, SolveStatus, SolverConfig};
use crate::error::{RbError, Result};
use crate::instance::{Assignment, Instance};

/// A merged constraint: every tuple allowed by all constraints on `scope`.
struct Table {
    scope: Vec<usize>,
    /// `weights[i] = d^(k-1-i)`
    weights: Vec<u64>,
    allowed: Vec<u64>,
}

impl Table {
    fn allows(&self, code: u64) -> bool {
        self.allowed[(code >> 6) as usize] >> (code & 63) & 1 == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Halt {
    Found,
    OutOfBudget,
    Overflow,
}

struct Engine<'a> {
    words: usize,
    tables: Vec<Table>,
    var_tables: Vec<Vec<usize>>,
    /// `n * words` domain bits, flat
    domains: Vec<u64>,
    dom_size: Vec<u32>,
    value: Vec<u64>,
    assigned: Vec<bool>,
    /// unassigned variables per table
    open: Vec<u32>,
    /// tables with at least two unassigned variables
    live: usize,
    trail: Vec<(usize, u32, Vec<u64>)>,
    config: &'a SolverConfig,
    clock: Stopwatch,
    nodes: u64,
    count: u128,
    witness: Option<Vec<u64>>,
}

impl<'a> Engine<'a> {
    fn new(inst: &Instance, config: &'a SolverConfig) -> Result<Self> {
        let sizes = &inst.sizes;
        let (n, d, k) = (sizes.n, sizes.d, sizes.k);
        let space = sizes.tuple_space();
        if space > config.max_table_bits {
            return Err(RbError::Capacity {
                what: "allowed-tuple bitset (d^k bits)",
                needed: space as u128,
                limit: config.max_table_bits as u128,
            });
        }
        let table_words = (space as usize).div_ceil(64);
        let mut full = vec![u64::MAX; table_words];
        if space % 64 != 0 {
            full[table_words - 1] = (1u64 << (space % 64)) - 1;
        }
        let mut merged: BTreeMap<&[usize], Vec<u64>> = BTreeMap::new();
        for c in &inst.constraints {
            let allowed = merged.entry(&c.scope).or_insert_with(|| full.clone());
            for &t in &c.illegal {
                allowed[(t >> 6) as usize] &= !(1u64 << (t & 63));
            }
        }
        let weights: Vec<u64> = (0..k).map(|i| d.pow((k - 1 - i) as u32)).collect();
        let tables: Vec<Table> = merged
            .into_iter()
            .map(|(scope, allowed)| Table { scope: scope.to_vec(), weights: weights.clone(), allowed })
            .collect();
        let mut var_tables = vec![Vec::new(); n];
        for (ti, t) in tables.iter().enumerate() {
            for &v in &t.scope {
                var_tables[v].push(ti);
            }
        }

        let words = (d as usize).div_ceil(64);
        let mut dom = vec![u64::MAX; words];
        if d % 64 != 0 {
            dom[words - 1] = (1u64 << (d % 64)) - 1;
        }
        let domains = dom.iter().copied().cycle().take(n * words).collect();
        let live = tables.len();
        Ok(Engine {
            words,
            open: vec![k as u32; tables.len()],
            tables,
            var_tables,
            domains,
            dom_size: vec![d as u32; n],
            value: vec![0; n],
            assigned: vec![false; n],
            live,
            trail: Vec::new(),
            config,
            clock: Stopwatch::start(),
            nodes: 0,
            count: 0,
            witness: None,
        })
    }

    fn domain(&self, var: usize) -> &[u64] {
        &self.domains[var * self.words..(var + 1) * self.words]
    }

    fn values_of(&self, var: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.dom_size[var] as usize);
        for (wi, &word) in self.domain(var).iter().enumerate() {
            let mut w = word;
            while w != 0 {
                out.push(wi as u64 * 64 + w.trailing_zeros() as u64);
                w &= w - 1;
            }
        }
        out
    }

    fn out_of_budget(&self) -> bool {
        let b = &self.config.budget;
        if b.max_nodes.is_some_and(|max| self.nodes > max) {
            return true;
        }
        match b.max_time {
            Some(limit) if self.nodes % 1024 == 0 => self.clock.elapsed() > limit,
            _ => false,
        }
    }

    /// Minimum remaining values, lowest index on ties.
    fn pick_variable(&self) -> Option<usize> {
        (0..self.assigned.len())
            .filter(|&v| !self.assigned[v])
            .min_by_key(|&v| self.dom_size[v])
    }

    /// Assigns `var = val` and forward-checks; `false` on a domain wipeout.
    /// The caller must always call [`Engine::unassign`] afterwards.
    fn assign(&mut self, var: usize, val: u64) -> bool {
        self.assigned[var] = true;
        self.value[var] = val;
        let mut consistent = true;
        for idx in 0..self.var_tables[var].len() {
            let ti = self.var_tables[var][idx];
            self.open[ti] -= 1;
            match self.open[ti] {
                1 => {
                    self.live -= 1;
                    if consistent && !self.filter_last(ti) {
                        consistent = false;
                    }
                }
                0 => {
                    // the last variable's domain was filtered when the table dropped to one
                    debug_assert!(self.tables[ti].allows(self.code_of(ti)));
                }
                _ => {}
            }
        }
        consistent
    }

    fn unassign(&mut self, var: usize, mark: usize) {
        for &ti in &self.var_tables[var] {
            if self.open[ti] == 1 {
                self.live += 1;
            }
            self.open[ti] += 1;
        }
        while self.trail.len() > mark {
            let (v, size, words) = self.trail.pop().expect("trail non-empty");
            self.dom_size[v] = size;
            self.domains[v * self.words..(v + 1) * self.words].copy_from_slice(&words);
        }
        self.assigned[var] = false;
    }

    fn code_of(&self, ti: usize) -> u64 {
        let t = &self.tables[ti];
        t.scope.iter().zip(&t.weights).map(|(&v, &w)| self.value[v] * w).sum()
    }

    /// Removes values of the table's single unassigned variable that no
    /// allowed tuple supports. `false` on wipeout.
    fn filter_last(&mut self, ti: usize) -> bool {
        let t = &self.tables[ti];
        let mut base = 0u64;
        let mut free = (usize::MAX, 0u64);
        for (&v, &w) in t.scope.iter().zip(&t.weights) {
            if self.assigned[v] {
                base += self.value[v] * w;
            } else {
                free = (v, w);
            }
        }
        let (u, weight) = free;
        let mut removed = Vec::new();
        for val in self.values_of(u) {
            if !t.allows(base + val * weight) {
                removed.push(val);
            }
        }
        if removed.is_empty() {
            return true;
        }
        let range = u * self.words..(u + 1) * self.words;
        self.trail.push((u, self.dom_size[u], self.domains[range.clone()].to_vec()));
        let dom = &mut self.domains[range];
        for val in &removed {
            dom[(val >> 6) as usize] &= !(1u64 << (val & 63));
        }
        self.dom_size[u] -= removed.len() as u32;
        self.dom_size[u] > 0
    }

    /// With no table holding two open variables, the open variables are
    /// independent: each may take any value left in its domain.
    fn settle_independent(&mut self, counting: bool) -> std::result::Result<(), Halt> {
        let open: Vec<usize> = (0..self.assigned.len()).filter(|&v| !self.assigned[v]).collect();
        if counting {
            let mut product: u128 = 1;
            for &v in &open {
                product = product.checked_mul(self.dom_size[v] as u128).ok_or(Halt::Overflow)?;
            }
            self.count = self.count.checked_add(product).ok_or(Halt::Overflow)?;
            Ok(())
        } else {
            let mut values = self.value.clone();
            for &v in &open {
                values[v] = self.values_of(v)[0];
            }
            self.witness = Some(values);
            Err(Halt::Found)
        }
    }

    fn search(&mut self, counting: bool) -> std::result::Result<(), Halt> {
        if self.live == 0 {
            return self.settle_independent(counting);
        }
        let var = self.pick_variable().expect("a live table has open variables");
        for val in self.values_of(var) {
            self.nodes += 1;
            if self.out_of_budget() {
                return Err(Halt::OutOfBudget);
            }
            let mark = self.trail.len();
            let result = if self.assign(var, val) { self.search(counting) } else { Ok(()) };
            self.unassign(var, mark);
            result?;
        }
        Ok(())
    }
}

pub fn solve(inst: &Instance, config: &SolverConfig) -> Result<SolveOutcome> {
    let mut engine = Engine::new(inst, config)?;
    let halt = engine.search(false).err();
    let status = match halt {
        Some(Halt::Found) => SolveStatus::Sat,
        Some(Halt::OutOfBudget) => SolveStatus::Timeout,
        Some(Halt::Overflow) => unreachable!("decision search never multiplies counts"),
        None => SolveStatus::Unsat,
    };
    let witness = engine.witness.take().map(|values| Assignment { values });
    if let Some(w) = &witness {
        assert!(inst.is_satisfied_by(w), "solver produced an invalid witness");
    }
    Ok(SolveOutcome { status, witness, nodes: engine.nodes, elapsed: engine.clock.elapsed() })
}

pub fn count(inst: &Instance, config: &SolverConfig) -> Result<CountOutcome> {
    let mut engine = Engine::new(inst, config)?;
    let status = match engine.search(true) {
        Ok(()) => CountStatus::Exact,
        Err(Halt::OutOfBudget) => CountStatus::Timeout,
        Err(Halt::Overflow) => {
            return Err(RbError::Capacity {
                what: "model count",
                needed: u128::MAX,
                limit: u128::MAX,
            })
        }
        Err(Halt::Found) => unreachable!("counting search never stops at a witness"),
    };
    Ok(CountOutcome { status, count: engine.count, nodes: engine.nodes, elapsed: engine.clock.elapsed() })
}
