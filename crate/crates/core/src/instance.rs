//! Concrete CSP instances.
//!
//! A tuple code `t` encodes the values `(v_1, .., v_k)` assigned to the
//! sorted scope big-endian: `t = sum v_i d^(k-i)`.

use crate::error::{RbError, Result};
use crate::params::DerivedSizes;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    /// Strictly increasing variable indices.
    pub scope: Vec<usize>,
    /// Strictly increasing illegal tuple codes.
    pub illegal: Vec<u64>,
}

impl Constraint {
    /// Code of the tuple that `values` assigns to this scope.
    pub fn tuple_code(&self, d: u64, values: &[u64]) -> u64 {
        self.scope.iter().fold(0u64, |acc, &v| acc * d + values[v])
    }

    pub fn allows(&self, code: u64) -> bool {
        self.illegal.binary_search(&code).is_err()
    }

    pub(crate) fn check_shape(&self, sizes: &DerivedSizes) -> std::result::Result<(), String> {
        if self.scope.len() != sizes.k {
            return Err(format!("scope has {} variables, expected k = {}", self.scope.len(), sizes.k));
        }
        if !self.scope.windows(2).all(|w| w[0] < w[1]) {
            return Err("scope must be strictly increasing".into());
        }
        if let Some(&last) = self.scope.last() {
            if last >= sizes.n {
                return Err(format!("variable {last} out of range for n = {}", sizes.n));
            }
        }
        if self.illegal.len() as u64 != sizes.q {
            return Err(format!("{} illegal tuples, expected q = {}", self.illegal.len(), sizes.q));
        }
        if !self.illegal.windows(2).all(|w| w[0] < w[1]) {
            return Err("illegal tuple codes must be strictly increasing (no repeats)".into());
        }
        let dk = sizes.tuple_space();
        if let Some(&last) = self.illegal.last() {
            if last >= dk {
                return Err(format!("tuple code {last} out of range for d^k = {dk}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub sizes: DerivedSizes,
    pub seed: u64,
    pub constraints: Vec<Constraint>,
}

impl Instance {
    pub fn new(sizes: DerivedSizes, seed: u64, constraints: Vec<Constraint>) -> Result<Self> {
        if constraints.len() as u64 != sizes.m {
            return Err(RbError::Invariant {
                line: 0,
                reason: format!("{} constraints, expected m = {}", constraints.len(), sizes.m),
            });
        }
        for (i, c) in constraints.iter().enumerate() {
            c.check_shape(&sizes).map_err(|reason| RbError::Invariant {
                line: 0,
                reason: format!("constraint {i}: {reason}"),
            })?;
        }
        Ok(Instance { sizes, seed, constraints })
    }

    /// Checks an assignment directly against the illegal lists.
    pub fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        let d = self.sizes.d;
        assignment.values.len() == self.sizes.n
            && assignment.values.iter().all(|&v| v < d)
            && self
                .constraints
                .iter()
                .all(|c| c.allows(c.tuple_code(d, &assignment.values)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub values: Vec<u64>,
}
