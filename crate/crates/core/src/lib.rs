//! A laboratory for model RB, a random CSP ensemble whose satisfiability
//! threshold is known exactly.
//!
//! - [`params`]: control parameters and the integer sizes actually generated
//! - [`instance`], [`format`]: the instance model and the RBCSP v1 text format
//! - [`theory`]: thresholds, exact moments and scaling-window endpoints
//! - [`gen`]: seeded instance generation
//! - [`solve`]: exact decision, model counting and a brute-force oracle
//! - [`exp`]: Monte Carlo sweeps, empirical windows and scaling fits

pub mod error;
pub mod exp;
pub mod format;
pub mod gen;
pub mod instance;
pub mod params;
pub mod pool;
pub mod report;
pub mod solve;
pub mod theory;

pub use error::{RbError, Result};
pub use format::{decode_instance, encode_instance};
pub use instance::{Assignment, Constraint, Instance};
pub use params::{derive, DerivedSizes, RbParams};
