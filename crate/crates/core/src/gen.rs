//! Seeded sampling of model RB instances.
//!
//! Each of the `m` constraints picks a uniform `k`-subset of the variables as
//! its scope (constraints are drawn with repetition, so scopes may repeat)
//! and then a uniform `q`-subset of the `d^k` tuples as its illegal set.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::format::encode_instance;
use crate::instance::{Constraint, Instance};
use crate::params::{derive, DerivedSizes, RbParams};
use crate::pool::map_indexed;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes a master seed and a path of indices into one stream seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |h, &x| splitmix64(h ^ splitmix64(x)))
}

/// The stream for trial `i` depends only on `(master_seed, i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedPolicy {
    pub master_seed: u64,
}

impl SeedPolicy {
    pub fn new(master_seed: u64) -> Self {
        SeedPolicy { master_seed }
    }

    pub fn trial_seed(&self, trial: u64) -> u64 {
        derive_seed(self.master_seed, &[trial])
    }
}

/// Uniform `k`-subset of `0..n`, sorted; collisions are redrawn.
fn sample_scope<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut scope = Vec::with_capacity(k);
    while scope.len() < k {
        let v = rng.random_range(0..n);
        if !scope.contains(&v) {
            scope.push(v);
        }
    }
    scope.sort_unstable();
    scope
}

/// Uniform `q`-subset of `0..space`, sorted.
///
/// Floyd's algorithm while `q <= space / 2`, a partial Fisher-Yates shuffle above.
pub fn sample_codes<R: Rng>(rng: &mut R, space: u64, q: u64) -> Vec<u64> {
    debug_assert!(q <= space);
    let mut out: Vec<u64> = if q <= space / 2 || usize::try_from(space).is_err() {
        let mut chosen = HashSet::with_capacity(q as usize);
        for j in (space - q)..space {
            let t = rng.random_range(0..=j);
            if !chosen.insert(t) {
                chosen.insert(j);
            }
        }
        chosen.into_iter().collect()
    } else {
        let mut all: Vec<u64> = (0..space).collect();
        for i in 0..q as usize {
            let j = rng.random_range(i..all.len());
            all.swap(i, j);
        }
        all.truncate(q as usize);
        all
    };
    out.sort_unstable();
    out
}

pub fn generate(params: &RbParams, seed: u64) -> Result<Instance> {
    Ok(generate_sized(derive(params)?, seed))
}

/// Samples an instance with explicit integer sizes, bypassing [`derive`].
pub fn generate_sized(sizes: DerivedSizes, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let space = sizes.tuple_space();
    let constraints = (0..sizes.m)
        .map(|_| {
            let scope = sample_scope(&mut rng, sizes.n, sizes.k);
            let illegal = sample_codes(&mut rng, space, sizes.q);
            Constraint { scope, illegal }
        })
        .collect();
    Instance { sizes, seed, constraints }
}

/// Instances for trials `0..count`, identical for any `workers`.
pub fn generate_batch(params: &RbParams, policy: &SeedPolicy, count: usize, workers: usize) -> Result<Vec<Instance>> {
    derive(params)?;
    map_indexed(count, workers, |i| generate(params, policy.trial_seed(i as u64)))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub trial: u64,
    pub seed: u64,
    pub path: PathBuf,
}

/// Writes `count` instances into `dir` plus a tab-separated `manifest.tsv`
/// listing `trial seed path`.
pub fn write_batch(
    params: &RbParams,
    policy: &SeedPolicy,
    count: usize,
    dir: &Path,
    workers: usize,
) -> Result<Vec<ManifestEntry>> {
    let batch = generate_batch(params, policy, count, workers)?;
    std::fs::create_dir_all(dir)?;
    let mut manifest = String::from("trial\tseed\tpath\n");
    let mut entries = Vec::with_capacity(count);
    for (i, inst) in batch.iter().enumerate() {
        let path = dir.join(format!("trial_{i:06}.rbcsp"));
        std::fs::write(&path, encode_instance(inst))?;
        let _ = writeln!(manifest, "{i}\t{}\t{}", inst.seed, path.display());
        entries.push(ManifestEntry { trial: i as u64, seed: inst.seed, path });
    }
    std::fs::write(dir.join("manifest.tsv"), manifest)?;
    Ok(entries)
}
