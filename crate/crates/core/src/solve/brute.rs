use super::clock::Stopwatch;
use super::{CountOutcome, CountStatus};
use crate::error::{RbError, Result};
use crate::instance::Instance;

/// Largest `d^n` the brute-force oracle will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

/// Counts solutions by checking every one of the `d^n` assignments against
/// the raw illegal lists. Shares no code with the search engine.
pub fn brute_force(inst: &Instance) -> Result<CountOutcome> {
    let (n, d) = (inst.sizes.n, inst.sizes.d);
    let total = u32::try_from(n)
        .ok()
        .and_then(|n| d.checked_pow(n))
        .filter(|&t| t <= BRUTE_FORCE_LIMIT)
        .ok_or(RbError::Capacity {
            what: "brute-force assignments (d^n)",
            needed: (d as f64).powf(n as f64) as u128,
            limit: BRUTE_FORCE_LIMIT as u128,
        })?;
    let clock = Stopwatch::start();
    let mut values = vec![0u64; n];
    let mut count = 0u128;
    for _ in 0..total {
        let ok = inst.constraints.iter().all(|c| {
            let code = c.scope.iter().fold(0u64, |acc, &v| acc * d + values[v]);
            !c.illegal.contains(&code)
        });
        count += ok as u128;
        // odometer increment, last variable fastest
        for v in values.iter_mut().rev() {
            *v += 1;
            if *v < d {
                break;
            }
            *v = 0;
        }
    }
    Ok(CountOutcome { status: CountStatus::Exact, count, nodes: total, elapsed: clock.elapsed() })
}
