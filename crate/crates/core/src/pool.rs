//! Index-ordered parallel map; output order never depends on scheduling.

/// Environment variable read by the CLI for the default pool width.
pub const WORKERS_ENV: &str = "RBLAB_WORKERS";

/// `(0..count).map(f)` on up to `workers` threads, results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(count: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    if workers <= 1 || count <= 1 {
        return (0..count).map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| (0..count).into_par_iter().map(&f).collect()),
        Err(_) => (0..count).map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(count: usize, _workers: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..count).map(f).collect()
}

/// Pool width from [`WORKERS_ENV`], else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w: &usize| w >= 1)
        .or_else(|| std::thread::available_parallelism().ok().map(|n| n.get()))
        .unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_stable() {
        let a = map_indexed(100, 1, |i| i * i);
        let b = map_indexed(100, 8, |i| i * i);
        assert_eq!(a, b);
        assert_eq!(a[7], 49);
    }
}
