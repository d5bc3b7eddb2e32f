use statrs::function::gamma::ln_gamma;

/// `ln C(n, k)`; exact zero at the edges, `-inf` outside `[0, n]`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if k == 0 || k == n {
        return 0.0;
    }
    let (n, k) = (n as f64, k as f64);
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// `C(s, k) / C(n, k)` as a product of `k` ratios; exact 1 at `s = n`.
pub fn choose_ratio(s: u64, n: u64, k: u64) -> f64 {
    if s < k {
        return 0.0;
    }
    if s == n {
        return 1.0;
    }
    (0..k).map(|i| (s - i) as f64 / (n - i) as f64).product()
}

/// `ln sum exp(x_i)`, shifted by the maximum and summed pairwise.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_nan() {
        return max;
    }
    let shifted: Vec<f64> = xs.iter().map(|&x| (x - max).exp()).collect();
    max + pairwise_sum(&shifted).ln()
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}
