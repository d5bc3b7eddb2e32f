//! Flat `key=value` text shared by the CLI and the result files.

/// Fixed 15 decimal places with trailing zeros trimmed; scientific notation
/// with 15 significant digits outside `[1e-5, 1e15)`.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs();
    if (1e-5..1e15).contains(&mag) {
        let s = format!("{x:.15}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".into() } else { s.to_string() }
    } else {
        format!("{x:.14e}")
    }
}

/// Two-column `s value` text for plotting.
pub fn columns(xs: &[f64], ys: &[f64]) -> String {
    xs.iter()
        .zip(ys)
        .map(|(x, y)| format!("{} {}\n", fmt_float(*x), fmt_float(*y)))
        .collect()
}
