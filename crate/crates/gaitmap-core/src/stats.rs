//! Small descriptive-statistics helpers shared across modules.
//!
//! Standard deviations are population deviations (divide by `n`): all
//! reported statistics describe a closed set of observed cycles, not a
//! sample from a larger population.

/// Arithmetic mean; 0.0 for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Mean and population standard deviation in one pass over the data.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let m = mean(values);
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64;
    (m, var.sqrt())
}

/// Percentile `q` in [0, 100] with linear interpolation between order
/// statistics (rank `q/100 * (n-1)`).
///
/// Returns `None` for an empty slice. `q` outside [0, 100] is clamped.
pub fn percentile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let q = q.clamp(0.0, 100.0);
    let rank = q / 100.0 * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    Some(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

/// Centered moving average with window truncation at the edges.
///
/// `window` is forced odd (rounded up) so the window stays centered; a
/// window of 1 returns the input unchanged.
pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let n = values.len();
    if n == 0 || window <= 1 {
        return values.to_vec();
    }
    let window = if window % 2 == 0 { window + 1 } else { window };
    let half = window / 2;
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

/// Median-of-three filter; endpoints are copied unchanged.
///
/// Replaces every interior sample with the median of itself and its two
/// neighbours. Removes isolated one-sample impulses and leaves locally
/// monotone data untouched.
pub fn median3(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    if n < 3 {
        return values.to_vec();
    }
    let mut out = values.to_vec();
    for i in 1..n - 1 {
        let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
        out[i] = a.max(b).min(a.max(c)).min(b.max(c));
    }
    out
}
