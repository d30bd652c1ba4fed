//! Compensated summation helpers shared by the score aggregators.

/// Neumaier-compensated sum.
pub fn sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut total = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = total + v;
        if total.abs() >= v.abs() {
            comp += (total - t) + v;
        } else {
            comp += (v - t) + total;
        }
        total = t;
    }
    total + comp
}

/// Arithmetic mean, `None` for an empty input.
pub fn mean<I: IntoIterator<Item = f64>>(values: I) -> Option<f64> {
    let mut n = 0usize;
    let s = sum(values.into_iter().inspect(|_| n += 1));
    (n > 0).then(|| s / n as f64)
}

/// Sample variance with the n-1 denominator, computed around `mean`.
pub fn sample_variance(values: &[f64], mean: f64) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    sum(values.iter().map(|v| (v - mean) * (v - mean))) / (n - 1) as f64
}
