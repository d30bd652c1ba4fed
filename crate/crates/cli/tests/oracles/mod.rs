//! Reference computations for the acceptance suite. Each one follows the
//! textbook definition directly and shares no code with the library.

#![allow(dead_code)]

use std::collections::HashSet;

/// Kendall's τ_b by counting every pair.
pub fn tau_b_pairs(a: &[f64], b: &[f64]) -> Option<f64> {
    let (mut concordant, mut discordant, mut only_a, mut only_b) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let da = a[i] - a[j];
            let db = b[i] - b[j];
            if da == 0.0 && db == 0.0 {
                continue;
            } else if da == 0.0 {
                only_a += 1;
            } else if db == 0.0 {
                only_b += 1;
            } else if (da > 0.0) == (db > 0.0) {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    let n_a = (concordant + discordant + only_a) as f64;
    let n_b = (concordant + discordant + only_b) as f64;
    if n_a == 0.0 || n_b == 0.0 {
        return None;
    }
    Some((concordant - discordant) as f64 / (n_a * n_b).sqrt())
}

/// Extrapolated RBO by summing every series term, recomputing each prefix
/// overlap from scratch.
pub fn rbo_series(a: &[String], b: &[String], p: f64) -> f64 {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let (l, s) = (long.len(), short.len());
    let overlap = |d: usize| -> f64 {
        let seen: HashSet<&String> = long[..d.min(l)].iter().collect();
        short[..d.min(s)].iter().filter(|x| seen.contains(x)).count() as f64
    };
    let x_s = overlap(s);
    let x_l = overlap(l);
    let mut sum = 0.0;
    for d in 1..=l {
        sum += overlap(d) / d as f64 * p.powi(d as i32);
    }
    for d in s + 1..=l {
        sum += x_s * (d - s) as f64 / (s as f64 * d as f64) * p.powi(d as i32);
    }
    (1.0 - p) / p * sum + ((x_l - x_s) / l as f64 + x_s / s as f64) * p.powi(l as i32)
}

/// Student-t density mapped onto θ ∈ [0, π/2) through t = tan θ and
/// rescaled so its value at θ = 0 is 1. The normalizing constant cancels
/// in the tail ratio, so no gamma function is needed.
fn t_density_in_angle(theta: f64, df: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let c = c.max(0.0);
    if c == 0.0 {
        return if df == 1.0 { 1.0 } else { 0.0 };
    }
    ((df - 1.0) * c.ln() - (df + 1.0) / 2.0 * (c * c + s * s / df).ln()).exp()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    // split up front so narrow peaks are not missed by the first estimate
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let (x0, x1) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (f0, fm, f1) = (f(x0), f(0.5 * (x0 + x1)), f(x1));
            adaptive(f, x0, x1, f0, fm, f1, simpson(x0, x1, f0, fm, f1), tol / pieces as f64, 40)
        })
        .sum()
}

/// Two-sided tail `P(|T| >= t)` by quadrature of the density.
pub fn t_two_sided_quadrature(t: f64, df: f64) -> f64 {
    let f = |theta: f64| t_density_in_angle(theta, df);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let total = integrate(&f, 0.0, half_pi, 1e-14);
    integrate(&f, t.abs().atan(), half_pi, 1e-14) / total
}

/// Whether a run line is acceptable under the strict six-column contract,
/// ignoring duplicates. Blank lines count as acceptable.
pub fn run_line_ok(line: &str) -> bool {
    let fields: Vec<&str> = line.split_ascii_whitespace().collect();
    if fields.is_empty() {
        return true;
    }
    fields.len() == 6
        && fields[3].parse::<i64>().is_ok()
        && fields[4].parse::<f64>().map(f64::is_finite).unwrap_or(false)
}
