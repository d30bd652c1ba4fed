//! Paired and unpaired Student t-tests with two-sided p-values computed
//! from the regularized incomplete beta function.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;
use crate::run::{pair_topics, TopicScoreMap};

const CF_TOLERANCE: f64 = 1e-12;
const CF_MAX_ITERATIONS: usize = 300;
const TINY: f64 = 1e-300;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Modified Lentz evaluation of the continued fraction for I_x(a, b).
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> Result<f64> {
    let clamp = |v: f64| if v.abs() < TINY { TINY } else { v };
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 / clamp(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=CF_MAX_ITERATIONS {
        let m = m as f64;
        let m2 = 2.0 * m;
        let even = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / clamp(1.0 + even * d);
        c = clamp(1.0 + even / c);
        h *= d * c;
        let odd = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / clamp(1.0 + odd * d);
        c = clamp(1.0 + odd / c);
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < CF_TOLERANCE {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence { x, a, b })
}

/// `I_x(a, b)` given both `x` and `1 - x`, so callers can pass an
/// accurately computed complement.
fn incomplete_beta(x: f64, complement: f64, a: f64, b: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    if complement <= 0.0 {
        return Ok(1.0);
    }
    let ln_front = a * x.ln() + b * complement.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(ln_front.exp() * beta_continued_fraction(x, a, b)? / a)
    } else {
        Ok(1.0 - ln_front.exp() * beta_continued_fraction(complement, b, a)? / b)
    }
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "incomplete beta needs 0 <= x <= 1 and a, b > 0 (x={x}, a={a}, b={b})"
        )));
    }
    Ok(incomplete_beta(x, 1.0 - x, a, b)?.clamp(0.0, 1.0))
}

/// Two-sided tail probability `P(|T| >= |t|)` of Student's t with `df`
/// degrees of freedom.
pub fn student_t_sf(t: f64, df: f64) -> Result<f64> {
    if df.is_nan() || df <= 0.0 || t.is_nan() {
        return Err(Error::Domain(format!("student t needs df > 0 and a number t (t={t}, df={df})")));
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    let t2 = t * t;
    if !t2.is_finite() {
        return Ok(0.0);
    }
    let denom = df + t2;
    let p = incomplete_beta(df / denom, t2 / denom, df / 2.0, 0.5)?;
    Ok(p.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    Paired,
    UnpairedPooled,
    UnpairedWelch,
}

/// Outcome of a two-sided t-test. `statistic` and `p_value` are `None`
/// when the statistic is undefined: zero variance around a nonzero mean
/// difference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub kind: TestKind,
    pub statistic: Option<f64>,
    pub p_value: Option<f64>,
    pub df: f64,
}

/// Standard errors this small relative to the data are rounding noise.
fn negligible(value: f64, scale: f64) -> bool {
    value.abs() <= 16.0 * f64::EPSILON * scale
}

fn finish(kind: TestKind, diff: f64, se: f64, df: f64, scale: f64) -> Result<TestResult> {
    let (statistic, p_value) = if negligible(se, scale) {
        if negligible(diff, scale) {
            (Some(0.0), Some(1.0))
        } else {
            (None, None)
        }
    } else {
        let t = diff / se;
        (Some(t), Some(student_t_sf(t, df)?))
    };
    Ok(TestResult {
        kind,
        statistic,
        p_value,
        df,
    })
}

fn magnitude<'a>(values: impl IntoIterator<Item = &'a f64>) -> f64 {
    values.into_iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Paired t-test on `x - y` over identical topic sets.
pub fn paired_t_test(x: &TopicScoreMap, y: &TopicScoreMap) -> Result<TestResult> {
    let pairing = pair_topics(x, y);
    if !pairing.is_identical() {
        return Err(Error::TopicMismatch {
            only_a: pairing.only_a.len(),
            only_b: pairing.only_b.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::InvalidArgument("paired t-test needs at least 2 topics".into()));
    }
    let diffs: Vec<f64> = x.scores.iter().map(|(t, v)| v - y.scores[t]).collect();
    let mean = numeric::mean(diffs.iter().copied()).expect("n >= 2");
    let sd = numeric::sample_variance(&diffs, mean).sqrt();
    let scale = magnitude(x.scores.values().chain(y.scores.values()));
    finish(TestKind::Paired, mean, sd / (n as f64).sqrt(), (n - 1) as f64, scale)
}

/// Two-sample t-test of `mean(x) - mean(y)`. Pooled variance by default,
/// Welch–Satterthwaite when `welch` is set. Topic sets may differ.
pub fn unpaired_t_test(x: &TopicScoreMap, y: &TopicScoreMap, welch: bool) -> Result<TestResult> {
    let (nx, ny) = (x.len(), y.len());
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidArgument(
            "unpaired t-test needs at least 2 topics per sample".into(),
        ));
    }
    let xs: Vec<f64> = x.values().collect();
    let ys: Vec<f64> = y.values().collect();
    let (mx, my) = (
        numeric::mean(xs.iter().copied()).expect("nx >= 2"),
        numeric::mean(ys.iter().copied()).expect("ny >= 2"),
    );
    let (vx, vy) = (
        numeric::sample_variance(&xs, mx),
        numeric::sample_variance(&ys, my),
    );
    let (nxf, nyf) = (nx as f64, ny as f64);
    let scale = magnitude(xs.iter().chain(&ys));
    if welch {
        let (ex, ey) = (vx / nxf, vy / nyf);
        let se2 = ex + ey;
        let df = if se2 > 0.0 {
            se2 * se2 / (ex * ex / (nxf - 1.0) + ey * ey / (nyf - 1.0))
        } else {
            nxf + nyf - 2.0
        };
        finish(TestKind::UnpairedWelch, mx - my, se2.sqrt(), df, scale)
    } else {
        let df = nxf + nyf - 2.0;
        let pooled = ((nxf - 1.0) * vx + (nyf - 1.0) * vy) / df;
        let se = (pooled * (1.0 / nxf + 1.0 / nyf)).sqrt();
        finish(TestKind::UnpairedPooled, mx - my, se, df, scale)
    }
}
