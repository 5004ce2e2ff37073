//! Exact binomial tails by log-space summation.
//!
//! Each pmf term is computed in log form with Loader's saddle-point
//! expansion (deviance `bd0` plus Stirling corrections), which keeps
//! absolute log-accuracy near machine precision even for n ≈ 10⁸. Terms are
//! summed relative to the largest one so tails far below the double
//! underflow threshold of individual factors stay representable.

use std::f64::consts::PI;

use crate::error::{BoundError, Result};

/// Largest trial count accepted by the exact tails.
pub const MAX_EXACT_TRIALS: u64 = 100_000_000;

/// Summation stops once a term is this small relative to the running sum;
/// terms past that point shrink at least geometrically.
const NEGLIGIBLE: f64 = 1e-20;

/// `ln(n!) − ((n+½)·ln n − n + ½·ln 2π)`.
fn stirlerr(n: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    let x = n as f64;
    if n <= 15 {
        // n! ≤ 15! is exact in a double.
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        return fact.ln() - (x + 0.5) * x.ln() + x - 0.5 * (2.0 * PI).ln();
    }
    let nn = x * x;
    if n > 500 {
        (S0 - S1 / nn) / x
    } else if n > 80 {
        (S0 - (S1 - S2 / nn) / nn) / x
    } else if n > 35 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / x
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / x
    }
}

/// Deviance term `x·ln(x/m) + m − x`, accurate when `x ≈ m`.
fn bd0(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let next = s + ej / (2 * j + 1) as f64;
            if next == s {
                return next;
            }
            s = next;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

/// `ln P(X = x)` for `X ~ Bin(n, p)`, with `q = 1 − p` passed separately so
/// mirrored calls stay exact.
pub(crate) fn ln_pmf(x: u64, n: u64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if x == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if x == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let nf = n as f64;
    if x == 0 {
        return if p < 0.1 {
            -bd0(nf, nf * q) - nf * p
        } else {
            nf * q.ln()
        };
    }
    if x == n {
        return if q < 0.1 {
            -bd0(nf, nf * p) - nf * q
        } else {
            nf * p.ln()
        };
    }
    let xf = x as f64;
    let yf = (n - x) as f64;
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(xf, nf * p) - bd0(yf, nf * q);
    let lf = (2.0 * PI).ln() + xf.ln() + (-xf / nf).ln_1p();
    lc - 0.5 * lf
}

fn validate(n: u64, p: f64) -> Result<()> {
    if n == 0 {
        return Err(BoundError::InvalidArgument(
            "trial count must be at least 1".into(),
        ));
    }
    if n > MAX_EXACT_TRIALS {
        return Err(BoundError::InvalidArgument(format!(
            "exact tails are limited to {MAX_EXACT_TRIALS} trials, got {n}; use simulation"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(BoundError::InvalidArgument(format!(
            "success probability must lie in [0, 1], got {p}"
        )));
    }
    Ok(())
}

fn mode(n: u64, p: f64) -> u64 {
    ((((n + 1) as f64) * p).floor() as u64).min(n)
}

/// `ln P(X ≥ k)` for `k ∈ 1..=n`, summing outward from the largest term.
fn ln_upper_sum(n: u64, p: f64, q: f64, k: u64) -> f64 {
    let start = mode(n, p).clamp(k, n);
    let peak = ln_pmf(start, n, p, q);
    if peak == f64::NEG_INFINITY {
        return peak;
    }
    let mut sum = 1.0;
    let mut i = start + 1;
    while i <= n {
        let t = (ln_pmf(i, n, p, q) - peak).exp();
        sum += t;
        if t < NEGLIGIBLE * sum {
            break;
        }
        i += 1;
    }
    let mut i = start;
    while i > k {
        i -= 1;
        let t = (ln_pmf(i, n, p, q) - peak).exp();
        sum += t;
        if t < NEGLIGIBLE * sum {
            break;
        }
    }
    peak + sum.ln()
}

/// `ln P(X ≥ k)` for `k ∈ 1..=n`. A tail holding the mode is close to 1,
/// so it is taken as `ln(1 − P(X ≤ k−1))` to keep the small deficit exact
/// instead of summing terms to just above or below 1.
fn ln_upper(n: u64, p: f64, q: f64, k: u64) -> f64 {
    if k > mode(n, p) {
        ln_upper_sum(n, p, q, k)
    } else {
        // P(X ≤ k−1) = P(n−X ≥ n−k+1) with n−X ~ Bin(n, q).
        let ln_rest = ln_upper_sum(n, q, p, n - k + 1);
        (-ln_rest.exp()).ln_1p()
    }
}

/// `ln P(X ≥ k)` for `X ~ Bin(n, p)`.
pub fn ln_binomial_tail_upper(n: u64, p: f64, k: i64) -> Result<f64> {
    validate(n, p)?;
    if k < 0 || k as u64 > n + 1 {
        return Err(BoundError::InvalidArgument(format!(
            "upper-tail index must lie in 0..={}, got {k}",
            n + 1
        )));
    }
    let k = k as u64;
    Ok(match k {
        0 => 0.0,
        k if k > n => f64::NEG_INFINITY,
        k => ln_upper(n, p, 1.0 - p, k),
    })
}

/// `ln P(X ≤ k)` for `X ~ Bin(n, p)`, via `n − X ~ Bin(n, 1−p)`.
pub fn ln_binomial_tail_lower(n: u64, p: f64, k: i64) -> Result<f64> {
    validate(n, p)?;
    if k < -1 || k > n as i64 {
        return Err(BoundError::InvalidArgument(format!(
            "lower-tail index must lie in -1..={n}, got {k}"
        )));
    }
    Ok(match k {
        -1 => f64::NEG_INFINITY,
        k if k as u64 == n => 0.0,
        k => ln_upper(n, 1.0 - p, p, n - k as u64),
    })
}

/// `P(X ≥ k)`, `0 ≤ k ≤ n+1`.
pub fn binomial_tail_upper(n: u64, p: f64, k: i64) -> Result<f64> {
    ln_binomial_tail_upper(n, p, k).map(f64::exp)
}

/// `P(X ≤ k)`, `−1 ≤ k ≤ n`.
pub fn binomial_tail_lower(n: u64, p: f64, k: i64) -> Result<f64> {
    ln_binomial_tail_lower(n, p, k).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pascal's triangle in f64; exact for n ≤ 50.
    fn binom(n: u64, k: u64) -> f64 {
        let mut row = vec![1.0f64];
        for _ in 0..n {
            let mut next = vec![1.0; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        row[k as usize]
    }

    #[test]
    fn ten_fair_coins() {
        let up = binomial_tail_upper(10, 0.5, 5).unwrap();
        assert!((up - 638.0 / 1024.0).abs() < 1e-14, "{up}");
        let lo = binomial_tail_lower(10, 0.5, 4).unwrap();
        assert!((lo - 386.0 / 1024.0).abs() < 1e-14, "{lo}");
    }

    #[test]
    fn pmf_against_direct_product() {
        for &(n, p) in &[(20u64, 0.3f64), (50, 0.02), (37, 0.9)] {
            for x in 0..=n {
                let direct = binom(n, x) * p.powi(x as i32) * (1.0 - p).powi((n - x) as i32);
                let got = ln_pmf(x, n, p, 1.0 - p).exp();
                assert!(
                    (got - direct).abs() <= 1e-13 * direct.max(1e-300),
                    "n={n} p={p} x={x}: {got} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn stirlerr_continuity() {
        // Large-n series against the exact small-n form near the switch.
        let exact16: f64 = (1..=16).map(|k| (k as f64).ln()).sum::<f64>() - 16.5 * 16f64.ln()
            + 16.0
            - 0.5 * (2.0 * PI).ln();
        assert!((stirlerr(16) - exact16).abs() < 1e-13);
    }

    #[test]
    fn trivial_ends() {
        assert_eq!(binomial_tail_upper(7, 0.3, 0).unwrap(), 1.0);
        assert_eq!(binomial_tail_upper(7, 0.3, 8).unwrap(), 0.0);
        assert_eq!(binomial_tail_lower(7, 0.3, 7).unwrap(), 1.0);
        assert_eq!(binomial_tail_lower(7, 0.3, -1).unwrap(), 0.0);
        assert!(binomial_tail_upper(7, 0.3, 9).is_err());
        assert!(binomial_tail_upper(7, 0.3, -1).is_err());
        assert!(binomial_tail_lower(7, 0.3, 8).is_err());
        assert!(binomial_tail_lower(0, 0.3, 0).is_err());
        assert!(binomial_tail_lower(5, 1.3, 0).is_err());
        assert!(binomial_tail_lower(MAX_EXACT_TRIALS + 1, 0.3, 0).is_err());
    }

    #[test]
    fn degenerate_probabilities() {
        assert_eq!(binomial_tail_upper(5, 0.0, 1).unwrap(), 0.0);
        assert_eq!(binomial_tail_upper(5, 1.0, 5).unwrap(), 1.0);
        assert_eq!(binomial_tail_lower(5, 1.0, 4).unwrap(), 0.0);
        assert_eq!(binomial_tail_lower(5, 0.0, 0).unwrap(), 1.0);
    }

    #[test]
    fn complement_sums_to_one() {
        for &(n, p) in &[(1_000_000u64, 0.0002), (1000, 0.2), (30, 0.7)] {
            let mean = (n as f64 * p) as i64;
            for k in [1, mean / 2, mean, mean + 1, mean + mean / 3] {
                let s = binomial_tail_upper(n, p, k).unwrap()
                    + binomial_tail_lower(n, p, k - 1).unwrap();
                assert!((s - 1.0).abs() < 1e-12, "n={n} p={p} k={k}: {s}");
            }
        }
    }

    #[test]
    fn near_one_tails_never_exceed_one() {
        for k in 0..=13 {
            let ln = ln_binomial_tail_lower(13, 0.01, k).unwrap();
            assert!(ln <= 0.0, "k={k}: {ln}");
        }
        // P(X ≤ 8) = 1 − P(X ≥ 9), summed directly from the binomial terms.
        let deficit = -ln_binomial_tail_lower(13, 0.01, 8).unwrap();
        let want: f64 = [(9, 715.0), (10, 286.0), (11, 78.0), (12, 13.0), (13, 1.0)]
            .iter()
            .map(|&(k, c)| c * 0.01f64.powi(k) * 0.99f64.powi(13 - k))
            .sum();
        assert!((deficit - want).abs() < 1e-3 * want, "{deficit} vs {want}");
    }

    #[test]
    fn deep_tail_stays_finite() {
        let ln = ln_binomial_tail_upper(1_000_000, 0.0002, 2000).unwrap();
        assert!(ln.is_finite() && ln < -2000.0);
        let p = binomial_tail_upper(1_000_000, 0.0002, 400).unwrap();
        assert!(p > 0.0 && p < 1e-30);
    }
}
