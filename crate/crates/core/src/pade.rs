//! Exact-rational tooling for Padé coefficient derivation.
//!
//! The compiled-in tables in [`crate::exponents`] are checked against the
//! output of this module: Taylor matching solved in `BigRational`, then
//! scaled to coprime integers. Nothing on the numeric evaluation path
//! depends on it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{BoundError, Result};
use crate::exponents::{ApproxOrder, ExponentKind, RationalApprox};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The exact rational `n/d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    rat(n, d)
}

/// Exact Taylor coefficients of the exponent at 0, constant term first.
pub fn exact_series(kind: ExponentKind, count: usize) -> Vec<BigRational> {
    (0..count)
        .map(|k| {
            if k < 2 {
                return BigRational::zero();
            }
            let k = k as i64;
            let sign = if k % 2 == 0 { -1 } else { 1 };
            match kind {
                ExponentKind::PredUpper => rat(sign, k * (k - 1)),
                ExponentKind::PredLower => rat(-1, k * (k - 1)),
                ExponentKind::RegUpper => rat(sign, k),
                ExponentKind::RegLower => rat(-1, k),
            }
        })
        .collect()
}

/// Degrees `(m, n)` of `P` and `Q` in `f(δ) ≈ δ²·P(δ)/Q(δ)` used for each
/// table. `None` for the classical forms, which are not Padé approximants
/// of the exponent itself.
pub fn shape(kind: ExponentKind, order: ApproxOrder) -> Option<(usize, usize)> {
    let upper = kind.is_upper();
    match order {
        ApproxOrder::Classic => None,
        ApproxOrder::Pade2 => Some(if upper { (0, 1) } else { (0, 2) }),
        ApproxOrder::Pade3 => Some(if upper { (1, 2) } else { (1, 3) }),
        ApproxOrder::Pade4 => Some(if upper { (2, 3) } else { (2, 4) }),
    }
}

/// Solves `A·x = b` by Gauss-Jordan elimination in exact arithmetic.
fn solve_linear(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in &mut a[col][col..] {
            *v = &*v * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            let pivot_row = a[col].clone();
            for (v, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *v -= &factor * p;
            }
            let t = &factor * &b[col];
            b[r] -= t;
        }
    }
    Some(b)
}

/// Padé approximant of `f(δ)/δ²` with numerator degree `m` and denominator
/// degree `n`, returned as the full `(numerator, denominator)` of `f` in
/// ascending powers, normalised to `Q(0) = 1`.
pub fn derive(
    kind: ExponentKind,
    m: usize,
    n: usize,
) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    // g(δ) = f(δ)/δ² has coefficients c[k] = series[k + 2].
    let g: Vec<BigRational> = exact_series(kind, m + n + 3).split_off(2);
    let size = m + n + 1;
    // Unknowns: a_0..a_m, then b_1..b_n. Equation i: a_i − Σ_j b_j·c[i−j] = c[i].
    let mut rows = vec![vec![BigRational::zero(); size]; size];
    let mut rhs = vec![BigRational::zero(); size];
    for i in 0..size {
        if i <= m {
            rows[i][i] = BigRational::one();
        }
        for j in 1..=n.min(i) {
            rows[i][m + j] = -g[i - j].clone();
        }
        rhs[i] = g[i].clone();
    }
    let x = solve_linear(rows, rhs).ok_or_else(|| {
        BoundError::InvalidArgument(format!("degenerate Padé system for {kind} [{m}/{n}]"))
    })?;
    let mut numerator = vec![BigRational::zero(), BigRational::zero()];
    numerator.extend_from_slice(&x[..=m]);
    let mut denominator = vec![BigRational::one()];
    denominator.extend_from_slice(&x[m + 1..]);
    Ok((numerator, denominator))
}

/// Scales a rational function to coprime integer coefficients. The overall
/// sign is kept as derived.
pub fn to_integers(
    numerator: &[BigRational],
    denominator: &[BigRational],
) -> (Vec<BigInt>, Vec<BigInt>) {
    use num_integer::Integer;
    let all = numerator.iter().chain(denominator.iter());
    let lcm = all.clone().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled: Vec<BigInt> = all.map(|c| (c * &lcm).to_integer()).collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let gcd = if gcd.is_zero() { BigInt::one() } else { gcd };
    let scaled: Vec<BigInt> = scaled.into_iter().map(|c| c / &gcd).collect();
    let (num, den) = scaled.split_at(numerator.len());
    (num.to_vec(), den.to_vec())
}

fn to_rationals(coeffs: &[i64]) -> Vec<BigRational> {
    coeffs.iter().map(|&c| rat(c, 1)).collect()
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

/// True when `p1/q1` and `p2/q2` are the same rational function.
pub fn same_function(
    p1: &[BigRational],
    q1: &[BigRational],
    p2: &[BigRational],
    q2: &[BigRational],
) -> bool {
    poly_mul(p1, q2) == poly_mul(p2, q1)
}

/// Does the compiled-in table equal the given exact rational function?
pub fn table_matches(
    table: &RationalApprox,
    numerator: &[BigRational],
    denominator: &[BigRational],
) -> bool {
    same_function(
        &to_rationals(table.numerator),
        &to_rationals(table.denominator),
        numerator,
        denominator,
    )
}

/// Taylor coefficients of a table at 0 by power-series long division.
pub fn taylor_of(table: &RationalApprox, count: usize) -> Vec<BigRational> {
    let num = to_rationals(table.numerator);
    let den = to_rationals(table.denominator);
    let d0 = den[0].clone();
    assert!(!d0.is_zero(), "denominator vanishes at 0");
    let mut out: Vec<BigRational> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = num.get(k).cloned().unwrap_or_else(BigRational::zero);
        for j in 1..den.len().min(k + 1) {
            acc -= &den[j] * &out[k - j];
        }
        out.push(acc / &d0);
    }
    out
}

/// Index of the first Taylor coefficient where the table departs from the
/// exact exponent, i.e. the `k` in an `O(δᵏ)` gap. Returns `limit` if the
/// first `limit` coefficients all agree.
pub fn first_mismatch(kind: ExponentKind, table: &RationalApprox, limit: usize) -> usize {
    let exact = exact_series(kind, limit);
    let approx = taylor_of(table, limit);
    exact
        .iter()
        .zip(approx.iter())
        .position(|(a, b)| a != b)
        .unwrap_or(limit)
}

/// Sign of the first nonzero coefficient of `exact − table`; negative means
/// the table lies above the exponent near 0.
pub fn leading_gap_sign(kind: ExponentKind, table: &RationalApprox, limit: usize) -> i32 {
    let exact = exact_series(kind, limit);
    let approx = taylor_of(table, limit);
    for (a, b) in exact.iter().zip(approx.iter()) {
        let d = a - b;
        if !d.is_zero() {
            return if d.is_negative() { -1 } else { 1 };
        }
    }
    0
}

/// Exact value of a table at `x`.
pub fn table_value(table: &RationalApprox, x: &BigRational) -> BigRational {
    let horner = |c: &[i64]| {
        c.iter()
            .rev()
            .fold(BigRational::zero(), |acc, &v| acc * x + rat(v, 1))
    };
    horner(table.numerator) / horner(table.denominator)
}

/// Rigorous bracket `[lo, hi]` on the exact exponent at `0 < x < 1` from the
/// Taylor series truncated after `terms` coefficients.
///
/// The upper kinds have alternating series with shrinking terms, so the
/// remainder is bounded by the first omitted term. The lower kinds have
/// all-negative terms whose tail is bounded by a geometric series.
pub fn exact_bracket(
    kind: ExponentKind,
    x: &BigRational,
    terms: usize,
) -> (BigRational, BigRational) {
    assert!(
        x.is_positive() && *x < BigRational::one(),
        "bracket needs 0 < x < 1"
    );
    let series = exact_series(kind, terms + 1);
    let mut sum = BigRational::zero();
    let mut power = BigRational::one();
    for c in &series[..terms] {
        sum += c * &power;
        power *= x;
    }
    // `power` is now x^terms; the first omitted term is series[terms]·x^terms.
    let next = &series[terms] * &power;
    if kind.is_upper() {
        if next.is_negative() {
            (&sum + &next, sum)
        } else {
            (sum.clone(), sum + next)
        }
    } else {
        let tail = next / (BigRational::one() - x);
        (&sum + tail, sum)
    }
}

/// Decides `exact(x) < table(x)` in exact arithmetic, widening the series
/// until the bracket separates from the table value. `None` if `max_terms`
/// is not enough.
pub fn exact_below_table(
    kind: ExponentKind,
    table: &RationalApprox,
    x: &BigRational,
    max_terms: usize,
) -> Option<bool> {
    let value = table_value(table, x);
    let mut terms = 16;
    loop {
        let (lo, hi) = exact_bracket(kind, x, terms);
        if hi < value {
            return Some(true);
        }
        if lo >= value {
            return Some(false);
        }
        if terms >= max_terms {
            return None;
        }
        terms = (terms * 2).min(max_terms);
    }
}
