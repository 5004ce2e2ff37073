//! Chernoff tail exponents and the rational functions that bound them.
//!
//! Each [`ExponentKind`] names a function `f(δ)` with `f(0) = 0`, strictly
//! decreasing for `δ > 0`, such that a tail probability is bounded by
//! `exp(f(δ)·μ)`. Every approximant in [`pade_table`] satisfies
//! `f(δ) < r(δ) < 0` on its validated domain, so replacing `f` by `r` only
//! loosens the bound.
//!
//! | kind        | exact exponent            |
//! |-------------|---------------------------|
//! | `PredUpper` | `δ − (1+δ)·ln(1+δ)`       |
//! | `PredLower` | `−δ − (1−δ)·ln(1−δ)`      |
//! | `RegUpper`  | `−δ + ln(1+δ)`            |
//! | `RegLower`  | `δ + ln(1−δ)`             |

use std::fmt;

use crate::error::{BoundError, Result};

/// Upper end of the interval on which the upper-kind approximants are
/// validated as bounds (the lower kinds stop at 1).
pub const UPPER_APPROX_DOMAIN: f64 = 10.0;

/// Below this δ the exact exponents are evaluated from their Taylor series.
pub const SERIES_CUTOFF: f64 = 1e-4;

/// Largest coefficient count accepted by [`series_coefficients`].
pub const MAX_SERIES_TERMS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExponentKind {
    /// Upper tail of the sum, mean known.
    PredUpper,
    /// Lower tail of the sum, mean known.
    PredLower,
    /// Upper confidence limit on the mean from an observed sum.
    RegUpper,
    /// Lower confidence limit on the mean from an observed sum.
    RegLower,
}

impl ExponentKind {
    pub const ALL: [ExponentKind; 4] = [
        ExponentKind::PredUpper,
        ExponentKind::PredLower,
        ExponentKind::RegUpper,
        ExponentKind::RegLower,
    ];

    pub fn is_upper(self) -> bool {
        matches!(self, ExponentKind::PredUpper | ExponentKind::RegUpper)
    }

    pub fn is_prediction(self) -> bool {
        matches!(self, ExponentKind::PredUpper | ExponentKind::PredLower)
    }

    pub fn name(self) -> &'static str {
        match self {
            ExponentKind::PredUpper => "pred-upper",
            ExponentKind::PredLower => "pred-lower",
            ExponentKind::RegUpper => "reg-upper",
            ExponentKind::RegLower => "reg-lower",
        }
    }
}

impl fmt::Display for ExponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ApproxOrder {
    /// `−δ²/(2+δ)` and `−δ²/2`, from the usual bounds on `ln(1±δ)`.
    /// Prediction kinds only.
    Classic,
    Pade2,
    Pade3,
    Pade4,
}

impl ApproxOrder {
    pub const ALL: [ApproxOrder; 4] = [
        ApproxOrder::Classic,
        ApproxOrder::Pade2,
        ApproxOrder::Pade3,
        ApproxOrder::Pade4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ApproxOrder::Classic => "classic",
            ApproxOrder::Pade2 => "pade2",
            ApproxOrder::Pade3 => "pade3",
            ApproxOrder::Pade4 => "pade4",
        }
    }
}

impl fmt::Display for ApproxOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Relative deviation δ from the mean.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Delta(pub f64);

impl Delta {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for Delta {
    fn from(value: f64) -> Self {
        Delta(value)
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Classical bound built from rational bounds on `ln(1±δ)`.
    Classical,
    /// Coefficients taken directly from the published closed forms.
    Transcribed,
    /// Coefficients recomputed by Taylor matching (see [`crate::pade`]).
    Rederived,
}

/// `δ²·(a₀ + a₁δ + …) / (b₀ + b₁δ + …)` with integer coefficients in
/// ascending powers. The numerator always starts with two zeros.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalApprox {
    pub numerator: &'static [i64],
    pub denominator: &'static [i64],
    pub provenance: Provenance,
}

fn horner(coeffs: &[i64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
}

fn horner_derivative(coeffs: &[i64], x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (i, &c)| acc * x + (i as f64) * (c as f64))
}

impl RationalApprox {
    pub fn eval(&self, x: f64) -> f64 {
        horner(self.numerator, x) / horner(self.denominator, x)
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let n = horner(self.numerator, x);
        let d = horner(self.denominator, x);
        let dn = horner_derivative(self.numerator, x);
        let dd = horner_derivative(self.denominator, x);
        (dn * d - n * dd) / (d * d)
    }

    /// Degrees of (numerator, denominator).
    pub fn degrees(&self) -> (usize, usize) {
        (self.numerator.len() - 1, self.denominator.len() - 1)
    }
}

macro_rules! table {
    ($prov:ident, [$($n:expr),*], [$($d:expr),*]) => {
        RationalApprox {
            numerator: &[$($n),*],
            denominator: &[$($d),*],
            provenance: Provenance::$prov,
        }
    };
}

static PRED_UPPER_CLASSIC: RationalApprox = table!(Classical, [0, 0, -1], [2, 1]);
static PRED_LOWER_CLASSIC: RationalApprox = table!(Classical, [0, 0, -1], [2]);

static PRED_UPPER_PADE2: RationalApprox = table!(Transcribed, [0, 0, -3], [6, 2]);
static PRED_LOWER_PADE2: RationalApprox = table!(Transcribed, [0, 0, -9], [18, -6, -1]);
static REG_UPPER_PADE2: RationalApprox = table!(Transcribed, [0, 0, -3], [6, 4]);
static REG_LOWER_PADE2: RationalApprox = table!(Transcribed, [0, 0, -9], [18, -12, -1]);

static PRED_UPPER_PADE3: RationalApprox = table!(Rederived, [0, 0, -15, -7], [30, 24, 3]);
static PRED_LOWER_PADE3: RationalApprox = table!(Rederived, [0, 0, -210, 125], [420, -390, 60, 3]);
// The [3/3] form of this exponent lies below it, so the [3/2] form is used.
static REG_UPPER_PADE3: RationalApprox = table!(Rederived, [0, 0, -15, -8], [30, 36, 9]);
static REG_LOWER_PADE3: RationalApprox = table!(Rederived, [0, 0, -240, 155], [480, -630, 180, 3]);

static PRED_UPPER_PADE4: RationalApprox =
    table!(Rederived, [0, 0, -210, -200, -35], [420, 540, 180, 12]);
static PRED_LOWER_PADE4: RationalApprox = table!(
    Rederived,
    [0, 0, 7350, -8260, 1975],
    [-14700, 21420, -8640, 780, 18]
);
static REG_UPPER_PADE4: RationalApprox =
    table!(Rederived, [0, 0, -210, -220, -45], [420, 720, 360, 48]);
static REG_LOWER_PADE4: RationalApprox = table!(
    Rederived,
    [0, 0, 3150, -3780, 985],
    [-6300, 11760, -6660, 1080, 6]
);

/// Coefficient table behind [`approx_exponent`].
pub fn pade_table(kind: ExponentKind, order: ApproxOrder) -> Result<&'static RationalApprox> {
    use ApproxOrder::*;
    use ExponentKind::*;
    Ok(match (kind, order) {
        (PredUpper, Classic) => &PRED_UPPER_CLASSIC,
        (PredLower, Classic) => &PRED_LOWER_CLASSIC,
        (PredUpper, Pade2) => &PRED_UPPER_PADE2,
        (PredLower, Pade2) => &PRED_LOWER_PADE2,
        (RegUpper, Pade2) => &REG_UPPER_PADE2,
        (RegLower, Pade2) => &REG_LOWER_PADE2,
        (PredUpper, Pade3) => &PRED_UPPER_PADE3,
        (PredLower, Pade3) => &PRED_LOWER_PADE3,
        (RegUpper, Pade3) => &REG_UPPER_PADE3,
        (RegLower, Pade3) => &REG_LOWER_PADE3,
        (PredUpper, Pade4) => &PRED_UPPER_PADE4,
        (PredLower, Pade4) => &PRED_LOWER_PADE4,
        (RegUpper, Pade4) => &REG_UPPER_PADE4,
        (RegLower, Pade4) => &REG_LOWER_PADE4,
        (RegUpper | RegLower, Classic) => return Err(BoundError::Unsupported { kind, order }),
    })
}

pub fn is_supported(kind: ExponentKind, order: ApproxOrder) -> bool {
    kind.is_prediction() || order != ApproxOrder::Classic
}

/// Taylor coefficient of δᵏ in the exact exponent, `k ≥ 2`.
fn series_term(kind: ExponentKind, k: usize) -> f64 {
    let k_f = k as f64;
    let alternating = if k.is_multiple_of(2) { -1.0 } else { 1.0 };
    match kind {
        ExponentKind::PredUpper => alternating / (k_f * (k_f - 1.0)),
        ExponentKind::PredLower => -1.0 / (k_f * (k_f - 1.0)),
        ExponentKind::RegUpper => alternating / k_f,
        ExponentKind::RegLower => -1.0 / k_f,
    }
}

/// First `count` Taylor coefficients of the exact exponent at 0, constant
/// term first.
pub fn series_coefficients(kind: ExponentKind, count: usize) -> Result<Vec<f64>> {
    if count == 0 || count > MAX_SERIES_TERMS {
        return Err(BoundError::InvalidArgument(format!(
            "series coefficient count must be in 1..={MAX_SERIES_TERMS}, got {count}"
        )));
    }
    Ok((0..count)
        .map(|k| if k < 2 { 0.0 } else { series_term(kind, k) })
        .collect())
}

fn check_domain(kind: ExponentKind, delta: f64, upper_limit: f64) -> Result<()> {
    let ok = if kind.is_upper() {
        delta > 0.0 && delta <= upper_limit
    } else {
        delta > 0.0 && delta < 1.0
    };
    if ok {
        Ok(())
    } else {
        Err(BoundError::Domain { kind, delta })
    }
}

/// Exact exponent without domain checks. Callers guarantee `δ ≥ 0` and,
/// for the lower kinds, `δ < 1`.
pub(crate) fn exact_unchecked(kind: ExponentKind, delta: f64) -> f64 {
    if delta < SERIES_CUTOFF {
        // Horner through δ⁶: the log forms cancel catastrophically here.
        let mut acc = 0.0;
        for k in (2..=6).rev() {
            acc = acc * delta + series_term(kind, k);
        }
        return acc * delta * delta;
    }
    if delta < ATANH_CUTOFF {
        return exact_atanh_form(kind, delta);
    }
    match kind {
        ExponentKind::PredUpper => delta - (1.0 + delta) * delta.ln_1p(),
        ExponentKind::PredLower => -delta - (1.0 - delta) * (-delta).ln_1p(),
        ExponentKind::RegUpper => -delta + delta.ln_1p(),
        ExponentKind::RegLower => delta + (-delta).ln_1p(),
    }
}

/// Below this δ the log forms are replaced by [`exact_atanh_form`].
const ATANH_CUTOFF: f64 = 0.5;

/// With `ln(1±δ) = ±2·atanh(w)`, `w = δ/(2±δ)`, the linear parts cancel
/// analytically and each exponent becomes `−δ²/(2±δ)` plus a multiple of
/// `S(w) = w³/3 + w⁵/5 + …`, leaving no subtraction of nearly equal terms.
fn exact_atanh_form(kind: ExponentKind, delta: f64) -> f64 {
    let (w, base) = if kind.is_upper() {
        (delta / (2.0 + delta), -delta * delta / (2.0 + delta))
    } else {
        (delta / (2.0 - delta), -delta * delta / (2.0 - delta))
    };
    let w2 = w * w;
    let mut power = w * w2;
    let mut s = 0.0;
    let mut j = 3.0;
    loop {
        let term = power / j;
        let next = s + term;
        if next == s {
            break;
        }
        s = next;
        power *= w2;
        j += 2.0;
    }
    match kind {
        ExponentKind::PredUpper => base - 2.0 * (1.0 + delta) * s,
        ExponentKind::PredLower => base + 2.0 * (1.0 - delta) * s,
        ExponentKind::RegUpper => base + 2.0 * s,
        ExponentKind::RegLower => base - 2.0 * s,
    }
}

pub(crate) fn exact_derivative(kind: ExponentKind, delta: f64) -> f64 {
    match kind {
        ExponentKind::PredUpper => -delta.ln_1p(),
        ExponentKind::PredLower => (-delta).ln_1p(),
        ExponentKind::RegUpper => -delta / (1.0 + delta),
        ExponentKind::RegLower => -delta / (1.0 - delta),
    }
}

/// Exact exponent `f(δ)`; negative for every δ in the domain.
pub fn exact_exponent(kind: ExponentKind, delta: Delta) -> Result<f64> {
    check_domain(kind, delta.0, f64::INFINITY)?;
    Ok(exact_unchecked(kind, delta.0))
}

/// Rational approximant value; on the validated domain it lies strictly
/// between the exact exponent and zero.
pub fn approx_exponent(kind: ExponentKind, order: ApproxOrder, delta: Delta) -> Result<f64> {
    let table = pade_table(kind, order)?;
    check_domain(kind, delta.0, UPPER_APPROX_DOMAIN)?;
    Ok(table.eval(delta.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn exact_values() {
        let v = exact_exponent(ExponentKind::PredUpper, Delta(1.0)).unwrap();
        assert!(close(v, 1.0 - 2.0 * 2f64.ln(), 1e-15));
        // 0.5 + ln 0.5
        let v = exact_exponent(ExponentKind::RegLower, Delta(0.5)).unwrap();
        assert!(close(v, -0.193_147_180_559_945_3, 1e-15));
    }

    #[test]
    fn leading_behaviour_near_zero() {
        for kind in ExponentKind::ALL {
            for &d in &[1e-9, 1e-7, 5e-5, 2e-4] {
                let v = exact_exponent(kind, Delta(d)).unwrap();
                let rel = (v / (-d * d / 2.0) - 1.0).abs();
                assert!(rel < 1.0 * d, "{kind} at {d}: {v}");
            }
        }
    }

    #[test]
    fn atanh_branch_is_continuous() {
        for kind in ExponentKind::ALL {
            let below = exact_unchecked(kind, ATANH_CUTOFF * (1.0 - f64::EPSILON));
            let above = exact_unchecked(kind, ATANH_CUTOFF);
            assert!(((below - above) / above).abs() < 1e-14, "{kind}");
        }
    }

    #[test]
    fn series_branch_is_continuous() {
        for kind in ExponentKind::ALL {
            let below = exact_unchecked(kind, SERIES_CUTOFF * (1.0 - 1e-12));
            let above = exact_unchecked(kind, SERIES_CUTOFF);
            assert!(((below - above) / above).abs() < 1e-10, "{kind}");
        }
    }

    #[test]
    fn domain_errors() {
        for kind in ExponentKind::ALL {
            assert!(exact_exponent(kind, Delta(0.0)).is_err());
            assert!(exact_exponent(kind, Delta(-0.1)).is_err());
        }
        assert!(exact_exponent(ExponentKind::PredLower, Delta(1.0)).is_err());
        assert!(exact_exponent(ExponentKind::RegLower, Delta(1.5)).is_err());
        assert!(exact_exponent(ExponentKind::RegUpper, Delta(50.0)).is_ok());
        assert!(approx_exponent(ExponentKind::PredUpper, ApproxOrder::Pade2, Delta(10.0)).is_ok());
        assert!(approx_exponent(ExponentKind::PredUpper, ApproxOrder::Pade2, Delta(10.5)).is_err());
    }

    #[test]
    fn approx_values() {
        use ApproxOrder::*;
        use ExponentKind::*;
        let v = approx_exponent(PredUpper, Pade2, Delta(0.5)).unwrap();
        assert!(close(v, -3.0 / 28.0, 1e-16));
        let v = approx_exponent(PredLower, Pade2, Delta(0.5)).unwrap();
        assert!(close(v, -2.25 / 14.75, 1e-16));
        let v = approx_exponent(RegUpper, Pade2, Delta(0.5)).unwrap();
        assert!(close(v, -0.09375, 1e-16));

        let exact = exact_exponent(PredUpper, Delta(0.5)).unwrap();
        let cubic = approx_exponent(PredUpper, Pade3, Delta(0.5)).unwrap();
        let quad = approx_exponent(PredUpper, Pade2, Delta(0.5)).unwrap();
        assert!(exact < cubic && cubic < quad);
    }

    #[test]
    fn unsupported_pairs() {
        for kind in [ExponentKind::RegUpper, ExponentKind::RegLower] {
            assert_eq!(
                pade_table(kind, ApproxOrder::Classic),
                Err(BoundError::Unsupported {
                    kind,
                    order: ApproxOrder::Classic
                })
            );
            assert!(!is_supported(kind, ApproxOrder::Classic));
        }
    }

    #[test]
    fn quadratic_tables() {
        let t = pade_table(ExponentKind::PredUpper, ApproxOrder::Pade2).unwrap();
        assert_eq!((t.numerator, t.denominator), (&[0, 0, -3][..], &[6, 2][..]));
        let t = pade_table(ExponentKind::PredLower, ApproxOrder::Pade2).unwrap();
        assert_eq!(
            (t.numerator, t.denominator),
            (&[0, 0, -9][..], &[18, -6, -1][..])
        );
        let t = pade_table(ExponentKind::RegLower, ApproxOrder::Pade2).unwrap();
        assert_eq!(
            (t.numerator, t.denominator),
            (&[0, 0, -9][..], &[18, -12, -1][..])
        );
        assert_eq!(t.provenance, Provenance::Transcribed);
        let t = pade_table(ExponentKind::PredUpper, ApproxOrder::Pade3).unwrap();
        assert_eq!(t.provenance, Provenance::Rederived);
        assert_eq!(&t.numerator[2..], &[-15, -7]);
    }

    #[test]
    fn series_examples() {
        let c = series_coefficients(ExponentKind::PredUpper, 5).unwrap();
        assert_eq!(c, vec![0.0, 0.0, -0.5, 1.0 / 6.0, -1.0 / 12.0]);
        let c = series_coefficients(ExponentKind::RegLower, 5).unwrap();
        assert_eq!(c, vec![0.0, 0.0, -0.5, -1.0 / 3.0, -0.25]);
        let c = series_coefficients(ExponentKind::PredLower, 3).unwrap();
        assert_eq!(c, vec![0.0, 0.0, -0.5]);
        let c = series_coefficients(ExponentKind::RegUpper, 6).unwrap();
        assert_eq!(c[5], 0.2);
        assert!(series_coefficients(ExponentKind::RegUpper, 0).is_err());
        assert!(series_coefficients(ExponentKind::RegUpper, 13).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        for kind in ExponentKind::ALL {
            for &d in &[0.01, 0.3, 0.9] {
                let fd = (exact_unchecked(kind, d + h) - exact_unchecked(kind, d - h)) / (2.0 * h);
                assert!(close(fd, exact_derivative(kind, d), 1e-7), "{kind} {d}");
            }
            for order in ApproxOrder::ALL {
                if let Ok(t) = pade_table(kind, order) {
                    let d = 0.4;
                    let fd = (t.eval(d + h) - t.eval(d - h)) / (2.0 * h);
                    assert!(close(fd, t.derivative(d), 1e-7), "{kind} {order}");
                }
            }
        }
    }
}
