//! Solving `f(δ) = β` for the deviation δ.
//!
//! The quadratic approximants (classical and Padé) are inverted in closed
//! form; the exact exponents and the cubic/quartic approximants by a
//! bracketed Newton iteration. Because every approximant lies above the
//! exact exponent, the δ it returns is never smaller than the exact one and
//! so always certifies the requested level.

use std::fmt;

use crate::error::{BoundError, Result};
use crate::exponents::{
    self, pade_table, ApproxOrder, Delta, ExponentKind, RationalApprox, UPPER_APPROX_DOMAIN,
};
use crate::roots::solve_decreasing;
pub use crate::roots::solve_quadratic_stable;

/// Default tolerance on `|f(δ) − β|`.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Iteration cap for the numeric inversions.
pub const MAX_ITERATIONS: usize = 200;

/// Largest double below 1, the right end of the lower-kind bracket.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// Normalised log tail level `ln(γ)/μ`; always finite and negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Beta(f64);

impl Beta {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value < 0.0 {
            Ok(Beta(value))
        } else {
            Err(BoundError::NonNegativeBeta(value))
        }
    }

    pub fn from_gamma(gamma: f64, mean: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(BoundError::InvalidGamma(gamma));
        }
        Self::from_log_gamma(gamma.ln(), mean)
    }

    /// Takes `ln γ` directly, for levels too small to hold in a double.
    pub fn from_log_gamma(log_gamma: f64, mean: f64) -> Result<Self> {
        if !(log_gamma.is_finite() && log_gamma < 0.0) {
            return Err(BoundError::InvalidGamma(log_gamma.exp()));
        }
        if !(mean.is_finite() && mean > 0.0) {
            return Err(BoundError::InvalidMean(mean));
        }
        Self::new(log_gamma / mean)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Exact,
    Classic,
    Pade2,
    Pade3,
    Pade4,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Exact,
        Method::Classic,
        Method::Pade2,
        Method::Pade3,
        Method::Pade4,
    ];

    pub fn approx_order(self) -> Option<ApproxOrder> {
        match self {
            Method::Exact => None,
            Method::Classic => Some(ApproxOrder::Classic),
            Method::Pade2 => Some(ApproxOrder::Pade2),
            Method::Pade3 => Some(ApproxOrder::Pade3),
            Method::Pade4 => Some(ApproxOrder::Pade4),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Classic => "classic",
            Method::Pade2 => "pade2",
            Method::Pade3 => "pade3",
            Method::Pade4 => "pade4",
        }
    }

    pub fn supports(self, kind: ExponentKind) -> bool {
        self != Method::Classic || kind.is_prediction()
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Method::Exact),
            "classic" | "old" => Ok(Method::Classic),
            "pade2" | "new" => Ok(Method::Pade2),
            "pade3" => Ok(Method::Pade3),
            "pade4" => Ok(Method::Pade4),
            other => Err(BoundError::InvalidArgument(format!(
                "unknown method '{other}' (expected exact, classic, pade2, pade3 or pade4)"
            ))),
        }
    }
}

/// A solved deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaResult {
    pub delta: Delta,
    pub kind: ExponentKind,
    pub method: Method,
    /// Closed forms: the quadratic evaluated at the root. Numeric methods:
    /// `f(δ) − β` for the function that was solved.
    pub residual: f64,
    /// False when δ fell outside the domain on which the method's bound is
    /// validated (δ ≥ 1 for lower kinds, δ > 10 for upper approximants).
    pub in_domain: bool,
}

impl DeltaResult {
    pub fn value(&self) -> f64 {
        self.delta.0
    }
}

fn in_domain(kind: ExponentKind, delta: f64, approximant: bool) -> bool {
    if kind.is_upper() {
        !approximant || delta <= UPPER_APPROX_DOMAIN
    } else {
        delta < 1.0
    }
}

/// Positive root of `N(δ) − β·D(δ) = 0` for a table of total degree ≤ 2.
fn invert_quadratic_table(
    kind: ExponentKind,
    method: Method,
    table: &RationalApprox,
    beta: Beta,
) -> Result<DeltaResult> {
    let b = beta.value();
    let coeff = |c: &[i64], i: usize| c.get(i).copied().unwrap_or(0) as f64;
    let qa = coeff(table.numerator, 2) - b * coeff(table.denominator, 2);
    let qb = coeff(table.numerator, 1) - b * coeff(table.denominator, 1);
    let qc = coeff(table.numerator, 0) - b * coeff(table.denominator, 0);
    let (small, large) = solve_quadratic_stable(qa, qb, qc)?;
    // qa < 0 < qc for every β < 0, so the roots have opposite signs.
    debug_assert!(small < 0.0 && large > 0.0, "roots {small}, {large}");
    let residual = (qa * large + qb) * large + qc;
    Ok(DeltaResult {
        delta: Delta(large),
        kind,
        method,
        residual,
        in_domain: in_domain(kind, large, true),
    })
}

/// Closed-form inversion of the quadratic Padé bounds in prediction mode.
pub fn invert_pade2_prediction(kind: ExponentKind, beta: Beta) -> Result<DeltaResult> {
    if !kind.is_prediction() {
        return Err(BoundError::InvalidArgument(format!(
            "prediction-mode inversion requested for {kind}"
        )));
    }
    invert_quadratic_table(
        kind,
        Method::Pade2,
        pade_table(kind, ApproxOrder::Pade2)?,
        beta,
    )
}

/// Closed-form inversion of the quadratic Padé bounds in regression mode.
pub fn invert_pade2_regression(kind: ExponentKind, beta: Beta) -> Result<DeltaResult> {
    if kind.is_prediction() {
        return Err(BoundError::InvalidArgument(format!(
            "regression-mode inversion requested for {kind}"
        )));
    }
    invert_quadratic_table(
        kind,
        Method::Pade2,
        pade_table(kind, ApproxOrder::Pade2)?,
        beta,
    )
}

/// Closed-form inversion of `−δ²/(2+δ)` and `−δ²/2`.
pub fn invert_classic(kind: ExponentKind, beta: Beta) -> Result<DeltaResult> {
    invert_quadratic_table(
        kind,
        Method::Classic,
        pade_table(kind, ApproxOrder::Classic)?,
        beta,
    )
}

fn invert_numeric<F>(
    kind: ExponentKind,
    method: Method,
    beta: Beta,
    tol: f64,
    eval: F,
) -> Result<DeltaResult>
where
    F: Fn(f64) -> (f64, f64),
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(BoundError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let target = beta.value();
    let hi = if kind.is_upper() {
        let mut hi = 1.0;
        while eval(hi).0 > target {
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(BoundError::NoConvergence { iterations: 0 });
            }
        }
        hi
    } else {
        if eval(BELOW_ONE).0 > target {
            return Err(BoundError::Infeasible { kind, beta: target });
        }
        BELOW_ONE
    };
    // Every exponent behaves like −δ²/2 at the origin.
    let start = (-2.0 * target).sqrt();
    let root = solve_decreasing(eval, target, 0.0, hi, start, tol, MAX_ITERATIONS)?;
    Ok(DeltaResult {
        delta: Delta(root.x),
        kind,
        method,
        residual: root.residual,
        in_domain: in_domain(kind, root.x, method != Method::Exact),
    })
}

/// Numeric root of the exact exponent. Lower kinds report
/// [`BoundError::Infeasible`] when even δ just below 1 does not reach β.
pub fn invert_exact(kind: ExponentKind, beta: Beta, tol: f64) -> Result<DeltaResult> {
    invert_numeric(kind, Method::Exact, beta, tol, |d| {
        (
            exponents::exact_unchecked(kind, d),
            exponents::exact_derivative(kind, d),
        )
    })
}

/// Numeric root of a cubic or quartic approximant.
pub fn invert_pade_numeric(
    kind: ExponentKind,
    order: ApproxOrder,
    beta: Beta,
    tol: f64,
) -> Result<DeltaResult> {
    let method = match order {
        ApproxOrder::Pade3 => Method::Pade3,
        ApproxOrder::Pade4 => Method::Pade4,
        other => {
            return Err(BoundError::InvalidArgument(format!(
                "numeric approximant inversion takes pade3 or pade4, got {other}"
            )))
        }
    };
    let table = pade_table(kind, order)?;
    invert_numeric(kind, method, beta, tol, |d| {
        (table.eval(d), table.derivative(d))
    })
}

/// Dispatches to the inversion matching `method`.
pub fn invert(kind: ExponentKind, method: Method, beta: Beta, tol: f64) -> Result<DeltaResult> {
    match method {
        Method::Exact => invert_exact(kind, beta, tol),
        Method::Classic => invert_classic(kind, beta),
        Method::Pade2 if kind.is_prediction() => invert_pade2_prediction(kind, beta),
        Method::Pade2 => invert_pade2_regression(kind, beta),
        Method::Pade3 => invert_pade_numeric(kind, ApproxOrder::Pade3, beta, tol),
        Method::Pade4 => invert_pade_numeric(kind, ApproxOrder::Pade4, beta, tol),
    }
}
