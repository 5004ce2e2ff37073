//! Tail-bound statements and conservative confidence intervals built from
//! solved deviations.
//!
//! Prediction mode bounds a sum `X` with known mean μ:
//! `P(X ≥ (1+δ_U)μ) < γ` and `P(X ≤ (1−δ_L)μ) < γ`. Regression mode bounds
//! the unknown mean from an observed sum μ̂: `E[X] < (1+δ_U)μ̂` and
//! `E[X] > (1−δ_L)μ̂`, each at confidence `1−γ`.

use std::fmt;

use crate::error::{BoundError, Result};
use crate::exponents::ExponentKind;
use crate::inversion::{invert, Beta, DeltaResult, Method, DEFAULT_TOL, MAX_ITERATIONS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Mean known; bound the random sum.
    Prediction,
    /// Sum observed; bound the mean.
    Regression,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Prediction => "prediction",
            Mode::Regression => "regression",
        }
    }

    pub fn upper_kind(self) -> ExponentKind {
        match self {
            Mode::Prediction => ExponentKind::PredUpper,
            Mode::Regression => ExponentKind::RegUpper,
        }
    }

    pub fn lower_kind(self) -> ExponentKind {
        match self {
            Mode::Prediction => ExponentKind::PredLower,
            Mode::Regression => ExponentKind::RegLower,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Upper,
    Lower,
    /// `((1−δ_L)·m, (1+δ_U)·m)`.
    TwoSidedAsymmetric,
    /// `((1−δ_U)·m, (1+δ_U)·m)`; valid because δ_U ≥ δ_L.
    TwoSidedSymmetric,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Upper => "upper",
            Side::Lower => "lower",
            Side::TwoSidedAsymmetric => "two-sided",
            Side::TwoSidedSymmetric => "symmetric",
        }
    }

    pub fn is_two_sided(self) -> bool {
        matches!(self, Side::TwoSidedAsymmetric | Side::TwoSidedSymmetric)
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Side {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "upper" => Ok(Side::Upper),
            "lower" => Ok(Side::Lower),
            "two-sided" | "both" | "asymmetric" => Ok(Side::TwoSidedAsymmetric),
            "symmetric" => Ok(Side::TwoSidedSymmetric),
            other => Err(BoundError::InvalidArgument(format!(
                "unknown side '{other}' (expected upper, lower, two-sided or symmetric)"
            ))),
        }
    }
}

/// A validated request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundQuery {
    log_gamma: f64,
    mean: f64,
    mode: Mode,
    method: Method,
    side: Side,
}

impl BoundQuery {
    /// `mean` is μ in prediction mode and μ̂ in regression mode.
    pub fn new(gamma: f64, mean: f64, mode: Mode, method: Method, side: Side) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(BoundError::InvalidGamma(gamma));
        }
        Self::with_log_gamma(gamma.ln(), mean, mode, method, side)
    }

    pub fn with_log_gamma(
        log_gamma: f64,
        mean: f64,
        mode: Mode,
        method: Method,
        side: Side,
    ) -> Result<Self> {
        // Validates both γ and the mean.
        Beta::from_log_gamma(log_gamma, mean)?;
        if mode == Mode::Regression && method == Method::Classic {
            return Err(BoundError::InvalidArgument(
                "the classic method has no regression-mode form".into(),
            ));
        }
        Ok(BoundQuery {
            log_gamma,
            mean,
            mode,
            method,
            side,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.log_gamma.exp()
    }

    pub fn log_gamma(&self) -> f64 {
        self.log_gamma
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn beta(&self) -> Beta {
        Beta::from_log_gamma(self.log_gamma, self.mean).expect("validated at construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalResult {
    pub delta_u: Option<DeltaResult>,
    pub delta_l: Option<DeltaResult>,
    /// `−∞` for an upper one-sided statement.
    pub lower_endpoint: f64,
    /// `+∞` for a lower one-sided statement.
    pub upper_endpoint: f64,
    pub confidence: f64,
    pub mode: Mode,
    pub method: Method,
    pub side: Side,
    pub mean: f64,
}

impl IntervalResult {
    /// Smallest integer `t` with `P(X ≥ t) < γ`: `⌈(1+δ_U)μ⌉`.
    pub fn upper_tail_threshold(&self) -> Option<f64> {
        self.upper_endpoint
            .is_finite()
            .then(|| self.upper_endpoint.ceil())
    }

    /// Largest integer `t` with `P(X ≤ t) < γ`: `⌊(1−δ_L)μ⌋`.
    pub fn lower_tail_threshold(&self) -> Option<f64> {
        self.lower_endpoint
            .is_finite()
            .then(|| self.lower_endpoint.floor())
    }

    /// Largest count strictly below the upper endpoint.
    pub fn max_count(&self) -> Option<f64> {
        self.upper_tail_threshold().map(|t| t - 1.0)
    }

    /// Smallest count strictly above the lower endpoint.
    pub fn min_count(&self) -> Option<f64> {
        self.lower_tail_threshold().map(|t| t + 1.0)
    }

    /// True if every reported δ lies in its method's validated domain.
    pub fn in_domain(&self) -> bool {
        self.delta_u.is_none_or(|d| d.in_domain) && self.delta_l.is_none_or(|d| d.in_domain)
    }
}

fn solve_side(query: &BoundQuery, kind: ExponentKind, side: Side) -> Result<DeltaResult> {
    let wrap = |source: BoundError| BoundError::SideFailed {
        side,
        source: Box::new(source),
    };
    let result = invert(kind, query.method, query.beta(), DEFAULT_TOL).map_err(wrap)?;
    if !kind.is_upper() && !result.in_domain {
        return Err(wrap(BoundError::Infeasible {
            kind,
            beta: query.beta().value(),
        }));
    }
    Ok(result)
}

fn assemble(query: &BoundQuery) -> Result<IntervalResult> {
    let m = query.mean;
    let gamma = query.gamma();
    let upper = |q| solve_side(q, query.mode.upper_kind(), Side::Upper);
    let lower = |q| solve_side(q, query.mode.lower_kind(), Side::Lower);
    let (delta_u, delta_l, lower_endpoint, upper_endpoint) = match query.side {
        Side::Upper => {
            let u = upper(query)?;
            (Some(u), None, f64::NEG_INFINITY, (1.0 + u.value()) * m)
        }
        Side::Lower => {
            let l = lower(query)?;
            (None, Some(l), (1.0 - l.value()) * m, f64::INFINITY)
        }
        Side::TwoSidedAsymmetric => {
            let u = upper(query)?;
            let l = lower(query)?;
            (
                Some(u),
                Some(l),
                (1.0 - l.value()) * m,
                (1.0 + u.value()) * m,
            )
        }
        Side::TwoSidedSymmetric => {
            let u = upper(query)?;
            (Some(u), None, (1.0 - u.value()) * m, (1.0 + u.value()) * m)
        }
    };
    let confidence = if query.side.is_two_sided() {
        1.0 - 2.0 * gamma
    } else {
        1.0 - gamma
    };
    Ok(IntervalResult {
        delta_u,
        delta_l,
        lower_endpoint,
        upper_endpoint,
        confidence,
        mode: query.mode,
        method: query.method,
        side: query.side,
        mean: m,
    })
}

/// Thresholds on the sum of Poisson trials with known mean μ.
pub fn tail_bounds(query: &BoundQuery) -> Result<IntervalResult> {
    if query.mode != Mode::Prediction {
        return Err(BoundError::InvalidArgument(
            "tail_bounds needs a prediction-mode query".into(),
        ));
    }
    assemble(query)
}

/// Conservative confidence interval for the mean from an observed sum μ̂.
pub fn confidence_interval(query: &BoundQuery) -> Result<IntervalResult> {
    if query.mode != Mode::Regression {
        return Err(BoundError::InvalidArgument(
            "confidence_interval needs a regression-mode query".into(),
        ));
    }
    assemble(query)
}

/// Either of the above, by the query's mode.
pub fn evaluate(query: &BoundQuery) -> Result<IntervalResult> {
    match query.mode {
        Mode::Prediction => tail_bounds(query),
        Mode::Regression => confidence_interval(query),
    }
}

/// `φ(d) = μ̂·(ln(1+d) − d)` with `μ = (1+d)·μ̂`: the log-likelihood-ratio
/// level of candidate mean μ given the observation μ̂.
fn log_level(mu_hat: f64, d: f64) -> f64 {
    mu_hat * (d.ln_1p() - d)
}

/// Bisects `log_level(d) = target` between `near` (level above the target)
/// and `far` (level at or below it), returning the `far` end.
fn bisect_level(mu_hat: f64, target: f64, mut near: f64, mut far: f64, tol: f64) -> Result<f64> {
    for _ in 0..4 * MAX_ITERATIONS {
        let mid = 0.5 * (near + far);
        if mid == near || mid == far || (far - near).abs() <= tol * (1.0 + mid.abs()) {
            return Ok(far);
        }
        if log_level(mu_hat, mid) > target {
            near = mid;
        } else {
            far = mid;
        }
    }
    Err(BoundError::NoConvergence {
        iterations: 4 * MAX_ITERATIONS,
    })
}

/// Endpoints `(μ_lower, μ_upper)` of the set of means whose likelihood of
/// producing μ̂ is above γ, found directly in μ-space by bisection.
///
/// Endpoints are oriented as in the two-sided confidence interval: the
/// lower endpoint is `(1−δ_L)·μ̂` and the upper `(1+δ_U)·μ̂`. (Naming the
/// two excluded half-lines the other way round is also common.)
pub fn exceptional_mu_range(gamma: f64, mu_hat: f64, tol: f64) -> Result<(f64, f64)> {
    let target = Beta::from_gamma(gamma, mu_hat)?.value() * mu_hat;
    if tol.is_nan() || tol <= 0.0 {
        return Err(BoundError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    // Upper side: d > 0, level decreasing without bound.
    let mut far = 1.0;
    while log_level(mu_hat, far) > target {
        far *= 2.0;
        if !far.is_finite() {
            return Err(BoundError::NoConvergence { iterations: 0 });
        }
    }
    let d_up = bisect_level(mu_hat, target, 0.0, far, tol)?;
    // Lower side: d ∈ (−1, 0), level → −∞ as d → −1.
    let d_down = bisect_level(mu_hat, target, 0.0, -1.0, tol)?;
    Ok(((1.0 + d_down) * mu_hat, (1.0 + d_up) * mu_hat))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(gamma: f64, mean: f64, mode: Mode, method: Method, side: Side) -> BoundQuery {
        BoundQuery::new(gamma, mean, mode, method, side).unwrap()
    }

    #[test]
    fn validation() {
        let m = Mode::Prediction;
        assert!(BoundQuery::new(0.0, 1.0, m, Method::Exact, Side::Upper).is_err());
        assert!(BoundQuery::new(1.0, 1.0, m, Method::Exact, Side::Upper).is_err());
        assert!(BoundQuery::new(0.5, 0.0, m, Method::Exact, Side::Upper).is_err());
        assert!(BoundQuery::new(0.5, -3.0, m, Method::Exact, Side::Upper).is_err());
        assert!(BoundQuery::new(0.5, 3.0, Mode::Regression, Method::Classic, Side::Upper).is_err());
        let query = q(0.5, 3.0, Mode::Regression, Method::Exact, Side::Upper);
        assert!(tail_bounds(&query).is_err());
        let query = q(0.5, 3.0, m, Method::Exact, Side::Upper);
        assert!(confidence_interval(&query).is_err());
    }

    #[test]
    fn two_sided_counts_at_smallest_gamma() {
        let r = tail_bounds(&q(
            5.421e-20,
            200.0,
            Mode::Prediction,
            Method::Pade2,
            Side::TwoSidedAsymmetric,
        ))
        .unwrap();
        assert_eq!(r.max_count(), Some(348.0));
        assert_eq!(r.upper_tail_threshold(), Some(349.0));
        assert_eq!(r.lower_tail_threshold(), Some(82.0));
        assert_eq!(r.min_count(), Some(83.0));
        assert!(r.lower_endpoint < r.upper_endpoint);
    }

    #[test]
    fn pass_through_composition() {
        let r = tail_bounds(&q(0.5, 200.0, Mode::Prediction, Method::Pade2, Side::Upper)).unwrap();
        let direct = crate::inversion::invert_pade2_prediction(
            ExponentKind::PredUpper,
            Beta::from_gamma(0.5, 200.0).unwrap(),
        )
        .unwrap();
        assert_eq!(r.delta_u.unwrap().value(), direct.value());
        assert_eq!(r.confidence, 0.5);
        assert_eq!(r.lower_endpoint, f64::NEG_INFINITY);
    }

    #[test]
    fn regression_interval() {
        let r = confidence_interval(&q(
            0.05,
            212.0,
            Mode::Regression,
            Method::Pade2,
            Side::TwoSidedAsymmetric,
        ))
        .unwrap();
        assert!((r.confidence - 0.9).abs() < 1e-15);
        let du = r.delta_u.unwrap().value();
        let dl = r.delta_l.unwrap().value();
        assert_eq!(format!("{du:.4}"), "0.1778");
        assert_eq!(format!("{dl:.4}"), "0.1588");
        assert_eq!(r.lower_endpoint, (1.0 - dl) * 212.0);
        assert_eq!(r.upper_endpoint, (1.0 + du) * 212.0);
        assert!(r.lower_endpoint > 178.3 && r.lower_endpoint < 178.4);
        assert!(r.upper_endpoint > 249.6 && r.upper_endpoint < 249.8);

        let s = confidence_interval(&q(
            0.05,
            212.0,
            Mode::Regression,
            Method::Pade2,
            Side::TwoSidedSymmetric,
        ))
        .unwrap();
        assert_eq!(s.upper_endpoint, r.upper_endpoint);
        assert_eq!(s.lower_endpoint, (1.0 - du) * 212.0);
        assert!(s.delta_l.is_none());
    }

    #[test]
    fn one_sided_regression() {
        let r = confidence_interval(&q(
            5.421e-20,
            212.0,
            Mode::Regression,
            Method::Exact,
            Side::Upper,
        ))
        .unwrap();
        assert_eq!(format!("{:.4}", r.delta_u.unwrap().value()), "0.7933");
        assert_eq!(r.lower_endpoint, f64::NEG_INFINITY);
        let r = confidence_interval(&q(
            0.05,
            212.0,
            Mode::Regression,
            Method::Exact,
            Side::Lower,
        ))
        .unwrap();
        assert_eq!(r.upper_endpoint, f64::INFINITY);
        assert_eq!(r.confidence, 0.95);
    }

    #[test]
    fn lower_infeasibility_names_side() {
        // β = −2 < −1.
        let err = tail_bounds(&q(
            (-4.0f64).exp(),
            2.0,
            Mode::Prediction,
            Method::Pade2,
            Side::TwoSidedAsymmetric,
        ))
        .unwrap_err();
        assert!(err.is_infeasible());
        assert!(matches!(
            err,
            BoundError::SideFailed {
                side: Side::Lower,
                ..
            }
        ));
        // The upper side alone is fine.
        assert!(tail_bounds(&q(
            (-4.0f64).exp(),
            2.0,
            Mode::Prediction,
            Method::Pade2,
            Side::Upper
        ))
        .is_ok());
    }

    #[test]
    fn exceptional_range_matches_exact_interval() {
        for &gamma in &[0.05, 0.01, 2e-9, 5.421e-20] {
            let (lo, hi) = exceptional_mu_range(gamma, 212.0, 1e-15).unwrap();
            let r = confidence_interval(&q(
                gamma,
                212.0,
                Mode::Regression,
                Method::Exact,
                Side::TwoSidedAsymmetric,
            ))
            .unwrap();
            assert!(((lo - r.lower_endpoint) / lo).abs() < 1e-9, "{gamma}");
            assert!(((hi - r.upper_endpoint) / hi).abs() < 1e-9, "{gamma}");
        }
    }

    #[test]
    fn exceptional_range_collapses_near_one() {
        let (lo, hi) = exceptional_mu_range(1.0 - 1e-12, 212.0, 1e-15).unwrap();
        assert!((lo - 212.0).abs() < 1e-3 && (hi - 212.0).abs() < 1e-3);
        assert!(lo < 212.0 && hi > 212.0);
    }

    #[test]
    fn side_parsing() {
        assert_eq!(
            "Symmetric".parse::<Side>().unwrap(),
            Side::TwoSidedSymmetric
        );
        assert_eq!("both".parse::<Side>().unwrap(), Side::TwoSidedAsymmetric);
        assert!("left".parse::<Side>().is_err());
    }
}
