//! Inversion of Chernoff tail bounds for sums of independent Poisson trials.
//!
//! Given a tail probability γ and a mean μ (or an observed sum μ̂), the
//! crate returns deviation factors δ_U, δ_L such that
//! `P(X ≥ (1+δ_U)μ) < γ` and `P(X ≤ (1−δ_L)μ) < γ`, or the matching
//! conservative confidence interval for the mean. Deviations come from the
//! exact exponents (numerically), the classical quadratic bounds, or
//! quadratic-through-quartic Padé bounds that are tighter than the
//! classical ones while remaining certified upper bounds on the exponent.
//!
//! ```
//! use chernoff_core::{tail_bounds, BoundQuery, Method, Mode, Side};
//!
//! let q = BoundQuery::new(0.05, 200.0, Mode::Prediction, Method::Pade2, Side::Upper)?;
//! let r = tail_bounds(&q)?;
//! assert_eq!(format!("{:.4}", r.delta_u.unwrap().value()), "0.1781");
//! # Ok::<(), chernoff_core::BoundError>(())
//! ```

pub mod error;
pub mod exponents;
pub mod intervals;
pub mod inversion;
pub mod oracle;
pub mod pade;
mod roots;

pub use error::{BoundError, Result};
pub use exponents::{
    approx_exponent, exact_exponent, pade_table, series_coefficients, ApproxOrder, Delta,
    ExponentKind, Provenance, RationalApprox,
};
pub use intervals::{
    confidence_interval, evaluate, exceptional_mu_range, tail_bounds, BoundQuery, IntervalResult,
    Mode, Side,
};
pub use inversion::{
    invert, invert_classic, invert_exact, invert_pade2_prediction, invert_pade2_regression,
    invert_pade_numeric, solve_quadratic_stable, Beta, DeltaResult, Method, DEFAULT_TOL,
};
pub use oracle::{
    binomial_tail_lower, binomial_tail_upper, check_conservative, simulate_tail_frequency,
    MonteCarlo, Tail, TailCheckReport, TrialModel,
};
