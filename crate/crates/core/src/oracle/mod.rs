//! Independent checks that the emitted thresholds really are conservative:
//! exact binomial tails for identical trials and seeded simulation for
//! arbitrary success probabilities.

mod binomial;
pub mod rng;
mod simulate;

use std::fmt;

pub use binomial::{
    binomial_tail_lower, binomial_tail_upper, ln_binomial_tail_lower, ln_binomial_tail_upper,
    MAX_EXACT_TRIALS,
};
pub use simulate::{
    simulate_tail_frequency, simulate_tail_frequency_with_workers, SimulationResult, TrialModel,
};

use crate::error::Result;
use crate::intervals::{tail_bounds, BoundQuery, Mode, Side};
use crate::inversion::Method;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tail {
    Upper,
    Lower,
}

impl Tail {
    pub fn name(self) -> &'static str {
        match self {
            Tail::Upper => "upper",
            Tail::Lower => "lower",
        }
    }
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Settings for the simulation fallback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarlo {
    pub reps: u64,
    pub seed: u64,
}

impl Default for MonteCarlo {
    fn default() -> Self {
        MonteCarlo {
            reps: 100_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCheckReport {
    pub requested_gamma: f64,
    pub achieved_probability: f64,
    /// Set for exact checks only.
    pub conservative: Option<bool>,
    /// Set for simulated checks only.
    pub std_error: Option<f64>,
    pub tail: Tail,
    pub method: Method,
    pub delta: f64,
    /// Integer count threshold that was tested.
    pub threshold: f64,
}

impl TailCheckReport {
    /// Exact reports: the conservative flag. Simulated reports: frequency
    /// within three standard errors of γ or below.
    pub fn passes(&self) -> bool {
        match (self.conservative, self.std_error) {
            (Some(flag), _) => flag,
            (None, Some(se)) => self.achieved_probability <= self.requested_gamma + 3.0 * se,
            (None, None) => false,
        }
    }
}

/// Solves for δ at μ = Σpᵢ and measures the tail actually achieved at the
/// integer threshold `⌈(1+δ_U)μ⌉` (upper) or `⌊(1−δ_L)μ⌋` (lower).
///
/// Identical trials use the exact binomial tail; heterogeneous models are
/// simulated with `mc`.
pub fn check_conservative(
    gamma: f64,
    model: &TrialModel,
    method: Method,
    tail: Tail,
    mc: MonteCarlo,
) -> Result<TailCheckReport> {
    let side = match tail {
        Tail::Upper => Side::Upper,
        Tail::Lower => Side::Lower,
    };
    let query = BoundQuery::new(gamma, model.mean(), Mode::Prediction, method, side)?;
    let interval = tail_bounds(&query)?;
    let (delta, threshold) = match tail {
        Tail::Upper => (
            interval.delta_u.map(|d| d.value()),
            interval.upper_tail_threshold(),
        ),
        Tail::Lower => (
            interval.delta_l.map(|d| d.value()),
            interval.lower_tail_threshold(),
        ),
    };
    let delta = delta.expect("one-sided interval carries its delta");
    let threshold = threshold.expect("one-sided interval has a finite endpoint");

    let (achieved, conservative, std_error) = match model {
        TrialModel::Identical { n, p } => {
            let n = *n;
            let achieved = match tail {
                Tail::Upper if threshold > (n + 1) as f64 => 0.0,
                Tail::Upper => binomial_tail_upper(n, *p, threshold.max(0.0) as i64)?,
                Tail::Lower if threshold < 0.0 => 0.0,
                Tail::Lower => binomial_tail_lower(n, *p, (threshold as i64).min(n as i64))?,
            };
            (achieved, Some(achieved <= gamma), None)
        }
        TrialModel::Heterogeneous { .. } => {
            let sim = simulate_tail_frequency(model, threshold, tail, mc.reps, mc.seed)?;
            (sim.frequency, None, Some(sim.std_error))
        }
    };
    Ok(TailCheckReport {
        requested_gamma: gamma,
        achieved_probability: achieved,
        conservative,
        std_error,
        tail,
        method,
        delta,
        threshold,
    })
}
