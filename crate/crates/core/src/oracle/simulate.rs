use std::num::NonZeroUsize;
use std::thread;

use crate::error::{BoundError, Result};
use crate::oracle::rng::{Bernoulli, CounterRng};
use crate::oracle::Tail;

/// Independent 0/1 trials.
#[derive(Debug, Clone, PartialEq)]
pub enum TrialModel {
    Identical { n: u64, p: f64 },
    Heterogeneous { probs: Vec<f64> },
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(BoundError::InvalidArgument(format!(
            "success probability must lie in [0, 1], got {p}"
        )))
    }
}

impl TrialModel {
    pub fn identical(n: u64, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(BoundError::InvalidArgument(
                "trial count must be at least 1".into(),
            ));
        }
        check_probability(p)?;
        Ok(TrialModel::Identical { n, p })
    }

    pub fn heterogeneous(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(BoundError::InvalidArgument(
                "trial count must be at least 1".into(),
            ));
        }
        probs.iter().try_for_each(|&p| check_probability(p))?;
        Ok(TrialModel::Heterogeneous { probs })
    }

    pub fn len(&self) -> u64 {
        match self {
            TrialModel::Identical { n, .. } => *n,
            TrialModel::Heterogeneous { probs } => probs.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// μ = Σ pᵢ.
    pub fn mean(&self) -> f64 {
        match self {
            TrialModel::Identical { n, p } => *n as f64 * p,
            TrialModel::Heterogeneous { probs } => probs.iter().sum(),
        }
    }

    /// Checks an externally supplied mean against Σ pᵢ to within 1e-9
    /// (relative for means above 1).
    pub fn check_mean(&self, mu: f64) -> Result<()> {
        let own = self.mean();
        if (own - mu).abs() <= 1e-9 * own.abs().max(1.0) {
            Ok(())
        } else {
            Err(BoundError::InvalidArgument(format!(
                "supplied mean {mu} does not match the model mean {own}"
            )))
        }
    }

    fn draw_sum(&self, rng: &mut CounterRng, trials: &Trials) -> u64 {
        match trials {
            Trials::Identical(b) => {
                let n = self.len();
                (0..n).map(|_| b.sample(rng) as u64).sum()
            }
            Trials::Heterogeneous(bs) => bs.iter().map(|b| b.sample(rng) as u64).sum(),
        }
    }
}

enum Trials {
    Identical(Bernoulli),
    Heterogeneous(Vec<Bernoulli>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationResult {
    pub frequency: f64,
    pub std_error: f64,
    pub hits: u64,
    pub reps: u64,
}

fn count_hits(
    model: &TrialModel,
    threshold: f64,
    tail: Tail,
    seed: u64,
    reps: std::ops::Range<u64>,
) -> u64 {
    let trials = match model {
        TrialModel::Identical { p, .. } => Trials::Identical(Bernoulli::new(*p)),
        TrialModel::Heterogeneous { probs } => {
            Trials::Heterogeneous(probs.iter().map(|&p| Bernoulli::new(p)).collect())
        }
    };
    reps.filter(|&rep| {
        let mut rng = CounterRng::new(seed, rep);
        let sum = model.draw_sum(&mut rng, &trials) as f64;
        match tail {
            Tail::Upper => sum >= threshold,
            Tail::Lower => sum <= threshold,
        }
    })
    .count() as u64
}

/// Fraction of `reps` simulated sums at or beyond `threshold`, using all
/// available cores. Replication `r` always uses stream `r` of `seed`.
pub fn simulate_tail_frequency(
    model: &TrialModel,
    threshold: f64,
    tail: Tail,
    reps: u64,
    seed: u64,
) -> Result<SimulationResult> {
    let workers = thread::available_parallelism().map_or(1, NonZeroUsize::get);
    simulate_tail_frequency_with_workers(model, threshold, tail, reps, seed, workers)
}

/// As [`simulate_tail_frequency`] with an explicit worker count. The result
/// does not depend on `workers`.
pub fn simulate_tail_frequency_with_workers(
    model: &TrialModel,
    threshold: f64,
    tail: Tail,
    reps: u64,
    seed: u64,
    workers: usize,
) -> Result<SimulationResult> {
    if reps == 0 {
        return Err(BoundError::InvalidArgument(
            "reps must be at least 1".into(),
        ));
    }
    if workers == 0 {
        return Err(BoundError::InvalidArgument(
            "workers must be at least 1".into(),
        ));
    }
    if threshold.is_nan() {
        return Err(BoundError::InvalidArgument("threshold is NaN".into()));
    }
    let workers = (workers as u64).min(reps);
    let chunk = reps.div_ceil(workers);
    let hits: u64 = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let start = w * chunk;
                let end = ((w + 1) * chunk).min(reps);
                scope.spawn(move || count_hits(model, threshold, tail, seed, start..end))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation worker panicked"))
            .sum()
    });
    let frequency = hits as f64 / reps as f64;
    Ok(SimulationResult {
        frequency,
        std_error: (frequency * (1.0 - frequency) / reps as f64).sqrt(),
        hits,
        reps,
    })
}
