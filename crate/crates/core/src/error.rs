use thiserror::Error;

use crate::exponents::{ApproxOrder, ExponentKind};
use crate::intervals::Side;

pub type Result<T> = std::result::Result<T, BoundError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("delta = {delta} is outside the domain of {kind}")]
    Domain { kind: ExponentKind, delta: f64 },

    #[error("no {order} approximant exists for {kind}")]
    Unsupported {
        kind: ExponentKind,
        order: ApproxOrder,
    },

    #[error("beta must be finite and negative, got {0}")]
    NonNegativeBeta(f64),

    #[error("gamma must lie strictly between 0 and 1, got {0}")]
    InvalidGamma(f64),

    #[error("mean must be finite and positive, got {0}")]
    InvalidMean(f64),

    /// No delta below 1 reaches the requested exponent level.
    #[error("{kind} bound is infeasible at beta = {beta}: no delta < 1 certifies this level")]
    Infeasible { kind: ExponentKind, beta: f64 },

    #[error("root finder did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("quadratic has negative discriminant {0}")]
    NegativeDiscriminant(f64),

    #[error("leading quadratic coefficient is zero")]
    DegenerateQuadratic,

    #[error("{side} side failed: {source}")]
    SideFailed {
        side: Side,
        #[source]
        source: Box<BoundError>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl BoundError {
    /// True when the failure means the requested level cannot be certified
    /// (as opposed to a malformed request).
    pub fn is_infeasible(&self) -> bool {
        match self {
            BoundError::Infeasible { .. } => true,
            BoundError::SideFailed { source, .. } => source.is_infeasible(),
            _ => false,
        }
    }
}
