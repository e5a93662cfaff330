//! Exact-arithmetic engine for 2-dimensional quantum scattering diagrams.
//!
//! The crate computes consistent completions of quantum scattering diagrams
//! over truncated quantum torus algebras, extracts higher-genus generating
//! series and refined BPS invariants from the outgoing rays, and
//! cross-validates the results along independent routes: perturbed scattering
//! over a square-zero ring (refined tropical counts), the degeneration
//! identity, the quadratic-refinement twist, and an integrality audit.
//!
//! Everything is exact over Q(q^{1/2}); floating point never appears.

pub mod classes;
pub mod exactring;
pub mod invariants;
pub mod qtorus;
pub mod scatter;
pub mod tropical;

pub use exactring::{GaussRat, HbarSeries, IntegralityVerdict, Rat, RatFuncQ, SLaurent};
pub use qtorus::{Context, LatticeVec, NilContext, NilElement, PIndex, TorusElement};
pub use scatter::{Ray, ScatteringDiagram};

use thiserror::Error as ThisError;

/// Errors surfaced by the scattering pipeline.
#[derive(ThisError, Debug)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("denominator expands to zero at q = 1 to all probed orders")]
    ZeroDenominatorExpansion,

    #[error("pole of order {valuation} at s = 1 exceeds the allowed simple pole")]
    PoleOrder { valuation: i64 },

    #[error("context mismatch between operands")]
    ContextMismatch,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("genericity not achieved: {0}")]
    Genericity(String),

    #[error("tropical extraction failed validation: {0}")]
    TropicalValidation(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
