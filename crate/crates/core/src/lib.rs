//! Metric projections, normalized duality mappings and best uniform polynomial
//! approximation in `l₁`, `c` and `C[0,1]`, together with numerical probes of
//! the Fréchet coderivative of those projections.
//!
//! The crate is organised bottom-up:
//!
//! * [`sequence`] holds exact finite models of sequence-space elements.
//! * [`duality`] tests and constructs normalized duality mappings.
//! * [`l1ball`] and [`c0`] describe set-valued metric projections.
//! * [`chebyshev`] computes minimax polynomials with equioscillation
//!   certificates.
//! * [`coderivative`] evaluates difference quotients along witness paths.

pub mod c0;
pub mod chebyshev;
pub mod coderivative;
pub mod duality;
pub mod error;
pub mod l1ball;
pub mod sequence;

pub use chebyshev::{AtomicMeasure, BestApprox, Func, Poly};
pub use error::{Error, Result};
pub use sequence::{pair, CStarFunctional, EvConstSeq, FiniteSeq, GeoTailSeq, Seq};

/// Default tolerance for membership tests and verdict thresholds.
pub const DEFAULT_TOL: f64 = 1e-9;
