//! # condpoisson
//!
//! Exact-arithmetic toolkit for two related problems:
//!
//! * conditional statistics of independent Poisson random variables
//!   `X_1..X_n` given linear constraints `A·X = b` with a non-negative
//!   integer matrix `A` (joint probabilities, factorial/raw moments,
//!   covariances and correlations), together with P-recurrences for the
//!   constrained partition function and a recurrence guesser;
//! * structural analysis of mass-action reaction networks (deficiency,
//!   weak reversibility, conservation laws, complex balance, and the
//!   product-form stationary distribution of the associated chemical
//!   master equation).
//!
//! All computations are exact over arbitrary-precision rationals; floating
//! point appears only when rendering results.

pub mod crn;
pub mod fixtures;
pub mod genfun;
pub mod guess;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod recurrence;

mod error;

pub use crn::{Complex, ConservationLaws, NetworkReport, Reaction, ReactionNetwork};
pub use error::Error;
pub use genfun::{Conditional, ConstraintMatrix, Rates, StatReport, Value};
pub use matrix::RatMatrix;
pub use poly::MultiPoly;
pub use rational::BigRational;
pub use recurrence::{PRecurrence, RecurrenceSystem};

pub type Result<T> = std::result::Result<T, Error>;
