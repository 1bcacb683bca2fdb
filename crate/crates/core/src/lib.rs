//! Guessing probabilities for the coherent-register uncertainty game.
//!
//! Bob prepares a qudit, Alice measures it in the standard or Fourier basis
//! depending on a qubit register `R` whose coherence is `γ`, and Bob then tries
//! to guess the outcome from `R`. This crate builds the register states the
//! game produces, solves the resulting state-discrimination problems, searches
//! for good inputs, and evaluates the closed forms and conditional
//! min-entropies that describe the game.

pub mod analytic;
pub mod discrimination;
pub mod entropy;
pub mod error;
pub mod game;
pub mod linalg;
pub mod optimizer;
pub mod sdp;

pub use error::{Error, NonConvergence, Result};
pub use linalg::{CMatrix, Complex, PureState};
