//! Scale-free online linear optimization.
//!
//! Follow-the-regularized-leader with data-dependent multipliers (AdaFTRL and
//! SOLO FTRL), the regret bounds they satisfy, a Rademacher lower-bound
//! adversary, and an experiment harness that emits CSV regret traces.

pub mod adversaries;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod learners;
pub mod par;
pub mod regularizers;
pub mod sampling;
pub mod vecops;
pub mod verify;

pub use error::{Error, Result};
