//! Config-driven experiments: build a learner and an adversary, play the
//! rounds, and write a CSV regret trace.

pub mod config;
pub mod experiment;
pub mod io;

pub use config::{parse_adversary_spec, Algorithm, AlgorithmConfig, ExperimentConfig, LearnerConfig, RegularizerChoice, ScalePolicy};
pub use experiment::{best_in_hindsight, run_experiment, run_on_losses, BoundRule, ExperimentResult, RoundTrace};
