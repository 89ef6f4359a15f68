//! Randomized stopping strategies on binomial lattices under
//! time-inconsistent preferences.
//!
//! An agent watches a simple symmetric random walk on a `T`-period binomial
//! tree and may stop at any node, with randomization allowed.  When her
//! preference distorts probabilities (cumulative prospect theory) or
//! discounts the present differently from the future (present bias), the
//! plan she draws up today stops being optimal tomorrow.  This crate
//! computes the three classical responses to that time-inconsistency and
//! measures it:
//!
//! * [`solver::naive_strategy`] — re-optimize at every node, keep only the
//!   current action;
//! * [`solver::sophisticated_strategy`] — backward induction against one's
//!   own future selves;
//! * [`solver::precommitted_strategy`] — the time-0 plan, implemented
//!   forever;
//! * [`training::train_until_fixed`] — the repeated best-response sweep
//!   that turns a naive (or arbitrary) strategy into the sophisticated
//!   one, with [`training::inconsistency_measure`] counting the rounds it
//!   takes.
//!
//! Preferences plug in through the [`preference::Preference`] trait;
//! [`cpt`] and [`presentbias`] provide the two built-in families, the
//! latter together with closed-form round counts and strategy traces that
//! double as an oracle for the generic engine.
//!
//! The `examples/` directory walks through each capability end to end; the
//! `stoptree` binary runs batch experiments from a TOML config.

pub mod config;
pub mod cpt;
mod error;
pub mod format;
pub mod lattice;
pub mod preference;
pub mod presentbias;
pub mod render;
pub mod runner;
pub mod solver;
pub mod training;

pub use error::Error;
pub use lattice::{
    Lattice, Node, ReachProbabilities, StoppingTimeDistribution, Strategy, TerminalDistribution,
};
pub use preference::Preference;
pub use solver::{NodePlan, SolverConfig, SolverMode};
pub use training::TrainingTrace;
