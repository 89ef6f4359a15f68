use std::fmt;

use crate::training::TrainingTrace;

/// Errors from lattice construction, preference evaluation, and solving.
#[derive(Debug, Clone)]
pub enum Error {
    /// Horizon must be at least one period.
    InvalidHorizon { horizon: u32 },
    /// (t, x) is not a node of the lattice: needs 0 <= t <= T, |x| <= t,
    /// t + x even.
    InvalidNode { t: u32, x: i32, horizon: u32 },
    /// Time index outside 0..=T.
    TimeOutOfRange { t: u32, horizon: u32 },
    /// Flat index outside 1..=subtree_size.
    IndexOutOfRange { index: usize, size: usize },
    /// Probability outside [0, 1] (or not finite).
    InvalidProbability { value: f64 },
    /// Terminal-row actions are forced to 1 and cannot be reassigned.
    TerminalActionNotStop { t: u32, x: i32 },
    /// Two objects built for different horizons were combined.
    HorizonMismatch { expected: u32, actual: u32 },
    /// Distribution masses do not sum to 1 (or carry negative mass).
    UnnormalizedDistribution { sum: f64 },
    /// A parameter failed validation.
    InvalidParameter { name: &'static str, message: String },
    /// A closed-form quantity was requested outside its hypothesis.
    HypothesisNotMet { condition: String },
    /// Training failed to reach a fixed point within its round budget.
    /// Carries the partial trace for inspection.
    TrainingNotConverged(Box<TrainingTrace>),
    /// A strategy or trace document failed to parse.
    Parse { line: usize, message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidHorizon { horizon } => {
                write!(f, "horizon must be >= 1, got {horizon}")
            }
            Self::InvalidNode { t, x, horizon } => {
                write!(f, "({t},{x}) is not a node of a {horizon}-period lattice")
            }
            Self::TimeOutOfRange { t, horizon } => {
                write!(f, "time {t} outside 0..={horizon}")
            }
            Self::IndexOutOfRange { index, size } => {
                write!(f, "flat index {index} outside 1..={size}")
            }
            Self::InvalidProbability { value } => {
                write!(f, "probability {value} outside [0, 1]")
            }
            Self::TerminalActionNotStop { t, x } => {
                write!(f, "terminal node ({t},{x}) must keep stop probability 1")
            }
            Self::HorizonMismatch { expected, actual } => {
                write!(f, "horizon mismatch: expected {expected}, got {actual}")
            }
            Self::UnnormalizedDistribution { sum } => {
                write!(f, "distribution masses sum to {sum}, expected 1")
            }
            Self::InvalidParameter { name, message } => {
                write!(f, "invalid parameter {name}: {message}")
            }
            Self::HypothesisNotMet { condition } => {
                write!(f, "hypothesis not met: {condition}")
            }
            Self::TrainingNotConverged(trace) => {
                write!(
                    f,
                    "training did not reach a fixed point within {} rounds",
                    trace.rounds.len().saturating_sub(1)
                )
            }
            Self::Parse { line, message } => {
                write!(f, "parse error at line {line}: {message}")
            }
        }
    }
}

impl std::error::Error for Error {}
