//! The evaluation contract shared by every preference model.

use crate::lattice::{Node, Strategy};

/// A preference assigns a real value to following a strategy from a node.
///
/// Evaluation must be a deterministic pure function of the origin and of
/// the strategy restricted to the subtree below the origin; entries outside
/// that subtree never influence the value.  Implementations are `Send +
/// Sync` so per-node subproblems can run concurrently.
pub trait Preference: Send + Sync {
    /// Value of following `strategy` from `origin`.
    ///
    /// Panics if `origin` is not a node of the strategy's lattice.
    fn evaluate(&self, origin: Node, strategy: &Strategy) -> f64;
}

impl<P: Preference + ?Sized> Preference for &P {
    fn evaluate(&self, origin: Node, strategy: &Strategy) -> f64 {
        (**self).evaluate(origin, strategy)
    }
}

impl<P: Preference + ?Sized> Preference for Box<P> {
    fn evaluate(&self, origin: Node, strategy: &Strategy) -> f64 {
        (**self).evaluate(origin, strategy)
    }
}
