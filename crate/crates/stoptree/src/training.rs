//! The training iteration that turns naive strategies into sophisticated
//! ones, and the round count it takes as a measure of time-inconsistency.
//!
//! One round is a Jacobi sweep: every node simultaneously best-responds to
//! the *previous* round's actual strategy, so the update is independent of
//! sweep order and node updates can run concurrently.  Iterates are
//! compared after snapping near-pure probabilities; training stops at the
//! first repeated iterate and records whether that fixed point is the
//! backward-induction sophisticated strategy.

use rayon::prelude::*;

use crate::error::Error;
use crate::lattice::{snap, Lattice, Node, Strategy};
use crate::preference::Preference;
use crate::solver::{best_response, naive_strategy, sophisticated_strategy, SolverConfig};

/// Default tolerance for declaring two strategies equal (after snapping).
pub const DEFAULT_STRATEGY_TOLERANCE: f64 = 1e-6;

/// Round budget for training started from an arbitrary (non-naive)
/// strategy, where no a-priori bound applies.
pub fn arbitrary_start_round_budget(horizon: u32) -> u32 {
    4 * (horizon + 1)
}

/// The recorded outcome of a training run.
#[derive(Debug, Clone)]
pub struct TrainingTrace {
    /// Actual strategies by round, starting with the initial one.  When
    /// training converges the last two entries are equal within tolerance
    /// (the final entry is the confirming round).
    pub rounds: Vec<Strategy>,
    /// Root value of each entry of `rounds`.
    pub root_values: Vec<f64>,
    /// Smallest round index whose strategy equals the fixed point; `None`
    /// when the budget ran out first.
    pub converged_round: Option<u32>,
    /// Whether the fixed point equals the independently computed
    /// sophisticated strategy.
    pub converged_to_sophisticated: bool,
}

impl TrainingTrace {
    pub fn converged(&self) -> bool {
        self.converged_round.is_some()
    }

    pub fn fixed_point(&self) -> &Strategy {
        self.rounds.last().expect("rounds is nonempty")
    }
}

/// Whether `a` and `b` differ by at most `tol` at every node, after
/// snapping near-pure probabilities to {0, 1}.
pub fn strategies_equal(a: &Strategy, b: &Strategy, tol: f64) -> Result<bool, Error> {
    if a.horizon() != b.horizon() {
        return Err(Error::HorizonMismatch {
            expected: a.horizon(),
            actual: b.horizon(),
        });
    }
    Ok(a.raw()
        .iter()
        .zip(b.raw())
        .all(|(&x, &y)| (snap(x) - snap(y)).abs() <= tol))
}

/// One training round: every node best-responds with all later actions
/// pinned to `prev` (a Jacobi sweep — no update sees another update).
pub fn train_round(
    pref: &dyn Preference,
    prev: &Strategy,
    cfg: &SolverConfig,
) -> Result<Strategy, Error> {
    cfg.validate()?;
    let lat = prev.lattice();
    let nodes: Vec<Node> = lat.nodes().filter(|n| n.t < lat.horizon()).collect();
    let updates: Vec<(Node, f64)> = nodes
        .into_par_iter()
        .map(|node| {
            let (p, _) = best_response(pref, node, prev, cfg)?;
            Ok((node, p))
        })
        .collect::<Result<_, Error>>()?;
    let mut next = Strategy::all_stop(&lat);
    for (node, p) in updates {
        next.set(node, p)?;
    }
    Ok(next)
}

/// Repeatedly apply [`train_round`] until the iterate repeats or
/// `max_rounds` rounds have been spent.
///
/// One extra verification round past the budget is allowed when the latest
/// iterate already equals the sophisticated strategy, so runs whose fixed
/// point arrives exactly at `max_rounds` still report convergence through
/// iterate equality.  Non-convergence is reported in the trace, never as
/// an error.
pub fn train_until_fixed(
    pref: &dyn Preference,
    initial: &Strategy,
    cfg: &SolverConfig,
    max_rounds: u32,
) -> Result<TrainingTrace, Error> {
    cfg.validate()?;
    let lat = initial.lattice();
    let root = Node::new(0, 0);
    let soph = sophisticated_strategy(pref, &lat, cfg)?;

    let mut rounds = vec![initial.clone()];
    let mut root_values = vec![pref.evaluate(root, initial)];
    let mut converged_round = None;
    let mut k: u32 = 0;

    while converged_round.is_none() {
        let proceed = k < max_rounds
            || (k == max_rounds
                && strategies_equal(rounds.last().unwrap(), &soph, DEFAULT_STRATEGY_TOLERANCE)?);
        if !proceed {
            break;
        }
        let next = train_round(pref, rounds.last().unwrap(), cfg)?;
        let repeated = strategies_equal(&next, rounds.last().unwrap(), DEFAULT_STRATEGY_TOLERANCE)?;
        root_values.push(pref.evaluate(root, &next));
        rounds.push(next);
        k += 1;
        if repeated {
            converged_round = Some(k - 1);
        }
    }

    let converged_to_sophisticated = converged_round.is_some()
        && strategies_equal(rounds.last().unwrap(), &soph, DEFAULT_STRATEGY_TOLERANCE)?;
    Ok(TrainingTrace {
        rounds,
        root_values,
        converged_round,
        converged_to_sophisticated,
    })
}

/// The time-inconsistency measure: rounds needed to train the naive
/// strategy into its fixed point, with the `T - 1` budget that provably
/// suffices for naive starts.  A budget overrun therefore signals a solver
/// tolerance failure and surfaces as an error carrying the trace.
pub fn inconsistency_measure(
    pref: &dyn Preference,
    lat: &Lattice,
    cfg: &SolverConfig,
) -> Result<u32, Error> {
    let naive = naive_strategy(pref, lat, cfg)?;
    let trace = train_until_fixed(pref, &naive, cfg, lat.horizon() - 1)?;
    match trace.converged_round {
        Some(k) => Ok(k),
        None => Err(Error::TrainingNotConverged(Box::new(trace))),
    }
}
