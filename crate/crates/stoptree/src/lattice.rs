//! The binomial lattice, randomized stopping strategies, and the
//! distributions a strategy induces.
//!
//! The underlying state process is the simple symmetric random walk: from
//! node `(t, x)` the walk moves to `(t+1, x+1)` or `(t+1, x-1)` with
//! probability 1/2 each.  Valid nodes satisfy `0 <= t <= T`, `|x| <= t`,
//! and `t + x` even.  A [`Strategy`] assigns every node a stop probability
//! in `[0, 1]`; the terminal row is forced to 1 (the walk must stop at the
//! horizon).
//!
//! Nodes are ordered row-major: time ascending, state descending within a
//! row.  The subtree rooted at `(t, x)`, written Δ here and in the docs
//! below, contains the `(T-t+1)(T-t+2)/2` nodes reachable from `(t, x)`.

use crate::error::Error;

/// Probabilities within this distance of 0 or 1 snap to the endpoint when
/// strategies are compared or rendered.  Evaluation never snaps.
pub const SNAP_EPSILON: f64 = 1e-9;

/// Snap a probability to {0, 1} when within [`SNAP_EPSILON`].
pub fn snap(p: f64) -> f64 {
    if p.abs() <= SNAP_EPSILON {
        0.0
    } else if (p - 1.0).abs() <= SNAP_EPSILON {
        1.0
    } else {
        p
    }
}

/// A time-state pair on the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Node {
    /// Time index, `0..=T`.
    pub t: u32,
    /// Signed state of the walk.
    pub x: i32,
}

impl Node {
    pub fn new(t: u32, x: i32) -> Self {
        Self { t, x }
    }

    /// Whether `t + x` has even parity and `|x| <= t` (horizon not checked).
    fn well_formed(self) -> bool {
        let t = i64::from(self.t);
        let x = i64::from(self.x);
        x.abs() <= t && (t + x) % 2 == 0
    }
}

impl std::fmt::Display for Node {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.t, self.x)
    }
}

/// A `T`-period binomial lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    horizon: u32,
}

impl Lattice {
    pub fn new(horizon: u32) -> Result<Self, Error> {
        if horizon == 0 {
            return Err(Error::InvalidHorizon { horizon });
        }
        Ok(Self { horizon })
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    /// Total number of nodes, `(T+1)(T+2)/2`.
    pub fn node_count(&self) -> usize {
        let t = self.horizon as usize;
        (t + 1) * (t + 2) / 2
    }

    /// Number of nodes in the subtree rooted at any node of time `t`:
    /// `(T-t+1)(T-t+2)/2`.
    pub fn subtree_size(&self, t: u32) -> Result<usize, Error> {
        if t > self.horizon {
            return Err(Error::TimeOutOfRange {
                t,
                horizon: self.horizon,
            });
        }
        let rows = (self.horizon - t) as usize + 1;
        Ok(rows * (rows + 1) / 2)
    }

    pub fn contains(&self, node: Node) -> bool {
        node.t <= self.horizon && node.well_formed()
    }

    fn check(&self, node: Node) -> Result<(), Error> {
        if self.contains(node) {
            Ok(())
        } else {
            Err(Error::InvalidNode {
                t: node.t,
                x: node.x,
                horizon: self.horizon,
            })
        }
    }

    /// Row-major index of a node: row `t` starts at `t(t+1)/2`, states
    /// descend within the row.
    pub fn node_index(&self, node: Node) -> usize {
        debug_assert!(self.contains(node), "invalid node {node}");
        let t = node.t as usize;
        t * (t + 1) / 2 + (node.t as i64 - i64::from(node.x)) as usize / 2
    }

    /// All nodes in row-major order.
    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        (0..=self.horizon).flat_map(move |t| self.row(t))
    }

    /// Nodes of row `t`, state descending.
    pub fn row(&self, t: u32) -> impl Iterator<Item = Node> {
        (0..=t).map(move |i| Node::new(t, t as i32 - 2 * i as i32))
    }

    /// Nodes of the subtree rooted at `origin`, row-major.
    pub fn subtree_nodes(&self, origin: Node) -> impl Iterator<Item = Node> + '_ {
        debug_assert!(self.contains(origin), "invalid origin {origin}");
        let rows = self.horizon - origin.t;
        (0..=rows).flat_map(move |u| {
            (0..=u).map(move |i| Node::new(origin.t + u, origin.x + u as i32 - 2 * i as i32))
        })
    }

    /// The `j`-th node (1-based) of the subtree rooted at `origin`, in
    /// row-major order: `j` selects row `u` with `u(u+1)/2 < j <=
    /// (u+1)(u+2)/2` and state `origin.x + u - 2(j - u(u+1)/2 - 1)`.
    ///
    /// This is a bijection from `1..=subtree_size` onto the subtree for
    /// every origin; applied at the root it enumerates the whole lattice.
    pub fn flat_index_to_node(&self, origin: Node, j: usize) -> Result<Node, Error> {
        self.check(origin)?;
        let size = self.subtree_size(origin.t)?;
        if j < 1 || j > size {
            return Err(Error::IndexOutOfRange { index: j, size });
        }
        let mut u = 0usize;
        while (u + 1) * (u + 2) / 2 < j {
            u += 1;
        }
        let i = j - u * (u + 1) / 2 - 1;
        Ok(Node::new(
            origin.t + u as u32,
            origin.x + u as i32 - 2 * i as i32,
        ))
    }

    /// The two children of a non-terminal node.
    pub fn children(&self, node: Node) -> Option<(Node, Node)> {
        if node.t >= self.horizon {
            return None;
        }
        Some((
            Node::new(node.t + 1, node.x + 1),
            Node::new(node.t + 1, node.x - 1),
        ))
    }
}

/// A randomized Markovian stopping strategy: one stop probability per node,
/// stored densely in row-major order.  Terminal-row entries are always 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Strategy {
    horizon: u32,
    probs: Vec<f64>,
}

impl Strategy {
    /// Stop with certainty at every node.
    pub fn all_stop(lat: &Lattice) -> Self {
        Self {
            horizon: lat.horizon(),
            probs: vec![1.0; lat.node_count()],
        }
    }

    /// Continue with certainty everywhere before the horizon.
    pub fn all_continue(lat: &Lattice) -> Self {
        Self::uniform(lat, 0.0).expect("0 is a valid probability")
    }

    /// The same stop probability at every non-terminal node.
    pub fn uniform(lat: &Lattice, p: f64) -> Result<Self, Error> {
        check_probability(p)?;
        let mut s = Self::all_stop(lat);
        for node in lat.nodes() {
            if node.t < lat.horizon() {
                s.probs[lat.node_index(node)] = p;
            }
        }
        Ok(s)
    }

    /// The "half-half" strategy: probability 1/2 everywhere before the
    /// horizon.
    pub fn half_half(lat: &Lattice) -> Self {
        Self::uniform(lat, 0.5).expect("0.5 is a valid probability")
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    pub fn lattice(&self) -> Lattice {
        Lattice { horizon: self.horizon }
    }

    /// Stop probability at `node`.  Panics on a node outside the lattice.
    pub fn get(&self, node: Node) -> f64 {
        let lat = self.lattice();
        assert!(lat.contains(node), "invalid node {node}");
        self.probs[lat.node_index(node)]
    }

    /// Assign the stop probability at a non-terminal node.
    ///
    /// Terminal nodes only accept 1 (their action is forced).
    pub fn set(&mut self, node: Node, p: f64) -> Result<(), Error> {
        let lat = self.lattice();
        if !lat.contains(node) {
            return Err(Error::InvalidNode {
                t: node.t,
                x: node.x,
                horizon: self.horizon,
            });
        }
        check_probability(p)?;
        if node.t == self.horizon && p != 1.0 {
            return Err(Error::TerminalActionNotStop { t: node.t, x: node.x });
        }
        self.probs[lat.node_index(node)] = p;
        Ok(())
    }

    /// Whether every probability is exactly 0 or 1.
    pub fn is_pure(&self) -> bool {
        self.probs.iter().all(|&p| p == 0.0 || p == 1.0)
    }

    /// Copy with every probability snapped to {0, 1} when within
    /// [`SNAP_EPSILON`].
    pub fn snapped(&self) -> Self {
        Self {
            horizon: self.horizon,
            probs: self.probs.iter().map(|&p| snap(p)).collect(),
        }
    }

    pub(crate) fn raw(&self) -> &[f64] {
        &self.probs
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [f64] {
        &mut self.probs
    }
}

fn check_probability(p: f64) -> Result<(), Error> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability { value: p })
    }
}

/// Outcome of the forward pass from an origin: per-node reach probabilities
/// and stop masses over the subtree, in subtree-row-major order.
#[derive(Debug, Clone)]
pub(crate) struct ForwardPass {
    /// Probability of arriving at each subtree node without having stopped.
    pub reach: Vec<f64>,
    /// `reach * stop_prob` at each subtree node.
    pub stop_mass: Vec<f64>,
}

pub(crate) fn forward_pass(lat: &Lattice, origin: Node, strategy: &Strategy) -> ForwardPass {
    debug_assert!(lat.contains(origin));
    debug_assert_eq!(lat.horizon(), strategy.horizon());
    let rows = (lat.horizon() - origin.t) as usize;
    let size = (rows + 1) * (rows + 2) / 2;
    let mut reach = vec![0.0; size];
    let mut stop_mass = vec![0.0; size];
    reach[0] = 1.0;
    let probs = strategy.raw();
    for u in 0..=rows {
        let row_base = u * (u + 1) / 2;
        let t = origin.t as usize + u;
        let global_row_base = t * (t + 1) / 2;
        // state x0 + u - 2i has global column (t - x)/2
        let col0 = (t as i64 - (i64::from(origin.x) + u as i64)) as usize / 2;
        for i in 0..=u {
            let r = reach[row_base + i];
            if r == 0.0 {
                continue;
            }
            let p = if u == rows {
                1.0
            } else {
                probs[global_row_base + col0 + i]
            };
            stop_mass[row_base + i] = r * p;
            if u < rows && p < 1.0 {
                let flow = r * (1.0 - p) * 0.5;
                let child_base = (u + 1) * (u + 2) / 2;
                reach[child_base + i] += flow;
                reach[child_base + i + 1] += flow;
            }
        }
    }
    ForwardPass { reach, stop_mass }
}

/// Probability of arriving at each node of a subtree without having stopped
/// earlier, given a strategy.
#[derive(Debug, Clone)]
pub struct ReachProbabilities {
    origin: Node,
    horizon: u32,
    values: Vec<f64>,
}

impl ReachProbabilities {
    pub fn origin(&self) -> Node {
        self.origin
    }

    /// Reach probability of `node`, or `None` outside the subtree.
    pub fn get(&self, node: Node) -> Option<f64> {
        subtree_index(self.origin, self.horizon, node).map(|i| self.values[i])
    }

    /// `(node, probability)` pairs in subtree row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (Node, f64)> + '_ {
        let origin = self.origin;
        let rows = self.horizon - origin.t;
        (0..=rows)
            .flat_map(move |u| {
                (0..=u).map(move |i| Node::new(origin.t + u, origin.x + u as i32 - 2 * i as i32))
            })
            .zip(self.values.iter().copied())
    }
}

fn subtree_index(origin: Node, horizon: u32, node: Node) -> Option<usize> {
    if node.t < origin.t || node.t > horizon {
        return None;
    }
    let u = (node.t - origin.t) as usize;
    let top = i64::from(origin.x) + u as i64;
    let d = top - i64::from(node.x);
    if d < 0 || d % 2 != 0 || (d / 2) as usize > u {
        return None;
    }
    Some(u * (u + 1) / 2 + (d / 2) as usize)
}

/// Probability mass over the stopped state, on the grid `-T..=T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminalDistribution {
    horizon: u32,
    /// Index `n + T` holds the mass at state `n`.
    mass: Vec<f64>,
}

impl TerminalDistribution {
    /// Build from explicit `(state, mass)` pairs; states repeat additively.
    pub fn from_masses(
        horizon: u32,
        masses: impl IntoIterator<Item = (i32, f64)>,
    ) -> Result<Self, Error> {
        let t = horizon as i64;
        let mut mass = vec![0.0; 2 * horizon as usize + 1];
        for (n, m) in masses {
            if i64::from(n).abs() > t {
                return Err(Error::InvalidParameter {
                    name: "state",
                    message: format!("state {n} outside -{horizon}..={horizon}"),
                });
            }
            mass[(i64::from(n) + t) as usize] += m;
        }
        let d = Self { horizon, mass };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn from_raw(horizon: u32, mass: Vec<f64>) -> Self {
        debug_assert_eq!(mass.len(), 2 * horizon as usize + 1);
        Self { horizon, mass }
    }

    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    /// Mass at state `n` (0 outside the grid).
    pub fn mass(&self, n: i32) -> f64 {
        let idx = i64::from(n) + i64::from(self.horizon);
        if idx < 0 || idx as usize >= self.mass.len() {
            0.0
        } else {
            self.mass[idx as usize]
        }
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.mass
            .iter()
            .enumerate()
            .map(|(i, m)| (i as f64 - f64::from(self.horizon)) * m)
            .sum()
    }

    /// `(state, mass)` pairs, state ascending.
    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        let t = self.horizon as i64;
        self.mass
            .iter()
            .enumerate()
            .map(move |(i, &m)| ((i as i64 - t) as i32, m))
    }

    pub(crate) fn raw(&self) -> &[f64] {
        &self.mass
    }

    pub(crate) fn validate(&self) -> Result<(), Error> {
        let sum = self.total();
        if (sum - 1.0).abs() > 1e-9 || self.mass.iter().any(|&m| m < -1e-12) {
            return Err(Error::UnnormalizedDistribution { sum });
        }
        Ok(())
    }
}

/// Probability mass over the stopping-time offset `j in 0..=T-t`.
#[derive(Debug, Clone, PartialEq)]
pub struct StoppingTimeDistribution {
    mass: Vec<f64>,
}

impl StoppingTimeDistribution {
    pub fn from_masses(mass: Vec<f64>) -> Result<Self, Error> {
        let d = Self { mass };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn from_raw(mass: Vec<f64>) -> Self {
        Self { mass }
    }

    /// Number of offsets, `T - t + 1`.
    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    /// Mass at offset `j`.
    pub fn mass(&self, j: usize) -> f64 {
        self.mass.get(j).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub(crate) fn validate(&self) -> Result<(), Error> {
        let sum = self.total();
        if (sum - 1.0).abs() > 1e-9 || self.mass.iter().any(|&m| m < -1e-12) {
            return Err(Error::UnnormalizedDistribution { sum });
        }
        Ok(())
    }
}

impl Lattice {
    fn check_strategy(&self, origin: Node, strategy: &Strategy) -> Result<(), Error> {
        self.check(origin)?;
        if strategy.horizon() != self.horizon {
            return Err(Error::HorizonMismatch {
                expected: self.horizon,
                actual: strategy.horizon(),
            });
        }
        Ok(())
    }

    /// Probability of arriving at each subtree node without having stopped,
    /// starting from `origin` and following `strategy`.
    pub fn reach_probabilities(
        &self,
        origin: Node,
        strategy: &Strategy,
    ) -> Result<ReachProbabilities, Error> {
        self.check_strategy(origin, strategy)?;
        let fwd = forward_pass(self, origin, strategy);
        Ok(ReachProbabilities {
            origin,
            horizon: self.horizon,
            values: fwd.reach,
        })
    }

    /// Distribution of the stopped state, starting from `origin`.
    pub fn terminal_distribution(
        &self,
        origin: Node,
        strategy: &Strategy,
    ) -> Result<TerminalDistribution, Error> {
        self.check_strategy(origin, strategy)?;
        Ok(terminal_distribution_unchecked(self, origin, strategy))
    }

    /// Distribution of the stopping-time offset from `origin.t`.
    pub fn stopping_time_distribution(
        &self,
        origin: Node,
        strategy: &Strategy,
    ) -> Result<StoppingTimeDistribution, Error> {
        self.check_strategy(origin, strategy)?;
        Ok(stopping_time_distribution_unchecked(self, origin, strategy))
    }
}

pub(crate) fn terminal_distribution_unchecked(
    lat: &Lattice,
    origin: Node,
    strategy: &Strategy,
) -> TerminalDistribution {
    let fwd = forward_pass(lat, origin, strategy);
    let t_max = i64::from(lat.horizon());
    let mut mass = vec![0.0; 2 * lat.horizon() as usize + 1];
    let rows = (lat.horizon() - origin.t) as usize;
    for u in 0..=rows {
        let base = u * (u + 1) / 2;
        for i in 0..=u {
            let m = fwd.stop_mass[base + i];
            if m != 0.0 {
                let x = i64::from(origin.x) + u as i64 - 2 * i as i64;
                mass[(x + t_max) as usize] += m;
            }
        }
    }
    TerminalDistribution::from_raw(lat.horizon(), mass)
}

pub(crate) fn stopping_time_distribution_unchecked(
    lat: &Lattice,
    origin: Node,
    strategy: &Strategy,
) -> StoppingTimeDistribution {
    let fwd = forward_pass(lat, origin, strategy);
    let rows = (lat.horizon() - origin.t) as usize;
    let mass = (0..=rows)
        .map(|u| {
            let base = u * (u + 1) / 2;
            fwd.stop_mass[base..base + u + 1].iter().sum()
        })
        .collect();
    StoppingTimeDistribution::from_raw(mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop_assert, proptest, ProptestConfig};
    use proptest::strategy::Strategy as _;

    fn lat(t: u32) -> Lattice {
        Lattice::new(t).unwrap()
    }

    #[test]
    fn subtree_size_formula() {
        // (T-t+1)(T-t+2)/2
        assert_eq!(lat(5).subtree_size(5).unwrap(), 1);
        assert_eq!(lat(5).subtree_size(0).unwrap(), 21);
        assert_eq!(lat(3).subtree_size(1).unwrap(), 6);
        assert!(matches!(
            lat(3).subtree_size(4),
            Err(Error::TimeOutOfRange { .. })
        ));
    }

    #[test]
    fn flat_index_examples() {
        let l = lat(5);
        let root = Node::new(0, 0);
        assert_eq!(l.flat_index_to_node(root, 1).unwrap(), Node::new(0, 0));
        assert_eq!(l.flat_index_to_node(root, 2).unwrap(), Node::new(1, 1));
        assert_eq!(l.flat_index_to_node(root, 3).unwrap(), Node::new(1, -1));
        assert_eq!(l.flat_index_to_node(root, 21).unwrap(), Node::new(5, -5));
        assert!(matches!(
            l.flat_index_to_node(root, 22),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            l.flat_index_to_node(root, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn flat_index_is_a_bijection_onto_every_subtree() {
        let l = lat(6);
        for origin in l.nodes().collect::<Vec<_>>() {
            let size = l.subtree_size(origin.t).unwrap();
            let mut seen = std::collections::HashSet::new();
            for j in 1..=size {
                let node = l.flat_index_to_node(origin, j).unwrap();
                assert!(l.contains(node), "{node} invalid (origin {origin}, j={j})");
                // node must be reachable from the origin
                let offs = (node.t - origin.t) as i64;
                assert!((i64::from(node.x) - i64::from(origin.x)).abs() <= offs);
                assert!(seen.insert(node), "duplicate {node}");
            }
            assert_eq!(seen.len(), size);
        }
    }

    #[test]
    fn node_index_round_trips_with_iteration() {
        let l = lat(7);
        for (i, node) in l.nodes().enumerate() {
            assert_eq!(l.node_index(node), i);
        }
        assert_eq!(l.nodes().count(), l.node_count());
    }

    #[test]
    fn terminal_row_is_forced_to_stop() {
        let l = lat(3);
        let mut s = Strategy::all_continue(&l);
        assert_eq!(s.get(Node::new(3, 1)), 1.0);
        assert!(matches!(
            s.set(Node::new(3, 1), 0.5),
            Err(Error::TerminalActionNotStop { .. })
        ));
        s.set(Node::new(3, 1), 1.0).unwrap();
        assert!(matches!(
            s.set(Node::new(1, 1), 1.5),
            Err(Error::InvalidProbability { .. })
        ));
        assert!(matches!(
            s.set(Node::new(2, 1), 0.5),
            Err(Error::InvalidNode { .. })
        ));
    }

    #[test]
    fn reach_probabilities_examples() {
        let l = lat(2);
        let s = Strategy::all_continue(&l);
        let r = l.reach_probabilities(Node::new(0, 0), &s).unwrap();
        assert_eq!(r.get(Node::new(2, 0)), Some(0.5));
        assert_eq!(r.get(Node::new(2, 2)), Some(0.25));
        assert_eq!(r.get(Node::new(1, 1)), Some(0.5));
        assert_eq!(r.get(Node::new(2, 3)), None);

        let mut stop_now = Strategy::all_continue(&l);
        stop_now.set(Node::new(0, 0), 1.0).unwrap();
        let r = l.reach_probabilities(Node::new(0, 0), &stop_now).unwrap();
        for (node, p) in r.iter() {
            if node.t >= 1 {
                assert_eq!(p, 0.0, "node {node}");
            }
        }

        let mut half = Strategy::all_continue(&l);
        half.set(Node::new(0, 0), 0.5).unwrap();
        let r = l.reach_probabilities(Node::new(0, 0), &half).unwrap();
        assert_eq!(r.get(Node::new(1, 1)), Some(0.25));
    }

    #[test]
    fn terminal_distribution_examples() {
        let l = lat(2);
        let s = Strategy::all_continue(&l);
        let d = l.terminal_distribution(Node::new(0, 0), &s).unwrap();
        assert_eq!(d.mass(-2), 0.25);
        assert_eq!(d.mass(0), 0.5);
        assert_eq!(d.mass(2), 0.25);

        // stopping at the origin is a point mass at its state
        let stop = Strategy::all_stop(&l);
        let d = l.terminal_distribution(Node::new(1, -1), &stop).unwrap();
        assert_eq!(d.mass(-1), 1.0);
        assert_eq!(d.total(), 1.0);

        let l1 = lat(1);
        let mut s = Strategy::all_continue(&l1);
        s.set(Node::new(0, 0), 0.5).unwrap();
        let d = l1.terminal_distribution(Node::new(0, 0), &s).unwrap();
        assert_eq!(d.mass(0), 0.5);
        assert_eq!(d.mass(1), 0.25);
        assert_eq!(d.mass(-1), 0.25);
    }

    #[test]
    fn stopping_time_distribution_examples() {
        let l = lat(2);
        let stop = Strategy::all_stop(&l);
        let d = l.stopping_time_distribution(Node::new(0, 0), &stop).unwrap();
        assert_eq!(d.mass(0), 1.0);

        let cont = Strategy::all_continue(&l);
        let d = l.stopping_time_distribution(Node::new(0, 0), &cont).unwrap();
        assert_eq!(d.mass(2), 1.0);

        let mut s = Strategy::all_continue(&l);
        s.set(Node::new(1, 1), 0.5).unwrap();
        s.set(Node::new(1, -1), 0.5).unwrap();
        let d = l.stopping_time_distribution(Node::new(0, 0), &s).unwrap();
        assert_eq!(d.mass(1), 0.5);
        assert_eq!(d.mass(2), 0.5);
    }

    #[test]
    fn horizon_mismatch_is_rejected() {
        let l = lat(3);
        let s = Strategy::all_stop(&lat(4));
        assert!(matches!(
            l.terminal_distribution(Node::new(0, 0), &s),
            Err(Error::HorizonMismatch { .. })
        ));
    }

    /// Random strategy on a lattice, arbitrary probabilities.
    fn arb_strategy(horizon: u32) -> impl proptest::strategy::Strategy<Value = Strategy> {
        let n = lat(horizon).node_count();
        proptest::collection::vec(0.0f64..=1.0, n).prop_map(move |ps| {
            let l = lat(horizon);
            let mut s = Strategy::all_stop(&l);
            for node in l.nodes().collect::<Vec<_>>() {
                if node.t < horizon {
                    s.set(node, ps[l.node_index(node)]).unwrap();
                }
            }
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn terminal_masses_sum_to_one(s in arb_strategy(6)) {
            let l = lat(6);
            for origin in l.nodes().collect::<Vec<_>>() {
                let d = l.terminal_distribution(origin, &s).unwrap();
                prop_assert!((d.total() - 1.0).abs() <= 1e-12);
                prop_assert!(d.iter().all(|(_, m)| m >= 0.0));
            }
        }

        #[test]
        fn reach_plus_cumulative_stop_mass_is_conserved(s in arb_strategy(6)) {
            let l = lat(6);
            let origin = Node::new(0, 0);
            let r = l.reach_probabilities(origin, &s).unwrap();
            let mut stopped = 0.0;
            for t in 0..=6u32 {
                let reach_row: f64 = l
                    .row(t)
                    .filter_map(|n| r.get(n))
                    .sum();
                prop_assert!((reach_row + stopped - 1.0).abs() <= 1e-12, "t={t}");
                for n in l.row(t) {
                    if let Some(p) = r.get(n) {
                        stopped += p * s.get(n);
                    }
                }
            }
        }

        #[test]
        fn state_independent_strategies_factor_through_the_walk(
            row_probs in proptest::collection::vec(0.0f64..=1.0, 6)
        ) {
            // when the stop decision depends only on time, the stopped state
            // is the stopping-time mixture of binomial layers
            let horizon = 6u32;
            let l = lat(horizon);
            let mut s = Strategy::all_stop(&l);
            for node in l.nodes().collect::<Vec<_>>() {
                if node.t < horizon {
                    s.set(node, row_probs[node.t as usize]).unwrap();
                }
            }
            let origin = Node::new(0, 0);
            let time = l.stopping_time_distribution(origin, &s).unwrap();
            let state = l.terminal_distribution(origin, &s).unwrap();
            let binom = |j: usize, i: usize| -> f64 {
                let mut c = 1.0;
                for k in 0..i {
                    c = c * (j - k) as f64 / (k + 1) as f64;
                }
                c * 0.5f64.powi(j as i32)
            };
            for n in -(horizon as i32)..=(horizon as i32) {
                let mut expect = 0.0;
                for j in 0..=horizon as usize {
                    let d = j as i64 - i64::from(n).abs();
                    if d < 0 || d % 2 != 0 {
                        continue;
                    }
                    let i = ((j as i64 - i64::from(n)) / 2) as usize;
                    expect += time.mass(j) * binom(j, i);
                }
                prop_assert!((state.mass(n) - expect).abs() <= 1e-12, "state {n}");
            }
        }
    }
}
