//! Present-biased preferences over stopping times, their closed-form
//! naive-to-sophisticated traces, and adapters that plug them into the
//! lattice engine.
//!
//! Both models are state-independent: the value of a strategy depends only
//! on the distribution of the stopping-time offset, so lattice rows
//! collapse and strategies reduce to a [`TimeStrategy`] (one stop
//! probability per time).
//!
//! * Immediate cost: stopping now costs `cost` up front while the reward
//!   `reward` arrives discounted by `beta`; stopping `j` periods later
//!   discounts both and shrinks the reward by `j * decay`.
//! * Immediate reward: stopping now pays `theta^T * reward` immediately;
//!   waiting grows the reward by a factor `1/theta` per period but any
//!   future payoff is discounted by `beta`.

use crate::error::Error;
use crate::lattice::{
    snap, stopping_time_distribution_unchecked, Lattice, Node, StoppingTimeDistribution, Strategy,
};
use crate::preference::Preference;

/// Ratios this close to an integer are treated as exact ties, which
/// resolve toward stopping.
const RATIO_SNAP: f64 = 1e-9;

fn snap_ratio(r: f64) -> f64 {
    if (r - r.round()).abs() < RATIO_SNAP {
        r.round()
    } else {
        r
    }
}

/// Parameters of the immediate-cost stopping problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImmediateCostParams {
    /// Present-bias discount on all non-immediate payoffs, in (0, 1].
    pub beta: f64,
    /// Reward paid in the future, > 0.
    pub reward: f64,
    /// Cost paid at the moment of stopping, > 0.
    pub cost: f64,
    /// Per-period reward decay, > 0 and < reward / horizon.
    pub decay: f64,
    /// Number of periods.
    pub horizon: u32,
}

impl ImmediateCostParams {
    pub fn new(beta: f64, reward: f64, cost: f64, decay: f64, horizon: u32) -> Result<Self, Error> {
        if horizon == 0 {
            return Err(Error::InvalidHorizon { horizon });
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                message: format!("must lie in (0, 1], got {beta}"),
            });
        }
        for (name, v) in [("reward", reward), ("cost", cost), ("decay", decay)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    message: format!("must be positive, got {v}"),
                });
            }
        }
        if decay >= reward / f64::from(horizon) {
            return Err(Error::InvalidParameter {
                name: "decay",
                message: format!(
                    "must stay below reward/horizon = {} so the reward stays positive, got {decay}",
                    reward / f64::from(horizon)
                ),
            });
        }
        Ok(Self {
            beta,
            reward,
            cost,
            decay,
            horizon,
        })
    }

    /// `(1-beta)*cost / (beta*decay)`, snapped at integer ties.  The agent
    /// prefers stopping now over stopping `j` periods later exactly when
    /// `j >= ratio`.
    fn ratio(&self) -> f64 {
        snap_ratio((1.0 - self.beta) * self.cost / (self.beta * self.decay))
    }
}

/// Parameters of the immediate-reward stopping problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImmediateRewardParams {
    /// Present-bias discount on all non-immediate payoffs, in (0, 1].
    pub beta: f64,
    /// Per-period reward growth base, in (0, 1).
    pub theta: f64,
    /// Terminal-scale reward, > 0.
    pub reward: f64,
    /// Number of periods.
    pub horizon: u32,
}

impl ImmediateRewardParams {
    pub fn new(beta: f64, theta: f64, reward: f64, horizon: u32) -> Result<Self, Error> {
        if horizon == 0 {
            return Err(Error::InvalidHorizon { horizon });
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                message: format!("must lie in (0, 1], got {beta}"),
            });
        }
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidParameter {
                name: "theta",
                message: format!("must lie in (0, 1), got {theta}"),
            });
        }
        if !(reward > 0.0 && reward.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "reward",
                message: format!("must be positive, got {reward}"),
            });
        }
        Ok(Self {
            beta,
            theta,
            reward,
            horizon,
        })
    }

    /// `log(beta)/log(theta)`, snapped at integer ties.  The agent prefers
    /// stopping now over stopping `j` periods later exactly when
    /// `j <= ratio`.
    fn ratio(&self) -> f64 {
        snap_ratio(self.beta.ln() / self.theta.ln())
    }
}

/// A state-independent strategy: one stop probability per time, terminal
/// entry forced to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeStrategy {
    probs: Vec<f64>,
}

impl TimeStrategy {
    /// Build from per-time probabilities, one per time `0..=T` with
    /// `T >= 1`; the last entry must be 1 (within snapping distance).
    pub fn new(probs: Vec<f64>) -> Result<Self, Error> {
        if probs.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "probs",
                message: "time strategy needs at least one decision before the terminal entry"
                    .into(),
            });
        }
        for &p in &probs {
            if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
                return Err(Error::InvalidProbability { value: p });
            }
        }
        let mut probs = probs;
        let last = probs.len() - 1;
        if snap(probs[last]) != 1.0 {
            return Err(Error::TerminalActionNotStop {
                t: last as u32,
                x: 0,
            });
        }
        probs[last] = 1.0;
        Ok(Self { probs })
    }

    fn from_pure(bits: Vec<bool>) -> Self {
        Self {
            probs: bits.into_iter().map(|b| if b { 1.0 } else { 0.0 }).collect(),
        }
    }

    pub fn horizon(&self) -> u32 {
        (self.probs.len() - 1) as u32
    }

    pub fn get(&self, t: u32) -> f64 {
        self.probs[t as usize]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Expand to a lattice strategy with the same probability at every
    /// state of each row.
    pub fn to_lattice_strategy(&self) -> Strategy {
        let lat = Lattice::new(self.horizon()).expect("horizon >= 1");
        let mut s = Strategy::all_stop(&lat);
        for node in lat.nodes().collect::<Vec<_>>() {
            if node.t < lat.horizon() {
                s.set(node, self.probs[node.t as usize]).expect("valid");
            }
        }
        s
    }

    /// Collapse a lattice strategy whose rows are constant (within `tol`
    /// after snapping) into a time strategy; errors if any row varies by
    /// state.
    pub fn from_lattice_strategy(s: &Strategy, tol: f64) -> Result<Self, Error> {
        let lat = s.lattice();
        let mut probs = Vec::with_capacity(lat.horizon() as usize + 1);
        for t in 0..=lat.horizon() {
            let row: Vec<f64> = lat.row(t).map(|n| snap(s.get(n))).collect();
            let first = row[0];
            if row.iter().any(|&p| (p - first).abs() > tol) {
                return Err(Error::InvalidParameter {
                    name: "strategy",
                    message: format!("row {t} is not state-independent: {row:?}"),
                });
            }
            probs.push(first);
        }
        Self::new(probs)
    }
}

fn check_offsets(
    dist: &StoppingTimeDistribution,
    t: u32,
    horizon: u32,
) -> Result<(), Error> {
    if t > horizon {
        return Err(Error::TimeOutOfRange { t, horizon });
    }
    let expect = (horizon - t) as usize + 1;
    if dist.len() != expect {
        return Err(Error::InvalidParameter {
            name: "stopping_time_distribution",
            message: format!("expected {expect} offsets for time {t}, got {}", dist.len()),
        });
    }
    dist.validate()
}

/// Present-biased value of a stopping-time distribution at time `t` under
/// the immediate-cost model:
/// `(beta*reward - cost) p_0 + sum_j beta (reward - j*decay - cost) p_j
///  - beta*t*decay`.
///
/// The trailing constant never moves the argmax but matches the model's
/// reported values.
pub fn cost_value(
    params: &ImmediateCostParams,
    t: u32,
    dist: &StoppingTimeDistribution,
) -> Result<f64, Error> {
    check_offsets(dist, t, params.horizon)?;
    Ok(cost_value_unchecked(params, t, dist))
}

fn cost_value_unchecked(params: &ImmediateCostParams, t: u32, dist: &StoppingTimeDistribution) -> f64 {
    let b = params.beta;
    let mut v = (b * params.reward - params.cost) * dist.mass(0);
    for j in 1..dist.len() {
        v += b * (params.reward - j as f64 * params.decay - params.cost) * dist.mass(j);
    }
    v - b * f64::from(t) * params.decay
}

/// Present-biased value at time `t` under the immediate-reward model:
/// `(theta^T reward p_0 + sum_j beta theta^(T-j) reward p_j) theta^(-t)`.
pub fn reward_value(
    params: &ImmediateRewardParams,
    t: u32,
    dist: &StoppingTimeDistribution,
) -> Result<f64, Error> {
    check_offsets(dist, t, params.horizon)?;
    Ok(reward_value_unchecked(params, t, dist))
}

fn reward_value_unchecked(
    params: &ImmediateRewardParams,
    t: u32,
    dist: &StoppingTimeDistribution,
) -> f64 {
    let th = params.theta;
    let horizon = params.horizon as i32;
    let mut v = th.powi(horizon) * params.reward * dist.mass(0);
    for j in 1..dist.len() {
        v += params.beta * th.powi(horizon - j as i32) * params.reward * dist.mass(j);
    }
    v * th.powi(-(t as i32))
}

/// Threshold delay `ceil((1-beta)*cost / (beta*decay))` of the
/// immediate-cost model; defined when `(1-beta)*cost > beta*decay` and
/// then always >= 2.
pub fn rho(params: &ImmediateCostParams) -> Result<u32, Error> {
    let ratio = params.ratio();
    if ratio <= 1.0 {
        return Err(Error::HypothesisNotMet {
            condition: format!(
                "(1-beta)*cost > beta*decay, got (1-beta)*cost = {} <= beta*decay = {}",
                (1.0 - params.beta) * params.cost,
                params.beta * params.decay
            ),
        });
    }
    Ok(ratio.ceil() as u32)
}

/// Threshold delay `floor(log(beta)/log(theta))` of the immediate-reward
/// model; defined when `theta >= beta > theta^T` and then in `1..=T-1`.
pub fn nu(params: &ImmediateRewardParams) -> Result<u32, Error> {
    let r = params.ratio();
    if r < 1.0 {
        return Err(Error::HypothesisNotMet {
            condition: format!("theta >= beta, got theta = {} < beta = {}", params.theta, params.beta),
        });
    }
    if r >= f64::from(params.horizon) {
        return Err(Error::HypothesisNotMet {
            condition: format!(
                "beta > theta^T, got beta = {} <= theta^T = {}",
                params.beta,
                params.theta.powi(params.horizon as i32)
            ),
        });
    }
    Ok(r.floor() as u32)
}

/// Closed-form number of training rounds for the immediate-cost model:
/// `2 (ceil((T+1)/rho) - 1)`, and 0 in the always-stop regime.
///
/// When `rho` divides `T` (and `rho <= T`) the iterative trace from
/// [`cost_trace`] reaches its fixed point one round earlier than this
/// count; the two conventions agree everywhere else.
pub fn cost_round_count(params: &ImmediateCostParams) -> u32 {
    match rho(params) {
        Err(_) => 0,
        Ok(r) => {
            let t = params.horizon;
            2 * ((t + 1).div_ceil(r) - 1)
        }
    }
}

/// Closed-form number of training rounds for the immediate-reward model:
/// `ceil(T/nu)` under the model's hypothesis, 0 in the degenerate regimes.
///
/// The iterative trace from [`reward_trace`] reaches its fixed point one
/// round earlier than this count (the closed form tallies a confirming
/// round).
pub fn reward_round_count(params: &ImmediateRewardParams) -> u32 {
    match nu(params) {
        Err(_) => 0,
        Ok(n) => params.horizon.div_ceil(n),
    }
}

/// One best-response sweep against a pure previous strategy under the
/// immediate-cost rule: stop at `t` iff the next committed stop is at
/// least `ratio` periods away.
fn cost_sweep(prev: &[bool], ratio: f64) -> Vec<bool> {
    let horizon = prev.len() - 1;
    let mut next: Vec<bool> = (0..horizon)
        .map(|t| {
            let s = (t + 1..=horizon).find(|&s| prev[s]).expect("terminal stops");
            (s - t) as f64 >= ratio
        })
        .collect();
    next.push(true);
    next
}

/// As [`cost_sweep`] for the immediate-reward rule: stop at `t` iff the
/// next committed stop is at most `ratio` periods away.
fn reward_sweep(prev: &[bool], ratio: f64) -> Vec<bool> {
    let horizon = prev.len() - 1;
    let mut next: Vec<bool> = (0..horizon)
        .map(|t| {
            let s = (t + 1..=horizon).find(|&s| prev[s]).expect("terminal stops");
            (s - t) as f64 <= ratio
        })
        .collect();
    next.push(true);
    next
}

fn iterate_to_fixed_point(initial: Vec<bool>, sweep: impl Fn(&[bool]) -> Vec<bool>) -> Vec<TimeStrategy> {
    let mut trace = vec![initial];
    loop {
        let next = sweep(trace.last().unwrap());
        if &next == trace.last().unwrap() {
            break;
        }
        trace.push(next);
    }
    trace.into_iter().map(TimeStrategy::from_pure).collect()
}

/// The exact sequence of actual strategies produced by training the naive
/// immediate-cost agent, ending at its fixed point (the sophisticated
/// strategy).  Requires `(1-beta)*cost > beta*decay`; when the threshold
/// exceeds the horizon the naive strategy is already the fixed point and
/// the trace has a single entry.
pub fn cost_trace(params: &ImmediateCostParams) -> Result<Vec<TimeStrategy>, Error> {
    rho(params)?;
    let ratio = params.ratio();
    let horizon = params.horizon as usize;
    let mut naive = vec![false; horizon + 1];
    naive[horizon] = true;
    Ok(iterate_to_fixed_point(naive, |prev| cost_sweep(prev, ratio)))
}

/// The exact training sequence for the naive immediate-reward agent,
/// ending at the all-stop fixed point.  Requires `theta >= beta > theta^T`.
pub fn reward_trace(params: &ImmediateRewardParams) -> Result<Vec<TimeStrategy>, Error> {
    nu(params)?;
    let ratio = params.ratio();
    let horizon = params.horizon as usize;
    let naive: Vec<bool> = (0..=horizon)
        .map(|t| (horizon - t) as f64 <= ratio)
        .collect();
    Ok(iterate_to_fixed_point(naive, |prev| reward_sweep(prev, ratio)))
}

/// The closed-form naive strategy of the immediate-cost model (valid in
/// every regime, unlike [`cost_trace`]).
pub fn cost_naive(params: &ImmediateCostParams) -> TimeStrategy {
    let horizon = params.horizon as usize;
    if params.ratio() <= 1.0 {
        TimeStrategy::from_pure(vec![true; horizon + 1])
    } else {
        let mut bits = vec![false; horizon + 1];
        bits[horizon] = true;
        TimeStrategy::from_pure(bits)
    }
}

/// The closed-form naive strategy of the immediate-reward model.
pub fn reward_naive(params: &ImmediateRewardParams) -> TimeStrategy {
    let horizon = params.horizon as usize;
    let r = params.ratio();
    TimeStrategy::from_pure((0..=horizon).map(|t| (horizon - t) as f64 <= r).collect())
}

/// Immediate-cost preference over lattice strategies, evaluated on the
/// stopping-time marginal.
#[derive(Debug, Clone)]
pub struct CostPreference {
    params: ImmediateCostParams,
}

impl CostPreference {
    pub fn new(params: ImmediateCostParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &ImmediateCostParams {
        &self.params
    }
}

impl Preference for CostPreference {
    fn evaluate(&self, origin: Node, strategy: &Strategy) -> f64 {
        let lat = strategy.lattice();
        assert!(lat.contains(origin), "invalid origin {origin}");
        assert_eq!(lat.horizon(), self.params.horizon, "horizon mismatch");
        let dist = stopping_time_distribution_unchecked(&lat, origin, strategy);
        cost_value_unchecked(&self.params, origin.t, &dist)
    }
}

/// Immediate-reward preference over lattice strategies.
#[derive(Debug, Clone)]
pub struct RewardPreference {
    params: ImmediateRewardParams,
}

impl RewardPreference {
    pub fn new(params: ImmediateRewardParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &ImmediateRewardParams {
        &self.params
    }
}

impl Preference for RewardPreference {
    fn evaluate(&self, origin: Node, strategy: &Strategy) -> f64 {
        let lat = strategy.lattice();
        assert!(lat.contains(origin), "invalid origin {origin}");
        assert_eq!(lat.horizon(), self.params.horizon, "horizon mismatch");
        let dist = stopping_time_distribution_unchecked(&lat, origin, strategy);
        reward_value_unchecked(&self.params, origin.t, &dist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::{prop_assert, prop_assume, proptest, ProptestConfig};

    fn cost(beta: f64, c: f64, k: f64, t: u32) -> ImmediateCostParams {
        ImmediateCostParams::new(beta, 100.0, c, k, t).unwrap()
    }

    fn point_mass(j: usize, len: usize) -> StoppingTimeDistribution {
        let mut m = vec![0.0; len];
        m[j] = 1.0;
        StoppingTimeDistribution::from_masses(m).unwrap()
    }

    #[test]
    fn cost_value_examples() {
        let p = ImmediateCostParams::new(0.5, 10.0, 3.0, 1.0, 5).unwrap();
        let v0 = cost_value(&p, 0, &point_mass(0, 6)).unwrap();
        assert_relative_eq!(v0, 0.5 * 10.0 - 3.0);
        let v_t = cost_value(&p, 0, &point_mass(5, 6)).unwrap();
        assert_relative_eq!(v_t, 0.5 * (10.0 - 5.0 - 3.0));
        let v2 = cost_value(&p, 0, &point_mass(2, 6)).unwrap();
        assert_relative_eq!(v2, 2.5);
        // the -beta*t*decay constant shows up away from time 0
        let v = cost_value(&p, 2, &point_mass(0, 4)).unwrap();
        assert_relative_eq!(v, 0.5 * 10.0 - 3.0 - 0.5 * 2.0);
    }

    #[test]
    fn reward_value_examples() {
        let p = ImmediateRewardParams::new(0.8, 0.9, 1.0, 5).unwrap();
        let v0 = reward_value(&p, 0, &point_mass(0, 6)).unwrap();
        assert_relative_eq!(v0, 0.9f64.powi(5), epsilon = 1e-14);
        let v_t = reward_value(&p, 0, &point_mass(5, 6)).unwrap();
        assert_relative_eq!(v_t, 0.8, epsilon = 1e-14);
        let v2 = reward_value(&p, 0, &point_mass(2, 6)).unwrap();
        assert_relative_eq!(v2, 0.8 * 0.9f64.powi(3), epsilon = 1e-14);
    }

    #[test]
    fn offset_count_is_checked() {
        let p = ImmediateCostParams::new(0.5, 10.0, 3.0, 1.0, 5).unwrap();
        assert!(cost_value(&p, 1, &point_mass(0, 6)).is_err());
        assert!(cost_value(&p, 1, &point_mass(0, 5)).is_ok());
        let un = StoppingTimeDistribution::from_masses(vec![0.5, 0.2]);
        assert!(un.is_err());
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&cost(0.5, 3.0, 1.0, 5)).unwrap(), 3);
        assert_eq!(rho(&cost(0.5, 1.2, 1.0, 5)).unwrap(), 2);
        assert!(matches!(
            rho(&cost(0.9, 1.0, 1.0, 5)),
            Err(Error::HypothesisNotMet { .. })
        ));
        // exact tie (1-beta)c == beta k sits outside the hypothesis
        assert!(rho(&cost(0.5, 1.0, 1.0, 5)).is_err());
    }

    #[test]
    fn nu_examples() {
        let p = ImmediateRewardParams::new(0.8, 0.9, 1.0, 5).unwrap();
        assert_eq!(nu(&p).unwrap(), 2);
        let p = ImmediateRewardParams::new(0.9, 0.9, 1.0, 5).unwrap();
        assert_eq!(nu(&p).unwrap(), 1);
        let p = ImmediateRewardParams::new(0.95, 0.9, 1.0, 5).unwrap();
        assert!(matches!(nu(&p), Err(Error::HypothesisNotMet { .. })));
        // beta <= theta^T: stop-immediately regime
        let p = ImmediateRewardParams::new(0.5, 0.95, 1.0, 10).unwrap();
        assert!(nu(&p).is_err());
    }

    #[test]
    fn round_count_examples() {
        assert_eq!(cost_round_count(&cost(0.5, 3.0, 1.0, 5)), 2);
        assert_eq!(cost_round_count(&cost(0.9, 1.0, 1.0, 5)), 0);
        // rho = 20 > T: formula collapses to 0
        assert_eq!(rho(&cost(0.5, 20.0, 1.0, 5)).unwrap(), 20);
        assert_eq!(cost_round_count(&cost(0.5, 20.0, 1.0, 5)), 0);

        let p = ImmediateRewardParams::new(0.8, 0.9, 1.0, 5).unwrap();
        assert_eq!(reward_round_count(&p), 3);
        let p = ImmediateRewardParams::new(0.5, 0.95, 1.0, 10).unwrap();
        assert_eq!(reward_round_count(&p), 0);
        let p = ImmediateRewardParams::new(0.95, 0.9, 1.0, 5).unwrap();
        assert_eq!(reward_round_count(&p), 0);
    }

    fn bits(t: &TimeStrategy) -> Vec<u8> {
        t.probs().iter().map(|&p| p as u8).collect()
    }

    #[test]
    fn cost_trace_frozen_patterns() {
        let tr = cost_trace(&cost(0.5, 3.0, 1.0, 5)).unwrap();
        let got: Vec<Vec<u8>> = tr.iter().map(bits).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0, 0, 0, 0, 1],
                vec![1, 1, 1, 0, 0, 1],
                vec![0, 0, 1, 0, 0, 1],
            ]
        );

        let tr = cost_trace(&cost(0.5, 1.5, 1.0, 2)).unwrap();
        let got: Vec<Vec<u8>> = tr.iter().map(bits).collect();
        assert_eq!(got, vec![vec![0, 0, 1], vec![1, 0, 1]]);

        // threshold beyond the horizon: naive already fixed
        let tr = cost_trace(&cost(0.5, 20.0, 1.0, 5)).unwrap();
        let got: Vec<Vec<u8>> = tr.iter().map(bits).collect();
        assert_eq!(got, vec![vec![0, 0, 0, 0, 0, 1]]);

        assert!(cost_trace(&cost(0.9, 1.0, 1.0, 5)).is_err());
    }

    #[test]
    fn reward_trace_frozen_patterns() {
        let p = ImmediateRewardParams::new(0.8, 0.9, 1.0, 5).unwrap();
        let tr = reward_trace(&p).unwrap();
        let got: Vec<Vec<u8>> = tr.iter().map(bits).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0, 0, 1, 1, 1],
                vec![0, 1, 1, 1, 1, 1],
                vec![1, 1, 1, 1, 1, 1],
            ]
        );

        // short-horizon analogue: one round to all-stop
        let p = ImmediateRewardParams::new(0.85, 0.9, 1.0, 3).unwrap();
        assert_eq!(nu(&p).unwrap(), 1);
        let tr = reward_trace(&p).unwrap();
        assert_eq!(tr.len() - 1, reward_round_count(&p) as usize - 1);

        // nu = T-1
        let p = ImmediateRewardParams::new(0.8, 0.9, 1.0, 3).unwrap();
        assert_eq!(nu(&p).unwrap(), 2);
        let tr = reward_trace(&p).unwrap();
        let got: Vec<Vec<u8>> = tr.iter().map(bits).collect();
        assert_eq!(got, vec![vec![0, 1, 1, 1], vec![1, 1, 1, 1]]);
    }

    #[test]
    fn time_strategy_round_trips_through_the_lattice() {
        let ts = TimeStrategy::new(vec![0.25, 0.0, 1.0, 1.0]).unwrap();
        let s = ts.to_lattice_strategy();
        let back = TimeStrategy::from_lattice_strategy(&s, 1e-9).unwrap();
        assert_eq!(ts, back);

        // a state-dependent strategy does not collapse
        let lat = Lattice::new(2).unwrap();
        let mut s = Strategy::all_continue(&lat);
        s.set(Node::new(1, 1), 0.7).unwrap();
        assert!(TimeStrategy::from_lattice_strategy(&s, 1e-9).is_err());
    }

    #[test]
    fn terminal_entry_is_enforced() {
        assert!(TimeStrategy::new(vec![0.5, 0.5]).is_err());
        assert!(TimeStrategy::new(vec![]).is_err());
        let t = TimeStrategy::new(vec![0.5, 1.0 - 1e-12]).unwrap();
        assert_eq!(t.get(1), 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn values_are_affine_in_the_probability_vector(
            a in proptest::collection::vec(0.0f64..1.0, 6),
            b in proptest::collection::vec(0.0f64..1.0, 6),
            w in 0.0f64..=1.0,
        ) {
            let norm = |v: &[f64]| {
                let s: f64 = v.iter().sum();
                v.iter().map(|x| x / s).collect::<Vec<_>>()
            };
            prop_assume!(a.iter().sum::<f64>() > 1e-6 && b.iter().sum::<f64>() > 1e-6);
            let (a, b) = (norm(&a), norm(&b));
            let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| w * x + (1.0 - w) * y).collect();
            let da = StoppingTimeDistribution::from_masses(a).unwrap();
            let db = StoppingTimeDistribution::from_masses(b).unwrap();
            let dm = StoppingTimeDistribution::from_masses(mix).unwrap();

            let cp = ImmediateCostParams::new(0.5, 10.0, 3.0, 1.0, 5).unwrap();
            let lhs = cost_value(&cp, 0, &dm).unwrap();
            let rhs = w * cost_value(&cp, 0, &da).unwrap()
                + (1.0 - w) * cost_value(&cp, 0, &db).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12);

            let rp = ImmediateRewardParams::new(0.8, 0.9, 1.0, 5).unwrap();
            let lhs = reward_value(&rp, 0, &dm).unwrap();
            let rhs = w * reward_value(&rp, 0, &da).unwrap()
                + (1.0 - w) * reward_value(&rp, 0, &db).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12);
        }
    }
}
