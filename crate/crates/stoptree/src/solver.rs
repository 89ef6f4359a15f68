//! Numerical optimization of stopping strategies: the one-dimensional best
//! response with a pinned future, the full subtree optimum, and the three
//! agent constructors (naive, sophisticated, pre-committed).
//!
//! Probability distortion makes the objective non-concave, so nothing here
//! assumes unimodality: one-dimensional problems are solved by a dense grid
//! scan plus golden-section refinement, and subtree problems by multistart
//! projected coordinate ascent warm-started from the exact pure-strategy
//! enumeration whenever the free-variable count allows it.  Ties always
//! resolve toward the larger stop probability, which keeps indifferent
//! cases (and unreachable nodes) deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lattice::{Lattice, Node, Strategy};
use crate::preference::Preference;

pub const DEFAULT_GRID_RESOLUTION: usize = 2001;
pub const DEFAULT_REFINE_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MULTISTART_COUNT: usize = 32;
pub const DEFAULT_RNG_SEED: u64 = 7;
pub const DEFAULT_MAX_INNER_ITERATIONS: usize = 64;

/// Free-variable count up to which the exact pure-strategy enumeration runs.
const ENUMERATION_LIMIT: usize = 20;

/// Grid for coordinate updates inside the subtree search.  Coarser than the
/// best-response grid; golden-section still refines every update to
/// `refine_tolerance`, and the multistart plus enumeration warm start cover
/// basin selection.
const INNER_GRID: usize = 129;

/// Values within this distance (scaled by the value magnitude) count as a
/// tie and resolve toward the larger stop probability.
const VALUE_TIE_EPS: f64 = 1e-12;

/// Whether actions may randomize or are restricted to {0, 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverMode {
    Randomized,
    Pure,
}

/// Tuning knobs for the solvers.  The defaults reproduce every documented
/// result; `rng_seed` only affects which random multistart points are
/// drawn, never the certified outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Points in the dense scan of a one-dimensional objective, >= 3.
    pub grid_resolution: usize,
    /// Width at which golden-section refinement stops, > 0.
    pub refine_tolerance: f64,
    /// Total start points for the subtree search (enumeration best,
    /// all-stop, and all-continue always included).
    pub multistart_count: usize,
    /// Seed for the deterministic multistart draws.
    pub rng_seed: u64,
    /// Cap on coordinate-ascent sweeps per start.
    pub max_inner_iterations: usize,
    pub mode: SolverMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid_resolution: DEFAULT_GRID_RESOLUTION,
            refine_tolerance: DEFAULT_REFINE_TOLERANCE,
            multistart_count: DEFAULT_MULTISTART_COUNT,
            rng_seed: DEFAULT_RNG_SEED,
            max_inner_iterations: DEFAULT_MAX_INNER_ITERATIONS,
            mode: SolverMode::Randomized,
        }
    }
}

impl SolverConfig {
    pub fn pure(mut self) -> Self {
        self.mode = SolverMode::Pure;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.grid_resolution < 3 {
            return Err(Error::InvalidParameter {
                name: "grid_resolution",
                message: format!("must be >= 3, got {}", self.grid_resolution),
            });
        }
        if !(self.refine_tolerance > 0.0 && self.refine_tolerance.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "refine_tolerance",
                message: format!("must be positive, got {}", self.refine_tolerance),
            });
        }
        if self.multistart_count == 0 {
            return Err(Error::InvalidParameter {
                name: "multistart_count",
                message: "must be >= 1".into(),
            });
        }
        if self.max_inner_iterations == 0 {
            return Err(Error::InvalidParameter {
                name: "max_inner_iterations",
                message: "must be >= 1".into(),
            });
        }
        Ok(())
    }
}

/// A per-node plan: the optimal actions over the subtree below `origin`
/// and the value they attain there.
///
/// `actions` is stored as a full-lattice strategy; entries outside the
/// subtree (and unreachable entries inside it) are fixed at 1 by the tie
/// convention and never influence the value.
#[derive(Debug, Clone)]
pub struct NodePlan {
    pub origin: Node,
    pub actions: Strategy,
    pub value: f64,
}

fn mix_seed(seed: u64, t: u32, x: i32) -> u64 {
    let mut z = seed ^ (u64::from(t) << 32) ^ u64::from(x as u32);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Golden-section maximization on `[a, b]`; returns the best probe.
/// Interval ties drift right so indifference favors larger arguments.
fn golden_max(f: &mut impl FnMut(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 > f2 { (x1, f1) } else { (x2, f2) };
    let mut iters = 0;
    while (b - a) > tol && iters < 240 {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if f1 > best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if f2 > best.1 {
                best = (x2, f2);
            }
        }
        iters += 1;
    }
    best
}

#[derive(Clone, Copy)]
enum Boundary {
    Low,
    High,
}

/// Log-spaced probes between an endpoint and the first grid point, with
/// golden refinement around the best one when it beats `best_so_far`.
/// The weighting function's slope is unbounded at 0 and 1, so a maximum
/// can hide at any scale next to either endpoint where no fixed grid sees
/// it; half-decade spacing resolves a smooth bump at every scale down to
/// the 1e-12 floor.
fn probe_boundary(
    f: &mut impl FnMut(f64) -> f64,
    boundary: Boundary,
    step: f64,
    refine_tolerance: f64,
    best_so_far: f64,
) -> Option<(f64, f64)> {
    const FLOOR: f64 = 1e-12;
    const SHRINK: f64 = 0.316_227_766_016_837_94;
    let to_p = |offset: f64| match boundary {
        Boundary::Low => offset,
        Boundary::High => 1.0 - offset,
    };
    let mut offsets = Vec::new();
    let mut o = step * SHRINK;
    while o > FLOOR {
        offsets.push(o);
        o *= SHRINK;
    }
    let values: Vec<f64> = offsets.iter().map(|&o| f(to_p(o))).collect();
    let (k, &vk) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())?;
    if vk <= best_so_far {
        return Some((to_p(offsets[k]), vk));
    }
    let hi_off = if k == 0 { step } else { offsets[k - 1] };
    let lo_off = offsets.get(k + 1).copied().unwrap_or(0.0);
    let (a, b) = match boundary {
        Boundary::Low => (lo_off, hi_off),
        Boundary::High => (1.0 - hi_off, 1.0 - lo_off),
    };
    let (p, v) = golden_max(f, a, b, refine_tolerance);
    Some(if v > vk { (p, v) } else { (to_p(offsets[k]), vk) })
}

/// Optimize the single coordinate `coord` of `work` for the value at
/// `value_origin`, leaving `work` holding the winner.  Returns `(p, value)`.
fn line_search(
    pref: &dyn Preference,
    value_origin: Node,
    work: &mut Strategy,
    coord: Node,
    resolution: usize,
    refine_tolerance: f64,
    mode: SolverMode,
) -> (f64, f64) {
    let idx = work.lattice().node_index(coord);
    let current_p = work.raw()[idx];

    macro_rules! eval {
        ($p:expr) => {{
            work.raw_mut()[idx] = $p;
            pref.evaluate(value_origin, work)
        }};
    }

    let v0 = eval!(0.0);
    let v1 = eval!(1.0);

    let mut candidates: Vec<(f64, f64)> = vec![(1.0, v1), (0.0, v0)];

    if mode == SolverMode::Randomized {
        let n = resolution.max(3);
        let step = 1.0 / (n - 1) as f64;
        let mut best_i = 0usize;
        let mut best_v = f64::NEG_INFINITY;
        for i in 0..n {
            let v = eval!(i as f64 * step);
            if v >= best_v {
                best_v = v;
                best_i = i;
            }
        }
        candidates.push((best_i as f64 * step, best_v));

        let lo = best_i.saturating_sub(1) as f64 * step;
        let hi = ((best_i + 1).min(n - 1)) as f64 * step;
        candidates.push(golden_max(&mut |p| eval!(p), lo, hi, refine_tolerance));

        let best_so_far = candidates
            .iter()
            .map(|c| c.1)
            .fold(f64::NEG_INFINITY, f64::max);
        for boundary in [Boundary::Low, Boundary::High] {
            if let Some(c) = probe_boundary(
                &mut |p| eval!(p),
                boundary,
                step,
                refine_tolerance,
                best_so_far,
            ) {
                candidates.push(c);
            }
        }

        candidates.push((current_p, eval!(current_p)));
    }

    // Ties resolve toward stopping; the certain actions outrank interior
    // candidates, so an indifferent coordinate stays exactly pure instead
    // of picking up refinement dust that would perturb later evaluations.
    let rank = |p: f64| {
        if p == 1.0 {
            0
        } else if p == 0.0 {
            1
        } else {
            2
        }
    };
    candidates.sort_by(|a, b| rank(a.0).cmp(&rank(b.0)).then(b.0.total_cmp(&a.0)));
    let vmax = candidates.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let eps = VALUE_TIE_EPS * vmax.abs().max(1.0);
    let &(p, v) = candidates
        .iter()
        .find(|c| c.1 >= vmax - eps)
        .expect("candidate set is nonempty");
    work.raw_mut()[idx] = p;
    (p, v)
}

/// Best response at `origin`: maximize the value over the origin's own stop
/// probability with every later action pinned to `future`.
///
/// Randomized mode scans `grid_resolution` points and refines by
/// golden-section; pure mode compares the two endpoint values.  Ties
/// resolve toward stopping.  At the horizon the action is forced to 1.
pub fn best_response(
    pref: &dyn Preference,
    origin: Node,
    future: &Strategy,
    cfg: &SolverConfig,
) -> Result<(f64, f64), Error> {
    cfg.validate()?;
    let lat = future.lattice();
    if !lat.contains(origin) {
        return Err(Error::InvalidNode {
            t: origin.t,
            x: origin.x,
            horizon: lat.horizon(),
        });
    }
    if origin.t == lat.horizon() {
        return Ok((1.0, pref.evaluate(origin, future)));
    }
    let mut work = future.clone();
    Ok(line_search(
        pref,
        origin,
        &mut work,
        origin,
        cfg.grid_resolution,
        cfg.refine_tolerance,
        cfg.mode,
    ))
}

/// Exact maximum over the 2^n pure assignments of the free nodes.
/// Masks are visited from all-stop downward so value ties keep the
/// strategy with more stopping.
fn enumerate_pure(
    pref: &dyn Preference,
    lat: &Lattice,
    origin: Node,
    free: &[Node],
    template: &Strategy,
) -> (Strategy, f64) {
    let idxs: Vec<usize> = free.iter().map(|&n| lat.node_index(n)).collect();
    let mut work = template.clone();
    let mut best_mask = (1u64 << free.len()) - 1;
    let mut best_v = f64::NEG_INFINITY;
    for offset in 0..(1u64 << free.len()) {
        let mask = ((1u64 << free.len()) - 1) - offset;
        for (bit, &idx) in idxs.iter().enumerate() {
            work.raw_mut()[idx] = if (mask >> bit) & 1 == 1 { 1.0 } else { 0.0 };
        }
        let v = pref.evaluate(origin, &work);
        if v > best_v {
            best_v = v;
            best_mask = mask;
        }
    }
    for (bit, &idx) in idxs.iter().enumerate() {
        work.raw_mut()[idx] = if (best_mask >> bit) & 1 == 1 { 1.0 } else { 0.0 };
    }
    (work, best_v)
}

/// Coordinate ascent over the free nodes (deepest row first), looping until
/// a full sweep changes nothing or the iteration cap is hit.  Returns the
/// attained value; `work` holds the final strategy.
fn coordinate_ascent(
    pref: &dyn Preference,
    origin: Node,
    work: &mut Strategy,
    free: &[Node],
    cfg: &SolverConfig,
) -> f64 {
    let lat = work.lattice();
    let mut value = pref.evaluate(origin, work);
    for _ in 0..cfg.max_inner_iterations {
        let mut changed = false;
        for &node in free.iter().rev() {
            let idx = lat.node_index(node);
            let old = work.raw()[idx];
            let (p, v) = line_search(
                pref,
                origin,
                work,
                node,
                INNER_GRID,
                cfg.refine_tolerance,
                cfg.mode,
            );
            if (p - old).abs() > 1e-12 {
                changed = true;
            }
            value = v;
        }
        if !changed {
            break;
        }
    }
    value
}

/// Maximize the value at `origin` over all free actions of its subtree.
///
/// When the free-variable count is at most 20 the pure strategies are
/// enumerated exactly; in randomized mode that enumeration seeds a
/// multistart coordinate ascent together with all-stop, all-continue, and
/// `multistart_count - 3` seeded random points.  Deterministic for a fixed
/// `rng_seed` (per-origin seeds are derived from it), including under
/// concurrent execution.
pub fn optimize_subtree(
    pref: &dyn Preference,
    lat: &Lattice,
    origin: Node,
    cfg: &SolverConfig,
) -> Result<NodePlan, Error> {
    cfg.validate()?;
    if !lat.contains(origin) {
        return Err(Error::InvalidNode {
            t: origin.t,
            x: origin.x,
            horizon: lat.horizon(),
        });
    }
    let free: Vec<Node> = lat
        .subtree_nodes(origin)
        .filter(|n| n.t < lat.horizon())
        .collect();
    let template = Strategy::all_stop(lat);
    if free.is_empty() {
        let value = pref.evaluate(origin, &template);
        return Ok(NodePlan {
            origin,
            actions: template,
            value,
        });
    }

    let enumerated = if free.len() <= ENUMERATION_LIMIT {
        Some(enumerate_pure(pref, lat, origin, &free, &template))
    } else {
        None
    };

    if cfg.mode == SolverMode::Pure {
        if let Some((actions, value)) = enumerated {
            return Ok(NodePlan {
                origin,
                actions,
                value,
            });
        }
    }

    // deterministic start set: enumeration best, all-stop, all-continue,
    // then seeded random points (uniform in randomized mode, vertices in
    // pure mode)
    let mut starts: Vec<Strategy> = Vec::with_capacity(cfg.multistart_count.max(3));
    if let Some((ref s, _)) = enumerated {
        starts.push(s.clone());
    }
    starts.push(template.clone());
    let mut all_continue = template.clone();
    for &node in &free {
        let idx = lat.node_index(node);
        all_continue.raw_mut()[idx] = 0.0;
    }
    starts.push(all_continue);
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.rng_seed, origin.t, origin.x));
    while starts.len() < cfg.multistart_count.max(3) {
        let mut s = template.clone();
        for &node in &free {
            let idx = lat.node_index(node);
            s.raw_mut()[idx] = match cfg.mode {
                SolverMode::Randomized => rng.gen_range(0.0..=1.0),
                SolverMode::Pure => {
                    if rng.gen_bool(0.5) {
                        1.0
                    } else {
                        0.0
                    }
                }
            };
        }
        starts.push(s);
    }

    let results: Vec<(f64, Strategy)> = starts
        .into_par_iter()
        .map(|mut s| {
            let v = coordinate_ascent(pref, origin, &mut s, &free, cfg);
            (v, s)
        })
        .collect();

    // strict improvement only, so earlier (warm) starts win ties
    let mut best = None::<(f64, Strategy)>;
    for (v, s) in results {
        match &best {
            Some((bv, _)) if v <= *bv => {}
            _ => best = Some((v, s)),
        }
    }
    let (value, actions) = best.expect("at least one start");
    Ok(NodePlan {
        origin,
        actions,
        value,
    })
}

/// The naive agent's actual strategy: at every node, solve the full
/// subtree problem fresh and keep only the action at the node itself.
pub fn naive_strategy(
    pref: &dyn Preference,
    lat: &Lattice,
    cfg: &SolverConfig,
) -> Result<Strategy, Error> {
    cfg.validate()?;
    let nodes: Vec<Node> = lat.nodes().filter(|n| n.t < lat.horizon()).collect();
    let actions: Vec<(Node, f64)> = nodes
        .into_par_iter()
        .map(|node| {
            let plan = optimize_subtree(pref, lat, node, cfg)?;
            Ok((node, plan.actions.get(node)))
        })
        .collect::<Result<_, Error>>()?;
    let mut s = Strategy::all_stop(lat);
    for (node, p) in actions {
        s.set(node, p)?;
    }
    Ok(s)
}

/// The sophisticated agent's strategy by backward induction: each row best
/// responds to the already-fixed actions of all later rows.
pub fn sophisticated_strategy(
    pref: &dyn Preference,
    lat: &Lattice,
    cfg: &SolverConfig,
) -> Result<Strategy, Error> {
    cfg.validate()?;
    let mut s = Strategy::all_stop(lat);
    for t in (0..lat.horizon()).rev() {
        let row: Vec<Node> = lat.row(t).collect();
        let updates: Vec<(Node, f64)> = row
            .into_par_iter()
            .map(|node| {
                let (p, _) = best_response(pref, node, &s, cfg)?;
                Ok((node, p))
            })
            .collect::<Result<_, Error>>()?;
        for (node, p) in updates {
            s.set(node, p)?;
        }
    }
    Ok(s)
}

/// The pre-committed agent's plan: the time-0 subtree optimum, implemented
/// forever.  Identical to the naive agent's time-0 problem.
pub fn precommitted_strategy(
    pref: &dyn Preference,
    lat: &Lattice,
    cfg: &SolverConfig,
) -> Result<NodePlan, Error> {
    optimize_subtree(pref, lat, Node::new(0, 0), cfg)
}
