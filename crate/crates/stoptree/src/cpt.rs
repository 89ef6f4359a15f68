//! Cumulative prospect theory: S-shaped utility, inverse-S probability
//! weighting, and the rank-dependent value of a terminal distribution.
//!
//! Outcomes are measured against a fixed reference point `B` (default 0,
//! the initial state).  States at or above `B` are gains and carry the
//! utility `(x - B)^alpha_plus`; states below are losses and carry
//! `-lambda (B - x)^alpha_minus`.  Decision weights come from differences
//! of the weighting function applied to decumulative (gains) and
//! cumulative (losses) probabilities, so small-probability extreme
//! outcomes are overweighted.

use crate::error::Error;
use crate::lattice::{terminal_distribution_unchecked, Node, Strategy, TerminalDistribution};
use crate::preference::Preference;

/// Side of the reference point a weighting function applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Gain,
    Loss,
}

/// Parameters of the CPT preference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CptParams {
    /// Curvature exponent in gains, in (0, 1].
    pub alpha_plus: f64,
    /// Curvature exponent in losses, in (0, 1].
    pub alpha_minus: f64,
    /// Distortion exponent applied to gain probabilities.
    pub delta_plus: f64,
    /// Distortion exponent applied to loss probabilities.
    pub delta_minus: f64,
    /// Loss-aversion multiplier, >= 1.
    pub lambda: f64,
    /// Reference point separating gains from losses.
    pub reference: f64,
}

/// Weighting exponents in (0, MONOTONE_DELTA_MIN] can be non-monotone;
/// outside (MONOTONE_DELTA_MIN, 1] the constructor reports a warning.
pub const MONOTONE_DELTA_MIN: f64 = 0.278;

impl CptParams {
    /// Validates hard constraints; soft range issues are reported by
    /// [`CptParams::warnings`] instead of failing.
    pub fn new(
        alpha_plus: f64,
        alpha_minus: f64,
        delta_plus: f64,
        delta_minus: f64,
        lambda: f64,
    ) -> Result<Self, Error> {
        Self::with_reference(alpha_plus, alpha_minus, delta_plus, delta_minus, lambda, 0.0)
    }

    pub fn with_reference(
        alpha_plus: f64,
        alpha_minus: f64,
        delta_plus: f64,
        delta_minus: f64,
        lambda: f64,
        reference: f64,
    ) -> Result<Self, Error> {
        for (name, v) in [("alpha_plus", alpha_plus), ("alpha_minus", alpha_minus)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidParameter {
                    name,
                    message: format!("must lie in (0, 1], got {v}"),
                });
            }
        }
        for (name, v) in [("delta_plus", delta_plus), ("delta_minus", delta_minus)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    message: format!("must be positive, got {v}"),
                });
            }
        }
        if !(lambda >= 1.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                message: format!("must be >= 1, got {lambda}"),
            });
        }
        if !reference.is_finite() {
            return Err(Error::InvalidParameter {
                name: "reference",
                message: format!("must be finite, got {reference}"),
            });
        }
        Ok(Self {
            alpha_plus,
            alpha_minus,
            delta_plus,
            delta_minus,
            lambda,
            reference,
        })
    }

    /// Soft-range diagnostics: distortion exponents outside
    /// `(MONOTONE_DELTA_MIN, 1]` keep working but the weighting function
    /// may lose monotonicity (below) or stop being inverse-S (above).
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, v) in [("delta_plus", self.delta_plus), ("delta_minus", self.delta_minus)] {
            if !(v > MONOTONE_DELTA_MIN && v <= 1.0) {
                out.push(format!(
                    "{name} = {v} outside ({MONOTONE_DELTA_MIN}, 1]; \
                     probability weighting may be non-monotone or lose its inverse-S shape"
                ));
            }
        }
        out
    }
}

/// S-shaped utility around the reference point.
pub fn utility(params: &CptParams, x: f64) -> f64 {
    let b = params.reference;
    if x >= b {
        pow_unit(x - b, params.alpha_plus)
    } else {
        -params.lambda * pow_unit(b - x, params.alpha_minus)
    }
}

/// `y^alpha` with an exact fast path at `alpha = 1` so the
/// expected-utility degeneration holds to machine precision.
fn pow_unit(y: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        y
    } else {
        y.powf(alpha)
    }
}

/// Probability weighting `q^d / (q^d + (1-q)^d)^(1/d)` with the exponent
/// for the requested side.  Identity at `d = 1`.
pub fn weight(params: &CptParams, q: f64, side: Side) -> Result<f64, Error> {
    if !(q.is_finite() && (0.0..=1.0).contains(&q)) {
        return Err(Error::InvalidProbability { value: q });
    }
    let d = match side {
        Side::Gain => params.delta_plus,
        Side::Loss => params.delta_minus,
    };
    Ok(weight_raw(q, d))
}

fn weight_raw(q: f64, d: f64) -> f64 {
    if d == 1.0 || q == 0.0 || q == 1.0 {
        return q;
    }
    let qd = q.powf(d);
    let cd = (1.0 - q).powf(d);
    qd / (qd + cd).powf(1.0 / d)
}

/// Rank-dependent CPT value of a terminal distribution.
///
/// Gains (states at or above the reference) are weighted by differences of
/// the gain weighting applied to decumulative probabilities, scanning from
/// the best outcome down; losses symmetrically from the worst outcome up.
pub fn cpt_value(params: &CptParams, dist: &TerminalDistribution) -> Result<f64, Error> {
    dist.validate()?;
    Ok(cpt_value_unchecked(params, dist))
}

pub(crate) fn cpt_value_unchecked(params: &CptParams, dist: &TerminalDistribution) -> f64 {
    let horizon = dist.horizon() as i64;
    let masses = dist.raw();
    let b = params.reference;
    let n = masses.len();

    // Each cumulative is formed from its nearer end: running sums are exact
    // near 0, complements of the opposite tail are exact at 1.  The
    // weighting function has unbounded slope at both endpoints, so feeding
    // it the ulp-level defect of a long float sum (total = 1 +- ulp) would
    // inject ~1e-6 of value noise that the optimizers then chase.
    let mut below = vec![0.0; n]; // mass strictly below index i
    for i in 1..n {
        below[i] = below[i - 1] + masses[i - 1];
    }
    let mut above = vec![0.0; n]; // mass strictly above index i
    for i in (0..n - 1).rev() {
        above[i] = above[i + 1] + masses[i + 1];
    }

    let mut value = 0.0;

    // gains: decumulative from the top state down to the reference
    let mut direct = 0.0;
    let mut w_prev = 0.0;
    for i in (0..n).rev() {
        let state = (i as i64 - horizon) as f64;
        if state < b {
            break;
        }
        direct += masses[i];
        let q = if direct <= 0.5 {
            direct
        } else {
            (1.0 - below[i]).clamp(0.0, 1.0)
        };
        let w = weight_raw(q, params.delta_plus);
        value += utility(params, state) * (w - w_prev);
        w_prev = w;
    }

    // losses: cumulative from the bottom state up to the reference
    let mut direct = 0.0;
    let mut w_prev = 0.0;
    for i in 0..n {
        let state = (i as i64 - horizon) as f64;
        if state >= b {
            break;
        }
        direct += masses[i];
        let q = if direct <= 0.5 {
            direct
        } else {
            (1.0 - above[i]).clamp(0.0, 1.0)
        };
        let w = weight_raw(q, params.delta_minus);
        value += utility(params, state) * (w - w_prev);
        w_prev = w;
    }

    value
}

/// CPT as a [`Preference`] over lattice strategies: the value of the
/// terminal distribution induced from the origin, with the reference point
/// held fixed for every origin.
#[derive(Debug, Clone)]
pub struct CptPreference {
    params: CptParams,
}

impl CptPreference {
    pub fn new(params: CptParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &CptParams {
        &self.params
    }
}

impl Preference for CptPreference {
    fn evaluate(&self, origin: Node, strategy: &Strategy) -> f64 {
        let lat = strategy.lattice();
        assert!(lat.contains(origin), "invalid origin {origin}");
        let dist = terminal_distribution_unchecked(&lat, origin, strategy);
        cpt_value_unchecked(&self.params, &dist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use approx::assert_relative_eq;
    use proptest::prelude::{prop_assert, prop_assume, proptest, ProptestConfig};

    fn params(a: f64, d: f64, lam: f64) -> CptParams {
        CptParams::new(a, a, d, d, lam).unwrap()
    }

    #[test]
    fn utility_examples() {
        let p = params(0.9, 0.5, 1.5);
        assert_eq!(utility(&p, 1.0), 1.0);
        assert_relative_eq!(utility(&p, -1.0), -1.5);
        let p = params(0.5, 0.5, 1.5);
        assert_relative_eq!(utility(&p, 4.0), 2.0);
    }

    #[test]
    fn weight_boundaries_and_midpoint() {
        let p = params(0.9, 0.5, 1.5);
        assert_eq!(weight(&p, 0.0, Side::Gain).unwrap(), 0.0);
        assert_eq!(weight(&p, 1.0, Side::Loss).unwrap(), 1.0);
        // 0.5^0.5 / (2 * 0.5^0.5)^2 = 0.5^0.5 / 2
        assert_relative_eq!(
            weight(&p, 0.5, Side::Gain).unwrap(),
            0.5f64.sqrt() / 2.0,
            epsilon = 1e-15
        );
        assert!(matches!(
            weight(&p, 1.2, Side::Gain),
            Err(Error::InvalidProbability { .. })
        ));
    }

    #[test]
    fn weight_is_increasing_in_admissible_range() {
        for d in [0.3, 0.4, 0.5, 0.65, 0.8, 1.0] {
            let p = params(0.9, d, 1.5);
            let mut prev = -1.0;
            for i in 0..=10_000 {
                let q = i as f64 / 10_000.0;
                let w = weight(&p, q, Side::Gain).unwrap();
                assert!(w > prev, "delta={d} q={q}");
                prev = w;
            }
        }
    }

    #[test]
    fn parameter_validation_and_warnings() {
        assert!(CptParams::new(0.0, 0.9, 0.5, 0.5, 1.5).is_err());
        assert!(CptParams::new(0.9, 0.9, 0.5, 0.5, 0.9).is_err());
        assert!(CptParams::new(0.9, 0.9, -0.1, 0.5, 1.5).is_err());
        assert!(params(0.9, 0.5, 1.5).warnings().is_empty());
        assert_eq!(params(0.9, 0.2, 1.5).warnings().len(), 2);
        assert_eq!(params(0.9, 1.3, 1.5).warnings().len(), 2);
    }

    #[test]
    fn cpt_value_point_masses() {
        let p = params(0.9, 0.5, 1.5);
        let d = TerminalDistribution::from_masses(5, [(0, 1.0)]).unwrap();
        assert_eq!(cpt_value(&p, &d).unwrap(), 0.0);
        // point mass telescopes to the plain utility
        let d = TerminalDistribution::from_masses(5, [(3, 1.0)]).unwrap();
        assert_relative_eq!(cpt_value(&p, &d).unwrap(), 3f64.powf(0.9), epsilon = 1e-14);
        let d = TerminalDistribution::from_masses(5, [(-2, 1.0)]).unwrap();
        assert_relative_eq!(
            cpt_value(&p, &d).unwrap(),
            -1.5 * 2f64.powf(0.9),
            epsilon = 1e-14
        );
    }

    #[test]
    fn cpt_value_symmetric_two_point() {
        let p = params(0.9, 0.5, 1.5);
        let d = TerminalDistribution::from_masses(5, [(2, 0.5), (-2, 0.5)]).unwrap();
        let w_half = weight(&p, 0.5, Side::Gain).unwrap();
        let expected = 2f64.powf(0.9) * w_half - 1.5 * 2f64.powf(0.9) * w_half;
        assert_relative_eq!(cpt_value(&p, &d).unwrap(), expected, epsilon = 1e-14);
    }

    #[test]
    fn unnormalized_distribution_is_rejected() {
        let p = params(0.9, 0.5, 1.5);
        let d = TerminalDistribution::from_masses(3, [(1, 0.5)]);
        assert!(d.is_err());
        let ok = TerminalDistribution::from_masses(3, [(1, 0.5), (-1, 0.5)]).unwrap();
        assert!(cpt_value(&p, &ok).is_ok());
    }

    #[test]
    fn zero_mass_states_do_not_change_the_value() {
        let p = params(0.7, 0.45, 2.0);
        let d5 = TerminalDistribution::from_masses(5, [(2, 0.3), (0, 0.2), (-1, 0.5)]).unwrap();
        let d9 = TerminalDistribution::from_masses(9, [(2, 0.3), (0, 0.2), (-1, 0.5)]).unwrap();
        assert_relative_eq!(
            cpt_value(&p, &d5).unwrap(),
            cpt_value(&p, &d9).unwrap(),
            epsilon = 1e-14
        );
    }

    /// Independent rank-dependent summation over an explicit outcome list,
    /// written the long way as an oracle for the cumulative implementation.
    fn rank_dependent_oracle(p: &CptParams, outcomes: &[(i32, f64)]) -> f64 {
        let mut sorted = outcomes.to_vec();
        sorted.sort_by_key(|&(n, _)| n);
        let mut v = 0.0;
        for &(n, _) in &sorted {
            let xf = f64::from(n);
            let above: f64 = sorted.iter().filter(|&&(m, _)| m >= n).map(|&(_, q)| q).sum();
            let strictly_above: f64 =
                sorted.iter().filter(|&&(m, _)| m > n).map(|&(_, q)| q).sum();
            let below: f64 = sorted.iter().filter(|&&(m, _)| m <= n).map(|&(_, q)| q).sum();
            let strictly_below: f64 =
                sorted.iter().filter(|&&(m, _)| m < n).map(|&(_, q)| q).sum();
            if xf >= p.reference {
                v += utility(p, xf)
                    * (weight(p, above.min(1.0), Side::Gain).unwrap()
                        - weight(p, strictly_above.min(1.0), Side::Gain).unwrap());
            } else {
                v += utility(p, xf)
                    * (weight(p, below.min(1.0), Side::Loss).unwrap()
                        - weight(p, strictly_below.min(1.0), Side::Loss).unwrap());
            }
        }
        v
    }

    #[test]
    fn evaluate_from_the_lattice_matches_the_oracle() {
        let p = params(0.9, 0.5, 1.5);
        let lat = Lattice::new(5).unwrap();
        let pref = CptPreference::new(p);
        // never stop before the horizon: dual route against the explicit
        // decision-weight table
        let s = Strategy::all_continue(&lat);
        let d = lat.terminal_distribution(Node::new(0, 0), &s).unwrap();
        let outcomes: Vec<(i32, f64)> = d.iter().filter(|&(_, m)| m > 0.0).collect();
        assert_relative_eq!(
            pref.evaluate(Node::new(0, 0), &s),
            rank_dependent_oracle(&p, &outcomes),
            epsilon = 1e-12
        );

        // immediate stop examples
        let stop = Strategy::all_stop(&lat);
        assert_eq!(pref.evaluate(Node::new(0, 0), &stop), 0.0);
        assert_relative_eq!(pref.evaluate(Node::new(1, 1), &stop), 1.0, epsilon = 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn identity_weighting_degenerates_to_expectation(
            masses in proptest::collection::vec(0.0f64..1.0, 11)
        ) {
            let total: f64 = masses.iter().sum();
            prop_assume!(total > 1e-9);
            let p = params(1.0, 1.0, 1.0);
            let pairs: Vec<(i32, f64)> = masses
                .iter()
                .enumerate()
                .map(|(i, &m)| (i as i32 - 5, m / total))
                .collect();
            let d = TerminalDistribution::from_masses(5, pairs).unwrap();
            prop_assert!((cpt_value(&p, &d).unwrap() - d.mean()).abs() <= 1e-10);
        }

        #[test]
        fn mixture_value_is_continuous_in_the_mixing_weight(
            masses in proptest::collection::vec(0.0f64..1.0, 11),
            state in -5i32..=5,
        ) {
            let total: f64 = masses.iter().sum();
            prop_assume!(total > 1e-9);
            let p = params(0.9, 0.5, 1.5);
            let cont: Vec<(i32, f64)> = masses
                .iter()
                .enumerate()
                .map(|(i, &m)| (i as i32 - 5, m / total))
                .collect();
            let max_step = |steps: usize| -> f64 {
                let mut worst: f64 = 0.0;
                let mut prev: Option<f64> = None;
                for i in 0..=steps {
                    let q = i as f64 / steps as f64;
                    let mut pairs: Vec<(i32, f64)> =
                        cont.iter().map(|&(n, m)| (n, (1.0 - q) * m)).collect();
                    pairs.push((state, q));
                    let d = TerminalDistribution::from_masses(5, pairs).unwrap();
                    let v = cpt_value(&p, &d).unwrap();
                    if let Some(pv) = prev {
                        worst = worst.max((v - pv).abs());
                    }
                    prev = Some(v);
                }
                worst
            };
            // no jumps: the modulus of continuity shrinks under grid
            // refinement (a discontinuity would keep it constant); the
            // weighting is Holder-1/2 so 8x finer gives at worst ~0.35x
            let coarse = max_step(200);
            let fine = max_step(1600);
            prop_assert!(fine <= 0.6 * coarse + 1e-12, "coarse {coarse} fine {fine}");
        }
    }
}
