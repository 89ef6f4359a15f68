//! Training is not tied to the naive strategy: start from a coin-flip
//! ("half-half") strategy and the same best-response sweeps still land on
//! the sophisticated equilibrium.
//!
//! ```bash
//! cargo run --release --example arbitrary_start
//! ```

use stoptree::cpt::{CptParams, CptPreference};
use stoptree::training::{arbitrary_start_round_budget, train_until_fixed};
use stoptree::{Lattice, SolverConfig, Strategy};

fn main() -> Result<(), stoptree::Error> {
    let lat = Lattice::new(5)?;
    let cfg = SolverConfig::default();

    for (label, alpha, delta) in [("A", 0.9, 0.5), ("B", 0.5, 0.9)] {
        let pref = CptPreference::new(CptParams::new(alpha, alpha, delta, delta, 1.5)?);
        let start = Strategy::half_half(&lat);
        let budget = arbitrary_start_round_budget(lat.horizon());
        let trace = train_until_fixed(&pref, &start, &cfg, budget)?;
        match trace.converged_round {
            Some(k) => println!(
                "experiment {label}: half-half start reached the {} in {k} round(s); \
                 root values {:?}",
                if trace.converged_to_sophisticated {
                    "sophisticated strategy"
                } else {
                    "a non-sophisticated fixed point"
                },
                trace
                    .root_values
                    .iter()
                    .map(|v| (v * 1e5).round() / 1e5)
                    .collect::<Vec<_>>(),
            ),
            None => println!("experiment {label}: no fixed point within {budget} rounds"),
        }
    }
    Ok(())
}
