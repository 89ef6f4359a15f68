//! Restrict every action to a hard stop/continue (no randomization) and
//! re-run both five-period experiments.  The pure problems are solved by
//! exact enumeration, and the training story survives: the strongly
//! distorted agent still needs two rounds, the mildly distorted one none.
//!
//! ```bash
//! cargo run --release --example pure_strategies
//! ```

use stoptree::cpt::{CptParams, CptPreference};
use stoptree::render::{render_strategy, RenderFormat};
use stoptree::solver::{naive_strategy, sophisticated_strategy};
use stoptree::training::{strategies_equal, train_until_fixed, DEFAULT_STRATEGY_TOLERANCE};
use stoptree::{Lattice, SolverConfig};

fn main() -> Result<(), stoptree::Error> {
    let lat = Lattice::new(5)?;
    let cfg = SolverConfig::default().pure();

    for (label, alpha, delta) in [("A", 0.9, 0.5), ("B", 0.5, 0.9)] {
        let pref = CptPreference::new(CptParams::new(alpha, alpha, delta, delta, 1.5)?);
        let naive = naive_strategy(&pref, &lat, &cfg)?;
        let soph = sophisticated_strategy(&pref, &lat, &cfg)?;
        let trace = train_until_fixed(&pref, &naive, &cfg, lat.horizon() - 1)?;

        println!("=== experiment {label} (alpha {alpha}, delta {delta}), pure actions");
        println!("naive:\n{}", render_strategy(&naive, RenderFormat::Ascii));
        println!(
            "naive equals sophisticated: {}",
            strategies_equal(&naive, &soph, DEFAULT_STRATEGY_TOLERANCE)?
        );
        println!(
            "training rounds: {}\n",
            trace.converged_round.expect("bounded for naive starts")
        );
    }
    Ok(())
}
