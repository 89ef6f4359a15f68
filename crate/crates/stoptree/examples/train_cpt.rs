//! Train a naive CPT agent into a sophisticated one on a five-period
//! lattice and watch the strategy change round by round.
//!
//! ```bash
//! cargo run --release --example train_cpt
//! ```

use stoptree::cpt::{CptParams, CptPreference};
use stoptree::render::{render_strategy, RenderFormat};
use stoptree::solver::naive_strategy;
use stoptree::training::train_until_fixed;
use stoptree::{Lattice, Node, SolverConfig};

fn main() -> Result<(), stoptree::Error> {
    let lat = Lattice::new(5)?;
    let params = CptParams::new(0.9, 0.9, 0.5, 0.5, 1.5)?;
    let pref = CptPreference::new(params);
    let cfg = SolverConfig::default();

    println!("solving the naive strategy (each node re-optimizes its own subtree)...");
    let naive = naive_strategy(&pref, &lat, &cfg)?;
    let trace = train_until_fixed(&pref, &naive, &cfg, lat.horizon() - 1)?;

    for (i, (strategy, value)) in trace.rounds.iter().zip(&trace.root_values).enumerate() {
        println!("\n=== round {i}: root value {value:.6}");
        println!("{}", render_strategy(strategy, RenderFormat::Ascii));
    }

    println!(
        "converged after {} round(s); fixed point {} the backward-induction strategy",
        trace.converged_round.expect("bounded by T-1 for naive starts"),
        if trace.converged_to_sophisticated {
            "equals"
        } else {
            "differs from"
        }
    );
    println!(
        "root action moved from {:.5} (continue) to {:.5} (stop); the plan at (2,0) randomized at {:.5}",
        naive.get(Node::new(0, 0)),
        trace.fixed_point().get(Node::new(0, 0)),
        naive.get(Node::new(2, 0)),
    );
    println!(
        "root values along the way: {:?}",
        trace
            .root_values
            .iter()
            .map(|v| (v * 1e6).round() / 1e6)
            .collect::<Vec<_>>()
    );
    Ok(())
}
