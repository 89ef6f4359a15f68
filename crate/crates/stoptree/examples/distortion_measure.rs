//! Stronger probability distortion means deeper time-inconsistency: the
//! training-round count quantifies it.
//!
//! ```bash
//! cargo run --release --example distortion_measure
//! ```

use stoptree::cpt::{CptParams, CptPreference};
use stoptree::training::inconsistency_measure;
use stoptree::{Lattice, SolverConfig};

fn main() -> Result<(), stoptree::Error> {
    let lat = Lattice::new(5)?;
    let cfg = SolverConfig::default();

    println!("horizon {}, lambda 1.5", lat.horizon());
    println!("{:>10} {:>10} {:>22}", "alpha", "delta", "inconsistency rounds");
    for (alpha, delta) in [(0.9, 0.5), (0.5, 0.9)] {
        let pref = CptPreference::new(CptParams::new(alpha, alpha, delta, delta, 1.5)?);
        let rounds = inconsistency_measure(&pref, &lat, &cfg)?;
        println!("{alpha:>10} {delta:>10} {rounds:>22}");
    }
    println!("\nsmaller delta distorts probabilities harder and needs more training rounds");
    Ok(())
}
