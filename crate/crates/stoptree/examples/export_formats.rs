//! Write a sophisticated strategy to the plain-text document format, read
//! it back, and emit a Graphviz render (pipe the DOT into `dot -Tpng` to
//! draw it).
//!
//! ```bash
//! cargo run --release --example export_formats > strategy.dot
//! ```

use stoptree::cpt::{CptParams, CptPreference};
use stoptree::format::{parse_strategy, write_strategy};
use stoptree::render::{render_strategy, RenderFormat};
use stoptree::solver::sophisticated_strategy;
use stoptree::training::strategies_equal;
use stoptree::{Lattice, SolverConfig};

fn main() -> Result<(), stoptree::Error> {
    let lat = Lattice::new(4)?;
    let pref = CptPreference::new(CptParams::new(0.9, 0.9, 0.5, 0.5, 1.5)?);
    let soph = sophisticated_strategy(&pref, &lat, &SolverConfig::default())?;

    let doc = write_strategy(&soph);
    eprintln!("strategy document ({} bytes):\n{doc}", doc.len());

    let back = parse_strategy(&doc)?;
    eprintln!(
        "round-trips losslessly: {}",
        strategies_equal(&soph, &back, 0.0)?
    );

    // stdout carries the DOT graph: black = stop, white = continue,
    // grey = randomized with the stop probability in the label
    println!("{}", render_strategy(&soph, RenderFormat::Dot));
    Ok(())
}
