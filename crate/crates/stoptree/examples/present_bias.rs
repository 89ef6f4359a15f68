//! Present-biased stopping has closed forms: threshold delays, round
//! counts, and the full training trace.  This example prints them and
//! cross-checks the generic lattice engine against them.
//!
//! ```bash
//! cargo run --release --example present_bias
//! ```

use stoptree::presentbias::{
    cost_round_count, cost_trace, nu, reward_round_count, reward_trace, rho, CostPreference,
    ImmediateCostParams, ImmediateRewardParams, RewardPreference, TimeStrategy,
};
use stoptree::solver::naive_strategy;
use stoptree::training::train_until_fixed;
use stoptree::{Lattice, SolverConfig};

fn show(label: &str, t: &TimeStrategy) {
    let bits: Vec<String> = t.probs().iter().map(|p| format!("{p:.0}")).collect();
    println!("  {label}: ({})", bits.join(","));
}

fn main() -> Result<(), stoptree::Error> {
    let cfg = SolverConfig {
        grid_resolution: 513,
        multistart_count: 4,
        ..SolverConfig::default()
    };

    println!("== immediate cost: beta 0.5, reward 10, cost 3, decay 1, horizon 5");
    let cost = ImmediateCostParams::new(0.5, 10.0, 3.0, 1.0, 5)?;
    println!("threshold delay rho = {}", rho(&cost)?);
    println!("closed-form rounds  = {}", cost_round_count(&cost));
    println!("trace:");
    for (i, s) in cost_trace(&cost)?.iter().enumerate() {
        show(&format!("round {i}"), s);
    }

    let lat = Lattice::new(5)?;
    let pref = CostPreference::new(cost);
    let naive = naive_strategy(&pref, &lat, &cfg)?;
    let trace = train_until_fixed(&pref, &naive, &cfg, lat.horizon() - 1)?;
    println!(
        "generic engine agrees: naive {:?}, converged in {} round(s)",
        TimeStrategy::from_lattice_strategy(&naive, 1e-9)?.probs(),
        trace.converged_round.unwrap(),
    );

    println!("\n== immediate reward: beta 0.8, theta 0.9, reward 1, horizon 5");
    let reward = ImmediateRewardParams::new(0.8, 0.9, 1.0, 5)?;
    println!("threshold delay nu = {}", nu(&reward)?);
    println!("closed-form rounds = {}", reward_round_count(&reward));
    println!("trace (reaches the fixed point one round before the closed-form count):");
    for (i, s) in reward_trace(&reward)?.iter().enumerate() {
        show(&format!("round {i}"), s);
    }

    let pref = RewardPreference::new(reward);
    let naive = naive_strategy(&pref, &lat, &cfg)?;
    let trace = train_until_fixed(&pref, &naive, &cfg, lat.horizon() - 1)?;
    println!(
        "generic engine agrees: converged in {} round(s) to all-stop",
        trace.converged_round.unwrap(),
    );
    Ok(())
}
