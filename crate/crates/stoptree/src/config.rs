//! Experiment configuration: a single TOML document with `--override`
//! patching.
//!
//! ```toml
//! horizon = 5
//!
//! [preference]
//! kind = "cpt"            # cpt | present-cost | present-reward
//! alpha_plus = 0.9
//! alpha_minus = 0.9
//! delta_plus = 0.5
//! delta_minus = 0.5
//! lambda = 1.5
//!
//! [solver]                # optional, all fields have defaults
//! rng_seed = 7
//!
//! [run]
//! mode = "train"          # naive | sophisticated | precommitted | train | measure
//! initial = "naive"       # naive | half-half | <path to a strategy document>
//! pure = false
//!
//! [output]                # optional
//! directory = "out"
//! render = "dot"          # dot | ascii | none
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::cpt::{CptParams, CptPreference};
use crate::error::Error;
use crate::preference::Preference;
use crate::presentbias::{
    CostPreference, ImmediateCostParams, ImmediateRewardParams, RewardPreference,
};
use crate::solver::SolverConfig;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub horizon: u32,
    pub preference: PreferenceConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    pub run: RunConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PreferenceConfig {
    Cpt {
        alpha_plus: f64,
        alpha_minus: f64,
        delta_plus: f64,
        delta_minus: f64,
        lambda: f64,
        #[serde(default)]
        reference: f64,
    },
    PresentCost {
        beta: f64,
        reward: f64,
        cost: f64,
        decay: f64,
    },
    PresentReward {
        beta: f64,
        theta: f64,
        reward: f64,
    },
}

impl PreferenceConfig {
    /// Instantiate the preference for a lattice of the given horizon,
    /// returning any soft-range warnings.
    pub fn build(&self, horizon: u32) -> Result<(Box<dyn Preference>, Vec<String>), Error> {
        match *self {
            Self::Cpt {
                alpha_plus,
                alpha_minus,
                delta_plus,
                delta_minus,
                lambda,
                reference,
            } => {
                let params = CptParams::with_reference(
                    alpha_plus,
                    alpha_minus,
                    delta_plus,
                    delta_minus,
                    lambda,
                    reference,
                )?;
                let warnings = params.warnings();
                Ok((Box::new(CptPreference::new(params)), warnings))
            }
            Self::PresentCost {
                beta,
                reward,
                cost,
                decay,
            } => {
                let params = ImmediateCostParams::new(beta, reward, cost, decay, horizon)?;
                Ok((Box::new(CostPreference::new(params)), Vec::new()))
            }
            Self::PresentReward { beta, theta, reward } => {
                let params = ImmediateRewardParams::new(beta, theta, reward, horizon)?;
                Ok((Box::new(RewardPreference::new(params)), Vec::new()))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunMode {
    Naive,
    Sophisticated,
    Precommitted,
    Train,
    Measure,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: RunMode,
    /// Initial strategy for `train`: `naive`, `half-half`, or a path to a
    /// strategy document.
    #[serde(default = "default_initial")]
    pub initial: String,
    /// Restrict every action to {0, 1}.
    #[serde(default)]
    pub pure: bool,
}

fn default_initial() -> String {
    "naive".into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenderChoice {
    Dot,
    Ascii,
    None,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub directory: PathBuf,
    #[serde(default = "default_render")]
    pub render: RenderChoice,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_render() -> RenderChoice {
    RenderChoice::Dot
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: default_out_dir(),
            render: default_render(),
        }
    }
}

/// Parse a config document and apply `--override key.path=value` patches.
pub fn load(text: &str, overrides: &[String]) -> Result<ExperimentConfig, String> {
    let mut value: toml::Value = text.parse().map_err(|e| format!("config syntax: {e}"))?;
    for spec in overrides {
        apply_override(&mut value, spec)?;
    }
    let config: ExperimentConfig = value.try_into().map_err(|e| format!("config: {e}"))?;
    if config.horizon == 0 {
        return Err("config: horizon must be >= 1".into());
    }
    config
        .solver
        .validate()
        .map_err(|e| format!("config: {e}"))?;
    config
        .preference
        .build(config.horizon)
        .map_err(|e| format!("config: {e}"))?;
    Ok(config)
}

fn apply_override(root: &mut toml::Value, spec: &str) -> Result<(), String> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| format!("override {spec:?}: expected KEY=VALUE"))?;
    let parts: Vec<&str> = path.trim().split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(format!("override {spec:?}: empty key segment"));
    }
    let mut cur = root;
    for part in &parts[..parts.len() - 1] {
        let table = cur
            .as_table_mut()
            .ok_or_else(|| format!("override {spec:?}: {part} is not a table"))?;
        cur = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(Default::default()));
    }
    let table = cur
        .as_table_mut()
        .ok_or_else(|| format!("override {spec:?}: parent is not a table"))?;
    table.insert(parts[parts.len() - 1].to_string(), parse_literal(raw.trim()));
    Ok(())
}

/// Interpret the right-hand side as a TOML literal, falling back to a
/// string (so `--override run.initial=half-half` works unquoted).
fn parse_literal(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Value>() {
        Ok(v) => v.get("v").cloned().unwrap_or(toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CPT_CONFIG: &str = r#"
horizon = 5

[preference]
kind = "cpt"
alpha_plus = 0.9
alpha_minus = 0.9
delta_plus = 0.5
delta_minus = 0.5
lambda = 1.5

[run]
mode = "measure"
"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let c = load(CPT_CONFIG, &[]).unwrap();
        assert_eq!(c.horizon, 5);
        assert_eq!(c.solver.grid_resolution, 2001);
        assert_eq!(c.run.initial, "naive");
        assert!(!c.run.pure);
        assert_eq!(c.output.render, RenderChoice::Dot);
    }

    #[test]
    fn overrides_patch_nested_keys_and_types() {
        let c = load(
            CPT_CONFIG,
            &[
                "solver.rng_seed=42".into(),
                "preference.lambda=2.25".into(),
                "run.mode=train".into(),
                "run.initial=half-half".into(),
                "output.directory=elsewhere".into(),
            ],
        )
        .unwrap();
        assert_eq!(c.solver.rng_seed, 42);
        assert_eq!(c.run.mode, RunMode::Train);
        assert_eq!(c.run.initial, "half-half");
        assert_eq!(c.output.directory, PathBuf::from("elsewhere"));
        match c.preference {
            PreferenceConfig::Cpt { lambda, .. } => assert_eq!(lambda, 2.25),
            _ => panic!("kind changed"),
        }
    }

    #[test]
    fn bad_configs_are_rejected() {
        assert!(load("horizon = 5", &[]).is_err()); // missing blocks
        assert!(load(&CPT_CONFIG.replace("0.9", "1.9"), &[]).is_err()); // alpha > 1
        assert!(load(&CPT_CONFIG.replace("measure", "nonsense"), &[]).is_err());
        assert!(load(CPT_CONFIG, &["solver.bogus=1".into()]).is_err()); // unknown field
        assert!(load(CPT_CONFIG, &["horizon".into()]).is_err()); // no '='
        assert!(load(CPT_CONFIG, &["horizon=0".into()]).is_err());
    }

    #[test]
    fn present_bias_kinds_build() {
        let cost = r#"
horizon = 5
[preference]
kind = "present-cost"
beta = 0.5
reward = 10.0
cost = 3.0
decay = 1.0
[run]
mode = "measure"
"#;
        let c = load(cost, &[]).unwrap();
        assert!(c.preference.build(5).is_ok());

        let reward = r#"
horizon = 5
[preference]
kind = "present-reward"
beta = 0.8
theta = 0.9
reward = 1.0
[run]
mode = "measure"
"#;
        let c = load(reward, &[]).unwrap();
        assert!(c.preference.build(5).is_ok());
    }

    #[test]
    fn config_round_trips_through_toml() {
        let c = load(CPT_CONFIG, &[]).unwrap();
        let text = toml::to_string(&c).unwrap();
        let again = load(&text, &[]).unwrap();
        assert_eq!(again.horizon, c.horizon);
        assert_eq!(again.solver, c.solver);
    }
}
