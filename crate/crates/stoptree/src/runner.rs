//! Batch experiment runner behind the CLI: builds the configured
//! preference, runs the requested computation, and persists result
//! documents plus renders into the output directory.
//!
//! Every run writes `result.toml` embedding the full config for
//! provenance next to the mode-specific outputs (strategy documents,
//! training trace, DOT/ASCII renders).

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{ExperimentConfig, PreferenceConfig, RenderChoice, RunMode};
use crate::error::Error;
use crate::format;
use crate::lattice::{Lattice, Node, Strategy};
use crate::presentbias::{self, ImmediateCostParams, ImmediateRewardParams};
use crate::render::{render_strategy, RenderFormat};
use crate::solver::{
    naive_strategy, precommitted_strategy, sophisticated_strategy, SolverMode,
};
use crate::training::{arbitrary_start_round_budget, inconsistency_measure, train_until_fixed};

#[derive(Debug)]
pub enum RunError {
    /// Invalid configuration (maps to exit code 2).
    Config(String),
    /// Training failed to converge; outputs were persisted first (exit 3).
    NonConvergence(String),
    Io(String),
    Domain(Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::NonConvergence(_) => 3,
            Self::Io(_) | Self::Domain(_) => 1,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(m) => write!(f, "config: {m}"),
            Self::NonConvergence(m) => write!(f, "did not converge: {m}"),
            Self::Io(m) => write!(f, "io: {m}"),
            Self::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        Self::Domain(e)
    }
}

/// Summary of a finished run: printable lines and the resolved output
/// directory.
#[derive(Debug)]
pub struct RunOutcome {
    pub lines: Vec<String>,
    pub out_dir: PathBuf,
}

struct Writer {
    out_dir: PathBuf,
    files: Vec<String>,
    render: RenderChoice,
}

impl Writer {
    fn write(&mut self, name: &str, contents: &str) -> Result<(), RunError> {
        let path = self.out_dir.join(name);
        fs::write(&path, contents)
            .map_err(|e| RunError::Io(format!("writing {}: {e}", path.display())))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn render(&mut self, base: &str, s: &Strategy) -> Result<(), RunError> {
        let (format, ext) = match self.render {
            RenderChoice::Dot => (RenderFormat::Dot, "dot"),
            RenderChoice::Ascii => (RenderFormat::Ascii, "ascii"),
            RenderChoice::None => return Ok(()),
        };
        self.write(&format!("{base}.{ext}"), &render_strategy(s, format))
    }
}

/// Execute a config.  `out_override` replaces `output.directory` when set.
pub fn run(config: &ExperimentConfig, out_override: Option<&Path>) -> Result<RunOutcome, RunError> {
    let lat = Lattice::new(config.horizon)?;
    let (pref, warnings) = config
        .preference
        .build(config.horizon)
        .map_err(|e| RunError::Config(e.to_string()))?;
    let mut solver_cfg = config.solver.clone();
    solver_cfg
        .validate()
        .map_err(|e| RunError::Config(e.to_string()))?;
    if config.run.pure {
        solver_cfg.mode = SolverMode::Pure;
    }

    let out_dir = out_override
        .map(Path::to_path_buf)
        .unwrap_or_else(|| config.output.directory.clone());
    fs::create_dir_all(&out_dir)
        .map_err(|e| RunError::Io(format!("creating {}: {e}", out_dir.display())))?;

    let mut writer = Writer {
        out_dir: out_dir.clone(),
        files: Vec::new(),
        render: config.output.render,
    };
    let mut lines: Vec<String> = warnings.iter().map(|w| format!("warning: {w}")).collect();
    let mut result = toml::map::Map::new();
    result.insert("mode".into(), toml_str(mode_name(config.run.mode)));
    if !warnings.is_empty() {
        result.insert(
            "warnings".into(),
            toml::Value::Array(warnings.iter().map(|w| toml_str(w)).collect()),
        );
    }

    let root = Node::new(0, 0);
    let mut failure: Option<RunError> = None;

    match config.run.mode {
        RunMode::Naive | RunMode::Sophisticated => {
            let (base, s) = match config.run.mode {
                RunMode::Naive => ("naive_strategy", naive_strategy(&*pref, &lat, &solver_cfg)?),
                _ => (
                    "sophisticated_strategy",
                    sophisticated_strategy(&*pref, &lat, &solver_cfg)?,
                ),
            };
            let value = pref.evaluate(root, &s);
            writer.write(&format!("{base}.strategy"), &format::write_strategy(&s))?;
            writer.render(base, &s)?;
            result.insert("root_value".into(), toml::Value::Float(value));
            lines.push(format!("{base}: root value {value:.9}"));
        }
        RunMode::Precommitted => {
            let plan = precommitted_strategy(&*pref, &lat, &solver_cfg)?;
            writer.write(
                "precommitted_plan.strategy",
                &format::write_strategy(&plan.actions),
            )?;
            writer.render("precommitted_plan", &plan.actions)?;
            result.insert("root_value".into(), toml::Value::Float(plan.value));
            lines.push(format!("precommitted plan: root value {:.9}", plan.value));
        }
        RunMode::Train => {
            let (initial, budget) = resolve_initial(config, &lat, &*pref, &solver_cfg)?;
            let trace = train_until_fixed(&*pref, &initial, &solver_cfg, budget)?;
            writer.write("trace.txt", &format::write_trace(&trace))?;
            writer.write(
                "trained_strategy.strategy",
                &format::write_strategy(trace.fixed_point()),
            )?;
            for (i, s) in trace.rounds.iter().enumerate() {
                writer.render(&format!("round_{i:02}"), s)?;
            }
            result.insert(
                "converged".into(),
                toml::Value::Boolean(trace.converged()),
            );
            if let Some(k) = trace.converged_round {
                result.insert("converged_round".into(), toml::Value::Integer(k.into()));
            }
            result.insert(
                "converged_to_sophisticated".into(),
                toml::Value::Boolean(trace.converged_to_sophisticated),
            );
            result.insert(
                "root_values".into(),
                toml::Value::Array(
                    trace
                        .root_values
                        .iter()
                        .map(|&v| toml::Value::Float(v))
                        .collect(),
                ),
            );
            match trace.converged_round {
                Some(k) => lines.push(format!(
                    "training converged after {k} rounds (sophisticated: {})",
                    trace.converged_to_sophisticated
                )),
                None => {
                    lines.push(format!("training did not converge within {budget} rounds"));
                    failure = Some(RunError::NonConvergence(format!(
                        "no fixed point within {budget} rounds; trace persisted in {}",
                        out_dir.display()
                    )));
                }
            }
        }
        RunMode::Measure => match inconsistency_measure(&*pref, &lat, &solver_cfg) {
            Ok(m) => {
                result.insert("inconsistency_measure".into(), toml::Value::Integer(m.into()));
                lines.push(format!("inconsistency measure: {m} rounds"));
                if let Some((formula, iterative)) = closed_form_rounds(&config.preference, config.horizon) {
                    result.insert("closed_form_rounds".into(), toml::Value::Integer(formula.into()));
                    result.insert(
                        "closed_form_iterative_rounds".into(),
                        toml::Value::Integer(iterative.into()),
                    );
                    result.insert(
                        "closed_form_agrees".into(),
                        toml::Value::Boolean(m == formula),
                    );
                    result.insert(
                        "closed_form_iterative_agrees".into(),
                        toml::Value::Boolean(m == iterative),
                    );
                    lines.push(format!(
                        "closed form: {formula} rounds (iterate-until-equal: {iterative}); engine {}",
                        if m == formula { "agrees" } else { "differs by the counting convention" }
                    ));
                }
                if let Some(doc) = closed_form_trace_doc(&config.preference, config.horizon) {
                    writer.write("closed_form_trace.txt", &doc)?;
                }
            }
            Err(Error::TrainingNotConverged(trace)) => {
                writer.write("trace.txt", &format::write_trace(&trace))?;
                result.insert("converged".into(), toml::Value::Boolean(false));
                failure = Some(RunError::NonConvergence(format!(
                    "measure did not converge within {} rounds; trace persisted in {}",
                    config.horizon - 1,
                    out_dir.display()
                )));
            }
            Err(e) => return Err(e.into()),
        },
    }

    result.insert(
        "files".into(),
        toml::Value::Array(writer.files.iter().map(|f| toml_str(f)).collect()),
    );

    let mut doc = toml::map::Map::new();
    doc.insert(
        "config".into(),
        toml::Value::try_from(config).map_err(|e| RunError::Io(format!("encoding config: {e}")))?,
    );
    doc.insert("result".into(), toml::Value::Table(result));
    let text = toml::to_string_pretty(&toml::Value::Table(doc))
        .map_err(|e| RunError::Io(format!("encoding result: {e}")))?;
    writer.write("result.toml", &text)?;

    lines.push(format!(
        "wrote {} file(s) to {}",
        writer.files.len(),
        out_dir.display()
    ));

    match failure {
        Some(e) => Err(e),
        None => Ok(RunOutcome { lines, out_dir }),
    }
}

fn resolve_initial(
    config: &ExperimentConfig,
    lat: &Lattice,
    pref: &dyn crate::preference::Preference,
    solver_cfg: &crate::solver::SolverConfig,
) -> Result<(Strategy, u32), RunError> {
    match config.run.initial.as_str() {
        "naive" => Ok((
            naive_strategy(pref, lat, solver_cfg)?,
            lat.horizon() - 1,
        )),
        "half-half" => Ok((
            Strategy::half_half(lat),
            arbitrary_start_round_budget(lat.horizon()),
        )),
        path => {
            let text = fs::read_to_string(path).map_err(|e| {
                RunError::Config(format!("initial strategy file {path:?}: {e}"))
            })?;
            let s = format::parse_strategy(&text)
                .map_err(|e| RunError::Config(format!("initial strategy file {path:?}: {e}")))?;
            if s.horizon() != lat.horizon() {
                return Err(RunError::Config(format!(
                    "initial strategy file {path:?} has horizon {}, config says {}",
                    s.horizon(),
                    lat.horizon()
                )));
            }
            Ok((s, arbitrary_start_round_budget(lat.horizon())))
        }
    }
}

/// Analytical training trace in the time-indexed strategy format, for the
/// present-biased models inside their closed-form regime.
fn closed_form_trace_doc(pref: &PreferenceConfig, horizon: u32) -> Option<String> {
    let trace = match *pref {
        PreferenceConfig::PresentCost {
            beta,
            reward,
            cost,
            decay,
        } => presentbias::cost_trace(
            &ImmediateCostParams::new(beta, reward, cost, decay, horizon).ok()?,
        )
        .ok()?,
        PreferenceConfig::PresentReward { beta, theta, reward } => presentbias::reward_trace(
            &ImmediateRewardParams::new(beta, theta, reward, horizon).ok()?,
        )
        .ok()?,
        PreferenceConfig::Cpt { .. } => return None,
    };
    let mut out = format!("rounds {}\n", trace.len());
    for (i, s) in trace.iter().enumerate() {
        out.push_str(&format!("round {i}\n"));
        out.push_str(&format::write_time_strategy(s));
    }
    Some(out)
}

fn closed_form_rounds(pref: &PreferenceConfig, horizon: u32) -> Option<(u32, u32)> {
    match *pref {
        PreferenceConfig::PresentCost {
            beta,
            reward,
            cost,
            decay,
        } => {
            let p = ImmediateCostParams::new(beta, reward, cost, decay, horizon).ok()?;
            let formula = presentbias::cost_round_count(&p);
            let iterative = presentbias::cost_trace(&p)
                .map(|t| t.len() as u32 - 1)
                .unwrap_or(0);
            Some((formula, iterative))
        }
        PreferenceConfig::PresentReward { beta, theta, reward } => {
            let p = ImmediateRewardParams::new(beta, theta, reward, horizon).ok()?;
            let formula = presentbias::reward_round_count(&p);
            let iterative = presentbias::reward_trace(&p)
                .map(|t| t.len() as u32 - 1)
                .unwrap_or(0);
            Some((formula, iterative))
        }
        PreferenceConfig::Cpt { .. } => None,
    }
}

fn mode_name(mode: RunMode) -> &'static str {
    match mode {
        RunMode::Naive => "naive",
        RunMode::Sophisticated => "sophisticated",
        RunMode::Precommitted => "precommitted",
        RunMode::Train => "train",
        RunMode::Measure => "measure",
    }
}

fn toml_str(s: &str) -> toml::Value {
    toml::Value::String(s.to_string())
}
