//! Plain-text interchange documents.
//!
//! A strategy document lists the horizon and one record per node in
//! row-major order (time ascending, state descending):
//!
//! ```text
//! T 5
//! 0 0 2.3454000000000000e-1
//! 1 1 1.0000000000000000e0
//! ...
//! ```
//!
//! Probabilities are snapped to {0, 1} when within 1e-9 and written with 17
//! significant digits, so a re-read document compares equal at zero
//! tolerance.  The time-indexed variant drops the state column.  Blank
//! lines and `#` comments are ignored.

use crate::error::Error;
use crate::lattice::{snap, Lattice, Node, Strategy};
use crate::presentbias::TimeStrategy;
use crate::training::TrainingTrace;

fn fmt_prob(p: f64) -> String {
    format!("{:.16e}", snap(p))
}

/// Render a strategy as a document.
pub fn write_strategy(s: &Strategy) -> String {
    let lat = s.lattice();
    let mut out = String::new();
    out.push_str(&format!("T {}\n", lat.horizon()));
    for node in lat.nodes() {
        out.push_str(&format!("{} {} {}\n", node.t, node.x, fmt_prob(s.get(node))));
    }
    out
}

/// Render a time-indexed strategy as a document.
pub fn write_time_strategy(s: &TimeStrategy) -> String {
    let mut out = String::new();
    out.push_str(&format!("T {}\n", s.horizon()));
    for t in 0..=s.horizon() {
        out.push_str(&format!("{} {}\n", t, fmt_prob(s.get(t))));
    }
    out
}

/// A training trace: the header, then per round the root value and the
/// strategy document of that round's actual strategy.
pub fn write_trace(trace: &TrainingTrace) -> String {
    let mut out = String::new();
    out.push_str(&format!("rounds {}\n", trace.rounds.len()));
    match trace.converged_round {
        Some(k) => out.push_str(&format!("converged_round {k}\n")),
        None => out.push_str("converged_round none\n"),
    }
    out.push_str(&format!(
        "converged_to_sophisticated {}\n",
        trace.converged_to_sophisticated
    ));
    for (i, (s, v)) in trace.rounds.iter().zip(&trace.root_values).enumerate() {
        out.push_str(&format!("round {i} root_value {:.16e}\n", v));
        out.push_str(&write_strategy(s));
    }
    out
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_horizon(line: usize, text: &str) -> Result<u32, Error> {
    let mut it = text.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some("T"), Some(h), None) => h
            .parse::<u32>()
            .map_err(|e| parse_err(line, format!("bad horizon {h:?}: {e}"))),
        _ => Err(parse_err(line, format!("expected `T <horizon>`, got {text:?}"))),
    }
}

fn parse_prob(line: usize, raw: &str) -> Result<f64, Error> {
    let p: f64 = raw
        .parse()
        .map_err(|e| parse_err(line, format!("bad probability {raw:?}: {e}")))?;
    let p = snap(p);
    if !(0.0..=1.0).contains(&p) {
        return Err(parse_err(line, format!("probability {p} outside [0, 1]")));
    }
    Ok(p)
}

/// Parse a strategy document.  Records may appear in any order but every
/// node must appear exactly once.
pub fn parse_strategy(text: &str) -> Result<Strategy, Error> {
    let mut lines = content_lines(text);
    let (lno, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty document"))?;
    let horizon = parse_horizon(lno, header)?;
    let lat = Lattice::new(horizon)?;
    let mut s = Strategy::all_stop(&lat);
    let mut seen = vec![false; lat.node_count()];
    for (lno, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(parse_err(lno, format!("expected `t x p`, got {line:?}")));
        }
        let t: u32 = fields[0]
            .parse()
            .map_err(|e| parse_err(lno, format!("bad time {:?}: {e}", fields[0])))?;
        let x: i32 = fields[1]
            .parse()
            .map_err(|e| parse_err(lno, format!("bad state {:?}: {e}", fields[1])))?;
        let node = Node::new(t, x);
        if !lat.contains(node) {
            return Err(parse_err(lno, format!("({t},{x}) is not a lattice node")));
        }
        let idx = lat.node_index(node);
        if seen[idx] {
            return Err(parse_err(lno, format!("duplicate record for ({t},{x})")));
        }
        seen[idx] = true;
        let p = parse_prob(lno, fields[2])?;
        if t == horizon && p != 1.0 {
            return Err(parse_err(lno, format!("terminal node ({t},{x}) must stop")));
        }
        if t < horizon {
            s.set(node, p).map_err(|e| parse_err(lno, e.to_string()))?;
        }
    }
    if let Some(idx) = seen.iter().position(|&b| !b) {
        let node = lat.nodes().nth(idx).expect("index in range");
        return Err(parse_err(0, format!("missing record for {node}")));
    }
    Ok(s)
}

/// Parse a time-indexed strategy document.
pub fn parse_time_strategy(text: &str) -> Result<TimeStrategy, Error> {
    let mut lines = content_lines(text);
    let (lno, header) = lines
        .next()
        .ok_or_else(|| parse_err(0, "empty document"))?;
    let horizon = parse_horizon(lno, header)?;
    let mut probs = vec![None; horizon as usize + 1];
    for (lno, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(lno, format!("expected `t p`, got {line:?}")));
        }
        let t: usize = fields[0]
            .parse()
            .map_err(|e| parse_err(lno, format!("bad time {:?}: {e}", fields[0])))?;
        if t > horizon as usize {
            return Err(parse_err(lno, format!("time {t} outside 0..={horizon}")));
        }
        if probs[t].is_some() {
            return Err(parse_err(lno, format!("duplicate record for time {t}")));
        }
        probs[t] = Some(parse_prob(lno, fields[1])?);
    }
    let probs: Option<Vec<f64>> = probs.into_iter().collect();
    let probs = probs.ok_or_else(|| parse_err(0, "missing a time record"))?;
    TimeStrategy::new(probs)
}
