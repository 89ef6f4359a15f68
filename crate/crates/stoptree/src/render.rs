//! Strategy renderers: Graphviz DOT and a plain-text grid.
//!
//! Stopping nodes are filled black, continuation nodes are hollow, and
//! randomized nodes are shaded grey with the stop probability printed
//! above the node label.  Probabilities are snapped before classification,
//! so a solver's 0.9999999996 renders as a stop.

use crate::lattice::{snap, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Dot,
    Ascii,
}

pub fn render_strategy(s: &Strategy, format: RenderFormat) -> String {
    match format {
        RenderFormat::Dot => render_dot(s),
        RenderFormat::Ascii => render_ascii(s),
    }
}

pub fn render_dot(s: &Strategy) -> String {
    let lat = s.lattice();
    let mut out = String::from("digraph strategy {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle, fontsize=10, style=filled];\n");
    for node in lat.nodes() {
        let p = snap(s.get(node));
        let id = format!("\"{},{}\"", node.t, node.x);
        let attrs = if p == 1.0 {
            format!("label=\"({},{})\", fillcolor=black, fontcolor=white", node.t, node.x)
        } else if p == 0.0 {
            format!("label=\"({},{})\", fillcolor=white, fontcolor=black", node.t, node.x)
        } else {
            format!(
                "label=\"{:.5}\\n({},{})\", fillcolor=grey, fontcolor=black",
                p, node.t, node.x
            )
        };
        out.push_str(&format!("  {id} [{attrs}];\n"));
    }
    for node in lat.nodes() {
        if let Some((up, down)) = lat.children(node) {
            out.push_str(&format!(
                "  \"{},{}\" -> \"{},{}\";\n",
                node.t, node.x, up.t, up.x
            ));
            out.push_str(&format!(
                "  \"{},{}\" -> \"{},{}\";\n",
                node.t, node.x, down.t, down.x
            ));
        }
    }
    out.push_str("}\n");
    out
}

pub fn render_ascii(s: &Strategy) -> String {
    let lat = s.lattice();
    let horizon = lat.horizon() as i32;
    const W: usize = 9;
    let mut out = String::new();
    out.push_str(&format!("{:>5}", "x\\t"));
    for t in 0..=horizon {
        out.push_str(&format!("{t:>W$}"));
    }
    out.push('\n');
    for x in (-horizon..=horizon).rev() {
        let mut line = format!("{x:>5}");
        for t in 0..=horizon {
            let node = crate::lattice::Node::new(t as u32, x);
            if lat.contains(node) {
                let p = snap(s.get(node));
                let cell = if p == 1.0 {
                    "stop".to_string()
                } else if p == 0.0 {
                    "cont".to_string()
                } else {
                    format!("{p:.5}")
                };
                line.push_str(&format!("{cell:>W$}"));
            } else {
                line.push_str(&" ".repeat(W));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
