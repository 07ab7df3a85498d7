//! Graphviz DOT diagrams of the goal graph.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::model_file::canonical;
use super::require_valid;
use crate::error::Result;
use crate::goal::{EdgeKind, GoalGraph, NodeKind, Status};

/// Prefix of the junction nodes that stand for refinement groups.
pub const JUNCTION_PREFIX: &str = "refinement::";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeStyle {
    pub shape: &'static str,
    pub fillcolor: &'static str,
    pub bold: bool,
}

/// Node kind → shape and colour. Every kind always has an entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderStyle {
    styles: BTreeMap<NodeKind, NodeStyle>,
}

impl Default for RenderStyle {
    /// Goals blue parallelograms (behaviours with a bold border), obstacles red
    /// parallelograms, assets purple and agents yellow hexagons, domain
    /// properties orange pentagons.
    fn default() -> Self {
        let style = |shape, fillcolor, bold| NodeStyle { shape, fillcolor, bold };
        let styles = NodeKind::ALL
            .into_iter()
            .map(|k| {
                let s = match k {
                    NodeKind::ServiceResilienceGoal | NodeKind::ResourceResilienceGoal | NodeKind::MechanismGoal => {
                        style("parallelogram", "#9ecae1", false)
                    }
                    NodeKind::SystemBehavior => style("parallelogram", "#9ecae1", true),
                    NodeKind::Obstacle => style("parallelogram", "#fc9272", false),
                    NodeKind::Asset => style("hexagon", "#bcbddc", false),
                    NodeKind::Agent => style("hexagon", "#fee391", false),
                    NodeKind::DomainProperty => style("pentagon", "#fdae6b", false),
                };
                (k, s)
            })
            .collect();
        Self { styles }
    }
}

impl RenderStyle {
    pub fn get(&self, kind: NodeKind) -> &NodeStyle {
        &self.styles[&kind]
    }

    pub fn set(&mut self, kind: NodeKind, style: NodeStyle) {
        self.styles.insert(kind, style);
    }
}

/// Quotes a DOT identifier.
fn q(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Renders the graph. Nodes appear sorted by id; each refinement group becomes a
/// small junction node labelled AND or OR between the parent and its children.
/// With `status`, violated goals get a red border and a `VIOLATED` line.
pub fn export_dot(graph: &GoalGraph, style: &RenderStyle, status: Option<&BTreeMap<String, Status>>) -> Result<String> {
    require_valid(graph)?;
    let g = canonical(graph);
    let mut out = String::new();
    writeln!(out, "digraph {} {{", q(&g.metadata.system)).unwrap();
    out.push_str("  rankdir=BT;\n");
    out.push_str("  node [style=filled, fontname=\"Helvetica\"];\n");
    out.push_str("  edge [fontname=\"Helvetica\", fontsize=10];\n");

    for n in &g.nodes {
        let s = style.get(n.kind());
        let violated = status.and_then(|m| m.get(&n.id)) == Some(&Status::Violated);
        let mut label = n.name.clone();
        if violated {
            label.push_str("\nVIOLATED");
        }
        let mut attrs = vec![
            format!("label={}", q(&label)),
            format!("class={}", q(n.kind().as_str())),
            format!("shape={}", s.shape),
            format!("fillcolor={}", q(s.fillcolor)),
        ];
        if s.bold {
            attrs.push("penwidth=3".into());
        }
        if violated {
            attrs.push("color=\"#cb181d\"".into());
            if !s.bold {
                attrs.push("penwidth=2".into());
            }
        }
        writeln!(out, "  {} [{}];", q(&n.id), attrs.join(", ")).unwrap();
    }

    // Junctions, in group order.
    let mut groups: BTreeMap<&str, (&str, &str, Vec<&str>)> = BTreeMap::new();
    for e in &g.edges {
        if let EdgeKind::Refinement { group, mode } = &e.kind {
            groups
                .entry(group)
                .or_insert((e.source.as_str(), mode.label(), Vec::new()))
                .2
                .push(e.target.as_str());
        }
    }
    for (group, (parent, mode, children)) in &groups {
        let j = q(&format!("{JUNCTION_PREFIX}{group}"));
        writeln!(
            out,
            "  {j} [label={}, class=\"refinement\", shape=circle, width=0.3, fixedsize=true, fillcolor=\"#ffffff\"];",
            q(mode)
        )
        .unwrap();
        for c in children {
            writeln!(out, "  {} -> {j} [arrowhead=none];", q(c)).unwrap();
        }
        writeln!(out, "  {j} -> {};", q(parent)).unwrap();
    }

    for e in &g.edges {
        if matches!(e.kind, EdgeKind::Refinement { .. }) {
            continue;
        }
        let tag = e.tag().as_str();
        writeln!(out, "  {} -> {} [label={}, class={}];", q(&e.source), q(&e.target), q(tag), q(tag)).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
