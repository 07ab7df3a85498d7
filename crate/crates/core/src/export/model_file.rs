//! The JSON model file.
//!
//! Saving canonicalizes: nodes sorted by id, attributes by id, edges by
//! `(source, target, kind, group)`, object keys sorted, two-space indentation,
//! LF line endings and a trailing newline. Loading a canonical file and saving it
//! again reproduces it byte for byte.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::goal::{Edge, EdgeKind, GoalGraph};

pub fn load_model(text: &str) -> Result<GoalGraph> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let graph: GoalGraph = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: match e.path().to_string() {
            p if p == "." => "$".to_string(),
            p => p,
        },
        message: e.inner().to_string(),
    })?;

    let mut seen = HashSet::new();
    for (i, n) in graph.nodes.iter().enumerate() {
        if !seen.insert(n.id.as_str()) {
            return Err(Error::Schema {
                path: format!("nodes[{i}].id"),
                message: format!("duplicate node id `{}`", n.id),
            });
        }
    }
    let mut seen = HashSet::new();
    for (i, a) in graph.attributes.iter().enumerate() {
        if !seen.insert(a.id.as_str()) {
            return Err(Error::Schema {
                path: format!("attributes[{i}].id"),
                message: format!("duplicate attribute id `{}`", a.id),
            });
        }
    }
    Ok(graph)
}

pub fn load_model_file(path: impl AsRef<Path>) -> Result<GoalGraph> {
    load_model(&std::fs::read_to_string(path)?)
}

fn edge_key(e: &Edge) -> (&str, &str, &'static str, &str) {
    let group = match &e.kind {
        EdgeKind::Refinement { group, .. } => group.as_str(),
        _ => "",
    };
    (&e.source, &e.target, e.tag().as_str(), group)
}

/// The graph in canonical order. Saving never mutates the caller's graph.
pub fn canonical(graph: &GoalGraph) -> GoalGraph {
    let mut g = graph.clone();
    g.nodes.sort_by(|a, b| a.id.cmp(&b.id));
    g.attributes.sort_by(|a, b| a.id.cmp(&b.id));
    g.edges.sort_by(|a, b| edge_key(a).cmp(&edge_key(b)));
    g
}

pub fn save_model(graph: &GoalGraph) -> Result<String> {
    // `serde_json::Value` keeps object keys in a sorted map.
    let value = serde_json::to_value(canonical(graph))?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}
