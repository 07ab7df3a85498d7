//! Bottom-up satisfaction propagation over AND/OR refinements.
//!
//! Each refinement group yields one derived status (three-valued AND or OR over
//! its children); a parent with several groups ORs them, since they are
//! alternative refinements. A refined node that also has its own terminal status
//! (a measured goal) is the AND of that status and the derived one. Unrefined
//! nodes keep their terminal status, or `Unknown` when none is given.

use std::collections::{BTreeMap, HashMap};

use super::model::{EdgeKind, GoalGraph, RefinementMode, Status};
use crate::error::{Error, Result};

/// Returns the status of every goal-kind node, keyed by id.
pub fn propagate(graph: &GoalGraph, terminal: &BTreeMap<String, Status>) -> Result<BTreeMap<String, Status>> {
    // parent → group → (mode, children)
    let mut groups: HashMap<&str, BTreeMap<&str, (RefinementMode, Vec<&str>)>> = HashMap::new();
    for e in &graph.edges {
        if let EdgeKind::Refinement { group, mode } = &e.kind {
            let entry = groups
                .entry(e.source.as_str())
                .or_default()
                .entry(group.as_str())
                .or_insert((*mode, Vec::new()));
            if entry.0 != *mode {
                return Err(Error::Graph(format!("refinement group `{group}` mixes AND and OR")));
            }
            entry.1.push(e.target.as_str());
        }
    }

    let mut memo: HashMap<&str, Status> = HashMap::new();
    let mut visiting: Vec<&str> = Vec::new();
    let mut out = BTreeMap::new();
    for n in graph.nodes.iter().filter(|n| n.kind().is_goal()) {
        let s = resolve(n.id.as_str(), &groups, terminal, &mut memo, &mut visiting)?;
        out.insert(n.id.clone(), s);
    }
    Ok(out)
}

fn resolve<'g>(
    id: &'g str,
    groups: &HashMap<&'g str, BTreeMap<&'g str, (RefinementMode, Vec<&'g str>)>>,
    terminal: &BTreeMap<String, Status>,
    memo: &mut HashMap<&'g str, Status>,
    visiting: &mut Vec<&'g str>,
) -> Result<Status> {
    if let Some(&s) = memo.get(id) {
        return Ok(s);
    }
    if visiting.contains(&id) {
        return Err(Error::Cycle(id.to_string()));
    }
    let own = terminal.get(id).copied();
    let status = match groups.get(id) {
        None => own.unwrap_or(Status::Unknown),
        Some(parent_groups) => {
            visiting.push(id);
            let mut derived: Option<Status> = None;
            for (mode, children) in parent_groups.values() {
                let mut acc = match mode {
                    RefinementMode::And => Status::Satisfied,
                    RefinementMode::Or => Status::Violated,
                };
                for &child in children {
                    let c = resolve(child, groups, terminal, memo, visiting)?;
                    acc = match mode {
                        RefinementMode::And => acc.and(c),
                        RefinementMode::Or => acc.or(c),
                    };
                }
                derived = Some(derived.map_or(acc, |d| d.or(acc)));
            }
            visiting.pop();
            let derived = derived.expect("at least one group");
            own.map_or(derived, |o| o.and(derived))
        }
    };
    memo.insert(id, status);
    Ok(status)
}
