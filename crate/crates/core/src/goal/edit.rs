//! Copy-on-write edits: each operation returns a new graph that passes validation,
//! leaving the input untouched.

use super::model::{Edge, EdgeKind, GoalGraph, Node, NodeKind, NodeSpec, RefinementMode};
use super::validate::ensure_valid;
use crate::error::{Error, Result};

/// A mechanism goal together with the behaviors, agents and references below it.
#[derive(Debug, Clone, PartialEq)]
pub struct MechanismSubtree {
    /// Must be a mechanism goal.
    pub root: Node,
    /// Further nodes. A node identical to one already in the graph (a shared agent,
    /// say) is reused; a different node under an existing id is an error.
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

fn require_kind(graph: &GoalGraph, id: &str, what: &str, ok: impl Fn(NodeKind) -> bool) -> Result<NodeKind> {
    let node = graph
        .node(id)
        .ok_or_else(|| Error::Graph(format!("{what} `{id}` does not exist")))?;
    if ok(node.kind()) {
        Ok(node.kind())
    } else {
        Err(Error::Graph(format!("`{id}` is a {}, expected {what}", node.kind())))
    }
}

fn checked(graph: GoalGraph) -> Result<GoalGraph> {
    ensure_valid(&graph)?;
    Ok(graph)
}

fn add_or_reuse(graph: &mut GoalGraph, node: Node) -> Result<()> {
    match graph.node(&node.id) {
        Some(existing) if *existing == node => Ok(()),
        Some(_) => Err(Error::Graph(format!("node id `{}` is already used by a different node", node.id))),
        None => graph.add_node(node),
    }
}

/// Attaches `obstacle` to `goal` (obstruction) and to the affected `asset`.
///
/// With `supersedes`, the earlier obstacle is replaced as the explanation of the
/// degradation: its obstruction edges move to the new obstacle and it is marked
/// `superseded_by`. It stays in the graph for traceability.
pub fn attach_obstacle(
    graph: &GoalGraph,
    obstacle: Node,
    goal: &str,
    asset: &str,
    supersedes: Option<&str>,
) -> Result<GoalGraph> {
    if obstacle.kind() != NodeKind::Obstacle {
        return Err(Error::Graph(format!("`{}` is a {}, expected obstacle", obstacle.id, obstacle.kind())));
    }
    require_kind(graph, goal, "goal", NodeKind::is_goal)?;
    require_kind(graph, asset, "asset", |k| k == NodeKind::Asset)?;

    let mut next = graph.clone();
    let id = obstacle.id.clone();
    next.add_node(obstacle)?;
    next.add_edge(Edge::new(EdgeKind::Obstruction, &id, goal));
    next.add_edge(Edge::new(EdgeKind::Affects, &id, asset));

    if let Some(old) = supersedes {
        require_kind(graph, old, "obstacle", |k| k == NodeKind::Obstacle)?;
        if let NodeSpec::Obstacle(spec) = &mut next.node_mut(old).expect("checked above").spec {
            if let Some(by) = &spec.superseded_by {
                return Err(Error::Graph(format!("obstacle `{old}` is already superseded by `{by}`")));
            }
            spec.superseded_by = Some(id.clone());
        }
        let mut moved: Vec<Edge> = Vec::new();
        next.edges.retain(|e| {
            if e.kind == EdgeKind::Obstruction && e.source == old {
                moved.push(Edge::new(EdgeKind::Obstruction, &id, &e.target));
                false
            } else {
                true
            }
        });
        for e in moved {
            if !next.edges.contains(&e) {
                next.add_edge(e);
            }
        }
    }
    checked(next)
}

/// Inserts `mechanism` as an OR-refinement child of `parent` that resolves `obstacle`.
///
/// The mechanism joins the parent's existing OR group of mechanisms if there is
/// one, so alternative mechanisms end up side by side; otherwise a new group
/// `<parent>/mechanisms` is created.
pub fn resolve_with_mechanism(
    graph: &GoalGraph,
    mechanism: MechanismSubtree,
    obstacle: &str,
    parent: &str,
) -> Result<GoalGraph> {
    if mechanism.root.kind() != NodeKind::MechanismGoal {
        return Err(Error::Graph(format!(
            "`{}` is a {}, expected mechanism_goal",
            mechanism.root.id,
            mechanism.root.kind()
        )));
    }
    require_kind(graph, obstacle, "obstacle", |k| k == NodeKind::Obstacle)?;
    require_kind(graph, parent, "goal", |k| {
        matches!(
            k,
            NodeKind::ServiceResilienceGoal | NodeKind::ResourceResilienceGoal | NodeKind::MechanismGoal
        )
    })?;

    let group = graph
        .refinement_groups(parent)
        .into_iter()
        .find(|(_, (mode, children))| {
            *mode == RefinementMode::Or
                && children
                    .iter()
                    .all(|c| graph.node(c).is_some_and(|n| n.kind() == NodeKind::MechanismGoal))
        })
        .map(|(g, _)| g.to_string())
        .unwrap_or_else(|| fresh_group(graph, &format!("{parent}/mechanisms")));

    let mut next = graph.clone();
    let root = mechanism.root.id.clone();
    next.add_node(mechanism.root)?;
    for n in mechanism.nodes {
        add_or_reuse(&mut next, n)?;
    }
    next.add_edge(Edge::refinement(parent, &root, group, RefinementMode::Or));
    next.add_edge(Edge::new(EdgeKind::Resolution, &root, obstacle));
    for e in mechanism.edges {
        if !next.edges.contains(&e) {
            next.add_edge(e);
        }
    }
    checked(next)
}

fn fresh_group(graph: &GoalGraph, base: &str) -> String {
    let taken = |g: &str| {
        graph
            .edges
            .iter()
            .any(|e| matches!(&e.kind, EdgeKind::Refinement { group, .. } if group == g))
    };
    if !taken(base) {
        return base.to_string();
    }
    (2..)
        .map(|i| format!("{base}-{i}"))
        .find(|g| !taken(g))
        .expect("unbounded")
}
