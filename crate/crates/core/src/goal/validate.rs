//! Structural rules for goal models.
//!
//! | rule id | severity |
//! |---|---|
//! | `node.duplicate_id` | error |
//! | `attribute.duplicate_id` | error |
//! | `edge.dangling` | error |
//! | `edge.signature` | error |
//! | `refinement.mixed_mode` | error |
//! | `refinement.multiple_parents` | error |
//! | `refinement.cycle` | error |
//! | `goal.asset` | error |
//! | `goal.attribute` | error |
//! | `goal.thresholds` | error |
//! | `goal.composite` | error |
//! | `goal.concern` | error (service goals), warning (resource goals) |
//! | `goal.benchmark` | error (service goals), warning (resource goals) |
//! | `behavior.responsibility` | error |
//! | `obstacle.affects` | error |
//! | `obstacle.disruption_object` | error |
//! | `obstacle.superseded_by` | error |
//! | `asset.dependency` | warning |
//! | `mechanism.resolution` | warning |
//! | `mechanism.behaviors` | warning |

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::model::{AssetType, EdgeKind, EdgeTag, GoalGraph, NodeKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Error,
    Warning,
}

/// What a diagnostic points at.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Node(String),
    /// Index into the graph's edge list.
    Edge(usize),
    Attribute(String),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Node(id) => write!(f, "node `{id}`"),
            Location::Edge(i) => write!(f, "edge #{i}"),
            Location::Attribute(id) => write!(f, "attribute `{id}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub location: Location,
    pub rule: &'static str,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}] {}: {}", self.rule, self.location, self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Error)
}

/// Fails with [`Error::Invalid`] when `validate_model` reports any error.
pub fn ensure_valid(graph: &GoalGraph) -> Result<()> {
    let errors: Vec<Diagnostic> = validate_model(graph)
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .collect();
    match errors.first() {
        None => Ok(()),
        Some(first) => Err(Error::Invalid {
            count: errors.len(),
            first: first.to_string(),
        }),
    }
}

struct Collector(Vec<Diagnostic>);

impl Collector {
    fn push(&mut self, severity: Severity, location: Location, rule: &'static str, message: String) {
        self.0.push(Diagnostic {
            severity,
            location,
            rule,
            message,
        });
    }

    fn error(&mut self, location: Location, rule: &'static str, message: String) {
        self.push(Severity::Error, location, rule, message);
    }

    fn warning(&mut self, location: Location, rule: &'static str, message: String) {
        self.push(Severity::Warning, location, rule, message);
    }
}

fn signature_ok(tag: EdgeTag, source: NodeKind, target: NodeKind) -> bool {
    use NodeKind::*;
    match tag {
        EdgeTag::Refinement => {
            matches!(source, ServiceResilienceGoal | ResourceResilienceGoal | MechanismGoal) && target.is_goal()
        }
        EdgeTag::Obstruction => source == Obstacle && target.is_goal(),
        EdgeTag::Resolution => source == MechanismGoal && target == Obstacle,
        EdgeTag::Responsibility => source == Agent && target == SystemBehavior,
        EdgeTag::Concern => source.is_resilience_goal() && target == Asset,
        EdgeTag::Reference => target == DomainProperty,
        EdgeTag::Dependency => source == Asset && target == Asset,
        EdgeTag::Affects => source == Obstacle && target == Asset,
    }
}

fn signature_text(tag: EdgeTag) -> &'static str {
    match tag {
        EdgeTag::Refinement => "resilience/mechanism goal → goal or system behavior",
        EdgeTag::Obstruction => "obstacle → goal",
        EdgeTag::Resolution => "mechanism goal → obstacle",
        EdgeTag::Responsibility => "agent → system behavior",
        EdgeTag::Concern => "resilience goal → asset",
        EdgeTag::Reference => "node → domain property",
        EdgeTag::Dependency => "asset → asset",
        EdgeTag::Affects => "obstacle → asset",
    }
}

/// Runs every structural rule. Diagnostics are ordered errors first, then by location and rule.
pub fn validate_model(graph: &GoalGraph) -> Vec<Diagnostic> {
    let mut out = Collector(Vec::new());

    let mut kinds: HashMap<&str, NodeKind> = HashMap::new();
    for n in &graph.nodes {
        if kinds.insert(n.id.as_str(), n.kind()).is_some() {
            out.error(Location::Node(n.id.clone()), "node.duplicate_id", "node id is used more than once".into());
        }
    }
    let mut attr_ids = HashSet::new();
    for a in &graph.attributes {
        if !attr_ids.insert(a.id.as_str()) {
            out.error(
                Location::Attribute(a.id.clone()),
                "attribute.duplicate_id",
                "attribute id is used more than once".into(),
            );
        }
    }

    // Edge endpoints and signatures. Only well-formed edges feed the later rules.
    let mut good = vec![false; graph.edges.len()];
    for (i, e) in graph.edges.iter().enumerate() {
        let (src, tgt) = (kinds.get(e.source.as_str()), kinds.get(e.target.as_str()));
        match (src, tgt) {
            (Some(&s), Some(&t)) => {
                if signature_ok(e.tag(), s, t) {
                    good[i] = true;
                } else {
                    out.error(
                        Location::Edge(i),
                        "edge.signature",
                        format!(
                            "{} edge `{}` ({s}) → `{}` ({t}) must connect {}",
                            e.tag(),
                            e.source,
                            e.target,
                            signature_text(e.tag())
                        ),
                    );
                }
            }
            _ => {
                let missing: Vec<&str> = [e.source.as_str(), e.target.as_str()]
                    .into_iter()
                    .filter(|id| !kinds.contains_key(id))
                    .collect();
                out.error(
                    Location::Edge(i),
                    "edge.dangling",
                    format!("{} edge references unknown node(s) {}", e.tag(), quote_list(&missing)),
                );
            }
        }
    }
    let edges = || graph.edges.iter().enumerate().filter(|(i, _)| good[*i]).map(|(_, e)| e);
    let has_edge = |tag: EdgeTag, pred: &dyn Fn(&str, &str) -> bool| {
        edges().any(|e| e.tag() == tag && pred(&e.source, &e.target))
    };

    // Refinement groups: one parent, one mode.
    let mut groups: BTreeMap<&str, Vec<(usize, &str, super::model::RefinementMode)>> = BTreeMap::new();
    for (i, e) in graph.edges.iter().enumerate() {
        if let EdgeKind::Refinement { group, mode } = &e.kind {
            groups.entry(group.as_str()).or_default().push((i, e.source.as_str(), *mode));
        }
    }
    for (group, members) in &groups {
        let (first_idx, parent, mode) = members[0];
        if members.iter().any(|m| m.2 != mode) {
            out.error(
                Location::Edge(first_idx),
                "refinement.mixed_mode",
                format!("refinement group `{group}` mixes AND and OR"),
            );
        }
        if members.iter().any(|m| m.1 != parent) {
            out.error(
                Location::Edge(first_idx),
                "refinement.multiple_parents",
                format!("refinement group `{group}` has more than one parent"),
            );
        }
    }

    for id in refinement_cycle_nodes(graph, &good) {
        out.error(
            Location::Node(id.to_string()),
            "refinement.cycle",
            "node lies on a refinement cycle".into(),
        );
    }

    for n in &graph.nodes {
        let loc = || Location::Node(n.id.clone());
        match n.kind() {
            NodeKind::ServiceResilienceGoal | NodeKind::ResourceResilienceGoal => {
                let g = n.resilience_goal().expect("resilience goal");
                let service = n.kind() == NodeKind::ServiceResilienceGoal;
                match graph.node(&g.asset).map(|a| a.asset()) {
                    None => out.error(loc(), "goal.asset", format!("asset `{}` does not exist", g.asset)),
                    Some(None) => out.error(loc(), "goal.asset", format!("`{}` is not an asset", g.asset)),
                    Some(Some(a)) => {
                        if service && a.asset_type != AssetType::Service {
                            out.error(
                                loc(),
                                "goal.asset",
                                format!("service goal refers to `{}`, which is a {} asset", g.asset, a.asset_type.label()),
                            );
                        }
                    }
                }
                match (&g.attribute, &g.thresholds) {
                    (Some(attr), Some(th)) => {
                        if !attr_ids.contains(attr.as_str()) {
                            out.error(loc(), "goal.attribute", format!("attribute `{attr}` is not declared"));
                        }
                        for p in th.problems() {
                            out.error(loc(), "goal.thresholds", p);
                        }
                    }
                    (None, None) => {
                        if graph.refinement_groups(&n.id).is_empty() {
                            out.error(
                                loc(),
                                "goal.composite",
                                "goal without attribute and thresholds must be refined".into(),
                            );
                        }
                    }
                    _ => out.error(
                        loc(),
                        "goal.thresholds",
                        "attribute and thresholds must be given together".into(),
                    ),
                }

                let severity = if service { Severity::Error } else { Severity::Warning };
                let concerns = has_edge(EdgeTag::Concern, &|s, t| {
                    s == n.id && t == g.asset && graph.node(t).and_then(|a| a.asset()).is_some()
                });
                if !concerns {
                    out.push(
                        severity,
                        loc(),
                        "goal.concern",
                        format!("missing concern edge to asset `{}`", g.asset),
                    );
                }
                if g.attribute.is_some() && graph.benchmark_of(&n.id).is_none() {
                    out.push(
                        severity,
                        loc(),
                        "goal.benchmark",
                        "missing reference edge to a benchmark domain property".into(),
                    );
                }
            }
            NodeKind::SystemBehavior => {
                let responsible = has_edge(EdgeTag::Responsibility, &|_, t| t == n.id);
                if !responsible {
                    out.error(loc(), "behavior.responsibility", "no agent is responsible for this behavior".into());
                }
            }
            NodeKind::Obstacle => {
                let o = n.obstacle().expect("obstacle");
                if o.diagnosed && !has_edge(EdgeTag::Affects, &|s, _| s == n.id) {
                    out.error(loc(), "obstacle.affects", "diagnosed obstacle has no affects edge to an asset".into());
                }
                if let Some(d) = &o.disruption {
                    if graph.node(&d.object).and_then(|a| a.asset()).is_none() {
                        out.error(
                            loc(),
                            "obstacle.disruption_object",
                            format!("disruption object `{}` is not an asset", d.object),
                        );
                    }
                }
                if let Some(next) = &o.superseded_by {
                    if kinds.get(next.as_str()) != Some(&NodeKind::Obstacle) {
                        out.error(
                            loc(),
                            "obstacle.superseded_by",
                            format!("superseding obstacle `{next}` does not exist"),
                        );
                    }
                }
            }
            NodeKind::Asset => {
                if n.asset().is_some_and(|a| a.asset_type == AssetType::Service) {
                    let supported = has_edge(EdgeTag::Dependency, &|s, t| {
                        s == n.id && graph.node(t).and_then(|a| a.asset()).is_some_and(|a| a.asset_type.is_resource())
                    });
                    if !supported {
                        out.warning(loc(), "asset.dependency", "service has no dependency on a resource asset".into());
                    }
                }
            }
            NodeKind::MechanismGoal => {
                if !has_edge(EdgeTag::Resolution, &|s, _| s == n.id) {
                    out.warning(loc(), "mechanism.resolution", "mechanism resolves no obstacle".into());
                }
                if !has_edge(EdgeTag::Refinement, &|s, _| s == n.id) {
                    out.warning(loc(), "mechanism.behaviors", "mechanism is not refined into behaviors".into());
                }
            }
            NodeKind::Agent | NodeKind::DomainProperty => {}
        }
    }

    let mut diags = out.0;
    diags.sort_by(|a, b| {
        a.severity
            .cmp(&b.severity)
            .then_with(|| a.location.cmp(&b.location))
            .then_with(|| a.rule.cmp(b.rule))
    });
    diags
}

fn quote_list(ids: &[&str]) -> String {
    ids.iter().map(|s| format!("`{s}`")).collect::<Vec<_>>().join(", ")
}

/// Nodes on some refinement cycle (strongly connected via refinement edges).
fn refinement_cycle_nodes<'a>(graph: &'a GoalGraph, good: &[bool]) -> Vec<&'a str> {
    let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (i, e) in graph.edges.iter().enumerate() {
        if good[i] && e.tag() == EdgeTag::Refinement {
            adj.entry(e.source.as_str()).or_default().push(e.target.as_str());
        }
    }
    // A node is on a cycle iff it can reach itself.
    let mut on_cycle = Vec::new();
    for &start in adj.keys() {
        let mut stack: Vec<&str> = adj[start].clone();
        let mut seen = HashSet::new();
        while let Some(n) = stack.pop() {
            if n == start {
                on_cycle.push(start);
                break;
            }
            if seen.insert(n) {
                if let Some(next) = adj.get(n) {
                    stack.extend(next.iter().copied());
                }
            }
        }
    }
    on_cycle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goal::model::*;

    fn rules(diags: &[Diagnostic]) -> Vec<(&'static str, Severity)> {
        diags.iter().map(|d| (d.rule, d.severity)).collect()
    }

    fn mech(id: &str) -> Node {
        Node::new(id, id, NodeSpec::MechanismGoal(DescriptionSpec::default()))
    }

    #[test]
    fn empty_graph_is_clean() {
        assert!(validate_model(&GoalGraph::new("empty")).is_empty());
    }

    #[test]
    fn mixed_mode_group() {
        let mut g = GoalGraph::new("s");
        for id in ["m", "a", "b"] {
            g.add_node(mech(id)).unwrap();
        }
        g.add_edge(Edge::refinement("m", "a", "g", RefinementMode::And));
        g.add_edge(Edge::refinement("m", "b", "g", RefinementMode::Or));
        let diags = validate_model(&g);
        let mixed: Vec<_> = diags.iter().filter(|d| d.rule == "refinement.mixed_mode").collect();
        assert_eq!(mixed.len(), 1);
        assert_eq!(mixed[0].severity, Severity::Error);
    }

    #[test]
    fn dangling_and_signature() {
        let mut g = GoalGraph::new("s");
        g.add_node(mech("m")).unwrap();
        g.add_node(Node::new("ag", "Agent", NodeSpec::Agent(AgentSpec { agent_type: "k8s".into() })))
            .unwrap();
        g.add_edge(Edge::new(EdgeKind::Resolution, "m", "ghost"));
        g.add_edge(Edge::new(EdgeKind::Responsibility, "ag", "m"));
        let r = rules(&validate_model(&g));
        assert!(r.contains(&("edge.dangling", Severity::Error)));
        assert!(r.contains(&("edge.signature", Severity::Error)));
    }

    #[test]
    fn cycle_detected() {
        let mut g = GoalGraph::new("s");
        for id in ["a", "b", "c"] {
            g.add_node(mech(id)).unwrap();
        }
        g.add_edge(Edge::refinement("a", "b", "g1", RefinementMode::And));
        g.add_edge(Edge::refinement("b", "c", "g2", RefinementMode::And));
        g.add_edge(Edge::refinement("c", "a", "g3", RefinementMode::Or));
        let cyc: Vec<_> = validate_model(&g).into_iter().filter(|d| d.rule == "refinement.cycle").collect();
        assert_eq!(cyc.len(), 3);
    }

    #[test]
    fn mechanism_without_behaviors_warns() {
        let mut g = GoalGraph::new("s");
        g.add_node(mech("m")).unwrap();
        let d = validate_model(&g);
        assert!(!has_errors(&d));
        assert_eq!(
            rules(&d),
            vec![("mechanism.behaviors", Severity::Warning), ("mechanism.resolution", Severity::Warning)]
        );
    }

    #[test]
    fn behavior_needs_agent() {
        let mut g = GoalGraph::new("s");
        g.add_node(Node::new("b", "B", NodeSpec::SystemBehavior(DescriptionSpec::default())))
            .unwrap();
        assert_eq!(rules(&validate_model(&g)), vec![("behavior.responsibility", Severity::Error)]);
    }

    #[test]
    fn diagnosed_obstacle_needs_affects() {
        let mut g = GoalGraph::new("s");
        g.add_node(Node::new(
            "o",
            "O",
            NodeSpec::Obstacle(ObstacleSpec {
                event: "network delay".into(),
                diagnosed: true,
                ..Default::default()
            }),
        ))
        .unwrap();
        assert_eq!(rules(&validate_model(&g)), vec![("obstacle.affects", Severity::Error)]);
    }

    #[test]
    fn service_goal_needs_concern_and_benchmark() {
        let mut g = GoalGraph::new("s");
        g.add_attribute(crate::series::AttributeSpec::new(
            "rt",
            "Response Time",
            "s",
            crate::series::Orientation::LowerIsBetter,
            "s·s",
        ))
        .unwrap();
        g.add_node(Node::new("svc", "Svc", NodeSpec::Asset(AssetSpec { asset_type: AssetType::Service })))
            .unwrap();
        g.add_node(Node::new(
            "goal",
            "G",
            NodeSpec::ServiceResilienceGoal(ResilienceGoalSpec::measured(
                "svc",
                "rt",
                GoalThresholds {
                    dt_max: Some(10.0),
                    ..Default::default()
                },
            )),
        ))
        .unwrap();
        let r = rules(&validate_model(&g));
        assert!(r.contains(&("goal.concern", Severity::Error)));
        assert!(r.contains(&("goal.benchmark", Severity::Error)));
        assert!(r.contains(&("asset.dependency", Severity::Warning)));
    }

    #[test]
    fn thresholds_must_be_positive_and_present() {
        let th = GoalThresholds::default();
        assert!(!th.problems().is_empty());
        let th = GoalThresholds {
            rr_max: Some(0.0),
            ..Default::default()
        };
        assert_eq!(th.problems().len(), 1);
    }
}
