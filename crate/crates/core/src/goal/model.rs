use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::benchmark::BenchmarkSource;
use crate::error::{Error, Result};
use crate::measure::Disruption;
use crate::series::AttributeSpec;

/// Node kinds of the goal decomposition view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    ServiceResilienceGoal,
    ResourceResilienceGoal,
    MechanismGoal,
    SystemBehavior,
    Obstacle,
    Asset,
    Agent,
    DomainProperty,
}

impl NodeKind {
    pub const ALL: [NodeKind; 8] = [
        NodeKind::ServiceResilienceGoal,
        NodeKind::ResourceResilienceGoal,
        NodeKind::MechanismGoal,
        NodeKind::SystemBehavior,
        NodeKind::Obstacle,
        NodeKind::Asset,
        NodeKind::Agent,
        NodeKind::DomainProperty,
    ];

    /// Goals in the broad sense: anything that can be satisfied or refined into.
    pub fn is_goal(self) -> bool {
        matches!(
            self,
            NodeKind::ServiceResilienceGoal
                | NodeKind::ResourceResilienceGoal
                | NodeKind::MechanismGoal
                | NodeKind::SystemBehavior
        )
    }

    pub fn is_resilience_goal(self) -> bool {
        matches!(self, NodeKind::ServiceResilienceGoal | NodeKind::ResourceResilienceGoal)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::ServiceResilienceGoal => "service_resilience_goal",
            NodeKind::ResourceResilienceGoal => "resource_resilience_goal",
            NodeKind::MechanismGoal => "mechanism_goal",
            NodeKind::SystemBehavior => "system_behavior",
            NodeKind::Obstacle => "obstacle",
            NodeKind::Asset => "asset",
            NodeKind::Agent => "agent",
            NodeKind::DomainProperty => "domain_property",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            NodeKind::ServiceResilienceGoal => "Service Resilience Goal",
            NodeKind::ResourceResilienceGoal => "Resource Resilience Goal",
            NodeKind::MechanismGoal => "Resilience Mechanism",
            NodeKind::SystemBehavior => "System Behavior",
            NodeKind::Obstacle => "Obstacle",
            NodeKind::Asset => "Asset",
            NodeKind::Agent => "Agent",
            NodeKind::DomainProperty => "Domain Property",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Thresholds of a resilience goal. A goal is satisfied when every degradation
/// stays strictly below each threshold that is present.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalThresholds {
    /// Disruption tolerance, attribute unit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_max: Option<f64>,
    /// Recovery rapidity, seconds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rr_max: Option<f64>,
    /// Performance loss, attribute loss unit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pl_max: Option<f64>,
}

impl GoalThresholds {
    pub fn is_empty(&self) -> bool {
        self.dt_max.is_none() && self.rr_max.is_none() && self.pl_max.is_none()
    }

    pub(crate) fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.is_empty() {
            out.push("no threshold present".to_string());
        }
        for (name, v) in [("dt_max", self.dt_max), ("rr_max", self.rr_max), ("pl_max", self.pl_max)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    out.push(format!("{name} must be a finite value > 0, got {v}"));
                }
            }
        }
        out
    }
}

/// Specification of a service or resource resilience goal.
///
/// A goal without `attribute` and `thresholds` is a composite goal: its status
/// comes only from its refinements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResilienceGoalSpec {
    /// Id of the service (or resource) asset the goal is about.
    pub asset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attribute: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<GoalThresholds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl ResilienceGoalSpec {
    pub fn measured(asset: impl Into<String>, attribute: impl Into<String>, thresholds: GoalThresholds) -> Self {
        Self {
            asset: asset.into(),
            attribute: Some(attribute.into()),
            thresholds: Some(thresholds),
            description: None,
        }
    }

    pub fn composite(asset: impl Into<String>) -> Self {
        Self {
            asset: asset.into(),
            attribute: None,
            thresholds: None,
            description: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

/// A degradation obstacle, or once `diagnosed`, the root-cause disruption.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleSpec {
    pub event: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub diagnosed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disruption: Option<Disruption>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub superseded_by: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssetType {
    /// The microservice system as a whole.
    System,
    Service,
    Pod,
    Container,
    VirtualMachine,
    PhysicalMachine,
    Cluster,
    Database,
    Process,
    Network,
    Other,
}

impl AssetType {
    pub fn is_resource(self) -> bool {
        !matches!(self, AssetType::System | AssetType::Service)
    }

    pub fn label(self) -> &'static str {
        match self {
            AssetType::System => "system",
            AssetType::Service => "service",
            AssetType::Pod => "pod",
            AssetType::Container => "container",
            AssetType::VirtualMachine => "virtual machine",
            AssetType::PhysicalMachine => "physical machine",
            AssetType::Cluster => "cluster",
            AssetType::Database => "database",
            AssetType::Process => "process",
            AssetType::Network => "network",
            AssetType::Other => "other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssetSpec {
    pub asset_type: AssetType,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub agent_type: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainPropertySpec {
    pub description: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub references: Vec<String>,
    /// Set when the property is a performance benchmark.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub benchmark: Option<BenchmarkSource>,
}

/// Kind-specific part of a node; serialized inline with a `kind` tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NodeSpec {
    ServiceResilienceGoal(ResilienceGoalSpec),
    ResourceResilienceGoal(ResilienceGoalSpec),
    MechanismGoal(DescriptionSpec),
    SystemBehavior(DescriptionSpec),
    Obstacle(ObstacleSpec),
    Asset(AssetSpec),
    Agent(AgentSpec),
    DomainProperty(DomainPropertySpec),
}

impl NodeSpec {
    pub fn kind(&self) -> NodeKind {
        match self {
            NodeSpec::ServiceResilienceGoal(_) => NodeKind::ServiceResilienceGoal,
            NodeSpec::ResourceResilienceGoal(_) => NodeKind::ResourceResilienceGoal,
            NodeSpec::MechanismGoal(_) => NodeKind::MechanismGoal,
            NodeSpec::SystemBehavior(_) => NodeKind::SystemBehavior,
            NodeSpec::Obstacle(_) => NodeKind::Obstacle,
            NodeSpec::Asset(_) => NodeKind::Asset,
            NodeSpec::Agent(_) => NodeKind::Agent,
            NodeSpec::DomainProperty(_) => NodeKind::DomainProperty,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub name: String,
    #[serde(flatten)]
    pub spec: NodeSpec,
}

impl Node {
    pub fn new(id: impl Into<String>, name: impl Into<String>, spec: NodeSpec) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            spec,
        }
    }

    pub fn kind(&self) -> NodeKind {
        self.spec.kind()
    }

    pub fn resilience_goal(&self) -> Option<&ResilienceGoalSpec> {
        match &self.spec {
            NodeSpec::ServiceResilienceGoal(g) | NodeSpec::ResourceResilienceGoal(g) => Some(g),
            _ => None,
        }
    }

    pub fn obstacle(&self) -> Option<&ObstacleSpec> {
        match &self.spec {
            NodeSpec::Obstacle(o) => Some(o),
            _ => None,
        }
    }

    pub fn asset(&self) -> Option<&AssetSpec> {
        match &self.spec {
            NodeSpec::Asset(a) => Some(a),
            _ => None,
        }
    }

    pub fn domain_property(&self) -> Option<&DomainPropertySpec> {
        match &self.spec {
            NodeSpec::DomainProperty(d) => Some(d),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefinementMode {
    And,
    Or,
}

impl RefinementMode {
    pub fn label(self) -> &'static str {
        match self {
            RefinementMode::And => "AND",
            RefinementMode::Or => "OR",
        }
    }
}

/// Edge kinds and their endpoint conventions (`source → target`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    /// Parent goal → sub goal; edges sharing `group` form one AND/OR refinement.
    Refinement { group: String, mode: RefinementMode },
    /// Obstacle → goal.
    Obstruction,
    /// Mechanism goal → obstacle.
    Resolution,
    /// Agent → system behavior.
    Responsibility,
    /// Resilience goal → asset.
    Concern,
    /// Any node → domain property.
    Reference,
    /// Dependent asset → asset it depends on.
    Dependency,
    /// Obstacle → affected asset.
    Affects,
}

impl EdgeKind {
    pub fn tag(&self) -> EdgeTag {
        match self {
            EdgeKind::Refinement { .. } => EdgeTag::Refinement,
            EdgeKind::Obstruction => EdgeTag::Obstruction,
            EdgeKind::Resolution => EdgeTag::Resolution,
            EdgeKind::Responsibility => EdgeTag::Responsibility,
            EdgeKind::Concern => EdgeTag::Concern,
            EdgeKind::Reference => EdgeTag::Reference,
            EdgeKind::Dependency => EdgeTag::Dependency,
            EdgeKind::Affects => EdgeTag::Affects,
        }
    }
}

/// Edge kind without payload, as written in the `kind` field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeTag {
    Refinement,
    Obstruction,
    Resolution,
    Responsibility,
    Concern,
    Reference,
    Dependency,
    Affects,
}

impl EdgeTag {
    pub const ALL: [EdgeTag; 8] = [
        EdgeTag::Refinement,
        EdgeTag::Obstruction,
        EdgeTag::Resolution,
        EdgeTag::Responsibility,
        EdgeTag::Concern,
        EdgeTag::Reference,
        EdgeTag::Dependency,
        EdgeTag::Affects,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EdgeTag::Refinement => "refinement",
            EdgeTag::Obstruction => "obstruction",
            EdgeTag::Resolution => "resolution",
            EdgeTag::Responsibility => "responsibility",
            EdgeTag::Concern => "concern",
            EdgeTag::Reference => "reference",
            EdgeTag::Dependency => "dependency",
            EdgeTag::Affects => "affects",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

impl fmt::Display for EdgeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawEdge", into = "RawEdge")]
pub struct Edge {
    pub kind: EdgeKind,
    pub source: String,
    pub target: String,
}

impl Edge {
    pub fn new(kind: EdgeKind, source: impl Into<String>, target: impl Into<String>) -> Self {
        Self {
            kind,
            source: source.into(),
            target: target.into(),
        }
    }

    pub fn refinement(
        parent: impl Into<String>,
        child: impl Into<String>,
        group: impl Into<String>,
        mode: RefinementMode,
    ) -> Self {
        Self::new(
            EdgeKind::Refinement {
                group: group.into(),
                mode,
            },
            parent,
            child,
        )
    }

    pub fn tag(&self) -> EdgeTag {
        self.kind.tag()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    kind: EdgeTag,
    source: String,
    target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mode: Option<RefinementMode>,
}

impl TryFrom<RawEdge> for Edge {
    type Error = String;

    fn try_from(raw: RawEdge) -> std::result::Result<Self, String> {
        let kind = match (raw.kind, raw.group, raw.mode) {
            (EdgeTag::Refinement, Some(group), Some(mode)) => EdgeKind::Refinement { group, mode },
            (EdgeTag::Refinement, _, _) => {
                return Err("refinement edge needs both `group` and `mode`".into())
            }
            (tag, None, None) => match tag {
                EdgeTag::Obstruction => EdgeKind::Obstruction,
                EdgeTag::Resolution => EdgeKind::Resolution,
                EdgeTag::Responsibility => EdgeKind::Responsibility,
                EdgeTag::Concern => EdgeKind::Concern,
                EdgeTag::Reference => EdgeKind::Reference,
                EdgeTag::Dependency => EdgeKind::Dependency,
                EdgeTag::Affects => EdgeKind::Affects,
                EdgeTag::Refinement => unreachable!(),
            },
            (tag, _, _) => return Err(format!("`group`/`mode` are only allowed on refinement edges, not {tag}")),
        };
        Ok(Edge {
            kind,
            source: raw.source,
            target: raw.target,
        })
    }
}

impl From<Edge> for RawEdge {
    fn from(e: Edge) -> Self {
        let tag = e.tag();
        let (group, mode) = match e.kind {
            EdgeKind::Refinement { group, mode } => (Some(group), Some(mode)),
            _ => (None, None),
        };
        RawEdge {
            kind: tag,
            source: e.source,
            target: e.target,
            group,
            mode,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub system: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iteration: Option<String>,
}

/// Satisfaction status used by goal evaluation and propagation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Satisfied,
    Violated,
    Unknown,
}

impl Status {
    /// Three-valued conjunction.
    pub fn and(self, other: Status) -> Status {
        match (self, other) {
            (Status::Violated, _) | (_, Status::Violated) => Status::Violated,
            (Status::Satisfied, Status::Satisfied) => Status::Satisfied,
            _ => Status::Unknown,
        }
    }

    /// Three-valued disjunction.
    pub fn or(self, other: Status) -> Status {
        match (self, other) {
            (Status::Satisfied, _) | (_, Status::Satisfied) => Status::Satisfied,
            (Status::Violated, Status::Violated) => Status::Violated,
            _ => Status::Unknown,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Satisfied => "satisfied",
            Status::Violated => "violated",
            Status::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The resilience goal decomposition view: typed nodes, typed edges, attributes.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalGraph {
    pub metadata: Metadata,
    /// Performance attributes referenced by resilience goals.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub attributes: Vec<AttributeSpec>,
    #[serde(default)]
    pub nodes: Vec<Node>,
    #[serde(default)]
    pub edges: Vec<Edge>,
}

impl GoalGraph {
    pub fn new(system: impl Into<String>) -> Self {
        Self {
            metadata: Metadata {
                system: system.into(),
                iteration: None,
            },
            ..Default::default()
        }
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn node_mut(&mut self, id: &str) -> Option<&mut Node> {
        self.nodes.iter_mut().find(|n| n.id == id)
    }

    pub fn attribute(&self, id: &str) -> Option<&AttributeSpec> {
        self.attributes.iter().find(|a| a.id == id)
    }

    /// Adds a node; ids must be unique.
    pub fn add_node(&mut self, node: Node) -> Result<()> {
        if self.node(&node.id).is_some() {
            return Err(Error::Graph(format!("duplicate node id `{}`", node.id)));
        }
        self.nodes.push(node);
        Ok(())
    }

    pub fn add_edge(&mut self, edge: Edge) {
        self.edges.push(edge);
    }

    pub fn add_attribute(&mut self, attr: AttributeSpec) -> Result<()> {
        if self.attribute(&attr.id).is_some() {
            return Err(Error::Graph(format!("duplicate attribute id `{}`", attr.id)));
        }
        self.attributes.push(attr);
        Ok(())
    }

    pub fn edges_from<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.source == id)
    }

    pub fn edges_to<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.target == id)
    }

    /// Refinement groups of `parent`: group id → (mode, children in edge order).
    pub fn refinement_groups<'a>(&'a self, parent: &'a str) -> BTreeMap<&'a str, (RefinementMode, Vec<&'a str>)> {
        let mut groups: BTreeMap<&str, (RefinementMode, Vec<&str>)> = BTreeMap::new();
        for e in self.edges_from(parent) {
            if let EdgeKind::Refinement { group, mode } = &e.kind {
                groups
                    .entry(group.as_str())
                    .or_insert_with(|| (*mode, Vec::new()))
                    .1
                    .push(e.target.as_str());
            }
        }
        groups
    }

    /// Resilience goals that carry an attribute and thresholds, sorted by id.
    pub fn measured_goals(&self) -> Vec<&Node> {
        let mut goals: Vec<&Node> = self
            .nodes
            .iter()
            .filter(|n| {
                n.resilience_goal()
                    .is_some_and(|g| g.attribute.is_some() && g.thresholds.is_some())
            })
            .collect();
        goals.sort_by(|a, b| a.id.cmp(&b.id));
        goals
    }

    /// Domain property carrying the benchmark of `goal`, via its reference edges.
    pub fn benchmark_of(&self, goal: &str) -> Option<(&Node, &BenchmarkSource)> {
        self.edges_from(goal)
            .filter(|e| e.tag() == EdgeTag::Reference)
            .filter_map(|e| self.node(&e.target))
            .find_map(|n| n.domain_property().and_then(|d| d.benchmark.as_ref()).map(|b| (n, b)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kleene_tables() {
        use Status::*;
        assert_eq!(Satisfied.and(Satisfied), Satisfied);
        assert_eq!(Satisfied.and(Unknown), Unknown);
        assert_eq!(Unknown.and(Violated), Violated);
        assert_eq!(Violated.or(Satisfied), Satisfied);
        assert_eq!(Violated.or(Unknown), Unknown);
        assert_eq!(Violated.or(Violated), Violated);
    }

    #[test]
    fn edge_json_shape() {
        let e = Edge::refinement("p", "c", "g1", RefinementMode::And);
        let v = serde_json::to_value(&e).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"kind": "refinement", "source": "p", "target": "c", "group": "g1", "mode": "and"})
        );
        let back: Edge = serde_json::from_value(v).unwrap();
        assert_eq!(back, e);

        let bad = serde_json::json!({"kind": "concern", "source": "a", "target": "b", "mode": "and"});
        assert!(serde_json::from_value::<Edge>(bad).is_err());
        let bad = serde_json::json!({"kind": "refinement", "source": "a", "target": "b"});
        assert!(serde_json::from_value::<Edge>(bad).is_err());
        let bad = serde_json::json!({"kind": "concern", "source": "a", "target": "b", "weight": 1});
        assert!(serde_json::from_value::<Edge>(bad).is_err());
    }

    #[test]
    fn node_json_shape() {
        let n = Node::new("order", "Order", NodeSpec::Asset(AssetSpec { asset_type: AssetType::Service }));
        let v = serde_json::to_value(&n).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"id": "order", "name": "Order", "kind": "asset", "asset_type": "service"})
        );
        let bad = serde_json::json!({"id": "x", "name": "X", "kind": "asset", "asset_type": "service", "color": "red"});
        assert!(serde_json::from_value::<Node>(bad).is_err());
        let bad = serde_json::json!({"id": "x", "name": "X", "kind": "gadget"});
        assert!(serde_json::from_value::<Node>(bad).is_err());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let mut g = GoalGraph::new("s");
        let n = Node::new("a", "A", NodeSpec::Agent(AgentSpec { agent_type: "tool".into() }));
        g.add_node(n.clone()).unwrap();
        assert!(g.add_node(n).is_err());
    }
}
