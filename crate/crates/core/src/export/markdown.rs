//! Textual requirement specification, one section per node.

use std::fmt::Write as _;

use super::model_file::canonical;
use super::require_valid;
use crate::benchmark::BenchmarkSource;
use crate::error::Result;
use crate::goal::{EdgeKind, GoalGraph, Node, NodeKind, NodeSpec};

fn num(v: f64) -> String {
    format!("{v}")
}

fn with_unit(v: f64, unit: &str) -> String {
    match unit {
        "" => num(v),
        "%" => format!("{}%", num(v)),
        u => format!("{} {u}", num(v)),
    }
}

fn field(out: &mut String, name: &str, value: impl AsRef<str>) {
    writeln!(out, "- {name}: {}", value.as_ref()).unwrap();
}

/// Renders the graph as Markdown: a title, then one `##` section per node (sorted
/// by id) listing its specification fields and, as backticked bullets, the edges
/// leaving it. Absent optional fields are left out.
pub fn export_markdown(graph: &GoalGraph) -> Result<String> {
    require_valid(graph)?;
    let g = canonical(graph);
    let mut out = String::new();
    writeln!(out, "# {} resilience requirements", g.metadata.system).unwrap();
    if let Some(it) = &g.metadata.iteration {
        writeln!(out, "\nIteration: {it}").unwrap();
    }

    for n in &g.nodes {
        writeln!(out, "\n## {} (`{}`)\n", n.name, n.id).unwrap();
        field(&mut out, "Kind", n.kind().label());
        node_fields(&mut out, &g, n);
        let name_of = |id: &str| g.node(id).map_or(id.to_string(), |t| t.name.clone());
        for e in g.edges_from(&n.id) {
            match &e.kind {
                EdgeKind::Refinement { group, mode } => writeln!(
                    out,
                    "- `refinement` ({} group `{group}`) → `{}` {}",
                    mode.label(),
                    e.target,
                    name_of(&e.target)
                ),
                _ => writeln!(out, "- `{}` → `{}` {}", e.tag(), e.target, name_of(&e.target)),
            }
            .unwrap();
        }
    }
    Ok(out)
}

fn node_fields(out: &mut String, g: &GoalGraph, n: &Node) {
    match &n.spec {
        NodeSpec::ServiceResilienceGoal(spec) | NodeSpec::ResourceResilienceGoal(spec) => {
            let role = if n.kind() == NodeKind::ServiceResilienceGoal {
                "Service"
            } else {
                "Resource"
            };
            field(out, role, format!("`{}`", spec.asset));
            if let Some(attr_id) = &spec.attribute {
                let attr = g.attribute(attr_id);
                let label = attr.map_or(attr_id.clone(), |a| format!("{} (`{}`)", a.name, a.id));
                field(out, "Performance Attribute", label);
                if let Some(th) = &spec.thresholds {
                    let (unit, loss) = attr.map_or(("", ""), |a| (a.unit.as_str(), a.loss_unit.as_str()));
                    if let Some(v) = th.dt_max {
                        field(out, "Disruption Tolerance", with_unit(v, unit));
                    }
                    if let Some(v) = th.rr_max {
                        field(out, "Recovery Time", with_unit(v, "s"));
                    }
                    if let Some(v) = th.pl_max {
                        field(out, "Performance Loss", with_unit(v, loss));
                    }
                }
            }
            if let Some(d) = &spec.description {
                field(out, "Description", d);
            }
        }
        NodeSpec::MechanismGoal(d) | NodeSpec::SystemBehavior(d) => {
            if let Some(d) = &d.description {
                field(out, "Description", d);
            }
        }
        NodeSpec::Obstacle(o) => {
            field(out, "Event", &o.event);
            if o.diagnosed {
                field(out, "Diagnosed", "yes");
            }
            if let Some(d) = &o.disruption {
                field(out, "Disruption Object", format!("`{}`", d.object));
                field(out, "Disruption Event", &d.event_type);
                if let Some(t) = d.occurred_at {
                    field(out, "Occurred At", num(t));
                }
                for ev in &d.evidence {
                    field(out, "Evidence", ev);
                }
            }
            if let Some(by) = &o.superseded_by {
                field(out, "Superseded By", format!("`{by}`"));
            }
        }
        NodeSpec::Asset(a) => field(out, "Asset Type", a.asset_type.label()),
        NodeSpec::Agent(a) => field(out, "Agent Type", &a.agent_type),
        NodeSpec::DomainProperty(d) => {
            field(out, "Description", &d.description);
            for r in &d.references {
                field(out, "Reference", r);
            }
            match &d.benchmark {
                Some(BenchmarkSource::Constant(v)) => field(out, "Benchmark", format!("constant {}", num(*v))),
                Some(BenchmarkSource::Model(p)) => field(out, "Benchmark", format!("forecast model {}", p.display())),
                Some(BenchmarkSource::Lookup(l)) => field(
                    out,
                    "Benchmark",
                    format!("lookup {}/{} in {}", l.subject, l.attribute, l.path.display()),
                ),
                None => {}
            }
        }
    }
}
