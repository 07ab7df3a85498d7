//! End-to-end evaluation of a goal model against a trace.
//!
//! For every measured goal: look up its series (subject = goal asset, attribute =
//! goal attribute), detect degradations against its benchmark, measure them and
//! check the thresholds. Goal statuses are then propagated through the
//! refinements. Goals whose series is missing from the trace are `unknown`.
//! System behaviours of resilience mechanisms are taken as satisfied (the
//! mechanism is deployed) unless the caller states otherwise.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::benchmark::Benchmark;
use crate::error::{Error, Result};
use crate::goal::{ensure_valid, evaluate_goal, propagate, GoalGraph, NodeKind, Status, Violation};
use crate::measure::{detect_degradations, measure, DetectionConfig};
use crate::trace::Trace;

/// Resolves the benchmark of every measured goal. Relative paths in benchmark
/// sources are taken from `base_dir`.
pub fn resolve_benchmarks(graph: &GoalGraph, base_dir: &Path) -> Result<BTreeMap<String, Benchmark>> {
    let mut by_property: BTreeMap<&str, Benchmark> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for goal in graph.measured_goals() {
        let (prop, source) = graph.benchmark_of(&goal.id).ok_or_else(|| {
            Error::Graph(format!("goal `{}` has no benchmark domain property", goal.id))
        })?;
        if !by_property.contains_key(prop.id.as_str()) {
            by_property.insert(&prop.id, source.resolve(base_dir)?);
        }
        out.insert(goal.id.clone(), by_property[prop.id.as_str()].clone());
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasuredDegradation {
    pub t_s: f64,
    pub t_e: f64,
    pub unrecovered: bool,
    pub disruption_tolerance: f64,
    pub recovery_rapidity: f64,
    pub performance_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoalReport {
    pub goal: String,
    pub name: String,
    pub subject: String,
    pub attribute: String,
    pub status: Status,
    /// False when the trace has no series for this goal.
    pub measured: bool,
    pub degradations: Vec<MeasuredDegradation>,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SeriesRef {
    pub subject: String,
    pub attribute: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub goals: usize,
    pub satisfied: usize,
    pub violated: usize,
    pub unknown: usize,
    pub degradations: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub system: String,
    /// Measured goals, sorted by id.
    pub goals: Vec<GoalReport>,
    /// Status of every goal-kind node (goals, mechanisms, behaviours) after propagation.
    pub propagated: BTreeMap<String, Status>,
    /// Series the model needs but the trace lacks.
    pub missing_series: Vec<SeriesRef>,
    /// Trace series no goal refers to.
    pub unmatched_series: Vec<SeriesRef>,
    pub summary: Summary,
    pub exit_code: i32,
}

/// `behaviors` overrides the status of individual system behaviours; the rest
/// count as satisfied.
pub fn evaluate_model(
    graph: &GoalGraph,
    trace: &Trace,
    benchmarks: &BTreeMap<String, Benchmark>,
    config: &DetectionConfig,
    behaviors: &BTreeMap<String, Status>,
) -> Result<RunReport> {
    ensure_valid(graph)?;
    let mut goals = Vec::new();
    let mut terminal = BTreeMap::new();
    for n in graph.nodes.iter().filter(|n| n.kind() == NodeKind::SystemBehavior) {
        terminal.insert(n.id.clone(), behaviors.get(&n.id).copied().unwrap_or(Status::Satisfied));
    }
    if let Some(id) = behaviors.keys().find(|id| !terminal.contains_key(*id)) {
        return Err(Error::Graph(format!("`{id}` is not a system behavior")));
    }
    let mut needed = BTreeSet::new();
    let mut missing = BTreeSet::new();

    for node in graph.measured_goals() {
        let spec = node.resilience_goal().expect("measured goal");
        let attr_id = spec.attribute.as_deref().expect("measured goal");
        let attr = graph
            .attribute(attr_id)
            .ok_or_else(|| Error::Graph(format!("attribute `{attr_id}` is not declared")))?;
        let benchmark = benchmarks
            .get(&node.id)
            .ok_or_else(|| Error::Graph(format!("no benchmark resolved for goal `{}`", node.id)))?;
        let key = SeriesRef {
            subject: spec.asset.clone(),
            attribute: attr_id.to_string(),
        };
        needed.insert(key.clone());

        let mut report = GoalReport {
            goal: node.id.clone(),
            name: node.name.clone(),
            subject: key.subject.clone(),
            attribute: key.attribute.clone(),
            status: Status::Unknown,
            measured: false,
            degradations: Vec::new(),
            violations: Vec::new(),
        };
        if let Some(series) = trace.get(&key.subject, &key.attribute) {
            let mut measured = Vec::new();
            for deg in detect_degradations(series, benchmark, attr, config)? {
                let m = measure(&deg, benchmark, attr)?;
                report.degradations.push(MeasuredDegradation {
                    t_s: deg.start(),
                    t_e: deg.end(),
                    unrecovered: deg.unrecovered(),
                    disruption_tolerance: m.disruption_tolerance,
                    recovery_rapidity: m.recovery_rapidity,
                    performance_loss: m.performance_loss,
                });
                measured.push((deg, m));
            }
            let ev = evaluate_goal(node, &measured)?;
            report.status = ev.status;
            report.violations = ev.violations;
            report.measured = true;
        } else {
            missing.insert(key);
        }
        terminal.insert(node.id.clone(), report.status);
        goals.push(report);
    }

    let propagated = propagate(graph, &terminal)?;
    let unmatched = trace
        .series
        .iter()
        .map(|s| SeriesRef {
            subject: s.subject().to_string(),
            attribute: s.attribute().to_string(),
        })
        .filter(|k| !needed.contains(k))
        .collect();

    let mut summary = Summary {
        goals: propagated.len(),
        ..Default::default()
    };
    for s in propagated.values() {
        match s {
            Status::Satisfied => summary.satisfied += 1,
            Status::Violated => summary.violated += 1,
            Status::Unknown => summary.unknown += 1,
        }
    }
    for g in &goals {
        summary.degradations += g.degradations.len();
        summary.violations += g.violations.len();
    }

    Ok(RunReport {
        system: graph.metadata.system.clone(),
        goals,
        propagated,
        missing_series: missing.into_iter().collect(),
        unmatched_series: unmatched,
        exit_code: if summary.violations == 0 { 0 } else { 1 },
        summary,
    })
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(&serde_json::to_value(self)?)?;
        text.push('\n');
        Ok(text)
    }

    /// Human-readable report. `color` adds ANSI colours to statuses.
    pub fn to_text(&self, color: bool) -> String {
        let paint = |s: Status| {
            let (code, text) = match s {
                Status::Satisfied => ("32", "SATISFIED"),
                Status::Violated => ("31", "VIOLATED"),
                Status::Unknown => ("33", "UNKNOWN"),
            };
            if color {
                format!("\x1b[{code}m{text}\x1b[0m")
            } else {
                text.to_string()
            }
        };
        let mut out = String::new();
        writeln!(out, "system: {}", self.system).unwrap();
        writeln!(out, "\nmeasured goals:").unwrap();
        for g in &self.goals {
            writeln!(
                out,
                "  {:<9} {} ({}/{}){}",
                paint(g.status),
                g.goal,
                g.subject,
                g.attribute,
                if g.measured { "" } else { " - no series in trace" }
            )
            .unwrap();
            for v in &g.violations {
                let breaches: Vec<String> = v
                    .breaches
                    .iter()
                    .map(|b| format!("{} {} >= {}", b.metric.short(), b.measured, b.threshold))
                    .collect();
                writeln!(
                    out,
                    "    violation [{}, {}]{}: {}",
                    v.t_s,
                    v.t_e,
                    if v.unrecovered { " unrecovered" } else { "" },
                    breaches.join(", ")
                )
                .unwrap();
            }
        }
        writeln!(out, "\npropagated:").unwrap();
        for (id, s) in &self.propagated {
            writeln!(out, "  {:<9} {id}", paint(*s)).unwrap();
        }
        if !self.missing_series.is_empty() {
            writeln!(out, "\nmissing series:").unwrap();
            for s in &self.missing_series {
                writeln!(out, "  {}/{}", s.subject, s.attribute).unwrap();
            }
        }
        if !self.unmatched_series.is_empty() {
            writeln!(out, "\nunmatched series:").unwrap();
            for s in &self.unmatched_series {
                writeln!(out, "  {}/{}", s.subject, s.attribute).unwrap();
            }
        }
        let s = &self.summary;
        writeln!(
            out,
            "\nsummary: {} goals, {} satisfied, {} violated, {} unknown; {} degradations, {} violations",
            s.goals, s.satisfied, s.violated, s.unknown, s.degradations, s.violations
        )
        .unwrap();
        out
    }
}
