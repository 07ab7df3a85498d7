use serde::Serialize;

use super::model::{GoalThresholds, Node, Status};
use crate::error::{Error, Result};
use crate::measure::{Degradation, ResilienceMetrics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    DisruptionTolerance,
    RecoveryRapidity,
    PerformanceLoss,
}

impl Metric {
    pub fn label(self) -> &'static str {
        match self {
            Metric::DisruptionTolerance => "Disruption Tolerance",
            Metric::RecoveryRapidity => "Recovery Time",
            Metric::PerformanceLoss => "Performance Loss",
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Metric::DisruptionTolerance => "DT",
            Metric::RecoveryRapidity => "RR",
            Metric::PerformanceLoss => "PL",
        }
    }
}

/// A metric that met or exceeded its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Breach {
    pub metric: Metric,
    pub measured: f64,
    pub threshold: f64,
}

/// One offending degradation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub t_s: f64,
    pub t_e: f64,
    pub unrecovered: bool,
    pub breaches: Vec<Breach>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoalEvaluation {
    pub goal: String,
    pub status: Status,
    pub violations: Vec<Violation>,
}

/// Metrics of `metrics` that are not strictly below their present thresholds.
pub fn breaches(thresholds: &GoalThresholds, metrics: &ResilienceMetrics) -> Vec<Breach> {
    [
        (Metric::DisruptionTolerance, metrics.disruption_tolerance, thresholds.dt_max),
        (Metric::RecoveryRapidity, metrics.recovery_rapidity, thresholds.rr_max),
        (Metric::PerformanceLoss, metrics.performance_loss, thresholds.pl_max),
    ]
    .into_iter()
    .filter_map(|(metric, measured, threshold)| {
        let threshold = threshold?;
        (measured >= threshold).then_some(Breach {
            metric,
            measured,
            threshold,
        })
    })
    .collect()
}

/// Checks every measured degradation against the goal's thresholds.
///
/// The goal is satisfied iff every metric of every degradation is strictly below
/// the corresponding present threshold; equality is a violation.
pub fn evaluate_goal(goal: &Node, measured: &[(Degradation, ResilienceMetrics)]) -> Result<GoalEvaluation> {
    let spec = goal
        .resilience_goal()
        .ok_or_else(|| Error::Graph(format!("`{}` is a {}, not a resilience goal", goal.id, goal.kind())))?;
    let (Some(attribute), Some(thresholds)) = (&spec.attribute, &spec.thresholds) else {
        return Err(Error::Graph(format!(
            "goal `{}` has no attribute/thresholds to evaluate",
            goal.id
        )));
    };

    let mut violations = Vec::new();
    for (deg, metrics) in measured {
        if deg.subject() != spec.asset || deg.attribute() != attribute {
            return Err(Error::AttributeMismatch {
                goal: goal.id.clone(),
                expected: format!("{}/{}", spec.asset, attribute),
                actual: format!("{}/{}", deg.subject(), deg.attribute()),
            });
        }
        let found = breaches(thresholds, metrics);
        if !found.is_empty() {
            violations.push(Violation {
                t_s: deg.start(),
                t_e: deg.end(),
                unrecovered: deg.unrecovered(),
                breaches: found,
            });
        }
    }

    Ok(GoalEvaluation {
        goal: goal.id.clone(),
        status: if violations.is_empty() {
            Status::Satisfied
        } else {
            Status::Violated
        },
        violations,
    })
}
