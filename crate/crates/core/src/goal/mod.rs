//! The resilience goal decomposition view: data model, validation, goal
//! evaluation, satisfaction propagation and edits.

mod edit;
mod evaluate;
mod model;
mod propagate;
mod validate;

pub use edit::{attach_obstacle, resolve_with_mechanism, MechanismSubtree};
pub use evaluate::{breaches, evaluate_goal, Breach, GoalEvaluation, Metric, Violation};
pub use model::*;
pub use propagate::propagate;
pub use validate::{ensure_valid, has_errors, validate_model, Diagnostic, Location, Severity};
