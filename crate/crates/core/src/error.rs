use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the measurement, modelling and export layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A value or series failed the ingestion checks (non-finite, unordered, empty).
    #[error("invalid input: {0}")]
    Input(String),

    /// A benchmark could not produce a value for the requested timestamp.
    #[error("benchmark not evaluable at t={timestamp}: {reason}")]
    Evaluation { timestamp: f64, reason: String },

    /// Malformed trace rows. Each entry carries the 1-based line number.
    #[error("malformed trace: {}", format_rows(.0))]
    Trace(Vec<RowError>),

    /// Forecast fitting preconditions were not met.
    #[error("cannot fit forecast model: {0}")]
    Fit(String),

    /// Aggregation over container snapshots is undefined (e.g. zero total TPS).
    #[error("undefined aggregate: {0}")]
    UndefinedAggregate(String),

    /// A goal-graph operation referenced a missing node or a node of the wrong kind.
    #[error("goal graph: {0}")]
    Graph(String),

    /// The metrics handed to a goal belong to a different subject or attribute.
    #[error("attribute mismatch: goal `{goal}` expects {expected}, got {actual}")]
    AttributeMismatch {
        goal: String,
        expected: String,
        actual: String,
    },

    /// Refinement cycle discovered during propagation.
    #[error("refinement cycle through node `{0}`")]
    Cycle(String),

    /// The graph has validation errors and the requested operation needs a valid one.
    #[error("model has {count} validation error(s); first: {first}")]
    Invalid { count: usize, first: String },

    /// A model, scenario or fitted-benchmark file does not match its schema.
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },

    /// Scenario description is inconsistent.
    #[error("scenario: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// One rejected row of a trace file.
#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

impl std::fmt::Display for RowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

fn format_rows(rows: &[RowError]) -> String {
    let shown: Vec<String> = rows.iter().take(5).map(ToString::to_string).collect();
    let mut out = shown.join("; ");
    if rows.len() > 5 {
        out.push_str(&format!("; ... and {} more", rows.len() - 5));
    }
    out
}
