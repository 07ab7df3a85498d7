//! Performance benchmarks: the baseline a series is judged against.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forecast::ForecastModel;
use crate::series::SampleSeries;
use crate::trace::{read_trace_file, IngestOptions};

/// How a lookup benchmark is read between its points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// Hold the latest point at or before `t`; hold the last point past the end.
    #[default]
    StepBefore,
    /// Linear between neighbours; hold the last point past the end.
    Linear,
}

/// Baseline value `P_B(t)` for one attribute of one subject.
#[derive(Debug, Clone, PartialEq)]
pub enum Benchmark {
    Constant(f64),
    Lookup {
        series: SampleSeries,
        interpolation: Interpolation,
    },
    Model(Box<ForecastModel>),
}

impl Benchmark {
    pub fn constant(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Benchmark::Constant(value))
        } else {
            Err(Error::Input(format!("constant benchmark must be finite, got {value}")))
        }
    }

    pub fn lookup(series: SampleSeries, interpolation: Interpolation) -> Result<Self> {
        if series.is_empty() {
            return Err(Error::Input("lookup benchmark series is empty".into()));
        }
        Ok(Benchmark::Lookup {
            series,
            interpolation,
        })
    }

    pub fn model(model: ForecastModel) -> Self {
        Benchmark::Model(Box::new(model))
    }

    /// Evaluates the benchmark at `t`.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        match self {
            Benchmark::Constant(v) => Ok(*v),
            Benchmark::Lookup {
                series,
                interpolation,
            } => lookup(series, *interpolation, t),
            Benchmark::Model(m) => m.value_at(t),
        }
    }
}

/// Where a benchmark domain property gets its values, as written in the model file.
///
/// Relative paths are resolved against a base directory (the model file's
/// directory unless overridden).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BenchmarkSource {
    Constant(f64),
    /// Path to a fitted forecast model file.
    Model(PathBuf),
    Lookup(LookupSource),
}

/// One series of a trace file used as a lookup table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LookupSource {
    pub path: PathBuf,
    pub subject: String,
    pub attribute: String,
    #[serde(default)]
    pub interpolation: Interpolation,
}

impl BenchmarkSource {
    pub fn resolve(&self, base_dir: &Path) -> Result<Benchmark> {
        match self {
            BenchmarkSource::Constant(v) => Benchmark::constant(*v),
            BenchmarkSource::Model(path) => {
                let path = base_dir.join(path);
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    Error::Input(format!("cannot read benchmark model {}: {e}", path.display()))
                })?;
                Ok(Benchmark::model(ForecastModel::from_json(&text)?))
            }
            BenchmarkSource::Lookup(src) => {
                let path = base_dir.join(&src.path);
                let trace = read_trace_file(&path, IngestOptions::default())?;
                let series = trace.get(&src.subject, &src.attribute).ok_or_else(|| {
                    Error::Input(format!(
                        "{} has no series {}/{}",
                        path.display(),
                        src.subject,
                        src.attribute
                    ))
                })?;
                Benchmark::lookup(series.clone(), src.interpolation)
            }
        }
    }
}

fn lookup(series: &SampleSeries, interpolation: Interpolation, t: f64) -> Result<f64> {
    let samples = series.samples();
    let idx = samples.partition_point(|s| s.t <= t);
    if idx == 0 {
        return Err(Error::Evaluation {
            timestamp: t,
            reason: format!(
                "before the first lookup point at {}",
                samples.first().map_or(f64::NAN, |s| s.t)
            ),
        });
    }
    let before = samples[idx - 1];
    match (interpolation, samples.get(idx)) {
        (Interpolation::Linear, Some(after)) if before.t < t => {
            let w = (t - before.t) / (after.t - before.t);
            Ok(before.v + w * (after.v - before.v))
        }
        _ => Ok(before.v),
    }
}
