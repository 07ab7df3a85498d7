//! Performance attributes and timestamped sample series.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which direction of an attribute counts as better.
///
/// There is no default: every attribute must state its polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Throughput-like attributes (TPS, success rate, available instances).
    HigherIsBetter,
    /// Latency-like attributes (response time).
    LowerIsBetter,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::HigherIsBetter => Orientation::LowerIsBetter,
            Orientation::LowerIsBetter => Orientation::HigherIsBetter,
        }
    }
}

/// A performance attribute of a service or resource.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeSpec {
    pub id: String,
    pub name: String,
    pub unit: String,
    pub orientation: Orientation,
    /// Unit of performance loss, i.e. `unit` integrated over seconds.
    pub loss_unit: String,
}

impl AttributeSpec {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        unit: impl Into<String>,
        orientation: Orientation,
        loss_unit: impl Into<String>,
    ) -> Self {
        Self {
            id: id.into(),
            name: name.into(),
            unit: unit.into(),
            orientation,
            loss_unit: loss_unit.into(),
        }
    }
}

/// One observation: seconds since epoch and a value in the attribute unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub v: f64,
}

impl Sample {
    pub const fn new(t: f64, v: f64) -> Self {
        Self { t, v }
    }
}

impl From<(f64, f64)> for Sample {
    fn from((t, v): (f64, f64)) -> Self {
        Self { t, v }
    }
}

/// Samples of one attribute of one subject, strictly increasing in time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleSeries {
    subject: String,
    attribute: String,
    samples: Vec<Sample>,
}

impl SampleSeries {
    /// Builds a series, rejecting non-finite values and non-increasing timestamps.
    pub fn new(
        subject: impl Into<String>,
        attribute: impl Into<String>,
        samples: Vec<Sample>,
    ) -> Result<Self> {
        for (i, s) in samples.iter().enumerate() {
            if !s.t.is_finite() || !s.v.is_finite() {
                return Err(Error::Input(format!(
                    "sample {i} is not finite (t={}, v={})",
                    s.t, s.v
                )));
            }
            if i > 0 && s.t <= samples[i - 1].t {
                return Err(Error::Input(format!(
                    "timestamps must be strictly increasing: sample {i} at t={} follows t={}",
                    s.t,
                    samples[i - 1].t
                )));
            }
        }
        Ok(Self {
            subject: subject.into(),
            attribute: attribute.into(),
            samples,
        })
    }

    /// Convenience constructor from `(t, v)` pairs.
    pub fn from_pairs(
        subject: impl Into<String>,
        attribute: impl Into<String>,
        pairs: &[(f64, f64)],
    ) -> Result<Self> {
        Self::new(
            subject,
            attribute,
            pairs.iter().copied().map(Sample::from).collect(),
        )
    }

    pub fn subject(&self) -> &str {
        &self.subject
    }

    pub fn attribute(&self) -> &str {
        &self.attribute
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first_time(&self) -> Option<f64> {
        self.samples.first().map(|s| s.t)
    }

    pub fn last_time(&self) -> Option<f64> {
        self.samples.last().map(|s| s.t)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.v)
    }

    /// Samples with `from <= t <= to`.
    pub fn window(&self, from: f64, to: f64) -> &[Sample] {
        let lo = self.samples.partition_point(|s| s.t < from);
        let hi = self.samples.partition_point(|s| s.t <= to);
        &self.samples[lo..hi.max(lo)]
    }

    /// Uniform sampling step, if every gap matches the first one to 1e-9 relative.
    pub fn uniform_step(&self) -> Option<f64> {
        if self.samples.len() < 2 {
            return None;
        }
        let step = self.samples[1].t - self.samples[0].t;
        let tol = 1e-9 * step.abs().max(1.0);
        self.samples
            .windows(2)
            .all(|w| ((w[1].t - w[0].t) - step).abs() <= tol)
            .then_some(step)
    }
}
