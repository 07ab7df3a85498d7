//! Synthetic traces with injected disruptions and their expected degradations.
//!
//! Samples are taken at `k · sample_period` for `k = 0..=floor(duration / sample_period)`.
//! A higher-is-better target reads `baseline(t) − deficit(t) + noise(t)`, a
//! lower-is-better one `baseline(t) + deficit(t) + noise(t)`, clamped at 0 for
//! non-negative attributes. Noise is uniform on the open interval `(−h, h)`.
//!
//! The ground truth is computed from the noiseless samples against the baseline,
//! so with zero noise the detector and the metrics reproduce it exactly.

use std::f64::consts::TAU;

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::benchmark::{Benchmark, Interpolation};
use crate::error::{Error, Result};
use crate::measure::deviation;
use crate::series::{Orientation, Sample, SampleSeries};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Baseline {
    Constant(f64),
    /// `base + amplitude · sin(2π t / period)`.
    Seasonal { base: f64, amplitude: f64, period: f64 },
}

impl Baseline {
    pub fn value_at(&self, t: f64) -> f64 {
        match *self {
            Baseline::Constant(value) => value,
            Baseline::Seasonal { base, amplitude, period } => base + amplitude * (TAU * t / period).sin(),
        }
    }

    fn minimum(&self) -> f64 {
        match *self {
            Baseline::Constant(value) => value,
            Baseline::Seasonal { base, amplitude, .. } => base - amplitude.abs(),
        }
    }
}

fn yes() -> bool {
    true
}

/// One simulated series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    pub subject: String,
    pub attribute: String,
    pub orientation: Orientation,
    pub baseline: Baseline,
    /// Clamp generated values at 0 (counts, rates, latencies).
    #[serde(default = "yes")]
    pub nonnegative: bool,
}

/// Deficit profile of an injection, relative to its start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// Constant deficit for the whole injection.
    Step(f64),
    /// Drops to the depth at once, then recovers linearly to 0 at the end.
    Ramp(f64),
    /// Triangle: 0 at both ends, the depth at the midpoint.
    Spike(f64),
    /// Piecewise constant `[offset, deficit]` points; the first offset is 0.
    Profile(Vec<[f64; 2]>),
}

impl Shape {
    pub fn depth(&self) -> f64 {
        match self {
            Shape::Step(d) | Shape::Ramp(d) | Shape::Spike(d) => *d,
            Shape::Profile(points) => points.iter().map(|p| p[1]).fold(0.0, f64::max),
        }
    }

    /// Deficit at `offset` seconds into an injection lasting `duration`.
    fn deficit(&self, offset: f64, duration: f64) -> f64 {
        if !(0.0..duration).contains(&offset) {
            return 0.0;
        }
        match self {
            Shape::Step(d) => *d,
            Shape::Ramp(d) => d * (1.0 - offset / duration),
            Shape::Spike(d) => {
                let half = duration / 2.0;
                d * (1.0 - (offset - half).abs() / half)
            }
            Shape::Profile(points) => points
                .iter()
                .take_while(|p| p[0] <= offset)
                .last()
                .map_or(0.0, |p| p[1]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Injection {
    pub subject: String,
    pub attribute: String,
    pub start: f64,
    pub duration: f64,
    pub shape: Shape,
}

impl Injection {
    pub fn end(&self) -> f64 {
        self.start + self.duration
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub duration: f64,
    pub sample_period: f64,
    /// Half-width of the uniform noise; 0 for noiseless traces.
    #[serde(default)]
    pub noise: f64,
    pub targets: Vec<Target>,
    #[serde(default)]
    pub injections: Vec<Injection>,
}

/// The degradation an injection is expected to produce.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedDegradation {
    /// Index into the scenario's injections.
    pub injection: usize,
    pub subject: String,
    pub attribute: String,
    pub t_s: f64,
    pub t_e: f64,
    pub unrecovered: bool,
    pub disruption_tolerance: f64,
    pub recovery_rapidity: f64,
    pub performance_loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    /// Ordered by target, then by `t_s`.
    pub degradations: Vec<ExpectedDegradation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    /// One series per target, in target order.
    pub series: Vec<SampleSeries>,
    pub ground_truth: GroundTruth,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Scenario(msg.into())
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad(format!("{name} must be finite, got {v}")))
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let s: Scenario = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        s.validate()?;
        Ok(s)
    }

    /// Sample timestamps shared by every target.
    pub fn timestamps(&self) -> Vec<f64> {
        let n = (self.duration / self.sample_period).floor() as usize;
        (0..=n).map(|k| k as f64 * self.sample_period).collect()
    }

    pub fn target(&self, subject: &str, attribute: &str) -> Option<&Target> {
        self.targets
            .iter()
            .find(|t| t.subject == subject && t.attribute == attribute)
    }

    pub fn validate(&self) -> Result<()> {
        if !(finite("sample_period", self.sample_period)? > 0.0) {
            return Err(bad("sample_period must be > 0"));
        }
        if finite("duration", self.duration)? < self.sample_period {
            return Err(bad("duration must be at least one sample_period"));
        }
        if !(finite("noise", self.noise)? >= 0.0) {
            return Err(bad("noise must be >= 0"));
        }
        for (i, t) in self.targets.iter().enumerate() {
            let name = format!("target {}/{}", t.subject, t.attribute);
            if self.targets[..i]
                .iter()
                .any(|o| o.subject == t.subject && o.attribute == t.attribute)
            {
                return Err(bad(format!("{name} is listed twice")));
            }
            match t.baseline {
                Baseline::Constant(value) => {
                    finite("baseline value", value)?;
                }
                Baseline::Seasonal { base, amplitude, period } => {
                    finite("baseline base", base)?;
                    finite("baseline amplitude", amplitude)?;
                    if !(finite("baseline period", period)? > 0.0) {
                        return Err(bad(format!("{name}: seasonal period must be > 0")));
                    }
                }
            }
            if t.nonnegative && t.baseline.minimum() < 0.0 {
                return Err(bad(format!("{name}: baseline dips below 0 but the target is non-negative")));
            }
        }
        for (i, inj) in self.injections.iter().enumerate() {
            let name = format!("injection #{i}");
            if self.target(&inj.subject, &inj.attribute).is_none() {
                return Err(bad(format!("{name} targets unknown series {}/{}", inj.subject, inj.attribute)));
            }
            if finite("start", inj.start)? < 0.0 || !(finite("duration", inj.duration)? > 0.0) {
                return Err(bad(format!("{name}: start must be >= 0 and duration > 0")));
            }
            if inj.end() > self.duration {
                return Err(bad(format!("{name} ends after the scenario")));
            }
            match &inj.shape {
                Shape::Profile(points) => {
                    if points.first().map(|p| p[0]) != Some(0.0) {
                        return Err(bad(format!("{name}: profile must start at offset 0")));
                    }
                    if points.windows(2).any(|w| !(w[1][0] > w[0][0])) {
                        return Err(bad(format!("{name}: profile offsets must increase")));
                    }
                    if points.iter().any(|p| !(p[1].is_finite() && p[1] > 0.0) || !(p[0] < inj.duration)) {
                        return Err(bad(format!("{name}: profile deficits must be > 0 within the duration")));
                    }
                }
                shape => {
                    if !(finite("depth", shape.depth())? > 0.0) {
                        return Err(bad(format!("{name}: depth must be > 0")));
                    }
                }
            }
            // Injections on one series must be separated by at least one sample.
            for (j, other) in self.injections[..i].iter().enumerate() {
                if other.subject != inj.subject || other.attribute != inj.attribute {
                    continue;
                }
                let (a, b) = if other.start <= inj.start { (other, inj) } else { (inj, other) };
                if b.start < a.end() + self.sample_period {
                    return Err(bad(format!(
                        "injections #{j} and #{i} on {}/{} overlap or are less than one sample_period apart",
                        inj.subject, inj.attribute
                    )));
                }
            }
        }
        Ok(())
    }

    fn deficit(&self, target: &Target, t: f64) -> f64 {
        self.injections
            .iter()
            .filter(|i| i.subject == target.subject && i.attribute == target.attribute)
            .map(|i| i.shape.deficit(t - i.start, i.duration))
            .sum()
    }

    fn value(&self, target: &Target, t: f64, noise: f64) -> f64 {
        let base = target.baseline.value_at(t);
        let d = self.deficit(target, t);
        let v = match target.orientation {
            Orientation::HigherIsBetter => base - d + noise,
            Orientation::LowerIsBetter => base + d + noise,
        };
        if target.nonnegative {
            v.max(0.0)
        } else {
            v
        }
    }

    /// The target's noiseless baseline on the sample grid, usable as its benchmark.
    pub fn baseline_benchmark(&self, target: &Target) -> Result<Benchmark> {
        match target.baseline {
            Baseline::Constant(value) => Benchmark::constant(value),
            Baseline::Seasonal { .. } => {
                let samples = self
                    .timestamps()
                    .into_iter()
                    .map(|t| Sample::new(t, target.baseline.value_at(t)))
                    .collect();
                Benchmark::lookup(
                    SampleSeries::new(&target.subject, &target.attribute, samples)?,
                    Interpolation::StepBefore,
                )
            }
        }
    }
}

/// Generates one series per target plus the expected degradations.
/// The same scenario and seed always give identical output.
pub fn generate(scenario: &Scenario, seed: u64) -> Result<Generated> {
    scenario.validate()?;
    let times = scenario.timestamps();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut series = Vec::with_capacity(scenario.targets.len());
    let mut expected = Vec::new();

    for target in &scenario.targets {
        let mut samples = Vec::with_capacity(times.len());
        for &t in &times {
            let noise = if scenario.noise > 0.0 {
                let u: f64 = rng.sample(Open01);
                scenario.noise * (2.0 * u - 1.0)
            } else {
                0.0
            };
            samples.push(Sample::new(t, scenario.value(target, t, noise)));
        }
        series.push(SampleSeries::new(&target.subject, &target.attribute, samples)?);
        expected.extend(expected_for(scenario, target, &times)?);
    }

    Ok(Generated {
        series,
        ground_truth: GroundTruth {
            seed,
            degradations: expected,
        },
    })
}

fn expected_for(scenario: &Scenario, target: &Target, times: &[f64]) -> Result<Vec<ExpectedDegradation>> {
    // Realized (post-clamp) deficit of the noiseless trace at every sample.
    let mut deficit = Vec::with_capacity(times.len());
    for &t in times {
        let v = scenario.value(target, t, 0.0);
        deficit.push(deviation(v, target.baseline.value_at(t), target.orientation)?);
    }

    let mut out = Vec::new();
    for (idx, inj) in scenario.injections.iter().enumerate() {
        if inj.subject != target.subject || inj.attribute != target.attribute {
            continue;
        }
        // Samples inside the injection window with a positive deficit.
        let first = times.partition_point(|&t| t < inj.start);
        let mut k = first;
        while k < times.len() && times[k] < inj.end() {
            if deficit[k] <= 0.0 {
                k += 1;
                continue;
            }
            let s = k;
            while k < times.len() && deficit[k] > 0.0 {
                k += 1;
            }
            let (e, unrecovered) = if k < times.len() { (k, false) } else { (times.len() - 1, true) };
            let mut dt = 0.0f64;
            let mut pl = 0.0;
            for i in s..=e {
                dt = dt.max(deficit[i]);
                if i < e {
                    pl += deficit[i].max(0.0) * (times[i + 1] - times[i]);
                }
            }
            out.push(ExpectedDegradation {
                injection: idx,
                subject: target.subject.clone(),
                attribute: target.attribute.clone(),
                t_s: times[s],
                t_e: times[e],
                unrecovered,
                disruption_tolerance: dt,
                recovery_rapidity: times[e] - times[s],
                performance_loss: pl,
            });
        }
    }
    out.sort_by(|a, b| a.t_s.total_cmp(&b.t_s));
    Ok(out)
}
