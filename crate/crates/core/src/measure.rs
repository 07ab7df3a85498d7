//! Degradation detection and the three resilience metrics.
//!
//! A degradation is a maximal run of samples whose orientation-adjusted deviation
//! from the benchmark is positive. Its start `t_s` is the first violating sample
//! and its end `t_e` is the first non-violating sample after the run (the
//! recovery point). A run that lasts to the end of the series is reported as
//! `unrecovered` with `t_e` set to the last timestamp.
//!
//! For a degradation with samples `(t_i, v_i)` and benchmark `B`:
//!
//! ```text
//! DT = max_i dev(v_i, B(t_i))
//! RR = t_e − t_s
//! PL = Σ_i max(dev(v_i, B(t_i)), 0) · (t_{i+1} − t_i)     (zero-order hold)
//! ```

use serde::{Deserialize, Serialize};

use crate::benchmark::Benchmark;
use crate::error::{Error, Result};
use crate::series::{AttributeSpec, Orientation, Sample, SampleSeries};

/// Orientation-adjusted shortfall of `sample` against `benchmark`. Positive means degraded.
pub fn deviation(sample: f64, benchmark: f64, orientation: Orientation) -> Result<f64> {
    if !sample.is_finite() || !benchmark.is_finite() {
        return Err(Error::Input(format!(
            "deviation needs finite values (sample={sample}, benchmark={benchmark})"
        )));
    }
    Ok(match orientation {
        Orientation::HigherIsBetter => benchmark - sample,
        Orientation::LowerIsBetter => sample - benchmark,
    })
}

/// Debouncing knobs. Both default to 0, which reports every violating run as is.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DetectionConfig {
    /// Degradations with `t_e − t_s` below this are dropped (after merging).
    pub min_duration: f64,
    /// Two runs separated by a non-violating gap of at most this many seconds are merged.
    pub merge_gap: f64,
}

impl DetectionConfig {
    fn check(&self) -> Result<()> {
        for (name, v) in [("min_duration", self.min_duration), ("merge_gap", self.merge_gap)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Input(format!("{name} must be a finite value >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Event that caused a degradation: affected object plus event type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Disruption {
    pub object: String,
    pub event_type: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub occurred_at: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub evidence: Vec<String>,
}

/// A detected degradation interval with the samples inside `[t_s, t_e]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Degradation {
    subject: String,
    attribute: String,
    samples: Vec<Sample>,
    unrecovered: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    cause: Option<Disruption>,
}

impl Degradation {
    /// Builds a degradation from the samples spanning `[t_s, t_e]`.
    ///
    /// Recovered degradations need at least two samples so that `t_e > t_s`.
    pub fn new(
        subject: impl Into<String>,
        attribute: impl Into<String>,
        samples: Vec<Sample>,
        unrecovered: bool,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Input("degradation has no samples".into()));
        }
        if samples.windows(2).any(|w| !(w[1].t > w[0].t)) {
            return Err(Error::Input("degradation samples must be strictly increasing".into()));
        }
        if samples.iter().any(|s| !s.v.is_finite() || !s.t.is_finite()) {
            return Err(Error::Input("degradation samples must be finite".into()));
        }
        if !unrecovered && samples.len() < 2 {
            return Err(Error::Input("a recovered degradation needs t_e > t_s".into()));
        }
        Ok(Self {
            subject: subject.into(),
            attribute: attribute.into(),
            samples,
            unrecovered,
            cause: None,
        })
    }

    pub fn with_cause(mut self, cause: Disruption) -> Self {
        self.cause = Some(cause);
        self
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

    pub fn start(&self) -> f64 {
        self.samples[0].t
    }

    pub fn end(&self) -> f64 {
        self.samples[self.samples.len() - 1].t
    }

    pub fn unrecovered(&self) -> bool {
        self.unrecovered
    }

    pub fn cause(&self) -> Option<&Disruption> {
        self.cause.as_ref()
    }

    /// Splits at the interior sample with timestamp `t`; the sample belongs to both parts.
    pub fn split_at(&self, t: f64) -> Option<(Degradation, Degradation)> {
        let idx = self.samples.iter().position(|s| s.t == t)?;
        if idx == 0 || idx + 1 == self.samples.len() {
            return None;
        }
        let left = Degradation {
            samples: self.samples[..=idx].to_vec(),
            unrecovered: false,
            ..self.clone()
        };
        let right = Degradation {
            samples: self.samples[idx..].to_vec(),
            ..self.clone()
        };
        Some((left, right))
    }
}

/// Disruption Tolerance, Recovery Rapidity and Performance Loss of one degradation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResilienceMetrics {
    /// Attribute unit.
    pub disruption_tolerance: f64,
    /// Seconds.
    pub recovery_rapidity: f64,
    /// Attribute loss unit.
    pub performance_loss: f64,
    /// The series ended before the service recovered; RR is the elapsed span so far.
    #[serde(default)]
    pub unrecovered: bool,
}

fn check_attribute(series_attr: &str, attr: &AttributeSpec) -> Result<()> {
    if series_attr != attr.id {
        return Err(Error::Input(format!(
            "series attribute `{series_attr}` does not match attribute spec `{}`",
            attr.id
        )));
    }
    Ok(())
}

/// Finds all degradations of `series` against `benchmark`.
pub fn detect_degradations(
    series: &SampleSeries,
    benchmark: &Benchmark,
    attr: &AttributeSpec,
    config: &DetectionConfig,
) -> Result<Vec<Degradation>> {
    config.check()?;
    check_attribute(series.attribute(), attr)?;
    let samples = series.samples();
    if samples.is_empty() {
        return Err(Error::Input(format!(
            "series {}/{} is empty",
            series.subject(),
            series.attribute()
        )));
    }

    let mut violating = Vec::with_capacity(samples.len());
    for s in samples {
        let b = benchmark.value_at(s.t)?;
        violating.push(deviation(s.v, b, attr.orientation)? > 0.0);
    }

    // (first violating index, last index of the interval, unrecovered)
    let mut runs: Vec<(usize, usize, bool)> = Vec::new();
    let mut start = None;
    for (i, &bad) in violating.iter().enumerate() {
        match (start, bad) {
            (None, true) => start = Some(i),
            (Some(s), false) => {
                runs.push((s, i, false));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, samples.len() - 1, true));
    }

    let mut merged: Vec<(usize, usize, bool)> = Vec::with_capacity(runs.len());
    for run in runs {
        match merged.last_mut() {
            Some(prev) if !prev.2 && samples[run.0].t - samples[prev.1].t <= config.merge_gap => {
                prev.1 = run.1;
                prev.2 = run.2;
            }
            _ => merged.push(run),
        }
    }

    merged
        .into_iter()
        .filter(|&(s, e, _)| samples[e].t - samples[s].t >= config.min_duration)
        .map(|(s, e, unrecovered)| Degradation {
            subject: series.subject().to_string(),
            attribute: series.attribute().to_string(),
            samples: samples[s..=e].to_vec(),
            unrecovered,
            cause: None,
        })
        .map(Ok)
        .collect()
}

fn deviations<'a>(
    deg: &'a Degradation,
    benchmark: &'a Benchmark,
    attr: &'a AttributeSpec,
) -> impl Iterator<Item = Result<f64>> + 'a {
    deg.samples
        .iter()
        .map(move |s| deviation(s.v, benchmark.value_at(s.t)?, attr.orientation))
}

/// Maximum deviation inside `[t_s, t_e]`, floored at 0.
pub fn disruption_tolerance(
    deg: &Degradation,
    benchmark: &Benchmark,
    attr: &AttributeSpec,
) -> Result<f64> {
    check_attribute(&deg.attribute, attr)?;
    let mut max = 0.0f64;
    for d in deviations(deg, benchmark, attr) {
        max = max.max(d?);
    }
    Ok(max)
}

pub fn recovery_rapidity(deg: &Degradation) -> f64 {
    deg.end() - deg.start()
}

/// Zero-order-hold integral of the positive deviation over `[t_s, t_e]`.
pub fn performance_loss(
    deg: &Degradation,
    benchmark: &Benchmark,
    attr: &AttributeSpec,
) -> Result<f64> {
    check_attribute(&deg.attribute, attr)?;
    let mut loss = 0.0;
    for (s, next) in deg.samples.iter().zip(&deg.samples[1..]) {
        let d = deviation(s.v, benchmark.value_at(s.t)?, attr.orientation)?;
        loss += d.max(0.0) * (next.t - s.t);
    }
    Ok(loss)
}

pub fn measure(
    deg: &Degradation,
    benchmark: &Benchmark,
    attr: &AttributeSpec,
) -> Result<ResilienceMetrics> {
    Ok(ResilienceMetrics {
        disruption_tolerance: disruption_tolerance(deg, benchmark, attr)?,
        recovery_rapidity: recovery_rapidity(deg),
        performance_loss: performance_loss(deg, benchmark, attr)?,
        unrecovered: deg.unrecovered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tps() -> AttributeSpec {
        AttributeSpec::new("tps", "TPS", "requests/s", Orientation::HigherIsBetter, "requests")
    }

    fn rt() -> AttributeSpec {
        AttributeSpec::new("rt", "Response Time", "s", Orientation::LowerIsBetter, "s·s")
    }

    fn paper_series() -> SampleSeries {
        SampleSeries::from_pairs(
            "svc",
            "tps",
            &[(0.0, 50.0), (5.0, 35.0), (10.0, 25.0), (15.0, 50.0), (20.0, 50.0)],
        )
        .unwrap()
    }

    #[test]
    fn deviation_examples() {
        assert_eq!(deviation(25.0, 50.0, Orientation::HigherIsBetter).unwrap(), 25.0);
        assert_eq!(deviation(50.0, 50.0, Orientation::HigherIsBetter).unwrap(), 0.0);
        assert_eq!(deviation(12.0, 3.0, Orientation::LowerIsBetter).unwrap(), 9.0);
        assert!(deviation(f64::NAN, 3.0, Orientation::LowerIsBetter).is_err());
        assert!(deviation(1.0, f64::INFINITY, Orientation::LowerIsBetter).is_err());
    }

    #[test]
    fn worked_tps_example() {
        let bench = Benchmark::Constant(50.0);
        let degs =
            detect_degradations(&paper_series(), &bench, &tps(), &DetectionConfig::default())
                .unwrap();
        assert_eq!(degs.len(), 1);
        let d = &degs[0];
        assert_eq!((d.start(), d.end()), (5.0, 15.0));
        assert!(!d.unrecovered());
        let m = measure(d, &bench, &tps()).unwrap();
        assert_eq!(m.disruption_tolerance, 25.0);
        assert_eq!(m.recovery_rapidity, 10.0);
        assert_eq!(m.performance_loss, 200.0);
    }

    #[test]
    fn no_deviation_no_degradation() {
        let s = SampleSeries::from_pairs("svc", "tps", &[(0.0, 50.0), (1.0, 50.0), (2.0, 51.0)])
            .unwrap();
        let degs =
            detect_degradations(&s, &Benchmark::Constant(50.0), &tps(), &DetectionConfig::default())
                .unwrap();
        assert!(degs.is_empty());
    }

    #[test]
    fn lower_is_better_response_time() {
        let s = SampleSeries::from_pairs("svc", "rt", &[(0.0, 2.0), (1.0, 12.0), (2.0, 3.0)])
            .unwrap();
        let bench = Benchmark::Constant(3.0);
        let degs = detect_degradations(&s, &bench, &rt(), &DetectionConfig::default()).unwrap();
        assert_eq!(degs.len(), 1);
        let m = measure(&degs[0], &bench, &rt()).unwrap();
        assert_eq!(m.disruption_tolerance, 9.0);
        assert_eq!(m.recovery_rapidity, 1.0);
        assert_eq!(m.performance_loss, 9.0);
    }

    #[test]
    fn unrecovered_tail() {
        let s = SampleSeries::from_pairs("svc", "tps", &[(0.0, 50.0), (5.0, 40.0), (10.0, 30.0)])
            .unwrap();
        let bench = Benchmark::Constant(50.0);
        let degs = detect_degradations(&s, &bench, &tps(), &DetectionConfig::default()).unwrap();
        assert_eq!(degs.len(), 1);
        assert!(degs[0].unrecovered());
        assert_eq!((degs[0].start(), degs[0].end()), (5.0, 10.0));
        let m = measure(&degs[0], &bench, &tps()).unwrap();
        assert!(m.unrecovered);
        assert_eq!(m.recovery_rapidity, 5.0);
        assert_eq!(m.performance_loss, 50.0);
        assert_eq!(m.disruption_tolerance, 20.0);
    }

    #[test]
    fn merge_gap_and_min_duration() {
        // runs at [1,2) and [3,4) separated by a one-second healthy gap (t=2 .. t=3)
        let s = SampleSeries::from_pairs(
            "svc",
            "tps",
            &[(0.0, 50.0), (1.0, 40.0), (2.0, 50.0), (3.0, 40.0), (4.0, 50.0), (9.0, 40.0), (9.5, 50.0)],
        )
        .unwrap();
        let bench = Benchmark::Constant(50.0);
        let plain = detect_degradations(&s, &bench, &tps(), &DetectionConfig::default()).unwrap();
        assert_eq!(plain.len(), 3);

        let merged = detect_degradations(
            &s,
            &bench,
            &tps(),
            &DetectionConfig {
                min_duration: 0.0,
                merge_gap: 1.0,
            },
        )
        .unwrap();
        assert_eq!(merged.len(), 2);
        assert_eq!((merged[0].start(), merged[0].end()), (1.0, 4.0));
        let m = measure(&merged[0], &bench, &tps()).unwrap();
        assert_eq!(m.performance_loss, 20.0);

        let debounced = detect_degradations(
            &s,
            &bench,
            &tps(),
            &DetectionConfig {
                min_duration: 0.75,
                merge_gap: 0.0,
            },
        )
        .unwrap();
        let spans: Vec<(f64, f64)> = debounced.iter().map(|d| (d.start(), d.end())).collect();
        assert_eq!(spans, vec![(1.0, 2.0), (3.0, 4.0)]);
    }

    #[test]
    fn detection_errors() {
        let empty = SampleSeries::new("svc", "tps", vec![]).unwrap();
        assert!(matches!(
            detect_degradations(&empty, &Benchmark::Constant(1.0), &tps(), &DetectionConfig::default()),
            Err(Error::Input(_))
        ));
        let lookup = Benchmark::lookup(
            SampleSeries::from_pairs("svc", "tps", &[(5.0, 50.0)]).unwrap(),
            Default::default(),
        )
        .unwrap();
        match detect_degradations(&paper_series(), &lookup, &tps(), &DetectionConfig::default()) {
            Err(Error::Evaluation { timestamp, .. }) => assert_eq!(timestamp, 0.0),
            other => panic!("unexpected {other:?}"),
        }
        let bad_cfg = DetectionConfig {
            min_duration: -1.0,
            merge_gap: 0.0,
        };
        assert!(detect_degradations(&paper_series(), &Benchmark::Constant(50.0), &tps(), &bad_cfg).is_err());
        assert!(detect_degradations(&paper_series(), &Benchmark::Constant(50.0), &rt(), &DetectionConfig::default()).is_err());
    }

    #[test]
    fn single_sample_depth() {
        let eps = 1e-3;
        let s = SampleSeries::from_pairs("svc", "tps", &[(0.0, 50.0), (1.0, 50.0 - eps), (2.0, 50.0)])
            .unwrap();
        let bench = Benchmark::Constant(50.0);
        let degs = detect_degradations(&s, &bench, &tps(), &DetectionConfig::default()).unwrap();
        let dt = disruption_tolerance(&degs[0], &bench, &tps()).unwrap();
        assert_eq!(dt, 50.0 - (50.0 - eps));
    }

    #[test]
    fn tiny_interval() {
        let d = Degradation::new(
            "svc",
            "tps",
            vec![Sample::new(5.0, 1.0), Sample::new(5.001, 2.0)],
            false,
        )
        .unwrap();
        assert_eq!(recovery_rapidity(&d), 5.001 - 5.0);
    }

    #[test]
    fn split_is_additive() {
        let bench = Benchmark::Constant(50.0);
        let d = &detect_degradations(&paper_series(), &bench, &tps(), &DetectionConfig::default())
            .unwrap()[0];
        let (a, b) = d.split_at(10.0).unwrap();
        let total = performance_loss(d, &bench, &tps()).unwrap();
        let parts = performance_loss(&a, &bench, &tps()).unwrap()
            + performance_loss(&b, &bench, &tps()).unwrap();
        assert_eq!(total, parts);
        assert!(d.split_at(5.0).is_none());
        assert!(d.split_at(15.0).is_none());
    }

    #[test]
    fn overshoot_never_offsets_loss() {
        let d = Degradation::new(
            "svc",
            "tps",
            vec![Sample::new(0.0, 40.0), Sample::new(1.0, 90.0), Sample::new(2.0, 50.0)],
            false,
        )
        .unwrap();
        let pl = performance_loss(&d, &Benchmark::Constant(50.0), &tps()).unwrap();
        assert_eq!(pl, 10.0);
    }

    #[test]
    fn degradation_constructor_checks() {
        assert!(Degradation::new("s", "a", vec![], false).is_err());
        assert!(Degradation::new("s", "a", vec![Sample::new(0.0, 1.0)], false).is_err());
        assert!(Degradation::new("s", "a", vec![Sample::new(0.0, 1.0)], true).is_ok());
        assert!(Degradation::new(
            "s",
            "a",
            vec![Sample::new(1.0, 1.0), Sample::new(0.0, 1.0)],
            false
        )
        .is_err());
    }
}
