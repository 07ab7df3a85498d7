//! Forecast models used as time-varying performance benchmarks.
//!
//! Two models are provided:
//!
//! * EWMA: `level_0 = y_0`, `level_t = α·y_t + (1 − α)·level_{t−1}`. The forecast
//!   beyond the training range is the final level.
//! * Additive Holt–Winters with season length `m`:
//!
//! ```text
//! init:     L = mean(y_0 .. y_{m-1})
//!           B = Σ_i (y_{m+i} − y_i) / m²
//!           S_i = y_i − L                          (i < m)
//! predict:  ŷ_t = L + B + S_{t mod m}
//! update:   L' = α(y_t − S_{t mod m}) + (1 − α)(L + B)
//!           B' = β(L' − L) + (1 − β)B
//!           S_{t mod m} = γ(y_t − L') + (1 − γ)S_{t mod m}
//! forecast: ŷ_{n−1+h} = L + h·B + S_{(n−1+h) mod m}
//! ```
//!
//! Updates start at `t = m`; the first season is reproduced as observed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Sample, SampleSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForecastKind {
    Ewma,
    HoltWintersAdditive,
}

/// Smoothing parameters. `beta`, `gamma` and `season_length` are only set for Holt–Winters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForecastParams {
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub season_length: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoltWintersParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub season_length: usize,
}

impl HoltWintersParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, season_length: usize) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            season_length,
        }
    }
}

/// Fitted smoothing state at the end of the training range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForecastState {
    pub level: f64,
    pub trend: f64,
    /// Seasonal components indexed by phase `t mod m`. Empty for EWMA.
    pub seasonal: Vec<f64>,
    /// Index of the last observation absorbed into the state.
    pub last_index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingRange {
    pub first: f64,
    pub last: f64,
}

/// A fitted forecast model, serializable as the fitted-benchmark file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForecastModel {
    pub kind: ForecastKind,
    pub params: ForecastParams,
    pub state: ForecastState,
    pub training_range: TrainingRange,
    /// Sampling step in seconds; absent when the training series was a single sample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    /// In-sample one-step-ahead predictions at each training timestamp.
    pub fitted: Vec<Sample>,
    /// One-step-ahead sum of squared errors over the updated part of the training range.
    pub sse: f64,
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::Fit(format!("{name} must lie in (0, 1], got {v}")))
    }
}

pub fn fit_ewma(series: &SampleSeries, alpha: f64) -> Result<ForecastModel> {
    check_unit_interval("alpha", alpha)?;
    let samples = series.samples();
    let Some(first) = samples.first() else {
        return Err(Error::Fit("series is empty".into()));
    };

    let mut level = first.v;
    let mut fitted = Vec::with_capacity(samples.len());
    let mut sse = 0.0;
    fitted.push(Sample::new(first.t, level));
    for s in &samples[1..] {
        fitted.push(Sample::new(s.t, level));
        let err = s.v - level;
        sse += err * err;
        level = alpha * s.v + (1.0 - alpha) * level;
    }

    Ok(ForecastModel {
        kind: ForecastKind::Ewma,
        params: ForecastParams {
            alpha,
            beta: None,
            gamma: None,
            season_length: None,
        },
        state: ForecastState {
            level,
            trend: 0.0,
            seasonal: Vec::new(),
            last_index: samples.len() - 1,
        },
        training_range: TrainingRange {
            first: first.t,
            last: samples[samples.len() - 1].t,
        },
        step: series.uniform_step(),
        fitted,
        sse,
    })
}

fn check_hw_preconditions(series: &SampleSeries, p: &HoltWintersParams) -> Result<f64> {
    check_unit_interval("alpha", p.alpha)?;
    check_unit_interval("beta", p.beta)?;
    check_unit_interval("gamma", p.gamma)?;
    let m = p.season_length;
    if m < 2 {
        return Err(Error::Fit(format!("season length must be >= 2, got {m}")));
    }
    if series.len() < 2 * m {
        return Err(Error::Fit(format!(
            "Holt-Winters needs at least 2 seasons ({} samples), series has {}",
            2 * m,
            series.len()
        )));
    }
    series.uniform_step().ok_or_else(|| {
        Error::Fit(format!(
            "sampling interval is not uniform over {} samples ({}..{})",
            series.len(),
            series.first_time().unwrap_or(f64::NAN),
            series.last_time().unwrap_or(f64::NAN)
        ))
    })
}

/// Runs the additive recurrences over `values`; returns the final state, the
/// one-step-ahead predictions, and the SSE over `t >= m`.
fn run_holt_winters(values: &[f64], p: &HoltWintersParams) -> (ForecastState, Vec<f64>, f64) {
    let m = p.season_length;
    let mf = m as f64;
    let mut level = values[..m].iter().sum::<f64>() / mf;
    let mut trend = (0..m).map(|i| values[m + i] - values[i]).sum::<f64>() / (mf * mf);
    let mut seasonal: Vec<f64> = values[..m].iter().map(|y| y - level).collect();

    let mut fitted = Vec::with_capacity(values.len());
    fitted.extend((0..m).map(|i| level + seasonal[i]));
    let mut sse = 0.0;
    for (t, &y) in values.iter().enumerate().skip(m) {
        let j = t % m;
        let predicted = level + trend + seasonal[j];
        fitted.push(predicted);
        let err = y - predicted;
        sse += err * err;

        let new_level = p.alpha * (y - seasonal[j]) + (1.0 - p.alpha) * (level + trend);
        trend = p.beta * (new_level - level) + (1.0 - p.beta) * trend;
        seasonal[j] = p.gamma * (y - new_level) + (1.0 - p.gamma) * seasonal[j];
        level = new_level;
    }

    let state = ForecastState {
        level,
        trend,
        seasonal,
        last_index: values.len() - 1,
    };
    (state, fitted, sse)
}

pub fn fit_holt_winters(series: &SampleSeries, params: HoltWintersParams) -> Result<ForecastModel> {
    let step = check_hw_preconditions(series, &params)?;
    let values: Vec<f64> = series.values().collect();
    let (state, fitted, sse) = run_holt_winters(&values, &params);
    Ok(ForecastModel {
        kind: ForecastKind::HoltWintersAdditive,
        params: ForecastParams {
            alpha: params.alpha,
            beta: Some(params.beta),
            gamma: Some(params.gamma),
            season_length: Some(params.season_length),
        },
        state,
        training_range: TrainingRange {
            first: series.first_time().unwrap_or_default(),
            last: series.last_time().unwrap_or_default(),
        },
        step: Some(step),
        fitted: series
            .samples()
            .iter()
            .zip(fitted)
            .map(|(s, f)| Sample::new(s.t, f))
            .collect(),
        sse,
    })
}

/// Candidate values for the Holt–Winters grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterGrid {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
}

impl ParameterGrid {
    pub fn new(alphas: Vec<f64>, betas: Vec<f64>, gammas: Vec<f64>) -> Self {
        Self {
            alphas,
            betas,
            gammas,
        }
    }

    /// `{step, 2·step, ...}` up to and including 1 on every axis.
    pub fn uniform(step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0 && step <= 1.0) {
            return Err(Error::Fit(format!("grid step must lie in (0, 1], got {step}")));
        }
        let count = (1.0 / step + 1e-9).floor() as usize;
        let axis: Vec<f64> = (1..=count)
            .map(|k| ((k as f64 * step) * 1e12).round() / 1e12)
            .collect();
        Ok(Self::new(axis.clone(), axis.clone(), axis))
    }

    /// Every triple in lexicographic order, each axis sorted ascending and deduplicated.
    pub fn triples(&self) -> Vec<(f64, f64, f64)> {
        fn axis(v: &[f64]) -> Vec<f64> {
            let mut v = v.to_vec();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        }
        let (a, b, g) = (axis(&self.alphas), axis(&self.betas), axis(&self.gammas));
        let mut out = Vec::with_capacity(a.len() * b.len() * g.len());
        for &x in &a {
            for &y in &b {
                for &z in &g {
                    out.push((x, y, z));
                }
            }
        }
        out
    }
}

/// Picks the grid triple with the lowest one-step-ahead SSE. Ties keep the
/// lexicographically smallest triple.
pub fn grid_fit(
    series: &SampleSeries,
    season_length: usize,
    grid: &ParameterGrid,
) -> Result<ForecastModel> {
    let triples = grid.triples();
    let Some(&(a0, b0, g0)) = triples.first() else {
        return Err(Error::Fit("parameter grid is empty".into()));
    };
    for &(a, b, g) in &triples {
        check_unit_interval("alpha", a)?;
        check_unit_interval("beta", b)?;
        check_unit_interval("gamma", g)?;
    }
    check_hw_preconditions(series, &HoltWintersParams::new(a0, b0, g0, season_length))?;

    let values: Vec<f64> = series.values().collect();
    let mut best: Option<(HoltWintersParams, f64)> = None;
    for (a, b, g) in triples {
        let p = HoltWintersParams::new(a, b, g, season_length);
        let (_, _, sse) = run_holt_winters(&values, &p);
        if best.as_ref().is_none_or(|(_, s)| sse < *s) {
            best = Some((p, sse));
        }
    }
    let (params, _) = best.expect("grid is non-empty");
    fit_holt_winters(series, params)
}

impl ForecastModel {
    pub fn holt_winters_params(&self) -> Option<HoltWintersParams> {
        match self.kind {
            ForecastKind::HoltWintersAdditive => Some(HoltWintersParams::new(
                self.params.alpha,
                self.params.beta?,
                self.params.gamma?,
                self.params.season_length?,
            )),
            ForecastKind::Ewma => None,
        }
    }

    /// Forecast `h >= 1` steps past the last absorbed observation.
    pub fn forecast(&self, h: usize) -> f64 {
        let st = &self.state;
        match self.kind {
            ForecastKind::Ewma => st.level,
            ForecastKind::HoltWintersAdditive => {
                let m = st.seasonal.len();
                st.level + h as f64 * st.trend + st.seasonal[(st.last_index + h) % m]
            }
        }
    }

    /// Absorbs one more observation into the state (the next step after `last_index`).
    pub fn observe(&mut self, y: f64) {
        let a = self.params.alpha;
        let st = &mut self.state;
        match self.kind {
            ForecastKind::Ewma => {
                st.level = a * y + (1.0 - a) * st.level;
            }
            ForecastKind::HoltWintersAdditive => {
                let b = self.params.beta.unwrap_or(0.0);
                let g = self.params.gamma.unwrap_or(0.0);
                let j = (st.last_index + 1) % st.seasonal.len();
                let new_level = a * (y - st.seasonal[j]) + (1.0 - a) * (st.level + st.trend);
                st.trend = b * (new_level - st.level) + (1.0 - b) * st.trend;
                st.seasonal[j] = g * (y - new_level) + (1.0 - g) * st.seasonal[j];
                st.level = new_level;
            }
        }
        st.last_index += 1;
    }

    /// Benchmark value at time `t`.
    ///
    /// Inside the training range this is the in-sample one-step-ahead prediction of
    /// the latest training sample at or before `t`. Past the range it is the
    /// forecast `h = floor((t − t_last) / step)` steps ahead (the last in-sample
    /// value when `h = 0`). Before the range it is an error.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        let range = self.training_range;
        if !t.is_finite() || t < range.first {
            return Err(Error::Evaluation {
                timestamp: t,
                reason: format!("before the training range starting at {}", range.first),
            });
        }
        if t <= range.last {
            let idx = self.fitted.partition_point(|s| s.t <= t);
            return Ok(self.fitted[idx - 1].v);
        }
        if self.kind == ForecastKind::Ewma {
            return Ok(self.forecast(1));
        }
        let step = self.step.ok_or_else(|| Error::Evaluation {
            timestamp: t,
            reason: "model has no sampling step".into(),
        })?;
        let ratio = (t - range.last) / step;
        let h = (ratio + 1e-9 * ratio.abs().max(1.0)).floor() as usize;
        if h == 0 {
            Ok(self.fitted.last().map(|s| s.v).unwrap_or(self.state.level))
        } else {
            Ok(self.forecast(h))
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut text = serde_json::to_string_pretty(&serde_json::to_value(self)?)?;
        text.push('\n');
        Ok(text)
    }

    /// Parses a fitted-benchmark file and checks its internal consistency.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let model: ForecastModel = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        model.check()?;
        Ok(model)
    }

    fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Schema {
            path: ".".into(),
            message: m,
        });
        check_unit_interval("alpha", self.params.alpha)?;
        if self.fitted.is_empty() {
            return bad("fitted values are empty".into());
        }
        match self.kind {
            ForecastKind::Ewma => {
                if !self.state.seasonal.is_empty() {
                    return bad("EWMA model must not carry seasonal components".into());
                }
            }
            ForecastKind::HoltWintersAdditive => {
                let Some(p) = self.holt_winters_params() else {
                    return bad("Holt-Winters model needs beta, gamma and season_length".into());
                };
                check_unit_interval("beta", p.beta)?;
                check_unit_interval("gamma", p.gamma)?;
                if p.season_length < 2 || self.state.seasonal.len() != p.season_length {
                    return bad(format!(
                        "seasonal vector has {} entries, season_length is {}",
                        self.state.seasonal.len(),
                        p.season_length
                    ));
                }
                if self.step.is_none_or(|s| !(s > 0.0)) {
                    return bad("Holt-Winters model needs a positive step".into());
                }
            }
        }
        if self.fitted.windows(2).any(|w| w[1].t <= w[0].t) {
            return bad("fitted timestamps must be strictly increasing".into());
        }
        Ok(())
    }
}
