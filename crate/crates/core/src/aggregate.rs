//! Service-level attributes aggregated from container instances.
//!
//! ```text
//! ResponseTime(service)  = Σ rt_i·tps_i / Σ tps_i
//! SuccessRate(service)   = Σ sr_i·tps_i / Σ tps_i
//! SuccessOrders(service) = Σ sr_i·tps_i
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Performance of one available container instance at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainerSnapshot {
    pub instance: String,
    /// Milliseconds.
    pub response_time: f64,
    /// Fraction in `[0, 1]`.
    pub success_rate: f64,
    pub tps: f64,
}

impl ContainerSnapshot {
    pub fn new(instance: impl Into<String>, response_time: f64, success_rate: f64, tps: f64) -> Result<Self> {
        let snap = Self {
            instance: instance.into(),
            response_time,
            success_rate,
            tps,
        };
        snap.check()?;
        Ok(snap)
    }

    fn check(&self) -> Result<()> {
        if !self.response_time.is_finite() {
            return Err(Error::Input(format!("{}: response time is not finite", self.instance)));
        }
        if !(self.success_rate.is_finite() && (0.0..=1.0).contains(&self.success_rate)) {
            return Err(Error::Input(format!(
                "{}: success rate {} outside [0, 1]",
                self.instance, self.success_rate
            )));
        }
        if !(self.tps.is_finite() && self.tps >= 0.0) {
            return Err(Error::Input(format!("{}: tps {} must be >= 0", self.instance, self.tps)));
        }
        Ok(())
    }
}

fn checked(snapshots: &[ContainerSnapshot]) -> Result<()> {
    if snapshots.is_empty() {
        return Err(Error::UndefinedAggregate("no container instances".into()));
    }
    snapshots.iter().try_for_each(ContainerSnapshot::check)
}

fn tps_weighted(snapshots: &[ContainerSnapshot], value: impl Fn(&ContainerSnapshot) -> f64) -> Result<f64> {
    checked(snapshots)?;
    let total: f64 = snapshots.iter().map(|s| s.tps).sum();
    if total <= 0.0 {
        return Err(Error::UndefinedAggregate(format!(
            "total TPS over {} instance(s) is zero",
            snapshots.len()
        )));
    }
    Ok(snapshots.iter().map(|s| value(s) * s.tps).sum::<f64>() / total)
}

pub fn aggregate_response_time(snapshots: &[ContainerSnapshot]) -> Result<f64> {
    tps_weighted(snapshots, |s| s.response_time)
}

pub fn aggregate_success_rate(snapshots: &[ContainerSnapshot]) -> Result<f64> {
    tps_weighted(snapshots, |s| s.success_rate)
}

/// Success-weighted total throughput (successful orders per second for the order service).
pub fn aggregate_throughput_rate(snapshots: &[ContainerSnapshot]) -> Result<f64> {
    checked(snapshots)?;
    Ok(snapshots.iter().map(|s| s.success_rate * s.tps).sum())
}
