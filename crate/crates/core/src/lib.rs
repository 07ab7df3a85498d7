//! Microservice resilience measurement and goal modelling.
//!
//! The crate detects service degradations in performance time series, measures
//! their disruption tolerance, recovery rapidity and performance loss against a
//! benchmark, checks resilience goals, and propagates goal satisfaction through
//! an AND/OR goal graph.

pub mod aggregate;
pub mod benchmark;
pub mod error;
pub mod export;
pub mod forecast;
pub mod goal;
pub mod measure;
pub mod report;
pub mod series;
pub mod sim;
pub mod trace;

pub use error::{Error, Result};
