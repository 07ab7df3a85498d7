//! Shared helpers for the integration tests: a DOT reader, reference
//! implementations and random model generators.
#![allow(dead_code)]

pub mod dot;
pub mod gen;
pub mod oracle;

use std::path::PathBuf;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}
