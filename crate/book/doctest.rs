// mdbook cannot run listings that depend on workspace crates, so every chapter
// is pulled in as the docs of an empty module and `cargo test` runs the
// listings as doctests. Keep this list in step with src/SUMMARY.md.

#[doc = include_str!("src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("src/measurement.md")]
pub mod measurement {}
#[doc = include_str!("src/benchmarks.md")]
pub mod benchmarks {}
#[doc = include_str!("src/goal-models.md")]
pub mod goal_models {}
#[doc = include_str!("src/evaluation.md")]
pub mod evaluation {}
#[doc = include_str!("src/obstacles.md")]
pub mod obstacles {}
#[doc = include_str!("src/simulation.md")]
pub mod simulation {}
#[doc = include_str!("src/export.md")]
pub mod export {}
#[doc = include_str!("src/cli.md")]
pub mod cli {}
