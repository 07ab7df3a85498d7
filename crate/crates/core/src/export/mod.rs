//! Diagrams, requirement documents and the model file.

mod dot;
mod markdown;
mod model_file;

pub use dot::{export_dot, NodeStyle, RenderStyle, JUNCTION_PREFIX};
pub use markdown::export_markdown;
pub use model_file::{canonical, load_model, load_model_file, save_model};

use crate::goal::ensure_valid as require_valid;
