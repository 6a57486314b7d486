//! Command line front end: model-spec loading and the `fgm` commands.

pub mod cli;
pub mod commands;
pub mod error;
pub mod spec;

pub use cli::run;
pub use error::CliError;
pub use spec::{load_model_spec, parse_model_spec, ModelSpec};
