//! Std companion to `shocknet-core`: network and signature files, model
//! specification strings, TOML run manifests, CSV output, rayon drivers and
//! the `shocknet` command-line tool.

pub mod cli;
pub mod csvio;
mod error;
pub mod manifest;
pub mod netfile;
pub mod parallel;
pub mod spec;

pub use error::{Error, Result};
pub use shocknet_core as core;
