//! Dataset-level tooling around `qagait-core`: directory scanning, image
//! I/O, manifests, parallel runs, reports, template fixtures and the loss
//! demo behind the `qagait` binary.

pub mod config;
pub mod demo;
pub mod error;
pub mod humanoid;
pub mod io;
pub mod manifest;
pub mod report;
pub mod run;
pub mod scan;
pub mod templates;

pub use config::{RunConfig, TemplateSource};
pub use error::{PipelineError, Result};
pub use manifest::{ManifestRow, Verdict};
pub use scan::{scan_dataset, SequenceRef};
