//! Silhouette quality assessment for gait datasets.
//!
//! - [`silcore`]: binary masks, connected components, moments, Hu invariants
//! - [`qa`]: largest-component filtering, Hu template matching, frame retention
//! - [`geometry`]: normalization, lean detection, tilt alignment, augmentation
//! - [`qloss`]: quality indicator and quality-adaptive margin losses

pub mod error;
pub mod geometry;
pub mod qa;
pub mod qloss;
pub mod silcore;

pub use error::{Error, Result};
pub use silcore::Silhouette;
