//! Frame normalization, lean detection, tilt alignment and lean-aware
//! augmentation.
//!
//! Angles are in degrees. A positive tilt means the top of the body points
//! toward +x; rotating by a positive angle moves the top of an upright shape
//! toward +x.

mod align;
mod augment;
mod lean;
mod normalize;
mod tilt;
mod transform;

pub use align::{align_sequence, AlignConfig, AlignMode, AlignmentPlan};
pub use augment::{augment_sequence, lean_clamp, AugConfig, Augmented, EraseRect, LeanProbe};
pub use lean::{label_from_quadrants, lean_label, LeanLabel};
pub use normalize::normalize;
pub use tilt::{convex_hull, estimate_tilt, min_area_rect, RotatedRect};
pub use transform::{rotate, warp_similarity};
