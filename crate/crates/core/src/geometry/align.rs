use rand::Rng;

use super::{estimate_tilt, normalize, rotate};
use crate::error::{Error, Result};
use crate::silcore::{centroid, Silhouette};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AlignMode {
    /// Every frame is corrected by its own tilt.
    FrameLevel,
    /// Every frame is corrected by the sequence's mean tilt.
    #[default]
    SequenceLevel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignConfig {
    pub mode: AlignMode,
    /// Half-width in degrees of the uniform disturbance.
    pub theta: f64,
    pub height: usize,
    pub width: usize,
}

impl Default for AlignConfig {
    fn default() -> Self {
        Self {
            mode: AlignMode::SequenceLevel,
            theta: 5.0,
            height: 64,
            width: 44,
        }
    }
}

impl AlignConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(Error::InvalidConfig(format!("theta {} must be >= 0", self.theta)));
        }
        if self.height < 8 || self.width < 8 {
            return Err(Error::InvalidConfig(format!(
                "alignment target {}x{} below 8x8",
                self.height, self.width
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentPlan {
    pub mode: AlignMode,
    /// Measured tilt per frame; 0 where estimation failed.
    pub frame_angles: Vec<f64>,
    /// Frames whose tilt could not be estimated.
    pub degenerate: Vec<bool>,
    /// Mean of `frame_angles`.
    pub sequence_angle: f64,
    pub disturbance: f64,
}

impl AlignmentPlan {
    /// Tilt that frame `i` was corrected for, disturbance included. The frame
    /// was rotated by the negation of this value.
    pub fn applied_angle(&self, i: usize) -> f64 {
        let base = match self.mode {
            AlignMode::SequenceLevel => self.sequence_angle,
            AlignMode::FrameLevel => self.frame_angles[i],
        };
        base + self.disturbance
    }
}

/// Rotates every frame upright about its centroid, then re-normalizes it.
///
/// One disturbance is drawn per sequence from `[-theta, theta]`.
pub fn align_sequence<R: Rng + ?Sized>(
    frames: &[Silhouette],
    cfg: &AlignConfig,
    rng: &mut R,
) -> Result<(Vec<Silhouette>, AlignmentPlan)> {
    cfg.validate()?;
    if frames.is_empty() {
        return Err(Error::EmptySequence);
    }
    let mut frame_angles = Vec::with_capacity(frames.len());
    let mut degenerate = Vec::with_capacity(frames.len());
    for frame in frames {
        match estimate_tilt(frame) {
            Ok(a) => {
                frame_angles.push(a);
                degenerate.push(false);
            }
            Err(Error::DegenerateGeometry) => {
                frame_angles.push(0.0);
                degenerate.push(true);
            }
            Err(e) => return Err(e),
        }
    }
    let sequence_angle = frame_angles.iter().sum::<f64>() / frame_angles.len() as f64;
    let disturbance = if cfg.theta > 0.0 {
        rng.random_range(-cfg.theta..=cfg.theta)
    } else {
        0.0
    };
    let plan = AlignmentPlan {
        mode: cfg.mode,
        frame_angles,
        degenerate,
        sequence_angle,
        disturbance,
    };

    let aligned = frames
        .iter()
        .enumerate()
        .map(|(i, frame)| {
            let correction = -plan.applied_angle(i);
            let upright = if correction == 0.0 {
                frame.clone()
            } else {
                // room for the rotated body so nothing is clipped
                let padded = frame.padded(frame.height() + frame.width());
                let c = centroid(&padded)?;
                rotate(&padded, correction, c)
            };
            normalize(&upright, cfg.height, cfg.width)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((aligned, plan))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bar(h: usize, w: usize, half_w: f64, half_h: f64) -> Silhouette {
        let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
        Silhouette::from_fn(h, w, |x, y| {
            let (dx, dy) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
            dx.abs() <= half_w && dy.abs() <= half_h
        })
    }

    fn tilted_sequence(phi: f64) -> Vec<Silhouette> {
        (0..6)
            .map(|i| {
                let e = bar(256, 256, 16.0 + 2.0 * i as f64, 80.0 + 4.0 * i as f64);
                rotate(&e, phi, (128.0, 128.0))
            })
            .collect()
    }

    #[test]
    fn upright_sequence_is_just_normalized() {
        let frames: Vec<_> = (0..4)
            .map(|i| Silhouette::from_fn(80, 50, |x, y| (20..28 + i).contains(&x) && (5..70).contains(&y)))
            .collect();
        let cfg = AlignConfig {
            theta: 0.0,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (out, plan) = align_sequence(&frames, &cfg, &mut rng).unwrap();
        assert_eq!(plan.sequence_angle, 0.0);
        for (o, f) in out.iter().zip(&frames) {
            assert_eq!(o, &normalize(f, 64, 44).unwrap());
        }
    }

    #[test]
    fn removes_uniform_tilt() {
        let frames = tilted_sequence(20.0);
        let cfg = AlignConfig {
            theta: 0.0,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (out, plan) = align_sequence(&frames, &cfg, &mut rng).unwrap();
        assert!((plan.sequence_angle - 20.0).abs() <= 1.5);
        for f in &out {
            let t = estimate_tilt(f).unwrap();
            assert!(t.abs() <= 1.0, "residual {t}");
        }
    }

    #[test]
    fn frame_level_uses_own_angles() {
        let mut frames = tilted_sequence(15.0);
        frames.extend(tilted_sequence(-15.0));
        let cfg = AlignConfig {
            mode: AlignMode::FrameLevel,
            theta: 0.0,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (out, plan) = align_sequence(&frames, &cfg, &mut rng).unwrap();
        assert!(plan.sequence_angle.abs() < 1.5);
        for f in &out {
            assert!(estimate_tilt(f).unwrap().abs() <= 1.0);
        }
    }

    #[test]
    fn disturbance_is_bounded_and_seeded() {
        let frames = tilted_sequence(10.0);
        let cfg = AlignConfig::default();
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            align_sequence(&frames, &cfg, &mut rng).unwrap()
        };
        let (a, pa) = run(9);
        let (b, pb) = run(9);
        assert_eq!(a, b);
        assert_eq!(pa, pb);
        assert!(pa.disturbance.abs() <= 5.0);
        assert_ne!(run(10).1.disturbance, pa.disturbance);
    }

    #[test]
    fn degenerate_frames_contribute_zero() {
        let mut frames = tilted_sequence(20.0);
        frames.push(Silhouette::from_rows(&["0000", "1111", "0000"]).unwrap());
        let cfg = AlignConfig {
            theta: 0.0,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (out, plan) = align_sequence(&frames, &cfg, &mut rng).unwrap();
        assert_eq!(out.len(), 7);
        assert!(plan.degenerate[6]);
        assert_eq!(plan.frame_angles[6], 0.0);
        let mean = plan.frame_angles.iter().sum::<f64>() / 7.0;
        assert_eq!(plan.sequence_angle, mean);
    }

    #[test]
    fn empty_sequence_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            align_sequence(&[], &AlignConfig::default(), &mut rng).unwrap_err(),
            Error::EmptySequence
        );
    }
}
