use rand::Rng;

use super::{lean_label, rotate, LeanLabel};
use crate::error::{Error, Result};
use crate::silcore::{centroid, Silhouette};

/// Which frame(s) decide the lean label that gates rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LeanProbe {
    #[default]
    Middle,
    Majority,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugConfig {
    pub p_hflip: f64,
    pub p_rotate: f64,
    pub rotate_max: f64,
    pub p_erase: f64,
    /// Erased area as a fraction of the frame, `(min, max)`.
    pub erase_area: (f64, f64),
    pub lean_proportion: f64,
    pub lean_probe: LeanProbe,
}

impl Default for AugConfig {
    fn default() -> Self {
        Self {
            p_hflip: 0.5,
            p_rotate: 0.3,
            rotate_max: 10.0,
            p_erase: 0.3,
            erase_area: (0.02, 0.2),
            lean_proportion: 0.5,
            lean_probe: LeanProbe::Middle,
        }
    }
}

impl AugConfig {
    /// Config that leaves every sequence untouched.
    pub fn disabled() -> Self {
        Self {
            p_hflip: 0.0,
            p_rotate: 0.0,
            p_erase: 0.0,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("p_hflip", self.p_hflip),
            ("p_rotate", self.p_rotate),
            ("p_erase", self.p_erase),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("{name} {p} outside [0, 1]")));
            }
        }
        if !(self.rotate_max >= 0.0 && self.rotate_max.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "rotate_max {} must be >= 0",
                self.rotate_max
            )));
        }
        let (lo, hi) = self.erase_area;
        if !(lo > 0.0 && lo <= hi && hi < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "erase_area ({lo}, {hi}) must satisfy 0 < min <= max < 1"
            )));
        }
        if !(self.lean_proportion >= 0.0 && self.lean_proportion.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "lean_proportion {} must be >= 0",
                self.lean_proportion
            )));
        }
        Ok(())
    }
}

/// Erased rectangle as fractions of the frame so it can be applied to
/// frames of any size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EraseRect {
    pub area: f64,
    pub aspect: f64,
    /// Position of the top-left corner within the free range, in [0, 1].
    pub pos: (f64, f64),
}

impl EraseRect {
    /// Pixel bounds `(left, top, width, height)` inside an `h` x `w` frame.
    pub fn bounds(&self, h: usize, w: usize) -> (usize, usize, usize, usize) {
        let total = self.area * (h * w) as f64;
        let rh = ((total * self.aspect).sqrt().round() as usize).clamp(1, h);
        let rw = ((total / self.aspect).sqrt().round() as usize).clamp(1, w);
        let left = (self.pos.0 * (w - rw) as f64).floor() as usize;
        let top = (self.pos.1 * (h - rh) as f64).floor() as usize;
        (left, top, rw, rh)
    }

    pub fn apply(&self, sil: &Silhouette) -> Silhouette {
        let (left, top, rw, rh) = self.bounds(sil.height(), sil.width());
        let mut out = sil.clone();
        for y in top..top + rh {
            for x in left..left + rw {
                out.set(x, y, false);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Augmented {
    pub frames: Vec<Silhouette>,
    pub flipped: bool,
    /// Label that gated the rotation, computed after any flip.
    pub lean: LeanLabel,
    /// Angle drawn before lean clamping, when rotation fired.
    pub sampled_rotation: Option<f64>,
    /// Angle actually applied.
    pub rotation: Option<f64>,
    pub erase: Option<EraseRect>,
}

fn sequence_lean(frames: &[Silhouette], cfg: &AugConfig) -> LeanLabel {
    let label = |f: &Silhouette| lean_label(f, cfg.lean_proportion).unwrap_or(LeanLabel::Neutral);
    match cfg.lean_probe {
        LeanProbe::Middle => label(&frames[frames.len() / 2]),
        LeanProbe::Majority => {
            let (mut left, mut right, mut neutral) = (0usize, 0usize, 0usize);
            for f in frames {
                match label(f) {
                    LeanLabel::LeanLeft => left += 1,
                    LeanLabel::LeanRight => right += 1,
                    LeanLabel::Neutral => neutral += 1,
                }
            }
            if left > right && left > neutral {
                LeanLabel::LeanLeft
            } else if right > left && right > neutral {
                LeanLabel::LeanRight
            } else {
                LeanLabel::Neutral
            }
        }
    }
}

/// Clamps a rotation so it never adds to the existing lean. Left-leaning
/// bodies (top toward -x) refuse negative angles, right-leaning refuse
/// positive ones.
pub fn lean_clamp(angle: f64, lean: LeanLabel) -> f64 {
    match lean {
        LeanLabel::LeanLeft => angle.max(0.0),
        LeanLabel::LeanRight => angle.min(0.0),
        LeanLabel::Neutral => angle,
    }
}

/// Sequence-level augmentation: flip, lean-aware rotation and random
/// erasing, each decided once and applied to every frame.
pub fn augment_sequence<R: Rng + ?Sized>(
    frames: &[Silhouette],
    cfg: &AugConfig,
    rng: &mut R,
) -> Result<Augmented> {
    cfg.validate()?;
    if frames.is_empty() {
        return Err(Error::EmptySequence);
    }
    let flipped = cfg.p_hflip > 0.0 && rng.random_bool(cfg.p_hflip);
    let mut out: Vec<Silhouette> = if flipped {
        frames.iter().map(Silhouette::mirror_horizontal).collect()
    } else {
        frames.to_vec()
    };

    let lean = sequence_lean(&out, cfg);
    let mut sampled_rotation = None;
    let mut rotation = None;
    if cfg.p_rotate > 0.0 && rng.random_bool(cfg.p_rotate) {
        let sampled = if cfg.rotate_max > 0.0 {
            rng.random_range(-cfg.rotate_max..=cfg.rotate_max)
        } else {
            0.0
        };
        let applied = lean_clamp(sampled, lean);
        sampled_rotation = Some(sampled);
        rotation = Some(applied);
        if applied != 0.0 {
            out = out
                .iter()
                .map(|f| {
                    let c = centroid(f)
                        .unwrap_or((f.width() as f64 / 2.0, f.height() as f64 / 2.0));
                    rotate(f, applied, c)
                })
                .collect();
        }
    }

    let mut erase = None;
    if cfg.p_erase > 0.0 && rng.random_bool(cfg.p_erase) {
        let (lo, hi) = cfg.erase_area;
        let rect = EraseRect {
            area: rng.random_range(lo..=hi),
            aspect: rng.random_range(0.3..=3.3),
            pos: (rng.random_range(0.0..=1.0), rng.random_range(0.0..=1.0)),
        };
        out = out.iter().map(|f| rect.apply(f)).collect();
        erase = Some(rect);
    }

    Ok(Augmented {
        frames: out,
        flipped,
        lean,
        sampled_rotation,
        rotation,
        erase,
    })
}
