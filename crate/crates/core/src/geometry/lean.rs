use crate::error::Result;
use crate::silcore::{quadrant_areas, Silhouette};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LeanLabel {
    LeanLeft,
    LeanRight,
    Neutral,
}

impl LeanLabel {
    pub fn mirrored(self) -> Self {
        match self {
            Self::LeanLeft => Self::LeanRight,
            Self::LeanRight => Self::LeanLeft,
            Self::Neutral => Self::Neutral,
        }
    }
}

/// Classifies lean from quadrant areas. Left lean means the top-left
/// quadrant outweighs the top-right and the bottom-right outweighs the
/// bottom-left, each by the factor `1 + proportion`.
pub fn lean_label(sil: &Silhouette, proportion: f64) -> Result<LeanLabel> {
    Ok(label_from_quadrants(quadrant_areas(sil)?, proportion))
}

pub fn label_from_quadrants([tl, tr, bl, br]: [usize; 4], proportion: f64) -> LeanLabel {
    let k = 1.0 + proportion;
    let dominates = |a: usize, b: usize| a as f64 >= k * b as f64;
    let left = dominates(tl, tr) && dominates(br, bl);
    let right = dominates(tr, tl) && dominates(bl, br);
    match (left, right) {
        (true, false) => LeanLabel::LeanLeft,
        (false, true) => LeanLabel::LeanRight,
        _ => LeanLabel::Neutral,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrant_rule() {
        assert_eq!(label_from_quadrants([30, 10, 10, 30], 0.5), LeanLabel::LeanLeft);
        assert_eq!(label_from_quadrants([10, 30, 30, 10], 0.5), LeanLabel::LeanRight);
        assert_eq!(label_from_quadrants([20, 20, 20, 20], 0.5), LeanLabel::Neutral);
        // top condition alone is not enough
        assert_eq!(label_from_quadrants([30, 10, 30, 30], 0.5), LeanLabel::Neutral);
        // all-zero quadrants satisfy both conditions
        assert_eq!(label_from_quadrants([0, 0, 0, 0], 0.5), LeanLabel::Neutral);
    }

    #[test]
    fn diagonal_bar_leans_left() {
        // top toward -x, feet toward +x
        let sil = Silhouette::from_fn(40, 40, |x, y| {
            let d = x as i64 - y as i64;
            d.abs() <= 2
        });
        assert_eq!(lean_label(&sil, 0.5).unwrap(), LeanLabel::LeanLeft);
        assert_eq!(
            lean_label(&sil.mirror_horizontal(), 0.5).unwrap(),
            LeanLabel::LeanRight
        );
    }

    #[test]
    fn symmetric_body_is_neutral() {
        let sil = Silhouette::from_fn(30, 20, |x, y| (4..16).contains(&x) && (2..28).contains(&y));
        assert_eq!(lean_label(&sil, 0.5).unwrap(), LeanLabel::Neutral);
    }

    #[test]
    fn empty_errors() {
        assert!(lean_label(&Silhouette::blank(4, 4), 0.5).is_err());
    }
}
