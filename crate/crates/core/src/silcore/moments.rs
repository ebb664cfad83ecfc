use super::Silhouette;
use crate::error::{Error, Result};

/// Hu values with magnitude at or below this are treated as undefined in
/// log space.
pub const LOGSIG_CUTOFF: f64 = 1e-12;

/// Geometric moments up to order three. Indexing is `[p][q]` for
/// `x^p * y^q`; entries with `p + q > 3` are zero.
///
/// Each foreground pixel is a unit mass at its center `(x + 0.5, y + 0.5)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet {
    raw: [[f64; 4]; 4],
    central: [[f64; 4]; 4],
    normalized: [[f64; 4]; 4],
}

impl MomentSet {
    /// Raw moment `M_pq`.
    pub fn raw(&self, p: usize, q: usize) -> f64 {
        self.raw[p][q]
    }

    /// Central moment `mu_pq`.
    pub fn central(&self, p: usize, q: usize) -> f64 {
        self.central[p][q]
    }

    /// Normalized central moment `eta_pq`, defined for `p + q` in {2, 3}.
    pub fn normalized(&self, p: usize, q: usize) -> f64 {
        self.normalized[p][q]
    }

    pub fn area(&self) -> f64 {
        self.raw[0][0]
    }

    pub fn centroid(&self) -> (f64, f64) {
        (self.raw[1][0] / self.raw[0][0], self.raw[0][1] / self.raw[0][0])
    }
}

/// Computes raw, central and normalized central moments.
///
/// Central moments are accumulated in coordinates local to the foreground
/// bounding box, so integer translations leave them bit-identical.
pub fn moments(sil: &Silhouette) -> Result<MomentSet> {
    let (x0, y0, _, _) = sil.bounding_box().ok_or(Error::EmptyMoments)?;

    let mut raw = [[0.0f64; 4]; 4];
    let mut local = [[0.0f64; 2]; 2];
    let mut n = 0.0f64;
    for (x, y) in sil.foreground() {
        let (fx, fy) = (x as f64 + 0.5, y as f64 + 0.5);
        accumulate(&mut raw, fx, fy);
        let (lx, ly) = ((x - x0) as f64 + 0.5, (y - y0) as f64 + 0.5);
        n += 1.0;
        local[1][0] += lx;
        local[0][1] += ly;
    }
    let (cx, cy) = (local[1][0] / n, local[0][1] / n);

    let mut central = [[0.0f64; 4]; 4];
    for (x, y) in sil.foreground() {
        let dx = (x - x0) as f64 + 0.5 - cx;
        let dy = (y - y0) as f64 + 0.5 - cy;
        accumulate(&mut central, dx, dy);
    }
    central[1][0] = 0.0;
    central[0][1] = 0.0;

    let mut normalized = [[0.0f64; 4]; 4];
    let mu00 = central[0][0];
    for p in 0..4 {
        for q in 0..4 - p {
            if p + q >= 2 {
                let exponent = 1.0 + (p + q) as f64 / 2.0;
                normalized[p][q] = central[p][q] / mu00.powf(exponent);
            }
        }
    }

    Ok(MomentSet {
        raw,
        central,
        normalized,
    })
}

#[inline]
fn accumulate(acc: &mut [[f64; 4]; 4], x: f64, y: f64) {
    let (x2, y2) = (x * x, y * y);
    acc[0][0] += 1.0;
    acc[1][0] += x;
    acc[0][1] += y;
    acc[2][0] += x2;
    acc[1][1] += x * y;
    acc[0][2] += y2;
    acc[3][0] += x2 * x;
    acc[2][1] += x2 * y;
    acc[1][2] += x * y2;
    acc[0][3] += y2 * y;
}

/// The seven Hu invariants and their signed log10 magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HuVector {
    pub h: [f64; 7],
    /// `sign(h) * log10|h|`; `None` where `|h| <= LOGSIG_CUTOFF`.
    pub logsig: [Option<f64>; 7],
}

impl HuVector {
    pub fn from_invariants(h: [f64; 7]) -> Self {
        let logsig = h.map(|v| {
            if v.abs() <= LOGSIG_CUTOFF {
                None
            } else {
                Some(v.signum() * v.abs().log10())
            }
        });
        Self { h, logsig }
    }

    pub fn defined_terms(&self) -> usize {
        self.logsig.iter().filter(|m| m.is_some()).count()
    }
}

pub fn hu_vector(m: &MomentSet) -> HuVector {
    let n20 = m.normalized(2, 0);
    let n02 = m.normalized(0, 2);
    let n11 = m.normalized(1, 1);
    let n30 = m.normalized(3, 0);
    let n21 = m.normalized(2, 1);
    let n12 = m.normalized(1, 2);
    let n03 = m.normalized(0, 3);

    let t0 = n30 + n12;
    let t1 = n21 + n03;
    let q0 = n30 - 3.0 * n12;
    let q1 = 3.0 * n21 - n03;
    let (t0s, t1s) = (t0 * t0, t1 * t1);

    let h = [
        n20 + n02,
        (n20 - n02).powi(2) + 4.0 * n11 * n11,
        q0 * q0 + q1 * q1,
        t0s + t1s,
        q0 * t0 * (t0s - 3.0 * t1s) + q1 * t1 * (3.0 * t0s - t1s),
        (n20 - n02) * (t0s - t1s) + 4.0 * n11 * t0 * t1,
        q1 * t0 * (t0s - 3.0 * t1s) - q0 * t1 * (3.0 * t0s - t1s),
    ];
    HuVector::from_invariants(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(size: usize, radius: f64) -> Silhouette {
        let c = size as f64 / 2.0;
        Silhouette::from_fn(size, size, |x, y| {
            let (dx, dy) = (x as f64 + 0.5 - c, y as f64 + 0.5 - c);
            dx * dx + dy * dy <= radius * radius
        })
    }

    #[test]
    fn single_pixel_moments() {
        let mut sil = Silhouette::blank(1, 1);
        sil.set(0, 0, true);
        let m = moments(&sil).unwrap();
        assert_eq!(m.area(), 1.0);
        assert_eq!(m.centroid(), (0.5, 0.5));
    }

    #[test]
    fn empty_silhouette_errors() {
        let err = moments(&Silhouette::blank(3, 3)).unwrap_err();
        assert_eq!(err.to_string(), "moments of empty silhouette");
    }

    #[test]
    fn centered_square_symmetry() {
        for side in [1usize, 2, 5, 12] {
            let sil = Silhouette::from_fn(side + 4, side + 4, |x, y| {
                (2..2 + side).contains(&x) && (2..2 + side).contains(&y)
            });
            let m = moments(&sil).unwrap();
            assert_eq!(m.central(1, 1), 0.0);
            assert_eq!(m.central(2, 0), m.central(0, 2));
            assert_eq!(m.central(1, 0), 0.0);
            assert_eq!(m.central(0, 1), 0.0);
            assert_eq!(m.area(), (side * side) as f64);
        }
    }

    // A continuous disk of radius r has mu20 = mu02 = pi r^4 / 4 and
    // area pi r^2, so eta20 + eta02 = 1 / (2 pi).
    #[test]
    fn disk_matches_continuous_integral() {
        let sil = disk(256, 100.0);
        let m = moments(&sil).unwrap();
        let oracle = 1.0 / (2.0 * std::f64::consts::PI);
        let got = m.normalized(2, 0) + m.normalized(0, 2);
        assert!(((got - oracle) / oracle).abs() < 0.01, "{got} vs {oracle}");

        let hu = hu_vector(&m);
        assert!(((hu.h[0] - 0.15915) / 0.15915).abs() < 0.01);
        assert!(hu.h[1].abs() < 1e-4);
        for v in &hu.h[2..] {
            assert!(v.abs() < 1e-4);
        }
    }

    #[test]
    fn hu_translation_is_bit_exact() {
        let base = Silhouette::from_rows(&[
            "0110000", "1111000", "0111100", "0011110", "0000110", "0000000",
        ])
        .unwrap();
        let shifted = base.placed(20, 20, 7, 3);
        let a = hu_vector(&moments(&base).unwrap());
        let b = hu_vector(&moments(&shifted).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn hu_rotate90_matches() {
        let base = Silhouette::from_fn(40, 30, |x, y| {
            let (fx, fy) = (x as f64 - 12.0, y as f64 - 18.0);
            (fx * fx / 60.0 + fy * fy / 200.0 <= 1.0) || (x > 12 && x < 24 && y > 4 && y < 9)
        });
        let a = hu_vector(&moments(&base).unwrap());
        let b = hu_vector(&moments(&base.rotate90()).unwrap());
        for i in 0..7 {
            match (a.logsig[i], b.logsig[i]) {
                (Some(x), Some(y)) => assert!((x - y).abs() < 1e-6, "term {i}: {x} vs {y}"),
                (None, None) => {}
                other => panic!("term {i} definedness differs: {other:?}"),
            }
        }
    }

    #[test]
    fn logsig_cutoff_marks_undefined() {
        let hu = HuVector::from_invariants([0.2, 1e-13, -1e-3, 0.0, 1e-12, 2e-12, -5.0]);
        assert_eq!(hu.logsig[1], None);
        assert_eq!(hu.logsig[3], None);
        assert_eq!(hu.logsig[4], None);
        assert!(hu.logsig[5].is_some());
        assert!((hu.logsig[2].unwrap() - 3.0).abs() < 1e-12);
        assert!((hu.logsig[0].unwrap() - 0.2f64.log10()).abs() < 1e-15);
        assert!((hu.logsig[6].unwrap() + 5.0f64.log10()).abs() < 1e-15);
        assert_eq!(hu.defined_terms(), 4);
    }

    #[test]
    fn phi1_positive() {
        let sil = Silhouette::from_rows(&["11", "10"]).unwrap();
        let hu = hu_vector(&moments(&sil).unwrap());
        assert!(hu.h[0] > 0.0);
    }
}
