//! Binary silhouette primitives: the mask type, binarization, connected
//! components, image moments and Hu invariants.

mod components;
mod moments;

pub use components::{connected_components, ComponentLabeling, Connectivity};
pub use moments::{hu_vector, moments, HuVector, MomentSet, LOGSIG_CUTOFF};

use crate::error::{Error, Result};

/// A binary foreground mask stored row-major (`true` = foreground).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Silhouette {
    height: usize,
    width: usize,
    mask: Vec<bool>,
}

impl Silhouette {
    pub fn new(height: usize, width: usize, mask: Vec<bool>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::EmptyImage);
        }
        if mask.len() != height * width {
            return Err(Error::MaskSize {
                height,
                width,
                len: mask.len(),
            });
        }
        Ok(Self {
            height,
            width,
            mask,
        })
    }

    /// All-background silhouette.
    ///
    /// Panics if either dimension is zero.
    pub fn blank(height: usize, width: usize) -> Self {
        assert!(height > 0 && width > 0, "silhouette dimensions must be >= 1");
        Self {
            height,
            width,
            mask: vec![false; height * width],
        }
    }

    /// Builds a mask from text rows where `1`/`#` is foreground and anything
    /// else is background. Handy for small hand-written fixtures.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map(|r| r.as_ref().chars().count()).unwrap_or(0);
        let mut mask = Vec::with_capacity(height * width);
        for row in rows {
            let row = row.as_ref();
            if row.chars().count() != width {
                return Err(Error::MaskSize {
                    height,
                    width,
                    len: mask.len() + row.chars().count(),
                });
            }
            mask.extend(row.chars().map(|c| c == '1' || c == '#'));
        }
        Self::new(height, width, mask)
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut sil = Self::blank(height, width);
        for y in 0..height {
            for x in 0..width {
                sil.mask[y * width + x] = f(x, y);
            }
        }
        sil
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.mask[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.mask[y * self.width + x] = value;
    }

    /// Signed lookup; anything outside the grid is background.
    #[inline]
    pub fn get_signed(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as usize) < self.width
            && (y as usize) < self.height
            && self.mask[y as usize * self.width + x as usize]
    }

    pub fn foreground_count(&self) -> usize {
        self.mask.iter().filter(|&&v| v).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&v| v)
    }

    /// Iterates `(x, y)` of foreground pixels in row-major order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(move |(i, _)| (i % w, i / w))
    }

    /// Inclusive bounding box `(x0, y0, x1, y1)` of the foreground.
    pub fn bounding_box(&self) -> Option<(usize, usize, usize, usize)> {
        let mut bb: Option<(usize, usize, usize, usize)> = None;
        for (x, y) in self.foreground() {
            bb = Some(match bb {
                None => (x, y, x, y),
                Some((x0, y0, x1, y1)) => (x0.min(x), y0.min(y), x1.max(x), y1.max(y)),
            });
        }
        bb
    }

    pub fn mirror_horizontal(&self) -> Self {
        Self::from_fn(self.height, self.width, |x, y| {
            self.get(self.width - 1 - x, y)
        })
    }

    /// Exact 90° clockwise rotation (on screen, y pointing down).
    pub fn rotate90(&self) -> Self {
        let (h, w) = (self.height, self.width);
        Self::from_fn(w, h, |x, y| self.get(y, h - 1 - x))
    }

    /// Copies the mask into a larger canvas with its top-left corner at
    /// `(left, top)`. Pixels falling outside the canvas are dropped.
    pub fn placed(&self, height: usize, width: usize, left: i64, top: i64) -> Self {
        let mut out = Self::blank(height, width);
        for (x, y) in self.foreground() {
            let (nx, ny) = (x as i64 + left, y as i64 + top);
            if nx >= 0 && ny >= 0 && (nx as usize) < width && (ny as usize) < height {
                out.set(nx as usize, ny as usize, true);
            }
        }
        out
    }

    /// Grows the canvas by `margin` background pixels on every side.
    pub fn padded(&self, margin: usize) -> Self {
        self.placed(
            self.height + 2 * margin,
            self.width + 2 * margin,
            margin as i64,
            margin as i64,
        )
    }

    /// Mask as 8-bit pixels with foreground 255.
    pub fn to_gray(&self) -> Vec<u8> {
        self.mask.iter().map(|&v| if v { 255 } else { 0 }).collect()
    }
}

/// Thresholds an 8-bit grayscale raster: `pixel >= threshold` is foreground.
pub fn binarize(pixels: &[u8], height: usize, width: usize, threshold: u8) -> Result<Silhouette> {
    if height == 0 || width == 0 || pixels.is_empty() {
        return Err(Error::EmptyImage);
    }
    if pixels.len() != height * width {
        return Err(Error::MaskSize {
            height,
            width,
            len: pixels.len(),
        });
    }
    Silhouette::new(
        height,
        width,
        pixels.iter().map(|&p| p >= threshold).collect(),
    )
}

/// Foreground counts of the four bounding-box quadrants, in the order
/// top-left, top-right, bottom-left, bottom-right.
///
/// The box is split at its midlines; for odd spans the extra row goes to the
/// bottom half and the extra column to the right half.
pub fn quadrant_areas(sil: &Silhouette) -> Result<[usize; 4]> {
    let (x0, y0, x1, y1) = sil
        .bounding_box()
        .ok_or(Error::EmptySilhouette("quadrant areas"))?;
    let split_x = x0 + (x1 - x0 + 1) / 2;
    let split_y = y0 + (y1 - y0 + 1) / 2;
    let mut counts = [0usize; 4];
    for (x, y) in sil.foreground() {
        let idx = (usize::from(y >= split_y) << 1) | usize::from(x >= split_x);
        counts[idx] += 1;
    }
    Ok(counts)
}

/// Foreground centroid in pixel-center coordinates.
pub fn centroid(sil: &Silhouette) -> Result<(f64, f64)> {
    let mut n = 0usize;
    let (mut sx, mut sy) = (0.0f64, 0.0f64);
    for (x, y) in sil.foreground() {
        n += 1;
        sx += x as f64 + 0.5;
        sy += y as f64 + 0.5;
    }
    if n == 0 {
        return Err(Error::EmptySilhouette("centroid"));
    }
    Ok((sx / n as f64, sy / n as f64))
}
