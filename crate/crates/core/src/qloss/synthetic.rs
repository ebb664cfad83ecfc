use ndarray::Array2;
use rand::Rng;
use rand_distr::StandardNormal;

use super::quality::PartialEmbedding;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticBatch {
    pub embeddings: Vec<PartialEmbedding>,
    pub labels: Vec<usize>,
    /// One row per class, in the flattened embedding space.
    pub class_weights: Array2<f64>,
}

impl SyntheticBatch {
    /// Embeddings flattened to an `N x (P*d)` matrix.
    pub fn flat(&self) -> Array2<f64> {
        let cols = self.class_weights.ncols();
        let data: Vec<f64> = self.embeddings.iter().flat_map(|e| e.flatten()).collect();
        Array2::from_shape_vec((self.embeddings.len(), cols), data).expect("uniform part shapes")
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_simple_fn((rows, cols), || rng.sample(StandardNormal))
}

/// Gaussian class prototypes plus per-sample noise, each sample scaled by
/// a random factor in [0.5, 1.5] so part norms vary across the batch.
/// Labels cycle through the classes.
pub fn synthetic_batch<R: Rng + ?Sized>(rng: &mut R, n: usize, parts: usize, dim: usize, classes: usize) -> Result<SyntheticBatch> {
    if n < 4 || classes < 2 || n < 2 * classes {
        return Err(Error::InvalidConfig(format!(
            "infeasible batch: N={n}, C={classes} (need N >= 4, C >= 2, N >= 2C)"
        )));
    }
    if parts == 0 || dim == 0 {
        return Err(Error::InvalidConfig(format!("parts {parts} and dim {dim} must be >= 1")));
    }
    let protos: Vec<Array2<f64>> = (0..classes).map(|_| gaussian(rng, parts, dim)).collect();
    let labels: Vec<usize> = (0..n).map(|i| i % classes).collect();
    let embeddings = labels
        .iter()
        .enumerate()
        .map(|(i, &y)| {
            let scale = rng.random_range(0.5..=1.5);
            let parts = (&protos[y] + &(gaussian(rng, parts, dim) * 0.7)) * scale;
            PartialEmbedding::new(parts, format!("seq{i:03}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let flat_dim = parts * dim;
    let mut class_weights = gaussian(rng, classes, flat_dim) * 0.5;
    for (mut row, proto) in class_weights.rows_mut().into_iter().zip(&protos) {
        row += &proto.view().into_shape_with_order(flat_dim).expect("contiguous");
    }
    Ok(SyntheticBatch {
        embeddings,
        labels,
        class_weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shapes_and_determinism() {
        let make = || synthetic_batch(&mut ChaCha8Rng::seed_from_u64(4), 16, 4, 8, 4).unwrap();
        let b = make();
        assert_eq!(b.flat().dim(), (16, 32));
        assert_eq!(b.class_weights.dim(), (4, 32));
        assert_eq!(b.labels.iter().filter(|&&y| y == 3).count(), 4);
        assert_eq!(b, make());
    }

    #[test]
    fn infeasible_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(synthetic_batch(&mut rng, 3, 1, 1, 2).is_err());
        assert!(synthetic_batch(&mut rng, 6, 1, 1, 4).is_err());
        assert!(synthetic_batch(&mut rng, 8, 1, 1, 1).is_err());
    }
}
