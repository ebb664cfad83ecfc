use ndarray::{Array2, ArrayView2, Axis};

use crate::error::{Error, Result};

/// Per-sequence partial features, one row per horizontal strip.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialEmbedding {
    parts: Array2<f64>,
    pub sequence_id: String,
}

impl PartialEmbedding {
    pub fn new(parts: Array2<f64>, sequence_id: impl Into<String>) -> Result<Self> {
        if parts.nrows() == 0 || parts.ncols() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "partial embedding must be at least 1x1, got {}x{}",
                parts.nrows(),
                parts.ncols()
            )));
        }
        if let Some(i) = parts.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self {
            parts,
            sequence_id: sequence_id.into(),
        })
    }

    pub fn parts(&self) -> ArrayView2<'_, f64> {
        self.parts.view()
    }

    pub fn part_norms(&self) -> Vec<f64> {
        self.parts
            .axis_iter(Axis(0))
            .map(|row| row.dot(&row).sqrt())
            .collect()
    }

    /// Parts concatenated into one vector.
    pub fn flatten(&self) -> Vec<f64> {
        self.parts.iter().copied().collect()
    }
}

/// How the part norms of one sample are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Aggregation {
    SumPartial,
    MinPartial,
    #[default]
    AvgPartial,
}

impl Aggregation {
    pub fn apply(self, norms: &[f64]) -> f64 {
        match self {
            Self::SumPartial => norms.iter().sum(),
            Self::MinPartial => norms.iter().copied().fold(f64::INFINITY, f64::min),
            Self::AvgPartial => norms.iter().sum::<f64>() / norms.len() as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityScore {
    pub q_hat: f64,
    pub aggregation: Aggregation,
}

pub const DEFAULT_H: f64 = 0.33;
pub const SIGMA_FLOOR: f64 = 1e-8;

/// Batch-standardized quality, clamped to [-1, 1]. Population statistics;
/// an uninformative batch (sigma below the floor) scores 0 everywhere.
pub fn quality_from_aggregates(aggregates: &[f64], h: f64) -> Result<Vec<f64>> {
    if aggregates.len() < 2 {
        return Err(Error::DegenerateBatch);
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidConfig(format!("h {h} must be > 0")));
    }
    if let Some(i) = aggregates.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let n = aggregates.len() as f64;
    let mean = aggregates.iter().sum::<f64>() / n;
    let var = aggregates.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
    let sigma = var.sqrt();
    if sigma < SIGMA_FLOOR {
        return Ok(vec![0.0; aggregates.len()]);
    }
    Ok(aggregates
        .iter()
        .map(|a| ((a - mean) / (sigma / h)).clamp(-1.0, 1.0))
        .collect())
}

pub fn quality_indicator(batch: &[PartialEmbedding], aggregation: Aggregation, h: f64) -> Result<Vec<QualityScore>> {
    let aggregates: Vec<f64> = batch.iter().map(|e| aggregation.apply(&e.part_norms())).collect();
    Ok(quality_from_aggregates(&aggregates, h)?
        .into_iter()
        .map(|q_hat| QualityScore { q_hat, aggregation })
        .collect())
}
