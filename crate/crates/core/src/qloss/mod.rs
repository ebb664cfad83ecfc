//! Quality indicator from partial feature norms and the two
//! quality-adaptive margin losses. Quality scores are constants with
//! respect to the gradients.

mod gradcheck;
mod qace;
mod quality;
mod synthetic;
mod triplet;

pub use gradcheck::grad_check;
pub use qace::{qace_loss, qace_margins, QaceConfig, QaceOutput};
pub use quality::{
    quality_from_aggregates, quality_indicator, Aggregation, PartialEmbedding, QualityScore, DEFAULT_H, SIGMA_FLOOR,
};
pub use synthetic::{synthetic_batch, SyntheticBatch};
pub use triplet::{
    near_kink_triplets, pair_quality, qatriplet_loss, qatriplet_loss_excluding, qatriplet_margin, PairQuality,
    QatripletConfig, QatripletOutput, Triplet,
};
