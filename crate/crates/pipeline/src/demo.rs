use std::fmt::Write;

use ndarray::{Array2, ArrayView2, Axis};
use qagait_core::qloss::{
    grad_check, near_kink_triplets, qace_loss, qatriplet_loss_excluding, quality_indicator, synthetic_batch,
    Aggregation, PairQuality, QaceConfig, QatripletConfig, DEFAULT_H,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemoParams {
    pub seed: u64,
    pub n: usize,
    pub dim: usize,
    pub parts: usize,
    pub classes: usize,
    pub m1: f64,
    pub scale: f64,
    pub m2: f64,
    pub aggregation: Aggregation,
    pub pair_quality: PairQuality,
}

impl Default for DemoParams {
    fn default() -> Self {
        Self {
            seed: 0,
            n: 16,
            dim: 32,
            parts: 16,
            classes: 4,
            m1: 0.1,
            scale: 8.0,
            m2: 0.15,
            aggregation: Aggregation::AvgPartial,
            pair_quality: PairQuality::MinQualityPair,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemoReport {
    pub q_hat: Vec<f64>,
    pub l1: f64,
    pub l3: f64,
    pub m_angle_range: (f64, f64),
    pub m_add_range: (f64, f64),
    pub triplet_margin_range: (f64, f64),
    pub active_triplets: usize,
    pub triplets: usize,
    pub qace_grad_error: f64,
    pub triplet_grad_error: f64,
    pub kink_excluded: usize,
    /// |QACE(m1 = 0) - plain scaled-softmax CE|.
    pub plain_ce_gap: f64,
}

/// Scaled-softmax cross-entropy on cosine logits, computed directly.
fn plain_ce(x: ArrayView2<'_, f64>, labels: &[usize], w: ArrayView2<'_, f64>, s: f64) -> f64 {
    let unit = |m: ArrayView2<'_, f64>| {
        let mut u = m.to_owned();
        for mut row in u.axis_iter_mut(Axis(0)) {
            let n = row.dot(&row).sqrt();
            row /= n;
        }
        u
    };
    let logits = unit(x).dot(&unit(w).t()) * s;
    let mut total = 0.0;
    for (row, &y) in logits.axis_iter(Axis(0)).zip(labels) {
        let max = row.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        let lse = max + row.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        total += lse - row[y];
    }
    total / labels.len() as f64
}

fn range(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

pub fn loss_demo(p: &DemoParams) -> Result<DemoReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let batch = synthetic_batch(&mut rng, p.n, p.parts, p.dim, p.classes)?;
    let q_hat: Vec<f64> = quality_indicator(&batch.embeddings, p.aggregation, DEFAULT_H)?
        .iter()
        .map(|s| s.q_hat)
        .collect();
    let x = batch.flat();
    let labels = &batch.labels;
    let (n, d) = x.dim();
    let c = batch.class_weights.nrows();

    let qace_cfg = |w: Array2<f64>, m1: f64| QaceConfig {
        m1,
        s: p.scale,
        ..QaceConfig::new(w)
    };
    let qace = qace_loss(x.view(), labels, &q_hat, &qace_cfg(batch.class_weights.clone(), p.m1))?;
    let zero = qace_loss(x.view(), labels, &q_hat, &qace_cfg(batch.class_weights.clone(), 0.0))?;
    let plain_ce_gap = (zero.loss - plain_ce(x.view(), labels, batch.class_weights.view(), p.scale)).abs();

    let point: Vec<f64> = x.iter().chain(batch.class_weights.iter()).copied().collect();
    let analytic: Vec<f64> = qace.grad_embeddings.iter().chain(qace.grad_weights.iter()).copied().collect();
    let qace_grad_error = grad_check(
        |v| {
            let xs = Array2::from_shape_vec((n, d), v[..n * d].to_vec()).expect("shape");
            let ws = Array2::from_shape_vec((c, d), v[n * d..].to_vec()).expect("shape");
            qace_loss(xs.view(), labels, &q_hat, &qace_cfg(ws, p.m1)).map_or(f64::NAN, |o| o.loss)
        },
        &analytic,
        &point,
        1e-5,
    )?;

    let tcfg = QatripletConfig {
        m2: p.m2,
        pair_quality: p.pair_quality,
        shared_pq: false,
    };
    let kinks = near_kink_triplets(x.view(), labels, &q_hat, &tcfg, 1e-6)?;
    let trip = qatriplet_loss_excluding(x.view(), labels, &q_hat, &tcfg, &kinks)?;
    let full = qatriplet_loss_excluding(x.view(), labels, &q_hat, &tcfg, &Default::default())?;
    let triplet_grad_error = grad_check(
        |v| {
            let xs = Array2::from_shape_vec((n, d), v.to_vec()).expect("shape");
            qatriplet_loss_excluding(xs.view(), labels, &q_hat, &tcfg, &kinks).map_or(f64::NAN, |o| o.loss)
        },
        &trip.grad_embeddings.iter().copied().collect::<Vec<_>>(),
        &x.iter().copied().collect::<Vec<_>>(),
        1e-5,
    )?;

    Ok(DemoReport {
        m_angle_range: range(qace.margins.iter().map(|m| m.0)),
        m_add_range: range(qace.margins.iter().map(|m| m.1)),
        q_hat,
        l1: qace.loss,
        l3: full.loss,
        triplet_margin_range: full.margin_range,
        active_triplets: full.active,
        triplets: full.triplets,
        qace_grad_error,
        triplet_grad_error,
        kink_excluded: kinks.len(),
        plain_ce_gap,
    })
}

impl DemoReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let (lo, hi) = range(self.q_hat.iter().copied());
        let mean = self.q_hat.iter().sum::<f64>() / self.q_hat.len() as f64;
        let mut bins = [0usize; 4];
        for &q in &self.q_hat {
            bins[(((q + 1.0) / 0.5) as usize).min(3)] += 1;
        }
        writeln!(s, "q_hat: min {lo:.4} mean {mean:.4} max {hi:.4}").unwrap();
        writeln!(
            s,
            "q_hat histogram [-1,-0.5) [-0.5,0) [0,0.5) [0.5,1]: {} {} {} {}",
            bins[0], bins[1], bins[2], bins[3]
        )
        .unwrap();
        writeln!(s, "qace m_angle range: [{:.4}, {:.4}]", self.m_angle_range.0, self.m_angle_range.1).unwrap();
        writeln!(s, "qace m_add range: [{:.4}, {:.4}]", self.m_add_range.0, self.m_add_range.1).unwrap();
        writeln!(
            s,
            "qatriplet margin range: [{:.4}, {:.4}]",
            self.triplet_margin_range.0, self.triplet_margin_range.1
        )
        .unwrap();
        writeln!(s, "L1 (qace) = {:.6}", self.l1).unwrap();
        writeln!(
            s,
            "L3 (qatriplet) = {:.6} over {} of {} triplets",
            self.l3, self.active_triplets, self.triplets
        )
        .unwrap();
        writeln!(s, "L = L1 + L3 = {:.6}", self.l1 + self.l3).unwrap();
        writeln!(s, "qace m1=0 vs plain CE: |diff| = {:.3e}", self.plain_ce_gap).unwrap();
        writeln!(s, "grad check qace: max rel error {:.3e}", self.qace_grad_error).unwrap();
        writeln!(
            s,
            "grad check qatriplet: max rel error {:.3e} ({} kink triplets excluded)",
            self.triplet_grad_error, self.kink_excluded
        )
        .unwrap();
        s
    }
}
