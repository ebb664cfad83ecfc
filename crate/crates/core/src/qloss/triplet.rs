use std::collections::HashSet;

use ndarray::{Array2, ArrayView2, Axis};

use super::qace::check_batch;
use crate::error::{Error, Result};

/// How two quality scores combine into a pair quality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PairQuality {
    #[default]
    MinQualityPair,
    AvgQualityPair,
}

impl PairQuality {
    pub fn apply(self, qa: f64, qb: f64) -> f64 {
        match self {
            Self::MinQualityPair => qa.min(qb),
            Self::AvgQualityPair => (qa + qb) / 2.0,
        }
    }

    fn apply3(self, qa: f64, qp: f64, qn: f64) -> f64 {
        match self {
            Self::MinQualityPair => qa.min(qp).min(qn),
            Self::AvgQualityPair => (qa + qp + qn) / 3.0,
        }
    }
}

pub fn pair_quality(qa: f64, qb: f64, rule: PairQuality) -> f64 {
    rule.apply(qa, qb)
}

/// Pair margin, confined to `[m2, 2 m2]` for `pq` in [-1, 1].
pub fn qatriplet_margin(pq: f64, m2: f64) -> f64 {
    m2 * (1.5 + 0.5 * pq)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QatripletConfig {
    pub m2: f64,
    pub pair_quality: PairQuality,
    /// One margin per triplet from the quality of all three samples, used
    /// for both pairs.
    pub shared_pq: bool,
}

impl Default for QatripletConfig {
    fn default() -> Self {
        Self {
            m2: 0.15,
            pair_quality: PairQuality::MinQualityPair,
            shared_pq: false,
        }
    }
}

impl QatripletConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.m2 > 0.0 && self.m2.is_finite()) {
            return Err(Error::InvalidConfig(format!("m2 {} must be > 0", self.m2)));
        }
        Ok(())
    }

    /// `(m_ap, m_an)` for one triplet.
    pub fn margins(&self, qa: f64, qp: f64, qn: f64) -> (f64, f64) {
        if self.shared_pq {
            let m = qatriplet_margin(self.pair_quality.apply3(qa, qp, qn), self.m2);
            (m, m)
        } else {
            (
                qatriplet_margin(self.pair_quality.apply(qa, qp), self.m2),
                qatriplet_margin(self.pair_quality.apply(qa, qn), self.m2),
            )
        }
    }
}

/// `(anchor, positive, negative)` indices.
pub type Triplet = (usize, usize, usize);

#[derive(Debug, Clone, PartialEq)]
pub struct QatripletOutput {
    pub loss: f64,
    pub grad_embeddings: Array2<f64>,
    pub triplets: usize,
    pub active: usize,
    /// Smallest and largest margin used by any triplet.
    pub margin_range: (f64, f64),
}

fn for_each_triplet(labels: &[usize], mut f: impl FnMut(Triplet)) {
    let n = labels.len();
    for a in 0..n {
        for p in (0..n).filter(|&p| p != a && labels[p] == labels[a]) {
            for neg in (0..n).filter(|&j| labels[j] != labels[a]) {
                f((a, p, neg));
            }
        }
    }
}

fn distances(x: ArrayView2<'_, f64>) -> Array2<f64> {
    let n = x.nrows();
    let mut d = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            let diff = &x.row(i) - &x.row(j);
            let v = diff.dot(&diff).sqrt();
            d[[i, j]] = v;
            d[[j, i]] = v;
        }
    }
    d
}

fn term(dist: &Array2<f64>, q: &[f64], cfg: &QatripletConfig, (a, p, n): Triplet) -> (f64, f64, f64) {
    let (m_ap, m_an) = cfg.margins(q[a], q[p], q[n]);
    ((dist[[a, p]] + m_ap) - (dist[[a, n]] - m_an), m_ap, m_an)
}

/// Batch-all quality-adaptive triplet loss on Euclidean distances, averaged
/// over the triplets with a positive hinge.
pub fn qatriplet_loss(embeddings: ArrayView2<'_, f64>, labels: &[usize], q: &[f64], cfg: &QatripletConfig) -> Result<QatripletOutput> {
    qatriplet_loss_excluding(embeddings, labels, q, cfg, &HashSet::new())
}

/// Same loss with the given triplets left out of both value and gradient.
pub fn qatriplet_loss_excluding(
    embeddings: ArrayView2<'_, f64>,
    labels: &[usize],
    q: &[f64],
    cfg: &QatripletConfig,
    excluded: &HashSet<Triplet>,
) -> Result<QatripletOutput> {
    cfg.validate()?;
    let (n, _) = embeddings.dim();
    check_batch(n, labels, q)?;
    if let Some(i) = embeddings.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let dist = distances(embeddings);
    let mut grad = Array2::<f64>::zeros(embeddings.dim());
    let (mut triplets, mut active, mut sum) = (0usize, 0usize, 0.0);
    let mut margin_range = (f64::INFINITY, f64::NEG_INFINITY);
    for_each_triplet(labels, |t| {
        triplets += 1;
        if excluded.contains(&t) {
            return;
        }
        let (value, m_ap, m_an) = term(&dist, q, cfg, t);
        margin_range.0 = margin_range.0.min(m_ap).min(m_an);
        margin_range.1 = margin_range.1.max(m_ap).max(m_an);
        if value <= 0.0 {
            return;
        }
        active += 1;
        sum += value;
        let (a, p, neg) = t;
        // d|u|/du = u/|u|, zero subgradient at coincident points
        let mut pull = |other: usize, sign: f64| {
            let d = dist[[a, other]];
            if d > 0.0 {
                let u = (&embeddings.row(a) - &embeddings.row(other)) * (sign / d);
                grad.row_mut(a).scaled_add(1.0, &u);
                grad.row_mut(other).scaled_add(-1.0, &u);
            }
        };
        pull(p, 1.0);
        pull(neg, -1.0);
    });
    if triplets == 0 {
        return Err(Error::NoTriplets);
    }
    let loss = if active > 0 {
        grad /= active as f64;
        sum / active as f64
    } else {
        0.0
    };
    Ok(QatripletOutput {
        loss,
        grad_embeddings: grad,
        triplets,
        active,
        margin_range,
    })
}

/// Triplets whose hinge argument lies within `tol` of the kink.
pub fn near_kink_triplets(
    embeddings: ArrayView2<'_, f64>,
    labels: &[usize],
    q: &[f64],
    cfg: &QatripletConfig,
    tol: f64,
) -> Result<HashSet<Triplet>> {
    check_batch(embeddings.len_of(Axis(0)), labels, q)?;
    let dist = distances(embeddings);
    let mut out = HashSet::new();
    for_each_triplet(labels, |t| {
        if term(&dist, q, cfg, t).0.abs() <= tol {
            out.insert(t);
        }
    });
    Ok(out)
}
