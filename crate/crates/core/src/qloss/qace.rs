use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QaceConfig {
    pub m1: f64,
    pub s: f64,
    /// One row per class.
    pub class_weights: Array2<f64>,
    /// Use the target cosine in every non-target exponent instead of each
    /// class's own cosine.
    pub literal_nontarget_logit: bool,
}

impl QaceConfig {
    pub fn new(class_weights: Array2<f64>) -> Self {
        Self {
            m1: 0.1,
            s: 8.0,
            class_weights,
            literal_nontarget_logit: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m1 >= 0.0 && self.m1.is_finite()) {
            return Err(Error::InvalidConfig(format!("m1 {} must be >= 0", self.m1)));
        }
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(Error::InvalidConfig(format!("s {} must be > 0", self.s)));
        }
        if self.class_weights.nrows() < 2 {
            return Err(Error::InvalidConfig(format!(
                "need at least 2 classes, got {}",
                self.class_weights.nrows()
            )));
        }
        Ok(())
    }
}

/// Angular and additive margins for one sample: `(-m1 q, m1 q + m1)`.
pub fn qace_margins(q_hat: f64, m1: f64) -> (f64, f64) {
    (-m1 * q_hat, m1 * q_hat + m1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QaceOutput {
    pub loss: f64,
    pub grad_embeddings: Array2<f64>,
    pub grad_weights: Array2<f64>,
    /// `(m_angle, m_add)` per sample.
    pub margins: Vec<(f64, f64)>,
}

const SIN_FLOOR: f64 = 1e-12;

fn unit_rows(m: ArrayView2<'_, f64>, what: &'static str) -> Result<(Array2<f64>, Array1<f64>)> {
    let norms: Array1<f64> = m.axis_iter(Axis(0)).map(|r| r.dot(&r).sqrt()).collect();
    if let Some(i) = norms.iter().position(|n| !n.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    if let Some(i) = norms.iter().position(|&n| n == 0.0) {
        return Err(Error::ZeroNorm(what, i));
    }
    let unit = &m / &norms.view().insert_axis(Axis(1));
    Ok((unit, norms))
}

/// Gradient of a function of unit rows pulled back to the raw rows.
fn through_normalization(g_unit: &Array2<f64>, unit: &Array2<f64>, norms: &Array1<f64>) -> Array2<f64> {
    let mut out = g_unit.clone();
    for ((mut row, u), &n) in out.axis_iter_mut(Axis(0)).zip(unit.axis_iter(Axis(0))).zip(norms) {
        let radial = row.dot(&u);
        row.scaled_add(-radial, &u);
        row /= n;
    }
    out
}

pub(crate) fn check_batch(n: usize, labels: &[usize], q: &[f64]) -> Result<()> {
    if labels.len() != n || q.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "{n} embeddings, {} labels, {} quality scores",
            labels.len(),
            q.len()
        )));
    }
    if let Some(i) = q.iter().position(|v| !(-1.0..=1.0).contains(v)) {
        return Err(Error::InvalidConfig(format!("q_hat[{i}] = {} outside [-1, 1]", q[i])));
    }
    Ok(())
}

/// Quality-adaptive margin softmax cross-entropy on cosine logits, averaged
/// over the batch, with exact gradients for embeddings and class weights.
pub fn qace_loss(embeddings: ArrayView2<'_, f64>, labels: &[usize], q: &[f64], cfg: &QaceConfig) -> Result<QaceOutput> {
    cfg.validate()?;
    let (n, d) = embeddings.dim();
    let c = cfg.class_weights.nrows();
    check_batch(n, labels, q)?;
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    if cfg.class_weights.ncols() != d {
        return Err(Error::ShapeMismatch(format!(
            "embedding dim {d}, weight dim {}",
            cfg.class_weights.ncols()
        )));
    }
    if let Some(&bad) = labels.iter().find(|&&y| y >= c) {
        return Err(Error::InvalidConfig(format!("label {bad} outside [0, {c})")));
    }

    let (xh, xn) = unit_rows(embeddings, "embedding")?;
    let (wh, wn) = unit_rows(cfg.class_weights.view(), "weight")?;
    let cos = xh.dot(&wh.t());
    let s = cfg.s;

    let mut g_cos = Array2::<f64>::zeros((n, c));
    let mut margins = Vec::with_capacity(n);
    let mut total = 0.0;
    let mut logits = vec![0.0; c];
    for i in 0..n {
        let y = labels[i];
        let (m_angle, m_add) = qace_margins(q[i], cfg.m1);
        let (sin_m, cos_m) = m_angle.sin_cos();
        let cy = cos[[i, y]];
        let sin_t = (1.0 - cy * cy).max(0.0).sqrt();
        let target = s * (cy * cos_m - sin_t * sin_m - m_add);
        let d_target = if sin_t > SIN_FLOOR {
            s * (cos_m + sin_m * cy / sin_t)
        } else {
            s * cos_m
        };
        for (j, l) in logits.iter_mut().enumerate() {
            *l = if j == y {
                target
            } else if cfg.literal_nontarget_logit {
                s * cy
            } else {
                s * cos[[i, j]]
            };
        }
        // loss_i = ln(1 + sum_{j != y} e^(l_j - target)), kept accurate for
        // confident samples where the loss is tiny
        let shift = logits
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != y)
            .fold(0.0f64, |m, (_, &l)| m.max(l - target));
        let rest: f64 = logits
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != y)
            .map(|(_, &l)| (l - target - shift).exp())
            .sum();
        let sample_loss = if shift == 0.0 {
            rest.ln_1p()
        } else {
            shift + ((-shift).exp() + rest).ln()
        };
        total += sample_loss;

        let inv_n = 1.0 / n as f64;
        let lse = target + sample_loss;
        let mut others = 0.0;
        for (j, &l) in logits.iter().enumerate() {
            if j == y {
                continue;
            }
            let p = (l - lse).exp();
            others += p;
            if cfg.literal_nontarget_logit {
                g_cos[[i, y]] += p * s * inv_n;
            } else {
                g_cos[[i, j]] += p * s * inv_n;
            }
        }
        g_cos[[i, y]] -= others * d_target * inv_n;
        margins.push((m_angle, m_add));
    }
    let loss = total / n as f64;
    if !loss.is_finite() {
        return Err(Error::NonFinite(0));
    }

    let grad_embeddings = through_normalization(&g_cos.dot(&wh), &xh, &xn);
    let grad_weights = through_normalization(&g_cos.t().dot(&xh), &wh, &wn);
    Ok(QaceOutput {
        loss,
        grad_embeddings,
        grad_weights,
        margins,
    })
}
