//! Frame quality assessment: largest-component filtering, Hu-moment template
//! matching and the per-sequence retention rule.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::silcore::{connected_components, hu_vector, moments, Connectivity, HuVector, Silhouette};

/// How two Hu vectors are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MatchMethod {
    /// `sum |1/mA - 1/mB|`
    #[default]
    I1,
    /// `sum |mA - mB|`
    I2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QaConfig {
    /// Minimum share of foreground the largest component must hold.
    pub eps: f64,
    /// Maximum shape distance to the nearest template.
    pub tau: f64,
    pub min_frames: usize,
    pub connectivity: Connectivity,
    pub method: MatchMethod,
    /// Re-admit removed frames until `min_frames` are kept.
    pub retention: bool,
}

impl Default for QaConfig {
    fn default() -> Self {
        Self {
            eps: 0.95,
            tau: 0.001,
            min_frames: 15,
            connectivity: Connectivity::Eight,
            method: MatchMethod::I1,
            retention: true,
        }
    }
}

impl QaConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(Error::InvalidConfig(format!("eps {} outside (0, 1]", self.eps)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidConfig(format!("tau {} must be > 0", self.tau)));
        }
        if self.min_frames == 0 {
            return Err(Error::InvalidConfig("min_frames must be >= 1".into()));
        }
        Ok(())
    }
}

/// Where a template frame came from in the standard walk set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TemplateMeta {
    pub name: String,
    pub view_deg: Option<f64>,
    pub height_m: Option<f64>,
    pub gender: Option<String>,
    pub frame_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TemplateEntry {
    pub meta: TemplateMeta,
    pub hu: HuVector,
}

/// Reference shapes for template matching. Never empty.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateSet {
    entries: Vec<TemplateEntry>,
    source: String,
}

impl TemplateSet {
    pub fn new(entries: Vec<TemplateEntry>, source: impl Into<String>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::NoTemplates);
        }
        Ok(Self {
            entries,
            source: source.into(),
        })
    }

    /// Computes Hu vectors for each silhouette; empty silhouettes are
    /// rejected.
    pub fn from_silhouettes<'a>(
        frames: impl IntoIterator<Item = (TemplateMeta, &'a Silhouette)>,
        source: impl Into<String>,
    ) -> Result<Self> {
        let entries = frames
            .into_iter()
            .map(|(meta, sil)| {
                let hu = hu_vector(&moments(sil)?);
                Ok(TemplateEntry { meta, hu })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries, source)
    }

    pub fn entries(&self) -> &[TemplateEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Smallest distance from `hu` to any template. Templates that cannot
    /// be compared (no shared defined term) are skipped; `None` when none
    /// can.
    pub fn nearest(&self, hu: &HuVector, method: MatchMethod) -> Option<f64> {
        self.entries
            .iter()
            .filter_map(|t| shape_distance_with(hu, &t.hu, method).ok())
            .min_by(f64::total_cmp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrameStatus {
    Kept,
    RemovedBackground,
    RemovedShape,
    KeptByRetention,
}

impl FrameStatus {
    pub fn is_kept(self) -> bool {
        matches!(self, Self::Kept | Self::KeptByRetention)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameVerdict {
    pub status: FrameStatus,
    /// Largest-component version of the frame, present iff kept.
    pub cleaned: Option<Silhouette>,
    pub max_cc_ratio: f64,
    /// Distance to the nearest template; absent when matching never ran or
    /// the shape had no comparable Hu terms.
    pub template_dist: Option<f64>,
}

/// Keeps only the largest component. Returns the cleaned mask and the
/// component's share of foreground, or `None` for an empty frame.
pub fn largest_component(sil: &Silhouette, connectivity: Connectivity) -> Option<(Silhouette, f64)> {
    let labeling = connected_components(sil, connectivity);
    let id = labeling.max_component_id()?;
    let total: usize = labeling.component_areas().iter().sum();
    let ratio = labeling.area(id) as f64 / total as f64;
    Some((labeling.component_mask(id), ratio))
}

/// Largest-component check. A frame whose main component holds at least
/// `eps` of the foreground comes back provisionally kept with everything
/// else zeroed; otherwise it is removed as background noise.
pub fn max_connect_filter(sil: &Silhouette, cfg: &QaConfig) -> FrameVerdict {
    match largest_component(sil, cfg.connectivity) {
        Some((cleaned, ratio)) if ratio >= cfg.eps => FrameVerdict {
            status: FrameStatus::Kept,
            cleaned: Some(cleaned),
            max_cc_ratio: ratio,
            template_dist: None,
        },
        other => FrameVerdict {
            status: FrameStatus::RemovedBackground,
            cleaned: None,
            max_cc_ratio: other.map_or(0.0, |(_, r)| r),
            template_dist: None,
        },
    }
}

/// Method-I1 distance between two Hu signatures.
pub fn shape_distance(a: &HuVector, b: &HuVector) -> Result<f64> {
    shape_distance_with(a, b, MatchMethod::I1)
}

/// Sums per-term differences over terms defined in both vectors. I1 also
/// skips terms whose log value is exactly zero, since they have no inverse.
pub fn shape_distance_with(a: &HuVector, b: &HuVector, method: MatchMethod) -> Result<f64> {
    let mut used = 0;
    let mut sum = 0.0;
    for (ma, mb) in a.logsig.iter().zip(&b.logsig) {
        let (Some(ma), Some(mb)) = (*ma, *mb) else {
            continue;
        };
        match method {
            MatchMethod::I1 => {
                if ma == 0.0 || mb == 0.0 {
                    continue;
                }
                sum += (1.0 / ma - 1.0 / mb).abs();
            }
            MatchMethod::I2 => sum += (ma - mb).abs(),
        }
        used += 1;
    }
    if used == 0 {
        return Err(Error::DegenerateShape);
    }
    Ok(sum)
}

fn match_cleaned(cleaned: &Silhouette, templates: &TemplateSet, cfg: &QaConfig) -> (FrameStatus, Option<f64>) {
    let dist = moments(cleaned)
        .ok()
        .and_then(|m| templates.nearest(&hu_vector(&m), cfg.method));
    let status = match dist {
        Some(d) if d <= cfg.tau => FrameStatus::Kept,
        _ => FrameStatus::RemovedShape,
    };
    (status, dist)
}

/// Compares an already cleaned frame with every template and keeps it when
/// the nearest lies within `tau`.
pub fn template_match(sil: &Silhouette, templates: &TemplateSet, cfg: &QaConfig) -> Result<FrameVerdict> {
    if templates.is_empty() {
        return Err(Error::NoTemplates);
    }
    let max_cc_ratio = largest_component(sil, cfg.connectivity).map_or(0.0, |(_, r)| r);
    let (status, template_dist) = match_cleaned(sil, templates, cfg);
    Ok(FrameVerdict {
        status,
        cleaned: status.is_kept().then(|| sil.clone()),
        max_cc_ratio,
        template_dist,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceAssessment {
    pub verdicts: Vec<FrameVerdict>,
    pub kept_count: usize,
    pub removed_cc_count: usize,
    pub removed_shape_count: usize,
    pub retention_invoked: bool,
}

/// Runs both checks on every frame, then applies the retention rule.
///
/// Retention re-admits removed frames until `min(min_frames, frames.len())`
/// are kept: shape rejects first by ascending template distance, then
/// background rejects by descending component ratio. Re-admitted frames
/// carry their largest-component cleaning. Empty frames are never
/// re-admitted.
pub fn assess_sequence(frames: &[Silhouette], templates: &TemplateSet, cfg: &QaConfig) -> Result<SequenceAssessment> {
    cfg.validate()?;
    if frames.is_empty() {
        return Err(Error::EmptySequence);
    }
    if templates.is_empty() {
        return Err(Error::NoTemplates);
    }

    let mut verdicts: Vec<FrameVerdict> = frames
        .iter()
        .map(|frame| {
            let mut verdict = max_connect_filter(frame, cfg);
            if let Some(cleaned) = verdict.cleaned.take() {
                let (status, dist) = match_cleaned(&cleaned, templates, cfg);
                verdict.status = status;
                verdict.template_dist = dist;
                verdict.cleaned = status.is_kept().then_some(cleaned);
            }
            verdict
        })
        .collect();

    let target = cfg.min_frames.min(frames.len());
    let mut kept = verdicts.iter().filter(|v| v.status.is_kept()).count();
    let mut retention_invoked = false;
    if cfg.retention && kept < target {
        retention_invoked = true;
        for idx in retention_order(&verdicts) {
            if kept >= target {
                break;
            }
            let Some((cleaned, _)) = largest_component(&frames[idx], cfg.connectivity) else {
                continue;
            };
            let v = &mut verdicts[idx];
            v.status = FrameStatus::KeptByRetention;
            v.cleaned = Some(cleaned);
            kept += 1;
        }
    }

    let count = |s: FrameStatus| verdicts.iter().filter(|v| v.status == s).count();
    let removed_cc_count = count(FrameStatus::RemovedBackground);
    let removed_shape_count = count(FrameStatus::RemovedShape);
    Ok(SequenceAssessment {
        kept_count: kept,
        removed_cc_count,
        removed_shape_count,
        retention_invoked,
        verdicts,
    })
}

fn retention_order(verdicts: &[FrameVerdict]) -> Vec<usize> {
    // shape rejects with a distance, shape rejects without one, then
    // background rejects that still have foreground
    let rank = |v: &FrameVerdict| match (v.status, v.template_dist) {
        (FrameStatus::RemovedShape, Some(_)) => 0u8,
        (FrameStatus::RemovedShape, None) => 1,
        _ => 2,
    };
    let mut order: Vec<usize> = verdicts
        .iter()
        .enumerate()
        .filter(|(_, v)| match v.status {
            FrameStatus::RemovedShape => true,
            FrameStatus::RemovedBackground => v.max_cc_ratio > 0.0,
            _ => false,
        })
        .map(|(i, _)| i)
        .collect();
    order.sort_by(|&a, &b| {
        let (va, vb) = (&verdicts[a], &verdicts[b]);
        rank(va)
            .cmp(&rank(vb))
            .then_with(|| match (va.status, va.template_dist, vb.template_dist) {
                (FrameStatus::RemovedShape, Some(da), Some(db)) => da.total_cmp(&db),
                (FrameStatus::RemovedBackground, _, _) => vb.max_cc_ratio.total_cmp(&va.max_cc_ratio),
                _ => Ordering::Equal,
            })
            .then(a.cmp(&b))
    });
    order
}
