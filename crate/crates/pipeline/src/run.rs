use std::collections::HashMap;
use std::path::{Path, PathBuf};

use qagait_core::geometry::{align_sequence, augment_sequence, LeanLabel};
use qagait_core::qa::{assess_sequence, largest_component, TemplateSet};
use qagait_core::Silhouette;
use rayon::prelude::*;

use crate::config::{sequence_rng, RunConfig};
use crate::error::Result;
use crate::io::{load_frame, pgm_name, write_pgm};
use crate::manifest::{ManifestRow, Verdict};
use crate::scan::SequenceRef;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOutput {
    pub rows: Vec<ManifestRow>,
    pub warnings: Vec<String>,
}

fn out_path(output: &Path, seq_path: &str, frame_file: &str) -> PathBuf {
    seq_path
        .split('/')
        .fold(output.to_path_buf(), |p, c| p.join(c))
        .join(pgm_name(frame_file))
}

fn gather<T: Send>(cfg: &RunConfig, jobs: impl FnOnce() -> Vec<Result<T>> + Send) -> Result<Vec<T>> {
    cfg.pool()?.install(jobs).into_iter().collect()
}

fn merge(parts: Vec<(Vec<ManifestRow>, Vec<String>)>) -> RunOutput {
    let mut out = RunOutput::default();
    for (rows, warnings) in parts {
        for w in &warnings {
            log::warn!("{w}");
        }
        out.rows.extend(rows);
        out.warnings.extend(warnings);
    }
    out
}

/// Quality assessment of every sequence. Rows come back in (sequence,
/// frame) order whatever the worker count; kept frames are written to
/// `output` when given.
pub fn run_assess(
    root: &Path,
    refs: &[SequenceRef],
    cfg: &RunConfig,
    templates: &TemplateSet,
    output: Option<&Path>,
) -> Result<RunOutput> {
    cfg.validate()?;
    let parts = gather(cfg, || {
        refs.par_iter()
            .map(|seq| assess_one(root, seq, cfg, templates, output))
            .collect()
    })?;
    Ok(merge(parts))
}

fn assess_one(
    root: &Path,
    seq: &SequenceRef,
    cfg: &RunConfig,
    templates: &TemplateSet,
    output: Option<&Path>,
) -> Result<(Vec<ManifestRow>, Vec<String>)> {
    let dir = seq.dir(root);
    let mut warnings = Vec::new();
    let loaded: Vec<Option<Silhouette>> = seq
        .frames
        .iter()
        .map(|f| match load_frame(&dir.join(f)) {
            Ok(s) => Some(s),
            Err(e) => {
                warnings.push(format!("{}/{f}: undecodable ({e}), recorded as removed_cc", seq.path));
                None
            }
        })
        .collect();
    let decoded: Vec<Silhouette> = loaded.iter().flatten().cloned().collect();
    let mut verdicts = if decoded.is_empty() {
        Vec::new()
    } else {
        assess_sequence(&decoded, templates, &cfg.qa)?.verdicts
    }
    .into_iter();

    let mut rows = Vec::with_capacity(seq.frames.len());
    for (i, (file, frame)) in seq.frames.iter().zip(&loaded).enumerate() {
        let mut row = ManifestRow {
            seq_path: seq.path.clone(),
            frame_file: file.clone(),
            frame_index: i,
            fg_pixels: 0,
            max_cc_ratio: 0.0,
            template_dist: None,
            verdict: Verdict::RemovedCc,
            align_angle_deg: None,
        };
        if let Some(frame) = frame {
            let v = verdicts.next().expect("one verdict per decoded frame");
            row.fg_pixels = frame.foreground_count();
            row.max_cc_ratio = v.max_cc_ratio;
            row.template_dist = v.template_dist;
            row.verdict = v.status.into();
            if let (Some(out), Some(cleaned)) = (output, &v.cleaned) {
                write_pgm(&out_path(out, &seq.path, file), cleaned)?;
            }
        }
        rows.push(row);
    }
    Ok((rows, warnings))
}

/// Groups manifest rows by sequence, keeping first-appearance order.
fn by_sequence(rows: &[ManifestRow]) -> Vec<(String, Vec<usize>)> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut groups: Vec<(String, Vec<usize>)> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let g = *index.entry(&r.seq_path).or_insert_with(|| {
            groups.push((r.seq_path.clone(), Vec::new()));
            groups.len() - 1
        });
        groups[g].1.push(i);
    }
    groups
}

/// Frame to align: the original file if present, else its `.pgm` output.
fn locate(dir: &Path, frame_file: &str) -> PathBuf {
    let direct = dir.join(frame_file);
    if direct.is_file() {
        direct
    } else {
        dir.join(pgm_name(frame_file))
    }
}

/// Aligns the kept frames of each sequence listed in an assess manifest.
/// Frames are re-cleaned to their largest component before alignment;
/// removed rows pass through untouched.
pub fn run_align(root: &Path, manifest: &[ManifestRow], cfg: &RunConfig, output: &Path) -> Result<RunOutput> {
    cfg.validate()?;
    let groups = by_sequence(manifest);
    let parts = gather(cfg, || {
        groups
            .par_iter()
            .map(|(seq_path, idx)| align_one(root, seq_path, idx, manifest, cfg, output))
            .collect()
    })?;
    Ok(merge(parts))
}

fn align_one(
    root: &Path,
    seq_path: &str,
    idx: &[usize],
    manifest: &[ManifestRow],
    cfg: &RunConfig,
    output: &Path,
) -> Result<(Vec<ManifestRow>, Vec<String>)> {
    let dir = seq_path.split('/').fold(root.to_path_buf(), |p, c| p.join(c));
    let mut rows: Vec<ManifestRow> = idx.iter().map(|&i| manifest[i].clone()).collect();
    let mut warnings = Vec::new();
    let mut frames = Vec::new();
    let mut slots = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        if !row.verdict.is_kept() {
            continue;
        }
        let path = locate(&dir, &row.frame_file);
        match load_frame(&path) {
            Ok(sil) => match largest_component(&sil, cfg.qa.connectivity) {
                Some((clean, _)) => {
                    frames.push(clean);
                    slots.push(k);
                }
                None => warnings.push(format!("{seq_path}/{}: empty frame not aligned", row.frame_file)),
            },
            Err(e) => warnings.push(format!("{seq_path}/{}: not aligned ({e})", row.frame_file)),
        }
    }
    if frames.is_empty() {
        return Ok((rows, warnings));
    }
    let mut rng = sequence_rng(cfg.seed, seq_path);
    let (aligned, plan) = align_sequence(&frames, &cfg.align, &mut rng)?;
    for (j, (&k, sil)) in slots.iter().zip(&aligned).enumerate() {
        let row = &mut rows[k];
        if plan.degenerate[j] {
            warnings.push(format!("{seq_path}/{}: degenerate geometry, tilt taken as 0", row.frame_file));
        }
        row.align_angle_deg = Some(plan.applied_angle(j));
        write_pgm(&out_path(output, seq_path, &row.frame_file), sil)?;
    }
    Ok((rows, warnings))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentRecord {
    pub seq_path: String,
    pub frames: usize,
    pub flipped: bool,
    pub lean: LeanLabel,
    pub rotation: Option<f64>,
    pub erased: bool,
}

/// Sequence-level augmentation of every sequence, written to `output`.
pub fn run_augment(
    root: &Path,
    refs: &[SequenceRef],
    cfg: &RunConfig,
    output: &Path,
) -> Result<(Vec<AugmentRecord>, Vec<String>)> {
    cfg.validate()?;
    let parts = gather(cfg, || {
        refs.par_iter()
            .map(|seq| augment_one(root, seq, cfg, output))
            .collect()
    })?;
    let mut records = Vec::new();
    let mut warnings = Vec::new();
    for (rec, w) in parts {
        for msg in &w {
            log::warn!("{msg}");
        }
        records.extend(rec);
        warnings.extend(w);
    }
    Ok((records, warnings))
}

fn augment_one(
    root: &Path,
    seq: &SequenceRef,
    cfg: &RunConfig,
    output: &Path,
) -> Result<(Option<AugmentRecord>, Vec<String>)> {
    let dir = seq.dir(root);
    let mut warnings = Vec::new();
    let mut frames = Vec::new();
    let mut files = Vec::new();
    for f in &seq.frames {
        match load_frame(&dir.join(f)) {
            Ok(s) => {
                frames.push(s);
                files.push(f);
            }
            Err(e) => warnings.push(format!("{}/{f}: skipped ({e})", seq.path)),
        }
    }
    if frames.is_empty() {
        return Ok((None, warnings));
    }
    let mut rng = sequence_rng(cfg.seed, &seq.path);
    let aug = augment_sequence(&frames, &cfg.aug, &mut rng)?;
    for (f, sil) in files.iter().zip(&aug.frames) {
        write_pgm(&out_path(output, &seq.path, f), sil)?;
    }
    Ok((
        Some(AugmentRecord {
            seq_path: seq.path.clone(),
            frames: aug.frames.len(),
            flipped: aug.flipped,
            lean: aug.lean,
            rotation: aug.rotation,
            erased: aug.erase.is_some(),
        }),
        warnings,
    ))
}
