use std::fs;
use std::path::Path;

use qagait_core::geometry::normalize;
use qagait_core::qa::{largest_component, TemplateMeta, TemplateSet};
use qagait_core::silcore::Connectivity;
use qagait_core::Silhouette;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{PipelineError, Result};
use crate::humanoid::{render, Build, Camera, Gender};
use crate::io::{is_image, load_frame, write_pgm};

pub const VIEWS: [u32; 7] = [0, 30, 60, 90, 120, 150, 180];
/// Camera heights in decimeters.
pub const HEIGHTS: [u32; 3] = [15, 25, 35];
pub const GENDERS: [Gender; 2] = [Gender::Female, Gender::Male];
pub const FRAMES: usize = 30;
pub const TEMPLATE_HEIGHT: usize = 64;
pub const TEMPLATE_WIDTH: usize = 44;

/// Vertical squash for a camera height: higher cameras foreshorten more.
pub fn squash_for_height(dm: u32) -> f64 {
    1.0 - 0.08 * (dm as f64 - 15.0) / 10.0
}

pub fn template_name(view: u32, height: u32, gender: Gender, frame: usize) -> String {
    format!("view{view:03}_h{height}_g{}_f{frame:02}.pgm", gender.tag())
}

/// Parses `view{V}_h{H}_g{G}_f{FF}`; anything else yields only the name.
pub fn parse_template_name(file: &str) -> TemplateMeta {
    let stem = file.rsplit_once('.').map_or(file, |(s, _)| s);
    let mut meta = TemplateMeta {
        name: file.to_string(),
        ..TemplateMeta::default()
    };
    let parts: Vec<&str> = stem.split('_').collect();
    if let [v, h, g, f] = parts[..] {
        let num = |s: &str, prefix: &str| s.strip_prefix(prefix).and_then(|r| r.parse::<u32>().ok());
        if let (Some(v), Some(h), Some(f)) = (num(v, "view"), num(h, "h"), num(f, "f")) {
            if let Some(g) = g.strip_prefix('g').filter(|g| !g.is_empty()) {
                meta.view_deg = Some(v as f64);
                meta.height_m = Some(h as f64 / 10.0);
                meta.gender = Some(g.to_string());
                meta.frame_index = Some(f as usize);
            }
        }
    }
    meta
}

/// Render, keep the largest 4-connected part, normalize, and keep the
/// largest 4-connected part again so the frame is a single component.
fn finish(sil: &Silhouette) -> Silhouette {
    let (body, _) = largest_component(sil, Connectivity::Four).expect("rendered figure is nonempty");
    let small = normalize(&body, TEMPLATE_HEIGHT, TEMPLATE_WIDTH).expect("nonempty body");
    largest_component(&small, Connectivity::Four).expect("normalized body is nonempty").0
}

/// All 1260 template frames in file-name order.
pub fn generate_templates(seed: u64) -> Vec<(String, Silhouette)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(VIEWS.len() * HEIGHTS.len() * GENDERS.len() * FRAMES);
    for &view in &VIEWS {
        for &height in &HEIGHTS {
            for &gender in &GENDERS {
                let build = jittered(Build::standard(gender), &mut rng);
                let cam = Camera {
                    view_deg: view as f64,
                    squash: squash_for_height(height),
                };
                for f in 0..FRAMES {
                    let sil = finish(&render(&build, cam, f as f64 / FRAMES as f64));
                    out.push((template_name(view, height, gender, f), sil));
                }
            }
        }
    }
    out
}

fn jittered<R: Rng>(mut b: Build, rng: &mut R) -> Build {
    let mut j = |v: &mut f64, rel: f64| *v *= 1.0 + rng.random_range(-rel..=rel);
    j(&mut b.shoulder_half, 0.03);
    j(&mut b.hip_half, 0.03);
    j(&mut b.torso_depth, 0.03);
    j(&mut b.limb_scale, 0.03);
    j(&mut b.head_r, 0.03);
    j(&mut b.hip_swing, 0.08);
    j(&mut b.arm_swing, 0.1);
    b.phase_offset = rng.random_range(0.0..std::f64::consts::TAU / FRAMES as f64);
    b
}

pub fn write_templates(dir: &Path, seed: u64) -> Result<usize> {
    fs::create_dir_all(dir).map_err(|e| PipelineError::io(dir, e))?;
    let frames = generate_templates(seed);
    for (name, sil) in &frames {
        write_pgm(&dir.join(name), sil)?;
    }
    Ok(frames.len())
}

/// The generated set for seed 0, built in memory.
pub fn fixture_templates() -> TemplateSet {
    let frames = generate_templates(0);
    TemplateSet::from_silhouettes(frames.iter().map(|(n, s)| (parse_template_name(n), s)), "fixture")
        .expect("fixture frames are nonempty")
}

/// Loads every image in `dir` (sorted by file name) as a template.
pub fn load_templates(dir: &Path) -> Result<TemplateSet> {
    let rd = fs::read_dir(dir).map_err(|e| PipelineError::io(dir, e))?;
    let mut names = Vec::new();
    for entry in rd {
        let entry = entry.map_err(|e| PipelineError::io(dir, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if entry.path().is_file() && is_image(&name) {
            names.push(name);
        }
    }
    names.sort();
    let mut frames = Vec::with_capacity(names.len());
    for name in &names {
        let path = dir.join(name);
        let sil = load_frame(&path)?;
        if sil.is_empty() {
            log::warn!("{}: empty template skipped", path.display());
            continue;
        }
        frames.push((parse_template_name(name), sil));
    }
    if frames.is_empty() {
        return Err(PipelineError::Core(qagait_core::Error::NoTemplates));
    }
    Ok(TemplateSet::from_silhouettes(
        frames.iter().map(|(m, s)| (m.clone(), s)),
        dir.display().to_string(),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        let name = template_name(90, 25, Gender::Female, 7);
        assert_eq!(name, "view090_h25_gf_f07.pgm");
        let meta = parse_template_name(&name);
        assert_eq!(meta.view_deg, Some(90.0));
        assert_eq!(meta.height_m, Some(2.5));
        assert_eq!(meta.gender.as_deref(), Some("f"));
        assert_eq!(meta.frame_index, Some(7));
        assert_eq!(parse_template_name("other.pgm").view_deg, None);
    }

    #[test]
    fn squash_levels() {
        assert_eq!(squash_for_height(15), 1.0);
        assert!(squash_for_height(35) < squash_for_height(25));
    }
}
