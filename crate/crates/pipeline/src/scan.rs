use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{PipelineError, Result};
use crate::io::is_image;

/// One leaf directory of frames.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceRef {
    /// Path relative to the dataset root, `/`-separated.
    pub path: String,
    pub subject_id: String,
    pub type_tag: String,
    pub view_tag: String,
    /// File names, sorted.
    pub frames: Vec<String>,
}

impl SequenceRef {
    pub fn dir(&self, root: &Path) -> PathBuf {
        self.path.split('/').fold(root.to_path_buf(), |p, c| p.join(c))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanResult {
    pub sequences: Vec<SequenceRef>,
    pub warnings: Vec<String>,
}

pub const DEFAULT_DEPTH: usize = 3;

fn sorted_entries(dir: &Path) -> Result<Vec<(String, PathBuf)>> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| PipelineError::io(dir, e))? {
        let entry = entry.map_err(|e| PipelineError::io(dir, e))?;
        out.push((entry.file_name().to_string_lossy().into_owned(), entry.path()));
    }
    out.sort();
    Ok(out)
}

/// Finds `root/ID/TYPE/VIEW/*.png|*.pgm` (or `depth` levels in general),
/// one sequence per leaf directory, in lexicographic order.
pub fn scan_dataset(root: &Path, depth: usize) -> Result<ScanResult> {
    if depth == 0 {
        return Err(PipelineError::Usage("scan depth must be >= 1".into()));
    }
    if !root.is_dir() {
        return Err(PipelineError::io(
            root,
            std::io::Error::new(std::io::ErrorKind::NotFound, "dataset root is not a directory"),
        ));
    }
    let mut result = ScanResult::default();
    walk(root, &mut Vec::new(), depth, &mut result)?;
    Ok(result)
}

fn walk(dir: &Path, parts: &mut Vec<String>, depth: usize, out: &mut ScanResult) -> Result<()> {
    let entries = sorted_entries(dir)?;
    if parts.len() == depth {
        let frames: Vec<String> = entries
            .into_iter()
            .filter(|(name, path)| path.is_file() && is_image(name))
            .map(|(name, _)| name)
            .collect();
        let rel = parts.join("/");
        if frames.is_empty() {
            let msg = format!("{rel}: no images, skipped");
            log::warn!("{msg}");
            out.warnings.push(msg);
            return Ok(());
        }
        let (subject_id, view_tag) = (parts[0].clone(), parts[parts.len() - 1].clone());
        let type_tag = if parts.len() > 2 {
            parts[1..parts.len() - 1].join("/")
        } else {
            String::new()
        };
        out.sequences.push(SequenceRef {
            path: rel,
            subject_id,
            type_tag,
            view_tag,
            frames,
        });
        return Ok(());
    }
    for (name, path) in entries {
        if path.is_dir() {
            parts.push(name);
            walk(&path, parts, depth, out)?;
            parts.pop();
        }
    }
    Ok(())
}
