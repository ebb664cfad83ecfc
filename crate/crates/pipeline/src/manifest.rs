use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use csv::{ReaderBuilder, Terminator, WriterBuilder};
use qagait_core::qa::FrameStatus;

use crate::error::{PipelineError, Result};

pub const HEADER: [&str; 8] = [
    "seq_path",
    "frame_file",
    "frame_index",
    "fg_pixels",
    "max_cc_ratio",
    "template_dist",
    "verdict",
    "align_angle_deg",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Kept,
    RemovedCc,
    RemovedShape,
    KeptRetention,
}

impl Verdict {
    pub const ALL: [Verdict; 4] = [Self::Kept, Self::RemovedCc, Self::RemovedShape, Self::KeptRetention];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Kept => "kept",
            Self::RemovedCc => "removed_cc",
            Self::RemovedShape => "removed_shape",
            Self::KeptRetention => "kept_retention",
        }
    }

    pub fn is_kept(self) -> bool {
        matches!(self, Self::Kept | Self::KeptRetention)
    }
}

impl From<FrameStatus> for Verdict {
    fn from(s: FrameStatus) -> Self {
        match s {
            FrameStatus::Kept => Self::Kept,
            FrameStatus::RemovedBackground => Self::RemovedCc,
            FrameStatus::RemovedShape => Self::RemovedShape,
            FrameStatus::KeptByRetention => Self::KeptRetention,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| format!("unknown verdict {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestRow {
    pub seq_path: String,
    pub frame_file: String,
    pub frame_index: usize,
    pub fg_pixels: usize,
    pub max_cc_ratio: f64,
    pub template_dist: Option<f64>,
    pub verdict: Verdict,
    pub align_angle_deg: Option<f64>,
}

/// Fixed-point formatting without a negative sign on zero.
pub fn fixed(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

impl ManifestRow {
    fn fields(&self) -> [String; 8] {
        [
            self.seq_path.clone(),
            self.frame_file.clone(),
            self.frame_index.to_string(),
            self.fg_pixels.to_string(),
            fixed(self.max_cc_ratio, 4),
            self.template_dist.map_or_else(String::new, |d| fixed(d, 6)),
            self.verdict.to_string(),
            self.align_angle_deg.map_or_else(String::new, |a| fixed(a, 2)),
        ]
    }
}

pub fn write_manifest<W: Write>(out: W, rows: &[ManifestRow]) -> Result<()> {
    let mut w = WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(out);
    let io_err = |e: csv::Error| PipelineError::io("manifest", std::io::Error::other(e.to_string()));
    w.write_record(HEADER).map_err(io_err)?;
    for row in rows {
        w.write_record(row.fields()).map_err(io_err)?;
    }
    w.flush().map_err(|e| PipelineError::io("manifest", e))
}

pub fn manifest_string(rows: &[ManifestRow]) -> String {
    let mut buf = Vec::new();
    write_manifest(&mut buf, rows).expect("in-memory write");
    String::from_utf8(buf).expect("utf-8 fields")
}

fn parse_num<T: FromStr>(s: &str, field: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| PipelineError::Manifest {
        line,
        msg: format!("bad {field} {s:?}"),
    })
}

fn parse_real(s: &str, field: &str, line: usize) -> Result<f64> {
    let v: f64 = parse_num(s, field, line)?;
    if !v.is_finite() {
        return Err(PipelineError::Manifest {
            line,
            msg: format!("non-finite {field}"),
        });
    }
    Ok(v)
}

fn optional(s: &str, field: &str, line: usize) -> Result<Option<f64>> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_real(s, field, line).map(Some)
    }
}

/// Parses a manifest; errors carry the 1-based line number.
pub fn read_manifest<R: Read>(input: R) -> Result<Vec<ManifestRow>> {
    let mut r = ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input);
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| PipelineError::Manifest {
            line: e.position().map_or(i + 1, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(i + 1, |p| p.line() as usize);
        if i == 0 {
            if rec.iter().ne(HEADER) {
                return Err(PipelineError::Manifest {
                    line,
                    msg: "unexpected header".into(),
                });
            }
            continue;
        }
        if rec.len() != HEADER.len() {
            return Err(PipelineError::Manifest {
                line,
                msg: format!("expected {} fields, found {}", HEADER.len(), rec.len()),
            });
        }
        let ratio = parse_real(&rec[4], "max_cc_ratio", line)?;
        if !(0.0..=1.0).contains(&ratio) {
            return Err(PipelineError::Manifest {
                line,
                msg: format!("max_cc_ratio {ratio} outside [0, 1]"),
            });
        }
        rows.push(ManifestRow {
            seq_path: rec[0].to_string(),
            frame_file: rec[1].to_string(),
            frame_index: parse_num(&rec[2], "frame_index", line)?,
            fg_pixels: parse_num(&rec[3], "fg_pixels", line)?,
            max_cc_ratio: ratio,
            template_dist: optional(&rec[5], "template_dist", line)?,
            verdict: rec[6].parse().map_err(|msg| PipelineError::Manifest { line, msg })?,
            align_angle_deg: optional(&rec[7], "align_angle_deg", line)?,
        });
    }
    Ok(rows)
}
