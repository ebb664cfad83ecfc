use std::collections::BTreeMap;
use std::fmt::Write;

use crate::error::{PipelineError, Result};
use crate::manifest::{ManifestRow, Verdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub total: usize,
    /// Count per verdict, in `Verdict::ALL` order.
    pub counts: [usize; 4],
    pub sequences: usize,
    pub min_kept_per_sequence: usize,
    pub retention_sequences: usize,
}

/// `100 * part / whole` rounded half up to one decimal, from integers.
pub fn percent(part: usize, whole: usize) -> String {
    let tenths = (part as u128 * 2000 + whole as u128) / (2 * whole as u128);
    format!("{}.{}", tenths / 10, tenths % 10)
}

impl Report {
    pub fn from_rows(rows: &[ManifestRow]) -> Result<Self> {
        if rows.is_empty() {
            return Err(PipelineError::Empty("empty manifest".into()));
        }
        let mut counts = [0usize; 4];
        let mut per_seq: BTreeMap<&str, (usize, bool)> = BTreeMap::new();
        for r in rows {
            let i = Verdict::ALL.iter().position(|&v| v == r.verdict).expect("closed vocabulary");
            counts[i] += 1;
            let e = per_seq.entry(&r.seq_path).or_default();
            if r.verdict.is_kept() {
                e.0 += 1;
            }
            if r.verdict == Verdict::KeptRetention {
                e.1 = true;
            }
        }
        Ok(Self {
            total: rows.len(),
            counts,
            sequences: per_seq.len(),
            min_kept_per_sequence: per_seq.values().map(|e| e.0).min().unwrap_or(0),
            retention_sequences: per_seq.values().filter(|e| e.1).count(),
        })
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.counts[Verdict::ALL.iter().position(|&x| x == v).expect("closed vocabulary")]
    }

    pub fn removed(&self) -> usize {
        self.count(Verdict::RemovedCc) + self.count(Verdict::RemovedShape)
    }

    /// Human-readable summary followed by `key=value` lines.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let pct = |n| percent(n, self.total);
        writeln!(s, "frames: {}", self.total).unwrap();
        for v in Verdict::ALL {
            writeln!(s, "{}: {} ({}%)", v, self.count(v), pct(self.count(v))).unwrap();
        }
        writeln!(s, "removed: {}%", pct(self.removed())).unwrap();
        writeln!(s, "sequences: {}", self.sequences).unwrap();
        writeln!(s, "min kept per sequence: {}", self.min_kept_per_sequence).unwrap();
        writeln!(s, "sequences using retention: {}", self.retention_sequences).unwrap();
        s.push('\n');
        writeln!(s, "total={}", self.total).unwrap();
        for v in Verdict::ALL {
            writeln!(s, "{v}={}", self.count(v)).unwrap();
            writeln!(s, "{v}_pct={}", pct(self.count(v))).unwrap();
        }
        writeln!(s, "removed={}", self.removed()).unwrap();
        writeln!(s, "removed_pct={}", pct(self.removed())).unwrap();
        writeln!(s, "sequences={}", self.sequences).unwrap();
        writeln!(s, "min_kept_per_sequence={}", self.min_kept_per_sequence).unwrap();
        writeln!(s, "retention_sequences={}", self.retention_sequences).unwrap();
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(spec: &[(&str, Verdict, usize)]) -> Vec<ManifestRow> {
        let mut out = Vec::new();
        for &(seq, v, n) in spec {
            for _ in 0..n {
                out.push(ManifestRow {
                    seq_path: seq.into(),
                    frame_file: format!("{}.png", out.len()),
                    frame_index: out.len(),
                    fg_pixels: 10,
                    max_cc_ratio: 1.0,
                    template_dist: None,
                    verdict: v,
                    align_angle_deg: None,
                });
            }
        }
        out
    }

    #[test]
    fn hundred_rows() {
        let r = Report::from_rows(&rows(&[
            ("a", Verdict::Kept, 50),
            ("a", Verdict::RemovedCc, 5),
            ("b", Verdict::Kept, 40),
            ("b", Verdict::RemovedShape, 2),
            ("b", Verdict::KeptRetention, 3),
        ]))
        .unwrap();
        let text = r.render();
        assert!(text.contains("removed: 7.0%\n"));
        assert!(text.contains("removed_pct=7.0\n"));
        assert!(text.contains("kept=90\n"));
        assert_eq!(r.min_kept_per_sequence, 43);
        assert_eq!(r.retention_sequences, 1);
    }

    #[test]
    fn all_kept() {
        let r = Report::from_rows(&rows(&[("a", Verdict::Kept, 9)])).unwrap();
        assert!(r.render().contains("removed: 0.0%"));
    }

    #[test]
    fn empty_manifest() {
        let err = Report::from_rows(&[]).unwrap_err();
        assert_eq!(err.to_string(), "empty manifest");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn percent_rounding() {
        assert_eq!(percent(1, 3), "33.3");
        assert_eq!(percent(2, 3), "66.7");
        assert_eq!(percent(1, 2000), "0.1");
        assert_eq!(percent(7, 7), "100.0");
    }
}
