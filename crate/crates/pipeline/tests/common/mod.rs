#![allow(dead_code)]

use std::collections::VecDeque;
use std::fs;
use std::path::Path;

use ndarray::{ArrayView1, ArrayView2};
use qagait_core::Silhouette;
use qagait_pipeline::io::write_pgm;
use qagait_pipeline::manifest::Verdict;
use qagait_pipeline::templates::generate_templates;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CANVAS_H: usize = 72;
pub const CANVAS_W: usize = 52;

/// Figures that are rigid copies of template frames, so template distance
/// is zero up to rounding.
pub struct Figures {
    frames: Vec<Silhouette>,
}

impl Figures {
    pub fn new() -> Self {
        Self {
            frames: generate_templates(0).into_iter().map(|(_, s)| s).collect(),
        }
    }

    /// Variant `i % 3`: shifted, turned upside down, or shifted with a
    /// detached 2x2 speck in the corner.
    pub fn humanoid(&self, seq: usize, i: usize) -> Silhouette {
        let base = &self.frames[(seq * 97 + i * 53) % self.frames.len()];
        let (left, top) = (2 + (i * 3) % 6, 3 + i % 3);
        match i % 3 {
            0 => base.placed(CANVAS_H, CANVAS_W, left as i64, top as i64),
            1 => base.rotate90().rotate90(),
            _ => {
                let mut s = base.placed(CANVAS_H, CANVAS_W, 4 + (i % 5) as i64, 4 + (i % 4) as i64);
                for (x, y) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    s.set(x, y, true);
                }
                s
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Noise {
    Scatter,
    TwoBodies,
    Disk,
    Square,
    WideEllipse,
    Ell,
    Cross,
    Triangle,
}

impl Noise {
    pub const ALL: [Noise; 8] = [
        Self::Scatter,
        Self::TwoBodies,
        Self::Disk,
        Self::Square,
        Self::WideEllipse,
        Self::Ell,
        Self::Cross,
        Self::Triangle,
    ];

    pub fn expected(self) -> Verdict {
        match self {
            Self::Scatter | Self::TwoBodies => Verdict::RemovedCc,
            _ => Verdict::RemovedShape,
        }
    }

    pub fn render(self, seed: u64) -> Silhouette {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (cx, cy) = (CANVAS_W as f64 / 2.0, CANVAS_H as f64 / 2.0);
        match self {
            Self::Scatter => Silhouette::from_fn(CANVAS_H, CANVAS_W, |x, y| {
                x % 2 == 0 && y % 2 == 0 && rng.random_bool(0.3)
            }),
            Self::TwoBodies => Silhouette::from_fn(CANVAS_H, CANVAS_W, |x, y| {
                ((4..20).contains(&x) && (6..66).contains(&y)) || ((30..46).contains(&x) && (10..60).contains(&y))
            }),
            Self::Disk => Silhouette::from_fn(CANVAS_H, CANVAS_W, |x, y| {
                (x as f64 + 0.5 - cx).powi(2) + (y as f64 + 0.5 - cy).powi(2) <= 18.0f64.powi(2)
            }),
            Self::Square => {
                Silhouette::from_fn(CANVAS_H, CANVAS_W, |x, y| (8..44).contains(&x) && (18..54).contains(&y))
            }
            Self::WideEllipse => Silhouette::from_fn(CANVAS_H, CANVAS_W, |x, y| {
                ((x as f64 + 0.5 - cx) / 22.0).powi(2) + ((y as f64 + 0.5 - cy) / 9.0).powi(2) <= 1.0
            }),
            Self::Ell => Silhouette::from_fn(CANVAS_H, CANVAS_W, |x, y| {
                ((6..18).contains(&x) && (8..64).contains(&y)) || ((6..46).contains(&x) && (52..64).contains(&y))
            }),
            Self::Cross => Silhouette::from_fn(CANVAS_H, CANVAS_W, |x, y| {
                ((22..30).contains(&x) && (10..62).contains(&y)) || ((4..48).contains(&x) && (32..40).contains(&y))
            }),
            Self::Triangle => Silhouette::from_fn(CANVAS_H, CANVAS_W, |x, y| {
                let (x, y) = (x as f64, y as f64);
                y >= 10.0 && y <= 62.0 && (x - cx).abs() <= (y - 10.0) * 0.4
            }),
        }
    }
}

/// One labelled frame of a fixture corpus.
pub struct Frame {
    pub sil: Silhouette,
    pub expected: Verdict,
}

/// Two sequences of 20 figures with 5 noise frames each, noise at every
/// fifth position.
pub fn qa_corpus(figures: &Figures) -> Vec<(String, Vec<Frame>)> {
    let mut noise_k = 0;
    (0..2)
        .map(|seq| {
            let mut fig = 0;
            let frames = (0..25)
                .map(|i| {
                    if i % 5 == 3 {
                        let kind = Noise::ALL[noise_k % Noise::ALL.len()];
                        noise_k += 1;
                        Frame {
                            sil: kind.render(noise_k as u64),
                            expected: kind.expected(),
                        }
                    } else {
                        fig += 1;
                        Frame {
                            sil: figures.humanoid(seq, fig - 1),
                            expected: Verdict::Kept,
                        }
                    }
                })
                .collect();
            (format!("{:03}/nm-01/{:03}", seq + 1, 90), frames)
        })
        .collect()
}

/// Ten figures and ten non-human shapes.
pub fn retention_sequence(figures: &Figures) -> Vec<Silhouette> {
    (0..20)
        .map(|i| {
            if i % 2 == 0 {
                figures.humanoid(7, i)
            } else {
                Noise::ALL[2 + (i / 2) % 6].render(i as u64)
            }
        })
        .collect()
}

pub fn frame_name(i: usize, png: bool) -> String {
    format!("{i:03}.{}", if png { "png" } else { "pgm" })
}

pub fn write_png(path: &Path, sil: &Silhouette) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    image::GrayImage::from_raw(sil.width() as u32, sil.height() as u32, sil.to_gray())
        .unwrap()
        .save(path)
        .unwrap();
}

/// Writes each sequence under `root/seq_path`, alternating PNG and PGM.
pub fn write_tree<'a>(root: &Path, seqs: impl IntoIterator<Item = (&'a str, Vec<&'a Silhouette>)>) {
    for (path, frames) in seqs {
        let dir = path.split('/').fold(root.to_path_buf(), |p, c| p.join(c));
        for (i, sil) in frames.into_iter().enumerate() {
            let png = i % 2 == 0;
            let file = dir.join(frame_name(i, png));
            if png {
                write_png(&file, sil);
            } else {
                write_pgm(&file, sil).unwrap();
            }
        }
    }
}

pub fn write_corpus(root: &Path, corpus: &[(String, Vec<Frame>)]) {
    write_tree(
        root,
        corpus.iter().map(|(p, fs)| (p.as_str(), fs.iter().map(|f| &f.sil).collect())),
    );
}

/// Solid bar of `length` by `thickness` centred on the canvas, its long
/// axis tilted `tilt_deg` from vertical with the top toward +x.
pub fn bar(h: usize, w: usize, length: f64, thickness: f64, tilt_deg: f64) -> Silhouette {
    let (s, c) = tilt_deg.to_radians().sin_cos();
    let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
    Silhouette::from_fn(h, w, |x, y| {
        let (dx, dy) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
        // axis direction in image coordinates is (sin, -cos)
        let along = dx * s - dy * c;
        let across = dx * c + dy * s;
        along.abs() <= length / 2.0 && across.abs() <= thickness / 2.0
    })
}

/// Breadth-first flood fill; labels in discovery order of a row-major scan.
pub fn flood_fill(sil: &Silhouette, eight: bool) -> (Vec<u32>, Vec<usize>) {
    let (h, w) = (sil.height(), sil.width());
    let mut labels = vec![0u32; h * w];
    let mut areas = Vec::new();
    let mut offsets = vec![(-1i64, 0i64), (1, 0), (0, -1), (0, 1)];
    if eight {
        offsets.extend([(-1, -1), (-1, 1), (1, -1), (1, 1)]);
    }
    for start in 0..h * w {
        if !sil.mask()[start] || labels[start] != 0 {
            continue;
        }
        let id = areas.len() as u32 + 1;
        let mut area = 0;
        let mut queue = VecDeque::from([start]);
        labels[start] = id;
        while let Some(i) = queue.pop_front() {
            area += 1;
            let (x, y) = ((i % w) as i64, (i / w) as i64);
            for (dx, dy) in &offsets {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue;
                }
                let j = ny as usize * w + nx as usize;
                if sil.mask()[j] && labels[j] == 0 {
                    labels[j] = id;
                    queue.push_back(j);
                }
            }
        }
        areas.push(area);
    }
    (labels, areas)
}

fn unit(v: ArrayView1<f64>) -> Vec<f64> {
    let n = v.dot(&v).sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Mean softmax cross-entropy with `target(cos)` as the true-class logit
/// and `s cos` elsewhere.
pub fn reference_ce(
    x: ArrayView2<f64>,
    labels: &[usize],
    w: ArrayView2<f64>,
    s: f64,
    target: impl Fn(f64) -> f64,
) -> f64 {
    let ws: Vec<Vec<f64>> = w.rows().into_iter().map(unit).collect();
    let mut total = 0.0;
    for (row, &y) in x.rows().into_iter().zip(labels) {
        let xr = unit(row);
        let logits: Vec<f64> = ws
            .iter()
            .enumerate()
            .map(|(j, wr)| {
                let c: f64 = wr.iter().zip(&xr).map(|(a, b)| a * b).sum();
                if j == y {
                    target(c)
                } else {
                    s * c
                }
            })
            .collect();
        let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let denom: f64 = logits.iter().map(|l| (l - m).exp()).sum();
        total += -(logits[y] - m - denom.ln());
    }
    total / labels.len() as f64
}
