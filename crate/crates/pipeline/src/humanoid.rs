//! Procedural walking figure used to build template fixtures.

use std::f64::consts::PI;

use qagait_core::Silhouette;

const CANVAS: usize = 256;
/// Pixels per unit of body height.
const SCALE: f64 = 200.0;
const GROUND: f64 = 236.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gender {
    Female,
    Male,
}

impl Gender {
    pub fn tag(self) -> char {
        match self {
            Self::Female => 'f',
            Self::Male => 'm',
        }
    }
}

/// Body proportions and gait amplitudes, in body-height units and degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Build {
    pub shoulder_half: f64,
    pub hip_half: f64,
    pub torso_depth: f64,
    pub limb_scale: f64,
    pub head_r: f64,
    pub hip_swing: f64,
    pub arm_swing: f64,
    pub phase_offset: f64,
}

impl Build {
    pub fn standard(gender: Gender) -> Self {
        match gender {
            Gender::Female => Self {
                shoulder_half: 0.105,
                hip_half: 0.112,
                torso_depth: 0.085,
                limb_scale: 0.9,
                head_r: 0.062,
                hip_swing: 24.0,
                arm_swing: 16.0,
                phase_offset: 0.0,
            },
            Gender::Male => Self {
                shoulder_half: 0.13,
                hip_half: 0.1,
                torso_depth: 0.095,
                limb_scale: 1.0,
                head_r: 0.066,
                hip_swing: 26.0,
                arm_swing: 20.0,
                phase_offset: 0.0,
            },
        }
    }
}

/// Camera placement: horizontal view angle and a vertical squash standing
/// in for camera height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera {
    pub view_deg: f64,
    pub squash: f64,
}

#[derive(Debug, Clone, Copy)]
struct P3 {
    x: f64,
    y: f64,
    z: f64,
}

fn p3(x: f64, y: f64, z: f64) -> P3 {
    P3 { x, y, z }
}

struct Raster {
    sil: Silhouette,
    cam: Camera,
    sin_v: f64,
    cos_v: f64,
}

impl Raster {
    fn new(cam: Camera) -> Self {
        let (sin_v, cos_v) = cam.view_deg.to_radians().sin_cos();
        Self {
            sil: Silhouette::blank(CANVAS, CANVAS),
            cam,
            sin_v,
            cos_v,
        }
    }

    fn project(&self, p: P3) -> (f64, f64) {
        let sx = p.x * self.sin_v + p.z * self.cos_v;
        (CANVAS as f64 / 2.0 + sx * SCALE, GROUND - p.y * self.cam.squash * SCALE)
    }

    fn fill(&mut self, bbox: (f64, f64, f64, f64), inside: impl Fn(f64, f64) -> bool) {
        let clamp = |v: f64| v.clamp(0.0, CANVAS as f64 - 1.0) as usize;
        let (x0, y0, x1, y1) = (clamp(bbox.0.floor()), clamp(bbox.1.floor()), clamp(bbox.2.ceil()), clamp(bbox.3.ceil()));
        for y in y0..=y1 {
            for x in x0..=x1 {
                if inside(x as f64 + 0.5, y as f64 + 0.5) {
                    self.sil.set(x, y, true);
                }
            }
        }
    }

    /// Axis-aligned ellipse; `rx` in screen units, `ry` in body units.
    fn ellipse(&mut self, c: P3, rx: f64, ry: f64) {
        let (cx, cy) = self.project(c);
        let (rx, ry) = (rx * SCALE, ry * self.cam.squash * SCALE);
        self.fill((cx - rx, cy - ry, cx + rx, cy + ry), |x, y| {
            let (u, v) = ((x - cx) / rx, (y - cy) / ry);
            u * u + v * v <= 1.0
        });
    }

    fn disk(&mut self, c: P3, r: f64) {
        self.ellipse(c, r, r);
    }

    /// Tapered limb segment drawn as a quadrilateral.
    fn limb(&mut self, a: P3, b: P3, ra: f64, rb: f64) {
        let (ax, ay) = self.project(a);
        let (bx, by) = self.project(b);
        let (dx, dy) = (bx - ax, by - ay);
        let len = dx.hypot(dy).max(1e-9);
        let (nx, ny) = (-dy / len, dx / len);
        let (ra, rb) = (ra * SCALE, rb * SCALE);
        let quad = [
            (ax + nx * ra, ay + ny * ra),
            (bx + nx * rb, by + ny * rb),
            (bx - nx * rb, by - ny * rb),
            (ax - nx * ra, ay - ny * ra),
        ];
        let xs = quad.iter().map(|p| p.0);
        let ys = quad.iter().map(|p| p.1);
        let bbox = (
            xs.clone().fold(f64::MAX, f64::min),
            ys.clone().fold(f64::MAX, f64::min),
            xs.fold(f64::MIN, f64::max),
            ys.fold(f64::MIN, f64::max),
        );
        self.fill(bbox, |x, y| {
            let mut sign = 0.0f64;
            for i in 0..4 {
                let (p, q) = (quad[i], quad[(i + 1) % 4]);
                let c = (q.0 - p.0) * (y - p.1) - (q.1 - p.1) * (x - p.0);
                if c != 0.0 {
                    if sign != 0.0 && c.signum() != sign {
                        return false;
                    }
                    sign = c.signum();
                }
            }
            true
        });
    }
}

fn ahead(origin: P3, len: f64, angle_deg: f64) -> P3 {
    let a = angle_deg.to_radians();
    p3(origin.x + len * a.sin(), origin.y - len * a.cos(), origin.z)
}

/// Renders one frame of the walk cycle at `phase` in [0, 1) onto a 256x256
/// canvas.
pub fn render(build: &Build, cam: Camera, phase: f64) -> Silhouette {
    let mut r = Raster::new(cam);
    let t = build.limb_scale;
    let phi = 2.0 * PI * phase + build.phase_offset;

    // torso, hips, neck, head
    let (sv, cv) = (r.sin_v.abs(), r.cos_v.abs());
    r.ellipse(p3(0.0, 0.67, 0.0), build.torso_depth * sv + build.shoulder_half * cv, 0.15);
    r.ellipse(p3(0.0, 0.53, 0.0), 0.9 * build.torso_depth * sv + build.hip_half * cv, 0.075);
    r.limb(p3(0.0, 0.79, 0.0), p3(0.01, 0.88, 0.0), 0.03, 0.028);
    r.disk(p3(0.015, 0.925, 0.0), build.head_r);

    for side in [1.0, -1.0] {
        let psi = phi + if side < 0.0 { PI } else { 0.0 };

        let hip = p3(0.0, 0.53, side * 0.5 * build.hip_half);
        let thigh = build.hip_swing * psi.sin();
        let knee_flex = 5.0 + 30.0 * 0.5 * (1.0 + (psi + 0.5).cos());
        let knee = ahead(hip, 0.25, thigh);
        let shin = thigh - knee_flex;
        let ankle = ahead(knee, 0.25, shin);
        let toe = p3(ankle.x + 0.075, ankle.y - 0.005, ankle.z);
        r.limb(hip, knee, 0.046 * t, 0.034 * t);
        r.disk(knee, 0.034 * t);
        r.limb(knee, ankle, 0.034 * t, 0.024 * t);
        r.disk(ankle, 0.024 * t);
        r.limb(ankle, toe, 0.022 * t, 0.015 * t);

        let arm_psi = psi + PI;
        let shoulder = p3(0.0, 0.79, side * (build.shoulder_half + 0.015));
        let upper = build.arm_swing * arm_psi.sin();
        let elbow_flex = 10.0 + 12.0 * 0.5 * (1.0 + arm_psi.sin());
        let elbow = ahead(shoulder, 0.16, upper);
        let wrist = ahead(elbow, 0.15, upper + elbow_flex);
        r.disk(shoulder, 0.03 * t);
        r.limb(shoulder, elbow, 0.028 * t, 0.023 * t);
        r.disk(elbow, 0.023 * t);
        r.limb(elbow, wrist, 0.023 * t, 0.019 * t);
    }
    r.sil
}
