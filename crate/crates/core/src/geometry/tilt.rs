use crate::error::{Error, Result};
use crate::silcore::Silhouette;

/// Rectangle of minimum area enclosing a point set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedRect {
    pub center: (f64, f64),
    /// Unit direction of the first side.
    pub axis: (f64, f64),
    /// Extent along `axis`.
    pub length: f64,
    /// Extent along the perpendicular of `axis`.
    pub breadth: f64,
}

impl RotatedRect {
    pub fn area(&self) -> f64 {
        self.length * self.breadth
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain; returns the hull counter-clockwise without
/// collinear points.
pub fn convex_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(2 * pts.len());
    for &p in pts.iter().chain(pts.iter().rev().skip(1)) {
        // lower chain on the way out, upper chain on the way back
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Rotating-calipers minimum-area rectangle over a convex polygon given in
/// order. Needs at least three non-collinear vertices.
pub fn min_area_rect(hull: &[(i64, i64)]) -> Result<RotatedRect> {
    if hull.len() < 3 {
        return Err(Error::DegenerateGeometry);
    }
    let pts: Vec<(f64, f64)> = hull.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
    let mut best: Option<RotatedRect> = None;
    for i in 0..pts.len() {
        let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
        let (ex, ey) = (b.0 - a.0, b.1 - a.1);
        let norm = ex.hypot(ey);
        let (ux, uy) = (ex / norm, ey / norm);
        let (mut lo_u, mut hi_u, mut lo_v, mut hi_v) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(px, py) in &pts {
            let u = px * ux + py * uy;
            let v = -px * uy + py * ux;
            lo_u = lo_u.min(u);
            hi_u = hi_u.max(u);
            lo_v = lo_v.min(v);
            hi_v = hi_v.max(v);
        }
        let (mu, mv) = ((lo_u + hi_u) / 2.0, (lo_v + hi_v) / 2.0);
        let rect = RotatedRect {
            center: (mu * ux - mv * uy, mu * uy + mv * ux),
            axis: (ux, uy),
            length: hi_u - lo_u,
            breadth: hi_v - lo_v,
        };
        if best.is_none_or(|b| rect.area() < b.area() * (1.0 - 1e-12)) {
            best = Some(rect);
        }
    }
    let best = best.expect("hull has edges");
    if best.area() <= 0.0 {
        return Err(Error::DegenerateGeometry);
    }
    Ok(best)
}

/// Signed angle in (-90, 90] between the direction `(dx, dy)` and the image
/// vertical; positive when the upper end points toward +x.
fn angle_from_vertical(dx: f64, dy: f64) -> f64 {
    let (dx, dy) = if dy > 0.0 { (-dx, -dy) } else { (dx, dy) };
    let mut deg = dx.atan2(-dy).to_degrees();
    if deg <= -90.0 + 1e-9 {
        deg += 180.0;
    }
    if deg > 90.0 {
        deg -= 180.0;
    }
    deg
}

/// Tilt of the body axis: the signed angle between the longer side of the
/// foreground's minimum-area rectangle and the vertical.
pub fn estimate_tilt(sil: &Silhouette) -> Result<f64> {
    let points: Vec<(i64, i64)> = sil.foreground().map(|(x, y)| (x as i64, y as i64)).collect();
    if points.len() < 3 {
        return Err(Error::DegenerateGeometry);
    }
    let hull = convex_hull(&points);
    let rect = min_area_rect(&hull)?;
    let (ux, uy) = rect.axis;
    let along = angle_from_vertical(ux, uy);
    let across = angle_from_vertical(-uy, ux);
    let tol = 1e-9 * rect.length.max(rect.breadth);
    Ok(if (rect.length - rect.breadth).abs() <= tol {
        if along.abs() <= across.abs() {
            along
        } else {
            across
        }
    } else if rect.length > rect.breadth {
        along
    } else {
        across
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rotate;

    fn rect(h: usize, w: usize, rw: usize, rh: usize) -> Silhouette {
        let (x0, y0) = ((w - rw) / 2, (h - rh) / 2);
        Silhouette::from_fn(h, w, |x, y| (x0..x0 + rw).contains(&x) && (y0..y0 + rh).contains(&y))
    }

    #[test]
    fn hull_of_square_has_four_corners() {
        let pts: Vec<(i64, i64)> = (0..5).flat_map(|x| (0..5).map(move |y| (x, y))).collect();
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 4);
        let r = min_area_rect(&hull).unwrap();
        assert!((r.area() - 16.0).abs() < 1e-9);
    }

    #[test]
    fn upright_rectangle_has_zero_tilt() {
        assert_eq!(estimate_tilt(&rect(64, 64, 10, 30)).unwrap(), 0.0);
    }

    #[test]
    fn horizontal_rectangle_is_ninety() {
        assert_eq!(estimate_tilt(&rect(64, 64, 30, 10)).unwrap(), 90.0);
    }

    #[test]
    fn square_prefers_side_closest_to_vertical() {
        assert_eq!(estimate_tilt(&rect(40, 40, 12, 12)).unwrap(), 0.0);
    }

    #[test]
    fn recovers_raster_rotation() {
        let base = rect(128, 128, 10, 30);
        for phi in [-30.0, -20.0, -10.0, 10.0, 20.0, 30.0] {
            let r = rotate(&base, phi, (64.0, 64.0));
            let t = estimate_tilt(&r).unwrap();
            assert!((t - phi).abs() <= 1.5, "phi {phi}: got {t}");
        }
    }

    #[test]
    fn angle_convention() {
        assert_eq!(angle_from_vertical(0.0, -1.0), 0.0);
        assert_eq!(angle_from_vertical(0.0, 1.0), 0.0);
        assert!((angle_from_vertical(1.0, -1.0) - 45.0).abs() < 1e-12);
        assert!((angle_from_vertical(-1.0, 1.0) - 45.0).abs() < 1e-12);
        assert!((angle_from_vertical(-1.0, -1.0) + 45.0).abs() < 1e-12);
        assert_eq!(angle_from_vertical(1.0, 0.0), 90.0);
        assert_eq!(angle_from_vertical(-1.0, 0.0), 90.0);
    }

    #[test]
    fn degenerate_inputs() {
        let line = Silhouette::from_rows(&["11111"]).unwrap();
        assert_eq!(estimate_tilt(&line), Err(Error::DegenerateGeometry));
        let two = Silhouette::from_rows(&["1001"]).unwrap();
        assert_eq!(estimate_tilt(&two), Err(Error::DegenerateGeometry));
        assert!(estimate_tilt(&Silhouette::blank(3, 3)).is_err());
    }
}
