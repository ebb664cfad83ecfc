use crate::silcore::Silhouette;

/// Rotates about `center` (pixel-center coordinates) with nearest-neighbour
/// sampling. Positive angles move the top of an upright shape toward +x.
/// The canvas size is unchanged; anything mapped outside is dropped.
pub fn rotate(sil: &Silhouette, angle_deg: f64, center: (f64, f64)) -> Silhouette {
    if angle_deg == 0.0 {
        return sil.clone();
    }
    let (sin, cos) = angle_deg.to_radians().sin_cos();
    let (cx, cy) = center;
    Silhouette::from_fn(sil.height(), sil.width(), |x, y| {
        let (dx, dy) = (x as f64 + 0.5 - cx, y as f64 + 0.5 - cy);
        // inverse of [[c, -s], [s, c]]
        let sx = cx + cos * dx + sin * dy;
        let sy = cy - sin * dx + cos * dy;
        sil.get_signed(sx.floor() as i64, sy.floor() as i64)
    })
}

/// Bilinear value of the 0/1 mask at a pixel-center coordinate, with the
/// outside treated as background.
pub(crate) fn sample_bilinear(sil: &Silhouette, x: f64, y: f64) -> f64 {
    let (gx, gy) = (x - 0.5, y - 0.5);
    let (x0, y0) = (gx.floor(), gy.floor());
    let (fx, fy) = (gx - x0, gy - y0);
    let (x0, y0) = (x0 as i64, y0 as i64);
    let v = |xx: i64, yy: i64| f64::from(u8::from(sil.get_signed(xx, yy)));
    let top = v(x0, y0) * (1.0 - fx) + v(x0 + 1, y0) * fx;
    let bottom = v(x0, y0 + 1) * (1.0 - fx) + v(x0 + 1, y0 + 1) * fx;
    top * (1.0 - fy) + bottom * fy
}

/// Rotation plus uniform scaling about the canvas centers, resampled
/// bilinearly and re-binarized at 0.5.
pub fn warp_similarity(
    sil: &Silhouette,
    angle_deg: f64,
    scale: f64,
    out_height: usize,
    out_width: usize,
) -> Silhouette {
    let (sin, cos) = angle_deg.to_radians().sin_cos();
    let (icx, icy) = (sil.width() as f64 / 2.0, sil.height() as f64 / 2.0);
    let (ocx, ocy) = (out_width as f64 / 2.0, out_height as f64 / 2.0);
    Silhouette::from_fn(out_height, out_width, |x, y| {
        let (dx, dy) = ((x as f64 + 0.5 - ocx) / scale, (y as f64 + 0.5 - ocy) / scale);
        let sx = icx + cos * dx + sin * dy;
        let sy = icy - sin * dx + cos * dy;
        sample_bilinear(sil, sx, sy) >= 0.5
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::silcore::centroid;

    #[test]
    fn zero_angle_is_identity() {
        let sil = Silhouette::from_rows(&["0110", "1110", "0011"]).unwrap();
        assert_eq!(rotate(&sil, 0.0, (1.3, 2.2)), sil);
    }

    #[test]
    fn single_center_pixel_survives_any_angle() {
        let mut sil = Silhouette::blank(15, 15);
        sil.set(7, 7, true);
        for angle in [1.0, 13.0, 45.0, 90.0, 137.0, -60.0, 180.0] {
            let r = rotate(&sil, angle, (7.5, 7.5));
            assert_eq!(r.foreground_count(), 1, "angle {angle}");
            assert!(r.get(7, 7));
        }
    }

    #[test]
    fn quarter_turn_round_trip() {
        let sil = Silhouette::from_fn(40, 40, |x, y| {
            let (fx, fy) = (x as f64 - 18.0, y as f64 - 21.0);
            fx * fx / 100.0 + fy * fy / 256.0 <= 1.0 || (10..16).contains(&x) && (5..20).contains(&y)
        });
        let c = (20.0, 20.0);
        let back = rotate(&rotate(&sil, 90.0, c), -90.0, c);
        let agree = sil
            .mask()
            .iter()
            .zip(back.mask())
            .filter(|(a, b)| a == b)
            .count();
        assert!(agree as f64 / sil.mask().len() as f64 >= 0.98);
    }

    #[test]
    fn positive_angle_moves_top_right() {
        // vertical bar: after +30 the top part must lie right of the bottom
        let sil = Silhouette::from_fn(60, 60, |x, y| (28..32).contains(&x) && (10..50).contains(&y));
        let r = rotate(&sil, 30.0, (30.0, 30.0));
        let top = Silhouette::from_fn(60, 60, |x, y| y < 30 && r.get(x, y));
        let bottom = Silhouette::from_fn(60, 60, |x, y| y >= 30 && r.get(x, y));
        assert!(centroid(&top).unwrap().0 > centroid(&bottom).unwrap().0 + 5.0);
    }

    #[test]
    fn warp_identity_is_lossless() {
        let sil = Silhouette::from_rows(&["01100", "11110", "00111"]).unwrap();
        assert_eq!(warp_similarity(&sil, 0.0, 1.0, 3, 5), sil);
    }
}
