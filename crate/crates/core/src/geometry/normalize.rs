use crate::error::{Error, Result};
use crate::silcore::Silhouette;

const MIN_TARGET: usize = 8;
const MAX_PASSES: usize = 16;

/// Crops to the foreground, scales to `target_height` keeping the aspect
/// ratio, and places the x-centroid at column `target_width / 2`.
///
/// Scaling is bilinear on the 0/1 mask with a 0.5 re-binarization. The first
/// and last output rows sample the first and last source rows exactly, so the
/// result stays vertically tight. When cropping to `target_width` cuts off
/// foreground the steps are repeated until the output is a fixpoint, which
/// makes the operation idempotent.
pub fn normalize(sil: &Silhouette, target_height: usize, target_width: usize) -> Result<Silhouette> {
    if target_height < MIN_TARGET || target_width < MIN_TARGET {
        return Err(Error::InvalidConfig(format!(
            "normalize target {target_height}x{target_width} below {MIN_TARGET}x{MIN_TARGET}"
        )));
    }
    let mut current = normalize_pass(sil, target_height, target_width)?;
    for _ in 0..MAX_PASSES {
        let next = normalize_pass(&current, target_height, target_width)?;
        if next == current {
            break;
        }
        current = next;
    }
    Ok(current)
}

fn normalize_pass(sil: &Silhouette, th: usize, tw: usize) -> Result<Silhouette> {
    let (x0, y0, x1, y1) = sil.bounding_box().ok_or(Error::NormalizeEmpty)?;
    let (cw, ch) = (x1 - x0 + 1, y1 - y0 + 1);
    let content = Silhouette::from_fn(ch, cw, |x, y| sil.get(x + x0, y + y0));

    let scaled = if ch == th {
        content
    } else {
        scale_to_height(&content, th)
    };

    // local x-centroid, pixel-center convention
    let (mut n, mut sx) = (0usize, 0.0f64);
    for (x, _) in scaled.foreground() {
        n += 1;
        sx += x as f64 + 0.5;
    }
    let cx = sx / n as f64;
    // floor(r + 0.5) commutes with integer shifts of the content
    let offset = (tw as f64 / 2.0 - cx + 0.5).floor() as i64;
    let placed = scaled.placed(th, tw, offset, 0);
    if placed.is_empty() {
        return Err(Error::NormalizeEmpty);
    }
    Ok(placed)
}

fn scale_to_height(content: &Silhouette, th: usize) -> Silhouette {
    let (cw, ch) = (content.width(), content.height());
    let aspect = th as f64 / ch as f64;
    let new_w = ((cw as f64 * aspect).round() as usize).max(1);
    let y_step = (ch - 1) as f64 / (th - 1) as f64;
    let x_step = cw as f64 / new_w as f64;

    let value = |x: usize, y: usize| -> f64 {
        let gy = y as f64 * y_step;
        let gx = ((x as f64 + 0.5) * x_step - 0.5).clamp(0.0, (cw - 1) as f64);
        let (ix, iy) = (gx.floor() as usize, gy.floor() as usize);
        let (fx, fy) = (gx - ix as f64, gy - iy as f64);
        let px = |xx: usize, yy: usize| -> f64 {
            let xx = xx.min(cw - 1);
            let yy = yy.min(ch - 1);
            f64::from(u8::from(content.get(xx, yy)))
        };
        let top = px(ix, iy) * (1.0 - fx) + px(ix + 1, iy) * fx;
        let bottom = px(ix, iy + 1) * (1.0 - fx) + px(ix + 1, iy + 1) * fx;
        top * (1.0 - fy) + bottom * fy
    };
    let mut out = Silhouette::from_fn(th, new_w, |x, y| value(x, y) >= 0.5);

    // keep the vertical extent tight: rows 0 and th-1 map onto source rows
    // 0 and ch-1 exactly, both of which hold foreground
    for (out_row, src_row) in [(0usize, 0usize), (th - 1, ch - 1)] {
        if (0..new_w).any(|x| out.get(x, out_row)) {
            continue;
        }
        let (mut n, mut sum) = (0usize, 0.0f64);
        for x in 0..cw {
            if content.get(x, src_row) {
                n += 1;
                sum += x as f64 + 0.5;
            }
        }
        let mean = sum / n as f64;
        let col = ((mean / x_step).floor() as usize).min(new_w - 1);
        out.set(col, out_row, true);
    }
    out
}
