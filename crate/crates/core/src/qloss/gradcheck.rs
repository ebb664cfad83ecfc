use crate::error::{Error, Result};

/// Largest relative error between `analytic` and central differences of `f`
/// at `point`, where relative error is `|a - n| / max(1e-8, |a| + |n|)`.
pub fn grad_check<F>(f: F, analytic: &[f64], point: &[f64], step: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidConfig(format!("step {step} must be > 0")));
    }
    if analytic.len() != point.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} gradient entries for {} coordinates",
            analytic.len(),
            point.len()
        )));
    }
    let mut x = point.to_vec();
    let mut worst: f64 = 0.0;
    for i in 0..x.len() {
        let orig = x[i];
        x[i] = orig + step;
        let hi = f(&x);
        x[i] = orig - step;
        let lo = f(&x);
        x[i] = orig;
        let numeric = (hi - lo) / (2.0 * step);
        let a = analytic[i];
        if !numeric.is_finite() || !a.is_finite() {
            return Err(Error::NonFinite(i));
        }
        let rel = (a - numeric).abs() / (a.abs() + numeric.abs()).max(1e-8);
        worst = worst.max(rel);
    }
    Ok(worst)
}
