//! Least-squares line fits.
//!
//! Growth rates, convergence orders and scaling exponents are all read off
//! as slopes of straight-line fits, either in semi-log or log-log axes.

/// Ordinary least squares `y ≈ slope·x + intercept`.
///
/// Returns `(slope, intercept, relative_residual)` where the residual is
/// `‖y − fit‖₂ / ‖y − mean(y)‖₂` (zero for perfectly affine data; defined as
/// 0 when `y` is constant).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    assert!(xs.len() >= 2, "fit needs at least two points");
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut res2 = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let e = y - slope * x - intercept;
        res2 += e * e;
    }
    let rel = if syy > 0.0 { (res2 / syy).sqrt() } else { 0.0 };
    (slope, intercept, rel)
}

/// Log-log slope fit: `ln y ≈ slope·ln x + c`. All data must be positive.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly).0
}

/// Convergence order from errors at successively halved spacings:
/// slope of `ln e` against `ln h`.
pub fn convergence_order(hs: &[f64], errs: &[f64]) -> f64 {
    loglog_slope(hs, errs)
}
