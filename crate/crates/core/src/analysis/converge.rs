//! Integration convergence measurement on a smooth reference problem.

/// Width of the Gaussian bump integrand.
pub const GAUSSIAN_SIGMA: f64 = 0.25;

/// Exact value of the bump's integral over the unit square (the square
/// of the 1D integral `sigma sqrt(2 pi) (2 Phi(1/(2 sigma)) - 1)`).
pub const GAUSSIAN_REF: f64 = 0.357_776_252_704_838_205;

/// Centered Gaussian bump, separable and smooth on the whole square.
pub fn gaussian_integrand(p: [f64; 2]) -> f64 {
    let dx = p[0] - 0.5;
    let dy = p[1] - 0.5;
    (-(dx * dx + dy * dy) / (2.0 * GAUSSIAN_SIGMA * GAUSSIAN_SIGMA)).exp()
}

/// Equal-weight quadrature estimate of the bump integral.
pub fn estimate(points: &[[f64; 2]]) -> f64 {
    points.iter().map(|&p| gaussian_integrand(p)).sum::<f64>() / points.len() as f64
}

/// Mean squared integration error per sample count, averaged over
/// realizations produced by `make(n, realization)`.
pub fn mse_curve<F>(sizes: &[usize], realizations: u64, make: F) -> Vec<(usize, f64)>
where
    F: Fn(usize, u64) -> Vec<[f64; 2]>,
{
    assert!(realizations > 0);
    sizes
        .iter()
        .map(|&n| {
            let mut acc = 0.0;
            for r in 0..realizations {
                let err = estimate(&make(n, r)) - GAUSSIAN_REF;
                acc += err * err;
            }
            (n, acc / realizations as f64)
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_log_slope(curve: &[(usize, f64)]) -> f64 {
    assert!(curve.len() >= 2);
    let n = curve.len() as f64;
    let logs: Vec<(f64, f64)> = curve
        .iter()
        .map(|&(x, y)| ((x as f64).ln(), y.ln()))
        .collect();
    let mx = logs.iter().map(|l| l.0).sum::<f64>() / n;
    let my = logs.iter().map(|l| l.1).sum::<f64>() / n;
    let cov = logs.iter().map(|l| (l.0 - mx) * (l.1 - my)).sum::<f64>();
    let var = logs.iter().map(|l| (l.0 - mx) * (l.0 - mx)).sum::<f64>();
    cov / var
}
