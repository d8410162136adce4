//! Finite-difference derivatives and high-order cumulative integration on
//! sampled grids.

/// Fourth-order first derivative on a uniform grid (five-point stencils,
/// one-sided at the two nodes next to each boundary).
pub fn derivative_uniform(h: f64, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "need at least 5 samples for the 5-point stencil");
    let mut d = vec![0.0; n];
    let ih = 1.0 / (12.0 * h);
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * ih;
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * ih;
    for i in 2..n - 2 {
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * ih;
    }
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) * ih;
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) * ih;
    d
}

/// Periodic variant of [`derivative_uniform`]: the grid covers one full
/// period with `f.len()` samples and no duplicated endpoint.
pub fn derivative_periodic(h: f64, f: &[f64]) -> Vec<f64> {
    let n = f.len() as isize;
    let ih = 1.0 / (12.0 * h);
    let g = |k: isize| f[k.rem_euclid(n) as usize];
    (0..n)
        .map(|i| (g(i - 2) - 8.0 * g(i - 1) + 8.0 * g(i + 1) - g(i + 2)) * ih)
        .collect()
}

/// Second-order first derivative on an arbitrary strictly increasing grid.
/// Three-point formulas, one-sided at the ends.
pub fn derivative_nonuniform(xs: &[f64], f: &[f64]) -> Vec<f64> {
    let n = xs.len();
    assert!(n >= 3);
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let h1 = xs[i] - xs[i - 1];
        let h2 = xs[i + 1] - xs[i];
        d[i] = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i]
            + h1 / (h2 * (h1 + h2)) * f[i + 1];
    }
    // quadratic through the first/last three nodes
    let h1 = xs[1] - xs[0];
    let h2 = xs[2] - xs[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1]
        - h1 / (h2 * (h1 + h2)) * f[2];
    let g1 = xs[n - 1] - xs[n - 2];
    let g2 = xs[n - 2] - xs[n - 3];
    d[n - 1] = (2.0 * g1 + g2) / (g1 * (g1 + g2)) * f[n - 1] - (g1 + g2) / (g1 * g2) * f[n - 2]
        + g1 / (g2 * (g1 + g2)) * f[n - 3];
    d
}

/// Cumulative integral F(x_i) = ∫_{x_0}^{x_i} f on a uniform grid, exact for
/// cubics: each cell is integrated under the local four-point interpolant.
pub fn cumulative_integral_uniform(h: f64, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 4);
    let mut acc = vec![0.0; n];
    // first cell from the cubic through nodes 0..4
    acc[1] = acc[0] + h * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]) / 24.0;
    for i in 1..n - 2 {
        acc[i + 1] = acc[i] + h * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2]) / 24.0;
    }
    acc[n - 1] = acc[n - 2]
        + h * (9.0 * f[n - 1] + 19.0 * f[n - 2] - 5.0 * f[n - 3] + f[n - 4]) / 24.0;
    acc
}
