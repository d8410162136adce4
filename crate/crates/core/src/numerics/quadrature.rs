//! Trapezoid and Gauss-Legendre quadrature, plus the graded panel scheme
//! used for Cauchy-type kernels that are peaked (never singular) at a point
//! of the real line.

use std::sync::OnceLock;

use num_complex::Complex64;

use super::compensated_sum;

/// Trapezoid rule on a uniform grid.
pub fn trapezoid_uniform(h: f64, f: &[f64]) -> f64 {
    let n = f.len();
    assert!(n >= 2);
    let inner = compensated_sum(f[1..n - 1].iter().copied());
    h * (0.5 * (f[0] + f[n - 1]) + inner)
}

/// Trapezoid rule on arbitrary strictly increasing nodes.
pub fn trapezoid(xs: &[f64], f: &[f64]) -> f64 {
    assert_eq!(xs.len(), f.len());
    compensated_sum(
        xs.windows(2)
            .zip(f.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])),
    )
}

/// Trapezoid weights on arbitrary nodes; they sum exactly to the extent.
pub fn trapezoid_weights(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut w = vec![0.0; n];
    for i in 0..n - 1 {
        let half = 0.5 * (xs[i + 1] - xs[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    w
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for k in 0..n {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        xs[n - 1 - k] = x;
        ws[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for m in 2..=n {
        let m = m as f64;
        let p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(16))
}

/// Integrate a complex-valued function over [lo, hi] with panels graded
/// geometrically away from `center`: the innermost panel has half-width
/// `scale`, each ring doubles, and no panel is wider than `max_width`.
///
/// Intended for kernels like 1/(t-z) with Im z = scale: the integrand is
/// analytic with smoothness scale proportional to the distance from
/// `center`, so 16-point Gauss-Legendre per panel converges fast.
pub fn integrate_graded<F>(g: F, center: f64, scale: f64, lo: f64, hi: f64, max_width: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    assert!(hi > lo && scale > 0.0 && max_width > 0.0);
    let mut edges: Vec<f64> = vec![lo, hi];
    let mut r = scale;
    loop {
        let (a, b) = (center - r, center + r);
        if a > lo {
            edges.push(a);
        }
        if b < hi {
            edges.push(b);
        }
        if a <= lo && b >= hi {
            break;
        }
        r *= 2.0;
    }
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup();

    let (gx, gw) = gl16();
    let mut parts: Vec<Complex64> = Vec::new();
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let sub = ((b - a) / max_width).ceil().max(1.0) as usize;
        for m in 0..sub {
            let pa = a + (b - a) * m as f64 / sub as f64;
            let pb = a + (b - a) * (m + 1) as f64 / sub as f64;
            let mid = 0.5 * (pa + pb);
            let hw = 0.5 * (pb - pa);
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, w) in gx.iter().zip(gw.iter()) {
                acc += *w * g(mid + hw * x);
            }
            parts.push(hw * acc);
        }
    }
    let re = compensated_sum(parts.iter().map(|c| c.re));
    let im = compensated_sum(parts.iter().map(|c| c.im));
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (xs, ws) = gauss_legendre(16);
        // degree 31 is exact for n=16
        let val: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(30)).sum();
        assert!((val - 2.0 / 31.0).abs() < 1e-14);
        let total: f64 = ws.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn graded_matches_arctan_integral() {
        // ∫_{-8}^{8} dt / ((t-x)^2 + y^2) = [atan((t-x)/y)/y]
        let (x, y) = (1.5, 0.01);
        let f = |t: f64| Complex64::new(1.0 / ((t - x) * (t - x) + y * y), 0.0);
        let got = integrate_graded(f, x, y, -8.0, 8.0, 2.0);
        let exact = (((8.0 - x) / y).atan() - ((-8.0 - x) / y).atan()) / y;
        assert!((got.re - exact).abs() / exact < 1e-12);
    }

    #[test]
    fn trapezoid_weights_sum_to_extent() {
        let xs = crate::numerics::geomspace(0.25, 4.0, 37);
        let w = trapezoid_weights(&xs);
        let total: f64 = w.iter().sum();
        assert!((total - 3.75).abs() < 1e-12);
    }
}
