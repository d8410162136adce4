//! Shared numerical kernels: compensated sums, stencils, interpolation and
//! quadrature rules used by every module.

pub mod calculus;
pub mod interp;
pub mod quadrature;

/// Neumaier-compensated sum over an iterator, in iteration order.
///
/// All grid reductions in this crate go through this function so that a run
/// is reproducible bit-for-bit regardless of how the work producing the
/// terms was partitioned.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let new = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - new) + t;
        } else {
            comp += (t - new) + sum;
        }
        sum = new;
    }
    sum + comp
}

/// Least-squares slope of log(y) against log(x).
///
/// Used for the fitted scaling exponents (energy ~ eps^2, approximation
/// rates, convergence orders).
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2);
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in lx.iter().zip(ly.iter()) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Geometrically spaced nodes from `lo` to `hi` inclusive.
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    let mut v: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
    v[n - 1] = hi;
    v
}

/// Uniformly spaced nodes from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let h = (hi - lo) / (n - 1) as f64;
    let mut v: Vec<f64> = (0..n).map(|i| lo + h * i as f64).collect();
    v[n - 1] = hi;
    v
}

/// Relative difference |a-b| / max(|a|,|b|,floor).
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(1e-300);
    (a - b).abs() / scale
}
