//! H^1/2 and H^3/2 seminorms, BMO norms, and interval moments.
//!
//! Circle H^1/2 is computed Fourier-side as Σ |n| |û(n)|²; the double
//! integral with the 1/(4π²) normalization and chordal distance is exposed
//! as an independent quadrature mode and agrees with the Fourier sum (the
//! two are cross-validated by the acceptance battery).

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::quadrature::trapezoid_uniform;
use crate::numerics::{compensated_sum, rel_diff};

use super::{CircleFunction, LineFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeminormMethod {
    Fourier,
    Gagliardo,
    Dyadic,
}

/// Result of a seminorm computation.
///
/// `value` is the *squared* seminorm for the H^1/2 / H^3/2 operators and the
/// supremal mean oscillation itself for BMO; `metadata` pins every
/// truncation choice so a report determines its own reproduction.
#[derive(Debug, Clone, Serialize)]
pub struct SeminormReport {
    pub value: f64,
    pub method: SeminormMethod,
    pub metadata: BTreeMap<String, String>,
}

impl SeminormReport {
    fn new(value: f64, method: SeminormMethod) -> Self {
        Self { value, method, metadata: BTreeMap::new() }
    }

    fn with(mut self, key: &str, val: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), val.to_string());
        self
    }

    /// Square root of the stored squared seminorm.
    pub fn seminorm(&self) -> f64 {
        self.value.max(0.0).sqrt()
    }
}

/// Squared H^1/2 seminorm on the circle, Fourier side: Σ |n| |û(n)|².
pub fn h12_circle(u: &CircleFunction) -> Result<SeminormReport> {
    let n = u.n_modes() as i64;
    let value = compensated_sum((-n..=n).map(|k| k.unsigned_abs() as f64 * u.coeff(k).norm_sqr()));
    Ok(SeminormReport::new(value, SeminormMethod::Fourier)
        .with("quantity", "squared_seminorm")
        .with("modes", n)
        .with("samples", u.sample_count()))
}

/// Squared H^1/2 seminorm on the circle by direct quadrature of the double
/// integral with the 1/(4π²) normalization and chordal distance.
///
/// The diagonal of the double sum is the removable limit |u'(θ)|².
pub fn h12_circle_gagliardo(u: &CircleFunction) -> Result<SeminormReport> {
    let m = u.sample_count();
    let h = TAU / m as f64;
    let s = u.samples();
    let du = u.derivative();
    let ds = du.samples();
    let mut rows = Vec::with_capacity(m);
    for j in 0..m {
        let mut acc = 0.0;
        for k in 0..m {
            if j == k {
                acc += ds[j].norm_sqr();
            } else {
                let half = 0.5 * h * (j as f64 - k as f64);
                let chord2 = 4.0 * half.sin().powi(2);
                acc += (s[j] - s[k]).norm_sqr() / chord2;
            }
        }
        rows.push(acc);
    }
    let value = compensated_sum(rows.into_iter()) * h * h / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
    Ok(SeminormReport::new(value, SeminormMethod::Gagliardo)
        .with("quantity", "squared_seminorm")
        .with("samples", m))
}

/// Squared H^1/2 seminorm on the line: truncated double integral with the
/// near-diagonal band |s| < diag_cutoff replaced by 2·cutoff·∫u'².
pub fn h12_line(u: &LineFunction, diag_cutoff: f64) -> Result<SeminormReport> {
    let n = u.values().len();
    let h = u.step();
    if diag_cutoff >= u.extent() {
        return Err(Error::invalid("diag_cutoff must be smaller than the grid half-width"));
    }
    if diag_cutoff < h - 1e-12 {
        return Err(Error::invalid("diag_cutoff below grid resolution"));
    }
    let v = u.values();
    // offsets are grid-aligned: s = k h with k >= k0
    let k0 = (diag_cutoff / h).round().max(1.0) as usize;
    let kmax = n - 1;
    let mut off_band_rows = Vec::with_capacity(kmax + 1 - k0);
    for k in k0..=kmax {
        let s = k as f64 * h;
        // trapezoid in s: half weight at the first offset (band edge)
        let ws = if k == k0 || k == kmax { 0.5 * h } else { h };
        let mut acc = 0.0;
        for i in 0..n - k {
            let d = v[i + k] - v[i];
            // both signs of s, rectangle rule in x with width h
            acc += 2.0 * d * d * h;
        }
        off_band_rows.push(ws * acc / (s * s));
    }
    let off_band = compensated_sum(off_band_rows.into_iter());
    let du = u.derivative();
    let grad2: Vec<f64> = du.values().iter().map(|d| d * d).collect();
    let band = 2.0 * diag_cutoff * trapezoid_uniform(h, &grad2);
    let norm = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    Ok(SeminormReport::new((off_band + band) / norm, SeminormMethod::Gagliardo)
        .with("quantity", "squared_seminorm")
        .with("extent", u.extent())
        .with("samples", n)
        .with("diag_cutoff", diag_cutoff)
        .with("band_contribution", band / norm)
        .with("off_band_contribution", off_band / norm))
}

/// Squared H^3/2 seminorm on the circle: H^1/2 of the angle derivative,
/// Fourier side.
pub fn h32_circle(u: &CircleFunction) -> Result<SeminormReport> {
    let r = h12_circle(&u.derivative())?;
    Ok(SeminormReport::new(r.value, SeminormMethod::Fourier)
        .with("quantity", "squared_seminorm")
        .with("order", "3/2")
        .with("modes", u.n_modes()))
}

/// Squared H^3/2 seminorm on the line: H^1/2 of the derivative samples.
pub fn h32_line(u: &LineFunction, diag_cutoff: f64) -> Result<SeminormReport> {
    let r = h12_line(&u.derivative(), diag_cutoff)?;
    Ok(SeminormReport::new(r.value, SeminormMethod::Gagliardo)
        .with("quantity", "squared_seminorm")
        .with("order", "3/2")
        .with("diag_cutoff", diag_cutoff))
}

fn interval_mean(h: f64, vals: &[f64]) -> f64 {
    trapezoid_uniform(h, vals) / (h * (vals.len() - 1) as f64)
}

fn mean_oscillation(h: f64, vals: &[f64]) -> f64 {
    let mean = interval_mean(h, vals);
    let dev: Vec<f64> = vals.iter().map(|v| (v - mean).abs()).collect();
    interval_mean(h, &dev)
}

/// BMO norm on the line: supremum of the mean oscillation over dyadic
/// subdivisions of the grid extent to `max_depth`, plus all translates by
/// half an interval length.
pub fn bmo_norm_line(u: &LineFunction, max_depth: u32) -> Result<SeminormReport> {
    if max_depth < 1 {
        return Err(Error::invalid("max_depth must be >= 1"));
    }
    let n = u.values().len();
    let h = u.step();
    let mut best = 0.0f64;
    let mut scanned = 0usize;
    let mut effective_depth = 0u32;
    for depth in 0..=max_depth {
        let len_nodes = (n - 1) >> depth;
        if len_nodes < 4 {
            break;
        }
        effective_depth = depth;
        let half = (len_nodes / 2).max(1);
        let mut start = 0usize;
        while start + len_nodes < n {
            let osc = mean_oscillation(h, &u.values()[start..=start + len_nodes]);
            best = best.max(osc);
            scanned += 1;
            start += half;
        }
        // right-aligned interval when the translates do not land on it
        let osc = mean_oscillation(h, &u.values()[n - 1 - len_nodes..]);
        best = best.max(osc);
        scanned += 1;
    }
    Ok(SeminormReport::new(best, SeminormMethod::Dyadic)
        .with("quantity", "sup_mean_oscillation")
        .with("max_depth", max_depth)
        .with("effective_depth", effective_depth)
        .with("intervals_scanned", scanned))
}

/// BMO norm on the circle: same dyadic-plus-translates scan over arcs.
pub fn bmo_norm_circle(u: &CircleFunction, max_depth: u32) -> Result<SeminormReport> {
    if max_depth < 1 {
        return Err(Error::invalid("max_depth must be >= 1"));
    }
    let vals = u.real_samples()?;
    let m = vals.len();
    let h = TAU / m as f64;
    let mut best = 0.0f64;
    let mut scanned = 0usize;
    for depth in 0..=max_depth {
        let len = m >> depth;
        if len < 4 {
            break;
        }
        let half = (len / 2).max(1);
        let count = if depth == 0 { 1 } else { m / half };
        for t in 0..count {
            let start = t * half;
            let arc: Vec<f64> = (0..=len).map(|k| vals[(start + k) % m]).collect();
            let osc = mean_oscillation(h, &arc);
            best = best.max(osc);
            scanned += 1;
        }
    }
    Ok(SeminormReport::new(best, SeminormMethod::Dyadic)
        .with("quantity", "sup_mean_oscillation")
        .with("max_depth", max_depth)
        .with("intervals_scanned", scanned))
}

fn interval_slice<'a>(u: &'a LineFunction, interval: (f64, f64)) -> Result<(&'a [f64], f64)> {
    let (a, b) = interval;
    if !(b > a) {
        return Err(Error::invalid("degenerate interval"));
    }
    if a < u.x0() || b > u.extent() {
        return Err(Error::OutOfDomain(format!("interval [{a}, {b}] outside grid")));
    }
    let h = u.step();
    let ia = ((a - u.x0()) / h).round() as usize;
    let ib = ((b - u.x0()) / h).round() as usize;
    if ib < ia + 2 {
        return Err(Error::invalid("interval shorter than two grid cells"));
    }
    Ok((&u.values()[ia..=ib], h))
}

/// John-Nirenberg moment (1/|I|) ∫_I |u - u_I|^p.
pub fn jn_moment(u: &LineFunction, interval: (f64, f64), p: f64) -> Result<f64> {
    if p < 1.0 {
        return Err(Error::invalid("p must be >= 1"));
    }
    let (vals, h) = interval_slice(u, interval)?;
    let mean = interval_mean(h, vals);
    let dev: Vec<f64> = vals.iter().map(|v| (v - mean).abs().powf(p)).collect();
    Ok(interval_mean(h, &dev))
}

/// Exponential John-Nirenberg moment (1/|I|) ∫_I (e^{|u - u_I|} - 1).
pub fn jn_exp_moment(u: &LineFunction, interval: (f64, f64)) -> Result<f64> {
    let (vals, h) = interval_slice(u, interval)?;
    let mean = interval_mean(h, vals);
    let dev: Vec<f64> = vals.iter().map(|v| (v - mean).abs().exp_m1()).collect();
    Ok(interval_mean(h, &dev))
}

/// Convenience check used by the invariants battery: relative agreement of
/// the Fourier and quadrature circle seminorms.
pub fn circle_cross_validation(u: &CircleFunction) -> Result<f64> {
    let a = h12_circle(u)?.value;
    let b = h12_circle_gagliardo(u)?.value;
    Ok(rel_diff(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::builtin_line;

    fn cos_theta(m: usize) -> CircleFunction {
        let vals: Vec<f64> = (0..m).map(|j| (TAU * j as f64 / m as f64).cos()).collect();
        CircleFunction::from_real_samples(vals, 8).unwrap()
    }

    #[test]
    fn h12_circle_constant_is_zero() {
        let u = CircleFunction::from_real_samples(vec![3.25; 64], 8).unwrap();
        assert!(h12_circle(&u).unwrap().value.abs() < 1e-24);
    }

    #[test]
    fn h12_circle_cosine_is_half() {
        let r = h12_circle(&cos_theta(512)).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12, "got {}", r.value);
    }

    #[test]
    fn h12_circle_cos_plus_sin2_is_three_halves() {
        let m = 512;
        let vals: Vec<f64> = (0..m)
            .map(|j| {
                let th = TAU * j as f64 / m as f64;
                th.cos() + (2.0 * th).sin()
            })
            .collect();
        let u = CircleFunction::from_real_samples(vals, 8).unwrap();
        let fourier = h12_circle(&u).unwrap().value;
        assert!((fourier - 1.5).abs() < 1e-12);
        let quad = h12_circle_gagliardo(&u).unwrap().value;
        assert!(rel_diff(fourier, quad) < 1e-3, "fourier {fourier} quad {quad}");
    }

    #[test]
    fn h12_circle_rejects_nonfinite() {
        let mut vals = vec![0.0; 64];
        vals[3] = f64::NAN;
        assert!(CircleFunction::from_real_samples(vals, 8).is_err());
    }

    #[test]
    fn h12_line_constant_is_zero() {
        let u = LineFunction::from_fn(16.0, 2049, 0.0, "none", |_| 2.0).unwrap();
        let r = h12_line(&u, u.step()).unwrap();
        assert!(r.value.abs() < 1e-18);
    }

    #[test]
    fn h12_line_cutoff_validation() {
        let u = builtin_line("gauss_bump", &Default::default()).unwrap();
        assert!(h12_line(&u, 20.0).is_err());
        assert!(h12_line(&u, 0.0).is_err());
    }

    #[test]
    fn h32_circle_of_sin_is_half() {
        let m = 512;
        let vals: Vec<f64> = (0..m).map(|j| (TAU * j as f64 / m as f64).sin()).collect();
        let u = CircleFunction::from_real_samples(vals, 8).unwrap();
        let r = h32_circle(&u).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn h32_circle_of_sin_plus_cos_is_one() {
        let m = 512;
        let vals: Vec<f64> = (0..m)
            .map(|j| {
                let th = TAU * j as f64 / m as f64;
                th.sin() + th.cos()
            })
            .collect();
        let u = CircleFunction::from_real_samples(vals, 8).unwrap();
        assert!((h32_circle(&u).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bmo_constant_is_zero() {
        let u = LineFunction::from_fn(2.0, 1025, 0.0, "none", |_| -1.5).unwrap();
        assert!(bmo_norm_line(&u, 10).unwrap().value.abs() < 1e-15);
    }

    #[test]
    fn bmo_homogeneity_exact() {
        let u = LineFunction::from_fn(2.0, 1025, 0.0, "none", |x| (1.0 - x.abs()).max(0.0)).unwrap();
        let scaled = u.map_values(|v| -3.5 * v).unwrap();
        let a = bmo_norm_line(&u, 10).unwrap().value;
        let b = bmo_norm_line(&scaled, 10).unwrap().value;
        assert!((b - 3.5 * a).abs() <= 1e-12 * b.max(1.0));
    }

    #[test]
    fn bmo_monotone_in_depth() {
        let u = builtin_line("gauss_bump", &Default::default()).unwrap();
        let mut prev = 0.0;
        for depth in 1..=10 {
            let v = bmo_norm_line(&u, depth).unwrap().value;
            assert!(v + 1e-15 >= prev, "depth {depth}: {v} < {prev}");
            prev = v;
        }
    }

    #[test]
    fn jn_moment_closed_forms() {
        let u = LineFunction::from_fn(16.0, 2049, 1.0, "none", |x| x).unwrap();
        let p1 = jn_moment(&u, (0.0, 1.0), 1.0).unwrap();
        assert!((p1 - 0.25).abs() < 1e-12, "p=1 moment {p1}");
        let p2 = jn_moment(&u, (0.0, 1.0), 2.0).unwrap();
        assert!((p2 - 1.0 / 12.0).abs() < 1e-4, "p=2 moment {p2}");
        let c = LineFunction::from_fn(16.0, 2049, 0.0, "none", |_| 7.0).unwrap();
        assert!(jn_moment(&c, (-3.0, 5.0), 1.7).unwrap().abs() < 1e-12);
        assert!(jn_exp_moment(&c, (-3.0, 5.0)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn jn_moment_rejects_degenerate() {
        let u = LineFunction::from_fn(16.0, 2049, 1.0, "none", |x| x).unwrap();
        assert!(jn_moment(&u, (1.0, 1.0), 1.0).is_err());
        assert!(jn_moment(&u, (0.0, 1.0), 0.5).is_err());
    }
}
