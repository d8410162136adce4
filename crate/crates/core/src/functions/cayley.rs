//! The Cayley transform γ(z) = (z-i)/(z+i) between the upper half plane and
//! the unit disk, and the transport of circle data to the line.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::linspace;

use super::{CircleFunction, LineFunction};

const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn gamma(z: Complex64) -> Complex64 {
    (z - I) / (z + I)
}

pub fn gamma_prime(z: Complex64) -> Complex64 {
    2.0 * I / ((z + I) * (z + I))
}

pub fn gamma_inv(w: Complex64) -> Complex64 {
    I * (1.0 + w) / (1.0 - w)
}

/// Angle of γ(x) for real x, normalized to (0, 2π); increasing in x.
pub fn line_point_to_angle(x: f64) -> f64 {
    let ang = (-2.0 * x).atan2(x * x - 1.0);
    if ang <= 0.0 {
        ang + std::f64::consts::TAU
    } else {
        ang
    }
}

/// Inverse of [`line_point_to_angle`]: the real point with γ(x) = e^{iα}.
pub fn angle_to_line_point(alpha: f64) -> f64 {
    -1.0 / (0.5 * alpha).tan()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CayleyMode {
    /// f = g ∘ γ
    Function,
    /// f = (g ∘ γ) / γ′ — transports tangential vector fields
    VectorField,
}

/// Pull a circle function back to the real line through the Cayley
/// transform, sampling the result on a uniform grid of the given extent.
///
/// In vector-field mode the input must be tangential (Re w̄ g(w) = 0 on the
/// sample angles) and the transported values must come out real.
pub fn cayley_pull(g: &CircleFunction, mode: CayleyMode, extent: f64, samples: usize) -> Result<LineFunction> {
    if let CayleyMode::VectorField = mode {
        let m = g.sample_count();
        let scale = g.samples().iter().map(|c| c.norm()).fold(0.0, f64::max).max(1e-30);
        for (j, val) in g.samples().iter().enumerate() {
            let theta = std::f64::consts::TAU * j as f64 / m as f64;
            let w = Complex64::new(theta.cos(), theta.sin());
            if (w.conj() * val).re.abs() > 1e-8 * scale {
                return Err(Error::invalid(format!(
                    "vector-field input is not tangential at angle {theta}"
                )));
            }
        }
    } else if !g.is_real() {
        return Err(Error::invalid("function-mode pull requires a real-valued circle function"));
    }

    let xs = linspace(-extent, extent, samples);
    let mut values = Vec::with_capacity(samples);
    let mut max_abs = 0.0f64;
    let mut max_im = 0.0f64;
    for &x in &xs {
        let theta = line_point_to_angle(x);
        let gv = g.eval_fourier(theta);
        let fv = match mode {
            CayleyMode::Function => gv,
            CayleyMode::VectorField => gv / gamma_prime(Complex64::new(x, 0.0)),
        };
        max_abs = max_abs.max(fv.norm());
        max_im = max_im.max(fv.im.abs());
        values.push(fv.re);
    }
    if max_im > 1e-8 * (1.0 + max_abs) {
        return Err(Error::invalid("transported values are not real"));
    }
    let decay = match mode {
        CayleyMode::Function => 0.0,
        // o(x²) growth model; the boundary case λ(1) ≠ 0 realizes it
        CayleyMode::VectorField => 2.0,
    };
    LineFunction::from_values(xs, values, decay, "cayley")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn gamma_maps_line_to_circle() {
        for &x in &[-5.0, -0.3, 0.0, 1.0, 17.0] {
            let w = gamma(Complex64::new(x, 0.0));
            assert!((w.norm() - 1.0).abs() < 1e-12);
            let back = gamma_inv(w);
            assert!((back.re - x).abs() < 1e-9 && back.im.abs() < 1e-9);
        }
    }

    #[test]
    fn angle_parametrization_consistent() {
        for &x in &[-9.0, -1.0, 0.0, 0.5, 4.0] {
            let a = line_point_to_angle(x);
            let w = gamma(Complex64::new(x, 0.0));
            assert!((w.re - a.cos()).abs() < 1e-12 && (w.im - a.sin()).abs() < 1e-12);
            assert!((angle_to_line_point(a) - x).abs() < 1e-9);
        }
    }

    #[test]
    fn pull_of_zero_is_zero() {
        let g = CircleFunction::from_real_samples(vec![0.0; 128], 8).unwrap();
        let f = cayley_pull(&g, CayleyMode::Function, 8.0, 257).unwrap();
        assert!(f.values().iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn rotation_field_pulls_to_half_quadratic() {
        // g(w) = i w, tangential; ω(x) = i γ / γ′ = (x² + 1)/2
        let m = 256;
        let samples: Vec<Complex64> = (0..m)
            .map(|j| {
                let th = TAU * j as f64 / m as f64;
                Complex64::new(0.0, 1.0) * Complex64::new(th.cos(), th.sin())
            })
            .collect();
        let g = CircleFunction::from_samples(samples, 8).unwrap();
        let f = cayley_pull(&g, CayleyMode::VectorField, 8.0, 257).unwrap();
        for (x, v) in f.xs().iter().zip(f.values()) {
            let expected = 0.5 * (x * x + 1.0);
            assert!((v - expected).abs() < 1e-9 * (1.0 + expected), "at {x}: {v}");
        }
    }

    #[test]
    fn vectorfield_mode_rejects_nontangential() {
        // g ≡ 1 is radial at w = 1
        let g = CircleFunction::from_real_samples(vec![1.0; 128], 4).unwrap();
        assert!(cayley_pull(&g, CayleyMode::VectorField, 8.0, 129).is_err());
    }

    #[test]
    fn pull_round_trip_through_inverse_angles() {
        // pull cos θ to the line, then evaluate back at sample angles
        let m = 256;
        let vals: Vec<f64> = (0..m).map(|j| (TAU * j as f64 / m as f64).cos()).collect();
        let g = CircleFunction::from_real_samples(vals.clone(), 8).unwrap();
        let f = cayley_pull(&g, CayleyMode::Function, 16.0, 4097).unwrap();
        for j in 0..m {
            let theta = TAU * j as f64 / m as f64;
            let x = angle_to_line_point(theta);
            if x.abs() <= 15.0 {
                let back = f.eval(x).unwrap();
                assert!((back - vals[j]).abs() < 1e-6, "angle {theta}");
            }
        }
    }
}
