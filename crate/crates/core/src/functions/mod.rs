//! Function representations on the circle and the line, plus the seminorm
//! engines (H^1/2, H^3/2, BMO) every other module consumes.

mod cayley;
mod literal;
mod seminorm;

pub use cayley::{
    angle_to_line_point, cayley_pull, gamma, gamma_inv, gamma_prime, line_point_to_angle,
    CayleyMode,
};
pub use literal::{
    builtin_circle, builtin_line, builtin_line_on, parse_field_spec, parse_function_spec, taper,
    FieldSpec, FunctionSpec, ParsedFunction,
};
pub use seminorm::{
    bmo_norm_circle, bmo_norm_line, circle_cross_validation, h12_circle, h12_circle_gagliardo,
    h12_line, h32_circle, h32_line, jn_exp_moment, jn_moment, SeminormMethod, SeminormReport,
};

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::calculus::{derivative_periodic, derivative_uniform};
use crate::numerics::interp::{cubic_periodic, cubic_uniform, invert_monotone};
use crate::numerics::linspace;

/// Default half-extent of line grids.
pub const LINE_EXTENT: f64 = 16.0;
/// Default sample count of line grids (2^11 cells).
pub const LINE_SAMPLES: usize = 2049;
/// Default number of uniform angles on the circle.
pub const CIRCLE_SAMPLES: usize = 1024;
/// Default Fourier bandwidth retained from circle samples.
pub const CIRCLE_MODES: usize = 64;

/// Periodic function carried as uniform samples plus Fourier coefficients.
#[derive(Debug, Clone)]
pub struct CircleFunction {
    samples: Vec<Complex64>,
    /// coefficients for modes -n_modes ..= n_modes, stored in that order
    coeffs: Vec<Complex64>,
    n_modes: usize,
    is_real: bool,
}

impl CircleFunction {
    /// Build from complex samples at `M` uniform angles 2πj/M.
    pub fn from_samples(samples: Vec<Complex64>, n_modes: usize) -> Result<Self> {
        let m = samples.len();
        if m < 8 {
            return Err(Error::invalid("need at least 8 circle samples"));
        }
        if samples.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("non-finite circle samples"));
        }
        let n_modes = n_modes.min(m / 2 - 1);
        let coeffs = dft_centered(&samples, n_modes);
        let is_real = samples.iter().all(|c| c.im.abs() <= 1e-12 * (1.0 + c.re.abs()));
        Ok(Self { samples, coeffs, n_modes, is_real })
    }

    pub fn from_real_samples(values: Vec<f64>, n_modes: usize) -> Result<Self> {
        let samples = values.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
        Self::from_samples(samples, n_modes)
    }

    /// Build from centered coefficients (index -N..N); samples are the exact
    /// Fourier sums at `m` uniform angles.
    pub fn from_coeffs(coeffs: Vec<Complex64>, m: usize) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::invalid("coefficient list must have odd length (-N..N)"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::invalid("non-finite Fourier coefficients"));
        }
        let n = coeffs.len() / 2;
        if m < 2 * n + 2 {
            return Err(Error::invalid("sample count below Nyquist for given bandwidth"));
        }
        let samples: Vec<Complex64> = (0..m)
            .map(|j| eval_fourier(&coeffs, n, TAU * j as f64 / m as f64))
            .collect();
        let is_real = (1..=n).all(|k| {
            let diff = coeffs[n + k] - coeffs[n - k].conj();
            diff.norm() <= 1e-12 * (1.0 + coeffs[n + k].norm())
        }) && coeffs[n].im.abs() <= 1e-12;
        Ok(Self { samples, coeffs, n_modes: n, is_real })
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Coefficient û(k) for |k| <= n_modes, 0 beyond.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.n_modes as i64;
        if k.abs() > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + n) as usize]
        }
    }

    /// Real sample values; error when the function is not real-valued.
    pub fn real_samples(&self) -> Result<Vec<f64>> {
        if !self.is_real {
            return Err(Error::invalid("circle function is not real-valued"));
        }
        Ok(self.samples.iter().map(|c| c.re).collect())
    }

    /// Evaluate by the Fourier sum of the retained modes.
    pub fn eval_fourier(&self, theta: f64) -> Complex64 {
        eval_fourier(&self.coeffs, self.n_modes, theta)
    }

    /// Evaluate a real-valued function by periodic cubic interpolation of
    /// its samples (used by the flow integrator).
    pub fn eval_cubic_real(&self, theta: f64) -> Result<f64> {
        let vals = self.real_samples()?;
        let h = TAU / vals.len() as f64;
        Ok(cubic_periodic(0.0, h, &vals, theta))
    }

    /// Derivative with respect to the angle, via the Fourier coefficients.
    pub fn derivative(&self) -> Self {
        let n = self.n_modes as i64;
        let coeffs: Vec<Complex64> = (-n..=n)
            .map(|k| Complex64::new(0.0, k as f64) * self.coeff(k))
            .collect();
        let m = self.samples.len();
        let samples: Vec<Complex64> = (0..m)
            .map(|j| eval_fourier(&coeffs, self.n_modes, TAU * j as f64 / m as f64))
            .collect();
        Self { samples, coeffs, n_modes: self.n_modes, is_real: self.is_real }
    }

    /// Max |samples - Fourier sum| over the sample angles; the
    /// representation invariant asks this to be small for smooth inputs.
    pub fn representation_defect(&self) -> f64 {
        let m = self.samples.len();
        (0..m)
            .map(|j| (self.samples[j] - self.eval_fourier(TAU * j as f64 / m as f64)).norm())
            .fold(0.0, f64::max)
    }
}

fn dft_centered(samples: &[Complex64], n: usize) -> Vec<Complex64> {
    let m = samples.len();
    let mut coeffs = Vec::with_capacity(2 * n + 1);
    for k in -(n as i64)..=(n as i64) {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, s) in samples.iter().enumerate() {
            let ang = -TAU * (k as f64) * (j as f64) / (m as f64);
            acc += s * Complex64::new(ang.cos(), ang.sin());
        }
        coeffs.push(acc / m as f64);
    }
    coeffs
}

fn eval_fourier(coeffs: &[Complex64], n: usize, theta: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, c) in coeffs.iter().enumerate() {
        let k = idx as f64 - n as f64;
        acc += c * Complex64::new((k * theta).cos(), (k * theta).sin());
    }
    acc
}

/// Real-valued function on a symmetric uniform grid [-X, X] with a declared
/// power-law decay model for the tails beyond the grid.
#[derive(Debug, Clone)]
pub struct LineFunction {
    xs: Vec<f64>,
    values: Vec<f64>,
    h: f64,
    decay_exponent: f64,
    window: String,
}

impl LineFunction {
    pub fn from_values(xs: Vec<f64>, values: Vec<f64>, decay_exponent: f64, window: impl Into<String>) -> Result<Self> {
        if xs.len() != values.len() || xs.len() < 8 {
            return Err(Error::invalid("grid and values must match, at least 8 samples"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite line values"));
        }
        let h = xs[1] - xs[0];
        if h <= 0.0 {
            return Err(Error::invalid("grid must be strictly increasing"));
        }
        for w in xs.windows(2) {
            if (w[1] - w[0] - h).abs() > 1e-9 * h {
                return Err(Error::invalid("line grids must be uniform"));
            }
        }
        Ok(Self { xs, values, h, decay_exponent, window: window.into() })
    }

    /// Sample a closure on the default grid.
    pub fn from_fn(extent: f64, n: usize, decay_exponent: f64, window: impl Into<String>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let xs = linspace(-extent, extent, n);
        let values = xs.iter().map(|&x| f(x)).collect();
        Self::from_values(xs, values, decay_exponent, window)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn extent(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn x0(&self) -> f64 {
        self.xs[0]
    }

    pub fn decay_exponent(&self) -> f64 {
        self.decay_exponent
    }

    pub fn window(&self) -> &str {
        &self.window
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.xs[0] && x <= self.xs[self.xs.len() - 1]
    }

    /// Cubic interpolation; errors outside the grid.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.contains(x) {
            return Err(Error::OutOfDomain(format!("x = {x} outside grid [{}, {}]", self.x0(), self.extent())));
        }
        Ok(cubic_uniform(self.xs[0], self.h, &self.values, x))
    }

    /// Interpolate without the domain check (callers that already clamped).
    pub fn eval_unchecked(&self, x: f64) -> f64 {
        cubic_uniform(self.xs[0], self.h, &self.values, x)
    }

    /// Fourth-order derivative samples on the same grid.
    pub fn derivative(&self) -> Self {
        let d = derivative_uniform(self.h, &self.values);
        Self {
            xs: self.xs.clone(),
            values: d,
            h: self.h,
            decay_exponent: (self.decay_exponent - 1.0).max(-8.0),
            window: self.window.clone(),
        }
    }

    /// Index of the grid node closest to x, requiring near-exact alignment.
    pub fn index_of(&self, x: f64) -> Result<usize> {
        let t = (x - self.xs[0]) / self.h;
        let i = t.round() as i64;
        if i < 0 || i as usize >= self.xs.len() || (t - i as f64).abs() > 1e-6 {
            return Err(Error::invalid(format!("x = {x} is not a grid node")));
        }
        Ok(i as usize)
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        Self::from_values(self.xs.clone(), values, self.decay_exponent, self.window.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainTag {
    Line,
    Circle,
}

/// Strictly monotone sampled homeomorphism with derivative samples.
///
/// On the circle the samples are the lifted angles of the image of M
/// uniform angles; the lift increases by exactly 2π over one revolution.
#[derive(Debug, Clone)]
pub struct IncreasingMap {
    domain: DomainTag,
    xs: Vec<f64>,
    ys: Vec<f64>,
    dys: Vec<f64>,
}

impl IncreasingMap {
    pub fn new_line(xs: Vec<f64>, ys: Vec<f64>, dys: Vec<f64>) -> Result<Self> {
        Self::validate(&xs, &ys, &dys)?;
        Ok(Self { domain: DomainTag::Line, xs, ys, dys })
    }

    /// Circle map: xs are M uniform angles in [0, 2π), ys the lifted images.
    pub fn new_circle(xs: Vec<f64>, ys: Vec<f64>, dys: Vec<f64>) -> Result<Self> {
        Self::validate(&xs, &ys, &dys)?;
        let m = xs.len();
        let wrap = ys[0] + TAU - ys[m - 1];
        if wrap <= 0.0 {
            return Err(Error::invalid("circle lift must increase by 2π over one revolution"));
        }
        Ok(Self { domain: DomainTag::Circle, xs, ys, dys })
    }

    fn validate(xs: &[f64], ys: &[f64], dys: &[f64]) -> Result<()> {
        if xs.len() != ys.len() || xs.len() != dys.len() || xs.len() < 5 {
            return Err(Error::invalid("xs/ys/dys must have equal length >= 5"));
        }
        if ys.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("ys must be strictly increasing"));
        }
        if dys.iter().any(|&d| !(d > 0.0)) {
            return Err(Error::invalid("derivative samples must be positive"));
        }
        Ok(())
    }

    pub fn identity_line(xs: Vec<f64>) -> Result<Self> {
        let ys = xs.clone();
        let dys = vec![1.0; xs.len()];
        Self::new_line(xs, ys, dys)
    }

    pub fn domain(&self) -> DomainTag {
        self.domain
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn dys(&self) -> &[f64] {
        &self.dys
    }

    pub fn step(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    /// Evaluate the map by cubic interpolation.
    ///
    /// Circle maps interpolate the periodic displacement y(θ) - θ so any
    /// lifted angle is valid.
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.domain {
            DomainTag::Line => {
                if x < self.xs[0] || x > self.xs[self.xs.len() - 1] {
                    return Err(Error::OutOfDomain(format!("map argument {x} outside sampled range")));
                }
                Ok(cubic_uniform(self.xs[0], self.step(), &self.ys, x))
            }
            DomainTag::Circle => {
                let disp: Vec<f64> = self.xs.iter().zip(&self.ys).map(|(x, y)| y - x).collect();
                Ok(x + cubic_periodic(self.xs[0], self.step(), &disp, x))
            }
        }
    }

    /// Evaluate the derivative by cubic interpolation of the samples.
    pub fn eval_derivative(&self, x: f64) -> Result<f64> {
        match self.domain {
            DomainTag::Line => {
                if x < self.xs[0] || x > self.xs[self.xs.len() - 1] {
                    return Err(Error::OutOfDomain(format!("map argument {x} outside sampled range")));
                }
                Ok(cubic_uniform(self.xs[0], self.step(), &self.dys, x))
            }
            DomainTag::Circle => Ok(cubic_periodic(self.xs[0], self.step(), &self.dys, x)),
        }
    }

    /// Inverse value by monotone cubic inverse interpolation (line maps).
    pub fn eval_inverse(&self, y: f64) -> Result<f64> {
        if self.domain != DomainTag::Line {
            return Err(Error::invalid("inverse lookup implemented for line maps"));
        }
        invert_monotone(&self.xs, &self.ys, self.step(), y)
            .ok_or_else(|| Error::OutOfDomain(format!("target {y} outside sampled image")))
    }

    /// log of the derivative samples.
    pub fn log_derivative(&self) -> Vec<f64> {
        self.dys.iter().map(|d| d.ln()).collect()
    }

    /// Replace derivative samples by differentiating the position samples.
    pub fn with_fd_derivatives(mut self) -> Result<Self> {
        let d = match self.domain {
            DomainTag::Line => derivative_uniform(self.step(), &self.ys),
            DomainTag::Circle => {
                let disp: Vec<f64> = self.xs.iter().zip(&self.ys).map(|(x, y)| y - x).collect();
                derivative_periodic(self.step(), &disp).iter().map(|d| d + 1.0).collect()
            }
        };
        if d.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::StepSize("differentiated snapshot has nonpositive slope".into()));
        }
        self.dys = d;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_samples_and_coeffs_agree() {
        let m = 256;
        let vals: Vec<f64> = (0..m).map(|j| (TAU * j as f64 / m as f64).cos()).collect();
        let u = CircleFunction::from_real_samples(vals, 16).unwrap();
        assert!(u.is_real());
        assert!((u.coeff(1).re - 0.5).abs() < 1e-12);
        assert!((u.coeff(-1).re - 0.5).abs() < 1e-12);
        assert!(u.representation_defect() < 1e-12);
    }

    #[test]
    fn real_coeff_symmetry_flag() {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 5];
        coeffs[3] = Complex64::new(0.25, -0.5); // mode +1
        coeffs[1] = Complex64::new(0.25, 0.5); // mode -1, conjugate
        let u = CircleFunction::from_coeffs(coeffs, 64).unwrap();
        assert!(u.is_real());
    }

    #[test]
    fn fourier_derivative_of_sin_is_cos() {
        let m = 128;
        let vals: Vec<f64> = (0..m).map(|j| (TAU * j as f64 / m as f64).sin()).collect();
        let u = CircleFunction::from_real_samples(vals, 8).unwrap();
        let du = u.derivative();
        for j in 0..m {
            let th = TAU * j as f64 / m as f64;
            assert!((du.samples()[j].re - th.cos()).abs() < 1e-11);
        }
    }

    #[test]
    fn line_function_rejects_nonuniform() {
        let xs = vec![0.0, 1.0, 2.5, 3.0, 4.0, 5.0, 6.0, 7.0];
        let vals = vec![0.0; 8];
        assert!(LineFunction::from_values(xs, vals, 0.0, "none").is_err());
    }

    #[test]
    fn increasing_map_rejects_flat() {
        let xs = linspace(0.0, 1.0, 9);
        let mut ys = xs.clone();
        ys[4] = ys[3];
        let dys = vec![1.0; 9];
        assert!(IncreasingMap::new_line(xs, ys, dys).is_err());
    }

    #[test]
    fn circle_map_wrap_increment() {
        let m = 64;
        let xs: Vec<f64> = (0..m).map(|j| TAU * j as f64 / m as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&t| t + 0.1 * t.sin()).collect();
        let dys: Vec<f64> = xs.iter().map(|&t| 1.0 + 0.1 * t.cos()).collect();
        let g = IncreasingMap::new_circle(xs, ys, dys).unwrap();
        let v = g.eval(0.3).unwrap();
        assert!((v - (0.3 + 0.1 * 0.3f64.sin())).abs() < 1e-6);
        // evaluation wraps: one period later the lift advances by 2π
        let w = g.eval(0.3 + TAU).unwrap();
        assert!((w - v - TAU).abs() < 1e-9);
    }
}
