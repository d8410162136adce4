//! Textual object format for function and field literals.
//!
//! Three shapes are accepted:
//!   {"type":"fourier","coeffs":[[re,im],...]}
//!   {"type":"samples","domain":"line","xs":[...],"ys":[...]}
//!   {"type":"builtin","name":"gauss_bump","params":{...}}
//! plus grid overrides ("extent", "samples_per_grid", "modes") where they
//! make sense. Time-dependent fields wrap a list of function literals.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};

use super::{CircleFunction, LineFunction, CIRCLE_MODES, CIRCLE_SAMPLES, LINE_EXTENT, LINE_SAMPLES};

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FunctionSpec {
    Fourier {
        /// centered coefficients -N..N as [re, im] pairs
        coeffs: Vec<[f64; 2]>,
        #[serde(default)]
        samples: Option<usize>,
    },
    Samples {
        #[serde(default = "default_domain")]
        domain: String,
        xs: Vec<f64>,
        ys: Vec<f64>,
        #[serde(default)]
        decay_exponent: Option<f64>,
        #[serde(default)]
        window: Option<String>,
    },
    Builtin {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
        #[serde(default)]
        extent: Option<f64>,
        #[serde(default)]
        samples: Option<usize>,
    },
}

fn default_domain() -> String {
    "line".to_string()
}

#[derive(Debug, Clone)]
pub enum ParsedFunction {
    Line(LineFunction),
    Circle(CircleFunction),
}

impl ParsedFunction {
    pub fn as_line(&self) -> Result<&LineFunction> {
        match self {
            ParsedFunction::Line(f) => Ok(f),
            ParsedFunction::Circle(_) => Err(Error::invalid("expected a line function")),
        }
    }

    pub fn as_circle(&self) -> Result<&CircleFunction> {
        match self {
            ParsedFunction::Circle(f) => Ok(f),
            ParsedFunction::Line(_) => Err(Error::invalid("expected a circle function")),
        }
    }
}

/// Parse a function literal from its JSON text.
pub fn parse_function_spec(text: &str) -> Result<ParsedFunction> {
    let spec: FunctionSpec =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("function literal: {e}")))?;
    build_function(&spec)
}

pub fn build_function(spec: &FunctionSpec) -> Result<ParsedFunction> {
    match spec {
        FunctionSpec::Fourier { coeffs, samples } => {
            let c: Vec<Complex64> = coeffs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
            let m = samples.unwrap_or(CIRCLE_SAMPLES);
            Ok(ParsedFunction::Circle(CircleFunction::from_coeffs(c, m)?))
        }
        FunctionSpec::Samples { domain, xs, ys, decay_exponent, window } => match domain.as_str() {
            "line" => {
                let f = LineFunction::from_values(
                    xs.clone(),
                    ys.clone(),
                    decay_exponent.unwrap_or(0.0),
                    window.clone().unwrap_or_else(|| "none".into()),
                )?;
                Ok(ParsedFunction::Line(f))
            }
            "circle" => {
                if !xs.is_empty() {
                    return Err(Error::Parse("circle sample literals take ys only (uniform angles)".into()));
                }
                Ok(ParsedFunction::Circle(CircleFunction::from_real_samples(ys.clone(), CIRCLE_MODES)?))
            }
            other => Err(Error::Parse(format!("unknown domain {other:?}"))),
        },
        FunctionSpec::Builtin { name, params, extent, samples } => {
            if is_circle_builtin(name) {
                Ok(ParsedFunction::Circle(builtin_circle(name, params, samples.unwrap_or(CIRCLE_SAMPLES))?))
            } else {
                let grid = (extent.unwrap_or(LINE_EXTENT), samples.unwrap_or(LINE_SAMPLES));
                Ok(ParsedFunction::Line(builtin_line_on(name, params, grid.0, grid.1)?))
            }
        }
    }
}

fn is_circle_builtin(name: &str) -> bool {
    matches!(name, "cosine" | "sine" | "sine_normalized" | "rotation" | "circle_zero" | "tangential_rotation")
}

fn p(params: &BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

/// Smooth compactly supported window: exp(1 - 1/(1-r²)) for |r| < 1.
pub fn taper(r: f64) -> f64 {
    if r.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - r * r)).exp()
    } else {
        0.0
    }
}

/// Line builtins on the default grid.
pub fn builtin_line(name: &str, params: &BTreeMap<String, f64>) -> Result<LineFunction> {
    builtin_line_on(name, params, LINE_EXTENT, LINE_SAMPLES)
}

pub fn builtin_line_on(name: &str, params: &BTreeMap<String, f64>, extent: f64, samples: usize) -> Result<LineFunction> {
    match name {
        "gauss_bump" => {
            let amp = p(params, "amp", 1.0);
            let center = p(params, "center", 0.0);
            let width = p(params, "width", 1.0);
            LineFunction::from_fn(extent, samples, -4.0, "gaussian", |x| {
                amp * (-((x - center) / width).powi(2)).exp()
            })
        }
        "sine_window" => {
            let amp = p(params, "amp", 1.0);
            let freq = p(params, "freq", 2.0);
            let half_width = p(params, "half_width", 6.0);
            LineFunction::from_fn(extent, samples, -4.0, "c-inf taper", move |x| {
                amp * (freq * x).sin() * taper(x / half_width)
            })
        }
        "triangle_bump" => {
            let height = p(params, "height", 1.0);
            let half_width = p(params, "half_width", 1.0);
            LineFunction::from_fn(extent, samples, -4.0, "compact", |x| {
                height * (1.0 - (x / half_width).abs()).max(0.0)
            })
        }
        "logistic" => {
            let amp = p(params, "amp", 1.0);
            LineFunction::from_fn(extent, samples, 2.0, "polynomial", |x| amp * x * (1.0 - x))
        }
        "inverse_quadratic" => {
            let amp = p(params, "amp", 1.0);
            LineFunction::from_fn(extent, samples, -2.0, "rational", |x| amp / (1.0 + x * x))
        }
        "ramp" => LineFunction::from_fn(extent, samples, 1.0, "affine", |x| x),
        "const" => {
            let value = p(params, "value", 1.0);
            LineFunction::from_fn(extent, samples, 0.0, "constant", |_| value)
        }
        "zero" => LineFunction::from_fn(extent, samples, -4.0, "zero", |_| 0.0),
        other => Err(Error::Parse(format!("unknown line builtin {other:?}"))),
    }
}

/// Circle builtins; angle-form real fields except `tangential_rotation`.
pub fn builtin_circle(name: &str, params: &BTreeMap<String, f64>, m: usize) -> Result<CircleFunction> {
    let theta = |j: usize| std::f64::consts::TAU * j as f64 / m as f64;
    match name {
        "cosine" => {
            let n = p(params, "n", 1.0);
            let amp = p(params, "amp", 1.0);
            let vals: Vec<f64> = (0..m).map(|j| amp * (n * theta(j)).cos()).collect();
            CircleFunction::from_real_samples(vals, CIRCLE_MODES)
        }
        "sine" => {
            let n = p(params, "n", 1.0);
            let amp = p(params, "amp", 1.0);
            let vals: Vec<f64> = (0..m).map(|j| amp * (n * theta(j)).sin()).collect();
            CircleFunction::from_real_samples(vals, CIRCLE_MODES)
        }
        // sin θ (1 + sin θ): vanishes at θ = 0, π, 3π/2, so it satisfies the
        // three-point normalization required by the Cayley conjugation
        "sine_normalized" => {
            let amp = p(params, "amp", 1.0);
            let vals: Vec<f64> = (0..m)
                .map(|j| {
                    let s = theta(j).sin();
                    amp * s * (1.0 + s)
                })
                .collect();
            CircleFunction::from_real_samples(vals, CIRCLE_MODES)
        }
        "rotation" => {
            let amp = p(params, "amp", 1.0);
            CircleFunction::from_real_samples(vec![amp; m], CIRCLE_MODES)
        }
        // g(w) = i a w: the tangential rotation field in complex form
        "tangential_rotation" => {
            let amp = p(params, "amp", 1.0);
            let vals: Vec<Complex64> = (0..m)
                .map(|j| Complex64::new(0.0, amp) * Complex64::new(theta(j).cos(), theta(j).sin()))
                .collect();
            CircleFunction::from_samples(vals, CIRCLE_MODES)
        }
        "circle_zero" => CircleFunction::from_real_samples(vec![0.0; m], 8),
        other => Err(Error::Parse(format!("unknown circle builtin {other:?}"))),
    }
}

/// Time-dependent field literal: either explicit knots with one function per
/// knot, or an autonomous function replicated over `knots` knot times.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Knotted {
        time_knots: Vec<f64>,
        fields: Vec<FunctionSpec>,
        #[serde(default)]
        interp: Option<String>,
    },
    Autonomous {
        autonomous: FunctionSpec,
        t_end: f64,
        #[serde(default)]
        knots: Option<usize>,
    },
}

/// Parse a field literal into knot times plus one parsed function per knot.
pub fn parse_field_spec(text: &str) -> Result<(Vec<f64>, Vec<ParsedFunction>)> {
    let spec: FieldSpec =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("field literal: {e}")))?;
    match spec {
        FieldSpec::Knotted { time_knots, fields, .. } => {
            if time_knots.len() != fields.len() {
                return Err(Error::Parse("time_knots and fields must have equal length".into()));
            }
            let parsed: Result<Vec<_>> = fields.iter().map(build_function).collect();
            Ok((time_knots, parsed?))
        }
        FieldSpec::Autonomous { autonomous, t_end, knots } => {
            let n = knots.unwrap_or(11).max(2);
            let f = build_function(&autonomous)?;
            let times: Vec<f64> = (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect();
            Ok((times, vec![f; n]))
        }
    }
}
