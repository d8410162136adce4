//! Flows dη/dt = λ(t, η) of time-dependent fields on the circle and the
//! line, integrated particle-wise with classical RK4, plus the checks that
//! the log-derivative of the flow solves d/dt log h' = ω'(t, h).

use std::f64::consts::TAU;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{
    cayley_pull, h12_circle, h12_line, CayleyMode, CircleFunction, DomainTag, IncreasingMap,
    LineFunction, ParsedFunction,
};
use crate::numerics::interp::cubic_periodic;
use crate::numerics::{compensated_sum, linspace};

const ENDPOINT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TemporalInterp {
    Linear,
    Cubic,
}

#[derive(Debug, Clone)]
enum Knots {
    Line(Vec<LineFunction>),
    /// circle fields cache their real samples for the hot interpolation path
    Circle(Vec<(CircleFunction, Vec<f64>)>),
}

/// Time-dependent vector field: one spatial function per time knot with
/// linear (default) or cubic interpolation in time.
#[derive(Debug, Clone)]
pub struct TimeDependentField {
    knots: Vec<f64>,
    fields: Knots,
    interp: TemporalInterp,
    three_point_normalized: bool,
}

impl TimeDependentField {
    pub fn new_line(knots: Vec<f64>, fields: Vec<LineFunction>, interp: TemporalInterp) -> Result<Self> {
        Self::validate_knots(&knots, fields.len())?;
        for f in &fields {
            let scale = f.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let v0 = f.eval(0.0)?;
            let v1 = f.eval(1.0)?;
            if v0.abs() > ENDPOINT_TOL * (1.0 + scale) || v1.abs() > ENDPOINT_TOL * (1.0 + scale) {
                return Err(Error::invalid("line fields must vanish at 0 and 1"));
            }
        }
        Ok(Self { knots, fields: Knots::Line(fields), interp, three_point_normalized: false })
    }

    /// `normalized` asks for the three-point condition λ(1) = λ(-1) = λ(-i) = 0
    /// (angles 0, π, 3π/2), which the Cayley conjugation requires.
    pub fn new_circle(knots: Vec<f64>, fields: Vec<CircleFunction>, interp: TemporalInterp, normalized: bool) -> Result<Self> {
        Self::validate_knots(&knots, fields.len())?;
        let mut cached = Vec::with_capacity(fields.len());
        for f in fields {
            let reals = f.real_samples()?;
            if normalized {
                let scale = reals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                for angle in [0.0, std::f64::consts::PI, 1.5 * std::f64::consts::PI] {
                    if f.eval_fourier(angle).re.abs() > ENDPOINT_TOL * (1.0 + scale) {
                        return Err(Error::invalid(
                            "circle field does not satisfy the three-point normalization",
                        ));
                    }
                }
            }
            cached.push((f, reals));
        }
        Ok(Self { knots, fields: Knots::Circle(cached), interp, three_point_normalized: normalized })
    }

    pub fn autonomous_line(f: LineFunction, t_end: f64, n_knots: usize) -> Result<Self> {
        let knots = linspace(0.0, t_end, n_knots.max(2));
        let fields = vec![f; n_knots.max(2)];
        Self::new_line(knots, fields, TemporalInterp::Linear)
    }

    pub fn autonomous_circle(f: CircleFunction, t_end: f64, n_knots: usize, normalized: bool) -> Result<Self> {
        let knots = linspace(0.0, t_end, n_knots.max(2));
        let fields = vec![f; n_knots.max(2)];
        Self::new_circle(knots, fields, TemporalInterp::Linear, normalized)
    }

    /// Assemble from parsed literals (all knots must share the domain).
    pub fn from_parsed(knots: Vec<f64>, parsed: Vec<ParsedFunction>, interp: TemporalInterp) -> Result<Self> {
        if parsed.is_empty() {
            return Err(Error::invalid("field literal carries no knot functions"));
        }
        match &parsed[0] {
            ParsedFunction::Line(_) => {
                let fields: Result<Vec<LineFunction>> =
                    parsed.iter().map(|p| p.as_line().cloned()).collect();
                Self::new_line(knots, fields?, interp)
            }
            ParsedFunction::Circle(_) => {
                let fields: Result<Vec<CircleFunction>> =
                    parsed.iter().map(|p| p.as_circle().cloned()).collect();
                Self::new_circle(knots, fields?, interp, false)
            }
        }
    }

    fn validate_knots(knots: &[f64], n_fields: usize) -> Result<()> {
        if knots.len() != n_fields || knots.len() < 2 {
            return Err(Error::invalid("need one spatial function per knot, at least two knots"));
        }
        if knots[0] != 0.0 {
            return Err(Error::invalid("time knots must start at 0"));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("time knots must be strictly increasing"));
        }
        Ok(())
    }

    pub fn domain(&self) -> DomainTag {
        match self.fields {
            Knots::Line(_) => DomainTag::Line,
            Knots::Circle(_) => DomainTag::Circle,
        }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn t_end(&self) -> f64 {
        self.knots[self.knots.len() - 1]
    }

    pub fn is_three_point_normalized(&self) -> bool {
        self.three_point_normalized
    }

    pub fn line_knot(&self, j: usize) -> Result<&LineFunction> {
        match &self.fields {
            Knots::Line(fs) => Ok(&fs[j]),
            Knots::Circle(_) => Err(Error::invalid("expected a line field")),
        }
    }

    pub fn circle_knot(&self, j: usize) -> Result<&CircleFunction> {
        match &self.fields {
            Knots::Circle(fs) => Ok(&fs[j].0),
            Knots::Line(_) => Err(Error::invalid("expected a circle field")),
        }
    }

    fn spatial(&self, j: usize, x: f64) -> Result<f64> {
        match &self.fields {
            Knots::Line(fs) => {
                let f = &fs[j];
                if !f.contains(x) {
                    return Err(Error::OutOfDomain(format!("particle at {x} escaped the spatial window")));
                }
                Ok(f.eval_unchecked(x))
            }
            Knots::Circle(fs) => {
                let reals = &fs[j].1;
                let h = TAU / reals.len() as f64;
                Ok(cubic_periodic(0.0, h, reals, x))
            }
        }
    }

    /// λ(t, x) with the configured temporal interpolation.
    pub fn eval(&self, t: f64, x: f64) -> Result<f64> {
        let n = self.knots.len();
        let t = t.clamp(self.knots[0], self.knots[n - 1]);
        let k = match self.knots.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(k) => k.min(n - 2),
            Err(k) => k.saturating_sub(1).min(n - 2),
        };
        match self.interp {
            TemporalInterp::Linear => {
                let w = (t - self.knots[k]) / (self.knots[k + 1] - self.knots[k]);
                Ok((1.0 - w) * self.spatial(k, x)? + w * self.spatial(k + 1, x)?)
            }
            TemporalInterp::Cubic => {
                let lo = k.saturating_sub(1).min(n - 4);
                let ts = &self.knots[lo..lo + 4];
                let vs = [
                    self.spatial(lo, x)?,
                    self.spatial(lo + 1, x)?,
                    self.spatial(lo + 2, x)?,
                    self.spatial(lo + 3, x)?,
                ];
                let mut acc = 0.0;
                for i in 0..4 {
                    let mut w = 1.0;
                    for m in 0..4 {
                        if m != i {
                            w *= (t - ts[m]) / (ts[i] - ts[m]);
                        }
                    }
                    acc += w * vs[i];
                }
                Ok(acc)
            }
        }
    }

    /// The field of spatial derivatives λ'(t, ·), knot by knot.
    pub fn derivative_field(&self) -> Result<TimeDependentField> {
        let fields = match &self.fields {
            Knots::Line(fs) => Knots::Line(fs.iter().map(|f| f.derivative()).collect()),
            Knots::Circle(fs) => {
                let mut out = Vec::with_capacity(fs.len());
                for (f, _) in fs {
                    let d = f.derivative();
                    let reals = d.real_samples()?;
                    out.push((d, reals));
                }
                Knots::Circle(out)
            }
        };
        Ok(TimeDependentField {
            knots: self.knots.clone(),
            fields,
            interp: self.interp,
            three_point_normalized: false,
        })
    }
}

/// Flow snapshots at the field's knot times; the snapshot at t = 0 is the
/// identity on the particle set.
#[derive(Debug, Clone)]
pub struct FlowCurve {
    knots: Vec<f64>,
    snapshots: Vec<IncreasingMap>,
    steps: usize,
    order: u8,
}

impl FlowCurve {
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn snapshots(&self) -> &[IncreasingMap] {
        &self.snapshots
    }

    pub fn snapshot(&self, j: usize) -> &IncreasingMap {
        &self.snapshots[j]
    }

    pub fn final_snapshot(&self) -> &IncreasingMap {
        self.snapshots.last().expect("curve has at least two knots")
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    /// Per-knot CSV: x, h, h', log h'.
    pub fn write_csv<W: Write>(&self, knot: usize, mut w: W) -> Result<()> {
        let s = &self.snapshots[knot];
        writeln!(w, "x,h,dh,log_dh")?;
        for i in 0..s.xs().len() {
            writeln!(w, "{},{:.17e},{:.17e},{:.17e}", s.xs()[i], s.ys()[i], s.dys()[i], s.dys()[i].ln())?;
        }
        Ok(())
    }
}

fn require_uniform(particles: &[f64]) -> Result<f64> {
    if particles.len() < 8 {
        return Err(Error::invalid("need at least 8 particles"));
    }
    let h = particles[1] - particles[0];
    if h <= 0.0 || particles.windows(2).any(|w| (w[1] - w[0] - h).abs() > 1e-9 * h) {
        return Err(Error::invalid("particles must form a uniform increasing grid"));
    }
    Ok(h)
}

/// RK4 transport of an arbitrary state vector from t0 to t1 (no snapshot or
/// monotonicity machinery; used for composition checks).
pub fn flow_positions(field: &TimeDependentField, n_steps: usize, t0: f64, t1: f64, state: &[f64]) -> Result<Vec<f64>> {
    if n_steps < 1 || !(t1 > t0) {
        return Err(Error::invalid("need n_steps >= 1 and t1 > t0"));
    }
    let dt = (t1 - t0) / n_steps as f64;
    state
        .par_iter()
        .map(|&x0| {
            let mut x = x0;
            let mut t = t0;
            for _ in 0..n_steps {
                let k1 = field.eval(t, x)?;
                let k2 = field.eval(t + 0.5 * dt, x + 0.5 * dt * k1)?;
                let k3 = field.eval(t + 0.5 * dt, x + 0.5 * dt * k2)?;
                let k4 = field.eval(t + dt, x + dt * k3)?;
                x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                t += dt;
            }
            Ok(x)
        })
        .collect()
}

/// Classical fourth-order integration of every particle through the field,
/// with snapshots assembled at the field's knot times.
pub fn integrate_flow(field: &TimeDependentField, n_steps: usize, particles: &[f64]) -> Result<FlowCurve> {
    if n_steps < 1 {
        return Err(Error::invalid("n_steps must be >= 1"));
    }
    require_uniform(particles)?;
    if field.domain() == DomainTag::Circle {
        let span = particles[particles.len() - 1] - particles[0];
        if span >= TAU {
            return Err(Error::invalid("circle particles must cover less than one full turn"));
        }
    }
    let t_end = field.t_end();
    let knots = field.knots().to_vec();

    // per-knot-interval step counts proportional to the interval length
    let mut interval_steps = Vec::with_capacity(knots.len() - 1);
    for w in knots.windows(2) {
        let frac = (w[1] - w[0]) / t_end;
        interval_steps.push(((n_steps as f64 * frac).round() as usize).max(1));
    }

    // each particle runs through all knots independently
    let trajectories: Result<Vec<Vec<f64>>> = particles
        .par_iter()
        .map(|&x0| {
            let mut x = x0;
            let mut states = Vec::with_capacity(knots.len());
            states.push(x);
            for (seg, w) in knots.windows(2).enumerate() {
                let n = interval_steps[seg];
                let dt = (w[1] - w[0]) / n as f64;
                let mut t = w[0];
                for _ in 0..n {
                    let k1 = field.eval(t, x)?;
                    let k2 = field.eval(t + 0.5 * dt, x + 0.5 * dt * k1)?;
                    let k3 = field.eval(t + 0.5 * dt, x + 0.5 * dt * k2)?;
                    let k4 = field.eval(t + dt, x + dt * k3)?;
                    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                    t += dt;
                }
                states.push(x);
            }
            Ok(states)
        })
        .collect();
    let trajectories = trajectories?;

    let mut snapshots = Vec::with_capacity(knots.len());
    for j in 0..knots.len() {
        let ys: Vec<f64> = trajectories.iter().map(|tr| tr[j]).collect();
        if ys.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::StepSize(format!(
                "snapshot at t = {} lost monotonicity; refine n_steps",
                knots[j]
            )));
        }
        let map = match field.domain() {
            DomainTag::Line => IncreasingMap::new_line(particles.to_vec(), ys, vec![1.0; particles.len()])?,
            DomainTag::Circle => IncreasingMap::new_circle(particles.to_vec(), ys, vec![1.0; particles.len()])?,
        };
        snapshots.push(map.with_fd_derivatives()?);
    }
    Ok(FlowCurve { knots, snapshots, steps: n_steps, order: 4 })
}

/// log h'(t, ·) per knot, from the differentiated snapshots.
pub fn flow_log_derivative(curve: &FlowCurve) -> Vec<Vec<f64>> {
    curve.snapshots.iter().map(|s| s.log_derivative()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub sup: f64,
    pub mean: f64,
    pub knots_used: usize,
}

/// Residual of the identity d/dt log h'(t, ·) = ω'(t, h(t, ·)) at interior
/// knots: centered time differences of log h' against the transported
/// spatial derivative of the field.
pub fn check_logderiv_ode(curve: &FlowCurve, field: &TimeDependentField) -> Result<ResidualReport> {
    if curve.knots().len() < 3 {
        return Err(Error::invalid("need at least 3 knots for the centered residual"));
    }
    let dfield = field.derivative_field()?;
    let logs = flow_log_derivative(curve);
    let n = curve.knots().len();
    let np = curve.snapshot(0).xs().len();
    // edge particles carry one-sided spatial stencils on the line; skip them
    let (plo, phi) = match field.domain() {
        DomainTag::Line => (2usize, np.saturating_sub(2)),
        DomainTag::Circle => (0usize, np),
    };
    let mut sup = 0.0f64;
    let mut acc = Vec::new();
    for j in 1..n - 1 {
        let dt2 = curve.knots()[j + 1] - curve.knots()[j - 1];
        let snap = curve.snapshot(j);
        for i in plo..phi {
            let lhs = (logs[j + 1][i] - logs[j - 1][i]) / dt2;
            let rhs = dfield.eval(curve.knots()[j], snap.ys()[i])?;
            let r = (lhs - rhs).abs();
            sup = sup.max(r);
            acc.push(r);
        }
    }
    let mean = compensated_sum(acc.iter().copied()) / acc.len() as f64;
    Ok(ResidualReport { sup, mean, knots_used: n - 2 })
}

/// Transport a three-point-normalized circle field to the line:
/// ω(t, u) = λ(t, γ(u)) / γ'(u), realized through the tangential complex
/// form i e^{iθ} λ(θ) of the angle field.
pub fn conjugate_circle_to_line(field: &TimeDependentField, extent: f64, samples: usize) -> Result<TimeDependentField> {
    if field.domain() != DomainTag::Circle {
        return Err(Error::invalid("conjugation expects a circle field"));
    }
    if !field.is_three_point_normalized() {
        return Err(Error::invalid(
            "circle field must carry the three-point normalization (λ = 0 at 1, -1, -i)",
        ));
    }
    let mut line_fields = Vec::with_capacity(field.knots().len());
    for j in 0..field.knots().len() {
        let lam = field.circle_knot(j)?;
        let m = lam.sample_count();
        let tangential: Vec<num_complex::Complex64> = (0..m)
            .map(|q| {
                let th = TAU * q as f64 / m as f64;
                num_complex::Complex64::new(0.0, 1.0)
                    * num_complex::Complex64::new(th.cos(), th.sin())
                    * lam.eval_fourier(th)
            })
            .collect();
        let g = CircleFunction::from_samples(tangential, lam.n_modes() + 2)?;
        line_fields.push(cayley_pull(&g, CayleyMode::VectorField, extent, samples)?);
    }
    TimeDependentField::new_line(field.knots().to_vec(), line_fields, TemporalInterp::Linear)
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothnessReport {
    /// squared H^1/2 seminorm of log h' per knot
    pub seminorms: Vec<f64>,
    /// difference-quotient seminorms ‖log h'(t+Δ) - log h'(t)‖ / Δ for the
    /// probed Δ ladder (largest first)
    pub quotients: Vec<f64>,
    /// ratios of successive quotients (→ 1 for a C¹ curve)
    pub ratios: Vec<f64>,
}

/// Numerical differentiability proxy: per-knot seminorms of log h', and a
/// Δ-refinement ladder of difference quotients around the middle knot.
pub fn smoothness_probe(curve: &FlowCurve) -> Result<SmoothnessReport> {
    let n = curve.knots().len();
    if n < 3 {
        return Err(Error::invalid("need at least 3 knots"));
    }
    let logs = flow_log_derivative(curve);
    let seminorm_of = |vals: &[f64], snap: &IncreasingMap| -> Result<f64> {
        match snap.domain() {
            DomainTag::Line => {
                let f = LineFunction::from_values(snap.xs().to_vec(), vals.to_vec(), 0.0, "probe")?;
                Ok(h12_line(&f, f.step())?.value)
            }
            DomainTag::Circle => {
                let f = CircleFunction::from_real_samples(vals.to_vec(), 32)?;
                Ok(h12_circle(&f)?.value)
            }
        }
    };
    let mut seminorms = Vec::with_capacity(n);
    for j in 0..n {
        seminorms.push(seminorm_of(&logs[j], curve.snapshot(j))?);
    }

    // Δ ladder: from the middle knot, spans of 4, 2, 1 knot intervals
    let mid = n / 2;
    let mut quotients = Vec::new();
    for span in [4usize, 2, 1] {
        if mid + span >= n {
            continue;
        }
        let dt = curve.knots()[mid + span] - curve.knots()[mid];
        let diff: Vec<f64> = logs[mid + span].iter().zip(&logs[mid]).map(|(a, b)| a - b).collect();
        let sq = seminorm_of(&diff, curve.snapshot(mid))?;
        quotients.push(sq.max(0.0).sqrt() / dt);
    }
    let ratios: Vec<f64> = quotients.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(SmoothnessReport { seminorms, quotients, ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{builtin_circle, builtin_line_on};

    fn logistic_field(n_knots: usize) -> TimeDependentField {
        let f = builtin_line_on("logistic", &Default::default(), 16.0, 2049).unwrap();
        TimeDependentField::autonomous_line(f, 1.0, n_knots).unwrap()
    }

    fn logistic_exact(t: f64, x: f64) -> f64 {
        x * t.exp() / (1.0 + x * (t.exp() - 1.0))
    }

    #[test]
    fn zero_field_gives_identity_flow() {
        let f = builtin_line_on("zero", &Default::default(), 16.0, 2049).unwrap();
        let field = TimeDependentField::autonomous_line(f, 1.0, 5).unwrap();
        let particles = linspace(-2.0, 2.0, 65);
        let curve = integrate_flow(&field, 16, &particles).unwrap();
        for snap in curve.snapshots() {
            for (x, y) in snap.xs().iter().zip(snap.ys()) {
                assert_eq!(x, y);
            }
            for d in snap.dys() {
                assert!((d - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rigid_rotation_flow() {
        let lam = builtin_circle("rotation", &Default::default(), 256).unwrap();
        let field = TimeDependentField::autonomous_circle(lam, 0.75, 4, false).unwrap();
        let m = 128;
        let particles: Vec<f64> = (0..m).map(|j| TAU * j as f64 / m as f64).collect();
        let curve = integrate_flow(&field, 64, &particles).unwrap();
        let snap = curve.final_snapshot();
        for (x, y) in snap.xs().iter().zip(snap.ys()) {
            assert!((y - (x + 0.75)).abs() < 1e-12);
        }
        // log-derivative identically zero
        for v in snap.log_derivative() {
            assert!(v.abs() < 1e-10);
        }
    }

    #[test]
    fn logistic_flow_matches_closed_form() {
        let field = logistic_field(11);
        let particles = linspace(-0.25, 1.25, 97);
        let curve = integrate_flow(&field, 1000, &particles).unwrap();
        let snap = curve.final_snapshot();
        let mut worst = 0.0f64;
        for (x, y) in snap.xs().iter().zip(snap.ys()) {
            worst = worst.max((y - logistic_exact(1.0, *x)).abs());
        }
        assert!(worst < 1e-6, "sup error {worst}");
    }

    #[test]
    fn logistic_log_derivative_closed_form() {
        let field = logistic_field(11);
        let particles = linspace(-0.25, 1.25, 193);
        let curve = integrate_flow(&field, 500, &particles).unwrap();
        let snap = curve.final_snapshot();
        let logs = snap.log_derivative();
        // log h'(1, x) = 1 - 2 log(1 + x(e - 1))
        let e = std::f64::consts::E;
        for (i, x) in snap.xs().iter().enumerate().skip(2).take(189) {
            let expected = 1.0 - 2.0 * (1.0 + x * (e - 1.0)).ln();
            assert!((logs[i] - expected).abs() < 1e-5, "x={x}: {} vs {expected}", logs[i]);
        }
    }

    #[test]
    fn monotonicity_violation_reports_step_error() {
        // strong compressive field with a handful of steps on a coarse knot
        let params: std::collections::BTreeMap<String, f64> = [("amp".to_string(), 30.0)].into_iter().collect();
        let f = builtin_line_on("sine_window", &params, 16.0, 2049).unwrap();
        // shift so it vanishes at 0 and 1: multiply by x(1-x) profile
        let vals: Vec<f64> = f.xs().iter().zip(f.values()).map(|(x, v)| v * x * (1.0 - x)).collect();
        let g = LineFunction::from_values(f.xs().to_vec(), vals, 2.0, "test").unwrap();
        let field = TimeDependentField::autonomous_line(g, 1.0, 3).unwrap();
        let particles = linspace(-0.5, 1.5, 65);
        let r = integrate_flow(&field, 1, &particles);
        assert!(matches!(r, Err(Error::StepSize(_)) | Err(Error::OutOfDomain(_))), "{r:?}");
    }

    #[test]
    fn logderiv_ode_zero_for_zero_field() {
        let f = builtin_line_on("zero", &Default::default(), 16.0, 2049).unwrap();
        let field = TimeDependentField::autonomous_line(f, 1.0, 5).unwrap();
        let particles = linspace(-2.0, 2.0, 65);
        let curve = integrate_flow(&field, 32, &particles).unwrap();
        let r = check_logderiv_ode(&curve, &field).unwrap();
        assert!(r.sup < 1e-12);
    }

    #[test]
    fn logderiv_ode_logistic_within_tolerance() {
        let field = logistic_field(201);
        let particles = linspace(-0.125, 1.125, 161);
        let curve = integrate_flow(&field, 1005, &particles).unwrap();
        let r = check_logderiv_ode(&curve, &field).unwrap();
        assert!(r.sup <= 1e-4, "sup residual {}", r.sup);
    }

    #[test]
    fn conjugation_requires_normalization() {
        let lam = builtin_circle("sine", &Default::default(), 512).unwrap();
        let field = TimeDependentField::autonomous_circle(lam, 1.0, 3, false).unwrap();
        assert!(conjugate_circle_to_line(&field, 16.0, 2049).is_err());
        // sine does not vanish at 3π/2, so the normalized constructor rejects it
        let lam2 = builtin_circle("sine", &Default::default(), 512).unwrap();
        assert!(TimeDependentField::autonomous_circle(lam2, 1.0, 3, true).is_err());
    }

    #[test]
    fn conjugated_zero_field_is_zero() {
        let lam = builtin_circle("circle_zero", &Default::default(), 256).unwrap();
        let field = TimeDependentField::autonomous_circle(lam, 1.0, 3, true).unwrap();
        let omega = conjugate_circle_to_line(&field, 16.0, 2049).unwrap();
        let f0 = omega.line_knot(0).unwrap();
        assert!(f0.values().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn conjugated_field_vanishes_at_zero_and_one() {
        let lam = builtin_circle("sine_normalized", &Default::default(), 512).unwrap();
        let field = TimeDependentField::autonomous_circle(lam, 0.5, 3, true).unwrap();
        let omega = conjugate_circle_to_line(&field, 16.0, 2049).unwrap();
        let f0 = omega.line_knot(0).unwrap();
        assert!(f0.eval(0.0).unwrap().abs() < 1e-8);
        assert!(f0.eval(1.0).unwrap().abs() < 1e-8);
    }

    #[test]
    fn semigroup_property_autonomous() {
        let field = logistic_field(2);
        let particles = linspace(-0.25, 1.25, 65);
        let whole = flow_positions(&field, 997, 0.0, 1.0, &particles).unwrap();
        // stop at t = 0.55, reseed, integrate the remainder
        let mid = flow_positions(&field, 550, 0.0, 0.55, &particles).unwrap();
        let end = flow_positions(&field, 450, 0.55, 1.0, &mid).unwrap();
        let mut worst = 0.0f64;
        for (a, b) in end.iter().zip(&whole) {
            worst = worst.max((a - b).abs());
        }
        assert!(worst < 1e-9, "semigroup defect {worst}");
    }

    #[test]
    fn smoothness_probe_zero_field() {
        let f = builtin_line_on("zero", &Default::default(), 16.0, 2049).unwrap();
        let field = TimeDependentField::autonomous_line(f, 1.0, 9).unwrap();
        let particles = linspace(-2.0, 2.0, 129);
        let curve = integrate_flow(&field, 64, &particles).unwrap();
        let r = smoothness_probe(&curve).unwrap();
        assert!(r.seminorms.iter().all(|s| s.abs() < 1e-18));
    }
}
