//! The verification battery: every module's invariants and properties as
//! pass/fail rows. The CLI `verify` subcommand and the acceptance test both
//! run these.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::flow::{
    check_logderiv_ode, conjugate_circle_to_line, flow_positions, integrate_flow,
    smoothness_probe, TimeDependentField,
};
use crate::functions::{
    angle_to_line_point, bmo_norm_line, builtin_circle, builtin_line_on, circle_cross_validation,
    h12_circle, h12_line, jn_exp_moment, line_point_to_angle, CircleFunction, LineFunction,
};
use crate::manifest::CheckRow;
use crate::mollifier::{convolve_scaled, derive_alpha_beta, make_phi, make_psi};
use crate::numerics::{geomspace, linspace, log_log_slope, rel_diff};
use crate::reich::{
    a3_energy, boundary_recovery_a, boundary_recovery_h, cayley_transfer_check, check_8_10,
    check_8_8, dirichlet_equiv, qd_energy, reich_h, reproducing_check, tangential_family_trace,
    BoundaryFunction,
};
use crate::semmes::{beltrami, fubini_check, gamma_u, rho_extension, wirtinger, wp_energy, HalfPlaneGrid, WirtingerMethod};
use crate::wpmap::{d_psi, d_psi_inv, interpolation_family, psi, pullback_probe, translations, SobolevClass};

pub const SUITES: [&str; 6] = ["functions", "mollifier", "semmes", "flow", "wpmap", "reich"];

pub fn run_suite(name: &str, cfg: &Config) -> Result<Vec<CheckRow>> {
    match name {
        "functions" => functions_suite(cfg),
        "mollifier" => mollifier_suite(cfg),
        "semmes" => semmes_suite(cfg),
        "flow" => flow_suite(cfg),
        "wpmap" => wpmap_suite(cfg),
        "reich" => reich_suite(cfg),
        other => Err(Error::invalid(format!("unknown suite {other:?}"))),
    }
}

pub fn run_all(cfg: &Config) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for s in SUITES {
        rows.extend(run_suite(s, cfg)?);
    }
    Ok(rows)
}

fn band_row(suite: &str, check: &str, input: &str, value: f64, center: f64, halfband: f64) -> CheckRow {
    CheckRow::new(suite, check, input, value, (value - center).abs(), halfband)
}

fn bound_row(suite: &str, check: &str, input: &str, value: f64, tol: f64) -> CheckRow {
    CheckRow::new(suite, check, input, value, value, tol)
}

fn line_builtin(cfg: &Config, name: &str, params: &[(&str, f64)]) -> Result<LineFunction> {
    let map: BTreeMap<String, f64> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    builtin_line_on(name, &map, cfg.line.extent, cfg.line.samples)
}

fn gauss(cfg: &Config, amp: f64) -> Result<LineFunction> {
    line_builtin(cfg, "gauss_bump", &[("amp", amp)])
}

// ---------------------------------------------------------------- functions

fn functions_suite(cfg: &Config) -> Result<Vec<CheckRow>> {
    let t = &cfg.tolerances;
    let mut rows = Vec::new();

    // Fourier-side value for cos θ and the quadrature cross-validation
    let m = 1024;
    let cos: Vec<f64> = (0..m).map(|j| (std::f64::consts::TAU * j as f64 / m as f64).cos()).collect();
    let cosf = CircleFunction::from_real_samples(cos, 8)?;
    let v = h12_circle(&cosf)?.value;
    rows.push(CheckRow::new("functions", "h12_circle_cos_value", "cos theta, M=1024", v, (v - 0.5).abs(), 1e-9));
    rows.push(bound_row("functions", "h12_circle_cross", "cos theta, M=1024", circle_cross_validation(&cosf)?, t.circle_cross_rel));
    let mixed: Vec<f64> = (0..m)
        .map(|j| {
            let th = std::f64::consts::TAU * j as f64 / m as f64;
            th.cos() + (2.0 * th).sin()
        })
        .collect();
    let mixedf = CircleFunction::from_real_samples(mixed, 8)?;
    rows.push(bound_row("functions", "h12_circle_cross_mixed", "cos+sin2, M=1024", circle_cross_validation(&mixedf)?, t.circle_cross_rel));

    // dilation invariance of the line seminorm; the truncation window
    // dilates with the function (a fixed window only probes the 1/S tail
    // of the double integral, not the seminorm)
    let base = gauss(cfg, 1.0)?;
    let v0 = h12_line(&base, cfg.line.diag_cutoff_steps * base.step())?.value;
    for lam in [0.5, 2.0] {
        let scaled = LineFunction::from_fn(cfg.line.extent / lam, cfg.line.samples, -4.0, "gaussian", |x| {
            (-(lam * x) * (lam * x)).exp()
        })?;
        let v1 = h12_line(&scaled, cfg.line.diag_cutoff_steps * scaled.step())?.value;
        rows.push(bound_row(
            "functions",
            "h12_line_dilation",
            &format!("gauss_bump scale {lam}, window scaled with it"),
            rel_diff(v0, v1),
            t.dilation_rel,
        ));
    }

    // exact homogeneity of the dyadic BMO scan
    let tri = line_builtin(cfg, "triangle_bump", &[])?;
    let a = bmo_norm_line(&tri, cfg.bmo.max_depth)?.value;
    let b = bmo_norm_line(&tri.map_values(|v| -3.5 * v)?, cfg.bmo.max_depth)?.value;
    rows.push(bound_row("functions", "bmo_homogeneity", "triangle_bump x -3.5", (b - 3.5 * a).abs() / (3.5 * a), 1e-12));

    // scan grows with depth
    let g = gauss(cfg, 1.0)?;
    let mut worst_drop = 0.0f64;
    let mut prev = 0.0f64;
    for depth in 1..=cfg.bmo.max_depth {
        let v = bmo_norm_line(&g, depth)?.value;
        worst_drop = worst_drop.max(prev - v);
        prev = v;
    }
    rows.push(bound_row("functions", "bmo_depth_monotone", "gauss_bump", worst_drop, 1e-15));

    // exponential moment scales linearly in ε for small data
    let v = line_builtin(cfg, "sine_window", &[])?;
    let eps = [0.0125, 0.025, 0.05, 0.1];
    let mut ratios = Vec::new();
    for &e in &eps {
        let ue = v.map_values(|w| e * w)?;
        ratios.push(jn_exp_moment(&ue, (-2.0, 2.0))? / e);
    }
    let spread = ratios.iter().cloned().fold(f64::MIN, f64::max) / ratios.iter().cloned().fold(f64::MAX, f64::min) - 1.0;
    rows.push(CheckRow::new(
        "functions",
        "jn_exp_linear",
        &format!("eps sweep, C={:.4}", ratios.iter().cloned().fold(f64::MIN, f64::max)),
        ratios[ratios.len() - 1],
        spread,
        0.25,
    ));

    Ok(rows)
}

// ---------------------------------------------------------------- mollifier

fn mollifier_suite(cfg: &Config) -> Result<Vec<CheckRow>> {
    let t = &cfg.tolerances;
    let mut rows = Vec::new();
    let phi = make_phi();
    let psi_k = make_psi();
    let mp = phi.moments();
    rows.push(bound_row("mollifier", "phi_moments", "unit mass, zero first moment", (mp[0].re - 1.0).abs().max(mp[1].norm()), 1e-8));
    let ms = psi_k.moments();
    rows.push(bound_row("mollifier", "psi_moments", "zero mass, unit first moment", ms[0].norm().max((ms[1].re - 1.0).abs()), 1e-8));
    let (alpha, beta) = derive_alpha_beta(&phi, &psi_k)?;
    rows.push(bound_row(
        "mollifier",
        "alpha_beta_moments",
        "int alpha = 0, int beta = 1",
        alpha.moments()[0].norm().max((beta.moments()[0] - Complex64::new(1.0, 0.0)).norm()),
        1e-8,
    ));

    // even unit-mass kernel approximates the identity at second order
    let f = gauss(cfg, 1.0)?;
    let x = 0.3;
    let exact = f.eval(x)?;
    let ys = [0.4, 0.2, 0.1];
    let errs: Vec<f64> = ys
        .iter()
        .map(|&y| Ok::<f64, Error>((convolve_scaled(&phi, y, &f, x)?.re - exact).abs()))
        .collect::<Result<_>>()?;
    rows.push(band_row("mollifier", "approx_identity_order", "gauss_bump at x=0.3", log_log_slope(&ys, &errs), 2.0, 0.3));

    // smoothing comparability |φ_y∗e^u| ≍ e^{φ_y∗u} for small BMO data
    let g1 = gauss(cfg, 1.0)?;
    let bmo_g = bmo_norm_line(&g1, cfg.bmo.max_depth)?.value;
    let eps = 0.0999 / bmo_g;
    let u = g1.map_values(|v| eps * v)?;
    let eu = u.map_values(f64::exp)?;
    let mut c_ratio = 1.0f64;
    for &y in geomspace(2f64.powi(-5), 2.0, 32).iter() {
        for &x in linspace(-4.0, 4.0, 64).iter() {
            let num = convolve_scaled(&phi, y, &eu, x)?.re;
            let den = convolve_scaled(&phi, y, &u, x)?.re.exp();
            let r = num / den;
            c_ratio = c_ratio.max(r).max(1.0 / r);
        }
    }
    rows.push(bound_row(
        "mollifier",
        "lemma31_comparability",
        &format!("u = {eps:.4}*gauss_bump, bmo = {:.4}, 64x32 grid", eps * bmo_g),
        c_ratio,
        t.lemma31_ratio,
    ));

    // |φ_y∗u - u_I| ≤ C ‖u‖_BMO over the same grid
    let mut c38 = 0.0f64;
    for &y in geomspace(2f64.powi(-5), 2.0, 32).iter() {
        for &x in linspace(-4.0, 4.0, 64).iter() {
            let smoothed = convolve_scaled(&phi, y, &u, x)?.re;
            let i0 = ((x - y - u.x0()) / u.step()).round() as usize;
            let i1 = ((x + y - u.x0()) / u.step()).round() as usize;
            let slice = &u.values()[i0..=i1.max(i0 + 1)];
            let mean = crate::numerics::quadrature::trapezoid_uniform(u.step(), slice)
                / (u.step() * (slice.len() - 1) as f64);
            c38 = c38.max((smoothed - mean).abs() / (eps * bmo_g));
        }
    }
    rows.push(bound_row("mollifier", "mean_bound", "smoothed vs interval mean", c38, t.mean_bound_c));

    Ok(rows)
}

// ------------------------------------------------------------------- semmes

fn semmes_suite(cfg: &Config) -> Result<Vec<CheckRow>> {
    let t = &cfg.tolerances;
    let grid = cfg.grid.build()?;
    let mut rows = Vec::new();

    // extension of u = 0 is the identity
    let zero = line_builtin(cfg, "zero", &[])?;
    let rho0 = rho_extension(&zero, &grid)?;
    let mut worst = 0.0f64;
    for iy in 0..grid.ny() {
        for ix in 0..grid.nx() {
            let z = Complex64::new(grid.xs()[ix], grid.ys()[iy]);
            worst = worst.max((rho0.at(ix, iy) - z).norm());
        }
    }
    rows.push(bound_row("semmes", "rho_identity_at_zero", &grid.describe(), worst, t.rho_identity));

    // kernel-vs-finite-difference Wirtinger gate
    let u = gauss(cfg, 0.1)?;
    let (dbar_k, d_k) = wirtinger(&u, &grid, WirtingerMethod::Kernels)?;
    let (dbar_f, d_f) = wirtinger(&u, &grid, WirtingerMethod::FiniteDifference)?;
    let mut sup = 0.0f64;
    for iy in 1..grid.ny() - 1 {
        for ix in 1..grid.nx() - 1 {
            sup = sup.max((dbar_k.at(ix, iy) - dbar_f.at(ix, iy)).norm());
            sup = sup.max((d_k.at(ix, iy) - d_f.at(ix, iy)).norm());
        }
    }
    let h = grid.x_step();
    let gate = t.wirtinger_abs_floor.max(t.wirtinger_h2_coeff * h * h);
    rows.push(bound_row("semmes", "wirtinger_gate", "u = 0.1*gauss_bump, interior nodes", sup, gate));

    // energy scaling ~ ε² with sup|μ| < 1 and a linear sup|μ| sweep
    let eps = [0.025, 0.05, 0.1, 0.2];
    let mut energies = Vec::new();
    let mut sups = Vec::new();
    for &e in &eps {
        let ue = gauss(cfg, e)?;
        let mu = beltrami(&ue, &grid)?;
        let rep = wp_energy(&mu, &grid)?;
        energies.push(rep.value);
        sups.push(rep.sup_mu);
    }
    let slope = log_log_slope(&eps, &energies);
    rows.push(band_row("semmes", "wp_energy_scaling", "eps in {0.025,0.05,0.1,0.2}", slope, 2.0, t.energy_exponent_halfband));
    rows.push(bound_row("semmes", "mu_quasiconformal", "sup|mu| over the sweep", sups.iter().cloned().fold(0.0, f64::max), 1.0 - 1e-9));
    let lin = (sups[3] / eps[3]) / (sups[1] / eps[1]) - 1.0;
    rows.push(CheckRow::new("semmes", "mu_sup_linear", "sup|mu|/eps stability", sups[3] / eps[3], lin.abs(), 0.2));

    // pointwise bound |μ|² ≤ C (1/y)∫|u(x+t)-u(x)|²dt, stable in ε
    let mut cs = Vec::new();
    for &e in &[0.05, 0.1] {
        let ue = gauss(cfg, e)?;
        let mu = beltrami(&ue, &grid)?;
        let mut c = 0.0f64;
        for iy in (0..grid.ny()).step_by(8) {
            let y = grid.ys()[iy];
            for ix in (0..grid.nx()).step_by(8) {
                let x = grid.xs()[ix];
                let ts = linspace(-y, y, 65);
                let vals: Vec<f64> = ts
                    .iter()
                    .map(|&s| {
                        let d = ue.eval_unchecked(x + s) - ue.eval_unchecked(x);
                        d * d
                    })
                    .collect();
                let den = crate::numerics::quadrature::trapezoid_uniform(ts[1] - ts[0], &vals) / y;
                if den > 1e-18 {
                    c = c.max(mu.at(ix, iy).norm_sqr() / den);
                }
            }
        }
        cs.push(c);
    }
    rows.push(CheckRow::new("semmes", "pointwise_bound", &format!("C = {:.3} / {:.3}", cs[0], cs[1]), cs[1], rel_diff(cs[0], cs[1]), 0.5));

    // the exact Fubini step, two windowed test functions
    let fub_grid = HalfPlaneGrid::new(cfg.grid.x_extent, 2f64.powi(-9), 64.0, 257, 192)?;
    let mut ratio_family = Vec::new();
    for (name, f) in [
        ("gauss_bump", gauss(cfg, 1.0)?),
        ("sine_window", line_builtin(cfg, "sine_window", &[])?),
        ("gauss_bump w=2", line_builtin(cfg, "gauss_bump", &[("width", 2.0)])?),
    ] {
        let rep = fubini_check(&f, &fub_grid)?;
        if name != "gauss_bump w=2" {
            rows.push(bound_row("semmes", "fubini_identity", name, rel_diff(rep.lhs, rep.rhs), t.fubini_rel));
        }
        let cut = cfg.line.diag_cutoff_steps * f.step();
        ratio_family.push(rep.rhs / h12_line(&f, cut)?.value);
    }
    let spread = ratio_family.iter().cloned().fold(f64::MIN, f64::max) / ratio_family.iter().cloned().fold(f64::MAX, f64::min) - 1.0;
    rows.push(CheckRow::new("semmes", "fubini_ratio_stability", &format!("rhs/h12 = {:.3}", ratio_family[0]), ratio_family[0], spread, 0.1));

    // truncation tail: enlarging Y adds less and less energy
    let u_t = gauss(cfg, 0.1)?;
    let mut es = Vec::new();
    for (ymax, ny) in [(4.0, 128), (8.0, 146), (16.0, 164)] {
        let g = HalfPlaneGrid::new(cfg.grid.x_extent, cfg.grid.y_min, ymax, cfg.grid.nx, ny)?;
        let mu = beltrami(&u_t, &g)?;
        es.push(wp_energy(&mu, &g)?.value);
    }
    let viol = (es[0] - es[1]).max(es[1] - es[2]).max((es[2] - es[1]) - (es[1] - es[0]));
    rows.push(bound_row("semmes", "energy_tail_vanishes", "Y in {4,8,16}", viol.max(0.0), 1e-10));

    Ok(rows)
}

// --------------------------------------------------------------------- flow

fn logistic_exact(t: f64, x: f64) -> f64 {
    x * t.exp() / (1.0 + x * (t.exp() - 1.0))
}

fn flow_suite(cfg: &Config) -> Result<Vec<CheckRow>> {
    let t = &cfg.tolerances;
    let mut rows = Vec::new();
    let logistic = line_builtin(cfg, "logistic", &[])?;

    // closed-form reproduction at t = 1
    let field = TimeDependentField::autonomous_line(logistic.clone(), 1.0, cfg.flow.knots)?;
    let particles = linspace(-0.125, 1.125, cfg.flow.particles);
    let curve = integrate_flow(&field, cfg.flow.steps, &particles)?;
    let snap = curve.final_snapshot();
    let mut worst = 0.0f64;
    for (x, y) in snap.xs().iter().zip(snap.ys()) {
        worst = worst.max((y - logistic_exact(1.0, *x)).abs());
    }
    rows.push(bound_row("flow", "logistic_closed_form", &format!("{} steps", cfg.flow.steps), worst, t.flow_closed_form));

    // fourth-order self-convergence under step halving
    let err_at = |steps: usize| -> Result<f64> {
        let ends = flow_positions(&field, steps, 0.0, 1.0, &particles)?;
        Ok(ends
            .iter()
            .zip(&particles)
            .map(|(y, x)| (y - logistic_exact(1.0, *x)).abs())
            .fold(0.0, f64::max))
    };
    let factor = err_at(8)? / err_at(16)?;
    rows.push(band_row("flow", "rk4_self_convergence", "8 vs 16 steps", factor, 0.5 * (t.selfconv_lo + t.selfconv_hi), 0.5 * (t.selfconv_hi - t.selfconv_lo)));

    // d/dt log h' = ω'(t, h) on the line
    let r = check_logderiv_ode(&curve, &field)?;
    rows.push(bound_row("flow", "logderiv_identity_line", "logistic field", r.sup, t.logderiv_line));

    // normalization: the flow fixes 0 and 1
    let i0 = particles.iter().position(|&x| x.abs() < 1e-12).unwrap();
    let i1 = particles.iter().position(|&x| (x - 1.0).abs() < 1e-12).unwrap();
    let mut fix = 0.0f64;
    for s in curve.snapshots() {
        fix = fix.max(s.ys()[i0].abs()).max((s.ys()[i1] - 1.0).abs());
    }
    rows.push(bound_row("flow", "fixes_zero_and_one", "logistic flow, all knots", fix, 1e-9));

    // pivot identity h(t,·) = Ψ(log ∂x h(t,·)) at 5 knots
    let field5 = TimeDependentField::autonomous_line(logistic.clone(), 1.0, 5)?;
    let curve5 = integrate_flow(&field5, 1000, &particles)?;
    let mut pivot = 0.0f64;
    for snap in curve5.snapshots() {
        let logs = snap.log_derivative();
        let lf = LineFunction::from_values(snap.xs().to_vec(), logs, 0.0, "log-derivative")?;
        let cls = SobolevClass::new(lf)?;
        let back = psi(&cls)?;
        for (a, b) in back.ys().iter().zip(snap.ys()) {
            pivot = pivot.max((a - b).abs());
        }
    }
    rows.push(bound_row("flow", "pivot_identity", "h = Psi(log h'), 5 knots", pivot, t.pivot_sup));

    // circle leg through the Cayley conjugation
    let lam = builtin_circle("sine_normalized", &BTreeMap::new(), 512)?;
    let cfield = TimeDependentField::autonomous_circle(lam, 0.2, 81, true)?;
    let lfield = conjugate_circle_to_line(&cfield, cfg.line.extent, cfg.line.samples)?;
    let lparticles = linspace(-2.0, 2.0, 513);
    let lcurve = integrate_flow(&lfield, 400, &lparticles)?;
    let r = check_logderiv_ode(&lcurve, &lfield)?;
    rows.push(bound_row("flow", "logderiv_identity_circle", "sine_normalized via conjugation", r.sup, t.logderiv_circle));

    // commutation: conjugate-then-flow equals flow-then-conjugate
    let m = 512;
    let angles: Vec<f64> = (0..m).map(|j| std::f64::consts::TAU * j as f64 / m as f64).collect();
    let ccurve = integrate_flow(&cfield, 400, &angles)?;
    let gsnap = ccurve.final_snapshot();
    let hsnap = lcurve.final_snapshot();
    let mut comm = 0.0f64;
    for (i, &x) in lparticles.iter().enumerate() {
        let theta = line_point_to_angle(x);
        let gval = gsnap.eval(theta)?;
        let expected = angle_to_line_point(gval);
        comm = comm.max((hsnap.ys()[i] - expected).abs());
    }
    rows.push(bound_row("flow", "conjugation_commutes", "circle vs line flow of the same field", comm, t.flow_commutation));

    // direct circle form of the identity for λ = sin θ
    let lam_sin = builtin_circle("sine", &BTreeMap::new(), 512)?;
    let sfield = TimeDependentField::autonomous_circle(lam_sin, 1.0, 101, false)?;
    let scurve = integrate_flow(&sfield, 1000, &angles)?;
    let r = check_logderiv_ode(&scurve, &sfield)?;
    rows.push(bound_row("flow", "logderiv_identity_circle_direct", "lambda = sin theta", r.sup, t.logderiv_circle));

    // lifted increment of circle snapshots is exactly 2π
    let mut inc = 0.0f64;
    for s in scurve.snapshots() {
        inc = inc.max(((s.eval(angles[3] + std::f64::consts::TAU)? - s.eval(angles[3])?) - std::f64::consts::TAU).abs());
    }
    rows.push(bound_row("flow", "circle_lift_increment", "g(θ+2π) = g(θ)+2π", inc, 1e-10));

    // semigroup property of the autonomous flow
    let whole = flow_positions(&field, 997, 0.0, 1.0, &particles)?;
    let mid = flow_positions(&field, 550, 0.0, 0.55, &particles)?;
    let end = flow_positions(&field, 450, 0.55, 1.0, &mid)?;
    let sg = whole
        .iter()
        .zip(&end)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    rows.push(bound_row("flow", "semigroup", "split at t = 0.55", sg, 1e-9));

    // differentiability proxy: difference quotients converge
    let field33 = TimeDependentField::autonomous_line(logistic, 1.0, 33)?;
    let curve33 = integrate_flow(&field33, 660, &particles)?;
    let probe = smoothness_probe(&curve33)?;
    let ratio_dev = probe
        .ratios
        .iter()
        .map(|r| (r - 1.0).abs())
        .fold(0.0, f64::max);
    rows.push(CheckRow::new(
        "flow",
        "smoothness_probe",
        &format!("quotients {:?}", probe.quotients.iter().map(|q| (q * 1e4).round() / 1e4).collect::<Vec<_>>()),
        probe.quotients[probe.quotients.len() - 1],
        ratio_dev,
        0.1,
    ));

    Ok(rows)
}

// -------------------------------------------------------------------- wpmap

fn wpmap_suite(cfg: &Config) -> Result<Vec<CheckRow>> {
    let t = &cfg.tolerances;
    let mut rows = Vec::new();
    let u = SobolevClass::new(gauss(cfg, 0.3)?)?;
    let v = SobolevClass::new(line_builtin(cfg, "sine_window", &[])?)?;

    // Ψ fixes 0 and 1 and is strictly increasing
    let h = psi(&u)?;
    let fix = h.eval(0.0)?.abs().max((h.eval(1.0)? - 1.0).abs());
    rows.push(bound_row("wpmap", "psi_normalization", "u = 0.3*gauss_bump", fix, 1e-10));

    // quotient invariance directly on the primitive (constants cancel)
    let raw = gauss(cfg, 0.3)?;
    let shifted = raw.map_values(|w| w + 5.0)?;
    let h_raw = gamma_u(&raw)?;
    let h_shift = gamma_u(&shifted)?;
    let qdiff = h_raw
        .ys()
        .iter()
        .zip(h_shift.ys())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    rows.push(bound_row("wpmap", "quotient_invariance", "u vs u + 5", qdiff, 1e-10));

    // linearity of the differential
    let w1 = d_psi(&u, &v)?;
    let w2 = d_psi(&u, &u)?;
    let combo = SobolevClass::new(LineFunction::from_values(
        u.rep().xs().to_vec(),
        u.rep()
            .values()
            .iter()
            .zip(v.rep().values())
            .map(|(a, b)| 2.0 * b - 0.5 * a)
            .collect(),
        0.0,
        "combo",
    )?)?;
    let wc = d_psi(&u, &combo)?;
    let lin = wc
        .rep()
        .values()
        .iter()
        .zip(w1.rep().values().iter().zip(w2.rep().values()))
        .map(|(c, (a, b))| (c - (2.0 * a - 0.5 * b)).abs())
        .fold(0.0, f64::max);
    rows.push(bound_row("wpmap", "dpsi_linearity", "2v - u/2", lin, 1e-10));

    // Richardson exponent of the first-order remainder
    let remainder = |e: f64| -> Result<f64> {
        let ue = SobolevClass::new(LineFunction::from_values(
            u.rep().xs().to_vec(),
            u.rep().values().iter().zip(v.rep().values()).map(|(a, b)| a + e * b).collect(),
            0.0,
            "perturbed",
        )?)?;
        let he = psi(&ue)?;
        let h0 = psi(&u)?;
        let dw = d_psi(&u, &v)?;
        Ok(he
            .ys()
            .iter()
            .zip(h0.ys().iter().zip(dw.rep().values()))
            .map(|(a, (b, c))| (a - b - e * c).abs())
            .fold(0.0, f64::max))
    };
    let exponent = (remainder(0.02)? / remainder(0.01)?).log2();
    rows.push(band_row("wpmap", "dpsi_richardson", "eps 0.02 vs 0.01", exponent, 2.0, t.dpsi_exponent_halfband));

    // both round trips of the differential
    let w = d_psi(&u, &v)?;
    let v_back = d_psi_inv(&u, &w)?;
    let reverse = v.distance_sup(&v_back);
    let w_back = d_psi(&u, &v_back)?;
    let forward = w
        .rep()
        .values()
        .iter()
        .zip(w_back.rep().values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    rows.push(bound_row("wpmap", "dpsi_round_trips", "forward and reverse", forward.max(reverse), t.dpsi_roundtrip));

    // intertwining R∘Ψ = Ψ∘L
    let u0 = SobolevClass::new(gauss(cfg, 0.5)?)?;
    let h0 = psi(&u0)?;
    let self_res = translations(&h0, &u0, (-4.0, 4.0))?;
    rows.push(bound_row("wpmap", "intertwining_self", "u = u0 collapses to the identity", self_res.residual_sup, t.dpsi_roundtrip.max(1e-6)));
    let gen_res = translations(&h0, &SobolevClass::new(line_builtin(cfg, "sine_window", &[("amp", 0.4)])?)?, (-4.0, 4.0))?;
    rows.push(bound_row("wpmap", "intertwining_generic", "u0 = 0.5*gauss, u = 0.4*sine_window", gen_res.residual_sup, t.intertwine));

    // interpolation family: exact log-linearity and seminorm scaling
    let fam_t = 0.37;
    let ht = interpolation_family(&h0, fam_t)?;
    let log_lin = ht
        .dys()
        .iter()
        .zip(h0.dys())
        .map(|(d, d1)| (d.ln() - fam_t * d1.ln()).abs())
        .fold(0.0, f64::max);
    rows.push(bound_row("wpmap", "family_log_linearity", "t = 0.37", log_lin, 1e-12));
    let lf = |m: &crate::functions::IncreasingMap| -> Result<f64> {
        let logs = m.log_derivative();
        let f = LineFunction::from_values(m.xs().to_vec(), logs, 0.0, "log-derivative")?;
        Ok(h12_line(&f, f.step())?.value)
    };
    let s_t = lf(&ht)?;
    let s_1 = lf(&h0)?;
    rows.push(bound_row("wpmap", "family_seminorm_scaling", "squared seminorm ~ t^2", rel_diff(s_t, fam_t * fam_t * s_1), 1e-10));

    // pull-back ratio probe
    let family = vec![
        SobolevClass::new(gauss(cfg, 1.0)?)?,
        SobolevClass::new(line_builtin(cfg, "sine_window", &[])?)?,
    ];
    let xs = linspace(-cfg.line.extent, cfg.line.extent, cfg.line.samples);
    let id = crate::functions::IncreasingMap::identity_line(xs.clone())?;
    let rid = pullback_probe(&id, &family)?;
    rows.push(bound_row("wpmap", "pullback_identity", "ratios = 1", rid.ratios.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max), 1e-10));
    let ys_aff: Vec<f64> = xs.iter().map(|x| 2.0 * x + 0.5).collect();
    let aff = crate::functions::IncreasingMap::new_line(xs, ys_aff, vec![2.0; cfg.line.samples])?;
    let raff = pullback_probe(&aff, &family)?;
    rows.push(bound_row("wpmap", "pullback_affine", "x -> 2x + 0.5", raff.ratios.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max), 2e-2));
    let hmap = psi(&SobolevClass::new(gauss(cfg, 1.0)?)?)?;
    let probe1 = pullback_probe(&hmap, &family)?;
    let mut family2 = family;
    family2.push(SobolevClass::new(line_builtin(cfg, "gauss_bump", &[("width", 2.0)])?)?);
    family2.push(SobolevClass::new(line_builtin(cfg, "gauss_bump", &[("center", 1.0)])?)?);
    let probe2 = pullback_probe(&hmap, &family2)?;
    rows.push(CheckRow::new(
        "wpmap",
        "pullback_probe_stability",
        &format!("max ratio {:.4} -> {:.4}", probe1.max_ratio, probe2.max_ratio),
        probe2.max_ratio,
        (probe2.max_ratio / probe1.max_ratio - 1.0).abs(),
        0.1,
    ));

    Ok(rows)
}

// -------------------------------------------------------------------- reich

fn reich_suite(cfg: &Config) -> Result<Vec<CheckRow>> {
    let t = &cfg.tolerances;
    let grid = cfg.grid.build()?;
    let mut rows = Vec::new();

    // residue-forced exact values
    let z = Complex64::new(0.9, 0.35);
    let cst = BoundaryFunction::new(line_builtin(cfg, "const", &[("value", 2.0)])?)?;
    let rmp = BoundaryFunction::new(line_builtin(cfg, "ramp", &[])?)?;
    let exact = (crate::reich::reich_h_point(&cst, z)? - Complex64::new(2.0, 0.0))
        .norm()
        .max((crate::reich::reich_h_point(&rmp, z)? - z).norm());
    rows.push(bound_row("reich", "h_exact_const_identity", "H(c) = c, H(t) = z", exact, 1e-11));

    // coupling identity, exact-zero and smooth cases
    for (name, b) in [("const", &cst), ("ramp", &rmp)] {
        let r = check_8_8(b, &grid)?;
        rows.push(bound_row("reich", "dbar_identity_exact_zero", name, r.sup, 1e-11));
    }
    let gb = BoundaryFunction::new(gauss(cfg, 1.0)?)?;
    let r88 = check_8_8(&gb, &grid)?;
    let h = grid.x_step();
    let gate = t.reich88_abs_floor.max(t.reich88_h2_coeff * h * h);
    rows.push(bound_row("reich", "dbar_identity_smooth", "gauss_bump, interior nodes", r88.sup, gate));

    // Dirichlet-type comparability against the closed forms
    let wide = HalfPlaneGrid::new(32.0, 2f64.powi(-9), 64.0, 512, 320)?;
    let (lhs, rhs) = dirichlet_equiv(2, &wide)?;
    rows.push(bound_row("reich", "dirichlet_lhs", "psi_2: pi/4", rel_diff(lhs, std::f64::consts::PI / 4.0), t.dirichlet_rel));
    rows.push(bound_row("reich", "dirichlet_rhs", "psi_2: pi/8", rel_diff(rhs, std::f64::consts::PI / 8.0), t.dirichlet_rel));
    for k in [2u32, 3, 4] {
        let (l, r) = dirichlet_equiv(k, &wide)?;
        rows.push(bound_row("reich", "dirichlet_comparability", &format!("k = {k}"), (l / r).ln().abs(), 10f64.ln()));
    }

    // reproducing formula at z = 2i
    let (direct, repro) = reproducing_check(2, Complex64::new(0.0, 2.0), &wide)?;
    rows.push(bound_row("reich", "reproducing_formula", "psi_2 at z = 2i", (direct - repro).norm() / direct.norm(), t.reproducing_rel));

    // energy chain over the smooth family
    for (name, f) in [
        ("gauss_bump", gauss(cfg, 1.0)?),
        ("sine_window", line_builtin(cfg, "sine_window", &[])?),
        ("gauss_bump w=2 a=0.5", line_builtin(cfg, "gauss_bump", &[("width", 2.0), ("amp", 0.5)])?),
        ("inverse_quadratic", line_builtin(cfg, "inverse_quadratic", &[])?),
    ] {
        let b = BoundaryFunction::new(f)?;
        let field = reich_h(&b, &grid)?;
        let qd = qd_energy(&field, &grid);
        let a3 = a3_energy(&b, &grid)?;
        rows.push(bound_row("reich", "energy_chain", name, a3 / qd, t.chain_factor));
    }

    // two-path evaluation of the conjugated kernel identity at z = i
    let field = reich_h(&gb, &grid)?;
    let (l810, r810) = check_8_10(&gb, &field, &grid, Complex64::new(0.0, 1.0))?;
    rows.push(bound_row("reich", "kernel_identity_810", "gauss_bump at z = i", (l810 - r810).norm() / l810.norm(), 0.02));

    // boundary recovery rates
    let ra = boundary_recovery_a(&gb, &[0.2, 0.1, 0.05], 3.0)?;
    rows.push(band_row("reich", "recovery_rate_a", "Re A at y = 0.2/0.1/0.05", log_log_slope(&[0.2, 0.1, 0.05], &ra), 1.0, 0.3));
    let rh = boundary_recovery_h(&gb, &[0.1, 0.05, 0.025], 3.0)?;
    rows.push(band_row("reich", "recovery_rate_h", "H at y = 0.1/0.05/0.025", log_log_slope(&[0.1, 0.05, 0.025], &rh), 1.0, 0.3));

    // Cayley transport of the tangential family
    let g = tangential_family_trace(0.8, 256)?;
    let tgrid = HalfPlaneGrid::new(4.0, 2f64.powi(-6), 1.0, 128, 64)?;
    let tr = cayley_transfer_check(&g, &tgrid)?;
    rows.push(bound_row("reich", "cayley_transfer", "tangential family, amp 0.8", tr.residual_sup, t.transfer_residual));
    rows.push(bound_row("reich", "cayley_transfer_modulus", "|conj(γ')/γ'| = 1", tr.modulus_defect, 1e-12));

    Ok(rows)
}
