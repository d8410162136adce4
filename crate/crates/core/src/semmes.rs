//! The mollifier extension ρ_u = φ_y∗γ_u - iψ_y∗γ_u on a truncated upper
//! half plane, its Wirtinger derivatives (by kernel convolution and by
//! finite differences), the Beltrami field μ = ∂̄ρ/∂ρ, the hyperbolic
//! energy of μ, and the exact Fubini identity behind the energy bound.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{IncreasingMap, LineFunction};
use crate::mollifier::{convolve_scaled, derive_alpha_beta, make_phi, make_psi, Mollifier};
use crate::numerics::calculus::{cumulative_integral_uniform, derivative_nonuniform, derivative_uniform};
use crate::numerics::quadrature::{trapezoid_uniform, trapezoid_weights};
use crate::numerics::{compensated_sum, geomspace, linspace};

/// Guard below which |∂ρ| counts as degenerate (outside the small-norm
/// regime); clamping instead would fake quasiconformality.
const DERIVATIVE_GUARD: f64 = 1e-9;

fn kernels() -> &'static (Mollifier, Mollifier, Mollifier, Mollifier) {
    static K: OnceLock<(Mollifier, Mollifier, Mollifier, Mollifier)> = OnceLock::new();
    K.get_or_init(|| {
        let phi = make_phi();
        let psi = make_psi();
        let (alpha, beta) = derive_alpha_beta(&phi, &psi).expect("canonical kernels are well-formed");
        (phi, psi, alpha, beta)
    })
}

/// Truncated upper-half-plane quadrature grid: uniform x nodes, log-spaced
/// y nodes, trapezoid weights per direction.
#[derive(Debug, Clone)]
pub struct HalfPlaneGrid {
    xs: Vec<f64>,
    ys: Vec<f64>,
    wx: Vec<f64>,
    wy: Vec<f64>,
}

impl HalfPlaneGrid {
    pub fn new(x_extent: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(y_min > 0.0 && y_max > y_min && x_extent > 0.0) {
            return Err(Error::invalid("grid extents must satisfy 0 < y_min < y_max, x_extent > 0"));
        }
        if nx < 8 || ny < 8 {
            return Err(Error::invalid("grid needs at least 8 nodes per direction"));
        }
        let xs = linspace(-x_extent, x_extent, nx);
        let ys = geomspace(y_min, y_max, ny);
        let wx = trapezoid_weights(&xs);
        let wy = trapezoid_weights(&ys);
        Ok(Self { xs, ys, wx, wy })
    }

    /// Defaults: X = 8, y ∈ [2⁻⁷, 4], 256 × 128 nodes.
    pub fn default_grid() -> Self {
        Self::new(8.0, 2f64.powi(-7), 4.0, 256, 128).expect("default grid is valid")
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn ny(&self) -> usize {
        self.ys.len()
    }

    pub fn x_extent(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn y_min(&self) -> f64 {
        self.ys[0]
    }

    pub fn y_max(&self) -> f64 {
        self.ys[self.ys.len() - 1]
    }

    pub fn x_step(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    pub fn weight(&self, ix: usize, iy: usize) -> f64 {
        self.wx[ix] * self.wy[iy]
    }

    /// Total weight; equals the rectangle area up to rounding.
    pub fn weight_sum(&self) -> f64 {
        let sx = compensated_sum(self.wx.iter().copied());
        let sy = compensated_sum(self.wy.iter().copied());
        sx * sy
    }

    pub fn area(&self) -> f64 {
        2.0 * self.x_extent() * (self.y_max() - self.y_min())
    }

    pub fn describe(&self) -> String {
        format!(
            "x=[-{X},{X}]x{nx} y=[{ymin},{ymax}]x{ny} log",
            X = self.x_extent(),
            nx = self.nx(),
            ymin = self.y_min(),
            ymax = self.y_max(),
            ny = self.ny()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Rho,
    DBar,
    D,
    Mu,
    ReichH,
    ReichA3,
    DBarH,
}

/// Complex values on a [`HalfPlaneGrid`], row-major over y.
#[derive(Debug, Clone)]
pub struct ComplexGridField {
    kind: FieldKind,
    nx: usize,
    ny: usize,
    values: Vec<Complex64>,
}

impl ComplexGridField {
    pub fn new(kind: FieldKind, grid: &HalfPlaneGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.nx() * grid.ny() {
            return Err(Error::invalid("field length does not match grid"));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::invalid("non-finite field values"));
        }
        if kind == FieldKind::Mu {
            if let Some(bad) = values.iter().find(|v| v.norm() >= 1.0) {
                return Err(Error::Degenerate(format!(
                    "|mu| = {} >= 1: input outside the quasiconformal regime",
                    bad.norm()
                )));
            }
        }
        Ok(Self { kind, nx: grid.nx(), ny: grid.ny(), values })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn at(&self, ix: usize, iy: usize) -> Complex64 {
        self.values[iy * self.nx + ix]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// CSV rows x,y,re,im.
    pub fn write_csv<W: Write>(&self, grid: &HalfPlaneGrid, mut w: W) -> Result<()> {
        writeln!(w, "x,y,re,im")?;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let v = self.at(ix, iy);
                writeln!(w, "{},{},{:.17e},{:.17e}", grid.xs()[ix], grid.ys()[iy], v.re, v.im)?;
            }
        }
        Ok(())
    }

    /// Whitespace matrix of |values| (one y row per line), gnuplot-ready.
    pub fn write_matrix<W: Write>(&self, mut w: W) -> Result<()> {
        for iy in 0..self.ny {
            let row: Vec<String> = (0..self.nx).map(|ix| format!("{:.10e}", self.at(ix, iy).norm())).collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    /// (1/π) ∬ |μ|²/y² over the truncated grid
    pub value: f64,
    pub sup_mu: f64,
    pub grid: String,
    pub metadata: BTreeMap<String, String>,
}

/// The normalized primitive γ_u(x) = ∫₀ˣ e^u / ∫₀¹ e^u as an increasing map.
pub fn gamma_u(u: &LineFunction) -> Result<IncreasingMap> {
    if u.values().iter().any(|&v| v > 700.0) {
        return Err(Error::Overflow("e^u overflows f64".into()));
    }
    let expu: Vec<f64> = u.values().iter().map(|&v| v.exp()).collect();
    let prim = cumulative_integral_uniform(u.step(), &expu);
    let i0 = u.index_of(0.0)?;
    let i1 = u.index_of(1.0)?;
    let c1 = prim[i1] - prim[i0];
    if !(c1 > 0.0) {
        return Err(Error::invalid("normalizer ∫₀¹ e^u must be positive"));
    }
    let ys: Vec<f64> = prim.iter().map(|p| (p - prim[i0]) / c1).collect();
    let dys: Vec<f64> = expu.iter().map(|e| e / c1).collect();
    IncreasingMap::new_line(u.xs().to_vec(), ys, dys)
}

/// ∫₀¹ e^u by the same cubic-cell rule used for γ_u.
pub fn exp_normalizer(u: &LineFunction) -> Result<f64> {
    let expu: Vec<f64> = u.values().iter().map(|&v| v.exp()).collect();
    let prim = cumulative_integral_uniform(u.step(), &expu);
    Ok(prim[u.index_of(1.0)?] - prim[u.index_of(0.0)?])
}

fn require_support(u: &LineFunction, grid: &HalfPlaneGrid) -> Result<()> {
    let need = grid.x_extent() + grid.y_max();
    if need > u.extent() + 1e-12 {
        return Err(Error::OutOfDomain(format!(
            "grid needs boundary data on [-{need}, {need}] but the window is [{}, {}]",
            u.x0(),
            u.extent()
        )));
    }
    Ok(())
}

/// The extension ρ(x+iy) = φ_y∗γ_u(x) - iψ_y∗γ_u(x) at every grid node.
pub fn rho_extension(u: &LineFunction, grid: &HalfPlaneGrid) -> Result<ComplexGridField> {
    require_support(u, grid)?;
    let (phi, psi, _, _) = kernels();
    let gamma = gamma_u(u)?;
    let gamma_fn = LineFunction::from_values(gamma.xs().to_vec(), gamma.ys().to_vec(), 1.0, "primitive")?;
    let rows: Result<Vec<Vec<Complex64>>> = grid
        .ys()
        .par_iter()
        .map(|&y| {
            grid.xs()
                .iter()
                .map(|&x| {
                    let p = convolve_scaled(phi, y, &gamma_fn, x)?;
                    let q = convolve_scaled(psi, y, &gamma_fn, x)?;
                    Ok(p - Complex64::new(0.0, 1.0) * q)
                })
                .collect()
        })
        .collect();
    let values: Vec<Complex64> = rows?.into_iter().flatten().collect();
    ComplexGridField::new(FieldKind::Rho, grid, values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WirtingerMethod {
    /// α_y∗e^u / ∫₀¹e^u and β_y∗e^u / ∫₀¹e^u
    Kernels,
    /// centered differences of the sampled extension
    FiniteDifference,
}

/// Wirtinger derivatives (∂̄ρ, ∂ρ) of the extension.
pub fn wirtinger(u: &LineFunction, grid: &HalfPlaneGrid, method: WirtingerMethod) -> Result<(ComplexGridField, ComplexGridField)> {
    require_support(u, grid)?;
    match method {
        WirtingerMethod::Kernels => {
            let (_, _, alpha, beta) = kernels();
            let c1 = exp_normalizer(u)?;
            let expu = u.map_values(|v| v.exp())?;
            let rows: Result<Vec<Vec<(Complex64, Complex64)>>> = grid
                .ys()
                .par_iter()
                .map(|&y| {
                    grid.xs()
                        .iter()
                        .map(|&x| {
                            let a = convolve_scaled(alpha, y, &expu, x)? / c1;
                            let b = convolve_scaled(beta, y, &expu, x)? / c1;
                            Ok((a, b))
                        })
                        .collect()
                })
                .collect();
            let pairs: Vec<(Complex64, Complex64)> = rows?.into_iter().flatten().collect();
            let dbar = pairs.iter().map(|p| p.0).collect();
            let d = pairs.iter().map(|p| p.1).collect();
            Ok((
                ComplexGridField::new(FieldKind::DBar, grid, dbar)?,
                ComplexGridField::new(FieldKind::D, grid, d)?,
            ))
        }
        WirtingerMethod::FiniteDifference => {
            if grid.nx() < 5 || grid.ny() < 5 {
                return Err(Error::Resolution("finite differences need at least a 5x5 grid".into()));
            }
            let rho = rho_extension(u, grid)?;
            let (dbar, d) = wirtinger_of_field(&rho, grid);
            Ok((
                ComplexGridField::new(FieldKind::DBar, grid, dbar)?,
                ComplexGridField::new(FieldKind::D, grid, d)?,
            ))
        }
    }
}

/// Centered (one-sided at edges) Wirtinger derivatives of a sampled field.
pub fn wirtinger_of_field(f: &ComplexGridField, grid: &HalfPlaneGrid) -> (Vec<Complex64>, Vec<Complex64>) {
    let (nx, ny) = (grid.nx(), grid.ny());
    let hx = grid.x_step();
    let mut fx = vec![Complex64::default(); nx * ny];
    let mut fy = vec![Complex64::default(); nx * ny];
    for iy in 0..ny {
        let re: Vec<f64> = (0..nx).map(|ix| f.at(ix, iy).re).collect();
        let im: Vec<f64> = (0..nx).map(|ix| f.at(ix, iy).im).collect();
        let dre = derivative_uniform(hx, &re);
        let dim = derivative_uniform(hx, &im);
        for ix in 0..nx {
            fx[iy * nx + ix] = Complex64::new(dre[ix], dim[ix]);
        }
    }
    for ix in 0..nx {
        let re: Vec<f64> = (0..ny).map(|iy| f.at(ix, iy).re).collect();
        let im: Vec<f64> = (0..ny).map(|iy| f.at(ix, iy).im).collect();
        let dre = derivative_nonuniform(grid.ys(), &re);
        let dim = derivative_nonuniform(grid.ys(), &im);
        for iy in 0..ny {
            fy[iy * nx + ix] = Complex64::new(dre[iy], dim[iy]);
        }
    }
    let i = Complex64::new(0.0, 1.0);
    let dbar: Vec<Complex64> = fx.iter().zip(&fy).map(|(a, b)| 0.5 * (a + i * b)).collect();
    let d: Vec<Complex64> = fx.iter().zip(&fy).map(|(a, b)| 0.5 * (a - i * b)).collect();
    (dbar, d)
}

/// Beltrami field μ = ∂̄ρ / ∂ρ from the kernel-side Wirtinger derivatives.
pub fn beltrami(u: &LineFunction, grid: &HalfPlaneGrid) -> Result<ComplexGridField> {
    let (dbar, d) = wirtinger(u, grid, WirtingerMethod::Kernels)?;
    let mut values = Vec::with_capacity(dbar.values().len());
    for (a, b) in dbar.values().iter().zip(d.values()) {
        if b.norm() < DERIVATIVE_GUARD {
            return Err(Error::Degenerate(format!(
                "|∂ρ| = {} below guard {DERIVATIVE_GUARD}; u is outside the small-norm regime",
                b.norm()
            )));
        }
        values.push(a / b);
    }
    ComplexGridField::new(FieldKind::Mu, grid, values)
}

/// Weil-Petersson energy (1/π) ∬ |μ|²/y² over the truncated grid.
pub fn wp_energy(mu: &ComplexGridField, grid: &HalfPlaneGrid) -> Result<EnergyReport> {
    if mu.kind() != FieldKind::Mu {
        return Err(Error::invalid("wp_energy expects a mu-tagged field"));
    }
    let terms = (0..grid.ny()).flat_map(|iy| {
        (0..grid.nx()).map(move |ix| (ix, iy))
    });
    let value = compensated_sum(terms.map(|(ix, iy)| {
        let y = grid.ys()[iy];
        grid.weight(ix, iy) * mu.at(ix, iy).norm_sqr() / (y * y)
    })) / std::f64::consts::PI;
    let mut metadata = BTreeMap::new();
    metadata.insert("weight_sum".into(), format!("{:.12e}", grid.weight_sum()));
    metadata.insert("area".into(), format!("{:.12e}", grid.area()));
    Ok(EnergyReport { value, sup_mu: mu.sup_norm(), grid: grid.describe(), metadata })
}

/// Both sides of the exact Fubini step behind the energy bound:
///
///   lhs = ∬ y⁻³ ∫_{|t|<y} |u(x+t)-u(x)|² dt dx dy
///   rhs = ∬ |u(x+t)-u(x)|² / (2t²) dt dx
///
/// x runs over the grid's x nodes and |t| is capped by the boundary data
/// available beyond the x window, so both sides see the same truncation.
#[derive(Debug, Clone, Serialize)]
pub struct FubiniReport {
    pub lhs: f64,
    pub rhs: f64,
    pub t_cap: f64,
}

pub fn fubini_check(u: &LineFunction, grid: &HalfPlaneGrid) -> Result<FubiniReport> {
    let t_cap = u.extent() - grid.x_extent();
    if t_cap <= 0.0 {
        return Err(Error::OutOfDomain("x window must leave room for offsets".into()));
    }
    let h = u.step();
    let wxs = trapezoid_weights(grid.xs());

    // lhs rows over y, inner t integral by trapezoid at resolution ∝ t_cap
    let row_vals: Vec<f64> = grid
        .ys()
        .par_iter()
        .map(|&y| {
            let tc = y.min(t_cap);
            let mut n = 64usize;
            while (n as f64) < 4.0 * tc / h && n < 2048 {
                n *= 2;
            }
            let ts = linspace(-tc, tc, n + 1);
            let acc: Vec<f64> = ts
                .iter()
                .map(|&t| {
                    compensated_sum(grid.xs().iter().zip(&wxs).map(|(&x, wx)| {
                        let du = u.eval_unchecked(x + t) - u.eval_unchecked(x);
                        wx * du * du
                    }))
                })
                .collect();
            let inner = trapezoid_uniform(ts[1] - ts[0], &acc);
            inner / (y * y * y)
        })
        .collect();
    let lhs = compensated_sum(row_vals.iter().zip(trapezoid_weights(grid.ys())).map(|(v, w)| v * w));

    // rhs: band |t| < h as h·∫u'², then grid-aligned offsets to t_cap
    let du = u.derivative();
    let band = compensated_sum(
        grid.xs()
            .iter()
            .zip(&wxs)
            .map(|(&x, wx)| wx * h * du.eval_unchecked(x).powi(2)),
    );
    let kmax = (t_cap / h).floor() as usize;
    let off = compensated_sum((1..=kmax).map(|k| {
        let t = k as f64 * h;
        let wt = if k == kmax { 0.5 * h } else { h };
        let row = compensated_sum(grid.xs().iter().zip(&wxs).map(|(&x, wx)| {
            let dp = u.eval_unchecked(x + t) - u.eval_unchecked(x);
            let dm = u.eval_unchecked(x - t) - u.eval_unchecked(x);
            wx * (dp * dp + dm * dm)
        }));
        wt * row / (2.0 * t * t)
    }));
    Ok(FubiniReport { lhs, rhs: band + off, t_cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::builtin_line;
    use crate::numerics::rel_diff;

    fn zero_u() -> LineFunction {
        LineFunction::from_fn(16.0, 2049, -4.0, "zero", |_| 0.0).unwrap()
    }

    #[test]
    fn grid_weights_sum_to_area() {
        let g = HalfPlaneGrid::default_grid();
        assert!(rel_diff(g.weight_sum(), g.area()) < 1e-12);
    }

    #[test]
    fn gamma_of_zero_is_identity() {
        let g = gamma_u(&zero_u()).unwrap();
        for (x, y) in g.xs().iter().zip(g.ys()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn gamma_of_linear_u_closed_form() {
        let u = LineFunction::from_fn(16.0, 2049, 1.0, "affine", |x| x).unwrap();
        let g = gamma_u(&u).unwrap();
        let e = std::f64::consts::E;
        for (&x, &y) in g.xs().iter().zip(g.ys()).filter(|(x, _)| x.abs() <= 4.0) {
            let expected = (x.exp() - 1.0) / (e - 1.0);
            assert!((y - expected).abs() < 1e-9, "x={x}: {y} vs {expected}");
        }
    }

    #[test]
    fn gamma_fixes_zero_and_one_and_increases() {
        let u = builtin_line("gauss_bump", &Default::default()).unwrap();
        let g = gamma_u(&u).unwrap();
        let i0 = u.index_of(0.0).unwrap();
        let i1 = u.index_of(1.0).unwrap();
        assert_eq!(g.ys()[i0], 0.0);
        assert!((g.ys()[i1] - 1.0).abs() < 1e-15);
        assert!(g.ys().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn gamma_overflow_guard() {
        let u = LineFunction::from_fn(16.0, 2049, 0.0, "none", |_| 800.0).unwrap();
        assert!(matches!(gamma_u(&u), Err(Error::Overflow(_))));
    }

    #[test]
    fn rho_at_zero_is_identity() {
        let grid = HalfPlaneGrid::new(4.0, 2f64.powi(-7), 2.0, 64, 48).unwrap();
        let rho = rho_extension(&zero_u(), &grid).unwrap();
        let mut worst = 0.0f64;
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                let z = Complex64::new(grid.xs()[ix], grid.ys()[iy]);
                worst = worst.max((rho.at(ix, iy) - z).norm());
            }
        }
        assert!(worst < 1e-8, "sup |rho - z| = {worst}");
    }

    #[test]
    fn rho_constant_u_is_identity_too() {
        let grid = HalfPlaneGrid::new(4.0, 0.05, 1.0, 32, 16).unwrap();
        let u = LineFunction::from_fn(16.0, 2049, 0.0, "constant", |_| 0.7).unwrap();
        let rho = rho_extension(&u, &grid).unwrap();
        let mut worst = 0.0f64;
        for iy in 0..grid.ny() {
            for ix in 0..grid.nx() {
                let z = Complex64::new(grid.xs()[ix], grid.ys()[iy]);
                worst = worst.max((rho.at(ix, iy) - z).norm());
            }
        }
        assert!(worst < 1e-8, "sup |rho - z| = {worst}");
    }

    #[test]
    fn rho_boundary_consistency() {
        let u = builtin_line("gauss_bump", &Default::default())
            .unwrap()
            .map_values(|v| 0.2 * v)
            .unwrap();
        let gam = gamma_u(&u).unwrap();
        let errs: Vec<f64> = [0.1, 0.05, 0.025]
            .iter()
            .map(|&ymin| {
                let grid = HalfPlaneGrid::new(4.0, ymin, 1.0, 33, 9).unwrap();
                let rho = rho_extension(&u, &grid).unwrap();
                (0..grid.nx())
                    .map(|ix| (rho.at(ix, 0).re - gam.eval(grid.xs()[ix]).unwrap()).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        // O(y) decay of the boundary error
        assert!(errs[1] < 0.7 * errs[0] && errs[2] < 0.7 * errs[1], "{errs:?}");
    }

    #[test]
    fn wirtinger_at_zero() {
        let grid = HalfPlaneGrid::new(4.0, 0.05, 1.0, 32, 16).unwrap();
        let (dbar, d) = wirtinger(&zero_u(), &grid, WirtingerMethod::Kernels).unwrap();
        assert!(dbar.sup_norm() < 1e-10);
        for v in d.values() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn beltrami_zero_and_energy_zero() {
        let grid = HalfPlaneGrid::new(4.0, 0.05, 1.0, 32, 16).unwrap();
        let mu = beltrami(&zero_u(), &grid).unwrap();
        assert!(mu.sup_norm() < 1e-10);
        let e = wp_energy(&mu, &grid).unwrap();
        assert!(e.value < 1e-18);
        assert!(e.sup_mu < 1e-10);
    }

    #[test]
    fn wp_energy_requires_mu_tag() {
        let grid = HalfPlaneGrid::new(4.0, 0.05, 1.0, 32, 16).unwrap();
        let rho = rho_extension(&zero_u(), &grid).unwrap();
        assert!(wp_energy(&rho, &grid).is_err());
    }

    #[test]
    fn fubini_zero_function() {
        let grid = HalfPlaneGrid::new(8.0, 2f64.powi(-9), 64.0, 64, 64).unwrap();
        let r = fubini_check(&zero_u(), &grid).unwrap();
        assert!(r.lhs.abs() < 1e-18 && r.rhs.abs() < 1e-18);
    }

    #[test]
    fn mu_field_validation_rejects_large_values() {
        let grid = HalfPlaneGrid::new(4.0, 0.05, 1.0, 32, 16).unwrap();
        let vals = vec![Complex64::new(1.2, 0.0); grid.nx() * grid.ny()];
        assert!(matches!(
            ComplexGridField::new(FieldKind::Mu, &grid, vals),
            Err(Error::Degenerate(_))
        ));
    }
}
