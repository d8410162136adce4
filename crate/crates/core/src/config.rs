//! Run configuration with full defaulting; every value echoes into the run
//! manifest so a report pins its own reproduction.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::semmes::HalfPlaneGrid;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub x_extent: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { x_extent: 8.0, y_min: 2f64.powi(-7), y_max: 4.0, nx: 256, ny: 128 }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<HalfPlaneGrid> {
        HalfPlaneGrid::new(self.x_extent, self.y_min, self.y_max, self.nx, self.ny)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LineConfig {
    pub extent: f64,
    pub samples: usize,
    /// near-diagonal cutoff for the line seminorm, in grid steps
    pub diag_cutoff_steps: f64,
}

impl Default for LineConfig {
    fn default() -> Self {
        Self { extent: 16.0, samples: 2049, diag_cutoff_steps: 1.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig {
    pub steps: usize,
    pub particles: usize,
    pub knots: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self { steps: 1005, particles: 161, knots: 201 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BmoConfig {
    pub max_depth: u32,
}

impl Default for BmoConfig {
    fn default() -> Self {
        Self { max_depth: 10 }
    }
}

/// Every tolerance and threshold of the verification battery, pinned here.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Fourier vs quadrature circle seminorm, relative
    pub circle_cross_rel: f64,
    /// line seminorm dilation invariance, relative
    pub dilation_rel: f64,
    /// comparability constant bound for the smoothing ratio |φ_y∗e^u|/e^{φ_y∗u}
    pub lemma31_ratio: f64,
    /// |φ_y∗u - u_I| ≤ C‖u‖_BMO: bound on the measured C
    pub mean_bound_c: f64,
    /// extension-at-identity sup error
    pub rho_identity: f64,
    /// Wirtinger kernels-vs-FD gate: max(abs_floor, h2_coeff·h²)
    pub wirtinger_abs_floor: f64,
    pub wirtinger_h2_coeff: f64,
    /// energy scaling exponent band half-width about 2
    pub energy_exponent_halfband: f64,
    /// Fubini identity, relative
    pub fubini_rel: f64,
    /// flow closed-form sup error at t = 1
    pub flow_closed_form: f64,
    /// RK4 self-convergence factor band
    pub selfconv_lo: f64,
    pub selfconv_hi: f64,
    /// log-derivative identity residuals
    pub logderiv_line: f64,
    pub logderiv_circle: f64,
    /// flow commutation through the Cayley conjugation
    pub flow_commutation: f64,
    /// h = Ψ(log h') pivot identity
    pub pivot_sup: f64,
    /// dΨ Richardson exponent band half-width about 2
    pub dpsi_exponent_halfband: f64,
    /// dΨ round trips after canonical normalization
    pub dpsi_roundtrip: f64,
    /// R∘Ψ = Ψ∘L residual
    pub intertwine: f64,
    /// ∂̄H identity gate: max(abs_floor, h2_coeff·h²)
    pub reich88_abs_floor: f64,
    pub reich88_h2_coeff: f64,
    /// Dirichlet comparability vs the closed forms, relative
    pub dirichlet_rel: f64,
    /// reproducing formula, relative
    pub reproducing_rel: f64,
    /// energy chain factor (comparison constant 9 plus truncation slack)
    pub chain_factor: f64,
    /// Cayley transfer law residual
    pub transfer_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            circle_cross_rel: 1e-3,
            dilation_rel: 1e-2,
            lemma31_ratio: 1.5,
            mean_bound_c: 2.0,
            rho_identity: 1e-8,
            wirtinger_abs_floor: 1e-4,
            wirtinger_h2_coeff: 10.0,
            energy_exponent_halfband: 0.1,
            fubini_rel: 0.01,
            flow_closed_form: 1e-6,
            selfconv_lo: 12.0,
            selfconv_hi: 20.0,
            logderiv_line: 1e-4,
            logderiv_circle: 1e-3,
            flow_commutation: 1e-4,
            pivot_sup: 1e-4,
            dpsi_exponent_halfband: 0.1,
            dpsi_roundtrip: 1e-6,
            intertwine: 1e-4,
            reich88_abs_floor: 1e-3,
            reich88_h2_coeff: 20.0,
            dirichlet_rel: 0.03,
            reproducing_rel: 0.01,
            chain_factor: 9.5,
            transfer_residual: 1e-3,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<()> {
        let all = [
            self.circle_cross_rel,
            self.dilation_rel,
            self.lemma31_ratio,
            self.mean_bound_c,
            self.rho_identity,
            self.wirtinger_abs_floor,
            self.wirtinger_h2_coeff,
            self.energy_exponent_halfband,
            self.fubini_rel,
            self.flow_closed_form,
            self.selfconv_lo,
            self.selfconv_hi,
            self.logderiv_line,
            self.logderiv_circle,
            self.flow_commutation,
            self.pivot_sup,
            self.dpsi_exponent_halfband,
            self.dpsi_roundtrip,
            self.intertwine,
            self.reich88_abs_floor,
            self.reich88_h2_coeff,
            self.dirichlet_rel,
            self.reproducing_rel,
            self.chain_factor,
            self.transfer_residual,
        ];
        if all.iter().any(|&t| !(t >= f64::EPSILON)) {
            return Err(Error::invalid("tolerances must be at least machine epsilon"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub grid: GridConfig,
    pub line: LineConfig,
    pub flow: FlowConfig,
    pub bmo: BmoConfig,
    pub tolerances: Tolerances,
    /// 0 lets the worker pool pick its own size
    pub workers: usize,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.grid.x_extent > 0.0 && self.grid.y_min > 0.0 && self.grid.y_max > self.grid.y_min) {
            return Err(Error::invalid("grid extents must be positive and ordered"));
        }
        if self.line.extent <= 0.0 || self.line.samples < 64 {
            return Err(Error::invalid("line grid too small"));
        }
        if self.flow.steps == 0 || self.flow.particles < 8 || self.flow.knots < 3 {
            return Err(Error::invalid("flow parameters too small"));
        }
        if self.bmo.max_depth == 0 {
            return Err(Error::invalid("bmo depth must be >= 1"));
        }
        self.tolerances.validate()
    }

    /// Stable hash of the canonical JSON serialization.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_hash_stably() {
        let a = Config::default();
        a.validate().unwrap();
        assert_eq!(a.hash(), Config::default().hash());
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg = Config::from_json(r#"{"flow":{"steps":500}}"#).unwrap();
        assert_eq!(cfg.flow.steps, 500);
        assert_eq!(cfg.flow.particles, FlowConfig::default().particles);
        assert_eq!(cfg.grid.nx, 256);
    }

    #[test]
    fn zero_tolerance_rejected() {
        let r = Config::from_json(r#"{"tolerances":{"fubini_rel":0.0}}"#);
        assert!(r.is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(Config::from_json(r#"{"grid":{"nx":128,"oops":1}}"#).is_err());
    }
}
