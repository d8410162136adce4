//! Run manifests: one row per executed check, serialized to JSON or CSV.
//! Rows are appended in execution order and the serialization is
//! byte-stable for a fixed config, so two runs differ only in the
//! timestamp.

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::Config;
use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub suite: String,
    pub check: String,
    pub input: String,
    /// measured quantity (value, ratio, exponent, ...)
    pub value: f64,
    /// the number compared against the tolerance
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    pub fn new(suite: &str, check: &str, input: &str, value: f64, residual: f64, tolerance: f64) -> Self {
        Self {
            suite: suite.to_string(),
            check: check.to_string(),
            input: input.to_string(),
            value,
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "[{}] {}/{} value={:.6e} residual={:.6e} tol={:.6e} ({})",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.check,
            self.value,
            self.residual,
            self.tolerance,
            self.input
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Environment {
    pub package: String,
    pub version: String,
    pub os: String,
    pub workers: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub timestamp_unix: u64,
    pub config_hash: String,
    pub config: Config,
    pub environment: Environment,
    pub rows: Vec<CheckRow>,
}

impl RunManifest {
    pub fn new(config: &Config, rows: Vec<CheckRow>) -> Self {
        let timestamp_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            timestamp_unix,
            config_hash: config.hash(),
            config: config.clone(),
            environment: Environment {
                package: env!("CARGO_PKG_NAME").to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                os: std::env::consts::OS.to_string(),
                workers: rayon::current_num_threads(),
            },
            rows,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    /// Serialization with the timestamp zeroed; two runs on the same config
    /// must agree byte-for-byte here.
    pub fn canonical_json(&self) -> String {
        let mut copy = self.clone();
        copy.timestamp_unix = 0;
        serde_json::to_string_pretty(&copy).expect("manifest serializes")
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "suite,check,input,value,residual,tolerance,pass")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{:.12e},{:.12e},{:.12e},{}",
                r.suite,
                r.check,
                r.input.replace(',', ";"),
                r.value,
                r.residual,
                r.tolerance,
                r.pass
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_follows_tolerance() {
        let ok = CheckRow::new("s", "c", "i", 1.0, 1e-5, 1e-4);
        assert!(ok.pass);
        let bad = CheckRow::new("s", "c", "i", 1.0, 1e-3, 1e-4);
        assert!(!bad.pass);
        let nan = CheckRow::new("s", "c", "i", f64::NAN, f64::NAN, 1e-4);
        assert!(!nan.pass);
    }

    #[test]
    fn canonical_json_strips_timestamp() {
        let cfg = Config::default();
        let a = RunManifest::new(&cfg, vec![CheckRow::new("s", "c", "i", 0.0, 0.0, 1.0)]);
        let mut b = a.clone();
        b.timestamp_unix = a.timestamp_unix + 100;
        assert_eq!(a.canonical_json(), b.canonical_json());
        assert_ne!(a.to_json(), b.to_json());
    }

    #[test]
    fn csv_escapes_commas() {
        let cfg = Config::default();
        let m = RunManifest::new(&cfg, vec![CheckRow::new("s", "c", "a,b", 0.0, 0.0, 1.0)]);
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("a;b"));
    }
}
