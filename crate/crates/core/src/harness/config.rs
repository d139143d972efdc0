use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiplier::KernelParams;
use crate::wave::ProblemKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Usage(format!("unknown format '{other}' (expected csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub param: String,
    pub values: Vec<f64>,
}

/// Configuration shared by every study. Missing keys take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StudyConfig {
    pub n: u32,
    pub delta: f64,
    pub beta: f64,
    #[serde(rename = "K")]
    pub box_radius: u32,
    pub t: f64,
    /// Sobolev index of the initial displacement f.
    pub s1: f64,
    /// Sobolev index of the initial velocity g.
    pub s2: f64,
    /// Sobolev index of the forcing b.
    pub sigma: f64,
    pub epsilon: f64,
    pub sweep: Option<Sweep>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: Option<String>,
    /// Norm index of the temporal study.
    pub q: f64,
    /// Derivative order of the temporal study.
    pub p: u32,
    pub problem: ProblemKind,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            n: 1,
            delta: 1.0,
            beta: 0.0,
            box_radius: 32,
            t: 1.0,
            s1: 3.0,
            s2: 2.0,
            sigma: 1.0,
            epsilon: 0.5,
            sweep: None,
            tol: None,
            seed: 0,
            format: OutputFormat::Csv,
            out: None,
            q: 0.0,
            p: 1,
            problem: ProblemKind::Homogeneous,
        }
    }
}

impl StudyConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Usage(format!("invalid config: {e}")))
    }

    pub fn kernel(&self) -> Result<KernelParams> {
        KernelParams::new(self.n, self.delta, self.beta)
    }

    /// Canonical single-line JSON echo.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub(crate) fn validate_common(&self) -> Result<()> {
        self.kernel()?;
        if self.box_radius < 1 {
            return Err(Error::domain("K must be >= 1"));
        }
        if !(self.t >= 0.0) || !self.t.is_finite() {
            return Err(Error::domain(format!("t must be >= 0, got {}", self.t)));
        }
        for (name, v) in [("s1", self.s1), ("s2", self.s2), ("sigma", self.sigma), ("q", self.q)] {
            if !v.is_finite() {
                return Err(Error::domain(format!("{name} must be finite")));
            }
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0) {
                return Err(Error::domain(format!("tol must be > 0, got {tol}")));
            }
        }
        Ok(())
    }

    /// Sweep values for `param`, or `default` when no sweep is configured.
    pub(crate) fn sweep_values(&self, param: &str, default: &[f64]) -> Result<Vec<f64>> {
        match &self.sweep {
            None => Ok(default.to_vec()),
            Some(s) if s.param == param => {
                if s.values.is_empty() {
                    return Err(Error::domain("sweep grid is empty"));
                }
                if s.values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::domain("sweep grid contains a non-finite value"));
                }
                Ok(s.values.clone())
            }
            Some(s) => Err(Error::Usage(format!(
                "this study sweeps '{param}', but the config sweeps '{}'",
                s.param
            ))),
        }
    }
}
