use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{Algorithm, SamplerOptions, DEFAULT_BURN_IN};
use crate::error::{Error, Result};
use crate::experiments::WeightGrid;
use crate::lattice::LatticeSpec;
use crate::verify::BcKind;

/// Experiment settings, read from a JSON file and overridden by flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub lattice: String,
    pub q: f64,
    /// Homogeneous mode: grid of edge weights.
    pub p: Option<Vec<f64>>,
    /// Weighted mode: grid of inverse temperatures, used with `couplings`.
    pub beta: Option<Vec<f64>>,
    pub couplings: Option<Vec<f64>>,
    pub sizes: Vec<usize>,
    pub bc: String,
    pub replicas: usize,
    pub sweeps: u64,
    pub burn_in: u64,
    pub algo: Option<Algorithm>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            lattice: "square".into(),
            q: 1.0,
            p: None,
            beta: None,
            couplings: None,
            sizes: Vec::new(),
            bc: "free".into(),
            replicas: 8,
            sweeps: 1000,
            burn_in: DEFAULT_BURN_IN,
            algo: None,
            seed: 0,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn lattice(&self) -> Result<LatticeSpec> {
        self.lattice.parse()
    }

    pub fn bc(&self) -> Result<BcKind> {
        parse_bc(&self.bc)
    }

    pub fn weights(&self) -> Result<WeightGrid> {
        match (&self.p, &self.beta) {
            (Some(p), None) => Ok(WeightGrid::Homogeneous { p: p.clone() }),
            (None, Some(beta)) => {
                let couplings = self.couplings.clone().unwrap_or_else(|| vec![1.0]);
                Ok(WeightGrid::Weighted { beta: beta.clone(), couplings })
            }
            (Some(_), Some(_)) => Err(Error::InvalidParameter("give either p or beta, not both".into())),
            (None, None) => Err(Error::InvalidParameter("no edge weights: give p or beta".into())),
        }
    }

    /// Sampler settings; cluster updates by default for integer q >= 2.
    pub fn sampler(&self) -> SamplerOptions {
        let algorithm = self.algo.unwrap_or(match self.q {
            q if q >= 2.0 && q.fract() == 0.0 => Algorithm::Es,
            _ => Algorithm::Heatbath,
        });
        SamplerOptions {
            algorithm,
            sweeps: self.sweeps,
            burn_in: self.burn_in,
            replicas: self.replicas,
            seed: self.seed,
            start_open: false,
        }
    }

    /// Range checks shared by all experiment commands.
    pub fn validate(&self) -> Result<()> {
        self.lattice()?;
        self.bc()?;
        if !(self.q.is_finite() && self.q > 0.0) {
            return Err(Error::InvalidParameter(format!("q = {} must be > 0", self.q)));
        }
        if let Some(p) = &self.p {
            if let Some(bad) = p.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                return Err(Error::InvalidParameter(format!("p = {bad} is outside [0,1]")));
            }
        }
        if let Some(beta) = &self.beta {
            if let Some(bad) = beta.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
                return Err(Error::InvalidParameter(format!("beta = {bad} must be >= 0")));
            }
        }
        if let Some(j) = &self.couplings {
            if let Some(bad) = j.iter().find(|j| !(j.is_finite() && **j > 0.0)) {
                return Err(Error::InvalidParameter(format!("coupling {bad} must be > 0")));
            }
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) || self.sizes.contains(&0) {
            return Err(Error::InvalidParameter("sizes must be positive and strictly increasing".into()));
        }
        if self.replicas == 0 {
            return Err(Error::InvalidParameter("replicas must be >= 1".into()));
        }
        if self.sweeps == 0 {
            return Err(Error::InvalidParameter("sweeps must be >= 1".into()));
        }
        if self.algo == Some(Algorithm::Es) && (self.q.fract() != 0.0 || self.q < 1.0) {
            return Err(Error::InvalidParameter(format!("--algo es needs integer q, got {}", self.q)));
        }
        Ok(())
    }
}

pub fn parse_bc(s: &str) -> Result<BcKind> {
    match s {
        "free" => Ok(BcKind::Free),
        "wired" => Ok(BcKind::Wired),
        other => Err(Error::InvalidBoundary(format!("'{other}' (free, wired)"))),
    }
}
