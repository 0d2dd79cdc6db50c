use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Region;

/// Edge weights: one `p` for every edge, or inverse temperature `beta` with
/// per-edge couplings mapped to `p_e = 1 - exp(-beta J_e)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeWeights {
    Homogeneous { p: f64 },
    Weighted { beta: f64, couplings: Vec<f64> },
}

/// Random-cluster parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RcParams {
    pub q: f64,
    pub edges: EdgeWeights,
}

impl RcParams {
    pub fn homogeneous(p: f64, q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p = {p} is outside [0,1]")));
        }
        check_q(q)?;
        Ok(Self { q, edges: EdgeWeights::Homogeneous { p } })
    }

    pub fn weighted(beta: f64, couplings: Vec<f64>, q: f64) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidParameter(format!("beta = {beta} must be >= 0")));
        }
        if let Some(j) = couplings.iter().find(|&&j| !(j.is_finite() && j > 0.0)) {
            return Err(Error::InvalidParameter(format!("coupling {j} must be > 0")));
        }
        check_q(q)?;
        Ok(Self { q, edges: EdgeWeights::Weighted { beta, couplings } })
    }

    /// The homogeneous edge-weight, if in homogeneous mode.
    pub fn p(&self) -> Option<f64> {
        match self.edges {
            EdgeWeights::Homogeneous { p } => Some(p),
            EdgeWeights::Weighted { .. } => None,
        }
    }

    /// Effective edge-weight of edge `e`.
    #[inline]
    pub fn edge_p(&self, e: usize) -> f64 {
        match &self.edges {
            EdgeWeights::Homogeneous { p } => *p,
            EdgeWeights::Weighted { beta, couplings } => 1.0 - (-beta * couplings[e]).exp(),
        }
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::homogeneous(p, self.q)
    }

    pub fn check_region(&self, region: &Region) -> Result<()> {
        if let EdgeWeights::Weighted { couplings, .. } = &self.edges {
            if couplings.len() != region.num_edges() {
                return Err(Error::SizeMismatch { expected: region.num_edges(), got: couplings.len() });
            }
        }
        Ok(())
    }

    pub fn integer_q(&self) -> Option<u32> {
        (self.q.fract() == 0.0 && self.q >= 1.0 && self.q < u32::MAX as f64).then_some(self.q as u32)
    }
}

fn check_q(q: f64) -> Result<()> {
    if !(q.is_finite() && q > 0.0) {
        return Err(Error::InvalidParameter(format!("q = {q} must be > 0")));
    }
    Ok(())
}
