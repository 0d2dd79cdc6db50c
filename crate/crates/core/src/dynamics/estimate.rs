use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{replica_rng, Algorithm, ChainState};
use crate::boundary::BoundaryCondition;
use crate::configuration::Configuration;
use crate::error::{Error, Result};
use crate::exact::{EventSpec, RcParams};
use crate::lattice::Region;

pub const DEFAULT_BURN_IN: u64 = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerOptions {
    pub algorithm: Algorithm,
    /// Measured sweeps per replica.
    pub sweeps: u64,
    pub burn_in: u64,
    pub replicas: usize,
    pub seed: u64,
    /// Start from the all-open configuration instead of all-closed.
    pub start_open: bool,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        Self { algorithm: Algorithm::Heatbath, sweeps: 1000, burn_in: DEFAULT_BURN_IN, replicas: 8, seed: 0, start_open: false }
    }
}

/// Replica-level mean with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub replicas: usize,
    pub samples: u64,
}

impl Estimate {
    pub fn from_replica_means(means: &[f64], sweeps: u64) -> Self {
        let r = means.len();
        let mean = means.iter().sum::<f64>() / r as f64;
        let stderr = if r > 1 {
            let var = means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1) as f64;
            (var / r as f64).sqrt()
        } else {
            f64::NAN
        };
        Self { mean, stderr, replicas: r, samples: sweeps * r as u64 }
    }
}

/// Runs independent replicas and returns, per replica, the time average of
/// `k` observables. `observe` adds the current values into its slice once
/// per measured sweep.
pub fn replica_means<F>(
    region: &Arc<Region>,
    params: &RcParams,
    bc: &BoundaryCondition,
    options: &SamplerOptions,
    k: usize,
    observe: F,
) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&Configuration, &Region, &mut [f64]) + Sync,
{
    if options.replicas == 0 {
        return Err(Error::InvalidParameter("replicas must be >= 1".into()));
    }
    if options.sweeps == 0 {
        return Err(Error::InvalidParameter("sweeps must be >= 1".into()));
    }
    (0..options.replicas as u64)
        .into_par_iter()
        .map(|replica| {
            let m = region.num_edges();
            let start = if options.start_open { Configuration::all_open(m) } else { Configuration::all_closed(m) };
            let rng = replica_rng(options.seed, replica);
            let mut chain = ChainState::with_config(start, region.clone(), params.clone(), bc.clone(), rng)?;
            for _ in 0..options.burn_in {
                chain.sweep(options.algorithm)?;
            }
            let mut acc = vec![0.0; k];
            for _ in 0..options.sweeps {
                chain.sweep(options.algorithm)?;
                observe(&chain.config, region, &mut acc);
            }
            acc.iter_mut().for_each(|a| *a /= options.sweeps as f64);
            Ok(acc)
        })
        .collect()
}

/// Monte Carlo estimate of φ(event) from independent seeded chains.
pub fn estimate(
    event: &EventSpec,
    region: &Arc<Region>,
    params: &RcParams,
    bc: &BoundaryCondition,
    options: &SamplerOptions,
) -> Result<Estimate> {
    if options.replicas < 2 {
        return Err(Error::InvalidParameter("estimates need at least 2 replicas".into()));
    }
    event.validate(region)?;
    let means = replica_means(region, params, bc, options, 1, |config, region, acc| {
        if event.holds(config, region) {
            acc[0] += 1.0;
        }
    })?;
    let flat: Vec<f64> = means.into_iter().map(|v| v[0]).collect();
    Ok(Estimate::from_replica_means(&flat, options.sweeps))
}
