//! Continuous-time coupling of the measures conditioned on a pivot edge
//! being closed (π) and open (ω).

use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{replica_rng, PathQuery};
use crate::boundary::BoundaryCondition;
use crate::configuration::Configuration;
use crate::connectivity::clusters;
use crate::error::{Error, Result};
use crate::exact::RcParams;
use crate::lattice::Region;

/// Largest edge count for which occupation measures are tabulated.
const OCCUPATION_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct CoupledState {
    pub pi: Configuration,
    pub omega: Configuration,
    pub pivot: usize,
    pub clock: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TransitionKind {
    /// Opens the edge in both configurations.
    Open,
    /// Closes the edge in both configurations.
    CloseBoth,
    /// Closes the edge in π only.
    ClosePi,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Transition {
    pub time: f64,
    pub edge: usize,
    pub kind: TransitionKind,
}

/// Counts of transitions after which an invariant failed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Violations {
    /// π ≤ ω fails somewhere.
    pub monotone: u64,
    /// π(e) = 0, ω(e) = 1 fails at the pivot.
    pub pivot: u64,
    /// π(f) ≠ ω(f) for an edge f outside the ω-cluster of the pivot.
    pub off_cluster: u64,
}

pub struct CouplingChain {
    region: Arc<Region>,
    bc: BoundaryCondition,
    params: RcParams,
    state: CoupledState,
    rng: ChaCha8Rng,
    query: PathQuery,
    rates: Vec<[f64; 3]>,
}

impl CouplingChain {
    /// Starts from ω = {pivot} and π = ∅.
    pub fn new(region: Arc<Region>, params: RcParams, bc: BoundaryCondition, pivot: usize, seed: u64) -> Result<Self> {
        let m = region.num_edges();
        if pivot >= m {
            return Err(Error::InvalidParameter(format!("pivot edge {pivot} out of range")));
        }
        params.check_region(&region)?;
        bc.validate(&region)?;
        if params.q < 1.0 {
            return Err(Error::InvalidParameter(format!("the coupling needs q >= 1, got {}", params.q)));
        }
        if let Some(f) = (0..m).find(|&f| {
            let p = params.edge_p(f);
            !(p > 0.0 && p < 1.0)
        }) {
            return Err(Error::InvalidParameter(format!("edge {f} has weight outside (0,1)")));
        }
        let omega = Configuration::with_open(m, &[pivot]);
        let state = CoupledState { pi: Configuration::all_closed(m), omega, pivot, clock: 0.0 };
        let query = PathQuery::new(&region, &bc);
        Ok(Self { region, bc, params, state, rng: replica_rng(seed, 0), query, rates: vec![[0.0; 3]; m] })
    }

    pub fn state(&self) -> &CoupledState {
        &self.state
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    /// q^{D_f}, where D_f = 1 when the endpoints of f are not joined off f.
    fn q_pow_d(&mut self, which_pi: bool, f: usize) -> f64 {
        let config = if which_pi { &self.state.pi } else { &self.state.omega };
        if self.params.q == 1.0 || self.query.endpoints_connected(config, &self.region, f) {
            1.0
        } else {
            self.params.q
        }
    }

    fn refresh_rates(&mut self) -> Result<f64> {
        let mut total = 0.0;
        for f in 0..self.region.num_edges() {
            self.rates[f] = [0.0; 3];
            if f == self.state.pivot {
                continue;
            }
            let p = self.params.edge_p(f);
            let ratio = (1.0 - p) / p;
            let (pi_f, omega_f) = (self.state.pi.get(f), self.state.omega.get(f));
            let mut r = [0.0; 3];
            if !pi_f {
                r[0] = 1.0;
            }
            if omega_f {
                r[1] = ratio * self.q_pow_d(false, f);
            }
            if pi_f {
                let third = ratio * (self.q_pow_d(true, f) - self.q_pow_d(false, f));
                if third < 0.0 {
                    return Err(Error::Internal(format!("negative rate {third} at edge {f}")));
                }
                r[2] = third;
            }
            total += r.iter().sum::<f64>();
            self.rates[f] = r;
        }
        Ok(total)
    }

    /// Advances to the next transition; `None` when no transition has
    /// positive rate.
    pub fn step(&mut self) -> Result<Option<Transition>> {
        let total = self.refresh_rates()?;
        if total <= 0.0 {
            return Ok(None);
        }
        let u: f64 = self.rng.gen();
        let dt = -(1.0 - u).ln() / total;
        let mut target = self.rng.gen::<f64>() * total;
        let mut chosen = None;
        'search: for (f, r) in self.rates.iter().enumerate() {
            for (k, &rate) in r.iter().enumerate() {
                if rate > 0.0 {
                    chosen = Some((f, k));
                    if target < rate {
                        break 'search;
                    }
                    target -= rate;
                }
            }
        }
        let (edge, k) = chosen.expect("positive total rate");
        let kind = match k {
            0 => {
                self.state.pi.set(edge, true);
                self.state.omega.set(edge, true);
                TransitionKind::Open
            }
            1 => {
                self.state.pi.set(edge, false);
                self.state.omega.set(edge, false);
                TransitionKind::CloseBoth
            }
            _ => {
                self.state.pi.set(edge, false);
                TransitionKind::ClosePi
            }
        };
        self.state.clock += dt;
        Ok(Some(Transition { time: self.state.clock, edge, kind }))
    }

    /// Checks the three state invariants on the current state.
    pub fn audit(&self) -> Result<[bool; 3]> {
        let CoupledState { pi, omega, pivot, .. } = &self.state;
        let monotone = pi.le(omega);
        let pivot_ok = !pi.get(*pivot) && omega.get(*pivot);
        let partition = clusters(omega, &self.region, Some(&self.bc))?;
        let core = partition.label(self.region.edge(*pivot).0);
        let off_cluster = self.region.edges().iter().enumerate().all(|(f, &(u, v))| {
            partition.label(u) == core || partition.label(v) == core || pi.get(f) == omega.get(f)
        });
        Ok([monotone, pivot_ok, off_cluster])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CouplingOptions {
    pub t_max: f64,
    /// Time discarded before occupation measures start.
    pub burn_in: f64,
    /// Audit invariants after every transition.
    pub audit: bool,
}

impl Default for CouplingOptions {
    fn default() -> Self {
        Self { t_max: 1000.0, burn_in: 10.0, audit: true }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CouplingSummary {
    pub events: u64,
    pub final_time: f64,
    pub violations: Violations,
    pub audited: u64,
    pub kinds: [u64; 3],
    /// Time-weighted occupation of each π configuration (indexed by mask),
    /// normalized; present for regions up to 20 edges.
    pub occupation_pi: Option<Vec<f64>>,
    pub occupation_omega: Option<Vec<f64>>,
}

/// Runs the coupling chain up to time `t_max`, auditing invariants and
/// recording occupation measures.
pub fn coupling_chain_run(
    region: Arc<Region>,
    params: RcParams,
    bc: BoundaryCondition,
    pivot: usize,
    options: &CouplingOptions,
    seed: u64,
) -> Result<CouplingSummary> {
    if options.t_max.is_nan() || options.burn_in.is_nan() || options.t_max < 0.0 || options.burn_in < 0.0 {
        return Err(Error::InvalidParameter("times must be >= 0".into()));
    }
    let m = region.num_edges();
    let tabulate = m <= OCCUPATION_CAP;
    let mut occ_pi = if tabulate { vec![0.0; 1 << m] } else { Vec::new() };
    let mut occ_omega = occ_pi.clone();
    let mut chain = CouplingChain::new(region, params, bc, pivot, seed)?;
    let mut summary = CouplingSummary {
        events: 0,
        final_time: 0.0,
        violations: Violations::default(),
        audited: 0,
        kinds: [0; 3],
        occupation_pi: None,
        occupation_omega: None,
    };
    let mut record = |state: &CoupledState, from: f64, to: f64| {
        let (lo, hi) = (from.max(options.burn_in), to.min(options.t_max));
        if tabulate && hi > lo {
            occ_pi[state.pi.to_mask().unwrap() as usize] += hi - lo;
            occ_omega[state.omega.to_mask().unwrap() as usize] += hi - lo;
        }
    };
    loop {
        let before = chain.state().clone();
        let Some(t) = chain.step()? else {
            record(&before, before.clock, options.t_max);
            break;
        };
        record(&before, before.clock, t.time);
        if t.time > options.t_max {
            break;
        }
        summary.events += 1;
        summary.kinds[t.kind as usize] += 1;
        if options.audit {
            let [monotone, pivot_ok, off] = chain.audit()?;
            summary.audited += 1;
            summary.violations.monotone += !monotone as u64;
            summary.violations.pivot += !pivot_ok as u64;
            summary.violations.off_cluster += !off as u64;
        }
    }
    summary.final_time = chain.state().clock.min(options.t_max);
    if tabulate {
        let total: f64 = occ_pi.iter().sum();
        if total > 0.0 {
            occ_pi.iter_mut().chain(occ_omega.iter_mut()).for_each(|x| *x /= total);
            summary.occupation_pi = Some(occ_pi);
            summary.occupation_omega = Some(occ_omega);
        }
    }
    Ok(summary)
}
