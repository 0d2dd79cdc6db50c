//! Monte Carlo samplers: single-edge heat bath, Edwards–Sokal cluster
//! updates, the two-configuration coupling chain, and replica estimators.

mod coupling;
mod estimate;
mod query;
mod trajectory;

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryCondition;
use crate::configuration::{Configuration, EdgeStates};
use crate::connectivity::clusters;
use crate::error::{Error, Result};
use crate::exact::RcParams;
use crate::lattice::Region;

pub use coupling::{
    coupling_chain_run, CouplingChain, CouplingOptions, CouplingSummary, CoupledState, Transition, TransitionKind,
};
pub use estimate::{estimate, replica_means, Estimate, SamplerOptions, DEFAULT_BURN_IN};
pub use trajectory::{read_trajectory, TrajectoryWriter, TRAJECTORY_MAGIC};

pub(crate) use query::PathQuery;

/// Generator for replica `replica` of a run seeded with `seed`. Replicas use
/// disjoint ChaCha streams, so results do not depend on scheduling.
pub fn replica_rng(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Single-edge heat bath in a fresh random order every sweep.
    #[default]
    Heatbath,
    /// Edwards–Sokal (Swendsen–Wang) cluster updates; integer q only.
    Es,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heatbath" => Ok(Algorithm::Heatbath),
            "es" => Ok(Algorithm::Es),
            other => Err(Error::InvalidParameter(format!("unknown algorithm '{other}' (heatbath, es)"))),
        }
    }
}

/// Cluster updates for integer q >= 2, the heat bath otherwise (at q = 1
/// one heat-bath sweep already yields an exact independent sample).
pub fn default_algorithm(params: &RcParams) -> Algorithm {
    match params.integer_q() {
        Some(q) if q >= 2 => Algorithm::Es,
        _ => Algorithm::Heatbath,
    }
}

/// Probability that the heat bath opens `edge`, given the rest of `config`.
pub fn heat_bath_open_probability<S: EdgeStates + ?Sized>(
    config: &S,
    region: &Region,
    params: &RcParams,
    bc: &BoundaryCondition,
    edge: usize,
) -> f64 {
    PathQuery::new(region, bc).open_probability(config, region, params, edge)
}

impl PathQuery {
    fn open_probability<S: EdgeStates + ?Sized>(&mut self, config: &S, region: &Region, params: &RcParams, edge: usize) -> f64 {
        let p = params.edge_p(edge);
        let q = params.q;
        if q == 1.0 || self.endpoints_connected(config, region, edge) {
            p
        } else {
            p / (p + q * (1.0 - p))
        }
    }
}

/// A single Markov chain: configuration, model and its own generator.
#[derive(Clone, Debug)]
pub struct ChainState {
    pub config: Configuration,
    region: Arc<Region>,
    bc: BoundaryCondition,
    params: RcParams,
    rng: ChaCha8Rng,
    sweep_count: u64,
    query: PathQuery,
    order: Vec<usize>,
}

impl ChainState {
    pub fn new(region: Arc<Region>, params: RcParams, bc: BoundaryCondition, rng: ChaCha8Rng) -> Result<Self> {
        Self::with_config(Configuration::all_closed(region.num_edges()), region, params, bc, rng)
    }

    pub fn with_config(
        config: Configuration,
        region: Arc<Region>,
        params: RcParams,
        bc: BoundaryCondition,
        rng: ChaCha8Rng,
    ) -> Result<Self> {
        config.check_len(region.num_edges())?;
        params.check_region(&region)?;
        bc.validate(&region)?;
        let query = PathQuery::new(&region, &bc);
        let order = (0..region.num_edges()).collect();
        Ok(Self { config, region, bc, params, rng, sweep_count: 0, query, order })
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn bc(&self) -> &BoundaryCondition {
        &self.bc
    }

    pub fn params(&self) -> &RcParams {
        &self.params
    }

    pub fn sweep_count(&self) -> u64 {
        self.sweep_count
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Resamples `edge` from its conditional law using the uniform `u`.
    pub fn heat_bath_step(&mut self, edge: usize, u: f64) {
        let prob = self.query.open_probability(&self.config, &self.region, &self.params, edge);
        self.config.set(edge, u < prob);
    }

    /// One heat-bath update of every edge, in a fresh random order.
    pub fn heat_bath_sweep(&mut self) {
        self.order.shuffle(&mut self.rng);
        for i in 0..self.order.len() {
            let e = self.order[i];
            let u = self.rng.gen::<f64>();
            self.heat_bath_step(e, u);
        }
        self.sweep_count += 1;
    }

    /// One Swendsen–Wang update: color the wired clusters, then redraw bonds.
    pub fn es_sweep(&mut self) -> Result<()> {
        let q = es_q(&self.params)?;
        let partition = clusters(&self.config, &self.region, Some(&self.bc))?;
        let colors: Vec<u32> = (0..partition.count()).map(|_| self.rng.gen_range(1..=q)).collect();
        for (e, &(u, v)) in self.region.edges().iter().enumerate() {
            let same = colors[partition.label(u)] == colors[partition.label(v)];
            let open = same && self.rng.gen::<f64>() < self.params.edge_p(e);
            self.config.set(e, open);
        }
        self.sweep_count += 1;
        Ok(())
    }

    pub fn sweep(&mut self, algorithm: Algorithm) -> Result<()> {
        match algorithm {
            Algorithm::Heatbath => self.heat_bath_sweep(),
            Algorithm::Es => self.es_sweep()?,
        }
        Ok(())
    }
}

fn es_q(params: &RcParams) -> Result<u32> {
    params
        .integer_q()
        .ok_or_else(|| Error::InvalidParameter(format!("cluster updates need integer q, got {}", params.q)))
}

/// Runs `sweeps` heat-bath sweeps from the all-closed configuration.
pub fn glauber_run(region: Arc<Region>, params: RcParams, bc: BoundaryCondition, sweeps: u64, seed: u64) -> Result<ChainState> {
    let mut state = ChainState::new(region, params, bc, replica_rng(seed, 0))?;
    for _ in 0..sweeps {
        state.heat_bath_sweep();
    }
    Ok(state)
}

/// Potts spins with colors in `1..=q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinConfig {
    pub colors: Vec<u32>,
    pub q: u32,
}

impl SpinConfig {
    pub fn new(colors: Vec<u32>, q: u32) -> Result<Self> {
        if let Some(c) = colors.iter().find(|&&c| c == 0 || c > q) {
            return Err(Error::InvalidParameter(format!("color {c} outside 1..={q}")));
        }
        Ok(Self { colors, q })
    }
}

/// Colors every open cluster (boundary wiring ignored) uniformly at random.
pub fn es_color_with<R: Rng + ?Sized>(config: &Configuration, region: &Region, q: u32, rng: &mut R) -> Result<SpinConfig> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("Potts spins need q >= 2, got {q}")));
    }
    let partition = clusters(config, region, None)?;
    let cluster_colors: Vec<u32> = (0..partition.count()).map(|_| rng.gen_range(1..=q)).collect();
    let colors = (0..region.num_vertices()).map(|v| cluster_colors[partition.label(v)]).collect();
    Ok(SpinConfig { colors, q })
}

pub fn es_color(config: &Configuration, region: &Region, q: u32, seed: u64) -> Result<SpinConfig> {
    es_color_with(config, region, q, &mut replica_rng(seed, 0))
}

/// Opens each edge with equal endpoint colors independently with its edge
/// weight; edges between different colors stay closed.
pub fn es_bond_with<R: Rng + ?Sized>(spins: &SpinConfig, region: &Region, params: &RcParams, rng: &mut R) -> Result<Configuration> {
    if spins.colors.len() != region.num_vertices() {
        return Err(Error::SizeMismatch { expected: region.num_vertices(), got: spins.colors.len() });
    }
    params.check_region(region)?;
    let mut config = Configuration::all_closed(region.num_edges());
    for (e, &(u, v)) in region.edges().iter().enumerate() {
        if spins.colors[u] == spins.colors[v] && rng.gen::<f64>() < params.edge_p(e) {
            config.set(e, true);
        }
    }
    Ok(config)
}

pub fn es_bond(spins: &SpinConfig, region: &Region, params: &RcParams, seed: u64) -> Result<Configuration> {
    es_bond_with(spins, region, params, &mut replica_rng(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{distribution, weight};
    use crate::lattice::{build_region, LatticeSpec};
    use approx::assert_relative_eq;

    fn single_edge() -> Arc<Region> {
        Arc::new(Region::from_graph(vec![[0.0, 0.0], [1.0, 0.0]], vec![(0, 1)]).unwrap())
    }

    fn hp(p: f64, q: f64) -> RcParams {
        RcParams::homogeneous(p, q).unwrap()
    }

    #[test]
    fn heat_bath_probabilities() {
        let r = single_edge();
        let closed = Configuration::all_closed(1);
        let free = BoundaryCondition::free(&r);
        assert_relative_eq!(heat_bath_open_probability(&closed, &r, &hp(0.5, 2.0), &free, 0), 1.0 / 3.0);
        assert_eq!(heat_bath_open_probability(&closed, &r, &hp(0.3, 1.0), &free, 0), 0.3);
        let wired = BoundaryCondition::wired(&r);
        assert_eq!(heat_bath_open_probability(&closed, &r, &hp(0.5, 2.0), &wired, 0), 0.5);
    }

    #[test]
    fn detailed_balance_is_exact() {
        let region = build_region(&LatticeSpec::Square, 0.0, 2.0, 0.0, 1.0).unwrap();
        let m = region.num_edges();
        for bc in [BoundaryCondition::free(&region), BoundaryCondition::wired(&region)] {
            for params in [hp(0.3, 2.0), hp(0.7, 4.0), hp(0.5, 1.5)] {
                for mask in 0..1u64 << m {
                    for e in 0..m {
                        if mask >> e & 1 == 1 {
                            continue;
                        }
                        let closed = Configuration::from_mask(mask, m);
                        let open = Configuration::from_mask(mask | 1 << e, m);
                        let up = heat_bath_open_probability(&closed, &region, &params, &bc, e);
                        let down = 1.0 - heat_bath_open_probability(&open, &region, &params, &bc, e);
                        let lhs = weight(&closed, &region, &params, &bc).unwrap() * up;
                        let rhs = weight(&open, &region, &params, &bc).unwrap() * down;
                        assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(rhs).max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn zero_sweeps_is_the_initial_state() {
        let r = single_edge();
        let s = glauber_run(r.clone(), hp(0.5, 2.0), BoundaryCondition::free(&r), 0, 1).unwrap();
        assert_eq!(s.config, Configuration::all_closed(1));
        assert_eq!(s.sweep_count(), 0);
    }

    #[test]
    fn same_seed_same_trajectory() {
        let region = Arc::new(build_region(&LatticeSpec::Square, 0.0, 4.0, 0.0, 4.0).unwrap());
        let bc = BoundaryCondition::free(&region);
        let a = glauber_run(region.clone(), hp(0.55, 2.0), bc.clone(), 50, 9).unwrap();
        let b = glauber_run(region.clone(), hp(0.55, 2.0), bc.clone(), 50, 9).unwrap();
        let c = glauber_run(region, hp(0.55, 2.0), bc, 50, 10).unwrap();
        assert_eq!(a.config, b.config);
        assert_ne!(a.config, c.config);
    }

    #[test]
    fn single_edge_frequency() {
        let r = single_edge();
        let mut s = ChainState::new(r.clone(), hp(0.5, 2.0), BoundaryCondition::free(&r), replica_rng(3, 0)).unwrap();
        let n = 100_000;
        let mut open = 0;
        for _ in 0..n {
            s.heat_bath_sweep();
            open += s.config.get(0) as u32;
        }
        let freq = open as f64 / n as f64;
        let sigma = (1.0 / 3.0 * 2.0 / 3.0 / n as f64).sqrt();
        assert!((freq - 1.0 / 3.0).abs() < 3.0 * sigma, "{freq}");
    }

    #[test]
    fn es_color_extremes() {
        let region = build_region(&LatticeSpec::Square, 0.0, 2.0, 0.0, 2.0).unwrap();
        let spins = es_color(&Configuration::all_open(region.num_edges()), &region, 3, 4).unwrap();
        assert!(spins.colors.iter().all(|&c| c == spins.colors[0]));
        let mut counts = [0usize; 3];
        for seed in 0..2000 {
            let spins = es_color(&Configuration::all_closed(region.num_edges()), &region, 3, seed).unwrap();
            spins.colors.iter().for_each(|&c| counts[c as usize - 1] += 1);
        }
        let total = (2000 * region.num_vertices()) as f64;
        for c in counts {
            assert!((c as f64 / total - 1.0 / 3.0).abs() < 0.02);
        }
        assert!(es_color(&Configuration::all_open(region.num_edges()), &region, 1, 0).is_err());
    }

    #[test]
    fn es_bond_extremes() {
        let region = build_region(&LatticeSpec::Square, 0.0, 2.0, 0.0, 2.0).unwrap();
        let constant = SpinConfig::new(vec![2; region.num_vertices()], 3).unwrap();
        assert_eq!(es_bond(&constant, &region, &hp(1.0, 3.0), 0).unwrap().open_count(), region.num_edges());
        assert_eq!(es_bond(&constant, &region, &hp(0.0, 3.0), 0).unwrap().open_count(), 0);
        assert!(SpinConfig::new(vec![0, 1], 2).is_err());
    }

    #[test]
    fn es_chain_matches_enumeration() {
        let region = Arc::new(build_region(&LatticeSpec::Square, 0.0, 2.0, 0.0, 1.0).unwrap());
        let m = region.num_edges();
        for bc in [BoundaryCondition::free(&region), BoundaryCondition::wired(&region)] {
            let params = hp(0.5, 2.0);
            let exact = distribution(&region, &params, &bc).unwrap();
            let mut s = ChainState::new(region.clone(), params, bc, replica_rng(11, 0)).unwrap();
            let n = 1_000_000;
            let mut counts = vec![0u32; 1 << m];
            for _ in 0..n {
                s.es_sweep().unwrap();
                counts[s.config.to_mask().unwrap() as usize] += 1;
            }
            let tv: f64 = counts.iter().zip(&exact).map(|(&c, &x)| (c as f64 / n as f64 - x).abs()).sum::<f64>() / 2.0;
            assert!(tv < 0.01, "tv {tv}");
        }
    }

    #[test]
    fn es_requires_integer_q() {
        let r = single_edge();
        let mut s = ChainState::new(r.clone(), hp(0.5, 1.5), BoundaryCondition::free(&r), replica_rng(0, 0)).unwrap();
        assert!(s.es_sweep().is_err());
    }
}
