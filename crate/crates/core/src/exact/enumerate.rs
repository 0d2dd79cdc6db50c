//! Exhaustive sweep over all 2^|E| configurations of a small region.

use rayon::prelude::*;

use crate::boundary::BoundaryCondition;
use crate::error::{Error, Result};
use crate::lattice::Region;

use super::params::{EdgeWeights, RcParams};
use super::sum::Merge;

/// Largest edge count accepted by exhaustive enumeration.
pub const EDGE_CAP: usize = 24;

/// Configurations per work unit; fixed so results do not depend on the
/// number of worker threads.
const LEAF_BITS: usize = 12;

/// Random-cluster weights of every configuration of one region.
pub(crate) struct Enumerator<'a> {
    region: &'a Region,
    m: usize,
    /// vertex -> representative after boundary wiring
    base: Vec<u16>,
    base_components: usize,
    open_pow: Vec<f64>,
    q_pow: Vec<f64>,
    edge_factor: Option<Vec<f64>>,
}

impl<'a> Enumerator<'a> {
    pub fn new(region: &'a Region, params: &RcParams, bc: &BoundaryCondition) -> Result<Self> {
        let m = region.num_edges();
        if m > EDGE_CAP {
            return Err(Error::Capacity { size: m as u64, cap: EDGE_CAP as u64 });
        }
        if region.num_vertices() > u16::MAX as usize {
            return Err(Error::Capacity { size: region.num_vertices() as u64, cap: u16::MAX as u64 });
        }
        params.check_region(region)?;
        bc.validate(region)?;
        let n = region.num_vertices();
        let mut base: Vec<u16> = (0..n as u16).collect();
        let mut base_components = n;
        for block in bc.wirings() {
            let root = block[0] as u16;
            for &v in &block[1..] {
                base[v] = root;
                base_components -= 1;
            }
        }
        let q_pow = (0..=n).map(|k| params.q.powi(k as i32)).collect();
        let (open_pow, edge_factor) = match &params.edges {
            EdgeWeights::Homogeneous { p } => {
                let pow = (0..=m).map(|o| p.powi(o as i32) * (1.0 - p).powi((m - o) as i32)).collect();
                (pow, None)
            }
            EdgeWeights::Weighted { beta, couplings } => {
                let f = couplings.iter().map(|j| (beta * j).exp_m1()).collect();
                (Vec::new(), Some(f))
            }
        };
        Ok(Self { region, m, base, base_components, open_pow, q_pow, edge_factor })
    }

    pub fn num_edges(&self) -> usize {
        self.m
    }

    /// k(ω^ξ) for the configuration packed in `mask`.
    #[inline]
    pub fn cluster_count(&self, mask: u64, scratch: &mut Vec<u16>) -> usize {
        scratch.clear();
        scratch.extend_from_slice(&self.base);
        let find = |s: &mut Vec<u16>, mut x: usize| {
            while s[x] as usize != x {
                let g = s[s[x] as usize];
                s[x] = g;
                x = g as usize;
            }
            x
        };
        let mut k = self.base_components;
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (u, v) = self.region.edge(e);
            let (ru, rv) = (find(scratch, u), find(scratch, v));
            if ru != rv {
                scratch[ru.max(rv)] = ru.min(rv) as u16;
                k -= 1;
            }
        }
        k
    }

    #[inline]
    pub fn weight(&self, mask: u64, scratch: &mut Vec<u16>) -> f64 {
        let k = self.cluster_count(mask, scratch);
        let edge_part = match &self.edge_factor {
            None => self.open_pow[mask.count_ones() as usize],
            Some(f) => {
                let mut w = 1.0;
                let mut bits = mask;
                while bits != 0 {
                    w *= f[bits.trailing_zeros() as usize];
                    bits &= bits - 1;
                }
                w
            }
        };
        edge_part * self.q_pow[k]
    }

    /// Visits every configuration with its weight. Work is split into
    /// fixed-size leaves whose partial results are merged in index order.
    pub fn fold<A, I, F>(&self, init: I, visit: F) -> A
    where
        A: Merge + Send,
        I: Fn() -> A + Sync,
        F: Fn(&mut A, u64, f64) + Sync,
    {
        let total: u64 = 1 << self.m;
        let leaf: u64 = 1 << LEAF_BITS.min(self.m);
        let leaves = total / leaf;
        let partials: Vec<A> = (0..leaves)
            .into_par_iter()
            .map(|l| {
                let mut acc = init();
                let mut scratch = Vec::with_capacity(self.base.len());
                for mask in l * leaf..(l + 1) * leaf {
                    let w = self.weight(mask, &mut scratch);
                    visit(&mut acc, mask, w);
                }
                acc
            })
            .collect();
        let mut iter = partials.into_iter();
        let mut acc = iter.next().unwrap_or_else(&init);
        for part in iter {
            acc.merge(part);
        }
        acc
    }
}
