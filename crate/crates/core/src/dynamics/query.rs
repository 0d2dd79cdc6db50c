//! Point-to-point connectivity queries with one edge removed.

use crate::boundary::BoundaryCondition;
use crate::configuration::EdgeStates;
use crate::lattice::Region;

const NO_BLOCK: u32 = u32::MAX;

/// Boundary wiring as virtual hub vertices, one per non-singleton block.
#[derive(Clone, Debug)]
pub(crate) struct Wiring {
    block_of: Vec<u32>,
    blocks: Vec<Vec<usize>>,
}

impl Wiring {
    pub fn new(region: &Region, bc: &BoundaryCondition) -> Self {
        let mut block_of = vec![NO_BLOCK; region.num_vertices()];
        let blocks: Vec<Vec<usize>> = bc.wirings().map(<[usize]>::to_vec).collect();
        for (b, block) in blocks.iter().enumerate() {
            for &v in block {
                block_of[v] = b as u32;
            }
        }
        Self { block_of, blocks }
    }

    fn nodes(&self) -> usize {
        self.block_of.len() + self.blocks.len()
    }
}

/// Bidirectional search that alternates between the two endpoints and stops
/// as soon as either side is exhausted, so its cost is bounded by the
/// smaller of the two clusters.
#[derive(Clone, Debug)]
pub(crate) struct PathQuery {
    wiring: Wiring,
    mark: Vec<u32>,
    stamp: u32,
    queues: [Vec<usize>; 2],
    heads: [usize; 2],
}

impl PathQuery {
    pub fn new(region: &Region, bc: &BoundaryCondition) -> Self {
        let wiring = Wiring::new(region, bc);
        let mark = vec![0; wiring.nodes()];
        Self { wiring, mark, stamp: 0, queues: [Vec::new(), Vec::new()], heads: [0, 0] }
    }

    /// Are the endpoints of `skip` joined in the wired configuration with
    /// `skip` itself removed?
    pub fn endpoints_connected<S: EdgeStates + ?Sized>(&mut self, config: &S, region: &Region, skip: usize) -> bool {
        let (a, b) = region.edge(skip);
        self.connected(config, region, a, b, Some(skip))
    }

    pub fn connected<S: EdgeStates + ?Sized>(
        &mut self,
        config: &S,
        region: &Region,
        a: usize,
        b: usize,
        skip: Option<usize>,
    ) -> bool {
        if a == b {
            return true;
        }
        if self.stamp >= u32::MAX - 2 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 0;
        }
        self.stamp += 2;
        let own = [self.stamp, self.stamp + 1];
        let n = region.num_vertices();
        for side in 0..2 {
            self.queues[side].clear();
            self.heads[side] = 0;
        }
        self.mark[a] = own[0];
        self.mark[b] = own[1];
        self.queues[0].push(a);
        self.queues[1].push(b);
        loop {
            let pending = [self.queues[0].len() - self.heads[0], self.queues[1].len() - self.heads[1]];
            if pending[0] == 0 || pending[1] == 0 {
                return false;
            }
            let side = usize::from(pending[1] < pending[0]);
            let x = self.queues[side][self.heads[side]];
            self.heads[side] += 1;
            let (me, other) = (own[side], own[1 - side]);
            if x >= n {
                for i in 0..self.wiring.blocks[x - n].len() {
                    let y = self.wiring.blocks[x - n][i];
                    if self.visit(y, me, other, side) {
                        return true;
                    }
                }
                continue;
            }
            for &(y, e) in region.neighbors(x) {
                if Some(e) != skip && config.is_open(e) && self.visit(y, me, other, side) {
                    return true;
                }
            }
            let block = self.wiring.block_of[x];
            if block != NO_BLOCK && self.visit(n + block as usize, me, other, side) {
                return true;
            }
        }
    }

    #[inline]
    fn visit(&mut self, y: usize, me: u32, other: u32, side: usize) -> bool {
        if self.mark[y] == other {
            return true;
        }
        if self.mark[y] != me {
            self.mark[y] = me;
            self.queues[side].push(y);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configuration::Configuration;
    use crate::connectivity::clusters;
    use crate::lattice::{build_region, LatticeSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_union_find() {
        let region = build_region(&LatticeSpec::Triangular, 0.0, 4.0, 0.0, 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for bc in [BoundaryCondition::free(&region), BoundaryCondition::wired(&region)] {
            let mut query = PathQuery::new(&region, &bc);
            for _ in 0..200 {
                let p = rng.gen_range(0.1..0.7);
                let config = Configuration::random(region.num_edges(), p, &mut rng);
                let e = rng.gen_range(0..region.num_edges());
                let mut without = config.clone();
                without.set(e, false);
                let (a, b) = region.edge(e);
                let expected = clusters(&without, &region, Some(&bc)).unwrap().connected(a, b);
                assert_eq!(query.endpoints_connected(&config, &region, e), expected);
            }
        }
    }
}
