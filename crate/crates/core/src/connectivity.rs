//! Clusters, crossings, dual configurations and Hamming distances to
//! crossing events.

use std::collections::{BTreeSet, VecDeque};

use crate::boundary::BoundaryCondition;
use crate::configuration::{Configuration, EdgeStates};
use crate::error::{Error, Result};
use crate::lattice::{BBox, Direction, DualMap, Region, Side};
use crate::unionfind::DisjointSets;

/// Open clusters of a configuration, optionally merged through boundary wiring.
#[derive(Clone, Debug)]
pub struct ClusterPartition {
    sets: DisjointSets,
    label: Vec<usize>,
    sizes: Vec<usize>,
    bboxes: Vec<BBox>,
}

impl ClusterPartition {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    /// Dense cluster index of vertex `v`.
    pub fn label(&self, v: usize) -> usize {
        self.label[v]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size_of(&self, v: usize) -> usize {
        self.sizes[self.label[v]]
    }

    pub fn bbox(&self, cluster: usize) -> BBox {
        self.bboxes[cluster]
    }

    pub fn connected(&self, u: usize, v: usize) -> bool {
        self.label[u] == self.label[v]
    }

    /// Largest Chebyshev distance from `v` to a vertex of its cluster,
    /// read off the cluster's bounding box.
    pub fn radius_from(&self, region: &Region, v: usize) -> f64 {
        let b = self.bboxes[self.label[v]];
        let p = region.position(v);
        (p[0] - b.a).max(b.b - p[0]).max(p[1] - b.c).max(b.d - p[1])
    }

    pub fn disjoint_sets(&self) -> &DisjointSets {
        &self.sets
    }
}

fn union_open<S: EdgeStates + ?Sized>(config: &S, region: &Region, sets: &mut DisjointSets) {
    for (e, &(u, v)) in region.edges().iter().enumerate() {
        if config.is_open(e) {
            sets.union(u, v);
        }
    }
}

/// Union-find over open edges, then over the blocks of `bc` if given.
pub fn clusters<S: EdgeStates + ?Sized>(
    config: &S,
    region: &Region,
    bc: Option<&BoundaryCondition>,
) -> Result<ClusterPartition> {
    if config.num_edges() != region.num_edges() {
        return Err(Error::SizeMismatch { expected: region.num_edges(), got: config.num_edges() });
    }
    let n = region.num_vertices();
    let mut sets = DisjointSets::new(n);
    union_open(config, region, &mut sets);
    if let Some(bc) = bc {
        for block in bc.wirings() {
            for w in block.windows(2) {
                sets.union(w[0], w[1]);
            }
        }
    }
    let mut root_label = vec![usize::MAX; n];
    let mut label = vec![0; n];
    let mut sizes = Vec::new();
    let mut bboxes: Vec<BBox> = Vec::new();
    for (v, slot) in label.iter_mut().enumerate() {
        let r = sets.find(v);
        if root_label[r] == usize::MAX {
            root_label[r] = sizes.len();
            sizes.push(0);
            let p = region.position(v);
            bboxes.push(BBox { a: p[0], b: p[0], c: p[1], d: p[1] });
        }
        let l = root_label[r];
        *slot = l;
        sizes[l] += 1;
        let p = region.position(v);
        let b = &mut bboxes[l];
        b.a = b.a.min(p[0]);
        b.b = b.b.max(p[0]);
        b.c = b.c.min(p[1]);
        b.d = b.d.max(p[1]);
    }
    Ok(ClusterPartition { sets, label, sizes, bboxes })
}

fn sides_for(region: &Region, direction: Direction) -> Result<(&[usize], &[usize])> {
    let (s, t) = direction.sides();
    let (from, to) = (region.side(s), region.side(t));
    if from.is_empty() || to.is_empty() {
        return Err(Error::EmptySide(direction.label()));
    }
    Ok((from, to))
}

/// Whether an open path joins the two opposite sides.
pub fn crossing<S: EdgeStates + ?Sized>(config: &S, region: &Region, direction: Direction) -> Result<bool> {
    let (from, to) = sides_for(region, direction)?;
    let n = region.num_vertices();
    // two virtual terminals n and n+1
    let mut sets = DisjointSets::new(n + 2);
    for &v in from {
        sets.union(n, v);
    }
    for &v in to {
        sets.union(n + 1, v);
    }
    union_open(config, region, &mut sets);
    Ok(sets.same(n, n + 1))
}

/// Minimal number of closed edges that must be opened to create a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HammingDistance {
    Finite(u32),
    /// The sides are not joined even by the all-open configuration.
    Infinite,
}

impl HammingDistance {
    pub fn finite(self) -> Option<u32> {
        match self {
            HammingDistance::Finite(d) => Some(d),
            HammingDistance::Infinite => None,
        }
    }
}

/// 0-1 breadth-first search between virtual side terminals: open edges
/// cost 0, closed edges cost 1.
pub fn hamming_to_crossing<S: EdgeStates + ?Sized>(
    config: &S,
    region: &Region,
    direction: Direction,
) -> Result<HammingDistance> {
    let (from, to) = sides_for(region, direction)?;
    let n = region.num_vertices();
    let mut is_target = vec![false; n];
    for &v in to {
        is_target[v] = true;
    }
    let mut dist = vec![u32::MAX; n];
    let mut deque = VecDeque::with_capacity(n);
    for &v in from {
        dist[v] = 0;
        deque.push_back(v);
    }
    while let Some(u) = deque.pop_front() {
        if is_target[u] {
            return Ok(HammingDistance::Finite(dist[u]));
        }
        for &(w, e) in region.neighbors(u) {
            let cost = u32::from(!config.is_open(e));
            let cand = dist[u] + cost;
            if cand < dist[w] {
                dist[w] = cand;
                if cost == 0 {
                    deque.push_front(w);
                } else {
                    deque.push_back(w);
                }
            }
        }
    }
    Ok(HammingDistance::Infinite)
}

/// Number of distinct clusters of the region containing a crossing.
pub fn count_separated_crossings<S: EdgeStates + ?Sized>(
    config: &S,
    region: &Region,
    direction: Direction,
) -> Result<usize> {
    let (from, to) = sides_for(region, direction)?;
    let part = clusters(config, region, None)?;
    let mut touches_from = vec![false; part.count()];
    for &v in from {
        touches_from[part.label(v)] = true;
    }
    let mut crossing: BTreeSet<usize> = BTreeSet::new();
    for &v in to {
        let l = part.label(v);
        if touches_from[l] {
            crossing.insert(l);
        }
    }
    Ok(crossing.len())
}

/// Size, Chebyshev radius and touched sides of one vertex's open cluster.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterStats {
    pub size: usize,
    pub radius: usize,
    pub touches: BTreeSet<Side>,
}

pub fn cluster_stats<S: EdgeStates + ?Sized>(config: &S, region: &Region, origin: usize) -> Result<ClusterStats> {
    if origin >= region.num_vertices() {
        return Err(Error::InvalidParameter(format!("vertex {origin} is not in the region")));
    }
    let part = clusters(config, region, None)?;
    let l = part.label(origin);
    let radius = (part.radius_from(region, origin) + 1e-9).floor() as usize;
    let touches = Side::ALL
        .into_iter()
        .filter(|&s| region.side(s).iter().any(|&v| part.label(v) == l))
        .collect();
    Ok(ClusterStats { size: part.sizes()[l], radius, touches })
}

/// ω*(e*) = 1 - ω(e).
pub fn dual_config(config: &Configuration, dual: &DualMap) -> Result<Configuration> {
    config.check_len(dual.dual().num_edges())?;
    let mut out = Configuration::all_closed(config.len());
    for (e, es) in dual.edge_pairs() {
        out.set(es, !config.get(e));
    }
    Ok(out)
}

/// Inverse of [`dual_config`].
pub fn primal_config(dual_config: &Configuration, dual: &DualMap) -> Result<Configuration> {
    dual_config.check_len(dual.dual().num_edges())?;
    let mut out = Configuration::all_closed(dual_config.len());
    for (e, es) in dual.edge_pairs() {
        out.set(e, !dual_config.get(es));
    }
    Ok(out)
}

/// Dual crossing between two outer arcs of a rectangle: the outer vertex is
/// split into one terminal per primal side, and dual edges ending on the
/// arcs of the other two sides are ignored.
pub fn dual_crossing<S: EdgeStates + ?Sized>(dual_config: &S, dual: &DualMap, direction: Direction) -> Result<bool> {
    let region = dual.dual();
    if dual_config.num_edges() != region.num_edges() {
        return Err(Error::SizeMismatch { expected: region.num_edges(), got: dual_config.num_edges() });
    }
    let (s, t) = direction.sides();
    let n = region.num_vertices();
    let (src, dst) = (n, n + 1);
    let mut sets = DisjointSets::new(n + 2);
    let outer = dual.outer();
    for (e, &(a, b)) in region.edges().iter().enumerate() {
        if !dual_config.is_open(e) {
            continue;
        }
        match (a == outer, b == outer) {
            (false, false) => {
                sets.union(a, b);
            }
            (true, true) => {}
            _ => {
                let inner = if a == outer { b } else { a };
                match dual.outer_arc(e) {
                    Some(side) if side == s => {
                        sets.union(src, inner);
                    }
                    Some(side) if side == t => {
                        sets.union(dst, inner);
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(sets.same(src, dst))
}
