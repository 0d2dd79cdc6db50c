//! Planar dual of a region by face tracing on its rotation system.

use crate::error::{Error, Result};

use super::{order_key, Point, Region, Side};

/// A region's planar dual together with the edge bijection e <-> e*.
///
/// Bounded faces become dual vertices placed at their barycenters; the
/// outer face becomes the single vertex [`DualMap::outer`], which is also
/// the whole boundary of the dual region.
#[derive(Clone, Debug)]
pub struct DualMap {
    dual: Region,
    primal_to_dual: Vec<usize>,
    dual_to_primal: Vec<usize>,
    outer: usize,
    outer_arc: Vec<Option<Side>>,
    faces: Vec<Vec<usize>>,
}

impl DualMap {
    pub fn dual(&self) -> &Region {
        &self.dual
    }

    pub fn dual_edge(&self, primal_edge: usize) -> usize {
        self.primal_to_dual[primal_edge]
    }

    pub fn primal_edge(&self, dual_edge: usize) -> usize {
        self.dual_to_primal[dual_edge]
    }

    pub fn edge_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.primal_to_dual.iter().copied().enumerate()
    }

    pub fn outer(&self) -> usize {
        self.outer
    }

    pub fn num_bounded_faces(&self) -> usize {
        self.dual.num_vertices() - 1
    }

    /// Primal vertex cycle of the face represented by dual vertex `v`.
    pub fn face(&self, v: usize) -> &[usize] {
        &self.faces[v]
    }

    /// For a dual edge ending at the outer vertex, the primal side its
    /// primal edge runs along.
    pub fn outer_arc(&self, dual_edge: usize) -> Option<Side> {
        self.outer_arc[dual_edge]
    }
}

/// Traces the faces of `region` and builds its dual.
pub fn dual_region(region: &Region) -> Result<DualMap> {
    let n = region.num_vertices();
    let m = region.num_edges();
    if !region.is_connected() {
        return Err(Error::Disconnected);
    }
    let origin = |h: usize| if h.is_multiple_of(2) { region.edge(h / 2).0 } else { region.edge(h / 2).1 };
    let target = |h: usize| origin(h ^ 1);

    // rotation system: outgoing half-edges by angle
    let mut rotation: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
    for h in 0..2 * m {
        let (a, b) = (region.position(origin(h)), region.position(target(h)));
        rotation[origin(h)].push(((b[1] - a[1]).atan2(b[0] - a[0]), h));
    }
    let mut slot = vec![0usize; 2 * m];
    for (v, rot) in rotation.iter_mut().enumerate() {
        rot.sort_by(|x, y| x.0.total_cmp(&y.0));
        for k in 0..rot.len() {
            let gap = if k + 1 < rot.len() {
                rot[k + 1].0 - rot[k].0
            } else {
                rot[0].0 + std::f64::consts::TAU - rot[k].0
            };
            if rot.len() > 1 && gap <= 1e-9 {
                return Err(Error::Embedding(format!("coincident edge angles at vertex {v}")));
            }
            slot[rot[k].1] = k;
        }
    }
    let next = |h: usize| {
        let twin = h ^ 1;
        let rot = &rotation[origin(twin)];
        rot[(slot[twin] + 1) % rot.len()].1
    };

    let mut face_of = vec![usize::MAX; 2 * m];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..2 * m {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut cycle = Vec::new();
        let mut h = start;
        while face_of[h] == usize::MAX {
            face_of[h] = id;
            cycle.push(h);
            h = next(h);
        }
        if h != start {
            return Err(Error::Embedding("face tracing did not close".into()));
        }
        cycles.push(cycle);
    }
    let num_faces = cycles.len();
    if n as i64 - m as i64 + num_faces as i64 != 2 {
        return Err(Error::Embedding(format!(
            "Euler check failed: V - E + F = {} - {} + {}",
            n, m, num_faces
        )));
    }
    if num_faces < 2 {
        return Err(Error::NoBoundedFace);
    }

    let area = |cycle: &[usize]| {
        cycle
            .iter()
            .map(|&h| {
                let (a, b) = (region.position(origin(h)), region.position(target(h)));
                a[0] * b[1] - b[0] * a[1]
            })
            .sum::<f64>()
            / 2.0
    };
    let areas: Vec<f64> = cycles.iter().map(|c| area(c)).collect();
    // bounded faces are traced clockwise, so the outer face is the only positive one
    let outer_face = (0..num_faces).max_by(|&x, &y| areas[x].total_cmp(&areas[y])).expect("at least two faces");

    // bounded faces ordered by barycenter, outer vertex last
    let mut bounded: Vec<(usize, Point, Vec<usize>)> = Vec::new();
    for (f, cycle) in cycles.iter().enumerate() {
        if f == outer_face {
            continue;
        }
        let mut verts: Vec<usize> = cycle.iter().map(|&h| origin(h)).collect();
        let centre = {
            let mut distinct = verts.clone();
            distinct.sort_unstable();
            distinct.dedup();
            let k = distinct.len() as f64;
            let sx: f64 = distinct.iter().map(|&v| region.position(v)[0]).sum();
            let sy: f64 = distinct.iter().map(|&v| region.position(v)[1]).sum();
            [sx / k, sy / k]
        };
        verts.dedup();
        bounded.push((f, centre, verts));
    }
    bounded.sort_by_key(|&(_, c, _)| order_key(c));

    let mut dual_vertex_of_face = vec![0usize; num_faces];
    let mut positions = Vec::with_capacity(num_faces);
    let mut faces = Vec::with_capacity(num_faces);
    for (k, (f, centre, verts)) in bounded.into_iter().enumerate() {
        dual_vertex_of_face[f] = k;
        positions.push(centre);
        faces.push(verts);
    }
    let outer = positions.len();
    dual_vertex_of_face[outer_face] = outer;
    let bbox = region.bbox();
    let reach = (0..m).map(|e| region.edge_length(e)).fold(0.0, f64::max);
    positions.push([(bbox.a + bbox.b) / 2.0, bbox.d + reach]);
    faces.push(cycles[outer_face].iter().map(|&h| origin(h)).collect());

    let mut dual_edges = Vec::with_capacity(m);
    let mut outer_arc = Vec::with_capacity(m);
    for e in 0..m {
        let (f1, f2) = (dual_vertex_of_face[face_of[2 * e]], dual_vertex_of_face[face_of[2 * e + 1]]);
        dual_edges.push((f1.min(f2), f1.max(f2)));
        outer_arc.push(if f1 == outer || f2 == outer { arc_side(region, e) } else { None });
    }

    let dual = Region::from_parts(positions, dual_edges, vec![outer], None)?;
    Ok(DualMap {
        dual,
        primal_to_dual: (0..m).collect(),
        dual_to_primal: (0..m).collect(),
        outer,
        outer_arc,
        faces,
    })
}

/// Side whose set contains both endpoints of `e`; ties go to the side whose
/// line is parallel to the edge.
fn arc_side(region: &Region, e: usize) -> Option<Side> {
    let (u, v) = region.edge(e);
    let (pu, pv) = (region.position(u), region.position(v));
    let horizontal = (pv[0] - pu[0]).abs() >= (pv[1] - pu[1]).abs();
    let candidates: Vec<Side> = Side::ALL
        .into_iter()
        .filter(|&s| region.side(s).contains(&u) && region.side(s).contains(&v))
        .collect();
    candidates
        .iter()
        .copied()
        .find(|s| matches!(s, Side::Bottom | Side::Top) == horizontal)
        .or_else(|| candidates.first().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_region, segments_intersect, LatticeSpec};

    #[test]
    fn unit_square_dual() {
        let r = build_region(&LatticeSpec::Square, 0.0, 1.0, 0.0, 1.0).unwrap();
        let d = dual_region(&r).unwrap();
        assert_eq!(d.dual().num_vertices(), 2);
        assert_eq!(d.num_bounded_faces(), 1);
        assert_eq!(d.dual().num_edges(), 4);
        for e in 0..4 {
            assert_eq!(d.dual().edge(e), (0, 1));
        }
        assert_eq!(d.face(0).len(), 4);
    }

    #[test]
    fn two_by_one_euler() {
        let r = build_region(&LatticeSpec::Square, 0.0, 2.0, 0.0, 1.0).unwrap();
        let d = dual_region(&r).unwrap();
        assert_eq!(d.num_bounded_faces(), 2);
        let f = d.dual().num_vertices() as i64;
        assert_eq!(6 - 7 + f, 2);
        // the middle edge separates the two bounded faces
        let inner: Vec<_> = (0..7).filter(|&e| d.outer_arc(e).is_none()).collect();
        assert_eq!(inner.len(), 1);
        assert_eq!(r.edge(inner[0]), (2, 3));
    }

    #[test]
    fn three_by_three_grid_dual() {
        // 3x3 vertex grid: four unit squares
        let r = build_region(&LatticeSpec::Square, 0.0, 2.0, 0.0, 2.0).unwrap();
        let d = dual_region(&r).unwrap();
        let cycle_space = r.num_edges() - r.num_vertices() + 1;
        assert_eq!(d.num_bounded_faces(), cycle_space);
        assert_eq!(d.num_bounded_faces(), 4);
        let inner: Vec<(usize, usize)> = d
            .dual()
            .edges()
            .iter()
            .copied()
            .filter(|&(a, b)| a != d.outer() && b != d.outer())
            .collect();
        // bounded part of the dual is the 2x2 grid: 4 vertices, 4 edges, a cycle
        assert_eq!(inner.len(), 4);
        let mut degree = [0; 4];
        for (a, b) in inner {
            degree[a] += 1;
            degree[b] += 1;
        }
        assert_eq!(degree, [2, 2, 2, 2]);
    }

    #[test]
    fn dual_edges_cross_primal_edges() {
        let r = build_region(&LatticeSpec::Square, 0.0, 4.0, 0.0, 3.0).unwrap();
        let d = dual_region(&r).unwrap();
        for (e, es) in d.edge_pairs() {
            let (a, b) = d.dual().edge(es);
            if a == d.outer() || b == d.outer() {
                assert!(d.outer_arc(es).is_some());
                continue;
            }
            let (u, v) = r.edge(e);
            assert!(segments_intersect(
                r.position(u),
                r.position(v),
                d.dual().position(a),
                d.dual().position(b)
            ));
        }
    }

    #[test]
    fn euler_on_builtin_lattices() {
        for lattice in [LatticeSpec::Square, LatticeSpec::Triangular, LatticeSpec::Hexagonal] {
            for (a, b, c, d) in [(0.0, 3.0, 0.0, 3.0), (-1.0, 4.5, 0.0, 2.5), (0.0, 6.0, 0.0, 5.0)] {
                let r = build_region(&lattice, a, b, c, d).unwrap();
                if !r.is_connected() || r.num_edges() < r.num_vertices() {
                    continue;
                }
                let dm = dual_region(&r).unwrap();
                let f = dm.dual().num_vertices();
                assert_eq!(r.num_vertices() as i64 - r.num_edges() as i64 + f as i64, 2);
                assert_eq!(dm.dual().num_edges(), r.num_edges());
                assert_eq!(dm.num_bounded_faces(), r.num_edges() + 1 - r.num_vertices());
                let mut used = vec![false; r.num_edges()];
                for (e, es) in dm.edge_pairs() {
                    assert_eq!(dm.primal_edge(es), e);
                    assert!(!used[es]);
                    used[es] = true;
                }
            }
        }
    }

    #[test]
    fn disconnected_and_degenerate_regions() {
        let r = Region::from_graph(vec![[0.0, 0.0], [1.0, 0.0], [5.0, 5.0], [6.0, 5.0]], vec![(0, 1), (2, 3)]).unwrap();
        assert!(matches!(dual_region(&r), Err(Error::Disconnected)));
        let path = Region::from_graph(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], vec![(0, 1), (1, 2)]).unwrap();
        assert!(matches!(dual_region(&path), Err(Error::NoBoundedFace)));
        let doubled = Region::from_graph(vec![[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]], vec![(0, 1), (0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(matches!(dual_region(&doubled), Err(Error::Embedding(_))));
    }
}
