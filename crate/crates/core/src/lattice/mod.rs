//! Doubly periodic planar lattices and the finite rectangle regions cut out
//! of them.
//!
//! Built-in lattices are hard-coded in rescaled form: the square lattice has
//! periods (1,0), (0,1); the triangular lattice has unit edges and periods
//! (1,0), (1/2, √3/2); the hexagonal lattice has unit edges with periods
//! (√3,0), (√3/2, 3/2).

mod critical;
mod dual;

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use critical::{pstar, solve_critical_point};
pub use dual::{dual_region, DualMap};

pub type Point = [f64; 2];

const COORD_EPS: f64 = 1e-9;

/// One edge generator: vertex `from` of cell (i,j) joined to vertex `to` of
/// cell (i+dx, j+dy).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeGenerator {
    pub from: usize,
    pub to: usize,
    pub dx: i64,
    pub dy: i64,
}

impl EdgeGenerator {
    fn canonical(&self) -> (usize, usize, i64, i64) {
        let fwd = (self.from, self.to, self.dx, self.dy);
        let rev = (self.to, self.from, -self.dx, -self.dy);
        fwd.min(rev)
    }
}

/// Fundamental domain of a doubly periodic planar lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitCell {
    vertices: Vec<Point>,
    edges: Vec<EdgeGenerator>,
    periods: [Point; 2],
}

#[derive(Serialize, Deserialize)]
struct UnitCellDoc {
    vertices: Vec<[f64; 2]>,
    edges: Vec<[i64; 4]>,
    periods: [[f64; 2]; 2],
}

impl UnitCell {
    /// Validates and builds a unit cell.
    pub fn new(vertices: Vec<Point>, edges: Vec<EdgeGenerator>, periods: [Point; 2]) -> Result<Self> {
        let [u, v] = periods;
        if (u[0] * v[1] - u[1] * v[0]).abs() <= 1e-12 {
            return Err(Error::InvalidUnitCell("periods are collinear".into()));
        }
        if vertices.is_empty() {
            return Err(Error::InvalidUnitCell("no vertices".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for g in &edges {
            if g.from >= vertices.len() || g.to >= vertices.len() {
                return Err(Error::InvalidUnitCell(format!("edge {g:?} references a missing vertex")));
            }
            if g.from == g.to && g.dx == 0 && g.dy == 0 {
                return Err(Error::InvalidUnitCell(format!("edge {g:?} is a loop")));
            }
            if !seen.insert(g.canonical()) {
                return Err(Error::InvalidUnitCell(format!("duplicate edge generator {g:?}")));
            }
        }
        let cell = Self { vertices, edges, periods };
        cell.check_planar()?;
        Ok(cell)
    }

    pub fn square() -> Self {
        Self {
            vertices: vec![[0.0, 0.0]],
            edges: vec![
                EdgeGenerator { from: 0, to: 0, dx: 1, dy: 0 },
                EdgeGenerator { from: 0, to: 0, dx: 0, dy: 1 },
            ],
            periods: [[1.0, 0.0], [0.0, 1.0]],
        }
    }

    pub fn triangular() -> Self {
        Self {
            vertices: vec![[0.0, 0.0]],
            edges: vec![
                EdgeGenerator { from: 0, to: 0, dx: 1, dy: 0 },
                EdgeGenerator { from: 0, to: 0, dx: 0, dy: 1 },
                EdgeGenerator { from: 0, to: 0, dx: -1, dy: 1 },
            ],
            periods: [[1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]],
        }
    }

    pub fn hexagonal() -> Self {
        let s3 = 3f64.sqrt();
        Self {
            vertices: vec![[0.0, 0.0], [0.0, 1.0]],
            edges: vec![
                EdgeGenerator { from: 0, to: 1, dx: 0, dy: 0 },
                EdgeGenerator { from: 1, to: 0, dx: 0, dy: 1 },
                EdgeGenerator { from: 1, to: 0, dx: -1, dy: 1 },
            ],
            periods: [[s3, 0.0], [s3 / 2.0, 1.5]],
        }
    }

    /// Parses `{"vertices": [[x,y],...], "edges": [[i,j,dx,dy],...], "periods": [[ux,uy],[vx,vy]]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: UnitCellDoc = serde_json::from_str(text)?;
        let mut edges = Vec::with_capacity(doc.edges.len());
        for [i, j, dx, dy] in doc.edges {
            if i < 0 || j < 0 {
                return Err(Error::InvalidUnitCell("negative vertex index".into()));
            }
            edges.push(EdgeGenerator { from: i as usize, to: j as usize, dx, dy });
        }
        Self::new(doc.vertices, edges, doc.periods)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        let doc = UnitCellDoc {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().map(|g| [g.from as i64, g.to as i64, g.dx, g.dy]).collect(),
            periods: self.periods,
        };
        serde_json::to_string(&doc).expect("unit cell serializes")
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeGenerator] {
        &self.edges
    }

    pub fn periods(&self) -> [Point; 2] {
        self.periods
    }

    fn position(&self, i: i64, j: i64, k: usize) -> Point {
        let [u, v] = self.periods;
        let w = self.vertices[k];
        [
            i as f64 * u[0] + j as f64 * v[0] + w[0],
            i as f64 * u[1] + j as f64 * v[1] + w[1],
        ]
    }

    /// Longest edge of the embedding.
    pub fn max_edge_length(&self) -> f64 {
        self.edges
            .iter()
            .map(|g| dist(self.position(0, 0, g.from), self.position(g.dx, g.dy, g.to)))
            .fold(0.0, f64::max)
    }

    /// Lattice coordinates (s, t) with `x = s u + t v`.
    fn lattice_coords(&self, x: Point) -> (f64, f64) {
        let [u, v] = self.periods;
        let det = u[0] * v[1] - u[1] * v[0];
        ((x[0] * v[1] - x[1] * v[0]) / det, (u[0] * x[1] - u[1] * x[0]) / det)
    }

    /// Scans the straight-line embedding of a 3x3 block of cells for crossing edges.
    fn check_planar(&self) -> Result<()> {
        let mut segs = Vec::new();
        for i in -1..=1 {
            for j in -1..=1 {
                for g in &self.edges {
                    let a = (i, j, g.from);
                    let b = (i + g.dx, j + g.dy, g.to);
                    segs.push((a, b, self.position(a.0, a.1, a.2), self.position(b.0, b.1, b.2)));
                }
            }
        }
        for (x, s) in segs.iter().enumerate() {
            for t in &segs[x + 1..] {
                let shared = s.0 == t.0 || s.0 == t.1 || s.1 == t.0 || s.1 == t.1;
                if (s.0 == t.0 && s.1 == t.1) || (s.0 == t.1 && s.1 == t.0) {
                    continue;
                }
                if !shared && segments_intersect(s.2, s.3, t.2, t.3) {
                    return Err(Error::InvalidUnitCell(format!(
                        "edges {:?}-{:?} and {:?}-{:?} cross",
                        s.0, s.1, t.0, t.1
                    )));
                }
            }
        }
        Ok(())
    }
}

fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(a: Point, b: Point, c: Point) -> bool {
    c[0] >= a[0].min(b[0]) - COORD_EPS
        && c[0] <= a[0].max(b[0]) + COORD_EPS
        && c[1] >= a[1].min(b[1]) - COORD_EPS
        && c[1] <= a[1].max(b[1]) + COORD_EPS
}

pub(crate) fn segments_intersect(p1: Point, p2: Point, p3: Point, p4: Point) -> bool {
    let d1 = orient(p3, p4, p1);
    let d2 = orient(p3, p4, p2);
    let d3 = orient(p1, p2, p3);
    let d4 = orient(p1, p2, p4);
    let sgn = |x: f64| if x > COORD_EPS { 1 } else if x < -COORD_EPS { -1 } else { 0 };
    let (s1, s2, s3, s4) = (sgn(d1), sgn(d2), sgn(d3), sgn(d4));
    if s1 * s2 < 0 && s3 * s4 < 0 {
        return true;
    }
    (s1 == 0 && on_segment(p3, p4, p1))
        || (s2 == 0 && on_segment(p3, p4, p2))
        || (s3 == 0 && on_segment(p1, p2, p3))
        || (s4 == 0 && on_segment(p1, p2, p4))
}

/// A lattice variant.
#[derive(Clone, Debug, PartialEq)]
pub enum LatticeSpec {
    Square,
    Triangular,
    Hexagonal,
    Custom(UnitCell),
}

impl LatticeSpec {
    pub fn unit_cell(&self) -> UnitCell {
        match self {
            LatticeSpec::Square => UnitCell::square(),
            LatticeSpec::Triangular => UnitCell::triangular(),
            LatticeSpec::Hexagonal => UnitCell::hexagonal(),
            LatticeSpec::Custom(c) => c.clone(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LatticeSpec::Square => "square",
            LatticeSpec::Triangular => "triangular",
            LatticeSpec::Hexagonal => "hexagonal",
            LatticeSpec::Custom(_) => "custom",
        }
    }
}

impl std::str::FromStr for LatticeSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(LatticeSpec::Square),
            "triangular" => Ok(LatticeSpec::Triangular),
            "hexagonal" => Ok(LatticeSpec::Hexagonal),
            other => match other.strip_prefix("custom:") {
                Some(path) => Ok(LatticeSpec::Custom(UnitCell::from_json_file(path)?)),
                None => Err(Error::UnsupportedLattice(other.to_string())),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Left, Side::Right, Side::Bottom, Side::Top];

    pub fn label(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Bottom => "bottom",
            Side::Top => "top",
        }
    }
}

/// Crossing direction: horizontal joins left to right, vertical joins bottom to top.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
}

impl Direction {
    pub fn sides(self) -> (Side, Side) {
        match self {
            Direction::Horizontal => (Side::Left, Side::Right),
            Direction::Vertical => (Side::Bottom, Side::Top),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::Horizontal => "horizontal",
            Direction::Vertical => "vertical",
        }
    }
}

/// Finite graph with a planar straight-line embedding, a boundary vertex set
/// and four side sets.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    vertices: Vec<Point>,
    edges: Vec<(usize, usize)>,
    boundary: Vec<usize>,
    bbox: BBox,
    sides: [Vec<usize>; 4],
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Region {
    /// Builds a region from an explicit graph. Every vertex is a boundary
    /// vertex; side sets follow the distance rule on the points' bounding box.
    pub fn from_graph(vertices: Vec<Point>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let boundary = (0..vertices.len()).collect();
        Self::from_parts(vertices, edges, boundary, None)
    }

    /// Same as [`Region::from_graph`] with an explicit boundary set.
    pub fn from_graph_with_boundary(
        vertices: Vec<Point>,
        edges: Vec<(usize, usize)>,
        boundary: Vec<usize>,
    ) -> Result<Self> {
        Self::from_parts(vertices, edges, boundary, None)
    }

    pub(crate) fn from_parts(
        vertices: Vec<Point>,
        edges: Vec<(usize, usize)>,
        mut boundary: Vec<usize>,
        bbox: Option<BBox>,
    ) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidParameter("graph has no vertices".into()));
        }
        let n = vertices.len();
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::InvalidParameter(format!("edge ({u},{v}) references a missing vertex")));
        }
        if let Some(&b) = boundary.iter().find(|&&b| b >= n) {
            return Err(Error::InvalidParameter(format!("boundary vertex {b} does not exist")));
        }
        boundary.sort_unstable();
        boundary.dedup();
        let bbox = bbox.unwrap_or_else(|| {
            let (mut a, mut b, mut c, mut d) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
            for p in &vertices {
                a = a.min(p[0]);
                b = b.max(p[0]);
                c = c.min(p[1]);
                d = d.max(p[1]);
            }
            BBox { a, b, c, d }
        });
        let reach = edges
            .iter()
            .map(|&(u, v)| dist(vertices[u], vertices[v]))
            .fold(0.0, f64::max);
        let reach = if reach > 0.0 { reach } else { 1.0 };
        let sides = side_sets(&vertices, &boundary, bbox, reach);
        let mut adjacency = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adjacency[u].push((v, e));
            if u != v {
                adjacency[v].push((u, e));
            }
        }
        Ok(Self { vertices, edges, boundary, bbox, sides, adjacency })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn position(&self, v: usize) -> Point {
        self.vertices[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    pub fn side(&self, side: Side) -> &[usize] {
        &self.sides[side as usize]
    }

    /// `(neighbor, edge)` pairs incident to `v`.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let (u, v) = self.edges[e];
        dist(self.vertices[u], self.vertices[v])
    }

    /// Index of the vertex closest to `point`.
    pub fn nearest_vertex(&self, point: Point) -> usize {
        let mut best = (f64::INFINITY, 0);
        for (i, &p) in self.vertices.iter().enumerate() {
            let d = dist(p, point);
            if d < best.0 {
                best = (d, i);
            }
        }
        best.1
    }

    pub fn is_connected(&self) -> bool {
        let mut ds = crate::unionfind::DisjointSets::new(self.num_vertices());
        for &(u, v) in &self.edges {
            ds.union(u, v);
        }
        ds.components() == 1
    }

    /// Writes one line `i j x_i y_i x_j y_j` per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for &(i, j) in &self.edges {
            let (pi, pj) = (self.vertices[i], self.vertices[j]);
            writeln!(out, "{i} {j} {} {} {} {}", pi[0], pi[1], pj[0], pj[1])?;
        }
        Ok(())
    }

    pub fn edge_list_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_edge_list(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("edge list is ASCII")
    }
}

/// Side membership: boundary vertices strictly closer than `reach` to the
/// corresponding line of the bounding box.
fn side_sets(vertices: &[Point], boundary: &[usize], bbox: BBox, reach: f64) -> [Vec<usize>; 4] {
    let near = |x: f64, line: f64| (x - line).abs() < reach - COORD_EPS;
    let pick = |f: &dyn Fn(Point) -> bool| boundary.iter().copied().filter(|&v| f(vertices[v])).collect::<Vec<_>>();
    [
        pick(&|p| near(p[0], bbox.a)),
        pick(&|p| near(p[0], bbox.b)),
        pick(&|p| near(p[1], bbox.c)),
        pick(&|p| near(p[1], bbox.d)),
    ]
}

fn inside(p: Point, bbox: &BBox) -> bool {
    p[0] >= bbox.a - COORD_EPS && p[0] <= bbox.b + COORD_EPS && p[1] >= bbox.c - COORD_EPS && p[1] <= bbox.d + COORD_EPS
}

fn order_key(p: Point) -> (i64, i64) {
    ((p[0] * 1e9).round() as i64, (p[1] * 1e9).round() as i64)
}

/// Extracts the subgraph induced by the lattice vertices lying in
/// `[a,b] x [c,d]`.
pub fn build_region(lattice: &LatticeSpec, a: f64, b: f64, c: f64, d: f64) -> Result<Region> {
    if !(a < b && c < d) {
        return Err(Error::InvalidRectangle);
    }
    let cell = lattice.unit_cell();
    let bbox = BBox { a, b, c, d };

    let mut smin = f64::INFINITY;
    let mut smax = f64::NEG_INFINITY;
    let mut tmin = f64::INFINITY;
    let mut tmax = f64::NEG_INFINITY;
    for corner in [[a, c], [a, d], [b, c], [b, d]] {
        let (s, t) = cell.lattice_coords(corner);
        smin = smin.min(s);
        smax = smax.max(s);
        tmin = tmin.min(t);
        tmax = tmax.max(t);
    }
    let extra = cell
        .vertices
        .iter()
        .map(|&w| {
            let (s, t) = cell.lattice_coords(w);
            s.abs().max(t.abs())
        })
        .fold(0.0, f64::max)
        .ceil() as i64
        + 2;
    let (i0, i1) = (smin.floor() as i64 - extra, smax.ceil() as i64 + extra);
    let (j0, j1) = (tmin.floor() as i64 - extra, tmax.ceil() as i64 + extra);

    let mut keys = Vec::new();
    for i in i0..=i1 {
        for j in j0..=j1 {
            for k in 0..cell.vertices.len() {
                let p = cell.position(i, j, k);
                if inside(p, &bbox) {
                    keys.push(((i, j, k), p));
                }
            }
        }
    }
    if keys.is_empty() {
        return Err(Error::EmptyRegion { a, b, c, d });
    }
    keys.sort_by_key(|&(_, p)| order_key(p));
    let index: HashMap<(i64, i64, usize), usize> = keys.iter().enumerate().map(|(n, &(key, _))| (key, n)).collect();

    let mut edges = Vec::new();
    let mut on_boundary = vec![false; keys.len()];
    for (n, &((i, j, k), _)) in keys.iter().enumerate() {
        for g in &cell.edges {
            if g.from == k {
                match index.get(&(i + g.dx, j + g.dy, g.to)) {
                    Some(&m) => edges.push((n.min(m), n.max(m))),
                    None => on_boundary[n] = true,
                }
            }
            if g.to == k && !index.contains_key(&(i - g.dx, j - g.dy, g.from)) {
                on_boundary[n] = true;
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let boundary = (0..keys.len()).filter(|&n| on_boundary[n]).collect();
    let vertices = keys.into_iter().map(|(_, p)| p).collect();

    let mut region = Region::from_parts(vertices, edges, boundary, Some(bbox))?;
    region.sides = side_sets(&region.vertices, &region.boundary, bbox, cell.max_edge_length());
    Ok(region)
}

/// For each edge of `sub`, the index of the edge of `ambient` with the same
/// endpoints (matched by position). Both regions must be cut from one lattice.
pub fn embed_edges(sub: &Region, ambient: &Region) -> Result<Vec<usize>> {
    let key = |p: Point| ((p[0] * 1e6).round() as i64, (p[1] * 1e6).round() as i64);
    let vertex: HashMap<(i64, i64), usize> = ambient.vertices.iter().enumerate().map(|(v, &p)| (key(p), v)).collect();
    let edge: HashMap<(usize, usize), usize> = ambient.edges.iter().enumerate().map(|(e, &uv)| (uv, e)).collect();
    sub.edges
        .iter()
        .map(|&(u, v)| {
            let missing = || Error::InvalidParameter("sub-region is not contained in the ambient region".into());
            let a = *vertex.get(&key(sub.vertices[u])).ok_or_else(missing)?;
            let b = *vertex.get(&key(sub.vertices[v])).ok_or_else(missing)?;
            edge.get(&(a.min(b), a.max(b))).copied().ok_or_else(missing)
        })
        .collect()
}

/// `[0,width] x [0,height]`.
pub fn rectangle(lattice: &LatticeSpec, width: f64, height: f64) -> Result<Region> {
    build_region(lattice, 0.0, width, 0.0, height)
}

/// The box `[-n,n]^2` of the square lattice.
pub fn square_box(n: usize) -> Result<Region> {
    let n = n as f64;
    build_region(&LatticeSpec::Square, -n, n, -n, n)
}
