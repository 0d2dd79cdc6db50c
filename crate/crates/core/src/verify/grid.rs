use crate::exact::EventSpec;
use crate::lattice::{build_region, Direction, LatticeSpec, Region};
use crate::BoundaryCondition;

pub const P_GRID: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
pub const Q_GRID: [f64; 4] = [1.0, 1.5, 2.0, 4.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcKind {
    Free,
    Wired,
}

impl BcKind {
    pub fn build(self, region: &Region) -> BoundaryCondition {
        match self {
            BcKind::Free => BoundaryCondition::free(region),
            BcKind::Wired => BoundaryCondition::wired(region),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BcKind::Free => "free",
            BcKind::Wired => "wired",
        }
    }
}

#[derive(Clone, Debug)]
pub struct NamedRegion {
    pub name: String,
    pub region: Region,
    /// Lattice the region was cut from, if any.
    pub lattice: Option<LatticeSpec>,
}

impl NamedRegion {
    pub fn new(name: impl Into<String>, region: Region, lattice: Option<LatticeSpec>) -> Self {
        Self { name: name.into(), region, lattice }
    }

    pub fn cut(name: &str, lattice: LatticeSpec, a: f64, b: f64, c: f64, d: f64) -> Self {
        let region = build_region(&lattice, a, b, c, d).expect("built-in region");
        Self::new(name, region, Some(lattice))
    }

    /// Connected with at least one bounded face.
    pub fn has_dual(&self) -> bool {
        self.region.is_connected() && self.region.num_edges() >= self.region.num_vertices()
    }

    pub fn is_square_rectangle(&self) -> bool {
        self.lattice == Some(LatticeSpec::Square)
    }

    fn has_sides(&self) -> bool {
        self.lattice.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct Grid {
    pub regions: Vec<NamedRegion>,
    pub p_grid: Vec<f64>,
    pub q_grid: Vec<f64>,
    pub bcs: Vec<BcKind>,
    /// Finer grid for the reported threshold ratio.
    pub fine_p_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
}

impl Grid {
    /// Regions for the threshold ratio: the built-ins with sides plus a
    /// 3×2 square-lattice rectangle.
    pub fn sharp_threshold_regions(&self) -> Vec<NamedRegion> {
        let mut out: Vec<NamedRegion> = self.regions.iter().filter(|r| r.has_sides() || r.region.num_edges() == 1).cloned().collect();
        out.push(NamedRegion::cut("square-3x2", LatticeSpec::Square, 0.0, 3.0, 0.0, 2.0));
        out
    }
}

/// The built-in certification grid: regions of at most 12 edges.
pub fn builtin_grid() -> Grid {
    let edge = Region::from_graph(vec![[0.0, 0.0], [1.0, 0.0]], vec![(0, 1)]).expect("single edge");
    let regions = vec![
        NamedRegion::new("edge", edge, None),
        NamedRegion::cut("triangle", LatticeSpec::Triangular, 0.0, 1.0, 0.0, 1.0),
        NamedRegion::cut("square-1x1", LatticeSpec::Square, 0.0, 1.0, 0.0, 1.0),
        NamedRegion::cut("hexagon", LatticeSpec::Hexagonal, -0.5, 2.0, -0.6, 2.1),
        NamedRegion::cut("square-2x1", LatticeSpec::Square, 0.0, 2.0, 0.0, 1.0),
        NamedRegion::cut("triangular-2x1", LatticeSpec::Triangular, 0.0, 2.0, 0.0, 1.0),
        NamedRegion::cut("triangular-9", LatticeSpec::Triangular, 0.0, 1.8, 0.0, 2.1),
        NamedRegion::cut("square-2x2", LatticeSpec::Square, 0.0, 2.0, 0.0, 2.0),
    ];
    Grid {
        regions,
        p_grid: P_GRID.to_vec(),
        q_grid: Q_GRID.to_vec(),
        bcs: vec![BcKind::Free, BcKind::Wired],
        fine_p_grid: (1..=9).map(|i| i as f64 / 10.0).collect(),
        beta_grid: vec![0.0, 0.4, std::f64::consts::LN_2, 1.2],
    }
}

/// Increasing events used across the suites.
pub fn default_events(region: &NamedRegion) -> Vec<(String, EventSpec)> {
    let r = &region.region;
    let m = r.num_edges();
    let mut events = vec![EventSpec::edge_open(0)];
    if m > 1 {
        events.push(EventSpec::edge_open(m - 1));
    }
    events.push(EventSpec::connected(0, r.num_vertices() - 1));
    if region.has_sides() {
        events.push(EventSpec::crossing(Direction::Horizontal));
        events.push(EventSpec::crossing(Direction::Vertical));
    }
    events.into_iter().map(|e| (e.label(), e)).collect()
}

pub(crate) fn threshold_events(region: &NamedRegion) -> Vec<(String, EventSpec)> {
    let event = if region.has_sides() { EventSpec::crossing(Direction::Horizontal) } else { EventSpec::edge_open(0) };
    vec![(event.label(), event)]
}
