use rayon::prelude::*;

use super::grid::{BcKind, NamedRegion};
use super::{CheckReport, Point, CROSS_TOL, EXACT_TOL};
use crate::boundary::BoundaryCondition;
use crate::configuration::Mask;
use crate::connectivity::{crossing, dual_crossing};
use crate::error::{Error, Result};
use crate::exact::{
    connection_matrix, derivative_dp, distribution, hamming_expectation, influence, joint_probabilities, potts_agreement_matrix,
    probability, EventSpec, RcParams,
};
use crate::lattice::{dual_region, pstar, Direction};

fn fmt_p(p: f64) -> String {
    format!("{p}")
}

fn params(p: f64, q: f64) -> Result<RcParams> {
    RcParams::homogeneous(p, q)
}

/// Positive association φ(A ∩ B) ≥ φ(A)φ(B) for every pair of the family,
/// at every grid point.
pub fn check_fkg(
    events: &[(String, EventSpec)],
    region: &NamedRegion,
    p_grid: &[f64],
    q_grid: &[f64],
    bcs: &[BcKind],
) -> Result<Vec<CheckReport>> {
    for (_, e) in events {
        e.require_increasing()?;
    }
    let specs: Vec<EventSpec> = events.iter().map(|(_, e)| e.clone()).collect();
    let points: Vec<(f64, f64, BcKind)> = p_grid
        .iter()
        .flat_map(|&p| q_grid.iter().flat_map(move |&q| bcs.iter().map(move |&bc| (p, q, bc))))
        .collect();
    let rows: Result<Vec<Vec<CheckReport>>> = points
        .par_iter()
        .map(|&(p, q, bc)| {
            let joint = joint_probabilities(&specs, &region.region, &params(p, q)?, &bc.build(&region.region))?;
            let ps = fmt_p(p);
            let mut out = Vec::new();
            for i in 0..events.len() {
                for j in i..events.len() {
                    let label = format!("{}&{}", events[i].0, events[j].0);
                    let point = Point { check: "fkg", region: &region.name, p: &ps, q, bc: bc.label(), event: &label };
                    out.push(CheckReport::at_most(point, joint[i][i] * joint[j][j], joint[i][j], EXACT_TOL));
                }
            }
            Ok(out)
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

/// Comparison inequalities for one increasing event: free ≤ wired at each
/// p, equal boundary conditions give equal values, and monotonicity in p
/// under each boundary condition.
pub fn check_orderings(name: &str, event: &EventSpec, region: &NamedRegion, p_grid: &[f64], q: f64) -> Result<Vec<CheckReport>> {
    event.require_increasing()?;
    let r = &region.region;
    let free = BoundaryCondition::free(r);
    let wired = BoundaryCondition::wired(r);
    let wired_again = BoundaryCondition::custom(r, wired.blocks().to_vec())?;
    let mut values = Vec::new();
    for &p in p_grid {
        let pr = params(p, q)?;
        values.push((probability(event, r, &pr, &free)?, probability(event, r, &pr, &wired)?, probability(event, r, &pr, &wired_again)?));
    }
    let mut out = Vec::new();
    for (&p, &(f, w, w2)) in p_grid.iter().zip(&values) {
        let ps = fmt_p(p);
        let point = |check, bc| Point { check, region: &region.name, p: &ps, q, bc, event: name };
        out.push(CheckReport::at_most(point("bc-order", "free<=wired"), f, w, EXACT_TOL));
        out.push(CheckReport::equal(point("bc-equal", "wired=wired"), w, w2, EXACT_TOL));
    }
    for i in 1..p_grid.len() {
        let ps = format!("{}->{}", p_grid[i - 1], p_grid[i]);
        for (bc, lo, hi) in [("free", values[i - 1].0, values[i].0), ("wired", values[i - 1].1, values[i].1)] {
            let point = Point { check: "p-order", region: &region.name, p: &ps, q, bc, event: name };
            out.push(CheckReport::at_most(point, lo, hi, EXACT_TOL));
        }
    }
    Ok(out)
}

/// The fixed point of `p -> p*` sits at √q/(1+√q).
pub fn check_self_dual_points(qs: &[f64]) -> Vec<CheckReport> {
    qs.iter()
        .map(|&q| {
            let pc = q.sqrt() / (1.0 + q.sqrt());
            let ps = fmt_p(pc);
            let point = Point { check: "self-dual-point", region: "-", p: &ps, q, bc: "-", event: "pstar(pc)=pc" };
            CheckReport::equal(point, pstar(pc, q), pc, 1e-14)
        })
        .collect()
}

/// Configuration-level equality between the free measure on the region at
/// (p, q) and the measure on its dual at (p*, q) with the outer vertex as
/// the whole (wired) boundary, plus crossing complementarity on square-lattice
/// rectangles.
pub fn check_duality(region: &NamedRegion, p_grid: &[f64], q: f64) -> Result<Vec<CheckReport>> {
    let r = &region.region;
    let dual = dual_region(r)?;
    let m = r.num_edges();
    let full = (1u64 << m) - 1;
    // dual edge e* carries the same index as its primal edge
    debug_assert!(dual.edge_pairs().all(|(e, d)| e == d));
    let mut out = Vec::new();
    for &p in p_grid {
        let primal = distribution(r, &params(p, q)?, &BoundaryCondition::free(r))?;
        let dual_measure = distribution(dual.dual(), &params(pstar(p, q), q)?, &BoundaryCondition::wired(dual.dual()))?;
        let (mask, _) = (0..=full)
            .map(|mask| (mask, (primal[mask as usize] - dual_measure[(!mask & full) as usize]).abs()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        let ps = fmt_p(p);
        let point = Point { check: "duality", region: &region.name, p: &ps, q, bc: "free|dual-wired", event: "config" };
        out.push(CheckReport::equal(point, primal[mask as usize], dual_measure[(!mask & full) as usize], EXACT_TOL));
    }
    if q == 1.0 {
        out.push(check_crossing_complementarity(region)?);
    }
    Ok(out)
}

/// Counts configurations where "primal horizontal crossing" and "dual
/// vertical crossing" are not exactly one true. Asserted on square-lattice
/// rectangles, reported elsewhere.
pub fn check_crossing_complementarity(region: &NamedRegion) -> Result<CheckReport> {
    let r = &region.region;
    let dual = dual_region(r)?;
    let m = r.num_edges();
    let full = (1u64 << m) - 1;
    let mut bad = 0u64;
    for mask in 0..=full {
        let h = crossing(&Mask { bits: mask, len: m }, r, Direction::Horizontal)?;
        let v = dual_crossing(&Mask { bits: !mask & full, len: m }, &dual, Direction::Vertical)?;
        bad += (h == v) as u64;
    }
    let point = Point { check: "crossing-complementarity", region: &region.name, p: "-", q: 1.0, bc: "-", event: "Ch xor Cv*" };
    Ok(if region.is_square_rectangle() {
        CheckReport::equal(point, bad as f64, 0.0, 0.0)
    } else {
        CheckReport::reported(point, bad as f64, 0.0, -(bad as f64)).with_note(format!("{} configurations", full + 1))
    })
}

/// Integrated Hamming-distance inequality
/// φ_{p'}(A) ≤ φ_p(A) exp(-4 (p - p') φ_p(H_A)) for every grid pair p' < p.
pub fn check_hamming_inequality(
    name: &str,
    event: &EventSpec,
    region: &NamedRegion,
    p_grid: &[f64],
    q: f64,
    bc: BcKind,
) -> Result<Vec<CheckReport>> {
    event.require_increasing()?;
    let r = &region.region;
    let xi = bc.build(r);
    let mut prob = Vec::new();
    let mut hamming = Vec::new();
    for &p in p_grid {
        let pr = params(p, q)?;
        prob.push(probability(event, r, &pr, &xi)?);
        hamming.push(hamming_expectation(event, r, &pr, &xi)?);
    }
    let mut out = Vec::new();
    for j in 0..p_grid.len() {
        for i in 0..j {
            let (lo, hi) = (p_grid[i], p_grid[j]);
            if lo >= hi {
                continue;
            }
            let bound = prob[j] * (-4.0 * (hi - lo) * hamming[j]).exp();
            let ps = format!("{lo}->{hi}");
            let point = Point { check: "hamming", region: &region.name, p: &ps, q, bc: bc.label(), event: name };
            out.push(CheckReport::at_most(point, prob[i], bound, EXACT_TOL));
        }
    }
    Ok(out)
}

/// The ratio φ'(A) / [φ(A)(1-φ(A)) log(1/(2 m_A))] at every grid point with
/// influence below 1/2, plus a summary row with the minimum. Only
/// positivity is asserted.
pub fn check_sharp_threshold(
    name: &str,
    event: &EventSpec,
    region: &NamedRegion,
    p_grid: &[f64],
    q: f64,
    bc: BcKind,
) -> Result<Vec<CheckReport>> {
    event.require_increasing()?;
    let r = &region.region;
    let xi = bc.build(r);
    let mut out = Vec::new();
    let mut min_ratio = f64::INFINITY;
    let mut admissible = 0;
    for &p in p_grid {
        let pr = params(p, q)?;
        let phi = probability(event, r, &pr, &xi)?;
        let (edge, m) = influence(event, r, &pr, &xi)?;
        let ps = fmt_p(p);
        let point = Point { check: "sharp-threshold", region: &region.name, p: &ps, q, bc: bc.label(), event: name };
        let spread = phi * (1.0 - phi);
        if m >= 0.5 || spread <= 0.0 {
            let why = if m >= 0.5 { "skipped: influence >= 1/2" } else { "skipped: probability is 0 or 1" };
            out.push(CheckReport::reported(point, m, f64::NAN, f64::NAN).with_note(why));
            continue;
        }
        admissible += 1;
        let derivative = derivative_dp(event, r, &pr, &xi)?;
        let ratio = derivative / (spread * (1.0 / (2.0 * m)).ln());
        min_ratio = min_ratio.min(ratio);
        let report = CheckReport::reported(point, derivative, spread * (1.0 / (2.0 * m)).ln(), ratio)
            .with_note(format!("influence {m:.6} at edge {edge}"));
        out.push(if ratio > 0.0 { report } else { CheckReport { status: super::Status::Fail, ..report } });
    }
    let point = Point { check: "sharp-threshold-min", region: &region.name, p: "grid", q, bc: bc.label(), event: name };
    let note = if admissible == 0 {
        "no admissible point: influence >= 1/2 everywhere".to_string()
    } else {
        format!("{admissible} of {} points admissible", p_grid.len())
    };
    let min = if admissible == 0 { f64::NAN } else { min_ratio };
    out.push(CheckReport::reported(point, min, 0.0, min).with_note(note));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Couplings {
    Uniform,
    /// J_e cycles through 0.5, 1.0, 1.5.
    Varying,
}

impl Couplings {
    pub fn values(self, m: usize) -> Vec<f64> {
        match self {
            Couplings::Uniform => vec![1.0; m],
            Couplings::Varying => (0..m).map(|e| 0.5 + 0.5 * (e % 3) as f64).collect(),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Couplings::Uniform => "J=1",
            Couplings::Varying => "J varying",
        }
    }
}

/// μ(σ_x = σ_y) - 1/q = ((q-1)/q) φ(x ↔ y) over all vertex pairs, Potts
/// and weighted random-cluster sides enumerated independently. The row
/// carries the worst pair.
pub fn check_es_identity(region: &NamedRegion, q: u32, beta: f64, couplings: Couplings) -> Result<CheckReport> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q = {q} has no Potts model")));
    }
    let r = &region.region;
    let j = couplings.values(r.num_edges());
    let spins = potts_agreement_matrix(r, q, beta, &j)?;
    let rc = RcParams::weighted(beta, j, q as f64)?;
    let conn = connection_matrix(r, &rc, &BoundaryCondition::free(r))?;
    let qf = q as f64;
    let n = r.num_vertices();
    let mut worst = (0.0, 0.0, -1.0);
    for x in 0..n {
        for y in x + 1..n {
            let lhs = spins[x][y] - 1.0 / qf;
            let rhs = (qf - 1.0) / qf * conn[x][y];
            if (lhs - rhs).abs() > worst.2 {
                worst = (lhs, rhs, (lhs - rhs).abs());
            }
        }
    }
    let ps = format!("beta={beta}");
    let event = format!("sigma_x=sigma_y ({})", couplings.label());
    let point = Point { check: "es-identity", region: &region.name, p: &ps, q: qf, bc: "free", event: &event };
    Ok(CheckReport::equal(point, worst.0, worst.1, CROSS_TOL))
}
