//! Exact random-cluster and Potts quantities on small regions by
//! exhaustive enumeration.

mod enumerate;
mod events;
mod params;
mod potts;
mod sum;

use std::collections::VecDeque;

use crate::boundary::BoundaryCondition;
use crate::configuration::{Configuration, EdgeStates, Mask};
use crate::connectivity::{self, HammingDistance};
use crate::error::{Error, Result};
use crate::lattice::Region;

pub use enumerate::EDGE_CAP;
pub use events::{Event, EventFamily, EventSpec, Monotonicity, NamedEvent};
pub use params::{EdgeWeights, RcParams};
pub use potts::{potts_agreement_matrix, potts_probability, POTTS_CAP};
pub use sum::{CompensatedSum, Merge};

pub(crate) use enumerate::Enumerator;

/// Edge cap for Hamming distances by breadth-first search over the hypercube.
pub const HAMMING_CAP: usize = 16;

/// Edge cap for materializing a full distribution vector.
pub const DISTRIBUTION_CAP: usize = 20;

/// k(ω^ξ): clusters after wiring the blocks of ξ.
pub fn cluster_count(config: &Configuration, region: &Region, bc: &BoundaryCondition) -> Result<usize> {
    Ok(connectivity::clusters(config, region, Some(bc))?.count())
}

/// Unnormalized weight of one configuration.
///
/// Homogeneous mode: `p^o (1-p)^c q^k`. Weighted mode:
/// `prod_e (exp(beta J_e) - 1)^{ω(e)} q^k`.
pub fn weight(config: &Configuration, region: &Region, params: &RcParams, bc: &BoundaryCondition) -> Result<f64> {
    config.check_len(region.num_edges())?;
    params.check_region(region)?;
    let k = cluster_count(config, region, bc)? as i32;
    let edge_part = match &params.edges {
        EdgeWeights::Homogeneous { p } => {
            let o = config.open_count() as i32;
            p.powi(o) * (1.0 - p).powi(config.len() as i32 - o)
        }
        EdgeWeights::Weighted { beta, couplings } => config.open_edges().map(|e| (beta * couplings[e]).exp_m1()).product(),
    };
    Ok(edge_part * params.q.powi(k))
}

pub fn partition_function(region: &Region, params: &RcParams, bc: &BoundaryCondition) -> Result<f64> {
    let en = Enumerator::new(region, params, bc)?;
    Ok(en.fold(CompensatedSum::default, |acc, _, w| acc.add(w)).value())
}

fn mask_of(en: &Enumerator, mask: u64) -> Mask {
    Mask { bits: mask, len: en.num_edges() }
}

pub fn probability(event: &EventSpec, region: &Region, params: &RcParams, bc: &BoundaryCondition) -> Result<f64> {
    event.validate(region)?;
    let en = Enumerator::new(region, params, bc)?;
    let [z, a] = en.fold(
        || [CompensatedSum::default(); 2],
        |acc, mask, w| {
            acc[0].add(w);
            if event.holds(&mask_of(&en, mask), region) {
                acc[1].add(w);
            }
        },
    );
    Ok(a.value() / z.value())
}

/// φ(event | ω(edge) = state).
pub fn conditional_probability(
    event: &EventSpec,
    given_edge: usize,
    given_state: bool,
    region: &Region,
    params: &RcParams,
    bc: &BoundaryCondition,
) -> Result<f64> {
    event.validate(region)?;
    if given_edge >= region.num_edges() {
        return Err(Error::InvalidParameter(format!("edge {given_edge} out of range")));
    }
    let en = Enumerator::new(region, params, bc)?;
    let [z, a] = en.fold(
        || [CompensatedSum::default(); 2],
        |acc, mask, w| {
            if (mask >> given_edge & 1 == 1) == given_state {
                acc[0].add(w);
                if event.holds(&mask_of(&en, mask), region) {
                    acc[1].add(w);
                }
            }
        },
    );
    if z.value() <= 0.0 {
        return Err(Error::NullConditioning);
    }
    Ok(a.value() / z.value())
}

/// Maximal conditional gap `max_e φ(A | ω(e)=1) - φ(A | ω(e)=0)` and the
/// lowest-index edge attaining it.
pub fn influence(event: &EventSpec, region: &Region, params: &RcParams, bc: &BoundaryCondition) -> Result<(usize, f64)> {
    event.require_increasing()?;
    event.validate(region)?;
    let en = Enumerator::new(region, params, bc)?;
    let m = region.num_edges();
    if m == 0 {
        return Err(Error::InvalidParameter("region has no edges".into()));
    }
    // per edge: (Z restricted to e open, A restricted to e open); plus totals
    let ((z1, a1), totals) = en.fold(
        || ((vec![CompensatedSum::default(); m], vec![CompensatedSum::default(); m]), [CompensatedSum::default(); 2]),
        |acc, mask, w| {
            let hit = event.holds(&mask_of(&en, mask), region);
            acc.1[0].add(w);
            if hit {
                acc.1[1].add(w);
            }
            let mut bits = mask;
            while bits != 0 {
                let e = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                acc.0 .0[e].add(w);
                if hit {
                    acc.0 .1[e].add(w);
                }
            }
        },
    );
    let (z, a) = (totals[0].value(), totals[1].value());
    let mut best = (0usize, f64::NEG_INFINITY);
    for e in 0..m {
        let (zo, ao) = (z1[e].value(), a1[e].value());
        let (zc, ac) = (z - zo, a - ao);
        if zo <= 0.0 || zc <= 0.0 {
            return Err(Error::NullConditioning);
        }
        let gap = ao / zo - ac / zc;
        if gap > best.1 {
            best = (e, gap);
        }
    }
    Ok(best)
}

/// d/dp φ_p(A) as the covariance of 1_A with the open-edge count, divided
/// by p(1-p).
pub fn derivative_dp(event: &EventSpec, region: &Region, params: &RcParams, bc: &BoundaryCondition) -> Result<f64> {
    let p = params
        .p()
        .ok_or_else(|| Error::InvalidParameter("derivative requires homogeneous edge weights".into()))?;
    if p <= 0.0 || p >= 1.0 {
        return Err(Error::SingularDerivative(p));
    }
    event.validate(region)?;
    let en = Enumerator::new(region, params, bc)?;
    let s = en.fold(
        || [CompensatedSum::default(); 4],
        |acc, mask, w| {
            let o = mask.count_ones() as f64;
            acc[0].add(w);
            acc[1].add(w * o);
            if event.holds(&mask_of(&en, mask), region) {
                acc[2].add(w);
                acc[3].add(w * o);
            }
        },
    );
    let z = s[0].value();
    let (eo, ea, eao) = (s[1].value() / z, s[2].value() / z, s[3].value() / z);
    Ok((eao - ea * eo) / (p * (1.0 - p)))
}

/// φ(A_i ∩ A_j) for every pair of events in one sweep; the diagonal holds
/// the marginals.
pub fn joint_probabilities(
    events: &[EventSpec],
    region: &Region,
    params: &RcParams,
    bc: &BoundaryCondition,
) -> Result<Vec<Vec<f64>>> {
    for ev in events {
        ev.validate(region)?;
    }
    let k = events.len();
    let en = Enumerator::new(region, params, bc)?;
    let (z, joint) = en.fold(
        || (CompensatedSum::default(), vec![CompensatedSum::default(); k * k]),
        |acc, mask, w| {
            acc.0.add(w);
            let cfg = mask_of(&en, mask);
            let hits: Vec<usize> = (0..k).filter(|&i| events[i].holds(&cfg, region)).collect();
            for &i in &hits {
                for &j in &hits {
                    acc.1[i * k + j].add(w);
                }
            }
        },
    );
    let z = z.value();
    Ok((0..k).map(|i| (0..k).map(|j| joint[i * k + j].value() / z).collect()).collect())
}

/// φ(x ↔ y) for every vertex pair, through open paths of ω.
pub fn connection_matrix(region: &Region, params: &RcParams, bc: &BoundaryCondition) -> Result<Vec<Vec<f64>>> {
    let n = region.num_vertices();
    let en = Enumerator::new(region, params, bc)?;
    let (z, conn) = en.fold(
        || (CompensatedSum::default(), vec![CompensatedSum::default(); n * n]),
        |acc, mask, w| {
            acc.0.add(w);
            let partition = connectivity::clusters(&mask_of(&en, mask), region, None).expect("mask matches region");
            for x in 0..n {
                for y in 0..n {
                    if partition.connected(x, y) {
                        acc.1[x * n + y].add(w);
                    }
                }
            }
        },
    );
    let z = z.value();
    Ok((0..n).map(|x| (0..n).map(|y| conn[x * n + y].value() / z).collect()).collect())
}

/// Distance in the hypercube from every configuration to `event`, by
/// multi-source breadth-first search.
fn hypercube_distances(event: &EventSpec, region: &Region) -> Result<Vec<u8>> {
    let m = region.num_edges();
    if m > HAMMING_CAP {
        return Err(Error::Capacity { size: m as u64, cap: HAMMING_CAP as u64 });
    }
    let mut dist = vec![u8::MAX; 1 << m];
    let mut queue = VecDeque::new();
    for mask in 0..1u64 << m {
        if event.holds(&Mask { bits: mask, len: m }, region) {
            dist[mask as usize] = 0;
            queue.push_back(mask);
        }
    }
    if queue.is_empty() {
        return Err(Error::Unsatisfiable);
    }
    while let Some(x) = queue.pop_front() {
        let d = dist[x as usize];
        for e in 0..m {
            let y = (x ^ (1 << e)) as usize;
            if dist[y] == u8::MAX {
                dist[y] = d + 1;
                queue.push_back(y as u64);
            }
        }
    }
    Ok(dist)
}

/// φ(H_A), the expected Hamming distance to an increasing event.
pub fn hamming_expectation(event: &EventSpec, region: &Region, params: &RcParams, bc: &BoundaryCondition) -> Result<f64> {
    event.require_increasing()?;
    event.validate(region)?;
    let en = Enumerator::new(region, params, bc)?;
    let m = region.num_edges();
    let [z, h] = if let Some(direction) = event.as_crossing() {
        let full = Mask { bits: if m == 64 { u64::MAX } else { (1u64 << m) - 1 }, len: m };
        if connectivity::hamming_to_crossing(&full, region, direction)? == HammingDistance::Infinite {
            return Err(Error::Unsatisfiable);
        }
        en.fold(
            || [CompensatedSum::default(); 2],
            |acc, mask, w| {
                let d = connectivity::hamming_to_crossing(&mask_of(&en, mask), region, direction)
                    .ok()
                    .and_then(HammingDistance::finite)
                    .expect("crossing reachable from the all-open configuration");
                acc[0].add(w);
                acc[1].add(w * d as f64);
            },
        )
    } else {
        let dist = hypercube_distances(event, region)?;
        en.fold(
            || [CompensatedSum::default(); 2],
            |acc, mask, w| {
                acc[0].add(w);
                acc[1].add(w * dist[mask as usize] as f64);
            },
        )
    };
    Ok(h.value() / z.value())
}

/// Normalized probability of every configuration, indexed by mask.
pub fn distribution(region: &Region, params: &RcParams, bc: &BoundaryCondition) -> Result<Vec<f64>> {
    let m = region.num_edges();
    if m > DISTRIBUTION_CAP {
        return Err(Error::Capacity { size: m as u64, cap: DISTRIBUTION_CAP as u64 });
    }
    let en = Enumerator::new(region, params, bc)?;
    let mut scratch = Vec::new();
    let weights: Vec<f64> = (0..1u64 << m).map(|mask| en.weight(mask, &mut scratch)).collect();
    let mut z = CompensatedSum::default();
    weights.iter().for_each(|&w| z.add(w));
    let z = z.value();
    Ok(weights.into_iter().map(|w| w / z).collect())
}

/// Distribution conditioned on one edge state; zero outside the condition.
pub fn conditioned_distribution(
    region: &Region,
    params: &RcParams,
    bc: &BoundaryCondition,
    edge: usize,
    state: bool,
) -> Result<Vec<f64>> {
    let mut d = distribution(region, params, bc)?;
    let mut mass = CompensatedSum::default();
    for (mask, x) in d.iter_mut().enumerate() {
        if (mask >> edge & 1 == 1) == state {
            mass.add(*x);
        } else {
            *x = 0.0;
        }
    }
    let mass = mass.value();
    if mass <= 0.0 {
        return Err(Error::NullConditioning);
    }
    d.iter_mut().for_each(|x| *x /= mass);
    Ok(d)
}

/// Bernoulli product-measure probability of an event, by enumeration.
pub fn bernoulli_probability(event: &EventSpec, region: &Region, edge_p: impl Fn(usize) -> f64) -> Result<f64> {
    event.validate(region)?;
    let m = region.num_edges();
    if m > EDGE_CAP {
        return Err(Error::Capacity { size: m as u64, cap: EDGE_CAP as u64 });
    }
    let ps: Vec<f64> = (0..m).map(edge_p).collect();
    let mut total = CompensatedSum::default();
    for mask in 0..1u64 << m {
        let cfg = Mask { bits: mask, len: m };
        if event.holds(&cfg, region) {
            let w: f64 = (0..m).map(|e| if cfg.is_open(e) { ps[e] } else { 1.0 - ps[e] }).product();
            total.add(w);
        }
    }
    Ok(total.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_region, Direction, LatticeSpec};
    use approx::assert_relative_eq;

    fn single_edge() -> Region {
        Region::from_graph(vec![[0.0, 0.0], [1.0, 0.0]], vec![(0, 1)]).unwrap()
    }

    fn triangle() -> Region {
        Region::from_graph(vec![[0.0, 0.0], [1.0, 0.0], [0.5, 0.8]], vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn path2() -> Region {
        Region::from_graph(vec![[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]], vec![(0, 1), (1, 2)]).unwrap()
    }

    fn grid21() -> Region {
        build_region(&LatticeSpec::Square, 0.0, 2.0, 0.0, 1.0).unwrap()
    }

    fn hp(p: f64, q: f64) -> RcParams {
        RcParams::homogeneous(p, q).unwrap()
    }

    #[test]
    fn cluster_count_examples() {
        let r = grid21();
        let closed = Configuration::all_closed(7);
        assert_eq!(cluster_count(&closed, &r, &BoundaryCondition::free(&r)).unwrap(), 6);
        assert_eq!(cluster_count(&closed, &r, &BoundaryCondition::wired(&r)).unwrap(), 1);
        let sq = build_region(&LatticeSpec::Square, 0.0, 1.0, 0.0, 1.0).unwrap();
        let one = Configuration::with_open(4, &[0]);
        assert_eq!(cluster_count(&one, &sq, &BoundaryCondition::free(&sq)).unwrap(), 3);
    }

    #[test]
    fn weight_examples() {
        let r = single_edge();
        let free = BoundaryCondition::free(&r);
        let w_open = weight(&Configuration::all_open(1), &r, &hp(0.5, 2.0), &free).unwrap();
        let w_closed = weight(&Configuration::all_closed(1), &r, &hp(0.5, 2.0), &free).unwrap();
        assert_eq!(w_open, 1.0);
        assert_eq!(w_closed, 2.0);
        let weighted = RcParams::weighted(2f64.ln(), vec![1.0], 1.0).unwrap();
        assert_relative_eq!(weight(&Configuration::all_open(1), &r, &weighted, &free).unwrap(), 1.0, epsilon = 1e-15);
        assert!(weight(&Configuration::all_open(2), &r, &weighted, &free).is_err());
    }

    #[test]
    fn partition_function_examples() {
        let r = single_edge();
        assert_relative_eq!(partition_function(&r, &hp(0.5, 2.0), &BoundaryCondition::free(&r)).unwrap(), 3.0);
        // triangle at p = 1/2, q = 2: 1/8 * (8 + 3*4 + 3*2 + 2) = 3.5
        let t = triangle();
        assert_relative_eq!(partition_function(&t, &hp(0.5, 2.0), &BoundaryCondition::free(&t)).unwrap(), 3.5);
        let g = grid21();
        for bc in [BoundaryCondition::free(&g), BoundaryCondition::wired(&g)] {
            let z = partition_function(&g, &hp(0.37, 1.0), &bc).unwrap();
            assert_relative_eq!(z, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn capacity_error_names_the_cap() {
        let big = build_region(&LatticeSpec::Square, 0.0, 4.0, 0.0, 3.0).unwrap();
        assert!(big.num_edges() > EDGE_CAP);
        let err = partition_function(&big, &hp(0.5, 2.0), &BoundaryCondition::free(&big)).unwrap_err();
        assert!(matches!(err, Error::Capacity { cap: 24, .. }));
        assert!(err.to_string().contains("24"));
    }

    #[test]
    fn probability_examples() {
        let r = single_edge();
        let free = BoundaryCondition::free(&r);
        assert_relative_eq!(probability(&EventSpec::edge_open(0), &r, &hp(0.5, 2.0), &free).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        let g = grid21();
        for e in 0..7 {
            let pr = probability(&EventSpec::edge_open(e), &g, &hp(0.7, 1.0), &BoundaryCondition::wired(&g)).unwrap();
            assert_relative_eq!(pr, 0.7, epsilon = 1e-14);
        }
        assert_relative_eq!(probability(&EventSpec::always(), &g, &hp(0.3, 4.0), &BoundaryCondition::free(&g)).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn conditional_examples() {
        let g = grid21();
        let bc = BoundaryCondition::free(&g);
        let ev = EventSpec::edge_open(2);
        assert_eq!(conditional_probability(&ev, 2, true, &g, &hp(0.4, 2.0), &bc).unwrap(), 1.0);
        let uncond = probability(&EventSpec::edge_open(5), &g, &hp(0.4, 1.0), &bc).unwrap();
        let cond = conditional_probability(&EventSpec::edge_open(5), 2, true, &g, &hp(0.4, 1.0), &bc).unwrap();
        assert_relative_eq!(uncond, cond, epsilon = 1e-14);
        assert!(matches!(
            conditional_probability(&ev, 2, false, &g, &hp(1.0, 2.0), &bc),
            Err(Error::NullConditioning)
        ));

        // path u - v - w: brute force over the 4 configurations
        let r = path2();
        let free = BoundaryCondition::free(&r);
        let (p, q): (f64, f64) = (0.4, 2.0);
        let w = |a: bool, b: bool| {
            let o = a as i32 + b as i32;
            p.powi(o) * (1.0 - p).powi(2 - o) * q.powi(3 - o)
        };
        let expected = w(true, true) / (w(true, true) + w(true, false));
        let got = conditional_probability(&EventSpec::connected(0, 2), 0, true, &r, &hp(p, q), &free).unwrap();
        assert_relative_eq!(got, expected, epsilon = 1e-14);
    }

    #[test]
    fn influence_examples() {
        let g = grid21();
        let bc = BoundaryCondition::free(&g);
        let (e, m) = influence(&EventSpec::edge_open(3), &g, &hp(0.4, 2.0), &bc).unwrap();
        assert_eq!(e, 3);
        assert_relative_eq!(m, 1.0, epsilon = 1e-14);
        let (_, m) = influence(&EventSpec::always(), &g, &hp(0.4, 2.0), &bc).unwrap();
        assert_relative_eq!(m, 0.0, epsilon = 1e-14);
        assert!(matches!(
            influence(&EventSpec::new(Event::not(Event::edge_open(0))), &g, &hp(0.4, 2.0), &bc),
            Err(Error::NotIncreasing)
        ));

        // Bernoulli influence of the horizontal crossing by brute force
        let ch = EventSpec::crossing(Direction::Horizontal);
        let mut best: f64 = 0.0;
        for e in 0..7 {
            let mut gap = 0.0;
            for mask in 0..1u64 << 7 {
                if mask >> e & 1 == 1 {
                    continue;
                }
                let with = ch.holds(&Mask { bits: mask | 1 << e, len: 7 }, &g);
                let without = ch.holds(&Mask { bits: mask, len: 7 }, &g);
                if with && !without {
                    gap += 0.5f64.powi(6);
                }
            }
            best = best.max(gap);
        }
        let (_, m) = influence(&ch, &g, &hp(0.5, 1.0), &bc).unwrap();
        assert_relative_eq!(m, best, epsilon = 1e-14);
    }

    #[test]
    fn derivative_examples() {
        let g = grid21();
        let bc = BoundaryCondition::free(&g);
        for p in [0.2, 0.5, 0.9] {
            assert_relative_eq!(derivative_dp(&EventSpec::edge_open(1), &g, &hp(p, 1.0), &bc).unwrap(), 1.0, epsilon = 1e-12);
            assert!(derivative_dp(&EventSpec::always(), &g, &hp(p, 2.0), &bc).unwrap().abs() < 1e-12);
        }
        assert!(matches!(derivative_dp(&EventSpec::always(), &g, &hp(0.0, 2.0), &bc), Err(Error::SingularDerivative(_))));

        let ch = EventSpec::crossing(Direction::Horizontal);
        let h = 1e-5;
        let fd = (probability(&ch, &g, &hp(0.5 + h, 2.0), &bc).unwrap() - probability(&ch, &g, &hp(0.5 - h, 2.0), &bc).unwrap()) / (2.0 * h);
        let exact = derivative_dp(&ch, &g, &hp(0.5, 2.0), &bc).unwrap();
        assert_relative_eq!(exact, fd, max_relative = 1e-5);
    }

    #[test]
    fn hamming_examples() {
        let g = grid21();
        let bc = BoundaryCondition::free(&g);
        for p in [0.1, 0.5, 0.8] {
            let h = hamming_expectation(&EventSpec::edge_open(0), &g, &hp(p, 1.0), &bc).unwrap();
            assert_relative_eq!(h, 1.0 - p, epsilon = 1e-12);
            let all = EventSpec::new(Event::and((0..7).map(Event::edge_open).collect()));
            let h = hamming_expectation(&all, &g, &hp(p, 1.0), &bc).unwrap();
            assert_relative_eq!(h, 7.0 * (1.0 - p), epsilon = 1e-12);
        }
        // crossing oracle agrees with hypercube search
        let ch = EventSpec::crossing(Direction::Horizontal);
        let wrapped = EventSpec::new(Event::and(vec![Event::crossing(Direction::Horizontal), Event::True]));
        for q in [1.0, 2.0] {
            let a = hamming_expectation(&ch, &g, &hp(0.5, q), &bc).unwrap();
            let b = hamming_expectation(&wrapped, &g, &hp(0.5, q), &bc).unwrap();
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
        let impossible = EventSpec::connected(0, 0);
        assert!(hamming_expectation(&impossible, &g, &hp(0.5, 1.0), &bc).unwrap().abs() < 1e-15);
        let disconnected = Region::from_graph(vec![[0.0, 0.0], [1.0, 0.0], [5.0, 0.0]], vec![(0, 1)]).unwrap();
        let unreachable = EventSpec::connected(0, 2);
        assert!(matches!(
            hamming_expectation(&unreachable, &disconnected, &hp(0.5, 1.0), &BoundaryCondition::free(&disconnected)),
            Err(Error::Unsatisfiable)
        ));
    }

    #[test]
    fn results_do_not_depend_on_thread_count() {
        let g = build_region(&LatticeSpec::Square, 0.0, 3.0, 0.0, 2.0).unwrap();
        let bc = BoundaryCondition::wired(&g);
        let ch = EventSpec::crossing(Direction::Horizontal);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| (probability(&ch, &g, &hp(0.45, 2.5), &bc).unwrap(), partition_function(&g, &hp(0.45, 2.5), &bc).unwrap()))
        };
        let one = run(1);
        let three = run(3);
        assert_eq!(one.0.to_bits(), three.0.to_bits());
        assert_eq!(one.1.to_bits(), three.1.to_bits());
    }

    #[test]
    fn distribution_normalizes() {
        let g = grid21();
        let d = distribution(&g, &hp(0.3, 2.0), &BoundaryCondition::wired(&g)).unwrap();
        let mut s = CompensatedSum::default();
        d.iter().for_each(|&x| s.add(x));
        assert_relative_eq!(s.value(), 1.0, epsilon = 1e-14);
        let c = conditioned_distribution(&g, &hp(0.3, 2.0), &BoundaryCondition::wired(&g), 2, true).unwrap();
        assert!(c.iter().enumerate().all(|(m, &x)| m >> 2 & 1 == 1 || x == 0.0));
    }
}
