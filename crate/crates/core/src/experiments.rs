//! Monte Carlo experiment drivers behind the command-line tool: crossing
//! sweeps, decay-rate fits, threshold windows, the covering inequality, and
//! critical-point tables.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::configuration::Restricted;
use crate::connectivity::{clusters, crossing};
use crate::dynamics::{replica_means, Estimate, SamplerOptions};
use crate::error::{Error, Result};
use crate::exact::RcParams;
use crate::lattice::{build_region, embed_edges, pstar, solve_critical_point, Direction, LatticeSpec, Region};
use crate::verify::BcKind;

/// Edge weights for an experiment: a grid of homogeneous `p`, or a grid of
/// inverse temperatures with couplings repeated cyclically over the edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum WeightGrid {
    Homogeneous { p: Vec<f64> },
    Weighted { beta: Vec<f64>, couplings: Vec<f64> },
}

impl WeightGrid {
    pub fn len(&self) -> usize {
        match self {
            WeightGrid::Homogeneous { p } => p.len(),
            WeightGrid::Weighted { beta, .. } => beta.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parameters of grid point `i` on `region`, with its column label.
    pub fn params(&self, i: usize, q: f64, region: &Region) -> Result<(String, RcParams)> {
        match self {
            WeightGrid::Homogeneous { p } => Ok((format!("{}", p[i]), RcParams::homogeneous(p[i], q)?)),
            WeightGrid::Weighted { beta, couplings } => {
                if couplings.is_empty() {
                    return Err(Error::InvalidParameter("weighted mode needs at least one coupling".into()));
                }
                let j = (0..region.num_edges()).map(|e| couplings[e % couplings.len()]).collect();
                Ok((format!("beta={}", beta[i]), RcParams::weighted(beta[i], j, q)?))
            }
        }
    }
}

fn rectangle_at(lattice: &LatticeSpec, width: f64, height: f64) -> Result<Region> {
    build_region(lattice, 0.0, width, 0.0, height)
}

fn crossing_label(direction: Direction, aspect: f64, long: bool) -> String {
    let d = if direction == Direction::Horizontal { "Ch" } else { "Cv" };
    if long {
        format!("{d}({aspect}n,n)")
    } else {
        format!("{d}(n+1,n)")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossingRow {
    pub lattice: String,
    pub q: f64,
    pub bc: String,
    pub n: usize,
    pub p: String,
    pub event: String,
    pub estimate: f64,
    pub stderr: f64,
    pub replicas: usize,
    pub seed: u64,
}

impl CrossingRow {
    pub const HEADER: &'static str = "lattice,q,bc,n,p,event,estimate,stderr,replicas,seed";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.lattice, self.q, self.bc, self.n, self.p, self.event, self.estimate, self.stderr, self.replicas, self.seed
        )
    }
}

/// Crossing estimates of the `aspect·n × n` rectangle in both directions and
/// of the `(n+1) × n` rectangle horizontally, for every size and weight.
pub fn crossing_sweep(
    lattice: &LatticeSpec,
    q: f64,
    weights: &WeightGrid,
    bc: BcKind,
    sizes: &[usize],
    aspect: f64,
    sampler: &SamplerOptions,
) -> Result<Vec<CrossingRow>> {
    let mut rows = Vec::new();
    for &n in sizes {
        let nf = n as f64;
        let long = Arc::new(rectangle_at(lattice, aspect * nf, nf)?);
        let near_square = Arc::new(rectangle_at(lattice, nf + 1.0, nf)?);
        for i in 0..weights.len() {
            let (plabel, params) = weights.params(i, q, &long)?;
            let est = crossing_estimates(&long, &params, bc, sampler, &[Direction::Horizontal, Direction::Vertical])?;
            for (k, dir) in [Direction::Horizontal, Direction::Vertical].into_iter().enumerate() {
                rows.push(row(lattice, q, bc, n, &plabel, crossing_label(dir, aspect, true), est[k], sampler.seed));
            }
            let (_, params) = weights.params(i, q, &near_square)?;
            let est = crossing_estimates(&near_square, &params, bc, sampler, &[Direction::Horizontal])?;
            rows.push(row(lattice, q, bc, n, &plabel, crossing_label(Direction::Horizontal, aspect, false), est[0], sampler.seed));
        }
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn row(lattice: &LatticeSpec, q: f64, bc: BcKind, n: usize, p: &str, event: String, e: Estimate, seed: u64) -> CrossingRow {
    CrossingRow {
        lattice: lattice.name().to_string(),
        q,
        bc: bc.label().to_string(),
        n,
        p: p.to_string(),
        event,
        estimate: e.mean,
        stderr: e.stderr,
        replicas: e.replicas,
        seed,
    }
}

/// Estimates of crossing probabilities of `region` in the given directions.
pub fn crossing_estimates(
    region: &Arc<Region>,
    params: &RcParams,
    bc: BcKind,
    sampler: &SamplerOptions,
    directions: &[Direction],
) -> Result<Vec<Estimate>> {
    for &d in directions {
        crossing(&crate::Configuration::all_closed(region.num_edges()), region, d)?;
    }
    let means = replica_means(region, params, &bc.build(region), sampler, directions.len(), |config, region, acc| {
        for (k, &d) in directions.iter().enumerate() {
            if crossing(config, region, d).expect("sides checked") {
                acc[k] += 1.0;
            }
        }
    })?;
    Ok(split_estimates(&means, sampler.sweeps))
}

fn split_estimates(means: &[Vec<f64>], sweeps: u64) -> Vec<Estimate> {
    let k = means.first().map_or(0, Vec::len);
    (0..k)
        .map(|i| Estimate::from_replica_means(&means.iter().map(|r| r[i]).collect::<Vec<_>>(), sweeps))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayPoint {
    pub n: usize,
    pub estimate: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub points: Vec<DecayPoint>,
    /// Sizes dropped because their estimate was zero.
    pub dropped: Vec<usize>,
    /// Fitted rate c in φ(0 ↔ ∂Λ_n) ≈ A exp(-c n).
    pub rate: f64,
    pub rate_stderr: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Whether the fit supports a positive rate: c > 3 standard errors and
    /// c > 1e-3.
    pub decaying: bool,
}

/// Estimates φ(x ↔ ∂(x + Λ_n)) for each `n` inside one ambient box
/// `Λ_R`, `R = max n + margin`, averaging over every origin x whose box
/// `x + Λ_n` fits in `Λ_R`, then fits log-probability against `n`.
pub fn decay_fit(
    lattice: &LatticeSpec,
    params_for: impl Fn(&Region) -> Result<RcParams>,
    bc: BcKind,
    sizes: &[usize],
    margin: usize,
    sampler: &SamplerOptions,
) -> Result<DecayFit> {
    if sizes.len() < 4 {
        return Err(Error::InvalidParameter("a decay fit needs at least 4 sizes".into()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) || sizes[0] == 0 {
        return Err(Error::InvalidParameter("sizes must be positive and strictly increasing".into()));
    }
    let reach = (sizes[sizes.len() - 1] + margin) as f64;
    let region = Arc::new(build_region(lattice, -reach, reach, -reach, reach)?);
    let params = params_for(&region)?;
    // room[v]: distance from v to the ambient boundary in the sup norm
    let room: Vec<f64> = region.vertices().iter().map(|&[x, y]| reach - x.abs().max(y.abs())).collect();
    let sizes_f: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let origins: Vec<f64> = sizes_f.iter().map(|&n| room.iter().filter(|&&r| r >= n - 1e-9).count() as f64).collect();
    let means = replica_means(&region, &params, &bc.build(&region), sampler, sizes.len(), |config, region, acc| {
        let partition = clusters(config, region, None).expect("sizes match");
        for (v, &r) in room.iter().enumerate() {
            if r < sizes_f[0] - 1e-9 {
                continue;
            }
            let radius = partition.radius_from(region, v);
            for (k, &n) in sizes_f.iter().enumerate() {
                if n > r + 1e-9 || radius < n - 1e-9 {
                    break;
                }
                acc[k] += 1.0 / origins[k];
            }
        }
    })?;
    let estimates = split_estimates(&means, sampler.sweeps);
    let points: Vec<DecayPoint> =
        sizes.iter().zip(&estimates).map(|(&n, e)| DecayPoint { n, estimate: e.mean, stderr: e.stderr }).collect();
    fit_decay(points)
}

/// Least-squares fit of log-probability against n, dropping zero estimates.
pub fn fit_decay(points: Vec<DecayPoint>) -> Result<DecayFit> {
    let (kept, dropped): (Vec<&DecayPoint>, Vec<&DecayPoint>) = points.iter().partition(|p| p.estimate > 0.0);
    let dropped: Vec<usize> = dropped.iter().map(|p| p.n).collect();
    for n in &dropped {
        log::warn!("dropping n = {n}: zero estimate");
    }
    if kept.is_empty() {
        return Err(Error::InvalidParameter("every estimate is zero; nothing to fit".into()));
    }
    if kept.len() < 3 {
        return Err(Error::InvalidParameter(format!("only {} non-zero estimates; need 3", kept.len())));
    }
    let k = kept.len() as f64;
    let xs: Vec<f64> = kept.iter().map(|p| p.n as f64).collect();
    let ys: Vec<f64> = kept.iter().map(|p| p.estimate.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let slope_se = (sse / (k - 2.0) / sxx).sqrt();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { f64::NAN };
    let rate = -slope;
    let decaying = rate > 1e-3 && rate > 3.0 * slope_se && r_squared.is_finite();
    Ok(DecayFit { points, dropped, rate, rate_stderr: slope_se, intercept, r_squared, decaying })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalRow {
    pub q: f64,
    pub square: f64,
    pub triangular: f64,
    pub hexagonal: f64,
    /// |p*(p_triangular) - p_hexagonal|.
    pub duality_gap: f64,
}

impl CriticalRow {
    pub const HEADER: &'static str = "q,square,triangular,hexagonal,duality_gap";

    pub fn to_csv(&self) -> String {
        format!("{},{:.12},{:.12},{:.12},{:e}", self.q, self.square, self.triangular, self.hexagonal, self.duality_gap)
    }
}

pub fn critical_points(qs: &[f64]) -> Result<Vec<CriticalRow>> {
    qs.iter()
        .map(|&q| {
            let square = solve_critical_point(&LatticeSpec::Square, q)?;
            let triangular = solve_critical_point(&LatticeSpec::Triangular, q)?;
            let hexagonal = solve_critical_point(&LatticeSpec::Hexagonal, q)?;
            Ok(CriticalRow { q, square, triangular, hexagonal, duality_gap: (pstar(triangular, q) - hexagonal).abs() })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowRow {
    pub n: usize,
    pub p_lo: f64,
    pub p_hi: f64,
    pub width: f64,
    pub center: f64,
}

impl WindowRow {
    pub const HEADER: &'static str = "lattice,q,bc,n,p_lo,p_hi,width,center,replicas,seed";
}

/// For each n, bisects on p for the points where the estimated crossing
/// probability of the `aspect·n × n` rectangle in the long direction passes
/// 0.25 and 0.75. Every estimate reuses the same seed.
#[allow(clippy::too_many_arguments)]
pub fn threshold_window(
    lattice: &LatticeSpec,
    q: f64,
    bc: BcKind,
    sizes: &[usize],
    aspect: f64,
    p_range: (f64, f64),
    tolerance: f64,
    sampler: &SamplerOptions,
) -> Result<Vec<WindowRow>> {
    if sizes.len() < 2 {
        return Err(Error::InvalidParameter("a threshold window needs at least 2 sizes".into()));
    }
    let (lo, hi) = p_range;
    if !(0.0 <= lo && lo < hi && hi <= 1.0) {
        return Err(Error::InvalidParameter(format!("bad p range [{lo}, {hi}]")));
    }
    let mut rows = Vec::new();
    for &n in sizes {
        let region = Arc::new(rectangle_at(lattice, aspect * n as f64, n as f64)?);
        let f = |p: f64| -> Result<f64> {
            let params = RcParams::homogeneous(p, q)?;
            Ok(crossing_estimates(&region, &params, bc, sampler, &[Direction::Horizontal])?[0].mean)
        };
        let (f_lo, f_hi) = (f(lo)?, f(hi)?);
        if f_lo > 0.25 || f_hi < 0.75 {
            return Err(Error::NoBracket(format!(
                "n = {n}: crossing estimate is {f_lo:.3} at p = {lo} and {f_hi:.3} at p = {hi}; widen the p range"
            )));
        }
        let bisect = |target: f64| -> Result<f64> {
            let (mut a, mut b) = (lo, hi);
            while b - a > tolerance {
                let mid = 0.5 * (a + b);
                if f(mid)? < target {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            Ok(0.5 * (a + b))
        };
        let (p_lo, p_hi) = (bisect(0.25)?, bisect(0.75)?);
        rows.push(WindowRow { n, p_lo, p_hi, width: p_hi - p_lo, center: 0.5 * (p_lo + p_hi) });
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoveringResult {
    /// Vertical crossing of the long `2N × n` rectangle.
    pub long: Estimate,
    /// Vertical crossing of a `2n × n` rectangle at the center.
    pub short: Estimate,
    pub lhs: f64,
    pub rhs: f64,
    /// One standard error of lhs - rhs (delta method, estimates treated as
    /// independent).
    pub sigma: f64,
}

/// Measures 1 - φ(C_v(2N, n)) and (1 - φ(C_v(2n, n)))^{2N/n}, both
/// rectangles sitting inside one ambient rectangle padded by `margin`.
pub fn covering_inequality(
    lattice: &LatticeSpec,
    params_for: impl Fn(&Region) -> Result<RcParams>,
    bc: BcKind,
    n: usize,
    big_n: usize,
    margin: f64,
    sampler: &SamplerOptions,
) -> Result<CoveringResult> {
    if n == 0 || big_n < n {
        return Err(Error::InvalidParameter("need 1 <= n <= N".into()));
    }
    let (nf, bf) = (n as f64, big_n as f64);
    let ambient = Arc::new(build_region(lattice, -margin, 2.0 * bf + margin, -margin, nf + margin)?);
    let long = build_region(lattice, 0.0, 2.0 * bf, 0.0, nf)?;
    let short = build_region(lattice, bf - nf, bf + nf, 0.0, nf)?;
    let long_map = embed_edges(&long, &ambient)?;
    let short_map = embed_edges(&short, &ambient)?;
    let params = params_for(&ambient)?;
    let means = replica_means(&ambient, &params, &bc.build(&ambient), sampler, 2, |config, _, acc| {
        let view = Restricted { inner: config, map: &long_map };
        if crossing(&view, &long, Direction::Vertical).expect("sides") {
            acc[0] += 1.0;
        }
        let view = Restricted { inner: config, map: &short_map };
        if crossing(&view, &short, Direction::Vertical).expect("sides") {
            acc[1] += 1.0;
        }
    })?;
    let est = split_estimates(&means, sampler.sweeps);
    let k = 2.0 * bf / nf;
    let lhs = 1.0 - est[0].mean;
    let base = 1.0 - est[1].mean;
    let rhs = base.powf(k);
    let d_rhs = k * base.powf(k - 1.0) * est[1].stderr;
    let sigma = (est[0].stderr.powi(2) + d_rhs.powi(2)).sqrt();
    Ok(CoveringResult { long: est[0], short: est[1], lhs, rhs, sigma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Algorithm;
    use approx::assert_relative_eq;

    fn quick(seed: u64) -> SamplerOptions {
        SamplerOptions { algorithm: Algorithm::Heatbath, sweeps: 400, burn_in: 20, replicas: 4, seed, start_open: false }
    }

    #[test]
    fn critical_table() {
        let rows = critical_points(&[1.0, 2.0]).unwrap();
        assert_relative_eq!(rows[0].square, 0.5, epsilon = 1e-14);
        assert_relative_eq!(rows[0].triangular, 2.0 * (std::f64::consts::PI / 18.0).sin(), epsilon = 1e-12);
        assert_relative_eq!(rows[0].hexagonal, 1.0 - rows[0].triangular, epsilon = 1e-12);
        assert_relative_eq!(rows[1].square, 2f64.sqrt() / (1.0 + 2f64.sqrt()), epsilon = 1e-14);
        assert!(rows.iter().all(|r| r.duality_gap < 1e-10));
    }

    #[test]
    fn crossing_at_p_one() {
        let weights = WeightGrid::Homogeneous { p: vec![1.0] };
        let rows = crossing_sweep(&LatticeSpec::Square, 1.0, &weights, BcKind::Free, &[3], 2.0, &quick(1)).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.estimate == 1.0));
        assert_eq!(rows[0].event, "Ch(2n,n)");
        assert_eq!(rows[2].event, "Ch(n+1,n)");
    }

    #[test]
    fn weighted_grid_cycles_couplings() {
        let region = rectangle_at(&LatticeSpec::Square, 2.0, 1.0).unwrap();
        let grid = WeightGrid::Weighted { beta: vec![0.5], couplings: vec![1.0, 2.0] };
        let (label, params) = grid.params(0, 2.0, &region).unwrap();
        assert_eq!(label, "beta=0.5");
        assert_relative_eq!(params.edge_p(1), 1.0 - (-1.0f64).exp());
        assert_relative_eq!(params.edge_p(2), 1.0 - (-0.5f64).exp());
    }

    #[test]
    fn fit_recovers_exact_exponential() {
        let points = (4..=10).map(|n| DecayPoint { n, estimate: 0.7 * (-0.4 * n as f64).exp(), stderr: 0.0 }).collect();
        let fit = fit_decay(points).unwrap();
        assert_relative_eq!(fit.rate, 0.4, epsilon = 1e-12);
        assert_relative_eq!(fit.r_squared, 1.0, epsilon = 1e-12);
        assert!(fit.decaying);
    }

    #[test]
    fn fit_drops_zero_points_and_rejects_all_zero() {
        let mut points: Vec<DecayPoint> = (4..=8).map(|n| DecayPoint { n, estimate: (-0.5 * n as f64).exp(), stderr: 0.01 }).collect();
        points.push(DecayPoint { n: 9, estimate: 0.0, stderr: 0.0 });
        let fit = fit_decay(points.clone()).unwrap();
        assert_eq!(fit.dropped, vec![9]);
        points.iter_mut().for_each(|p| p.estimate = 0.0);
        assert!(fit_decay(points).is_err());
    }

    #[test]
    fn flat_profile_is_not_decaying() {
        let points = (4..=8).map(|n| DecayPoint { n, estimate: 1.0, stderr: 0.0 }).collect();
        assert!(!fit_decay(points).unwrap().decaying);
    }

    #[test]
    fn subcritical_grid_does_not_bracket() {
        let err = threshold_window(&LatticeSpec::Square, 1.0, BcKind::Free, &[3, 4], 2.0, (0.05, 0.2), 0.01, &quick(2)).unwrap_err();
        assert!(matches!(err, Error::NoBracket(_)));
    }
}
