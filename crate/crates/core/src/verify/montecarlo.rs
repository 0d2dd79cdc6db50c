use std::sync::Arc;

use serde::Serialize;

use super::{CheckReport, Point};
use crate::boundary::BoundaryCondition;
use crate::connectivity::clusters;
use crate::dynamics::{default_algorithm, estimate, replica_means, Estimate, SamplerOptions};
use crate::error::{Error, Result};
use crate::exact::{EventSpec, RcParams};
use crate::lattice::{rectangle, square_box, Direction, LatticeSpec};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GgOptions {
    pub n: usize,
    pub q: f64,
    pub p0: f64,
    pub p1: f64,
    pub replicas: usize,
    pub sweeps: u64,
    pub burn_in: u64,
    pub seed: u64,
}

impl GgOptions {
    /// The default report points: Bernoulli around 1/2, the degenerate
    /// p0 = p1 case, and q = 2 straddling √2/(1+√2).
    pub fn defaults(seed: u64) -> Vec<GgOptions> {
        let base = GgOptions { n: 4, q: 1.0, p0: 0.45, p1: 0.55, replicas: 8, sweeps: 1500, burn_in: 100, seed };
        vec![
            base.clone(),
            GgOptions { p0: 0.5, p1: 0.5, ..base.clone() },
            GgOptions { q: 2.0, p0: 0.55, p1: 0.62, ..base },
        ]
    }
}

/// Finite-volume surrogate of the one-arm bound
/// φ_{p0}(C_h(2n,n)) (1 - φ_{p1}(C_h(2n,n))) ≤ φ_{p1}(0 ↔ ∂Λ_n)^{c (p1 - p0)}.
/// Reports the implied exponent c; asserts only that both sides are below 1.
pub fn check_gg_corollary(options: &GgOptions) -> Result<CheckReport> {
    let GgOptions { n, q, p0, p1, .. } = *options;
    if n == 0 || p0 > p1 {
        return Err(Error::InvalidParameter("need n >= 1 and p0 <= p1".into()));
    }
    let rect = Arc::new(rectangle(&LatticeSpec::Square, 2.0 * n as f64, n as f64)?);
    let ch = EventSpec::crossing(Direction::Horizontal);
    let sampler = |p: f64, salt: u64| -> Result<(RcParams, SamplerOptions)> {
        let params = RcParams::homogeneous(p, q)?;
        let sopts = SamplerOptions {
            algorithm: default_algorithm(&params),
            sweeps: options.sweeps,
            burn_in: options.burn_in,
            replicas: options.replicas,
            seed: options.seed.wrapping_add(salt),
            start_open: false,
        };
        Ok((params, sopts))
    };
    let (params0, s0) = sampler(p0, 0)?;
    let (params1, s1) = sampler(p1, 1)?;
    let a = estimate(&ch, &rect, &params0, &BoundaryCondition::free(&rect), &s0)?;
    let b = estimate(&ch, &rect, &params1, &BoundaryCondition::free(&rect), &s1)?;
    let arm = one_arm_max(n, &params1, &sampler(p1, 2)?.1)?;

    let lhs = a.mean * (1.0 - b.mean);
    let lhs_err = ((1.0 - b.mean).powi(2) * a.stderr.powi(2) + a.mean.powi(2) * b.stderr.powi(2)).sqrt();
    let ps = format!("{p0}->{p1}");
    let point = Point { check: "gg-corollary", region: &format!("square-n{n}"), p: &ps, q, bc: "free", event: "Ch(2n,n)|0<->dLn" };
    let mut note = format!(
        "lhs {lhs:.5} +- {lhs_err:.5}; one-arm {:.5} +- {:.5}; finite-volume surrogate of an infinite-volume bound",
        arm.mean, arm.stderr
    );
    let zero = lhs <= 0.0 || arm.mean <= 0.0;
    let c = if zero || p1 == p0 || arm.mean >= 1.0 || lhs >= 1.0 {
        note.push_str(if zero { "; zero estimate, exponent not computed" } else { "; exponent undefined" });
        f64::NAN
    } else {
        let c = lhs.ln() / ((p1 - p0) * arm.mean.ln());
        let rel = ((lhs_err / (lhs * lhs.ln())).powi(2) + (arm.stderr / (arm.mean * arm.mean.ln())).powi(2)).sqrt();
        note.push_str(&format!("; implied c {c:.4} +- {:.4}", (c * rel).abs()));
        c
    };
    let report = CheckReport::reported(point, lhs, arm.mean, c).with_note(note);
    Ok(if lhs < 1.0 && arm.mean < 1.0 { report } else { CheckReport { status: super::Status::Fail, ..report } })
}

/// Largest estimated φ(x ↔ ∂(x + Λ_n)) over translates x ∈ Λ_n inside the
/// ambient box Λ_{2n}.
fn one_arm_max(n: usize, params: &RcParams, options: &SamplerOptions) -> Result<Estimate> {
    let region = Arc::new(square_box(2 * n)?);
    let origins: Vec<usize> = (0..region.num_vertices())
        .filter(|&v| {
            let [x, y] = region.position(v);
            x.abs().max(y.abs()) <= n as f64 + 1e-9
        })
        .collect();
    let means = replica_means(&region, params, &BoundaryCondition::free(&region), options, origins.len(), |config, region, acc| {
        let partition = clusters(config, region, None).expect("sizes match");
        for (slot, &v) in origins.iter().enumerate() {
            if partition.radius_from(region, v) >= n as f64 - 1e-9 {
                acc[slot] += 1.0;
            }
        }
    })?;
    (0..origins.len())
        .map(|slot| Estimate::from_replica_means(&means.iter().map(|r| r[slot]).collect::<Vec<_>>(), options.sweeps))
        .max_by(|a, b| a.mean.total_cmp(&b.mean))
        .ok_or_else(|| Error::Internal("no translates".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Status;

    #[test]
    fn bernoulli_report() {
        let opts = GgOptions { sweeps: 300, ..GgOptions::defaults(1)[0].clone() };
        let r = check_gg_corollary(&opts).unwrap();
        assert_eq!(r.status, Status::ReportedOnly);
        assert!(r.lhs < 1.0 && r.rhs < 1.0);
        assert!(r.note.contains("implied c"));
    }

    #[test]
    fn degenerate_interval() {
        let opts = GgOptions { sweeps: 200, ..GgOptions::defaults(1)[1].clone() };
        let r = check_gg_corollary(&opts).unwrap();
        assert!(r.lhs <= 0.25 + 0.05);
        assert!(r.margin.is_nan());
    }
}
