use crate::error::{Error, Result};

use super::LatticeSpec;

/// Dual edge-weight: the solution p* of p p* / ((1-p)(1-p*)) = q.
pub fn pstar(p: f64, q: f64) -> f64 {
    let num = q * (1.0 - p);
    num / (num + p)
}

/// Critical edge-weight of a built-in lattice at cluster-weight `q >= 1`.
pub fn solve_critical_point(lattice: &LatticeSpec, q: f64) -> Result<f64> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::InvalidParameter(format!("cluster weight must be >= 1, got {q}")));
    }
    match lattice {
        LatticeSpec::Square => Ok(q.sqrt() / (1.0 + q.sqrt())),
        LatticeSpec::Triangular => Ok(bisect(|p| p.powi(3) + 3.0 * p * p * (1.0 - p) - q * (1.0 - p).powi(3))),
        LatticeSpec::Hexagonal => Ok(bisect(|p| {
            p.powi(3) - 3.0 * q * p * (1.0 - p).powi(2) - q * q * (1.0 - p).powi(3)
        })),
        LatticeSpec::Custom(_) => Err(Error::UnsupportedLattice("custom".into())),
    }
}

/// Root of an increasing-sign function on [0,1] with f(0) < 0 < f(1).
fn bisect(f: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
