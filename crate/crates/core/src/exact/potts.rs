use crate::error::{Error, Result};
use crate::lattice::Region;

use super::sum::CompensatedSum;

/// Largest number of colorings q^|V| accepted by enumeration.
pub const POTTS_CAP: u64 = 20_000_000;

/// Probability of a spin event under the q-state Potts measure with
/// Hamiltonian `-sum_e J_e 1{σ_x = σ_y}` at inverse temperature `beta`;
/// spins take values in `1..=q`.
pub fn potts_probability(
    spin_event: impl Fn(&[u32]) -> bool,
    region: &Region,
    q: u32,
    beta: f64,
    couplings: &[f64],
) -> Result<f64> {
    let mut a = CompensatedSum::default();
    let z = potts_sum(region, q, beta, couplings, |sigma, w| {
        if spin_event(sigma) {
            a.add(w);
        }
    })?;
    Ok(a.value() / z)
}

/// μ(σ_x = σ_y) for every vertex pair.
pub fn potts_agreement_matrix(region: &Region, q: u32, beta: f64, couplings: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = region.num_vertices();
    let mut agree = vec![CompensatedSum::default(); n * n];
    let z = potts_sum(region, q, beta, couplings, |sigma, w| {
        for x in 0..n {
            for y in 0..n {
                if sigma[x] == sigma[y] {
                    agree[x * n + y].add(w);
                }
            }
        }
    })?;
    Ok((0..n).map(|x| (0..n).map(|y| agree[x * n + y].value() / z).collect()).collect())
}

/// Visits every coloring with its Boltzmann weight; returns the partition
/// function.
fn potts_sum(region: &Region, q: u32, beta: f64, couplings: &[f64], mut visit: impl FnMut(&[u32], f64)) -> Result<f64> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("Potts model needs q >= 2, got {q}")));
    }
    if couplings.len() != region.num_edges() {
        return Err(Error::SizeMismatch { expected: region.num_edges(), got: couplings.len() });
    }
    let n = region.num_vertices();
    let total = (q as u64).checked_pow(n as u32).filter(|&t| t <= POTTS_CAP);
    let Some(total) = total else {
        let size = (q as f64).powi(n as i32).min(u64::MAX as f64) as u64;
        return Err(Error::Capacity { size, cap: POTTS_CAP });
    };
    let edge_boltzmann: Vec<f64> = couplings.iter().map(|j| (beta * j).exp()).collect();
    let mut sigma = vec![1u32; n];
    let mut z = CompensatedSum::default();
    for _ in 0..total {
        let w: f64 = region
            .edges()
            .iter()
            .zip(&edge_boltzmann)
            .filter(|(&(u, v), _)| sigma[u] == sigma[v])
            .map(|(_, &b)| b)
            .product();
        z.add(w);
        visit(&sigma, w);
        // next coloring, base q odometer
        for s in sigma.iter_mut() {
            *s += 1;
            if *s <= q {
                break;
            }
            *s = 1;
        }
    }
    Ok(z.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BoundaryCondition;
    use crate::exact::{probability, EventSpec, RcParams};
    use approx::assert_relative_eq;

    #[test]
    fn infinite_temperature_is_uniform() {
        let r = Region::from_graph(vec![[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]], vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        for q in [2, 3, 4] {
            let pr = potts_probability(|s| s[0] == s[2], &r, q, 0.0, &[1.0; 3]).unwrap();
            assert_relative_eq!(pr, 1.0 / q as f64, epsilon = 1e-14);
        }
    }

    #[test]
    fn single_edge_two_states() {
        let r = Region::from_graph(vec![[0.0, 0.0], [1.0, 0.0]], vec![(0, 1)]).unwrap();
        let pr = potts_probability(|s| s[0] == s[1], &r, 2, 2f64.ln(), &[1.0]).unwrap();
        assert_relative_eq!(pr, 2.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn two_point_identity_on_a_triangle() {
        let r = Region::from_graph(vec![[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]], vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let (q, beta, j) = (3u32, 0.8, vec![1.0, 0.5, 2.0]);
        let spin = potts_probability(|s| s[0] == s[1], &r, q, beta, &j).unwrap();
        let params = RcParams::weighted(beta, j, q as f64).unwrap();
        let conn = probability(&EventSpec::connected(0, 1), &r, &params, &BoundaryCondition::free(&r)).unwrap();
        assert_relative_eq!(spin - 1.0 / 3.0, 2.0 / 3.0 * conn, epsilon = 1e-12);
    }

    #[test]
    fn capacity() {
        let pts: Vec<[f64; 2]> = (0..16).map(|i| [i as f64, 0.0]).collect();
        let edges = (0..15).map(|i| (i, i + 1)).collect();
        let r = Region::from_graph(pts, edges).unwrap();
        assert!(matches!(potts_probability(|_| true, &r, 3, 1.0, &[1.0; 15]), Err(Error::Capacity { .. })));
    }
}
