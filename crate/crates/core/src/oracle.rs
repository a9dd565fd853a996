//! Brute-force cross-checks for the exact pipeline.
//!
//! These are deliberately naive. Covolumes get Monte Carlo sampling (and a
//! trapezoid sum in the plane); the integrability index gets a simplex grid search.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::ExponentPoint;
use crate::polyhedron::NewtonPolyhedron;
use crate::rational::{common_denominator, from_f64, to_f64, Q};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub value: f64,
    /// Monte Carlo standard error `sqrt(p(1−p)/N)·M^n`.
    pub stderr: Option<f64>,
    /// Exact value on the grid, for grid searches.
    #[serde(skip)]
    pub exact: Option<Q>,
    /// Grid spacing bound `max‖v‖₁ / k`.
    #[serde(skip)]
    pub resolution: Option<Q>,
    pub samples: u64,
}

const CHUNK: u64 = 1 << 16;

/// Mixes a seed with a stream index (splitmix64 finalizer).
pub(crate) fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Monte Carlo estimate of `Covol(Γ)` with uniform samples in `[0, M]^n`.
///
/// A sample is a hit when it misses `Γ`, decided in floating point on the
/// facet inequalities; samples within `1e-9` (relative) of a facet are
/// re-tested with exact membership. Chunks are seeded by `(seed, chunk index)`
/// so parallel runs give bit-identical estimates.
pub fn mc_covol(gamma: &NewtonPolyhedron, samples: u64, seed: u64) -> Result<OracleEstimate> {
    let intercepts = gamma.axis_intercepts().ok_or(Error::InfiniteCovolume {
        axis: gamma.missing_axis().map_or(1, |a| a + 1),
    })?;
    let n = gamma.dim();
    let m = intercepts.iter().max().cloned().unwrap_or_default();
    if m.is_zero() || samples == 0 {
        return Ok(OracleEstimate {
            value: 0.0,
            stderr: Some(0.0),
            exact: None,
            resolution: None,
            samples,
        });
    }
    let m_f = to_f64(&m);
    let facets: Vec<(Vec<f64>, f64)> = gamma
        .facets()
        .iter()
        .map(|f| (f.normal.iter().map(to_f64).collect(), to_f64(&f.offset)))
        .collect();
    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, c));
            let count = CHUNK.min(samples - c * CHUNK);
            let mut x = vec![0.0f64; n];
            let mut hits = 0u64;
            for _ in 0..count {
                for xi in x.iter_mut() {
                    *xi = rng.random::<f64>() * m_f;
                }
                let mut outside = false;
                let mut near = false;
                for (a, c) in &facets {
                    let lhs: f64 = a.iter().zip(&x).map(|(ai, xi)| ai * xi).sum();
                    if (lhs - c).abs() < 1e-9 * c.abs().max(1.0) {
                        near = true;
                    } else if lhs < *c {
                        outside = true;
                        break;
                    }
                }
                if !outside && near {
                    let point = ExponentPoint::new(
                        x.iter().map(|&v| from_f64(v).expect("finite sample")).collect(),
                    )
                    .expect("nonnegative sample");
                    outside = !gamma.member(&point).expect("same dimension");
                }
                hits += outside as u64;
            }
            hits
        })
        .sum();
    let box_volume = m_f.powi(n as i32);
    let p = hits as f64 / samples as f64;
    Ok(OracleEstimate {
        value: p * box_volume,
        stderr: Some((p * (1.0 - p) / samples as f64).sqrt() * box_volume),
        exact: None,
        resolution: None,
        samples,
    })
}

/// Area under the lower convex chain of a planar polyhedron, by trapezoids.
pub fn staircase_covol_2d(gamma: &NewtonPolyhedron) -> Result<Q> {
    if gamma.dim() != 2 {
        return Err(Error::UnsupportedDimension {
            expected: 2,
            found: gamma.dim(),
        });
    }
    if let Some(axis) = gamma.missing_axis() {
        return Err(Error::InfiniteCovolume { axis: axis + 1 });
    }
    let mut chain: Vec<(Q, Q)> = gamma
        .vertices()
        .iter()
        .map(|v| (v.coords()[0].clone(), v.coords()[1].clone()))
        .collect();
    chain.sort();
    let two = Q::from_integer(2.into());
    Ok(chain.windows(2).fold(Q::zero(), |acc, w| {
        let (x0, y0) = &w[0];
        let (x1, y1) = &w[1];
        acc + (x1 - x0) * (y0 + y1) / &two
    }))
}

/// Grid search for `sup{min_v ⟨a, v⟩ : Σ a_k = 1}` over weights with denominator `k`.
///
/// The result lies below the true supremum by at most `max_v ‖v‖₁ / k`.
pub fn grid_lambda(gamma: &NewtonPolyhedron, resolution: u32) -> Result<OracleEstimate> {
    if gamma.is_empty() {
        return Err(Error::EmptyPolyhedron("grid search over the empty set"));
    }
    let k = resolution.max(1) as i64;
    let n = gamma.dim();
    // Integer vertex matrix V·D.
    let denom = common_denominator(gamma.vertices().iter().flat_map(|v| v.coords()));
    let scaled: Vec<Vec<i128>> = gamma
        .vertices()
        .iter()
        .map(|v| {
            v.coords()
                .iter()
                .map(|x| {
                    (x * Q::from_integer(denom.clone()))
                        .to_integer()
                        .to_i128()
                        .expect("vertex coordinates fit in i128")
                })
                .collect()
        })
        .collect();
    let mut best: Option<i128> = None;
    let mut count = 0u64;
    let mut comp = vec![0i64; n];
    visit_compositions(k, 0, &mut comp, &mut |c| {
        count += 1;
        let value = scaled
            .iter()
            .map(|v| v.iter().zip(c).map(|(x, &ci)| x * ci as i128).sum::<i128>())
            .min()
            .expect("nonempty");
        if best.is_none_or(|b| value > b) {
            best = Some(value);
        }
    });
    let exact = Q::new(BigInt::from(best.expect("grid is nonempty")), denom * BigInt::from(k));
    let max_norm = gamma
        .vertices()
        .iter()
        .map(|v| v.coords().iter().fold(Q::zero(), |acc, x| acc + x))
        .max()
        .expect("nonempty");
    Ok(OracleEstimate {
        value: to_f64(&exact),
        stderr: None,
        resolution: Some(max_norm / Q::from_integer(k.into())),
        exact: Some(exact),
        samples: count,
    })
}

/// Calls `f` on every composition of `total` into `parts.len()` nonnegative parts.
fn visit_compositions(total: i64, idx: usize, parts: &mut [i64], f: &mut impl FnMut(&[i64])) {
    if idx + 1 == parts.len() {
        parts[idx] = total;
        f(parts);
        return;
    }
    for v in 0..=total {
        parts[idx] = v;
        visit_compositions(total - v, idx + 1, parts, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::GermSupport;
    use crate::rational::{q, q_frac};

    fn poly(dim: usize, pts: &[&[i64]]) -> NewtonPolyhedron {
        NewtonPolyhedron::from_support(&GermSupport::from_int_points(dim, pts))
    }

    #[test]
    fn monte_carlo_examples() {
        let est = mc_covol(&poly(2, &[&[1, 0], &[0, 1]]), 200_000, 7).unwrap();
        let se = est.stderr.unwrap();
        assert!((est.value - 0.5).abs() <= 3.0 * se, "{est:?}");
        let est = mc_covol(&NewtonPolyhedron::orthant(2), 1000, 7).unwrap();
        assert_eq!(est.value, 0.0);
        let est = mc_covol(&poly(2, &[&[2, 0], &[1, 1], &[0, 3]]), 200_000, 11).unwrap();
        assert!((est.value - 2.5).abs() <= 3.0 * est.stderr.unwrap(), "{est:?}");
        assert!(matches!(
            mc_covol(&poly(2, &[&[1, 1]]), 10, 0),
            Err(Error::InfiniteCovolume { .. })
        ));
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let g = poly(3, &[&[2, 0, 0], &[0, 1, 0], &[1, 1, 1], &[0, 0, 3]]);
        let a = mc_covol(&g, 150_000, 42).unwrap();
        let b = mc_covol(&g, 150_000, 42).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn staircase_examples() {
        assert_eq!(staircase_covol_2d(&poly(2, &[&[3, 0], &[0, 4]])).unwrap(), q(6));
        assert_eq!(
            staircase_covol_2d(&poly(2, &[&[2, 0], &[1, 1], &[0, 3]])).unwrap(),
            q_frac(5, 2)
        );
        assert_eq!(staircase_covol_2d(&NewtonPolyhedron::orthant(2)).unwrap(), q(0));
        assert!(matches!(
            staircase_covol_2d(&NewtonPolyhedron::orthant(3)),
            Err(Error::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn grid_examples() {
        let g = grid_lambda(&poly(2, &[&[1, 0], &[0, 1]]), 100).unwrap();
        assert_eq!(g.exact, Some(q_frac(1, 2)));
        let g = grid_lambda(&poly(2, &[&[2, 0], &[0, 3]]), 5).unwrap();
        assert_eq!(g.exact, Some(q_frac(6, 5)));
        // k = 1: only the corners e_k, value max_k min_v v_k.
        let g = grid_lambda(&poly(2, &[&[2, 1], &[1, 3]]), 1).unwrap();
        assert_eq!(g.exact, Some(q(1)));
        assert_eq!(g.samples, 2);
    }
}
