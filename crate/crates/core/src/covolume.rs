//! Covolumes, mixed covolumes and the Kushnirenko/Bernstein multiplicity bounds.
//!
//! `Covol(Γ)` is the volume of `R_+^n ∖ Γ`. With `M` the largest axis
//! intercept, a point with some coordinate `x_k > M` dominates the axis vertex
//! `c_k·e_k` (`c_k <= M`) and so lies in `Γ`; the complement therefore sits in
//! the box `[0, M]^n` and `Covol(Γ) = M^n − Vol(Γ ∩ [0, M]^n)`. The clipped
//! polytope is enumerated by double description and triangulated as a fan
//! from its first vertex over recursively triangulated facets.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dd::extreme_rays;
use crate::error::{Error, Result};
use crate::germ::MapSpec;
use crate::linalg::{affine_dimension, determinant};
use crate::polyhedron::NewtonPolyhedron;
use crate::rational::{dot, factorial, ExtRational, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CovolResult {
    pub value: ExtRational,
    /// `n!·Covol`, the residual Monge–Ampère mass of the indicator.
    pub residual_ma_mass: Option<ExtRational>,
    pub triangulation_size: usize,
}

impl CovolResult {
    fn infinite() -> Self {
        CovolResult {
            value: ExtRational::Infinite,
            residual_ma_mass: None,
            triangulation_size: 0,
        }
    }
}

pub fn covol(gamma: &NewtonPolyhedron) -> CovolResult {
    let Some(intercepts) = gamma.axis_intercepts() else {
        return CovolResult::infinite();
    };
    let n = gamma.dim();
    let m = intercepts.iter().max().cloned().unwrap_or_default();
    if m.is_zero() {
        return CovolResult {
            value: ExtRational::Finite(Q::zero()),
            residual_ma_mass: Some(ExtRational::Finite(Q::zero())),
            triangulation_size: 0,
        };
    }
    let clipped = ClippedPolytope::new(gamma, &m);
    let (inside, simplices) = clipped.volume();
    let box_volume = (0..n).fold(Q::one(), |acc, _| acc * &m);
    let value = box_volume - inside;
    CovolResult {
        residual_ma_mass: Some(ExtRational::Finite(factorial(n) * &value)),
        value: ExtRational::Finite(value),
        triangulation_size: simplices,
    }
}

/// `Γ ∩ [0, M]^n` in both representations.
struct ClippedPolytope {
    dim: usize,
    vertices: Vec<Vec<Q>>,
    /// For each inequality, the indices of the vertices where it is tight.
    tight: Vec<Vec<usize>>,
}

impl ClippedPolytope {
    fn new(gamma: &NewtonPolyhedron, m: &Q) -> Self {
        let n = gamma.dim();
        // ⟨a, x⟩ >= b stored as (a, b).
        let mut ineqs: Vec<(Vec<Q>, Q)> = gamma
            .facets()
            .iter()
            .map(|f| (f.normal.clone(), f.offset.clone()))
            .collect();
        for k in 0..n {
            let mut lo = vec![Q::zero(); n];
            lo[k] = Q::one();
            ineqs.push((lo, Q::zero()));
            let mut hi = vec![Q::zero(); n];
            hi[k] = -Q::one();
            ineqs.push((hi, -m.clone()));
        }
        // Homogenize: ⟨a, x⟩ − b·s >= 0 and s >= 0.
        let mut rows: Vec<Vec<Q>> = ineqs
            .iter()
            .map(|(a, b)| {
                let mut r = a.clone();
                r.push(-b.clone());
                r
            })
            .collect();
        let mut s_row = vec![Q::zero(); n + 1];
        s_row[n] = Q::one();
        rows.push(s_row);
        let rays = extreme_rays(&rows, n + 1).expect("box constraints have full rank");
        let mut vertices: Vec<Vec<Q>> = rays
            .into_iter()
            .filter(|r| r[n].is_positive())
            .map(|r| {
                let s = Q::from_integer(r[n].clone());
                r[..n].iter().map(|x| Q::from_integer(x.clone()) / &s).collect()
            })
            .collect();
        vertices.sort();
        vertices.dedup();
        let tight = ineqs
            .iter()
            .map(|(a, b)| {
                (0..vertices.len())
                    .filter(|&i| dot(a, &vertices[i]) == *b)
                    .collect()
            })
            .collect();
        ClippedPolytope {
            dim: n,
            vertices,
            tight,
        }
    }

    fn affine_dim(&self, face: &[usize]) -> usize {
        let pts: Vec<&[Q]> = face.iter().map(|&i| self.vertices[i].as_slice()).collect();
        affine_dimension(&pts)
    }

    /// Fan triangulation of a `dim`-dimensional face into simplices (vertex index lists).
    fn triangulate(&self, face: &[usize], dim: usize, out: &mut Vec<Vec<usize>>, prefix: &mut Vec<usize>) {
        if dim == 0 {
            let mut simplex = prefix.clone();
            simplex.push(face[0]);
            out.push(simplex);
            return;
        }
        let base = face[0];
        let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for t in &self.tight {
            let sub: Vec<usize> = face.iter().copied().filter(|i| t.binary_search(i).is_ok()).collect();
            if sub.len() < dim || sub.len() == face.len() || sub.contains(&base) {
                continue;
            }
            if self.affine_dim(&sub) == dim - 1 {
                subfaces.insert(sub);
            }
        }
        prefix.push(base);
        for sub in subfaces {
            self.triangulate(&sub, dim - 1, out, prefix);
        }
        prefix.pop();
    }

    /// Exact volume and the number of simplices used.
    fn volume(&self) -> (Q, usize) {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        if all.is_empty() || self.affine_dim(&all) < self.dim {
            return (Q::zero(), 0);
        }
        let mut simplices = Vec::new();
        self.triangulate(&all, self.dim, &mut simplices, &mut Vec::new());
        let total = simplices.iter().fold(Q::zero(), |acc, s| {
            let origin = &self.vertices[s[0]];
            let rows = s[1..]
                .iter()
                .map(|&i| self.vertices[i].iter().zip(origin).map(|(a, b)| a - b).collect())
                .collect();
            acc + determinant(rows).abs()
        });
        (total / factorial(self.dim), simplices.len())
    }
}

/// Mixed covolume, with the subset responsible for divergence when infinite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MixedCovol {
    pub value: ExtRational,
    /// 1-based slot indices `S` whose Minkowski sum has infinite covolume.
    pub infinite_subset: Option<Vec<usize>>,
}

/// Polarization `(1/n!) Σ_{∅≠S⊆[n]} (−1)^{n−|S|} Covol(Σ_{i∈S} A_i)`.
///
/// Any infinite term makes the whole value infinite.
pub fn mixed_covol(slots: &[NewtonPolyhedron]) -> Result<MixedCovol> {
    let n = slots.first().map_or(0, NewtonPolyhedron::dim);
    if slots.len() != n || n == 0 {
        return Err(Error::Arity {
            expected: n.max(1),
            found: slots.len(),
        });
    }
    if let Some(bad) = slots.iter().find(|s| s.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.dim(),
        });
    }
    let terms: Vec<(u32, ExtRational)> = (1u32..(1 << n))
        .into_par_iter()
        .map(|mask| {
            let sum = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| slots[i].clone())
                .reduce(|a, b| a.trop_mul(&b).expect("same dimension"))
                .expect("nonempty subset");
            (mask, covol(&sum).value)
        })
        .collect();
    let mut total = Q::zero();
    for (mask, value) in &terms {
        match value {
            ExtRational::Finite(v) => {
                let sign_negative = (n as u32 - mask.count_ones()) % 2 == 1;
                if sign_negative {
                    total -= v;
                } else {
                    total += v;
                }
            }
            _ => {
                let subset = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
                return Ok(MixedCovol {
                    value: ExtRational::Infinite,
                    infinite_subset: Some(subset),
                });
            }
        }
    }
    Ok(MixedCovol {
        value: ExtRational::Finite(total / factorial(n)),
        infinite_subset: None,
    })
}

/// `Γ_{log|F|}`: the convex hull of the union of the component Newton polyhedra.
pub fn map_polyhedron(map: &MapSpec) -> NewtonPolyhedron {
    map.components()
        .iter()
        .map(NewtonPolyhedron::from_support)
        .reduce(|a, b| a.trop_add(&b).expect("same dimension"))
        .expect("maps have at least one component")
}

/// `n!·Covol(Γ_{log|F|})`, a lower bound for the multiplicity `m_F`.
pub fn kushnirenko_bound(map: &MapSpec) -> ExtRational {
    scale_by_factorial(covol(&map_polyhedron(map)).value, map.dim())
}

/// `n!·Covol(Γ_{f_1}, …, Γ_{f_n})`, the mixed (Bernstein-type) lower bound for `m_F`.
pub fn bernstein_bound(map: &MapSpec) -> MixedCovol {
    let slots: Vec<NewtonPolyhedron> =
        map.components().iter().map(NewtonPolyhedron::from_support).collect();
    let mixed = mixed_covol(&slots).expect("a map has exactly n components");
    MixedCovol {
        value: scale_by_factorial(mixed.value, map.dim()),
        infinite_subset: mixed.infinite_subset,
    }
}

fn scale_by_factorial(value: ExtRational, n: usize) -> ExtRational {
    match value {
        ExtRational::Finite(v) => ExtRational::Finite(factorial(n) * v),
        other => other,
    }
}

/// `|det(J_1, …, J_n)|` for a monomial map; `+∞` when the zero is not isolated.
pub fn monomial_map_multiplicity(map: &MapSpec) -> Result<ExtRational> {
    let rows = map
        .components()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.len() != 1 {
                return Err(Error::NotMonomial { component: i + 1 });
            }
            Ok(c.points().next().expect("one point").coords().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    let det = determinant(rows).abs();
    Ok(if det.is_zero() {
        ExtRational::Infinite
    } else {
        ExtRational::Finite(det)
    })
}
