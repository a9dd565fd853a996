//! Scalar invariants read off a Newton polyhedron: Lelong numbers, relative
//! types, the integrability index of the indicator and the log canonical
//! threshold.
//!
//! Degenerate inputs follow the tropical zero/unit semantics: the empty
//! polyhedron (`u ≡ −∞`) has `ν = σ = +∞` and `lct = 0`; a polyhedron
//! containing the origin (nonsingular germ) has `ν = σ = 0` and `lct = +∞`.

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::covolume::covol;
use crate::error::{Error, Result};
use crate::germ::ExponentPoint;
use crate::lp::{LinearProgram, LpOutcome, Relation, Sense};
use crate::polyhedron::{NewtonPolyhedron, Weight};
use crate::rational::{factorial, format_rational, q, ExtRational, Q};

/// `ν(u) = ν(u, (1,…,1))`, the multiplicity `m_f` for `u = log|f|`.
pub fn lelong_number(gamma: &NewtonPolyhedron) -> ExtRational {
    gamma
        .directional_number(&Weight::unit(gamma.dim()))
        .expect("unit weight has the polyhedron dimension")
}

/// Polyhedron of the directional weight `φ_a = max_k a_k⁻¹ log|z_k|`: vertices `e_k / a_k`.
pub fn directional_weight_polyhedron(a: &Weight) -> NewtonPolyhedron {
    let n = a.dim();
    let vertices = (0..n).map(|k| {
        let mut coords = vec![Q::zero(); n];
        coords[k] = Q::one() / &a.coords()[k];
        ExponentPoint::new(coords).expect("positive weight gives nonnegative vertex")
    });
    NewtonPolyhedron::reduce(n, vertices).expect("consistent dimension")
}

/// Relative type `σ(u, Ψ)` with the LP-optimal weights that certify it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeType {
    pub value: ExtRational,
    /// Distinct optimal weights `a_J`, one LP per vertex `J` of `Γ_u`;
    /// `σ` is the minimum of `ν(u, a_J)` over this list.
    pub certificates: Vec<Vec<Q>>,
}

impl RelativeType {
    pub fn to_json(&self) -> Value {
        let certs: Vec<Vec<String>> = self
            .certificates
            .iter()
            .map(|a| a.iter().map(format_rational).collect())
            .collect();
        json!({ "sigma": self.value, "certificates": certs })
    }
}

/// `σ(u, Ψ) = min{ν(u, a) : a ∈ A_Ψ}` with `A_Ψ = {a >= 0 : ν(Ψ, a) >= 1}`.
///
/// `Ψ` must be a maximal weight: finite covolume and singular at the origin.
pub fn relative_type(gamma_u: &NewtonPolyhedron, gamma_psi: &NewtonPolyhedron) -> Result<RelativeType> {
    if gamma_u.dim() != gamma_psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: gamma_u.dim(),
            found: gamma_psi.dim(),
        });
    }
    if gamma_psi.contains_origin() {
        return Err(Error::WeightNotMaximal("weight is not singular at the origin".into()));
    }
    if let Some(axis) = gamma_psi.missing_axis() {
        return Err(Error::WeightNotMaximal(format!(
            "weight is not locally bounded off the origin (no vertex on axis {})",
            axis + 1
        )));
    }
    let n = gamma_u.dim();
    let mut best: Option<Q> = None;
    let mut certificates: Vec<Vec<Q>> = Vec::new();
    for j in gamma_u.vertices() {
        let mut lp = LinearProgram::new(Sense::Minimize, j.coords().to_vec());
        for w in gamma_psi.vertices() {
            lp.constrain(w.coords().to_vec(), Relation::Ge, Q::one());
        }
        let LpOutcome::Optimal { value, point } = lp.solve() else {
            unreachable!("A_Ψ is nonempty and ⟨a, J⟩ >= 0 on it");
        };
        debug_assert_eq!(point.len(), n);
        if best.as_ref().is_none_or(|b| value < *b) {
            best = Some(value);
        }
        if !certificates.contains(&point) {
            certificates.push(point);
        }
    }
    Ok(RelativeType {
        value: best.map_or(ExtRational::Infinite, ExtRational::Finite),
        certificates,
    })
}

/// `ν(u, φ_a) = ν(u, a) / (a_1 ⋯ a_n)`, the weighted Lelong number for a directional weight.
pub fn weighted_directional_lelong(gamma_u: &NewtonPolyhedron, a: &Weight) -> Result<Q> {
    if gamma_u.is_empty() {
        return Err(Error::EmptyPolyhedron("weighted Lelong number of u ≡ −∞"));
    }
    let nu = gamma_u.directional_number(a)?;
    let product = a.coords().iter().fold(Q::one(), |acc, x| acc * x);
    Ok(nu.finite().expect("nonempty polyhedron") / product)
}

/// Integrability index `λ_{Ψ_u} = sup{ν(u, a) : Σ a_k = 1}` of the indicator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegrabilityIndex {
    pub lambda: ExtRational,
    /// The germ is nonsingular (`0 ∈ Γ`); `lambda` is then reported as 0.
    pub nonsingular: bool,
    /// An optimal weight on the simplex, when the LP was solved.
    pub weight: Option<Vec<Q>>,
}

pub fn lambda_indicator(gamma_u: &NewtonPolyhedron) -> IntegrabilityIndex {
    if gamma_u.is_empty() {
        return IntegrabilityIndex {
            lambda: ExtRational::Infinite,
            nonsingular: false,
            weight: None,
        };
    }
    if gamma_u.contains_origin() {
        return IntegrabilityIndex {
            lambda: ExtRational::Finite(Q::zero()),
            nonsingular: true,
            weight: None,
        };
    }
    // Variables (a_1..a_n, t): maximize t, ⟨a, v⟩ - t >= 0, Σ a = 1.
    let n = gamma_u.dim();
    let mut objective = vec![Q::zero(); n + 1];
    objective[n] = Q::one();
    let mut lp = LinearProgram::new(Sense::Maximize, objective);
    for v in gamma_u.vertices() {
        let mut row = v.coords().to_vec();
        row.push(-Q::one());
        lp.constrain(row, Relation::Ge, Q::zero());
    }
    let mut simplex = vec![Q::one(); n];
    simplex.push(Q::zero());
    lp.constrain(simplex, Relation::Eq, Q::one());
    let LpOutcome::Optimal { value, mut point } = lp.solve() else {
        unreachable!("simplex is compact and nonempty");
    };
    point.truncate(n);
    IntegrabilityIndex {
        lambda: ExtRational::Finite(value),
        nonsingular: false,
        weight: Some(point),
    }
}

/// `lct = 1 / λ_{Ψ_u}`; exact for monomial ideals.
pub fn lct(gamma_u: &NewtonPolyhedron) -> ExtRational {
    let index = lambda_indicator(gamma_u);
    if index.nonsingular {
        return ExtRational::Infinite;
    }
    match index.lambda {
        ExtRational::Finite(l) => ExtRational::Finite(Q::one() / l),
        _ => ExtRational::Finite(Q::zero()),
    }
}

/// `min{s >= 0 : s·(1,…,1) ∈ Γ}`, read off the facet inequalities.
///
/// By LP duality this equals `λ_{Ψ_u}`; it is computed without the simplex
/// so the two can be compared.
pub fn diagonal_threshold(gamma: &NewtonPolyhedron) -> ExtRational {
    if gamma.is_empty() {
        return ExtRational::Infinite;
    }
    let s = gamma
        .facets()
        .iter()
        .map(|f| {
            let total: Q = f.normal.iter().fold(Q::zero(), |acc, x| acc + x);
            &f.offset / total
        })
        .fold(Q::zero(), |acc, x| if x > acc { x } else { acc });
    ExtRational::Finite(s)
}

/// Brackets the diagonal threshold by bisection on exact membership tests.
///
/// Returns `(lo, hi)` with `hi·1 ∈ Γ`, `lo·1 ∉ Γ` (unless `lo = hi = 0`), and
/// `hi - lo` halved `iterations` times from the initial bracket.
pub fn diagonal_bisection(gamma: &NewtonPolyhedron, iterations: usize) -> Result<(Q, Q)> {
    if gamma.is_empty() {
        return Err(Error::EmptyPolyhedron("diagonal of the empty set"));
    }
    let n = gamma.dim();
    let on_diagonal = |s: &Q| ExponentPoint::new(vec![s.clone(); n]).expect("s >= 0");
    if gamma.contains_origin() {
        return Ok((Q::zero(), Q::zero()));
    }
    let mut lo = Q::zero();
    let mut hi = gamma
        .vertices()
        .iter()
        .map(|v| v.coords().iter().max().cloned().unwrap_or_default())
        .min()
        .expect("nonempty");
    for _ in 0..iterations {
        let mid = (&lo + &hi) / q(2);
        if gamma.member(&on_diagonal(&mid))? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Every invariant of one germ, as exact rationals or `inf`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub lelong: ExtRational,
    pub directional: Vec<DirectionalEntry>,
    pub lambda_indicator: ExtRational,
    pub nonsingular: bool,
    pub lct: ExtRational,
    pub covol: ExtRational,
    pub kushnirenko_bound: ExtRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectionalEntry {
    #[serde(with = "crate::rational::serde_q_vec")]
    pub weight: Vec<Q>,
    pub nu: ExtRational,
}

impl InvariantReport {
    pub fn compute(gamma: &NewtonPolyhedron, weights: &[Weight]) -> Result<Self> {
        let directional = weights
            .iter()
            .map(|a| {
                Ok(DirectionalEntry {
                    weight: a.coords().to_vec(),
                    nu: gamma.directional_number(a)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let index = lambda_indicator(gamma);
        let covol = covol(gamma).value;
        let kushnirenko_bound = match &covol {
            ExtRational::Finite(c) => ExtRational::Finite(factorial(gamma.dim()) * c),
            other => other.clone(),
        };
        Ok(InvariantReport {
            lelong: lelong_number(gamma),
            directional,
            lambda_indicator: index.lambda,
            nonsingular: index.nonsingular,
            lct: lct(gamma),
            covol,
            kushnirenko_bound,
        })
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}
