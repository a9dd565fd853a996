//! Complete convex subsets of the positive orthant, `Γ = conv(V) + R_+^n`.
//!
//! A [`NewtonPolyhedron`] is stored by its minimal vertex set. The tropical
//! semiring acts through `⊕ = conv(Γ1 ∪ Γ2)` and `⊗ = Γ1 + Γ2`, with the
//! empty set as zero and the whole orthant (vertex set `{0}`) as unit.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dd::extreme_rays;
use crate::error::{Error, ParseError, Result};
use crate::germ::{parse_rat_token, ExponentPoint, GermSupport};
use crate::lp::{LinearProgram, LpOutcome, Relation, Sense};
use crate::rational::{dot, format_rational, serde_q, serde_q_vec, ExtRational, Q};

/// A strictly positive direction `a ∈ Q_+^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight(Vec<Q>);

impl Weight {
    pub fn new(coords: Vec<Q>) -> Result<Self> {
        if coords.is_empty() || coords.iter().any(|c| !c.is_positive()) {
            return Err(Error::NonPositiveWeight);
        }
        Ok(Weight(coords))
    }

    pub fn unit(dim: usize) -> Self {
        Weight(vec![Q::one(); dim])
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Supporting inequality `⟨normal, x⟩ >= offset` of a polyhedron.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    #[serde(with = "serde_q_vec")]
    pub normal: Vec<Q>,
    #[serde(with = "serde_q")]
    pub offset: Q,
}

impl Facet {
    pub fn satisfied_by(&self, p: &[Q]) -> bool {
        dot(&self.normal, p) >= self.offset
    }
}

#[derive(Debug)]
pub struct NewtonPolyhedron {
    dim: usize,
    vertices: Vec<ExponentPoint>,
    facets: OnceLock<Vec<Facet>>,
}

impl Clone for NewtonPolyhedron {
    fn clone(&self) -> Self {
        let facets = OnceLock::new();
        if let Some(f) = self.facets.get() {
            let _ = facets.set(f.clone());
        }
        NewtonPolyhedron {
            dim: self.dim,
            vertices: self.vertices.clone(),
            facets,
        }
    }
}

impl PartialEq for NewtonPolyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for NewtonPolyhedron {}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Exact test of `p ∈ conv(generators) + R_+^n`.
fn hull_contains(generators: &[&ExponentPoint], p: &ExponentPoint) -> bool {
    if generators.is_empty() {
        return false;
    }
    if generators.iter().any(|g| p.dominates(g)) {
        return true;
    }
    let n = p.dim();
    for k in 0..n {
        if generators.iter().all(|g| g.coords()[k] > p.coords()[k]) {
            return false;
        }
    }
    // Σ λ_g = 1, Σ λ_g g_k <= p_k, λ >= 0.
    let m = generators.len();
    let mut lp = LinearProgram::feasibility(m);
    lp.constrain(vec![Q::one(); m], Relation::Eq, Q::one());
    for k in 0..n {
        let row = generators.iter().map(|g| g.coords()[k].clone()).collect();
        lp.constrain(row, Relation::Le, p.coords()[k].clone());
    }
    matches!(lp.solve(), LpOutcome::Optimal { .. })
}

impl NewtonPolyhedron {
    /// The tropical zero: `u ≡ −∞`.
    pub fn empty(dim: usize) -> Self {
        Self::from_minimal(dim, Vec::new())
    }

    /// The tropical unit: the whole positive orthant.
    pub fn orthant(dim: usize) -> Self {
        Self::from_minimal(dim, vec![ExponentPoint::origin(dim)])
    }

    fn from_minimal(dim: usize, mut vertices: Vec<ExponentPoint>) -> Self {
        vertices.sort();
        NewtonPolyhedron {
            dim,
            vertices,
            facets: OnceLock::new(),
        }
    }

    /// Minimal vertex set of `conv(points) + R_+^n`.
    ///
    /// Dominated points go first; the rest are dropped one at a time when they
    /// lie in the polyhedron generated by the remaining points. Non-vertices
    /// never change the generated set, so the outcome does not depend on order.
    pub fn reduce(dim: usize, points: impl IntoIterator<Item = ExponentPoint>) -> Result<Self> {
        let mut pts: Vec<ExponentPoint> = points.into_iter().collect();
        for p in &pts {
            check_dim(dim, p.dim())?;
        }
        pts.sort();
        pts.dedup();
        let undominated: Vec<ExponentPoint> = pts
            .iter()
            .filter(|p| !pts.iter().any(|q| q != *p && p.dominates(q)))
            .cloned()
            .collect();
        let mut keep = vec![true; undominated.len()];
        for i in 0..undominated.len() {
            let others: Vec<&ExponentPoint> = undominated
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i && keep[j])
                .map(|(_, p)| p)
                .collect();
            if hull_contains(&others, &undominated[i]) {
                keep[i] = false;
            }
        }
        let vertices = undominated
            .into_iter()
            .zip(keep)
            .filter_map(|(p, k)| k.then_some(p))
            .collect();
        Ok(Self::from_minimal(dim, vertices))
    }

    /// `Γ = conv{J + R_+^n : c_J ≠ 0}`.
    pub fn from_support(support: &GermSupport) -> Self {
        Self::reduce(support.dim(), support.points().cloned())
            .expect("support points share the germ dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[ExponentPoint] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_origin(&self) -> bool {
        self.vertices.iter().any(ExponentPoint::is_origin)
    }

    pub fn member(&self, p: &ExponentPoint) -> Result<bool> {
        check_dim(self.dim, p.dim())?;
        let gens: Vec<&ExponentPoint> = self.vertices.iter().collect();
        Ok(hull_contains(&gens, p))
    }

    /// `Γ1 ⊕ Γ2 = conv(Γ1 ∪ Γ2)`.
    pub fn trop_add(&self, other: &NewtonPolyhedron) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        Self::reduce(
            self.dim,
            self.vertices.iter().chain(&other.vertices).cloned(),
        )
    }

    /// `Γ1 ⊗ Γ2 = Γ1 + Γ2` (Minkowski sum).
    pub fn trop_mul(&self, other: &NewtonPolyhedron) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let sums = self.vertices.iter().flat_map(|a| {
            other.vertices.iter().map(move |b| {
                ExponentPoint::from_vec_unchecked(
                    a.coords().iter().zip(b.coords()).map(|(x, y)| x + y).collect(),
                )
            })
        });
        Self::reduce(self.dim, sums)
    }

    pub fn scale(&self, c: &Q) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::NonPositiveScale);
        }
        let vertices = self
            .vertices
            .iter()
            .map(|v| ExponentPoint::from_vec_unchecked(v.coords().iter().map(|x| x * c).collect()))
            .collect();
        Ok(Self::from_minimal(self.dim, vertices))
    }

    /// Irredundant H-representation inside the orthant: `Γ = {x >= 0 : ⟨a_f, x⟩ >= c_f}`.
    ///
    /// Coordinate constraints `x_k >= 0` are not listed. Normals are primitive
    /// integer vectors (jointly with the offset) and componentwise nonnegative.
    /// The empty polyhedron has no facets.
    pub fn facets(&self) -> &[Facet] {
        self.facets.get_or_init(|| self.compute_facets())
    }

    fn compute_facets(&self) -> Vec<Facet> {
        if self.vertices.is_empty() {
            return Vec::new();
        }
        let n = self.dim;
        // Generators of the homogenized cone: (v, 1) for vertices, (e_k, 0) for rays.
        // Its facets are the extreme rays (a, -c) of the dual cone.
        let mut generators: Vec<Vec<Q>> = self
            .vertices
            .iter()
            .map(|v| {
                let mut g = v.coords().to_vec();
                g.push(Q::one());
                g
            })
            .collect();
        for k in 0..n {
            let mut g = vec![Q::zero(); n + 1];
            g[k] = Q::one();
            generators.push(g);
        }
        let rays = extreme_rays(&generators, n + 1).expect("homogenized cone is full-dimensional");
        let mut facets: Vec<Facet> = rays
            .into_iter()
            .filter_map(|r| {
                let normal: Vec<Q> = r[..n].iter().cloned().map(Q::from_integer).collect();
                let offset = -Q::from_integer(r[n].clone());
                let nonzero = normal.iter().filter(|x| !x.is_zero()).count();
                let orthant_bound = nonzero == 1 && offset.is_zero();
                (nonzero > 0 && !orthant_bound).then_some(Facet { normal, offset })
            })
            .collect();
        facets.sort();
        facets
    }

    /// `ψ(t) = sup{⟨t, b⟩ : b ∈ Γ}` for `t <= 0`.
    pub fn support_value(&self, t: &[Q]) -> Result<ExtRational> {
        check_dim(self.dim, t.len())?;
        if t.iter().any(Signed::is_positive) {
            return Err(Error::PositiveDirection);
        }
        Ok(self
            .vertices
            .iter()
            .map(|v| dot(t, v.coords()))
            .max()
            .map_or(ExtRational::NegInfinite, ExtRational::Finite))
    }

    /// `ν(u, a) = min{⟨a, J⟩}` over the vertices; `+∞` for the empty polyhedron.
    pub fn directional_number(&self, a: &Weight) -> Result<ExtRational> {
        check_dim(self.dim, a.dim())?;
        Ok(self
            .vertices
            .iter()
            .map(|v| dot(a.coords(), v.coords()))
            .min()
            .map_or(ExtRational::Infinite, ExtRational::Finite))
    }

    /// For each axis, the intercept `c_k` of a vertex `c_k·e_k`, if present.
    pub fn axis_intercepts(&self) -> Option<Vec<Q>> {
        (0..self.dim)
            .map(|k| {
                self.vertices
                    .iter()
                    .filter(|v| v.coords().iter().enumerate().all(|(i, x)| i == k || x.is_zero()))
                    .map(|v| v.coords()[k].clone())
                    .min()
            })
            .collect()
    }

    /// `R_+^n ∖ Γ` is bounded iff every axis carries a vertex.
    pub fn covol_finite(&self) -> bool {
        self.axis_intercepts().is_some()
    }

    /// First (0-based) axis without a vertex on it; `Some` exactly when the covolume is infinite.
    pub fn missing_axis(&self) -> Option<usize> {
        (0..self.dim).find(|&k| {
            !self
                .vertices
                .iter()
                .any(|v| v.coords().iter().enumerate().all(|(i, x)| i == k || x.is_zero()))
        })
    }

    pub fn to_json(&self, with_facets: bool) -> Value {
        let vertices: Vec<Vec<String>> = self.vertices.iter().map(|v| v.to_strings()).collect();
        let mut doc = json!({ "n": self.dim, "vertices": vertices });
        if with_facets {
            doc["facets"] = serde_json::to_value(self.facets()).expect("facets serialize");
        }
        doc
    }

    /// Reads `{"n":…, "vertices":[…]}` (or a germ `"support"`); the vertex set is re-reduced.
    pub fn from_json_value(value: &Value) -> Result<Self, ParseError> {
        let obj = value
            .as_object()
            .ok_or_else(|| ParseError::Schema("polyhedron must be an object".into()))?;
        let Some(rows) = obj.get("vertices") else {
            return match crate::germ::parse_support_value(value)? {
                crate::germ::SupportDocument::Germ(g) => Ok(Self::from_support(&g)),
                crate::germ::SupportDocument::Map(_) => {
                    Err(ParseError::Schema("expected a polyhedron, found a map".into()))
                }
            };
        };
        let dim = obj
            .get("n")
            .and_then(Value::as_u64)
            .filter(|&n| n >= 1)
            .ok_or_else(|| ParseError::Schema("\"n\" must be a positive integer".into()))?
            as usize;
        let rows = rows
            .as_array()
            .ok_or_else(|| ParseError::Schema("\"vertices\" must be an array".into()))?;
        let points = rows
            .iter()
            .map(|row| {
                let coords = row
                    .as_array()
                    .ok_or_else(|| ParseError::Schema("vertex must be an array".into()))?
                    .iter()
                    .map(parse_rat_token)
                    .collect::<Result<Vec<_>, _>>()?;
                if coords.len() != dim {
                    return Err(ParseError::DimensionMismatch {
                        expected: dim,
                        found: coords.len(),
                    });
                }
                ExponentPoint::new(coords)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::reduce(dim, points).expect("dimensions checked"))
    }
}

impl fmt::Display for NewtonPolyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "conv{{{}}} + R_+^{}", parts.join(", "), self.dim)
    }
}

/// `sup{⟨t, x⟩ : x >= 0, ⟨a_f, x⟩ >= c_f}` solved as an LP over the facet form.
///
/// Independent of the vertex route in [`NewtonPolyhedron::support_value`].
pub fn support_value_from_facets(poly: &NewtonPolyhedron, t: &[Q]) -> LpOutcome {
    let mut lp = LinearProgram::new(Sense::Maximize, t.to_vec());
    for f in poly.facets() {
        lp.constrain(f.normal.clone(), Relation::Ge, f.offset.clone());
    }
    lp.solve()
}
