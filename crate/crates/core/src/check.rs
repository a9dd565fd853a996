//! Property suite run by `tropsing check` on a user-supplied germ or map.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::covolume::{
    covol, kushnirenko_bound, map_polyhedron, mixed_covol,
    monomial_map_multiplicity,
};
use crate::dequant::{convergence_report, uniform_grid, DEFAULT_TOLERANCE};
use crate::germ::{ExponentPoint, GermSupport, MapSpec};
use crate::invariants::{
    diagonal_bisection, diagonal_threshold, directional_weight_polyhedron, lambda_indicator, lct,
    relative_type,
};
use crate::oracle::{grid_lambda, mc_covol, staircase_covol_2d};
use crate::polyhedron::{support_value_from_facets, NewtonPolyhedron, Weight};
use crate::rational::{q, q_frac, to_f64, ExtRational, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, failure: Option<String>) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| "ok".into()),
    }
}

fn random_weight(rng: &mut ChaCha8Rng, n: usize) -> Weight {
    Weight::new((0..n).map(|_| q_frac(rng.random_range(1..=9), rng.random_range(1..=4))).collect())
        .expect("positive")
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| q_frac(-rng.random_range(0..=8), rng.random_range(1..=3))).collect()
}

fn scaled(value: &ExtRational, c: &Q) -> ExtRational {
    match value {
        ExtRational::Finite(v) => ExtRational::Finite(v * c),
        other => other.clone(),
    }
}

fn ext_add(a: &ExtRational, b: &ExtRational) -> ExtRational {
    match (a, b) {
        (ExtRational::Finite(x), ExtRational::Finite(y)) => ExtRational::Finite(x + y),
        _ => ExtRational::Infinite,
    }
}

/// Polyhedron-level invariants: minimality, H/V consistency, semiring laws,
/// directional axioms, relative types, lct routes and covolume oracles.
pub fn check_polyhedron(gamma: &NewtonPolyhedron, seed: u64) -> Vec<CheckOutcome> {
    let n = gamma.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let minimal = gamma.vertices().iter().enumerate().find(|(i, v)| {
        let others = gamma
            .vertices()
            .iter()
            .enumerate()
            .filter(|(j, _)| j != i)
            .map(|(_, w)| w.clone());
        NewtonPolyhedron::reduce(n, others)
            .and_then(|p| p.member(v))
            .unwrap_or(true)
    });
    out.push(outcome(
        "minimal-vertex-set",
        minimal.map(|(_, v)| format!("vertex {v} is generated by the others")),
    ));

    let reversed = NewtonPolyhedron::reduce(n, gamma.vertices().iter().rev().cloned());
    out.push(outcome(
        "reduce-order-independent",
        (reversed.as_ref().ok() != Some(gamma)).then(|| "reversed input changed the vertex set".into()),
    ));

    if !gamma.is_empty() {
        let bound = gamma
            .vertices()
            .iter()
            .flat_map(|v| v.coords())
            .max()
            .cloned()
            .unwrap_or_default()
            * q(2)
            + q(1);
        let mut failure = None;
        for _ in 0..40 {
            let coords: Vec<Q> = (0..n)
                .map(|_| &bound * q_frac(rng.random_range(0..=60), 60))
                .collect();
            let p = ExponentPoint::new(coords.clone()).expect("nonnegative");
            let by_lp = gamma.member(&p).unwrap_or(false);
            let by_facets = gamma.facets().iter().all(|f| f.satisfied_by(&coords));
            if by_lp != by_facets {
                failure = Some(format!("point {p}: LP says {by_lp}, facets say {by_facets}"));
                break;
            }
        }
        out.push(outcome("hv-consistency", failure));

        let mut failure = None;
        for _ in 0..10 {
            let t = random_direction(&mut rng, n);
            let by_vertices = gamma.support_value(&t).ok().and_then(|v| v.finite().cloned());
            let by_facets = support_value_from_facets(gamma, &t).value().cloned();
            if by_vertices != by_facets {
                failure = Some(format!("t={t:?}: {by_vertices:?} vs {by_facets:?}"));
                break;
            }
        }
        out.push(outcome("support-value-duality", failure));
    }

    let b = gamma.scale(&q(2)).expect("positive scale");
    let c = directional_weight_polyhedron(&random_weight(&mut rng, n));
    let zero = NewtonPolyhedron::empty(n);
    let unit = NewtonPolyhedron::orthant(n);
    let semiring = (|| -> Option<String> {
        let add = |x: &NewtonPolyhedron, y: &NewtonPolyhedron| x.trop_add(y).expect("dim");
        let mul = |x: &NewtonPolyhedron, y: &NewtonPolyhedron| x.trop_mul(y).expect("dim");
        if add(gamma, gamma) != *gamma {
            return Some("⊕ is not idempotent".into());
        }
        if add(gamma, &b) != add(&b, gamma) || mul(gamma, &c) != mul(&c, gamma) {
            return Some("operations are not commutative".into());
        }
        if mul(gamma, &unit) != *gamma || add(gamma, &zero) != *gamma {
            return Some("unit or zero misbehaves".into());
        }
        if !mul(gamma, &zero).is_empty() {
            return Some("zero does not annihilate".into());
        }
        if mul(&add(gamma, &b), &c) != add(&mul(gamma, &c), &mul(&b, &c)) {
            return Some("⊗ does not distribute over ⊕".into());
        }
        None
    })();
    out.push(outcome("semiring-laws", semiring));

    let mut failure = None;
    for _ in 0..10 {
        let a = random_weight(&mut rng, n);
        let s = q_frac(rng.random_range(1..=7), rng.random_range(1..=5));
        let nu = gamma.directional_number(&a).expect("dim");
        let nu_c = c.directional_number(&a).expect("dim");
        let checks = [
            (
                "homogeneity",
                gamma.scale(&s).expect("positive").directional_number(&a).expect("dim"),
                scaled(&nu, &s),
            ),
            (
                "additivity",
                gamma.trop_add(&c).expect("dim").directional_number(&a).expect("dim"),
                nu.clone().min(nu_c.clone()),
            ),
            (
                "multiplicativity",
                gamma.trop_mul(&c).expect("dim").directional_number(&a).expect("dim"),
                ext_add(&nu, &nu_c),
            ),
        ];
        if let Some((name, lhs, rhs)) = checks.into_iter().find(|(_, l, r)| l != r) {
            failure = Some(format!("{name} fails at a={a}: {lhs} vs {rhs}"));
            break;
        }
        let sigma = relative_type(gamma, &directional_weight_polyhedron(&a)).map(|r| r.value);
        if sigma.as_ref() != Ok(&nu) {
            failure = Some(format!("σ(u, φ_a) = {sigma:?} but ν(u, a) = {nu} at a={a}"));
            break;
        }
    }
    out.push(outcome("directional-axioms", failure));

    let finite_weight = gamma.covol_finite() && !gamma.contains_origin() && !gamma.is_empty();
    if finite_weight {
        let sigma = relative_type(gamma, gamma).map(|r| r.value);
        out.push(outcome(
            "relative-type-self",
            (sigma != Ok(ExtRational::Finite(q(1)))).then(|| format!("σ(u, Ψ_u) = {sigma:?}")),
        ));
    }

    if !gamma.is_empty() {
        let psi = directional_weight_polyhedron(&Weight::unit(n));
        let sigma = relative_type(gamma, &psi).expect("unit weight is maximal").value;
        let mut failure = None;
        if let ExtRational::Finite(s) = &sigma {
            for _ in 0..9 {
                let t = random_direction(&mut rng, n);
                let lhs = gamma.support_value(&t).expect("t <= 0");
                let rhs = scaled(&psi.support_value(&t).expect("t <= 0"), s);
                if lhs > rhs {
                    failure = Some(format!("ψ_u(t) = {lhs} > σ·ψ_Ψ(t) = {rhs} at t={t:?}"));
                    break;
                }
            }
        }
        out.push(outcome("domination", failure));
    }

    if !gamma.is_empty() && !gamma.contains_origin() {
        let lp_lct = lct(gamma);
        let diag = diagonal_threshold(gamma);
        let by_diag = diag.finite().map(|d| ExtRational::Finite(Q::one() / d));
        let bracket = diagonal_bisection(gamma, 24);
        let failure = if Some(&lp_lct) != by_diag.as_ref() {
            Some(format!("LP lct {lp_lct} vs diagonal lct {by_diag:?}"))
        } else {
            match (&bracket, diag.finite()) {
                (Ok((lo, hi)), Some(d)) if !(lo < d && d <= hi) => {
                    Some(format!("diagonal threshold {d} outside bisection bracket"))
                }
                _ => None,
            }
        };
        out.push(outcome("lct-routes", failure));

        let lambda = lambda_indicator(gamma).lambda;
        let failure = match (grid_lambda(gamma, 24), lambda.finite()) {
            (Ok(g), Some(l)) => {
                let lo = g.exact.expect("grid is exact");
                let hi = &lo + g.resolution.expect("grid resolution");
                (!(lo <= *l && *l <= hi)).then(|| format!("λ = {l} outside grid bracket [{lo}, {hi}]"))
            }
            (Err(e), _) => Some(e.to_string()),
            (_, None) => Some("λ is not finite".into()),
        };
        out.push(outcome("grid-lambda-bound", failure));
    }

    let cv = covol(gamma);
    if let ExtRational::Finite(value) = &cv.value {
        let doubled = covol(&gamma.scale(&q(2)).expect("positive"));
        let expected = value * Q::from_integer(num_bigint::BigInt::from(1) << n);
        out.push(outcome(
            "covol-scaling",
            (doubled.value != ExtRational::Finite(expected.clone()))
                .then(|| format!("Covol(2Γ) = {} but 2^n·Covol(Γ) = {}", doubled.value, expected)),
        ));
        if n == 2 {
            let stair = staircase_covol_2d(gamma);
            out.push(outcome(
                "covol-staircase",
                (stair.as_ref() != Ok(value)).then(|| format!("staircase gives {stair:?}, covol {value}")),
            ));
        }
        if !value.is_zero() {
            let est = mc_covol(gamma, 200_000, seed).expect("finite covolume");
            let se = est.stderr.unwrap_or_default();
            let diff = (est.value - to_f64(value)).abs();
            out.push(outcome(
                "covol-monte-carlo",
                (diff > 3.0 * se).then(|| format!("MC {} ± {se} vs exact {value}", est.value)),
            ));
        }
    } else if gamma.covol_finite() {
        out.push(outcome("covol-finiteness", Some("finite criterion but infinite value".into())));
    }

    out.push(outcome(
        "covol-nonnegative",
        cv.value.finite().is_some_and(Signed::is_negative).then(|| format!("covolume {}", cv.value)),
    ));
    out
}

/// Polyhedron suite plus the dequantization lab when coefficients are present.
pub fn check_germ(germ: &GermSupport, seed: u64) -> Vec<CheckOutcome> {
    let gamma = NewtonPolyhedron::from_support(germ);
    let mut out = check_polyhedron(&gamma, seed);
    let integral = germ.points().all(|p| p.coords().iter().all(|c| c.is_integer()));
    if germ.coefficients().is_some() && !germ.is_empty() && integral {
        let grid = uniform_grid(germ.dim().min(3), -2.0, -0.5, 3);
        let grid: Vec<Vec<f64>> = if germ.dim() <= 3 {
            grid
        } else {
            [-2.0, -1.25, -0.5].iter().map(|&x| vec![x; germ.dim()]).collect()
        };
        let failure = match convergence_report(germ, &grid, &[64, 256, 1024], 16, seed, DEFAULT_TOLERANCE) {
            Ok(r) if r.pass => None,
            Ok(r) => Some(r.failures.join("; ")),
            Err(e) => Some(e.to_string()),
        };
        out.push(outcome("dequantization", failure));
    }
    out
}

/// Map-level bounds plus the polyhedron suite on `Γ_{log|F|}`.
pub fn check_map(map: &MapSpec, seed: u64) -> Vec<CheckOutcome> {
    let mut out = check_polyhedron(&map_polyhedron(map), seed);
    let kb = kushnirenko_bound(map);
    if let Ok(m_f) = monomial_map_multiplicity(map) {
        let failure = (kb.is_finite() && kb > m_f).then(|| format!("bound {kb} exceeds m_F = {m_f}"));
        out.push(outcome("kushnirenko-below-multiplicity", failure));
    }
    let slots: Vec<NewtonPolyhedron> =
        map.components().iter().map(NewtonPolyhedron::from_support).collect();
    let mut reversed = slots.clone();
    reversed.reverse();
    let forward = mixed_covol(&slots).map(|m| m.value);
    let backward = mixed_covol(&reversed).map(|m| m.value);
    out.push(outcome(
        "mixed-covol-symmetry",
        (forward != backward).then(|| format!("{forward:?} vs {backward:?}")),
    ));
    for (i, slot) in slots.iter().enumerate() {
        let diag = mixed_covol(&vec![slot.clone(); map.dim()]).map(|m| m.value);
        if diag != Ok(covol(slot).value) {
            out.push(outcome("mixed-covol-diagonal", Some(format!("slot {} diagonal {diag:?}", i + 1))));
            return out;
        }
    }
    out.push(outcome("mixed-covol-diagonal", None));
    out
}
