//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use tropsing::covolume::{covol, kushnirenko_bound, map_polyhedron, mixed_covol, monomial_map_multiplicity};
use tropsing::dequant::{convergence_report, uniform_grid, DEFAULT_TOLERANCE};
use tropsing::germ::{parse_support_json, SupportDocument};
use tropsing::invariants::{
    diagonal_bisection, directional_weight_polyhedron, lambda_indicator, lct, relative_type,
};
use tropsing::oracle::{grid_lambda, mc_covol, staircase_covol_2d};
use tropsing::rational::{parse_rational, q, q_frac, to_f64};
use tropsing::{parse_polynomial, ExponentPoint, ExtRational, GermSupport, MapSpec, NewtonPolyhedron, Weight, Q};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SEED: u64 = 0x5eed_2024;

fn fixture(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(path).expect("fixture present")
}

fn fin(x: Q) -> ExtRational {
    ExtRational::Finite(x)
}

fn random_point(rng: &mut ChaCha8Rng, n: usize, max: i64) -> ExponentPoint {
    ExponentPoint::new((0..n).map(|_| q_frac(rng.random_range(0..=max), rng.random_range(1..=3))).collect())
        .expect("nonnegative")
}

fn random_polyhedron(rng: &mut ChaCha8Rng, n: usize) -> NewtonPolyhedron {
    let count = rng.random_range(1..=6);
    let pts: Vec<ExponentPoint> = (0..count).map(|_| random_point(rng, n, 6)).collect();
    NewtonPolyhedron::reduce(n, pts).expect("same dimension")
}

/// Finite covolume and singular at the origin: every axis carries a vertex.
fn random_finite(rng: &mut ChaCha8Rng, n: usize, max: i64) -> NewtonPolyhedron {
    let count = rng.random_range(0..=5);
    let mut pts: Vec<ExponentPoint> = (0..count).map(|_| random_point(rng, n, max)).collect();
    pts.retain(|p| !p.is_origin());
    for k in 0..n {
        let mut coords = vec![q(0); n];
        coords[k] = q(rng.random_range(1..=max));
        pts.push(ExponentPoint::new(coords).expect("nonnegative"));
    }
    NewtonPolyhedron::reduce(n, pts).expect("same dimension")
}

fn random_weight(rng: &mut ChaCha8Rng, n: usize) -> Weight {
    Weight::new((0..n).map(|_| q_frac(rng.random_range(1..=9), rng.random_range(1..=4))).collect())
        .expect("positive")
}

fn monomial_map(a: i64, b: i64) -> MapSpec {
    MapSpec::new(
        2,
        vec![
            GermSupport::from_int_points(2, &[&[a, 0]]),
            GermSupport::from_int_points(2, &[&[0, b]]),
        ],
    )
    .expect("two components")
}

fn kushnirenko_equality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..20 {
        let (a, b) = (rng.random_range(1..=9), rng.random_range(1..=9));
        let map = monomial_map(a, b);
        let bound = kushnirenko_bound(&map);
        let m_f = monomial_map_multiplicity(&map).map_err(|e| e.to_string())?;
        if bound != fin(q(a * b)) || m_f != fin(q(a * b)) {
            return Err(format!("F=(x1^{a}, x2^{b}): bound {bound}, m_F {m_f}, expected {}", a * b));
        }
    }
    Ok("20 maps, bound = m_F = ab".into())
}

fn strict_kushnirenko() -> Outcome {
    let text = fixture("strict_kushnirenko.json");
    let doc: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let m_f = parse_rational(doc["m_F"].as_str().ok_or("fixture lacks m_F")?).map_err(|e| e.to_string())?;
    let SupportDocument::Map(map) = parse_support_json(&text).map_err(|e| e.to_string())? else {
        return Err("fixture is not a map".into());
    };
    let bound = kushnirenko_bound(&map);
    if bound == fin(q(1)) && fin(q(1)) < fin(m_f.clone()) && m_f == q(2) {
        Ok(format!("bound {bound} < m_F {m_f}"))
    } else {
        Err(format!("bound {bound}, m_F {m_f}"))
    }
}

fn monomial_lct() -> Outcome {
    for p in 1..=6i64 {
        for r in 1..=6i64 {
            let g = NewtonPolyhedron::from_support(&GermSupport::from_int_points(2, &[&[p, 0], &[0, r]]));
            let expected = q_frac(1, p) + q_frac(1, r);
            let value = lct(&g);
            if value != fin(expected.clone()) {
                return Err(format!("(x1^{p}, x2^{r}): lct {value}, expected {expected}"));
            }
            let lambda = lambda_indicator(&g).lambda.finite().cloned().ok_or("lambda not finite")?;
            let grid = grid_lambda(&g, 60).map_err(|e| e.to_string())?;
            let (exact, slack) = (grid.exact.expect("grid"), grid.resolution.expect("grid"));
            if !(exact <= lambda && lambda <= &exact + &slack) {
                return Err(format!("(x1^{p}, x2^{r}): grid {exact} + {slack} does not bracket {lambda}"));
            }
            let (lo, hi) = diagonal_bisection(&g, 48).map_err(|e| e.to_string())?;
            if !(lo <= lambda && lambda <= hi) {
                return Err(format!("(x1^{p}, x2^{r}): bisection [{lo}, {hi}] misses {lambda}"));
            }
        }
    }
    for n in 2..=4usize {
        let pts: Vec<ExponentPoint> = (0..n)
            .map(|k| {
                let mut e = vec![0i64; n];
                e[k] = 1;
                ExponentPoint::from_ints(&e)
            })
            .collect();
        let g = NewtonPolyhedron::reduce(n, pts).expect("dimension");
        if lct(&g) != fin(q(n as i64)) {
            return Err(format!("maximal ideal in n={n}: lct {}", lct(&g)));
        }
    }
    Ok("36 monomial ideals and maximal ideals n=2,3,4; grid and bisection oracles agree".into())
}

fn directional_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    for i in 0..1000 {
        let n = rng.random_range(1..=4);
        let a = random_polyhedron(&mut rng, n);
        let b = random_polyhedron(&mut rng, n);
        let w = random_weight(&mut rng, n);
        let s = q_frac(rng.random_range(1..=9), rng.random_range(1..=5));
        let nu = |g: &NewtonPolyhedron| g.directional_number(&w).expect("dimension");
        let (x, y) = (nu(&a).finite().cloned().expect("finite"), nu(&b).finite().cloned().expect("finite"));
        if nu(&a.scale(&s).expect("positive")) != fin(&x * &s) {
            return Err(format!("triple {i}: homogeneity fails for s={s}"));
        }
        if nu(&a.trop_add(&b).expect("dimension")) != fin(x.clone().min(y.clone())) {
            return Err(format!("triple {i}: ν(A ⊕ B) is not the minimum"));
        }
        if nu(&a.trop_mul(&b).expect("dimension")) != fin(&x + &y) {
            return Err(format!("triple {i}: ν(A ⊗ B) is not the sum"));
        }
    }
    Ok("1000 triples".into())
}

fn relative_type_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    for i in 0..200 {
        let n = rng.random_range(1..=4);
        let g = random_polyhedron(&mut rng, n);
        let a = random_weight(&mut rng, n);
        let sigma = relative_type(&g, &directional_weight_polyhedron(&a)).map_err(|e| e.to_string())?;
        let nu = g.directional_number(&a).expect("dimension");
        if sigma.value != nu {
            return Err(format!("pair {i}: σ(u, φ_a) = {} but ν(u, a) = {nu}", sigma.value));
        }
    }
    for i in 0..100 {
        let n = rng.random_range(1..=4);
        let g = random_finite(&mut rng, n, 6);
        let sigma = relative_type(&g, &g).map_err(|e| e.to_string())?;
        if sigma.value != fin(q(1)) {
            return Err(format!("polyhedron {i}: σ(u, Ψ_u) = {}", sigma.value));
        }
    }
    Ok("200 directional pairs, 100 self types".into())
}

fn domination() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let levels = [q(-2), q(-1), q_frac(-1, 2)];
    for i in 0..100 {
        let n = if i % 2 == 0 { 2 } else { 3 };
        let u = random_polyhedron(&mut rng, n);
        let psi = random_finite(&mut rng, n, 6);
        let sigma = relative_type(&u, &psi).map_err(|e| e.to_string())?;
        let sigma = sigma.value.finite().cloned().ok_or("σ is infinite for a nonempty u")?;
        // 3×3 grid in the first two coordinates, remaining coordinates fixed at −1.
        for t0 in &levels {
            for t1 in &levels {
                let mut t = vec![t0.clone(), t1.clone()];
                t.resize(n, q(-1));
                let lhs = u.support_value(&t).map_err(|e| e.to_string())?;
                let rhs = psi.support_value(&t).map_err(|e| e.to_string())?;
                let rhs = fin(rhs.finite().cloned().expect("nonempty") * &sigma);
                if lhs > rhs {
                    return Err(format!("pair {i}, t={t:?}: ψ_u = {lhs} > σ·ψ_Ψ = {rhs}"));
                }
            }
        }
    }
    Ok("100 pairs × 9 grid points".into())
}

fn covolume_correctness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    for i in 0..100 {
        let g = random_finite(&mut rng, 2, 9);
        let exact = covol(&g).value;
        let stair = staircase_covol_2d(&g).map_err(|e| e.to_string())?;
        if exact != fin(stair.clone()) {
            return Err(format!("n=2 instance {i}: covol {exact}, staircase {stair}"));
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let g = random_finite(&mut rng, 3, 6);
        let exact = covol(&g).value;
        let exact = to_f64(exact.finite().ok_or("finite instance reported infinite")?);
        let est = mc_covol(&g, 1_000_000, SEED + i).map_err(|e| e.to_string())?;
        let se = est.stderr.expect("monte carlo");
        let z = if se > 0.0 { (est.value - exact).abs() / se } else { (est.value - exact).abs() };
        worst = worst.max(z);
        if z > 3.0 {
            return Err(format!("n=3 instance {i}: MC {} vs exact {exact} ({z:.2} stderr)", est.value));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(60) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!("100 staircase matches, 20 MC checks (max {worst:.2} stderr), {elapsed:.1?}"))
}

fn mixed_covolume() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    for i in 0..50 {
        let n = if i % 2 == 0 { 2 } else { 3 };
        let slots: Vec<NewtonPolyhedron> = (0..n).map(|_| random_finite(&mut rng, n, 4)).collect();
        let extra = random_finite(&mut rng, n, 4);
        let mv = |s: &[NewtonPolyhedron]| mixed_covol(s).map(|m| m.value).map_err(|e| e.to_string());

        let a = &slots[0];
        if mv(&vec![a.clone(); n])? != covol(a).value {
            return Err(format!("instance {i}: Covol(A,…,A) ≠ Covol(A)"));
        }
        let base = mv(&slots)?;
        let mut rotated = slots.clone();
        rotated.rotate_left(1);
        let mut swapped = slots.clone();
        swapped.swap(0, 1);
        if mv(&rotated)? != base || mv(&swapped)? != base {
            return Err(format!("instance {i}: slot order changes the value"));
        }
        let mut with_extra = slots.clone();
        with_extra[0] = extra;
        let mut summed = slots.clone();
        summed[0] = slots[0].trop_mul(&with_extra[0]).expect("dimension");
        let (x, y) = (base.finite().cloned(), mv(&with_extra)?.finite().cloned());
        let (Some(x), Some(y)) = (x, y) else {
            return Err(format!("instance {i}: finite slots gave an infinite mixed covolume"));
        };
        if mv(&summed)? != fin(x + y) {
            return Err(format!("instance {i}: not additive in slot 1"));
        }
    }
    Ok("50 instances, n=2,3".into())
}

fn dequantization() -> Outcome {
    let grid = uniform_grid(2, -2.0, -0.5, 5);
    let schedule = [64, 256, 1024];
    for poly in ["x1 + x2", "x1^2 + 3*x2^3"] {
        let f = parse_polynomial(poly, 2).map_err(|e| e.to_string())?;
        let report = convergence_report(&f, &grid, &schedule, 16, SEED, DEFAULT_TOLERANCE)
            .map_err(|e| e.to_string())?;
        if !report.pass {
            return Err(format!("{poly}: {}", report.failures.join("; ")));
        }
    }
    // Unit coefficients: the sampled value is exactly ⟨t, J⟩ at every scale.
    for poly in ["x1", "x1^2*x2", "x2^3", "x1*x2"] {
        let f = parse_polynomial(poly, 2).map_err(|e| e.to_string())?;
        let report = convergence_report(&f, &grid, &schedule, 4, SEED, DEFAULT_TOLERANCE)
            .map_err(|e| e.to_string())?;
        if let Some(r) = report.rows.iter().find(|r| r.error != 0.0) {
            return Err(format!("{poly}: error {:e} at t={:?}, m={}", r.error, r.t, r.m));
        }
    }
    Ok("25-point grid, m ∈ {64, 256, 1024}; monomials exact".into())
}

fn semiring_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    for i in 0..500 {
        let n = rng.random_range(1..=4);
        let (a, b, c) = (
            random_polyhedron(&mut rng, n),
            random_polyhedron(&mut rng, n),
            random_polyhedron(&mut rng, n),
        );
        let add = |x: &NewtonPolyhedron, y: &NewtonPolyhedron| x.trop_add(y).expect("dimension");
        let mul = |x: &NewtonPolyhedron, y: &NewtonPolyhedron| x.trop_mul(y).expect("dimension");
        let (zero, one) = (NewtonPolyhedron::empty(n), NewtonPolyhedron::orthant(n));
        let laws = [
            ("idempotency", add(&a, &a) == a),
            ("commutativity of ⊕", add(&a, &b) == add(&b, &a)),
            ("commutativity of ⊗", mul(&a, &b) == mul(&b, &a)),
            ("associativity of ⊕", add(&add(&a, &b), &c) == add(&a, &add(&b, &c))),
            ("associativity of ⊗", mul(&mul(&a, &b), &c) == mul(&a, &mul(&b, &c))),
            ("distributivity", mul(&a, &add(&b, &c)) == add(&mul(&a, &b), &mul(&a, &c))),
            ("unit", mul(&a, &one) == a),
            ("zero", add(&a, &zero) == a && mul(&a, &zero).is_empty()),
        ];
        if let Some((law, _)) = laws.iter().find(|(_, ok)| !ok) {
            return Err(format!("polyhedron {i} (n={n}): {law} fails"));
        }
    }
    Ok("500 random triples".into())
}

fn degeneracy() -> Outcome {
    let text = fixture("non_isolated_zero.json");
    let SupportDocument::Map(map) = parse_support_json(&text).map_err(|e| e.to_string())? else {
        return Err("fixture is not a map".into());
    };
    let gamma = map_polyhedron(&map);
    if gamma.covol_finite() || covol(&gamma).value != ExtRational::Infinite {
        return Err("library reports a finite covolume".into());
    }
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/non_isolated_zero.json");
    let out = Command::new(env!("CARGO_BIN_EXE_tropsing"))
        .args(["covol", "--input"])
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code();
    let report: Value = serde_json::from_slice(&out.stdout).map_err(|e| format!("stdout: {e}"))?;
    if code != Some(2) || report["covol_finite"] != Value::Bool(false) || report["covol"] != "inf" {
        return Err(format!("exit {code:?}, report {report}"));
    }
    Ok("covol_finite=false, `covol` exits 2".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("kushnirenko equality on monomial maps", kushnirenko_equality),
        ("strict kushnirenko inequality", strict_kushnirenko),
        ("monomial lct", monomial_lct),
        ("directional-number axioms", directional_axioms),
        ("relative-type consistency", relative_type_consistency),
        ("domination inequality", domination),
        ("covolume correctness", covolume_correctness),
        ("mixed covolume", mixed_covolume),
        ("dequantization", dequantization),
        ("semiring laws", semiring_laws),
        ("degeneracy handling", degeneracy),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
