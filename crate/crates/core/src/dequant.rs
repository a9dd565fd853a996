//! Numeric check that `m⁻¹·log|f(e^{m(t+iθ)})|` converges to the support
//! function `ψ(t) = max_J ⟨t, J⟩` of the Newton polyhedron as `m → ∞`.
//!
//! This is the only floating point module. The exact value of `ψ(t)` comes
//! from the rational pipeline; everything else is `f64`. Evaluation happens
//! in the log domain: for large `m` the moduli `e^{m⟨t,J⟩}` underflow.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::germ::GermSupport;
use crate::oracle::mix_seed;
use crate::polyhedron::NewtonPolyhedron;
use crate::rational::{from_f64, to_f64};

/// Absolute floor below which errors count as zero in the monotonicity check.
pub const ROUNDOFF_FLOOR: f64 = 1e-12;
/// Pass threshold on the error at the final `m`.
pub const DEFAULT_TOLERANCE: f64 = 1e-2;
/// Allowed growth factor between consecutive `m` in the monotonicity check.
pub const SLACK_FACTOR: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DequantSample {
    pub m: u32,
    pub t: Vec<f64>,
    pub theta_count: usize,
    /// `max_θ m⁻¹·log|f(e^{m(t+iθ)})|`.
    pub value: f64,
}

struct Term {
    exponent: Vec<f64>,
    log_modulus: f64,
    arg: f64,
}

fn terms(f: &GermSupport) -> Result<Vec<Term>> {
    let coeffs = f.coefficients().ok_or(Error::MissingCoefficients)?;
    Ok(coeffs
        .iter()
        .map(|(p, c)| {
            let z: Complex64 = c.to_complex();
            Term {
                exponent: p.coords().iter().map(to_f64).collect(),
                log_modulus: z.norm().ln(),
                arg: z.arg(),
            }
        })
        .collect())
}

/// `m⁻¹·log|f|` at modulus `e^{m t}` and phases `θ`, or `None` when `f` vanishes there.
fn log_abs_scaled(terms: &[Term], t: &[f64], theta: &[f64], m: f64) -> Option<f64> {
    let logs: Vec<f64> = terms
        .iter()
        .map(|term| {
            m * term.exponent.iter().zip(t).map(|(j, tk)| j * tk).sum::<f64>() + term.log_modulus
        })
        .collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let sum: Complex64 = terms
        .iter()
        .zip(&logs)
        .map(|(term, &l)| {
            let phase = term.arg
                + m * term.exponent.iter().zip(theta).map(|(j, th)| j * th).sum::<f64>();
            Complex64::from_polar((l - top).exp(), phase)
        })
        .sum();
    let modulus = sum.norm();
    (modulus > 0.0).then(|| (top + modulus.ln()) / m)
}

fn validate(t: &[f64], dim: usize, m: u32, phases: usize) -> Result<()> {
    if t.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: t.len(),
        });
    }
    if t.iter().any(|&x| x >= 0.0 || !x.is_finite()) {
        return Err(Error::InvalidSampling("t must be strictly negative".into()));
    }
    if m == 0 || phases == 0 {
        return Err(Error::InvalidSampling("m and phases must be at least 1".into()));
    }
    Ok(())
}

fn sample_with_stream(f: &GermSupport, t: &[f64], m: u32, phases: usize, seed: u64) -> Result<DequantSample> {
    validate(t, f.dim(), m, phases)?;
    let terms = terms(f)?;
    if terms.is_empty() {
        return Err(Error::DegenerateSample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut theta = vec![0.0; t.len()];
    let mut best: Option<f64> = None;
    for _ in 0..phases {
        for th in theta.iter_mut() {
            *th = rng.random::<f64>() * TAU;
        }
        if let Some(v) = log_abs_scaled(&terms, t, &theta, m as f64) {
            best = Some(best.map_or(v, |b: f64| b.max(v)));
        }
    }
    Ok(DequantSample {
        m,
        t: t.to_vec(),
        theta_count: phases,
        value: best.ok_or(Error::DegenerateSample)?,
    })
}

/// Evaluates `T_m log|f|` at `t` with `phases` pseudo-random phase vectors.
pub fn sample_tm(f: &GermSupport, t: &[f64], m: u32, phases: usize, seed: u64) -> Result<DequantSample> {
    sample_with_stream(f, t, m, phases, mix_seed(seed, m as u64))
}

/// `ψ(t)` from the exact pipeline, converted to `f64`.
pub fn exact_support_value(gamma: &NewtonPolyhedron, t: &[f64]) -> Result<f64> {
    let tq = t
        .iter()
        .map(|&x| from_f64(x).ok_or_else(|| Error::InvalidSampling("non-finite t".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(gamma.support_value(&tq)?.to_f64())
}

/// Upper envelope `max_J [⟨t, J⟩ + m⁻¹·log(|supp|·max|c_J|)]` of the sampled value.
pub fn dominance_envelope(f: &GermSupport, t: &[f64], m: u32) -> Result<f64> {
    let terms = terms(f)?;
    let max_log_c = terms.iter().map(|x| x.log_modulus).fold(f64::NEG_INFINITY, f64::max);
    let slack = ((terms.len() as f64).ln() + max_log_c) / m as f64;
    Ok(terms
        .iter()
        .map(|x| x.exponent.iter().zip(t).map(|(j, tk)| j * tk).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
        + slack)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub t: Vec<f64>,
    pub m: u32,
    pub sampled: f64,
    pub exact: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub tolerance: f64,
    pub pass: bool,
    /// Grid points that failed, with the reason.
    pub failures: Vec<String>,
}

/// Samples every grid point at every `m` and grades the errors.
///
/// PASS needs, for each `t`, an error below `tolerance` at the last `m`, and
/// `error(m_{i+1}) <= 2·error(m_i)` over the last two steps of the schedule
/// (errors under [`ROUNDOFF_FLOOR`] count as zero).
pub fn convergence_report(
    f: &GermSupport,
    grid: &[Vec<f64>],
    m_schedule: &[u32],
    phases: usize,
    seed: u64,
    tolerance: f64,
) -> Result<ConvergenceReport> {
    if m_schedule.is_empty() || m_schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSampling("m schedule must be nonempty and increasing".into()));
    }
    let gamma = NewtonPolyhedron::from_support(f);
    let per_point: Vec<Vec<ConvergenceRow>> = grid
        .par_iter()
        .enumerate()
        .map(|(ti, t)| {
            let exact = exact_support_value(&gamma, t)?;
            m_schedule
                .iter()
                .map(|&m| {
                    let stream = mix_seed(mix_seed(seed, ti as u64), m as u64);
                    let s = sample_with_stream(f, t, m, phases, stream)?;
                    Ok(ConvergenceRow {
                        t: t.clone(),
                        m,
                        sampled: s.value,
                        exact,
                        error: (s.value - exact).abs(),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut failures = Vec::new();
    for rows in &per_point {
        let errors: Vec<f64> = rows.iter().map(|r| r.error).collect();
        let last = *errors.last().expect("nonempty schedule");
        let t = &rows[0].t;
        if last.is_nan() || last >= tolerance {
            failures.push(format!("t={t:?}: error {last:e} at final m exceeds {tolerance:e}"));
        }
        let tail = &errors[errors.len().saturating_sub(3)..];
        for w in tail.windows(2) {
            let (prev, next) = (w[0], w[1]);
            if next > ROUNDOFF_FLOOR && next > SLACK_FACTOR * prev.max(ROUNDOFF_FLOOR) {
                failures.push(format!("t={t:?}: error grew from {prev:e} to {next:e}"));
            }
        }
    }
    Ok(ConvergenceReport {
        rows: per_point.into_iter().flatten().collect(),
        tolerance,
        pass: failures.is_empty(),
        failures,
    })
}

/// Twelve significant digits.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{x:.11e}")
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let n = self.rows.first().map_or(0, |r| r.t.len());
        let mut out = String::new();
        let header: Vec<String> = (1..=n).map(|k| format!("t_{k}")).collect();
        let _ = writeln!(out, "{},m,sampled,exact,error", header.join(","));
        for r in &self.rows {
            let ts: Vec<String> = r.t.iter().map(|&x| format_sig12(x)).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                ts.join(","),
                r.m,
                format_sig12(r.sampled),
                format_sig12(r.exact),
                format_sig12(r.error)
            );
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "t": r.t.iter().map(|&x| format_sig12(x)).collect::<Vec<_>>(),
                    "m": r.m,
                    "sampled": format_sig12(r.sampled),
                    "exact": format_sig12(r.exact),
                    "error": format_sig12(r.error),
                })
            })
            .collect();
        serde_json::json!({
            "rows": rows,
            "tolerance": format_sig12(self.tolerance),
            "pass": self.pass,
            "failures": self.failures,
        })
    }
}

/// `per_axis` evenly spaced points per coordinate in `[lo, hi]^n`.
pub fn uniform_grid(dim: usize, lo: f64, hi: f64, per_axis: usize) -> Vec<Vec<f64>> {
    let axis: Vec<f64> = (0..per_axis)
        .map(|i| {
            if per_axis == 1 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / (per_axis - 1) as f64
            }
        })
        .collect();
    let mut grid = vec![Vec::new()];
    for _ in 0..dim {
        grid = grid
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    grid
}
