use std::fmt::Write as _;

use serde_json::{json, Map, Value};
use thiserror::Error;
use tropsing::check::{check_germ, check_map, check_polyhedron, CheckOutcome};
use tropsing::covolume::{self, bernstein_bound, kushnirenko_bound, monomial_map_multiplicity};
use tropsing::dequant::{convergence_report, format_sig12, uniform_grid};
use tropsing::invariants::{
    diagonal_bisection, diagonal_threshold, directional_weight_polyhedron, lambda_indicator,
    relative_type as sigma,
};
use tropsing::oracle::{grid_lambda, mc_covol, staircase_covol_2d};
use tropsing::rational::format_rational;
use tropsing::{Error, ExtRational, NewtonPolyhedron, ParseError, Weight};

use crate::input::{load, load_polyhedron, parse_point, parse_weight, Input};
use crate::{Common, Format};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("precondition violated: {0}")]
    Precondition(Error),
    #[error("property check failed: {0}")]
    Property(String),
    /// A report was produced but the command still fails.
    #[error("{error}")]
    Reported { output: String, error: Box<CliError> },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => CliError::Parse(p),
            other => CliError::Precondition(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) | CliError::Usage(_) => 1,
            CliError::Precondition(_) => 2,
            CliError::Property(_) => 3,
            CliError::Reported { error, .. } => error.exit_code(),
        }
    }
}

type Out = Result<String, CliError>;

const GRID_RESOLUTION: u32 = 60;
const BISECTION_STEPS: usize = 40;

fn germ_polyhedron(input: &Input) -> NewtonPolyhedron {
    match input {
        Input::Germ(g) => NewtonPolyhedron::from_support(g),
        Input::Polyhedron(p) => p.clone(),
        Input::Map(m) => covolume::map_polyhedron(m),
    }
}

fn weights(c: &Common, dim: usize) -> Result<Vec<Weight>, CliError> {
    if c.weights.is_empty() {
        return Ok(vec![Weight::unit(dim)]);
    }
    c.weights
        .iter()
        .map(|w| {
            let w = parse_weight(w)?;
            if w.dim() != dim {
                return Err(CliError::Usage(format!(
                    "weight {w} has dimension {}, input has {dim}",
                    w.dim()
                )));
            }
            Ok(w)
        })
        .collect()
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar_text).collect::<Vec<_>>().join(";"),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        pretty(val, indent + 1, out);
                    }
                    Value::Array(items) if items.iter().any(Value::is_object) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        for item in items {
                            let _ = writeln!(out, "{pad}  -");
                            pretty(item, indent + 2, out);
                        }
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", scalar_text(val));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other));
        }
    }
}

/// Renders a report; CSV flattens the top level into `key,value` rows.
fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(report).expect("report serializes"),
        Format::Pretty => {
            let mut out = String::new();
            pretty(report, 0, &mut out);
            out
        }
        Format::Csv => {
            let mut out = String::from("key,value\n");
            if let Value::Object(map) = report {
                for (k, v) in map {
                    let text = match v {
                        Value::Object(_) => v.to_string(),
                        _ => scalar_text(v),
                    };
                    let _ = writeln!(out, "{k},{}", csv_field(&text));
                }
            }
            out
        }
    }
}

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

pub fn polyhedron(c: &Common) -> Out {
    let gamma = germ_polyhedron(&load(c)?);
    if c.format == Format::Pretty {
        let mut out = format!("Γ = {gamma}\n");
        for f in gamma.facets() {
            let normal: Vec<String> = f.normal.iter().map(format_rational).collect();
            let _ = writeln!(out, "  ⟨({}), x⟩ >= {}", normal.join(", "), format_rational(&f.offset));
        }
        return Ok(out);
    }
    Ok(render(&gamma.to_json(true), c.format))
}

pub fn nu(c: &Common) -> Out {
    let input = load(c)?;
    let gamma = germ_polyhedron(&input);
    let ws = weights(c, gamma.dim())?;
    let values = ws
        .iter()
        .map(|a| gamma.directional_number(a))
        .collect::<Result<Vec<_>, _>>()?;
    let report = if let [single] = values.as_slice() {
        json!({ "nu": single })
    } else {
        let entries: Vec<Value> = ws
            .iter()
            .zip(&values)
            .map(|(a, v)| {
                let w: Vec<String> = a.coords().iter().map(format_rational).collect();
                json!({ "weight": w, "nu": v })
            })
            .collect();
        json!({ "nu": entries })
    };
    Ok(render(&report, c.format))
}

pub fn relative_type(c: &Common) -> Out {
    let gamma = germ_polyhedron(&load(c)?);
    let psi = match (&c.psi, c.weights.as_slice()) {
        (Some(path), []) => load_polyhedron(path)?,
        (None, [_]) => directional_weight_polyhedron(&weights(c, gamma.dim())?[0]),
        (None, []) => directional_weight_polyhedron(&Weight::unit(gamma.dim())),
        _ => return Err(CliError::Usage("pass either --psi or a single --weight".into())),
    };
    let result = sigma(&gamma, &psi)?;
    Ok(render(&result.to_json(), c.format))
}

pub fn lct(c: &Common) -> Out {
    let gamma = germ_polyhedron(&load(c)?);
    let index = lambda_indicator(&gamma);
    let mut report = Map::new();
    report.insert("lambda".into(), json!(index.lambda));
    report.insert("lct".into(), json!(tropsing::invariants::lct(&gamma)));
    if c.verify && !gamma.is_empty() {
        let grid = grid_lambda(&gamma, GRID_RESOLUTION)?;
        let (lo, hi) = diagonal_bisection(&gamma, BISECTION_STEPS)?;
        let diagonal = diagonal_threshold(&gamma);
        let agrees = diagonal == index.lambda;
        let weight: Option<Vec<String>> =
            index.weight.as_ref().map(|w| w.iter().map(format_rational).collect());
        report.insert(
            "verify".into(),
            json!({
                "weight": weight,
                "grid_lambda": format_sig12(grid.value),
                "grid_resolution": format_rational(grid.resolution.as_ref().expect("grid search")),
                "diagonal": diagonal,
                "bisection": [format_rational(&lo), format_rational(&hi)],
                "agrees": agrees,
            }),
        );
        if !agrees {
            return Err(CliError::Reported {
                output: render(&Value::Object(report), c.format),
                error: Box::new(CliError::Property(format!(
                    "lct-routes: LP gives {} but the diagonal gives {diagonal}",
                    index.lambda
                ))),
            });
        }
    }
    Ok(render(&Value::Object(report), c.format))
}

pub fn covol(c: &Common) -> Out {
    let gamma = germ_polyhedron(&load(c)?);
    if let Some(axis) = missing_axis(&gamma) {
        let report = json!({ "covol": ExtRational::Infinite, "covol_finite": false, "missing_axis": axis });
        return Err(CliError::Reported {
            output: render(&report, c.format),
            error: Box::new(Error::InfiniteCovolume { axis }.into()),
        });
    }
    let result = covolume::covol(&gamma);
    let mut report = Map::new();
    report.insert("covol".into(), json!(result.value));
    report.insert("covol_finite".into(), json!(true));
    report.insert("residual_ma_mass".into(), json!(result.residual_ma_mass));
    if c.verify {
        let mc = mc_covol(&gamma, c.samples, c.seed)?;
        let stderr = mc.stderr.unwrap_or(0.0);
        let exact = result.value.to_f64();
        let mut verify = json!({
            "monte_carlo": format_sig12(mc.value),
            "stderr": format_sig12(stderr),
            "samples": mc.samples,
            "within_3_stderr": (mc.value - exact).abs() <= 3.0 * stderr,
        });
        if gamma.dim() == 2 {
            verify["staircase"] = json!(format_rational(&staircase_covol_2d(&gamma)?));
        }
        report.insert("verify".into(), verify);
    }
    Ok(render(&Value::Object(report), c.format))
}

/// 1-based axis without a vertex, if any.
fn missing_axis(gamma: &NewtonPolyhedron) -> Option<usize> {
    gamma.missing_axis().map(|k| k + 1)
}

fn map_of(c: &Common) -> Result<tropsing::MapSpec, CliError> {
    match load(c)? {
        Input::Map(m) => Ok(m),
        _ => Err(CliError::Usage("this command needs a map document {\"n\":…,\"map\":[…]}".into())),
    }
}

pub fn mixed_covol(c: &Common) -> Out {
    let map = map_of(c)?;
    let slots: Vec<NewtonPolyhedron> =
        map.components().iter().map(NewtonPolyhedron::from_support).collect();
    let mixed = covolume::mixed_covol(&slots)?;
    let mut report = json!({ "mixed_covol": mixed.value });
    if let Some(subset) = &mixed.infinite_subset {
        report["infinite_subset"] = json!(subset);
        return Err(CliError::Reported {
            output: render(&report, c.format),
            error: Box::new(CliError::Precondition(Error::InfiniteCovolume {
                axis: missing_axis(&sum_of(&slots, subset)).unwrap_or(1),
            })),
        });
    }
    if c.verify {
        let diag: Vec<ExtRational> = slots.iter().map(|s| covolume::covol(s).value).collect();
        report["verify"] = json!({ "slot_covolumes": diag });
    }
    Ok(render(&report, c.format))
}

fn sum_of(slots: &[NewtonPolyhedron], subset: &[usize]) -> NewtonPolyhedron {
    subset
        .iter()
        .map(|&i| slots[i - 1].clone())
        .reduce(|a, b| a.trop_mul(&b).expect("same dimension"))
        .expect("nonempty subset")
}

pub fn bound(c: &Common) -> Out {
    let map = map_of(c)?;
    let kushnirenko = kushnirenko_bound(&map);
    let bernstein = bernstein_bound(&map);
    let mut report = Map::new();
    report.insert("kushnirenko".into(), json!(kushnirenko));
    match monomial_map_multiplicity(&map) {
        Ok(m_f) => {
            report.insert("equality".into(), json!(m_f == kushnirenko));
            report.insert("m_F".into(), json!(m_f));
        }
        Err(Error::NotMonomial { .. }) => {}
        Err(e) => return Err(e.into()),
    }
    report.insert("bernstein".into(), json!(bernstein.value));
    if let Some(subset) = bernstein.infinite_subset {
        report.insert("bernstein_infinite_subset".into(), json!(subset));
    }
    Ok(render(&Value::Object(report), c.format))
}

pub fn dequantize(c: &Common) -> Out {
    let Input::Germ(f) = load(c)? else {
        return Err(CliError::Usage("dequantize needs a single germ with coefficients".into()));
    };
    let f = if f.coefficients().is_some() { f } else { f.with_unit_coefficients() };
    let grid = if c.grid.is_empty() {
        uniform_grid(f.dim(), -2.0, -0.5, 5)
    } else {
        c.grid.iter().map(|t| parse_point(t)).collect::<Result<_, _>>()?
    };
    if let Some(bad) = grid.iter().find(|t| t.len() != f.dim()) {
        return Err(CliError::Usage(format!(
            "grid point has dimension {}, germ has {}",
            bad.len(),
            f.dim()
        )));
    }
    let report = convergence_report(&f, &grid, &c.m_schedule, c.phases, c.seed, c.tolerance)?;
    let output = match c.format {
        Format::Csv => report.to_csv(),
        Format::Json => serde_json::to_string(&report.to_json()).expect("serializes"),
        Format::Pretty => {
            let mut out = report.to_csv().replace(',', "\t");
            let _ = writeln!(out, "{}", if report.pass { "PASS" } else { "FAIL" });
            out
        }
    };
    if report.pass {
        Ok(output)
    } else {
        Err(CliError::Reported {
            output,
            error: Box::new(CliError::Property(format!(
                "dequantization: {}",
                report.failures.join("; ")
            ))),
        })
    }
}

pub fn check(c: &Common) -> Out {
    let outcomes: Vec<CheckOutcome> = match load(c)? {
        Input::Germ(g) => check_germ(&g, c.seed),
        Input::Map(m) => check_map(&m, c.seed),
        Input::Polyhedron(p) => check_polyhedron(&p, c.seed),
    };
    let failed: Vec<&CheckOutcome> = outcomes.iter().filter(|o| !o.passed).collect();
    let output = match c.format {
        Format::Json => serde_json::to_string(&json!({
            "pass": failed.is_empty(),
            "checks": outcomes,
        }))
        .expect("serializes"),
        Format::Csv => {
            let mut out = String::from("check,passed,detail\n");
            for o in &outcomes {
                let _ = writeln!(out, "{},{},{}", o.name, o.passed, csv_field(&o.detail));
            }
            out
        }
        Format::Pretty => {
            let mut out = String::new();
            for o in &outcomes {
                let mark = if o.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "{mark} {} ({})", o.name, o.detail);
            }
            out
        }
    };
    if failed.is_empty() {
        return Ok(output);
    }
    let names: Vec<String> = failed.iter().map(|o| format!("{}: {}", o.name, o.detail)).collect();
    Err(CliError::Reported {
        output,
        error: Box::new(CliError::Property(names.join("; "))),
    })
}
