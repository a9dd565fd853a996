use std::fs;
use std::path::Path;

use serde_json::Value;
use tropsing::germ::{parse_support_value, SupportDocument};
use tropsing::rational::parse_rational;
use tropsing::{parse_polynomial, GermSupport, MapSpec, NewtonPolyhedron, ParseError, Weight};

use crate::commands::CliError;
use crate::Common;

/// Anything the commands know how to read.
pub enum Input {
    Germ(GermSupport),
    Map(MapSpec),
    Polyhedron(NewtonPolyhedron),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn from_text(text: &str, n: Option<usize>) -> Result<Input, CliError> {
    if text.trim_start().starts_with('{') {
        let value: Value =
            serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        return from_value(&value);
    }
    let n = n.ok_or_else(|| CliError::Usage("polynomial input needs --n".into()))?;
    Ok(Input::Germ(parse_polynomial(text.trim(), n)?))
}

fn from_value(value: &Value) -> Result<Input, CliError> {
    if value.get("vertices").is_some() {
        return Ok(Input::Polyhedron(NewtonPolyhedron::from_json_value(value)?));
    }
    Ok(match parse_support_value(value)? {
        SupportDocument::Germ(g) => Input::Germ(g),
        SupportDocument::Map(m) => Input::Map(m),
    })
}

pub fn load(c: &Common) -> Result<Input, CliError> {
    if let Some(path) = &c.input {
        return from_text(&read(path)?, c.n);
    }
    if let Some(text) = &c.poly {
        return from_text(text, c.n);
    }
    if let Some(text) = &c.json {
        return from_text(text, c.n);
    }
    Err(CliError::Usage("no input: pass --input, --poly or --json".into()))
}

pub fn load_polyhedron(path: &Path) -> Result<NewtonPolyhedron, CliError> {
    Ok(match from_text(&read(path)?, None)? {
        Input::Germ(g) => NewtonPolyhedron::from_support(&g),
        Input::Polyhedron(p) => p,
        Input::Map(_) => return Err(CliError::Usage("--psi must describe a single polyhedron".into())),
    })
}

pub fn parse_weight(text: &str) -> Result<Weight, CliError> {
    let coords = text
        .split(',')
        .map(|s| parse_rational(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Weight::new(coords)?)
}

pub fn parse_point(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            parse_rational(s)
                .map(|q| tropsing::rational::to_f64(&q))
                .map_err(CliError::from)
        })
        .collect()
}
