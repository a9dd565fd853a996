//! Germ supports: the monomials of an analytic germ, and equidimensional maps.
//!
//! Every polyhedral invariant in this crate depends on the support alone: the
//! Newton polyhedron is generated by the exponents `J` whose coefficient is
//! nonzero, whatever the coefficient is. Coefficients are kept only so the
//! dequantization lab can evaluate `|f|` numerically.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::ParseError;
use crate::rational::{format_rational, parse_rational, to_f64, Q};

/// Exponent vector of a monomial: a point of the closed positive orthant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentPoint(Vec<Q>);

impl ExponentPoint {
    pub fn new(coords: Vec<Q>) -> Result<Self, ParseError> {
        if coords.is_empty() {
            return Err(ParseError::Schema("exponent vector must be nonempty".into()));
        }
        if coords.iter().any(|c| c.is_negative()) {
            return Err(ParseError::Schema(format!(
                "exponent vector has a negative coordinate: {}",
                coords.iter().map(format_rational).collect::<Vec<_>>().join(",")
            )));
        }
        Ok(ExponentPoint(coords))
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| crate::rational::q(c)).collect())
            .expect("nonnegative integer exponents")
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<Q>) -> Self {
        debug_assert!(coords.iter().all(|c| !c.is_negative()));
        ExponentPoint(coords)
    }

    pub fn origin(dim: usize) -> Self {
        ExponentPoint(vec![Q::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Q> {
        self.0
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Componentwise `self >= other`.
    pub fn dominates(&self, other: &ExponentPoint) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl fmt::Display for ExponentPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

/// Exact complex coefficient with rational parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coefficient {
    pub re: Q,
    pub im: Q,
}

impl Coefficient {
    pub fn real(re: Q) -> Self {
        Coefficient { re, im: Q::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    fn add(&self, other: &Coefficient) -> Coefficient {
        Coefficient {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    fn mul(&self, other: &Coefficient) -> Coefficient {
        Coefficient {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    fn neg(&self) -> Coefficient {
        Coefficient {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

/// Support of a germ `f = Σ c_J z^J`. An empty support is `f ≡ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermSupport {
    dim: usize,
    points: BTreeSet<ExponentPoint>,
    coeffs: Option<BTreeMap<ExponentPoint, Coefficient>>,
}

impl GermSupport {
    pub fn new(
        dim: usize,
        points: impl IntoIterator<Item = ExponentPoint>,
    ) -> Result<Self, ParseError> {
        if dim == 0 {
            return Err(ParseError::Schema("dimension must be at least 1".into()));
        }
        let points: BTreeSet<_> = points.into_iter().collect();
        for p in &points {
            if p.dim() != dim {
                return Err(ParseError::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        Ok(GermSupport {
            dim,
            points,
            coeffs: None,
        })
    }

    /// Builds a support with coefficients, summing repeated exponents and
    /// dropping monomials whose combined coefficient is zero.
    pub fn with_coefficients(
        dim: usize,
        terms: impl IntoIterator<Item = (ExponentPoint, Coefficient)>,
    ) -> Result<Self, ParseError> {
        if dim == 0 {
            return Err(ParseError::Schema("dimension must be at least 1".into()));
        }
        let mut merged: BTreeMap<ExponentPoint, Coefficient> = BTreeMap::new();
        for (p, c) in terms {
            if p.dim() != dim {
                return Err(ParseError::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            let entry = merged.entry(p).or_insert_with(|| Coefficient::real(Q::zero()));
            *entry = entry.add(&c);
        }
        merged.retain(|_, c| !c.is_zero());
        Ok(GermSupport {
            dim,
            points: merged.keys().cloned().collect(),
            coeffs: Some(merged),
        })
    }

    pub fn from_int_points(dim: usize, points: &[&[i64]]) -> Self {
        Self::new(dim, points.iter().map(|p| ExponentPoint::from_ints(p)))
            .expect("consistent integer support")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> impl Iterator<Item = &ExponentPoint> {
        self.points.iter()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn coefficients(&self) -> Option<&BTreeMap<ExponentPoint, Coefficient>> {
        self.coeffs.as_ref()
    }

    pub fn coefficient(&self, point: &ExponentPoint) -> Option<&Coefficient> {
        self.coeffs.as_ref()?.get(point)
    }

    /// Same support, every coefficient set to one.
    pub fn with_unit_coefficients(&self) -> GermSupport {
        let coeffs = self
            .points
            .iter()
            .map(|p| (p.clone(), Coefficient::real(crate::rational::q(1))))
            .collect();
        GermSupport {
            dim: self.dim,
            points: self.points.clone(),
            coeffs: Some(coeffs),
        }
    }

    /// Whether `u = log|f|` is singular at the origin, i.e. `f ∈ 𝔪_0` or `f ≡ 0`.
    pub fn is_singular(&self) -> bool {
        !self.points.iter().any(ExponentPoint::is_origin)
    }

    pub fn to_json(&self) -> Value {
        let support: Vec<Vec<String>> = self.points.iter().map(|p| p.to_strings()).collect();
        let mut doc = json!({ "n": self.dim, "support": support });
        if let Some(coeffs) = &self.coeffs {
            let list: Vec<[String; 2]> = self
                .points
                .iter()
                .map(|p| {
                    let c = &coeffs[p];
                    [format_rational(&c.re), format_rational(&c.im)]
                })
                .collect();
            doc["coeffs"] = json!(list);
        }
        doc
    }
}

/// An equidimensional map `F = (f_1, …, f_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSpec {
    dim: usize,
    components: Vec<GermSupport>,
}

impl MapSpec {
    pub fn new(dim: usize, components: Vec<GermSupport>) -> Result<Self, ParseError> {
        if components.len() != dim {
            return Err(ParseError::Schema(format!(
                "map in dimension {dim} needs {dim} components, got {}",
                components.len()
            )));
        }
        for (i, c) in components.iter().enumerate() {
            if c.dim() != dim {
                return Err(ParseError::DimensionMismatch {
                    expected: dim,
                    found: c.dim(),
                });
            }
            if c.is_empty() {
                return Err(ParseError::Schema(format!("map component {} is empty", i + 1)));
            }
        }
        Ok(MapSpec { dim, components })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[GermSupport] {
        &self.components
    }

    pub fn to_json(&self) -> Value {
        let comps: Vec<Value> = self
            .components
            .iter()
            .map(|c| {
                let mut v = c.to_json();
                v.as_object_mut().map(|o| o.remove("n"));
                v
            })
            .collect();
        json!({ "n": self.dim, "map": comps })
    }
}

/// Result of reading a JSON document: a single germ or a map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportDocument {
    Germ(GermSupport),
    Map(MapSpec),
}

/// Parses `{"n":…, "support":[…], "coeffs":[…]}` or `{"n":…, "map":[…]}`.
pub fn parse_support_json(doc: &str) -> Result<SupportDocument, ParseError> {
    let value: Value = serde_json::from_str(doc).map_err(|e| ParseError::Json(e.to_string()))?;
    parse_support_value(&value)
}

pub fn parse_support_value(value: &Value) -> Result<SupportDocument, ParseError> {
    let obj = value
        .as_object()
        .ok_or_else(|| ParseError::Schema("top level must be an object".into()))?;
    let dim = match obj.get("n") {
        Some(n) => Some(parse_dim(n)?),
        None => None,
    };
    match (obj.get("support"), obj.get("map")) {
        (Some(_), Some(_)) => Err(ParseError::Schema(
            "document has both \"support\" and \"map\"".into(),
        )),
        (Some(_), None) => parse_germ_object(value, dim).map(SupportDocument::Germ),
        (None, Some(map)) => {
            let items = map
                .as_array()
                .ok_or_else(|| ParseError::Schema("\"map\" must be an array".into()))?;
            let dim = dim.unwrap_or(items.len());
            let components = items
                .iter()
                .map(|item| parse_germ_object(item, Some(dim)))
                .collect::<Result<Vec<_>, _>>()?;
            MapSpec::new(dim, components).map(SupportDocument::Map)
        }
        (None, None) => Err(ParseError::Schema(
            "document needs a \"support\" or a \"map\" field".into(),
        )),
    }
}

fn parse_dim(value: &Value) -> Result<usize, ParseError> {
    value
        .as_u64()
        .filter(|&n| n >= 1)
        .map(|n| n as usize)
        .ok_or_else(|| ParseError::Schema("\"n\" must be a positive integer".into()))
}

fn parse_germ_object(value: &Value, outer_dim: Option<usize>) -> Result<GermSupport, ParseError> {
    let obj = value
        .as_object()
        .ok_or_else(|| ParseError::Schema("germ must be an object".into()))?;
    let own_dim = match obj.get("n") {
        Some(n) => Some(parse_dim(n)?),
        None => None,
    };
    if let (Some(a), Some(b)) = (outer_dim, own_dim) {
        if a != b {
            return Err(ParseError::DimensionMismatch {
                expected: a,
                found: b,
            });
        }
    }
    let rows = obj
        .get("support")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::Schema("\"support\" must be an array of points".into()))?;
    let points = rows
        .iter()
        .map(|row| {
            let coords = row
                .as_array()
                .ok_or_else(|| ParseError::Schema("support point must be an array".into()))?
                .iter()
                .map(parse_rat_token)
                .collect::<Result<Vec<_>, _>>()?;
            ExponentPoint::new(coords)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let dim = match own_dim.or(outer_dim) {
        Some(d) => d,
        None => points
            .first()
            .map(ExponentPoint::dim)
            .ok_or_else(|| ParseError::Schema("\"n\" is required for an empty support".into()))?,
    };
    match obj.get("coeffs") {
        None | Some(Value::Null) => GermSupport::new(dim, points),
        Some(coeffs) => {
            let coeffs = coeffs
                .as_array()
                .ok_or_else(|| ParseError::Schema("\"coeffs\" must be an array".into()))?;
            if coeffs.len() != points.len() {
                return Err(ParseError::Schema(format!(
                    "{} coefficients for {} support points",
                    coeffs.len(),
                    points.len()
                )));
            }
            let parsed = coeffs
                .iter()
                .map(|c| match c.as_array().map(Vec::as_slice) {
                    Some([re, im]) => Ok(Coefficient {
                        re: parse_rat_token(re)?,
                        im: parse_rat_token(im)?,
                    }),
                    _ => Err(ParseError::Schema("coefficient must be a [re, im] pair".into())),
                })
                .collect::<Result<Vec<_>, _>>()?;
            GermSupport::with_coefficients(dim, points.into_iter().zip(parsed))
        }
    }
}

/// A JSON integer, or a string holding an integer, decimal or `p/q`.
pub(crate) fn parse_rat_token(value: &Value) -> Result<Q, ParseError> {
    match value {
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(ParseError::NotRational(other.to_string())),
    }
}

/// Parses a polynomial in `x1..xn` into its support, combining like terms exactly.
pub fn parse_polynomial(text: &str, dim: usize) -> Result<GermSupport, ParseError> {
    if dim == 0 {
        return Err(ParseError::Schema("dimension must be at least 1".into()));
    }
    let mut parser = PolyParser {
        src: text.as_bytes(),
        pos: 0,
        dim,
    };
    let terms = parser.poly()?;
    GermSupport::with_coefficients(dim, terms)
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
}

impl PolyParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected '{}'", byte as char))
        }
    }

    fn poly(&mut self) -> Result<Vec<(ExponentPoint, Coefficient)>, ParseError> {
        let mut terms = Vec::new();
        let mut negate = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (point, coeff) = self.term()?;
            terms.push((point, if negate { coeff.neg() } else { coeff }));
            match self.peek() {
                None => break,
                Some(b'+') => negate = false,
                Some(b'-') => negate = true,
                Some(c) => return self.error(format!("unexpected '{}'", c as char)),
            }
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<(ExponentPoint, Coefficient), ParseError> {
        let mut exps = vec![Q::zero(); self.dim];
        let mut coeff = Coefficient::real(crate::rational::q(1));
        match self.peek() {
            Some(b'x') => self.factor(&mut exps)?,
            Some(c) if c == b'(' || c == b'.' || c.is_ascii_digit() => {
                coeff = self.coefficient()?;
                if self.peek() != Some(b'*') {
                    return Ok((ExponentPoint::from_vec_unchecked(exps), coeff));
                }
                self.pos += 1;
                self.factor(&mut exps)?;
            }
            Some(c) => return self.error(format!("unexpected '{}'", c as char)),
            None => return self.error("unexpected end of input"),
        }
        while self.peek() == Some(b'*') {
            self.pos += 1;
            match self.peek() {
                Some(b'x') => self.factor(&mut exps)?,
                Some(c) if c == b'(' || c == b'.' || c.is_ascii_digit() => {
                    let c = self.coefficient()?;
                    coeff = coeff.mul(&c);
                }
                _ => return self.error("expected a factor after '*'"),
            }
        }
        Ok((ExponentPoint::from_vec_unchecked(exps), coeff))
    }

    fn factor(&mut self, exps: &mut [Q]) -> Result<(), ParseError> {
        let start = self.pos;
        self.expect(b'x')?;
        let index = self.uint()?;
        if index == 0 || index > self.dim {
            return Err(ParseError::VariableOutOfRange {
                index,
                dim: self.dim,
                pos: start,
            });
        }
        let mut power = 1usize;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if self.peek() == Some(b'-') {
                return Err(ParseError::NegativeExponent { pos: self.pos });
            }
            power = self.uint()?;
        }
        exps[index - 1] += crate::rational::q(power as i64);
        Ok(())
    }

    fn uint(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected an unsigned integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map_or_else(|| self.error("integer too large"), Ok)
    }

    fn number(&mut self) -> Result<Q, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a number");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        parse_rational(text).map_err(|_| ParseError::Syntax {
            pos: start,
            msg: format!("malformed number {text:?}"),
        })
    }

    fn coefficient(&mut self) -> Result<Coefficient, ParseError> {
        if self.peek() != Some(b'(') {
            return self.number().map(Coefficient::real);
        }
        self.pos += 1;
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            _ => false,
        };
        let mut first = self.number()?;
        if negative {
            first = -first;
        }
        if self.peek() == Some(b'i') {
            self.pos += 1;
            self.expect(b')')?;
            return Ok(Coefficient {
                re: Q::zero(),
                im: first,
            });
        }
        let sign = match self.peek() {
            Some(b'+') => Q::from_integer(1.into()),
            Some(b'-') => Q::from_integer((-1).into()),
            Some(b')') => {
                self.pos += 1;
                return Ok(Coefficient::real(first));
            }
            _ => return self.error("expected '+', '-' or ')' in complex coefficient"),
        };
        self.pos += 1;
        let im = if self.peek() == Some(b'i') {
            Q::from_integer(1.into())
        } else {
            self.number()?
        };
        self.expect(b'i')?;
        self.expect(b')')?;
        Ok(Coefficient {
            re: first,
            im: sign * im,
        })
    }
}
