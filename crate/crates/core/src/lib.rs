//! Tropical and polyhedral invariants of monomial singularities.
//!
//! A germ is reduced to its support, the support to a Newton polyhedron
//! `Γ = conv(supp) + R_+^n`, and every invariant (directional Lelong numbers,
//! relative types, integrability indices, covolumes and multiplicity bounds)
//! is computed exactly from `Γ` in rational arithmetic. The [`dequant`] module
//! is the only floating point code: it checks numerically that
//! `m⁻¹·log|f(e^{m(t+iθ)})|` tends to the support function of `Γ`.

pub mod check;
pub mod covolume;
pub mod dd;
pub mod dequant;
pub mod error;
pub mod germ;
pub mod invariants;
pub mod linalg;
pub mod lp;
pub mod oracle;
pub mod polyhedron;
pub mod rational;

pub use error::{Error, ParseError, Result};
pub use germ::{
    parse_polynomial, parse_support_json, Coefficient, ExponentPoint, GermSupport, MapSpec,
    SupportDocument,
};
pub use polyhedron::{Facet, NewtonPolyhedron, Weight};
pub use rational::{ExtRational, Q};
