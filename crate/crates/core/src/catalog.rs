//! Built-in constructions and π approximants.

use thiserror::Error;

use crate::field::{Constructible, FieldError};
use crate::geometry;
use crate::lang::{self, execute, parse_expr, ExecError, ExecErrorKind, Executor, ParseError, Program};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown builtin `{0}`")]
    UnknownProgram(String),
    #[error("unknown approximant `{0}`")]
    UnknownApproximant(String),
}

/// A claimed exact length between two named points.
#[derive(Debug, Clone)]
pub struct Claim {
    pub endpoints: (String, String),
    pub target: Constructible,
    /// The target as a closed expression.
    pub target_text: &'static str,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub source: &'static str,
    pub program: Program,
    /// The first claim is the entry's result; later ones are secondary results.
    pub claims: Vec<Claim>,
}

impl CatalogEntry {
    pub fn result(&self) -> &Claim {
        &self.claims[0]
    }
}

#[derive(Debug, Clone)]
pub struct Approximant {
    pub name: &'static str,
    pub value: Constructible,
    pub claimed_decimal_places: usize,
    pub source: &'static str,
    pub expression: &'static str,
}

pub const PROGRAM_NAMES: [&str; 5] = ["dixon-phi", "chu-phi", "chu9-left", "chu9-right", "chu9-full"];

pub const APPROXIMANT_NAMES: [&str; 4] = [
    "zu-355-113",
    "ramanujan-quartic",
    "dixon-phi-value",
    "chu9-value",
];

const GOLDEN_SIDE: &str = "sqrt(6/5*(1+(1+sqrt(5))/2))";
const NINE_DIGIT: &str = "63/25*(1+5/2*(15*sqrt(5)-7)/269)";

fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "dixon-phi" => include_str!("../../../catalog/dixon-phi.construct"),
        "chu-phi" => include_str!("../../../catalog/chu-phi.construct"),
        "chu9-left" => include_str!("../../../catalog/chu9-left.construct"),
        "chu9-right" => include_str!("../../../catalog/chu9-right.construct"),
        "chu9-full" => include_str!("../../../catalog/chu9-full.construct"),
        _ => return None,
    })
}

/// Evaluates a closed expression such as `sqrt(6/5*(1+(1+sqrt(5))/2))`.
pub fn parse_target(text: &str) -> Result<Constructible, TargetError> {
    let e = parse_expr(text)?;
    Executor::<Constructible>::new(None)
        .eval(&e)
        .map_err(TargetError::Eval)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TargetError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Eval(ExecErrorKind),
}

fn claim(p: &str, q: &str, target_text: &'static str) -> Claim {
    Claim {
        endpoints: (p.to_string(), q.to_string()),
        target: parse_target(target_text).expect("builtin target"),
        target_text,
    }
}

pub fn builtin(name: &str) -> Result<CatalogEntry, CatalogError> {
    let text = source(name).ok_or_else(|| CatalogError::UnknownProgram(name.to_string()))?;
    let program = lang::parse(text).expect("builtin program parses").named(name);
    let (name, claims) = match name {
        "dixon-phi" => ("dixon-phi", vec![claim("F", "K", GOLDEN_SIDE)]),
        "chu-phi" => ("chu-phi", vec![claim("M", "H", GOLDEN_SIDE)]),
        "chu9-left" => (
            "chu9-left",
            vec![
                claim("E", "F", "sqrt(63)/5"),
                claim("N", "O", "sqrt(15*sqrt(5)-7)/5"),
            ],
        ),
        "chu9-right" => ("chu9-right", vec![claim("P", "U", "sqrt(269)/8")]),
        _ => ("chu9-full", vec![claim("E", "Z", "sqrt(63/25*(1+5/2*(15*sqrt(5)-7)/269))")]),
    };
    Ok(CatalogEntry {
        name,
        source: text,
        program,
        claims,
    })
}

pub fn approximant(name: &str) -> Result<Approximant, CatalogError> {
    let (name, expression, places, source) = match name {
        "zu-355-113" => ("zu-355-113", "355/113", 6, "Zu Chongzhi's ratio"),
        "ramanujan-quartic" => (
            "ramanujan-quartic",
            "sqrt(sqrt(9*9+19*19/22))",
            8,
            "Ramanujan's quartic root",
        ),
        "dixon-phi-value" => (
            "dixon-phi-value",
            "6/5*(1+(1+sqrt(5))/2)",
            3,
            "Dixon's golden ratio square",
        ),
        "chu9-value" => ("chu9-value", NINE_DIGIT, 9, "nine-digit golden ratio square"),
        _ => return Err(CatalogError::UnknownApproximant(name.to_string())),
    };
    Ok(Approximant {
        name,
        value: parse_target(expression).expect("builtin approximant"),
        claimed_decimal_places: places,
        source,
        expression,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error("`{0}` is not a bound point")]
    UnboundEndpoint(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Whether the distance between the endpoints equals `target` exactly.
pub fn verify(
    program: &Program,
    endpoints: (&str, &str),
    target: &Constructible,
) -> Result<bool, VerifyError> {
    let ws = execute(program)?;
    let get = |n: &str| ws.point(n).ok_or_else(|| VerifyError::UnboundEndpoint(n.to_string()));
    let d = geometry::distance(get(endpoints.0)?, get(endpoints.1)?)
        .map_err(|e| match e {
            geometry::GeometryError::Field(f) => VerifyError::Field(f),
            _ => unreachable!("distance only fails in the field"),
        })?;
    Ok(d.equals(target))
}
