use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Length expression over named points, named lengths and integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LenExpr {
    Dist(String, String),
    Named(String),
    Int(BigInt),
    Add(Box<LenExpr>, Box<LenExpr>),
    Sub(Box<LenExpr>, Box<LenExpr>),
    Mul(Box<LenExpr>, Box<LenExpr>),
    Div(Box<LenExpr>, Box<LenExpr>),
    Sqrt(Box<LenExpr>),
}

impl LenExpr {
    pub fn dist(a: &str, b: &str) -> Self {
        LenExpr::Dist(a.to_string(), b.to_string())
    }

    /// Value of a subexpression built from integers and `+ − × ÷` only.
    pub fn constant(&self) -> Option<BigRational> {
        match self {
            LenExpr::Int(n) => Some(BigRational::from_integer(n.clone())),
            LenExpr::Add(a, b) => Some(a.constant()? + b.constant()?),
            LenExpr::Sub(a, b) => Some(a.constant()? - b.constant()?),
            LenExpr::Mul(a, b) => Some(a.constant()? * b.constant()?),
            LenExpr::Div(a, b) => {
                let d = b.constant()?;
                if d == BigRational::from_integer(0.into()) {
                    None
                } else {
                    Some(a.constant()? / d)
                }
            }
            _ => None,
        }
    }

    /// Names referenced by the expression, in order of first appearance.
    pub fn references(&self, out: &mut Vec<String>) {
        let mut push = |n: &String| {
            if !out.contains(n) {
                out.push(n.clone());
            }
        };
        match self {
            LenExpr::Dist(a, b) => {
                push(a);
                push(b);
            }
            LenExpr::Named(n) => push(n),
            LenExpr::Int(_) => {}
            LenExpr::Add(a, b) | LenExpr::Sub(a, b) | LenExpr::Mul(a, b) | LenExpr::Div(a, b) => {
                a.references(out);
                b.references(out);
            }
            LenExpr::Sqrt(a) => a.references(out),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            LenExpr::Add(..) | LenExpr::Sub(..) => 1,
            LenExpr::Mul(..) | LenExpr::Div(..) => 2,
            _ => 3,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.precedence();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            LenExpr::Dist(a, b) => write!(f, "dist({a},{b})")?,
            LenExpr::Named(n) => write!(f, "{n}")?,
            LenExpr::Int(n) => write!(f, "{n}")?,
            LenExpr::Add(a, b) => {
                a.write_at(f, 1)?;
                write!(f, "+")?;
                b.write_at(f, 2)?;
            }
            LenExpr::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, "-")?;
                b.write_at(f, 2)?;
            }
            LenExpr::Mul(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "*")?;
                b.write_at(f, 3)?;
            }
            LenExpr::Div(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "/")?;
                b.write_at(f, 3)?;
            }
            LenExpr::Sqrt(a) => {
                write!(f, "sqrt(")?;
                a.write_at(f, 0)?;
                write!(f, ")")?;
            }
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for LenExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// Picks one of the candidate points of an intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    Near(String),
    Far(String),
    SameSide { point: String, line: String },
    OppositeSide { point: String, line: String },
    Index(usize),
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Near(p) => write!(f, "near {p}"),
            Selector::Far(p) => write!(f, "far {p}"),
            Selector::SameSide { point, line } => write!(f, "side {point} of {line}"),
            Selector::OppositeSide { point, line } => write!(f, "opposite {point} of {line}"),
            Selector::Index(i) => write!(f, "idx {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    InitialPoint {
        name: String,
        x: BigRational,
        y: BigRational,
    },
    DrawLine {
        name: String,
        p: String,
        q: String,
    },
    DrawCircle {
        name: String,
        center: String,
        through: String,
    },
    CircleOnDiameter {
        name: String,
        p: String,
        q: String,
    },
    Intersect {
        name: String,
        a: String,
        b: String,
        selector: Option<Selector>,
    },
    Midpoint {
        name: String,
        p: String,
        q: String,
    },
    /// Point at the given length from `origin`, towards `toward` or, with
    /// `away`, in the opposite direction.
    OnRay {
        name: String,
        origin: String,
        toward: String,
        away: bool,
        length: LenExpr,
    },
    /// Points dividing `pq` into `n` equal parts; `names` has `n − 1` entries.
    Divide {
        names: Vec<String>,
        p: String,
        q: String,
        n: u32,
    },
    PerpThrough {
        name: String,
        point: String,
        line: String,
    },
    LengthDef {
        name: String,
        expr: LenExpr,
    },
}

/// What a name is bound to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Point,
    Line,
    Circle,
    Length,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Point => "point",
            Kind::Line => "line",
            Kind::Circle => "circle",
            Kind::Length => "length",
        })
    }
}

impl Step {
    /// Names defined by the step with their kinds.
    pub fn defines(&self) -> Vec<(&str, Kind)> {
        match self {
            Step::InitialPoint { name, .. }
            | Step::Intersect { name, .. }
            | Step::Midpoint { name, .. }
            | Step::OnRay { name, .. } => vec![(name, Kind::Point)],
            Step::DrawLine { name, .. } | Step::PerpThrough { name, .. } => vec![(name, Kind::Line)],
            Step::DrawCircle { name, .. } | Step::CircleOnDiameter { name, .. } => {
                vec![(name, Kind::Circle)]
            }
            Step::Divide { names, .. } => names.iter().map(|n| (n.as_str(), Kind::Point)).collect(),
            Step::LengthDef { name, .. } => vec![(name, Kind::Length)],
        }
    }

    /// Whether the step is one of the ruler and compass primitives.
    pub fn is_primitive(&self) -> bool {
        matches!(
            self,
            Step::InitialPoint { .. }
                | Step::DrawLine { .. }
                | Step::DrawCircle { .. }
                | Step::Intersect { .. }
                | Step::OnRay { .. }
        )
    }

    /// First defined name, used in error messages.
    pub fn label(&self) -> &str {
        match self {
            Step::Divide { names, .. } => names.first().map(String::as_str).unwrap_or(""),
            _ => self.defines()[0].0,
        }
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::InitialPoint { name, x, y } => {
                write!(f, "point {name} = (")?;
                write_rational(f, x)?;
                write!(f, ", ")?;
                write_rational(f, y)?;
                write!(f, ")")
            }
            Step::DrawLine { name, p, q } => write!(f, "line {name} = through {p} {q}"),
            Step::DrawCircle {
                name,
                center,
                through,
            } => write!(f, "circle {name} = center {center} through {through}"),
            Step::CircleOnDiameter { name, p, q } => write!(f, "circle {name} = diameter {p} {q}"),
            Step::Intersect {
                name,
                a,
                b,
                selector,
            } => {
                write!(f, "point {name} = intersect {a} {b}")?;
                if let Some(s) = selector {
                    write!(f, " {s}")?;
                }
                Ok(())
            }
            Step::Midpoint { name, p, q } => write!(f, "point {name} = midpoint {p} {q}"),
            Step::OnRay {
                name,
                origin,
                toward,
                away,
                length,
            } => {
                let away = if *away { "away " } else { "" };
                write!(f, "point {name} = onray {origin} {away}{toward} dist {length}")
            }
            Step::Divide { names, p, q, n } => {
                write!(f, "points {} = divide {p} {q} {n}", names.join(" "))
            }
            Step::PerpThrough { name, point, line } => {
                write!(f, "line {name} = perp {point} to {line}")
            }
            Step::LengthDef { name, expr } => write!(f, "len {name} = {expr}"),
        }
    }
}

/// A construction: named steps over a declared unit segment.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub name: String,
    pub unit: Option<(String, String)>,
    pub steps: Vec<Step>,
}

impl Program {
    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn macro_count(&self) -> usize {
        self.steps.iter().filter(|s| !s.is_primitive()).count()
    }

    /// Index of the step after which both unit points exist.
    fn unit_position(&self) -> Option<usize> {
        let (a, b) = self.unit.as_ref()?;
        let mut seen_a = false;
        let mut seen_b = false;
        for (i, step) in self.steps.iter().enumerate() {
            for (n, _) in step.defines() {
                seen_a |= n == a;
                seen_b |= n == b;
            }
            if seen_a && seen_b {
                return Some(i);
            }
        }
        None
    }
}

/// Source text that parses back to the same program.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = self.unit_position();
        for (i, step) in self.steps.iter().enumerate() {
            writeln!(f, "{step}")?;
            if Some(i) == at {
                let (a, b) = self.unit.as_ref().unwrap();
                writeln!(f, "unit {a} {b}")?;
            }
        }
        Ok(())
    }
}
