use indexmap::IndexMap;
use thiserror::Error;

use super::ast::{Kind, LenExpr, Program, Selector, Step};
use crate::field::{Constructible, FieldError};
use crate::geometry::{self, GeomObject, GeometryError, Line, Point};
use crate::scalar::{Scalar, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecErrorKind {
    #[error("ambiguous selection: {0}")]
    Ambiguous(String),
    #[error("no candidate point: {0}")]
    NoCandidate(String),
    #[error("reference point `{0}` lies on the line")]
    ReferenceOnLine(String),
    #[error("negative length in expression")]
    NegativeLength,
    #[error("unit segment does not have length 1")]
    UnitLength,
    #[error("expression needs a declared unit segment")]
    NoUnit,
    #[error("`{0}` is not a bound {1}")]
    Unbound(String, Kind),
    #[error("name `{0}` is already bound")]
    Rebound(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Failure while executing step `step` (1-based), which defines `name`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step} (`{name}`): {kind}")]
pub struct ExecError {
    pub step: usize,
    pub name: String,
    pub kind: ExecErrorKind,
}

#[derive(Debug, Clone)]
pub enum Binding<S> {
    Point(Point<S>),
    Object(GeomObject<S>),
    Length(S),
}

/// Bindings produced by running a program, in definition order, and the
/// executed steps with every intersection resolved to an index.
#[derive(Debug, Clone)]
pub struct Workspace<S> {
    pub bindings: IndexMap<String, Binding<S>>,
    pub trace: Vec<Step>,
    pub unit: Option<(String, String)>,
}

impl<S: Scalar> Workspace<S> {
    pub fn point(&self, name: &str) -> Option<&Point<S>> {
        match self.bindings.get(name) {
            Some(Binding::Point(p)) => Some(p),
            _ => None,
        }
    }

    pub fn object(&self, name: &str) -> Option<&GeomObject<S>> {
        match self.bindings.get(name) {
            Some(Binding::Object(o)) => Some(o),
            _ => None,
        }
    }

    pub fn length(&self, name: &str) -> Option<&S> {
        match self.bindings.get(name) {
            Some(Binding::Length(l)) => Some(l),
            _ => None,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = (&str, &Point<S>)> {
        self.bindings.iter().filter_map(|(n, b)| match b {
            Binding::Point(p) => Some((n.as_str(), p)),
            _ => None,
        })
    }

    /// The trace as a program that replays to the same bindings.
    pub fn trace_program(&self) -> Program {
        Program {
            name: String::new(),
            unit: self.unit.clone(),
            steps: self.trace.clone(),
        }
    }
}

/// Runs steps one at a time against a growing workspace.
pub struct Executor<S> {
    ws: Workspace<S>,
    unit_checked: bool,
}

type StepResult<T> = Result<T, ExecErrorKind>;

impl<S: Scalar> Executor<S> {
    pub fn new(unit: Option<(String, String)>) -> Self {
        Self {
            ws: Workspace {
                bindings: IndexMap::new(),
                trace: Vec::new(),
                unit,
            },
            unit_checked: false,
        }
    }

    pub fn workspace(&self) -> &Workspace<S> {
        &self.ws
    }

    pub fn finish(self) -> Workspace<S> {
        self.ws
    }

    fn point(&self, name: &str) -> StepResult<&Point<S>> {
        self.ws
            .point(name)
            .ok_or_else(|| ExecErrorKind::Unbound(name.to_string(), Kind::Point))
    }

    fn object(&self, name: &str) -> StepResult<&GeomObject<S>> {
        self.ws
            .object(name)
            .ok_or_else(|| ExecErrorKind::Unbound(name.to_string(), Kind::Line))
    }

    fn line(&self, name: &str) -> StepResult<&Line<S>> {
        match self.ws.object(name) {
            Some(GeomObject::Line(l)) => Ok(l),
            _ => Err(ExecErrorKind::Unbound(name.to_string(), Kind::Line)),
        }
    }

    fn bind(&mut self, name: &str, value: Binding<S>) -> StepResult<()> {
        if self.ws.bindings.contains_key(name) {
            return Err(ExecErrorKind::Rebound(name.to_string()));
        }
        self.ws.bindings.insert(name.to_string(), value);
        Ok(())
    }

    /// Evaluates a length expression; every subexpression must be nonnegative.
    pub fn eval(&self, e: &LenExpr) -> StepResult<S> {
        let v = match e {
            LenExpr::Dist(a, b) => geometry::distance(self.point(a)?, self.point(b)?)?,
            LenExpr::Named(n) => self
                .ws
                .length(n)
                .cloned()
                .ok_or_else(|| ExecErrorKind::Unbound(n.clone(), Kind::Length))?,
            LenExpr::Int(n) => S::from_rational(&num_rational::BigRational::from_integer(n.clone())),
            LenExpr::Add(a, b) => self.eval(a)? + self.eval(b)?,
            LenExpr::Sub(a, b) => self.eval(a)? - self.eval(b)?,
            LenExpr::Mul(a, b) => self.eval(a)? * self.eval(b)?,
            LenExpr::Div(a, b) => self.eval(a)?.try_div(&self.eval(b)?)?,
            LenExpr::Sqrt(a) => self.eval(a)?.sqrt()?,
        };
        if v.sign() == Sign::Negative {
            return Err(ExecErrorKind::NegativeLength);
        }
        Ok(v)
    }

    /// Candidate points of `a ∩ b` in the kernel's order.
    pub fn candidates(&self, a: &str, b: &str) -> StepResult<Vec<Point<S>>> {
        Ok(geometry::intersect(self.object(a)?, self.object(b)?)?)
    }

    fn run(&mut self, step: &Step) -> StepResult<Step> {
        let mut traced = step.clone();
        match step {
            Step::InitialPoint { name, x, y } => {
                let p = Point::new(S::from_rational(x), S::from_rational(y));
                self.bind(name, Binding::Point(p))?;
            }
            Step::DrawLine { name, p, q } => {
                let l = geometry::line_through(self.point(p)?, self.point(q)?)?;
                self.bind(name, Binding::Object(GeomObject::Line(l)))?;
            }
            Step::DrawCircle {
                name,
                center,
                through,
            } => {
                let c = geometry::circle_center_through(self.point(center)?, self.point(through)?)?;
                self.bind(name, Binding::Object(GeomObject::Circle(c)))?;
            }
            Step::CircleOnDiameter { name, p, q } => {
                let p = self.point(p)?;
                let m = geometry::midpoint(p, self.point(q)?);
                let c = geometry::circle_center_through(&m, p)?;
                self.bind(name, Binding::Object(GeomObject::Circle(c)))?;
            }
            Step::Intersect {
                name,
                a,
                b,
                selector,
            } => {
                let cands = self.candidates(a, b)?;
                let i = resolve_selector(&cands, selector.as_ref(), &self.ws)?;
                let p = cands[i].clone();
                self.bind(name, Binding::Point(p))?;
                if let Step::Intersect { selector, .. } = &mut traced {
                    *selector = Some(Selector::Index(i));
                }
            }
            Step::Midpoint { name, p, q } => {
                if self.point(p)?.same(self.point(q)?) {
                    return Err(GeometryError::DegenerateLine.into());
                }
                let m = geometry::midpoint(self.point(p)?, self.point(q)?);
                self.bind(name, Binding::Point(m))?;
            }
            Step::OnRay {
                name,
                origin,
                toward,
                away,
                length,
            } => {
                let len = self.eval(length)?;
                let o = self.point(origin)?;
                let t = self.point(toward)?;
                let t = if *away {
                    Point::new(
                        o.x.clone() + o.x.clone() - t.x.clone(),
                        o.y.clone() + o.y.clone() - t.y.clone(),
                    )
                } else {
                    t.clone()
                };
                let p = geometry::point_on_ray(o, &t, &len)?;
                self.bind(name, Binding::Point(p))?;
            }
            Step::Divide { names, p, q, n } => {
                let p = self.point(p)?.clone();
                let q = self.point(q)?.clone();
                if p.same(&q) {
                    return Err(GeometryError::DegenerateLine.into());
                }
                let n_s = S::from_i64(*n as i64);
                for (k, name) in names.iter().enumerate() {
                    let t = S::from_i64(k as i64 + 1).try_div(&n_s)?;
                    let x = p.x.clone() + (q.x.clone() - p.x.clone()) * t.clone();
                    let y = p.y.clone() + (q.y.clone() - p.y.clone()) * t;
                    self.bind(name, Binding::Point(Point::new(x, y)))?;
                }
            }
            Step::PerpThrough { name, point, line } => {
                let l = geometry::perpendicular_through(self.point(point)?, self.line(line)?);
                self.bind(name, Binding::Object(GeomObject::Line(l)))?;
            }
            Step::LengthDef { name, expr } => {
                let v = self.eval(expr)?;
                self.bind(name, Binding::Length(v))?;
            }
        }
        self.check_unit()?;
        Ok(traced)
    }

    fn check_unit(&mut self) -> StepResult<()> {
        if self.unit_checked {
            return Ok(());
        }
        let Some((a, b)) = self.ws.unit.clone() else {
            return Ok(());
        };
        if let (Some(pa), Some(pb)) = (self.ws.point(&a), self.ws.point(&b)) {
            if !pa.distance_squared(pb).same_value(&S::one()) {
                return Err(ExecErrorKind::UnitLength);
            }
            self.unit_checked = true;
        }
        Ok(())
    }

    /// Executes one step; `index` is its 0-based position for error reports.
    pub fn step(&mut self, index: usize, step: &Step) -> Result<(), ExecError> {
        match self.run(step) {
            Ok(traced) => {
                self.ws.trace.push(traced);
                Ok(())
            }
            Err(kind) => Err(ExecError {
                step: index + 1,
                name: step.label().to_string(),
                kind,
            }),
        }
    }
}

fn describe<S: Scalar>(cands: &[Point<S>]) -> String {
    match cands.len() {
        0 => "the objects do not meet".into(),
        1 => "one candidate".into(),
        _ => "two candidates".into(),
    }
}

/// Index into `candidates` of the unique point satisfying `selector`.
pub fn resolve_selector<S: Scalar>(
    candidates: &[Point<S>],
    selector: Option<&Selector>,
    ws: &Workspace<S>,
) -> Result<usize, ExecErrorKind> {
    if candidates.is_empty() {
        return Err(ExecErrorKind::NoCandidate(describe(candidates)));
    }
    let reference = |name: &str| {
        ws.point(name)
            .ok_or_else(|| ExecErrorKind::Unbound(name.to_string(), Kind::Point))
    };
    let Some(selector) = selector else {
        return if candidates.len() == 1 {
            Ok(0)
        } else {
            Err(ExecErrorKind::Ambiguous("two candidates and no selector".into()))
        };
    };
    match selector {
        Selector::Index(i) => {
            if *i < candidates.len() {
                Ok(*i)
            } else {
                Err(ExecErrorKind::NoCandidate(format!("index {i} with only one candidate")))
            }
        }
        Selector::Near(x) | Selector::Far(x) => {
            if candidates.len() == 1 {
                return Ok(0);
            }
            let x = reference(x)?;
            let d0 = candidates[0].distance_squared(x);
            let d1 = candidates[1].distance_squared(x);
            let first_closer = match (d1 - d0).sign() {
                Sign::Zero => {
                    return Err(ExecErrorKind::Ambiguous("candidates are equidistant".into()))
                }
                s => s == Sign::Positive,
            };
            let near = matches!(selector, Selector::Near(_));
            Ok(if first_closer == near { 0 } else { 1 })
        }
        Selector::SameSide { point, line } | Selector::OppositeSide { point, line } => {
            let l = match ws.object(line) {
                Some(GeomObject::Line(l)) => l,
                _ => return Err(ExecErrorKind::Unbound(line.clone(), Kind::Line)),
            };
            let side = l.side_of(reference(point)?);
            if side == Sign::Zero {
                return Err(ExecErrorKind::ReferenceOnLine(point.clone()));
            }
            let want = if matches!(selector, Selector::SameSide { .. }) { side } else { side.negate() };
            let hits: Vec<usize> = (0..candidates.len())
                .filter(|&i| l.side_of(&candidates[i]) == want)
                .collect();
            match hits.as_slice() {
                [i] => Ok(*i),
                [] => Err(ExecErrorKind::NoCandidate("no candidate on the requested side".into())),
                _ => Err(ExecErrorKind::Ambiguous("both candidates on the requested side".into())),
            }
        }
    }
}

/// Runs a program in scalar model `S`.
pub fn execute_in<S: Scalar>(p: &Program) -> Result<Workspace<S>, ExecError> {
    let mut ex = Executor::new(p.unit.clone());
    for (i, step) in p.steps.iter().enumerate() {
        ex.step(i, step)?;
    }
    Ok(ex.finish())
}

/// Exact execution.
pub fn execute(p: &Program) -> Result<Workspace<Constructible>, ExecError> {
    execute_in(p)
}
