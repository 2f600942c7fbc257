//! Expansion of macro steps and length expressions into ruler and compass
//! primitives.
//!
//! Every length is realized as a segment between two constructed points, so the
//! expanded program only transfers distances `dist(X,Y)` with the compass.
//! Rational multiples use an intercept ladder, products and quotients use
//! similar triangles on the unit segment, and square roots use the altitude on
//! a semicircle.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::ast::{LenExpr, Program, Selector, Step};
use super::exec::{ExecError, ExecErrorKind, Executor};
use crate::field::Constructible;
use crate::geometry::Point;
use crate::scalar::Sign;

/// A constructed segment `pq` of known length.
#[derive(Debug, Clone)]
struct Seg {
    p: String,
    q: String,
    value: Constructible,
}

impl Seg {
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn expr(&self) -> LenExpr {
        LenExpr::dist(&self.p, &self.q)
    }
}

type R<T> = Result<T, ExecErrorKind>;

fn approx(v: &Constructible) -> f64 {
    let iv = v.approx_interval(32);
    ((iv.lo() + iv.hi()) / BigRational::from_integer(2.into())).to_f64().unwrap_or(f64::MAX)
}

struct Elaborator {
    out: Executor<Constructible>,
    steps: Vec<Step>,
    taken: HashSet<String>,
    counter: usize,
    lines: HashMap<String, (String, String)>,
    lengths: HashMap<String, Seg>,
    unit: Option<(String, String)>,
}

impl Elaborator {
    fn fresh(&mut self) -> String {
        loop {
            self.counter += 1;
            let name = format!("__aux{}", self.counter);
            if !self.taken.contains(&name) {
                return name;
            }
        }
    }

    fn emit(&mut self, step: Step) -> R<()> {
        if let Step::DrawLine { name, p, q } = &step {
            self.lines.insert(name.clone(), (p.clone(), q.clone()));
        }
        let index = self.steps.len();
        self.out.step(index, &step).map_err(|e| e.kind)?;
        self.steps.push(step);
        Ok(())
    }

    fn pt(&self, name: &str) -> Point<Constructible> {
        self.out.workspace().point(name).expect("bound point").clone()
    }

    fn line(&mut self, p: &str, q: &str) -> R<String> {
        let name = self.fresh();
        self.emit(Step::DrawLine {
            name: name.clone(),
            p: p.into(),
            q: q.into(),
        })?;
        Ok(name)
    }

    fn circle(&mut self, center: &str, through: &str) -> R<String> {
        let name = self.fresh();
        self.emit(Step::DrawCircle {
            name: name.clone(),
            center: center.into(),
            through: through.into(),
        })?;
        Ok(name)
    }

    fn intersect_into(
        &mut self,
        name: &str,
        a: &str,
        b: &str,
        pick: impl Fn(&Point<Constructible>) -> bool,
    ) -> R<()> {
        let cands = self.out.candidates(a, b)?;
        let i = cands
            .iter()
            .position(pick)
            .ok_or_else(|| ExecErrorKind::NoCandidate("expansion found no candidate".into()))?;
        self.emit(Step::Intersect {
            name: name.into(),
            a: a.into(),
            b: b.into(),
            selector: Some(Selector::Index(i)),
        })
    }

    fn intersect_at(&mut self, a: &str, b: &str, index: usize) -> R<String> {
        let name = self.fresh();
        self.emit(Step::Intersect {
            name: name.clone(),
            a: a.into(),
            b: b.into(),
            selector: Some(Selector::Index(index)),
        })?;
        Ok(name)
    }

    /// The intersection point other than `known`.
    fn intersect_other(&mut self, a: &str, b: &str, known: &str) -> R<String> {
        let name = self.fresh();
        let k = self.pt(known);
        self.intersect_into(&name, a, b, |p| !p.same(&k))?;
        Ok(name)
    }

    /// Compass transfer of `|span|` onto a ray.
    fn onray(&mut self, origin: &str, toward: &str, away: bool, span: (&str, &str)) -> R<String> {
        let name = self.fresh();
        self.emit(Step::OnRay {
            name: name.clone(),
            origin: origin.into(),
            toward: toward.into(),
            away,
            length: LenExpr::dist(span.0, span.1),
        })?;
        Ok(name)
    }

    fn unit_seg(&self) -> R<Seg> {
        let (p, q) = self.unit.clone().ok_or(ExecErrorKind::NoUnit)?;
        Ok(Seg {
            p,
            q,
            value: Constructible::one(),
        })
    }

    // Both apexes of the equilateral triangles on `ab`; the first is left of `a → b`.
    fn apexes(&mut self, a: &str, b: &str) -> R<(String, String)> {
        let ca = self.circle(a, b)?;
        let cb = self.circle(b, a)?;
        Ok((self.intersect_at(&ca, &cb, 0)?, self.intersect_at(&ca, &cb, 1)?))
    }

    fn midpoint_into(&mut self, name: &str, a: &str, b: &str) -> R<()> {
        let (y1, y2) = self.apexes(a, b)?;
        let bisector = self.line(&y1, &y2)?;
        let ab = self.line(a, b)?;
        self.intersect_into(name, &bisector, &ab, |_| true)
    }

    fn circle_on_diameter_into(&mut self, name: &str, p: &str, q: &str) -> R<()> {
        let m = self.fresh();
        self.midpoint_into(&m, p, q)?;
        self.emit(Step::DrawCircle {
            name: name.into(),
            center: m,
            through: p.into(),
        })
    }

    /// Line `name` through `p` perpendicular to `line`, oriented by the left
    /// normal of `line`.
    fn perp_into(&mut self, name: &str, p: &str, line: &str) -> R<()> {
        let (l0, l1) = self.lines[line].clone();
        let (a, b) = if self.out.workspace().object(line).map(|o| o.contains(&self.pt(p))) == Some(true) {
            // reflect a line point through p, then bisect
            // the nearer other line point, or one at unit distance
            let here = self.pt(p);
            let d0 = here.distance_squared(&self.pt(&l0));
            let d1 = here.distance_squared(&self.pt(&l1));
            let mut x = if d0.is_zero() || (!d1.is_zero() && d1 < d0) { l1.clone() } else { l0.clone() };
            if let Some(u) = self.unit.clone() {
                if here.distance_squared(&self.pt(&x)) > Constructible::one() {
                    x = self.onray(p, &x, false, (&u.0, &u.1))?;
                }
            }
            let c = self.circle(p, &x)?;
            let x2 = self.intersect_other(line, &c, &x)?;
            self.apexes(&x, &x2)?
        } else {
            let c0 = self.circle(&l0, p)?;
            let c1 = self.circle(&l1, p)?;
            let p2 = self.intersect_other(&c0, &c1, p)?;
            (p.to_string(), p2)
        };
        let (u0, u1) = (self.pt(&l0), self.pt(&l1));
        let (w0, w1) = (self.pt(&a), self.pt(&b));
        // rot90(d) · (w1 − w0) with d = u1 − u0
        let dx = &u1.x - &u0.x;
        let dy = &u1.y - &u0.y;
        let along = -(dy * (&w1.x - &w0.x)) + dx * (&w1.y - &w0.y);
        let (first, second) = if along.sign() == Sign::Positive { (a, b) } else { (b, a) };
        self.emit(Step::DrawLine {
            name: name.into(),
            p: first,
            q: second,
        })
    }

    /// Line through `z` parallel to `line`, whose first defining point is used
    /// as the rhombus corner.
    fn parallel(&mut self, z: &str, line: &str) -> R<String> {
        let x = self.lines[line].0.clone();
        let cx = self.circle(&x, z)?;
        let e = self.intersect_at(line, &cx, 0)?;
        let cz = self.circle(z, &x)?;
        let ce = self.circle(&e, &x)?;
        let f = self.intersect_other(&cz, &ce, &x)?;
        self.line(z, &f)
    }

    /// Point `name` at `k/n` of the way from `a` to `b`.
    fn ladder_point_into(&mut self, name: &str, a: &str, b: &str, n: u32, k: u32) -> R<()> {
        let (y, y2) = self.apexes(a, b)?;
        // equal rungs on antiparallel rays from a and from b; the rung line is
        // shortest when n rungs span about |ab|
        let ab2 = approx(&self.pt(a).distance_squared(&self.pt(b)));
        let n = n as f64;
        let cost = |s2: f64| ab2 - ab2.sqrt() * n * s2.sqrt() + n * n * s2;
        let span = match self.unit.clone() {
            Some(u) if cost(1.0) < cost(ab2) => u,
            _ => (a.to_string(), b.to_string()),
        };
        let span = (span.0.as_str(), span.1.as_str());
        let first = |this: &mut Self, from: &str, apex: String| -> R<String> {
            if span == (a, b) {
                Ok(apex)
            } else {
                this.onray(from, &apex, false, span)
            }
        };
        let t0 = first(self, a, y)?;
        let mut t = (a.to_string(), t0);
        for _ in 1..k {
            let next = self.onray(&t.1, &t.0, true, span)?;
            t = (t.1, next);
        }
        let s0 = first(self, b, y2)?;
        let mut s = (b.to_string(), s0);
        for _ in 1..(n as u32 - k) {
            let next = self.onray(&s.1, &s.0, true, span)?;
            s = (s.1, next);
        }
        let rung = self.line(&t.1, &s.1)?;
        let ab = self.line(a, b)?;
        self.intersect_into(name, &rung, &ab, |_| true)
    }

    fn divide_into(&mut self, names: &[String], a: &str, b: &str, n: u32) -> R<()> {
        self.ladder_point_into(&names[0], a, b, n, 1)?;
        for k in 1..names.len() {
            self.emit(Step::OnRay {
                name: names[k].clone(),
                origin: names[k - 1].clone(),
                toward: b.into(),
                away: false,
                length: LenExpr::dist(a, &names[0]),
            })?;
        }
        Ok(())
    }

    fn zero(at: &Seg) -> Seg {
        Seg {
            p: at.p.clone(),
            q: at.p.clone(),
            value: Constructible::zero(),
        }
    }

    fn scale(&mut self, seg: Seg, c: &BigRational) -> R<Seg> {
        if c.is_zero() || seg.is_zero() {
            return Ok(Self::zero(&seg));
        }
        if c.is_one() {
            return Ok(seg);
        }
        let value = &seg.value * &Constructible::from_rational(c.clone());
        let mut n = c.denom().to_u32().ok_or(ExecErrorKind::NegativeLength)?;
        let mut base = seg;
        // halve first, so ladders stay short
        while n % 2 == 0 {
            let d = self.fresh();
            self.midpoint_into(&d, &base.p, &base.q)?;
            base = Seg {
                value: base.value / Constructible::from_integer(2),
                p: base.p,
                q: d,
            };
            n /= 2;
        }
        if n > 1 {
            let d = self.fresh();
            self.ladder_point_into(&d, &base.p, &base.q, n, 1)?;
            base = Seg {
                value: base.value / Constructible::from_integer(n as i64),
                p: base.p,
                q: d,
            };
        }
        let mut prev = base.p.clone();
        let mut end = base.q.clone();
        let mut i = BigInt::one();
        while &i < c.numer() {
            let next = self.onray(&end, &prev, true, (&base.p, &base.q))?;
            prev = std::mem::replace(&mut end, next);
            i += 1;
        }
        Ok(Seg {
            p: base.p,
            q: end,
            value,
        })
    }

    fn sum(&mut self, a: Seg, b: Seg) -> R<Seg> {
        if a.is_zero() {
            return Ok(b);
        }
        if b.is_zero() {
            return Ok(a);
        }
        let r = self.onray(&a.q, &a.p, true, (&b.p, &b.q))?;
        Ok(Seg {
            value: &a.value + &b.value,
            p: a.p,
            q: r,
        })
    }

    fn difference(&mut self, a: Seg, b: Seg) -> R<Seg> {
        if b.is_zero() {
            return Ok(a);
        }
        let r = self.onray(&a.p, &a.q, false, (&b.p, &b.q))?;
        Ok(Seg {
            value: &a.value - &b.value,
            p: r,
            q: a.q,
        })
    }

    fn product(&mut self, a: Seg, b: Seg) -> R<Seg> {
        if a.is_zero() || b.is_zero() {
            return Ok(Self::zero(&a));
        }
        if a.value.equals(&Constructible::one()) {
            return Ok(b);
        }
        if b.value.equals(&Constructible::one()) {
            return Ok(a);
        }
        let unit = self.unit_seg()?;
        let y = self.apex(&a.p, &a.q)?;
        let u = self.onray(&a.p, &a.q, false, (&unit.p, &unit.q))?;
        let bp = self.onray(&a.p, &y, false, (&b.p, &b.q))?;
        let ub = self.line(&u, &bp)?;
        let par = self.parallel(&a.q, &ub)?;
        let py = self.line(&a.p, &y)?;
        let r = self.fresh();
        self.intersect_into(&r, &par, &py, |_| true)?;
        Ok(Seg {
            value: &a.value * &b.value,
            p: a.p,
            q: r,
        })
    }

    fn quotient(&mut self, a: Seg, b: Seg) -> R<Seg> {
        if a.is_zero() {
            return Ok(a);
        }
        if b.value.equals(&Constructible::one()) {
            return Ok(a);
        }
        if a.value.equals(&b.value) {
            return self.unit_seg();
        }
        let unit = self.unit_seg()?;
        let y = self.apex(&a.p, &a.q)?;
        let b1 = self.onray(&a.p, &y, false, (&b.p, &b.q))?;
        let u2 = self.onray(&a.p, &y, false, (&unit.p, &unit.q))?;
        let bq = self.line(&b1, &a.q)?;
        let par = self.parallel(&u2, &bq)?;
        let pq = self.line(&a.p, &a.q)?;
        let r = self.fresh();
        self.intersect_into(&r, &par, &pq, |_| true)?;
        Ok(Seg {
            value: a.value.checked_div(&b.value)?,
            p: a.p,
            q: r,
        })
    }

    fn apex(&mut self, a: &str, b: &str) -> R<String> {
        let ca = self.circle(a, b)?;
        let cb = self.circle(b, a)?;
        self.intersect_at(&ca, &cb, 0)
    }

    fn sqrt(&mut self, a: Seg) -> R<Seg> {
        if a.is_zero() || a.value.equals(&Constructible::one()) {
            return Ok(a);
        }
        let unit = self.unit_seg()?;
        let j = self.onray(&a.q, &a.p, true, (&unit.p, &unit.q))?;
        let c = self.fresh();
        self.circle_on_diameter_into(&c, &a.p, &j)?;
        let pq = self.line(&a.p, &a.q)?;
        let h = self.fresh();
        self.perp_into(&h, &a.q, &pq)?;
        let top = self.intersect_at(&h, &c, 0)?;
        Ok(Seg {
            value: a.value.sqrt()?,
            p: a.q,
            q: top,
        })
    }

    fn realize(&mut self, e: &LenExpr) -> R<Seg> {
        if let Some(c) = e.constant() {
            let unit = self.unit_seg()?;
            return self.scale(unit, &c);
        }
        match e {
            LenExpr::Dist(a, b) => Ok(Seg {
                p: a.clone(),
                q: b.clone(),
                value: self.out.eval(e)?,
            }),
            LenExpr::Named(n) => Ok(self.lengths[n].clone()),
            LenExpr::Int(_) => unreachable!("integers are constant"),
            LenExpr::Add(a, b) => {
                let (a, b) = (self.realize(a)?, self.realize(b)?);
                self.sum(a, b)
            }
            LenExpr::Sub(a, b) => {
                let (a, b) = (self.realize(a)?, self.realize(b)?);
                self.difference(a, b)
            }
            LenExpr::Mul(a, b) => {
                if let Some(c) = a.constant() {
                    let s = self.realize(b)?;
                    self.scale(s, &c)
                } else if let Some(c) = b.constant() {
                    let s = self.realize(a)?;
                    self.scale(s, &c)
                } else {
                    let (a, b) = (self.realize(a)?, self.realize(b)?);
                    self.product(a, b)
                }
            }
            LenExpr::Div(a, b) => {
                if let Some(c) = b.constant() {
                    let s = self.realize(a)?;
                    self.scale(s, &c.recip())
                } else {
                    let (a, b) = (self.realize(a)?, self.realize(b)?);
                    self.quotient(a, b)
                }
            }
            LenExpr::Sqrt(a) => {
                let s = self.realize(a)?;
                self.sqrt(s)
            }
        }
    }

    fn source_step(&mut self, step: &Step) -> R<()> {
        match step {
            Step::InitialPoint { .. }
            | Step::DrawLine { .. }
            | Step::DrawCircle { .. }
            | Step::Intersect { .. } => self.emit(step.clone()),
            Step::CircleOnDiameter { name, p, q } => self.circle_on_diameter_into(name, p, q),
            Step::Midpoint { name, p, q } => self.midpoint_into(name, p, q),
            Step::PerpThrough { name, point, line } => self.perp_into(name, point, line),
            Step::Divide { names, p, q, n } => self.divide_into(names, p, q, *n),
            Step::OnRay {
                name,
                origin,
                toward,
                away,
                length,
            } => {
                // validate the expression against the source semantics first
                self.out.eval(length)?;
                let seg = self.realize(length)?;
                self.emit(Step::OnRay {
                    name: name.clone(),
                    origin: origin.clone(),
                    toward: toward.clone(),
                    away: *away,
                    length: seg.expr(),
                })
            }
            Step::LengthDef { name, expr } => {
                self.out.eval(expr)?;
                let seg = self.realize(expr)?;
                self.lengths.insert(name.clone(), seg.clone());
                self.emit(Step::LengthDef {
                    name: name.clone(),
                    expr: seg.expr(),
                })
            }
        }
    }
}

/// Rewrites `p` using only `InitialPoint`, `DrawLine`, `DrawCircle`,
/// `Intersect` and `OnRay` with compass distances `dist(X,Y)`, plus
/// `LengthDef` aliases naming the segments that realize declared lengths.
///
/// Auxiliary objects are named `__aux<k>`.
pub fn elaborate(p: &Program) -> Result<Program, ExecError> {
    let taken = p
        .steps
        .iter()
        .flat_map(|s| s.defines().into_iter().map(|(n, _)| n.to_string()))
        .collect();
    let mut el = Elaborator {
        out: Executor::new(p.unit.clone()),
        steps: Vec::new(),
        taken,
        counter: 0,
        lines: HashMap::new(),
        lengths: HashMap::new(),
        unit: p.unit.clone(),
    };
    for (i, step) in p.steps.iter().enumerate() {
        el.source_step(step).map_err(|kind| ExecError {
            step: i + 1,
            name: step.label().to_string(),
            kind,
        })?;
    }
    Ok(Program {
        name: p.name.clone(),
        unit: p.unit.clone(),
        steps: el.steps,
    })
}
