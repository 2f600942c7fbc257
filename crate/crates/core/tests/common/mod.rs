//! Generators shared by the property suites and the acceptance run.
#![allow(dead_code)]

use circlesquare::geometry::{circle_center_through, line_through, GeomObject};
use circlesquare::lang::{Executor, LenExpr, Program, Selector, Step};
use circlesquare::{Constructible, ExactPoint, Float200, Scalar, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

pub type Pair = (Constructible, Float200);

pub struct Tower {
    pub gens: Vec<Pair>,
}

pub struct Digits<'a>(std::slice::Iter<'a, (i64, i64)>);

impl Digits<'_> {
    fn rational(&mut self) -> BigRational {
        let (p, q) = self.0.next().copied().unwrap_or((1, 1));
        BigRational::new(p.into(), q.into())
    }
}

fn lift(r: &BigRational) -> Pair {
    (Constructible::from_rational(r.clone()), Float200::from_rational(r))
}

fn add(a: &Pair, b: &Pair) -> Pair {
    (&a.0 + &b.0, a.1.clone() + b.1.clone())
}

fn mul(a: &Pair, b: &Pair) -> Pair {
    (&a.0 * &b.0, a.1.clone() * b.1.clone())
}

impl Tower {
    /// Random element of the field generated by the first `k` generators.
    pub fn element(&self, k: usize, d: &mut Digits) -> Pair {
        if k == 0 {
            return lift(&d.rational());
        }
        let a = self.element(k - 1, d);
        let b = self.element(k - 1, d);
        add(&a, &mul(&b, &self.gens[k - 1]))
    }

    /// Radicands `|p + q·g|` over the previous generator `g`, like the nested
    /// radicals that arise in constructions.
    pub fn build(depth: usize, d: &mut Digits) -> Tower {
        let mut t = Tower { gens: Vec::new() };
        let one = lift(&BigRational::from_integer(1.into()));
        for k in 0..depth {
            let g = t.gens.last().unwrap_or(&one).clone();
            let (p, q) = (lift(&d.rational()), lift(&d.rational()));
            let mut r = add(&p, &mul(&q, &g));
            match r.0.sign() {
                Sign::Negative => r = (-r.0, -r.1),
                Sign::Zero => r = add(&one, &g),
                Sign::Positive => {}
            }
            if k == 0 {
                r = add(&r, &one);
            }
            t.gens.push((r.0.sqrt().unwrap(), r.1.sqrt().unwrap()));
        }
        t
    }
}

pub fn seeds() -> impl Strategy<Value = (usize, Vec<(i64, i64)>)> {
    (0usize..=4, prop::collection::vec((-9i64..=9, 1i64..=7), 120))
}

pub fn sample(depth: usize, raw: &[(i64, i64)]) -> (Vec<Pair>, usize) {
    let mut d = Digits(raw.iter());
    let t = Tower::build(depth, &mut d);
    let xs = (0..3).map(|_| t.element(depth, &mut d)).collect();
    (xs, depth)
}

/// `|x − f| ≤ 2^-150·(1 + |f|)`.
pub fn near(x: &Constructible, f: &Float200) -> bool {
    let fr = Constructible::from_rational(f.to_rational());
    let diff = x - &fr;
    let bound = BigRational::new(1.into(), num_bigint::BigInt::from(1) << 150);
    let scale = Constructible::from_rational(bound.clone() * (BigRational::from_integer(1.into()) + f.to_rational().abs()));
    diff <= scale && -diff <= scale
}

pub fn coord() -> impl Strategy<Value = Constructible> {
    prop_oneof![
        3 => (-4i64..=4, 1i64..=2).prop_map(|(p, q)| Constructible::ratio(p, q).unwrap()),
        1 => (-3i64..=3, 1i64..=3, prop_oneof![Just(2i64), Just(3), Just(5)]).prop_map(|(p, q, r)| {
            Constructible::from_integer(p) + Constructible::from_integer(q) * Constructible::from_integer(r).sqrt().unwrap()
                / Constructible::from_integer(2)
        }),
    ]
}

pub fn point() -> impl Strategy<Value = ExactPoint> {
    (coord(), coord()).prop_map(|(x, y)| ExactPoint::new(x, y))
}

pub fn object() -> impl Strategy<Value = Option<GeomObject<Constructible>>> {
    (any::<bool>(), point(), point()).prop_map(|(is_line, a, b)| {
        if is_line {
            line_through(&a, &b).ok().map(GeomObject::Line)
        } else {
            circle_center_through(&a, &b).ok().map(GeomObject::Circle)
        }
    })
}

fn dot(a: (&Constructible, &Constructible), b: (&Constructible, &Constructible)) -> Constructible {
    a.0 * b.0 + a.1 * b.1
}

/// Number of common points, from distances alone.
pub fn expected_count(a: &GeomObject<Constructible>, b: &GeomObject<Constructible>) -> Option<usize> {
    let count = |s: Sign| match s {
        Sign::Negative => 0,
        Sign::Zero => 1,
        Sign::Positive => 2,
    };
    match (a, b) {
        (GeomObject::Line(l), GeomObject::Line(m)) => {
            let (dx, dy) = (&l.p1.x - &l.p0.x, &l.p1.y - &l.p0.y);
            let (ex, ey) = (&m.p1.x - &m.p0.x, &m.p1.y - &m.p0.y);
            let cross = &dx * &ey - &dy * &ex;
            if !cross.is_zero() {
                Some(1)
            } else if l.contains(&m.p0) {
                None
            } else {
                Some(0)
            }
        }
        (GeomObject::Line(l), GeomObject::Circle(c)) | (GeomObject::Circle(c), GeomObject::Line(l)) => {
            // squared distance from the centre to the line, times |d|²
            let (dx, dy) = (&l.p1.x - &l.p0.x, &l.p1.y - &l.p0.y);
            let (wx, wy) = (&c.center.x - &l.p0.x, &c.center.y - &l.p0.y);
            let cross = &dx * &wy - &dy * &wx;
            let d2 = dot((&dx, &dy), (&dx, &dy));
            Some(count((c.radius_squared() * d2 - &cross * &cross).sign()))
        }
        (GeomObject::Circle(c1), GeomObject::Circle(c2)) => {
            let d2 = c1.center.distance_squared(&c2.center);
            let (r1, r2) = (c1.radius_squared(), c2.radius_squared());
            if d2.is_zero() {
                return if (&r1 - &r2).is_zero() { None } else { Some(0) };
            }
            // with squared radii r1, r2: two points iff (r1 + r2 − d²)² < 4·r1·r2
            let s = &r1 + &r2 - &d2;
            let outer = &s * &s - Constructible::from_integer(4) * &r1 * &r2;
            Some(count((-outer).sign()))
        }
    }
}

pub fn same_points(a: &[ExactPoint], b: &[ExactPoint]) -> bool {
    a.len() == b.len() && a.iter().all(|p| b.iter().any(|q| p.same(q)))
}

pub type Seed = (u8, u16, u16, u16);

pub struct Gen {
    pub exec: Executor<Constructible>,
    pub program: Program,
    points: Vec<String>,
    lines: Vec<String>,
    circles: Vec<String>,
    lengths: Vec<String>,
    counter: usize,
}

fn pick(names: &[String], i: u16) -> Option<String> {
    if names.is_empty() {
        None
    } else {
        Some(names[i as usize % names.len()].clone())
    }
}

/// Two different names, when there are two.
fn pick2(names: &[String], i: u16, j: u16) -> Option<(String, String)> {
    if names.len() < 2 {
        return None;
    }
    let a = i as usize % names.len();
    let b = (a + 1 + j as usize % (names.len() - 1)) % names.len();
    Some((names[a].clone(), names[b].clone()))
}

fn int(n: i64) -> LenExpr {
    LenExpr::Int(BigInt::from(n))
}

impl Gen {
    pub fn new(cx: i64, cy: i64) -> Gen {
        let mut g = Gen {
            exec: Executor::new(Some(("A".into(), "B".into()))),
            program: Program {
                unit: Some(("A".into(), "B".into())),
                ..Program::default()
            },
            points: Vec::new(),
            lines: Vec::new(),
            circles: Vec::new(),
            lengths: Vec::new(),
            counter: 0,
        };
        for (name, x, y) in [("A", 0, 0), ("B", 1, 0), ("C", cx, cy)] {
            let rat = |v: i64| BigRational::new(v.into(), 2.into());
            g.try_step(Step::InitialPoint {
                name: name.into(),
                x: rat(x * 2),
                y: rat(y),
            });
        }
        g
    }

    fn fresh(&mut self, prefix: &str) -> String {
        self.counter += 1;
        format!("{prefix}{}", self.counter)
    }

    pub fn try_step(&mut self, step: Step) -> bool {
        if self.exec.step(self.program.steps.len(), &step).is_err() {
            return false;
        }
        for (name, kind) in step.defines() {
            let list = match kind {
                circlesquare::lang::Kind::Point => &mut self.points,
                circlesquare::lang::Kind::Length => &mut self.lengths,
                _ => match self.exec.workspace().object(name) {
                    Some(circlesquare::geometry::GeomObject::Line(_)) => &mut self.lines,
                    _ => &mut self.circles,
                },
            };
            list.push(name.to_string());
        }
        self.program.steps.push(step);
        true
    }

    fn expr(&self, s: (u16, u16, u16)) -> Option<LenExpr> {
        let d = LenExpr::dist(&pick(&self.points, s.0)?, &pick(&self.points, s.1)?);
        Some(match s.2 % 6 {
            0 => d,
            1 => int(1 + (s.2 as i64 / 6) % 3),
            2 => LenExpr::Mul(Box::new(d), Box::new(LenExpr::Div(Box::new(int(2)), Box::new(int(3))))),
            3 => LenExpr::Sqrt(Box::new(d)),
            4 => match pick(&self.lengths, s.2) {
                Some(n) => LenExpr::Add(Box::new(LenExpr::Named(n)), Box::new(d)),
                None => LenExpr::Add(Box::new(int(1)), Box::new(d)),
            },
            _ => LenExpr::Div(Box::new(d), Box::new(LenExpr::dist("A", "C"))),
        })
    }

    pub fn attempt(&mut self, (action, i, j, k): Seed) -> Option<bool> {
        let step = match action % 9 {
            0 => Step::DrawLine {
                name: self.fresh("l"),
                p: pick2(&self.points, i, j)?.0,
                q: pick2(&self.points, i, j)?.1,
            },
            1 => Step::DrawCircle {
                name: self.fresh("c"),
                center: pick2(&self.points, i, j)?.0,
                through: pick2(&self.points, i, j)?.1,
            },
            2 => Step::CircleOnDiameter {
                name: self.fresh("d"),
                p: pick2(&self.points, i, j)?.0,
                q: pick2(&self.points, i, j)?.1,
            },
            3 | 4 => {
                let objects: Vec<String> = self.lines.iter().chain(&self.circles).cloned().collect();
                let selector = match k % 4 {
                    0 => Some(Selector::Index((k as usize / 4) % 2)),
                    1 => Some(Selector::Near(pick(&self.points, k)?)),
                    2 => Some(Selector::Far(pick(&self.points, k)?)),
                    _ => None,
                };
                Step::Intersect {
                    name: self.fresh("P"),
                    a: pick2(&objects, i, j)?.0,
                    b: pick2(&objects, i, j)?.1,
                    selector,
                }
            }
            5 => Step::Midpoint {
                name: self.fresh("M"),
                p: pick2(&self.points, i, j)?.0,
                q: pick2(&self.points, i, j)?.1,
            },
            6 => Step::OnRay {
                name: self.fresh("R"),
                origin: pick2(&self.points, i, j)?.0,
                toward: pick2(&self.points, i, j)?.1,
                away: k % 2 == 1,
                length: self.expr((i / 7, j / 7, k / 2))?,
            },
            7 => match k % 3 {
                0 => {
                    let n = 2 + (k as u32 / 3) % 3;
                    let names = (1..n).map(|_| self.fresh("D")).collect();
                    Step::Divide {
                        names,
                        p: pick2(&self.points, i, j)?.0,
                        q: pick2(&self.points, i, j)?.1,
                        n,
                    }
                }
                1 => Step::PerpThrough {
                    name: self.fresh("n"),
                    point: pick(&self.points, i)?,
                    line: pick(&self.lines, j)?,
                },
                _ => Step::LengthDef {
                    name: self.fresh("k"),
                    expr: self.expr((i, j, k / 3))?,
                },
            },
            _ => Step::LengthDef {
                name: self.fresh("k"),
                expr: self.expr((i, j, k))?,
            },
        };
        Some(self.try_step(step))
    }
}

pub fn program() -> impl Strategy<Value = Program> {
    (
        -4i64..=4,
        1i64..=4,
        prop::collection::vec((any::<u8>(), any::<u16>(), any::<u16>(), any::<u16>()), 2..12),
    )
        .prop_map(|(cx, cy, seeds)| {
            let mut g = Gen::new(cx, cy);
            for s in seeds {
                let _ = g.attempt(s);
            }
            g.program
        })
}
