//! Points, lines and circles, with exact intersections in any [`Scalar`].
//!
//! Two-point results are ordered deterministically: along a line they follow the
//! line's direction `p0 → p1`; for two circles the point to the left of the
//! oriented axis `center₁ → center₂` comes first.

use thiserror::Error;

use crate::field::FieldError;
use crate::scalar::{Scalar, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("degenerate line")]
    DegenerateLine,
    #[error("degenerate circle")]
    DegenerateCircle,
    #[error("degenerate ray")]
    DegenerateRay,
    #[error("negative length")]
    NegativeLength,
    #[error("infinite intersection")]
    InfiniteIntersection,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    pub fn same(&self, other: &Self) -> bool {
        self.x.same_value(&other.x) && self.y.same_value(&other.y)
    }

    fn minus(&self, other: &Self) -> (S, S) {
        (self.x.clone() - other.x.clone(), self.y.clone() - other.y.clone())
    }

    fn offset(&self, dx: S, dy: S) -> Self {
        Self::new(self.x.clone() + dx, self.y.clone() + dy)
    }

    pub fn distance_squared(&self, other: &Self) -> S {
        let (dx, dy) = self.minus(other);
        dx.square() + dy.square()
    }
}

fn cross<S: Scalar>(u: &(S, S), v: &(S, S)) -> S {
    u.0.clone() * v.1.clone() - u.1.clone() * v.0.clone()
}

fn dot<S: Scalar>(u: &(S, S), v: &(S, S)) -> S {
    u.0.clone() * v.0.clone() + u.1.clone() * v.1.clone()
}

/// Unbounded line through `p0` and `p1`, directed `p0 → p1`.
#[derive(Debug, Clone)]
pub struct Line<S> {
    pub p0: Point<S>,
    pub p1: Point<S>,
}

impl<S: Scalar> Line<S> {
    pub fn direction(&self) -> (S, S) {
        self.p1.minus(&self.p0)
    }

    /// Positive when `p` lies to the left of the directed line.
    pub fn side_of(&self, p: &Point<S>) -> Sign {
        cross(&self.direction(), &p.minus(&self.p0)).sign()
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        self.side_of(p) == Sign::Zero
    }
}

/// Circle through `through` centered at `center`.
#[derive(Debug, Clone)]
pub struct Circle<S> {
    pub center: Point<S>,
    pub through: Point<S>,
}

impl<S: Scalar> Circle<S> {
    pub fn radius_squared(&self) -> S {
        self.center.distance_squared(&self.through)
    }

    pub fn radius(&self) -> Result<S, GeometryError> {
        Ok(self.radius_squared().sqrt()?)
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        p.distance_squared(&self.center)
            .same_value(&self.radius_squared())
    }
}

#[derive(Debug, Clone)]
pub enum GeomObject<S> {
    Line(Line<S>),
    Circle(Circle<S>),
}

impl<S: Scalar> GeomObject<S> {
    pub fn contains(&self, p: &Point<S>) -> bool {
        match self {
            GeomObject::Line(l) => l.contains(p),
            GeomObject::Circle(c) => c.contains(p),
        }
    }
}

pub fn line_through<S: Scalar>(p: &Point<S>, q: &Point<S>) -> Result<Line<S>, GeometryError> {
    if p.same(q) {
        return Err(GeometryError::DegenerateLine);
    }
    Ok(Line {
        p0: p.clone(),
        p1: q.clone(),
    })
}

pub fn circle_center_through<S: Scalar>(
    c: &Point<S>,
    p: &Point<S>,
) -> Result<Circle<S>, GeometryError> {
    if c.same(p) {
        return Err(GeometryError::DegenerateCircle);
    }
    Ok(Circle {
        center: c.clone(),
        through: p.clone(),
    })
}

pub fn distance<S: Scalar>(p: &Point<S>, q: &Point<S>) -> Result<S, GeometryError> {
    Ok(p.distance_squared(q).sqrt()?)
}

pub fn midpoint<S: Scalar>(p: &Point<S>, q: &Point<S>) -> Point<S> {
    let two = S::from_i64(2);
    Point::new(
        (p.x.clone() + q.x.clone()) / two.clone(),
        (p.y.clone() + q.y.clone()) / two,
    )
}

/// Point at `length` from `origin` along the ray towards `toward`.
pub fn point_on_ray<S: Scalar>(
    origin: &Point<S>,
    toward: &Point<S>,
    length: &S,
) -> Result<Point<S>, GeometryError> {
    if origin.same(toward) {
        return Err(GeometryError::DegenerateRay);
    }
    if length.sign() == Sign::Negative {
        return Err(GeometryError::NegativeLength);
    }
    let (dx, dy) = toward.minus(origin);
    let norm = (dx.square() + dy.square()).sqrt()?;
    let scale = length.try_div(&norm)?;
    Ok(origin.offset(dx * scale.clone(), dy * scale))
}

/// Line through `p` perpendicular to `line`, directed by the left normal of
/// `line`'s direction.
pub fn perpendicular_through<S: Scalar>(p: &Point<S>, line: &Line<S>) -> Line<S> {
    let (dx, dy) = line.direction();
    Line {
        p0: p.clone(),
        p1: p.offset(-dy, dx),
    }
}

fn same_line<S: Scalar>(a: &Line<S>, b: &Line<S>) -> bool {
    a.contains(&b.p0) && a.contains(&b.p1)
}

fn same_circle<S: Scalar>(a: &Circle<S>, b: &Circle<S>) -> bool {
    a.center.same(&b.center) && a.radius_squared().same_value(&b.radius_squared())
}

fn intersect_lines<S: Scalar>(a: &Line<S>, b: &Line<S>) -> Result<Vec<Point<S>>, GeometryError> {
    let d = a.direction();
    let e = b.direction();
    let denom = cross(&d, &e);
    if denom.sign() == Sign::Zero {
        if same_line(a, b) {
            return Err(GeometryError::InfiniteIntersection);
        }
        return Ok(Vec::new());
    }
    let t = cross(&b.p0.minus(&a.p0), &e).try_div(&denom)?;
    Ok(vec![a.p0.offset(d.0 * t.clone(), d.1 * t)])
}

fn intersect_line_circle<S: Scalar>(
    line: &Line<S>,
    circle: &Circle<S>,
) -> Result<Vec<Point<S>>, GeometryError> {
    // |f + t·d|² = r² with f = p0 − center
    let d = line.direction();
    let f = line.p0.minus(&circle.center);
    let a = dot(&d, &d);
    let half_b = dot(&f, &d);
    let c = dot(&f, &f) - circle.radius_squared();
    let disc = half_b.square() - a.clone() * c;
    let at = |t: S| line.p0.offset(d.0.clone() * t.clone(), d.1.clone() * t);
    match disc.sign() {
        Sign::Negative => Ok(Vec::new()),
        Sign::Zero => Ok(vec![at((-half_b).try_div(&a)?)]),
        Sign::Positive => {
            let root = disc.sqrt()?;
            let t0 = (-half_b.clone() - root.clone()).try_div(&a)?;
            let t1 = (-half_b + root).try_div(&a)?;
            Ok(vec![at(t0), at(t1)])
        }
    }
}

fn intersect_circles<S: Scalar>(
    c1: &Circle<S>,
    c2: &Circle<S>,
) -> Result<Vec<Point<S>>, GeometryError> {
    if c1.center.same(&c2.center) {
        if same_circle(c1, c2) {
            return Err(GeometryError::InfiniteIntersection);
        }
        return Ok(Vec::new());
    }
    let d = c2.center.minus(&c1.center);
    let d2 = dot(&d, &d);
    let r1 = c1.radius_squared();
    let r2 = c2.radius_squared();
    let two = S::from_i64(2);
    // foot of the common chord: c1 + s·d
    let s = (d2.clone() + r1.clone() - r2).try_div(&(two * d2.clone()))?;
    // h² as a multiple of |d|²: the chord half-width is h·|d|
    let h2 = r1.try_div(&d2)? - s.square();
    let foot = c1.center.offset(d.0.clone() * s.clone(), d.1.clone() * s);
    match h2.sign() {
        Sign::Negative => Ok(Vec::new()),
        Sign::Zero => Ok(vec![foot]),
        Sign::Positive => {
            let h = h2.sqrt()?;
            // left normal of d is (−dy, dx)
            let (nx, ny) = (-(d.1.clone()) * h.clone(), d.0.clone() * h);
            let left = foot.offset(nx.clone(), ny.clone());
            let right = foot.offset(-nx, -ny);
            Ok(vec![left, right])
        }
    }
}

/// All real intersection points of two objects in the engine's order.
pub fn intersect<S: Scalar>(
    a: &GeomObject<S>,
    b: &GeomObject<S>,
) -> Result<Vec<Point<S>>, GeometryError> {
    match (a, b) {
        (GeomObject::Line(l), GeomObject::Line(m)) => intersect_lines(l, m),
        (GeomObject::Line(l), GeomObject::Circle(c)) | (GeomObject::Circle(c), GeomObject::Line(l)) => {
            intersect_line_circle(l, c)
        }
        (GeomObject::Circle(c1), GeomObject::Circle(c2)) => intersect_circles(c1, c2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Constructible;

    type P = Point<Constructible>;

    fn c(n: i64) -> Constructible {
        Constructible::from_integer(n)
    }

    fn q(p: i64, d: i64) -> Constructible {
        Constructible::ratio(p, d).unwrap()
    }

    fn pt(x: Constructible, y: Constructible) -> P {
        Point::new(x, y)
    }

    fn s5() -> Constructible {
        c(5).sqrt().unwrap()
    }

    #[test]
    fn degenerate_constructors() {
        let o = pt(c(0), c(0));
        assert_eq!(line_through(&o, &o).unwrap_err(), GeometryError::DegenerateLine);
        assert_eq!(
            circle_center_through(&o, &o).unwrap_err(),
            GeometryError::DegenerateCircle
        );
        assert_eq!(
            point_on_ray(&o, &o, &c(1)).unwrap_err(),
            GeometryError::DegenerateRay
        );
        assert_eq!(
            point_on_ray(&o, &pt(c(1), c(0)), &c(-1)).unwrap_err(),
            GeometryError::NegativeLength
        );
    }

    #[test]
    fn unit_circle_meets_x_axis_in_order() {
        let axis = GeomObject::Line(line_through(&pt(c(0), c(0)), &pt(c(1), c(0))).unwrap());
        let unit = GeomObject::Circle(circle_center_through(&pt(c(0), c(0)), &pt(c(1), c(0))).unwrap());
        for (a, b) in [(&unit, &axis), (&axis, &unit)] {
            let pts = intersect(a, b).unwrap();
            assert_eq!(pts.len(), 2);
            assert!(pts[0].same(&pt(c(-1), c(0))));
            assert!(pts[1].same(&pt(c(1), c(0))));
        }
    }

    #[test]
    fn dixon_circle_cuts_extended_ad() {
        let a = pt(c(0), c(0));
        let d = pt(c(0), c(-1));
        let cc = midpoint(&a, &d);
        assert!(cc.same(&pt(c(0), q(-1, 2))));
        let b = pt(c(1), c(0));
        let circle = circle_center_through(&cc, &b).unwrap();
        assert_eq!(circle.radius().unwrap(), s5() / c(2));
        let ad = line_through(&a, &d).unwrap();
        let pts = intersect(&GeomObject::Line(ad), &GeomObject::Circle(circle)).unwrap();
        // A → D points down, so the upper point has the smaller parameter
        assert!(pts[0].same(&pt(c(0), (s5() - c(1)) / c(2))));
        assert!(pts[1].same(&pt(c(0), -(c(1) + s5()) / c(2))));
        let de = distance(&d, &pts[0]).unwrap();
        assert_eq!(de, (s5() + c(1)) / c(2));
    }

    #[test]
    fn circle_of_radius_sqrt5_meets_ab() {
        let a = pt(c(0), c(0));
        let circle = circle_center_through(&a, &pt(c(1), c(2))).unwrap();
        let ab = line_through(&a, &pt(c(1), c(0))).unwrap();
        let pts = intersect(&GeomObject::Line(ab), &GeomObject::Circle(circle)).unwrap();
        assert!(pts[0].same(&pt(-s5(), c(0))));
        assert!(pts[1].same(&pt(s5(), c(0))));
    }

    #[test]
    fn circle_pair_left_point_first() {
        let c1 = circle_center_through(&pt(c(0), c(0)), &pt(c(1), c(0))).unwrap();
        let c2 = circle_center_through(&pt(c(1), c(0)), &pt(c(0), c(0))).unwrap();
        let pts = intersect(&GeomObject::Circle(c1.clone()), &GeomObject::Circle(c2.clone())).unwrap();
        let h = c(3).sqrt().unwrap() / c(2);
        assert!(pts[0].same(&pt(q(1, 2), h.clone())));
        assert!(pts[1].same(&pt(q(1, 2), -h)));
        let swapped = intersect(&GeomObject::Circle(c2), &GeomObject::Circle(c1)).unwrap();
        assert!(swapped[0].same(&pts[1]));
    }

    #[test]
    fn tangency_and_disjoint() {
        let c1 = circle_center_through(&pt(c(0), c(0)), &pt(c(1), c(0))).unwrap();
        let c2 = circle_center_through(&pt(c(2), c(0)), &pt(c(1), c(0))).unwrap();
        let c3 = circle_center_through(&pt(c(5), c(0)), &pt(c(4), c(0))).unwrap();
        let touch = intersect(&GeomObject::Circle(c1.clone()), &GeomObject::Circle(c2)).unwrap();
        assert_eq!(touch.len(), 1);
        assert!(touch[0].same(&pt(c(1), c(0))));
        assert!(intersect(&GeomObject::Circle(c1.clone()), &GeomObject::Circle(c3)).unwrap().is_empty());
        let tangent = line_through(&pt(c(1), c(-3)), &pt(c(1), c(7))).unwrap();
        assert_eq!(intersect(&GeomObject::Line(tangent), &GeomObject::Circle(c1.clone())).unwrap().len(), 1);
        assert_eq!(
            intersect(&GeomObject::Circle(c1.clone()), &GeomObject::Circle(c1)).unwrap_err(),
            GeometryError::InfiniteIntersection
        );
    }

    #[test]
    fn parallel_and_identical_lines() {
        let l1 = line_through(&pt(c(0), c(0)), &pt(c(1), c(1))).unwrap();
        let l2 = line_through(&pt(c(0), c(1)), &pt(c(1), c(2))).unwrap();
        let l3 = line_through(&pt(c(2), c(2)), &pt(c(-1), c(-1))).unwrap();
        assert!(intersect(&GeomObject::Line(l1.clone()), &GeomObject::Line(l2)).unwrap().is_empty());
        assert_eq!(
            intersect(&GeomObject::Line(l1), &GeomObject::Line(l3)).unwrap_err(),
            GeometryError::InfiniteIntersection
        );
    }

    #[test]
    fn distances() {
        assert_eq!(distance(&pt(c(0), c(0)), &pt(c(1), c(2))).unwrap(), s5());
        let p = pt(q(1, 3), s5());
        assert!(distance(&p, &p).unwrap().is_zero());
        let ps2 = pt(c(0), c(0)).distance_squared(&pt(q(5, 4), q(3, 2)));
        assert_eq!(ps2, q(61, 16));
    }

    #[test]
    fn rays() {
        let o = pt(c(0), c(0));
        let x = point_on_ray(&o, &pt(c(1), c(0)), &s5()).unwrap();
        assert!(x.same(&pt(s5(), c(0))));
        // D = (−√5, 0), M at 2AD/5 from D towards A
        let d = pt(-s5(), c(0));
        let m = point_on_ray(&d, &o, &(c(2) * s5() / c(5))).unwrap();
        assert_eq!(distance(&d, &m).unwrap(), c(2) / s5());
        assert_eq!(distance(&m, &o).unwrap(), c(3) / s5());
    }

    #[test]
    fn perpendicular_direction_is_left_normal() {
        let l = line_through(&pt(c(0), c(0)), &pt(c(1), c(0))).unwrap();
        let p = perpendicular_through(&pt(c(3), c(0)), &l);
        assert!(p.p1.same(&pt(c(3), c(1))));
    }
}
