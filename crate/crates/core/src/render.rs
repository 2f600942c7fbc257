//! SVG rendering of executed constructions.
//!
//! Coordinates are read from exact values through interval enclosures and
//! rounded to a fixed number of decimals, so output is byte-for-byte stable.
//! The drawing uses construction units with the y axis flipped; the viewBox
//! maps them onto the canvas.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::field::{format_scaled, Constructible};
use crate::geometry::{GeomObject, Point};
use crate::lang::{Step, Workspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("`{0}` is not a circle")]
    NotACircle(String),
    #[error("no unit segment is declared")]
    NoUnit,
    #[error("nothing to render")]
    EmptyWorkspace,
    #[error("invalid style: {0}")]
    InvalidStyle(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderStyle {
    pub width: u32,
    pub height: u32,
    pub margin: u32,
    pub stroke_width: f64,
    pub accent_stroke_width: f64,
    pub point_radius: f64,
    pub font_size: f64,
    pub font_family: String,
    pub stroke: String,
    pub accent: String,
    pub highlight_fill: String,
    pub highlight_opacity: f64,
    /// Decimal digits of emitted coordinates.
    pub precision: usize,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            width: 800,
            height: 600,
            margin: 40,
            stroke_width: 1.0,
            accent_stroke_width: 2.0,
            point_radius: 2.5,
            font_size: 14.0,
            font_family: "sans-serif".into(),
            stroke: "#1f1f1f".into(),
            accent: "#b03a2e".into(),
            highlight_fill: "#f4d03f".into(),
            highlight_opacity: 0.6,
            precision: 12,
        }
    }
}

impl RenderStyle {
    fn check(&self) -> Result<(), RenderError> {
        let positive = [
            self.stroke_width,
            self.accent_stroke_width,
            self.point_radius,
            self.font_size,
        ];
        if self.width == 0 || self.height == 0 {
            return Err(RenderError::InvalidStyle("canvas size must be positive"));
        }
        if 2 * self.margin >= self.width.min(self.height) {
            return Err(RenderError::InvalidStyle("margin leaves no drawing area"));
        }
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(RenderError::InvalidStyle("stroke widths, point radius and font size must be positive"));
        }
        if !(0.0..=1.0).contains(&self.highlight_opacity) {
            return Err(RenderError::InvalidStyle("opacity must lie in [0, 1]"));
        }
        if self.precision < 6 {
            return Err(RenderError::InvalidStyle("precision must be at least 6"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HighlightCircle {
    /// A circle bound in the workspace.
    Named(String),
    /// Radius one, centred on the second point of the unit segment.
    Unit,
}

/// The shaded circle and the shaded square on a constructed side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Highlight {
    pub circle: HighlightCircle,
    pub square_side: (String, String),
}

struct Canvas {
    digits: usize,
    bits: u32,
}

impl Canvas {
    fn approx(&self, v: &Constructible) -> BigRational {
        let iv = v.approx_interval(self.bits);
        (iv.lo() + iv.hi()) / BigRational::from_integer(2.into())
    }

    fn num(&self, r: &BigRational) -> String {
        let k = (r * BigRational::from_integer(BigInt::from(10).pow(self.digits as u32))).round();
        let s = format_scaled(&k.to_integer(), self.digits, false);
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" {
            "0".to_string()
        } else {
            s.to_string()
        }
    }
}

#[derive(Clone)]
struct P {
    x: BigRational,
    y: BigRational,
}

impl P {
    fn f64(&self) -> (f64, f64) {
        (self.x.to_f64().unwrap_or(0.0), self.y.to_f64().unwrap_or(0.0))
    }
}

struct Bounds {
    min: Option<(BigRational, BigRational)>,
    max: Option<(BigRational, BigRational)>,
}

impl Bounds {
    fn add(&mut self, x: &BigRational, y: &BigRational) {
        match (&mut self.min, &mut self.max) {
            (Some(lo), Some(hi)) => {
                if x < &lo.0 {
                    lo.0 = x.clone();
                }
                if y < &lo.1 {
                    lo.1 = y.clone();
                }
                if x > &hi.0 {
                    hi.0 = x.clone();
                }
                if y > &hi.1 {
                    hi.1 = y.clone();
                }
            }
            _ => {
                self.min = Some((x.clone(), y.clone()));
                self.max = Some((x.clone(), y.clone()));
            }
        }
    }

    fn add_box(&mut self, c: &P, r: &BigRational) {
        self.add(&(&c.x - r), &(&c.y - r));
        self.add(&(&c.x + r), &(&c.y + r));
    }
}

enum Shape {
    Segment(P, P, bool),
    Circle(P, BigRational),
    Polygon(Vec<P>),
}

fn rat(v: f64) -> BigRational {
    BigRational::from_float(v).unwrap_or_else(BigRational::zero)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `ws` as a standalone SVG 1.1 document.
pub fn render(
    ws: &Workspace<Constructible>,
    highlight: Option<&Highlight>,
    style: &RenderStyle,
) -> Result<String, RenderError> {
    style.check()?;
    if ws.bindings.is_empty() {
        return Err(RenderError::EmptyWorkspace);
    }
    let cv = Canvas {
        digits: style.precision,
        bits: (style.precision as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16,
    };
    let at = |p: &Point<Constructible>| P {
        x: cv.approx(&p.x),
        y: -cv.approx(&p.y),
    };
    let point = |name: &str| ws.point(name).ok_or_else(|| RenderError::UnknownName(name.to_string()));

    let points: Vec<(&str, P)> = ws.points().map(|(n, p)| (n, at(p))).collect();
    let diameters: Vec<(&str, &str, &str)> = ws
        .trace
        .iter()
        .filter_map(|s| match s {
            Step::CircleOnDiameter { name, p, q } => Some((name.as_str(), p.as_str(), q.as_str())),
            _ => None,
        })
        .collect();

    let mut shapes = Vec::new();
    for name in ws.bindings.keys() {
        let Some(obj) = ws.object(name) else { continue };
        match obj {
            GeomObject::Line(l) => {
                // span every bound point lying on the line
                let (a, b) = (at(&l.p0), at(&l.p1));
                let (ax, ay) = a.f64();
                let (bx, by) = b.f64();
                let (dx, dy) = (bx - ax, by - ay);
                let len2 = dx * dx + dy * dy;
                let (mut lo, mut hi) = ((0.0, a.clone()), (1.0, b.clone()));
                for (_, p) in &points {
                    let (px, py) = p.f64();
                    let cross = (px - ax) * dy - (py - ay) * dx;
                    if cross * cross > 1e-18 * len2 * (1.0 + px * px + py * py) {
                        continue;
                    }
                    let t = ((px - ax) * dx + (py - ay) * dy) / len2;
                    if t < lo.0 {
                        lo = (t, p.clone());
                    }
                    if t > hi.0 {
                        hi = (t, p.clone());
                    }
                }
                shapes.push(Shape::Segment(lo.1, hi.1, false));
            }
            GeomObject::Circle(c) => {
                let r = c.radius().map_err(|_| RenderError::NotACircle(name.clone()))?;
                shapes.push(Shape::Circle(at(&c.center), cv.approx(&r)));
            }
        }
    }
    for (_, p, q) in &diameters {
        shapes.push(Shape::Segment(at(point(p)?), at(point(q)?), true));
    }

    let mut fills = Vec::new();
    if let Some(h) = highlight {
        let (center, r) = match &h.circle {
            HighlightCircle::Named(n) => match ws.object(n) {
                Some(GeomObject::Circle(c)) => {
                    let r = c.radius().map_err(|_| RenderError::NotACircle(n.clone()))?;
                    (at(&c.center), cv.approx(&r))
                }
                Some(_) => return Err(RenderError::NotACircle(n.clone())),
                None => return Err(RenderError::UnknownName(n.clone())),
            },
            HighlightCircle::Unit => {
                let (_, c) = ws.unit.as_ref().ok_or(RenderError::NoUnit)?;
                (at(point(c)?), BigRational::one())
            }
        };
        let p = point(&h.square_side.0)?;
        let q = point(&h.square_side.1)?;
        let dx = &q.x - &p.x;
        let dy = &q.y - &p.y;
        let corners = [
            p.clone(),
            q.clone(),
            Point::new(&q.x - &dy, &q.y + &dx),
            Point::new(&p.x - &dy, &p.y + &dx),
        ];
        fills.push(Shape::Circle(center, r));
        fills.push(Shape::Polygon(corners.iter().map(at).collect()));
    }

    let mut bounds = Bounds { min: None, max: None };
    for (_, p) in &points {
        bounds.add(&p.x, &p.y);
    }
    for s in shapes.iter().chain(&fills) {
        match s {
            Shape::Segment(a, b, _) => {
                bounds.add(&a.x, &a.y);
                bounds.add(&b.x, &b.y);
            }
            Shape::Circle(c, r) => bounds.add_box(c, r),
            Shape::Polygon(ps) => ps.iter().for_each(|p| bounds.add(&p.x, &p.y)),
        }
    }
    let (Some(min), Some(max)) = (bounds.min, bounds.max) else {
        return Err(RenderError::EmptyWorkspace);
    };
    let mut bw = &max.0 - &min.0;
    let mut bh = &max.1 - &min.1;
    if bw.is_zero() && bh.is_zero() {
        bw = BigRational::one();
        bh = BigRational::one();
    }
    let inner = |px: u32| BigRational::from_integer((px - 2 * style.margin).into());
    let sx = if bw.is_zero() { None } else { Some(inner(style.width) / &bw) };
    let sy = if bh.is_zero() { None } else { Some(inner(style.height) / &bh) };
    let scale = match (sx, sy) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => unreachable!("extent fixed above"),
    };
    let px = |v: f64| rat(v) / &scale;
    let m = px(style.margin as f64);
    let vb = [&min.0 - &m, &min.1 - &m, &bw + &m + &m, &bh + &m + &m];

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        style.width,
        style.height,
        cv.num(&vb[0]),
        cv.num(&vb[1]),
        cv.num(&vb[2]),
        cv.num(&vb[3])
    );
    if let [Shape::Circle(c, r), Shape::Polygon(corners)] = fills.as_slice() {
        let _ = writeln!(
            out,
            "<g fill=\"{}\" fill-opacity=\"{}\" stroke=\"none\">",
            escape(&style.highlight_fill),
            style.highlight_opacity
        );
        let _ = writeln!(
            out,
            "<circle class=\"highlight-circle\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            cv.num(&c.x),
            cv.num(&c.y),
            cv.num(r)
        );
        let pts: Vec<String> = corners.iter().map(|p| format!("{},{}", cv.num(&p.x), cv.num(&p.y))).collect();
        let _ = writeln!(out, "<polygon class=\"highlight-square\" points=\"{}\"/>", pts.join(" "));
        out.push_str("</g>\n");
    }
    let _ = writeln!(
        out,
        "<g fill=\"none\" stroke=\"{}\" stroke-width=\"{}\">",
        escape(&style.stroke),
        cv.num(&px(style.stroke_width))
    );
    let accent = cv.num(&px(style.accent_stroke_width));
    for s in &shapes {
        match s {
            Shape::Segment(a, b, diameter) => {
                let extra = if *diameter {
                    format!(" stroke=\"{}\" stroke-width=\"{}\"", escape(&style.accent), accent)
                } else {
                    String::new()
                };
                let _ = writeln!(
                    out,
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"{extra}/>",
                    cv.num(&a.x),
                    cv.num(&a.y),
                    cv.num(&b.x),
                    cv.num(&b.y)
                );
            }
            Shape::Polygon(_) => {}
            Shape::Circle(c, r) => {
                let _ = writeln!(
                    out,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                    cv.num(&c.x),
                    cv.num(&c.y),
                    cv.num(r)
                );
            }
        }
    }
    out.push_str("</g>\n");

    let n = points.len() as f64;
    let (cx, cy) = points
        .iter()
        .map(|(_, p)| p.f64())
        .fold((0.0, 0.0), |acc, (x, y)| (acc.0 + x / n, acc.1 + y / n));
    let _ = writeln!(out, "<g fill=\"{}\" stroke=\"none\">", escape(&style.stroke));
    let dot = cv.num(&px(style.point_radius));
    for (_, p) in &points {
        let _ = writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{dot}\"/>", cv.num(&p.x), cv.num(&p.y));
    }
    out.push_str("</g>\n");
    let _ = writeln!(
        out,
        "<g font-family=\"{}\" font-size=\"{}\" text-anchor=\"middle\" fill=\"{}\">",
        escape(&style.font_family),
        cv.num(&px(style.font_size)),
        escape(&style.stroke)
    );
    let reach = style.font_size * 0.9;
    for (name, p) in &points {
        // away from the centroid of all points, upwards when on it
        let (x, y) = p.f64();
        let (mut ux, mut uy) = (x - cx, y - cy);
        let len = (ux * ux + uy * uy).sqrt();
        if len < 1e-9 {
            (ux, uy) = (0.0, -1.0);
        } else {
            (ux, uy) = (ux / len, uy / len);
        }
        // rounded so the offset does not depend on last-bit float noise
        let ux = (ux * 1000.0).round() / 1000.0;
        let uy = (uy * 1000.0).round() / 1000.0;
        let lx = &p.x + px(ux * reach);
        let ly = &p.y + px(uy * reach + style.font_size * 0.35);
        let _ = writeln!(out, "<text x=\"{}\" y=\"{}\">{}</text>", cv.num(&lx), cv.num(&ly), escape(name));
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
