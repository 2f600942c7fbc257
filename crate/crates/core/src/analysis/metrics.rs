use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use super::TextReport;
use crate::field::{Constructible, Interval};
use crate::geometry::Point;
use crate::lang::{elaborate, execute, ExecError, LenExpr, Program, Step, Workspace};

const SURVEY_BITS: u32 = 128;
const LENGTH_DIGITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error(transparent)]
    Exec(#[from] ExecError),
}

/// Optional bounds outside of which the report warns.
#[derive(Debug, Clone, Default)]
pub struct Thresholds {
    pub warn_above: Option<Constructible>,
    pub warn_below: Option<Constructible>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricsReport {
    pub primitive_steps: usize,
    pub macro_steps: usize,
    /// Longest drawn segment, radius or transfer, or `none`.
    pub max_length: String,
    /// Shortest positive drawn segment, radius or transfer, or `none`.
    pub min_positive_length: String,
    pub distinct_points: usize,
    pub warnings: Vec<String>,
}

impl TextReport for MetricsReport {
    fn fields(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![
            ("primitive_steps", self.primitive_steps.to_string()),
            ("macro_steps", self.macro_steps.to_string()),
            ("max_length", self.max_length.clone()),
            ("min_positive_length", self.min_positive_length.clone()),
            ("distinct_points", self.distinct_points.to_string()),
        ];
        for w in &self.warnings {
            out.push(("warning", w.clone()));
        }
        out
    }
}

fn squared(ws: &Workspace<Constructible>, a: &str, b: &str) -> Constructible {
    let p = ws.point(a).expect("bound point");
    p.distance_squared(ws.point(b).expect("bound point"))
}

/// Squared lengths of every drawn segment, circle radius and compass transfer.
fn surveyed(program: &Program, ws: &Workspace<Constructible>) -> Vec<Constructible> {
    let mut out = Vec::new();
    for step in &program.steps {
        match step {
            Step::DrawLine { p, q, .. } => out.push(squared(ws, p, q)),
            Step::DrawCircle { center, through, .. } => out.push(squared(ws, center, through)),
            Step::OnRay {
                length: LenExpr::Dist(a, b),
                ..
            } => out.push(squared(ws, a, b)),
            _ => {}
        }
    }
    out.retain(|v| !v.is_zero());
    out
}

fn key(v: &Constructible) -> BigRational {
    let iv = v.approx_interval(SURVEY_BITS);
    (iv.lo() + iv.hi()) / BigRational::from_integer(2.into())
}

fn overlaps(a: &Interval, b: &Interval) -> bool {
    a.lo() <= b.hi() && b.lo() <= a.hi()
}

/// Number of exactly distinct points.
fn distinct(points: &[&Point<Constructible>]) -> usize {
    let boxes: Vec<(Interval, Interval)> = points
        .iter()
        .map(|p| (p.x.approx_interval(64), p.y.approx_interval(64)))
        .collect();
    let mut count = 0;
    for i in 0..points.len() {
        let dup = (0..i).any(|j| {
            overlaps(&boxes[i].0, &boxes[j].0)
                && overlaps(&boxes[i].1, &boxes[j].1)
                && points[i].same(points[j])
        });
        if !dup {
            count += 1;
        }
    }
    count
}

pub fn metrics(p: &Program) -> Result<MetricsReport, MetricsError> {
    metrics_with(p, &Thresholds::default())
}

pub fn metrics_with(p: &Program, limits: &Thresholds) -> Result<MetricsReport, MetricsError> {
    // run the source first so that its errors are reported against its own steps
    execute(p)?;
    let expanded = elaborate(p)?;
    let ws = execute(&expanded)?;
    let lengths = surveyed(&expanded, &ws);
    let keyed: Vec<(BigRational, &Constructible)> = lengths.iter().map(|v| (key(v), v)).collect();
    let max = keyed.iter().max_by(|a, b| a.0.cmp(&b.0)).map(|(_, v)| v.sqrt().expect("square"));
    let min = keyed.iter().min_by(|a, b| a.0.cmp(&b.0)).map(|(_, v)| v.sqrt().expect("square"));
    let show = |v: &Option<Constructible>| {
        v.as_ref()
            .map(|x| x.to_decimal(LENGTH_DIGITS))
            .unwrap_or_else(|| "none".to_string())
    };
    let mut warnings = Vec::new();
    if let (Some(limit), Some(m)) = (&limits.warn_above, &max) {
        if m > limit {
            warnings.push(format!("max_length {} exceeds {}", show(&max), limit.to_decimal(LENGTH_DIGITS)));
        }
    }
    if let (Some(limit), Some(m)) = (&limits.warn_below, &min) {
        if m < limit {
            warnings.push(format!(
                "min_positive_length {} is below {}",
                show(&min),
                limit.to_decimal(LENGTH_DIGITS)
            ));
        }
    }
    let points: Vec<&Point<Constructible>> = ws.points().map(|(_, p)| p).collect();
    Ok(MetricsReport {
        primitive_steps: expanded.steps.iter().filter(|s| s.is_primitive()).count(),
        macro_steps: p.steps.iter().filter(|s| !matches!(s, Step::LengthDef { .. })).count(),
        max_length: show(&max),
        min_positive_length: show(&min),
        distinct_points: distinct(&points),
        warnings,
    })
}
