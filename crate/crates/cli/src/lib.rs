//! The `circlesquare` command line.
//!
//! ```
//! let out = circlesquare_cli::run(["circlesquare", "approx", "chu9-value", "--digits", "10"]);
//! assert_eq!((out.code, out.stdout.as_str()), (0, "3.1415926538\n"));
//! ```

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use circlesquare::analysis::{metrics_with, pi_error, TextReport, Thresholds};
use circlesquare::catalog::{self, approximant, builtin, parse_target, verify, CatalogEntry, Claim};
use circlesquare::geometry::GeomObject;
use circlesquare::lang::{execute, parse, Binding, Program, Selector, Step};
use circlesquare::render::{render, Highlight, HighlightCircle, RenderStyle};
use circlesquare::Constructible;
use clap::{Args, Parser, Subcommand};

const DIGITS: usize = 20;

/// Exact ruler and compass constructions, checked and measured against π.
#[derive(Parser)]
#[command(name = "circlesquare", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a construction and print every binding.
    Run {
        /// A .construct file, or builtin:NAME.
        source: String,
    },
    /// Check exactly that a constructed distance equals a target.
    ///
    /// Exits 0 when every check holds and 1 when one fails.
    Verify {
        /// A .construct file, or builtin:NAME.
        source: String,
        /// The two points whose distance is checked [default for builtins: their claims].
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        endpoints: Option<Vec<String>>,
        /// Target length, e.g. "sqrt(6/5*(1+(1+sqrt(5))/2))".
        #[arg(long)]
        target: Option<String>,
    },
    /// Print a built-in approximant as a correctly rounded decimal.
    Approx {
        /// Approximant name (see `catalog list`).
        name: String,
        /// Fractional digits.
        #[arg(long, default_value_t = DIGITS)]
        digits: usize,
    },
    /// Compare an approximant, or any positive expression, with π.
    Error {
        /// Approximant name (see `catalog list`).
        #[arg(required_unless_present = "target", conflicts_with = "target")]
        name: Option<String>,
        /// A positive length expression instead of a named approximant.
        #[arg(long)]
        target: Option<String>,
        /// Fractional digits of the ratio to π.
        #[arg(long, default_value_t = 12)]
        ratio_digits: usize,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Count steps and survey drawn lengths after expansion into primitives.
    Metrics {
        /// A .construct file, or builtin:NAME.
        source: String,
        /// Warn when the longest length exceeds this expression.
        #[arg(long, value_name = "X")]
        warn_above: Option<String>,
        /// Warn when the shortest positive length is below this expression.
        #[arg(long, value_name = "Y")]
        warn_below: Option<String>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Draw a construction as SVG.
    Render {
        /// A .construct file, or builtin:NAME.
        source: String,
        /// Output file [default: standard output].
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[command(flatten)]
        highlight: HighlightArgs,
        #[command(flatten)]
        style: StyleArgs,
    },
    /// List or print the built-in constructions and approximants.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Args)]
struct HighlightArgs {
    /// Shade the square on this side [default for builtins: the constructed side].
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    square: Option<Vec<String>>,
    /// Shade this circle, or `unit` for the unit circle on the unit segment's second point.
    #[arg(long, value_name = "NAME", default_value = "unit")]
    circle: String,
    /// Draw no shading at all.
    #[arg(long)]
    no_highlight: bool,
}

#[derive(Args)]
struct StyleArgs {
    /// Canvas width in pixels.
    #[arg(long, default_value_t = 800)]
    width: u32,
    /// Canvas height in pixels.
    #[arg(long, default_value_t = 600)]
    height: u32,
    /// Margin in pixels.
    #[arg(long, default_value_t = 40)]
    margin: u32,
    /// Stroke width in pixels.
    #[arg(long, default_value_t = 1.0)]
    stroke_width: f64,
    /// Label font size in pixels.
    #[arg(long, default_value_t = 14.0)]
    font_size: f64,
    /// Fill colour of the shaded circle and square.
    #[arg(long, default_value = "#f4d03f")]
    highlight_fill: String,
    /// Decimal digits of coordinates, at least 6.
    #[arg(long, default_value_t = 12)]
    precision: usize,
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List every builtin.
    List,
    /// Print a builtin's source or definition.
    Show {
        /// Program or approximant name.
        name: String,
    },
}

/// Input or execution failure, reported on standard error with status 2.
struct Fail(String);

fn fail(message: impl Into<String>) -> Fail {
    Fail(message.into())
}

struct Source {
    label: String,
    program: Program,
    entry: Option<CatalogEntry>,
}

fn load(source: &str) -> Result<Source, Fail> {
    if let Some(name) = source.strip_prefix("builtin:") {
        let entry = builtin(name).map_err(|e| fail(e.to_string()))?;
        return Ok(Source {
            label: source.to_string(),
            program: entry.program.clone(),
            entry: Some(entry),
        });
    }
    let text = fs::read_to_string(source).map_err(|e| fail(format!("{source}: {e}")))?;
    let program = parse(&text).map_err(|e| fail(format!("{source}:{e}")))?;
    Ok(Source {
        label: source.to_string(),
        program,
        entry: None,
    })
}

fn target(text: &str) -> Result<Constructible, Fail> {
    parse_target(text).map_err(|e| fail(format!("target `{text}`: {e}")))
}

fn point_text(x: &Constructible, y: &Constructible) -> String {
    format!("({}, {})", x.to_decimal(DIGITS), y.to_decimal(DIGITS))
}

fn run_program(src: &Source) -> Result<String, Fail> {
    let ws = execute(&src.program).map_err(|e| fail(format!("{}: {e}", src.label)))?;
    let mut out = String::new();
    let (mut points, mut lines, mut circles, mut lengths) = (0, 0, 0, 0);
    for (name, b) in &ws.bindings {
        let line = match b {
            Binding::Point(p) => {
                points += 1;
                format!("point {name} = {}", point_text(&p.x, &p.y))
            }
            Binding::Object(GeomObject::Line(l)) => {
                lines += 1;
                format!(
                    "line {name} through {} {}",
                    point_text(&l.p0.x, &l.p0.y),
                    point_text(&l.p1.x, &l.p1.y)
                )
            }
            Binding::Object(GeomObject::Circle(c)) => {
                circles += 1;
                let r = c.radius().map_err(|e| fail(e.to_string()))?;
                format!(
                    "circle {name} center {} radius {}",
                    point_text(&c.center.x, &c.center.y),
                    r.to_decimal(DIGITS)
                )
            }
            Binding::Length(v) => {
                lengths += 1;
                format!("len {name} = {}", v.to_decimal(DIGITS))
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    let resolved: Vec<String> = ws
        .trace
        .iter()
        .filter_map(|s| match s {
            Step::Intersect {
                name,
                selector: Some(Selector::Index(i)),
                ..
            } => Some(format!("{name}:{i}")),
            _ => None,
        })
        .collect();
    out.push_str(&format!(
        "trace: {} steps, {points} points, {lines} lines, {circles} circles, {lengths} lengths\n",
        ws.trace.len()
    ));
    if !resolved.is_empty() {
        out.push_str(&format!("intersections: {}\n", resolved.join(" ")));
    }
    Ok(out)
}

fn check(src: &Source, endpoints: Option<Vec<String>>, target_text: Option<String>) -> Result<(String, bool), Fail> {
    let claims: Vec<(String, String, Constructible, String)> = match (endpoints, target_text) {
        (Some(e), Some(t)) => vec![(e[0].clone(), e[1].clone(), target(&t)?, t)],
        (None, None) => match &src.entry {
            Some(entry) => entry
                .claims
                .iter()
                .map(|c: &Claim| {
                    (
                        c.endpoints.0.clone(),
                        c.endpoints.1.clone(),
                        c.target.clone(),
                        c.target_text.to_string(),
                    )
                })
                .collect(),
            None => return Err(fail("verify needs --endpoints and --target")),
        },
        _ => return Err(fail("--endpoints and --target go together")),
    };
    let mut out = String::new();
    let mut all = true;
    for (p, q, value, text) in claims {
        let ok = verify(&src.program, (&p, &q), &value).map_err(|e| fail(format!("{}: {e}", src.label)))?;
        all &= ok;
        let verdict = if ok { "equal" } else { "NOT equal" };
        out.push_str(&format!("|{p}{q}| {verdict} to {text}\n"));
    }
    Ok((out, all))
}

fn catalog_list() -> String {
    let mut out = String::from("programs:\n");
    for name in catalog::PROGRAM_NAMES {
        let e = builtin(name).expect("builtin");
        let claims: Vec<String> = e
            .claims
            .iter()
            .map(|c| format!("|{}{}| = {}", c.endpoints.0, c.endpoints.1, c.target_text))
            .collect();
        out.push_str(&format!("  {name:<12} {}\n", claims.join(", ")));
    }
    out.push_str("approximants:\n");
    for name in catalog::APPROXIMANT_NAMES {
        let a = approximant(name).expect("approximant");
        out.push_str(&format!(
            "  {name:<18} {} ({} places, {})\n",
            a.expression, a.claimed_decimal_places, a.source
        ));
    }
    out
}

fn catalog_show(name: &str) -> Result<String, Fail> {
    if let Ok(e) = builtin(name) {
        return Ok(e.source.to_string());
    }
    match approximant(name) {
        Ok(a) => Ok(format!(
            "{}\nvalue: {}\nclaimed places: {}\n",
            a.expression,
            a.value.to_decimal(DIGITS),
            a.claimed_decimal_places
        )),
        Err(_) => Err(fail(format!("unknown builtin `{name}`"))),
    }
}

fn execute_command(cmd: Command) -> Result<(String, bool), Fail> {
    Ok(match cmd {
        Command::Run { source } => (run_program(&load(&source)?)?, true),
        Command::Verify {
            source,
            endpoints,
            target,
        } => check(&load(&source)?, endpoints, target)?,
        Command::Approx { name, digits } => {
            let a = approximant(&name).map_err(|e| fail(e.to_string()))?;
            (format!("{}\n", a.value.to_decimal(digits)), true)
        }
        Command::Error {
            name,
            target: text,
            ratio_digits,
            json,
        } => {
            let v = match (&name, &text) {
                (Some(n), _) => approximant(n).map_err(|e| fail(e.to_string()))?.value,
                (None, Some(t)) => target(t)?,
                (None, None) => unreachable!("clap requires one"),
            };
            let r = pi_error(&v, ratio_digits).map_err(|e| fail(e.to_string()))?;
            (if json { r.to_json() } else { r.to_text() }, true)
        }
        Command::Metrics {
            source,
            warn_above,
            warn_below,
            json,
        } => {
            let src = load(&source)?;
            let limits = Thresholds {
                warn_above: warn_above.as_deref().map(target).transpose()?,
                warn_below: warn_below.as_deref().map(target).transpose()?,
            };
            let m = metrics_with(&src.program, &limits).map_err(|e| fail(format!("{}: {e}", src.label)))?;
            (if json { m.to_json() } else { m.to_text() }, true)
        }
        Command::Render {
            source,
            out,
            highlight,
            style,
        } => {
            let src = load(&source)?;
            let ws = execute(&src.program).map_err(|e| fail(format!("{}: {e}", src.label)))?;
            let side = match (&highlight.square, &src.entry) {
                (Some(s), _) => Some((s[0].clone(), s[1].clone())),
                (None, Some(e)) => Some(e.result().endpoints.clone()),
                (None, None) => None,
            };
            let circle = if highlight.circle == "unit" {
                HighlightCircle::Unit
            } else {
                HighlightCircle::Named(highlight.circle.clone())
            };
            let h = match side {
                Some(square_side) if !highlight.no_highlight => Some(Highlight { circle, square_side }),
                _ => None,
            };
            let style = RenderStyle {
                width: style.width,
                height: style.height,
                margin: style.margin,
                stroke_width: style.stroke_width,
                accent_stroke_width: 2.0 * style.stroke_width,
                font_size: style.font_size,
                highlight_fill: style.highlight_fill,
                precision: style.precision,
                ..RenderStyle::default()
            };
            let svg = render(&ws, h.as_ref(), &style).map_err(|e| fail(format!("{}: {e}", src.label)))?;
            match out {
                Some(path) => {
                    fs::write(&path, svg).map_err(|e| fail(format!("{}: {e}", path.display())))?;
                    (String::new(), true)
                }
                None => (svg, true),
            }
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => (catalog_list(), true),
            CatalogAction::Show { name } => (catalog_show(&name)?, true),
        },
    })
}

/// What one invocation prints and its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code() as u8;
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute_command(cli.command) {
        Ok((stdout, ok)) => Outcome {
            code: if ok { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.0),
        },
    }
}
