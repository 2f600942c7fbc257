use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::ast::{Kind, LenExpr, Program, Selector, Step};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

const KEYWORDS: &[&str] = &[
    "unit", "point", "points", "line", "circle", "len", "intersect", "midpoint", "onray", "away",
    "dist", "through", "perp", "to", "center", "diameter", "divide", "near", "far", "side",
    "opposite", "of", "idx", "sqrt",
];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => write!(f, "end of line"),
        }
    }
}

fn tokenize(line: &str, line_no: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Int(digits.parse().unwrap()), col));
        } else if "()=,+-*/".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(ParseError {
                line: line_no,
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Checker {
    kinds: HashMap<String, Kind>,
    linear: HashMap<String, bool>,
    unit: bool,
}

struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn error_at(&self, column: usize, message: String) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message,
        }
    }

    fn error(&self, message: String) -> ParseError {
        self.error_at(self.column(), message)
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            t => Err(self.error(format!("expected `{kw}`, found {t}"))),
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == kw) {
            self.next();
            true
        } else {
            false
        }
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`, found {}", self.peek())))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    /// A fresh identifier with its column.
    fn name(&mut self) -> Result<(String, usize), ParseError> {
        let col = self.column();
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok((s, col))
            }
            t => Err(self.error(format!("expected a name, found {t}"))),
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(n)
            }
            t => Err(self.error(format!("expected an integer, found {t}"))),
        }
    }

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let negative = self.eat_sym('-');
        let col = self.column();
        let num = self.int()?;
        let den = if self.eat_sym('/') {
            self.int()?
        } else {
            BigInt::from(1)
        };
        if den.is_zero() {
            return Err(self.error_at(col, "zero denominator".into()));
        }
        let r = BigRational::new(num, den);
        Ok(if negative { -r } else { r })
    }
}

impl Checker {
    fn reference(&self, cur: &Cursor, want: &[Kind]) -> Result<String, ParseError> {
        Ok(self.reference_at(cur, want)?.0)
    }

    fn reference_at(&self, cur: &Cursor, want: &[Kind]) -> Result<(String, Kind), ParseError> {
        let col = cur.column();
        let name = match cur.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => s.clone(),
            t => return Err(cur.error(format!("expected a name, found {t}"))),
        };
        let kind = *self
            .kinds
            .get(&name)
            .ok_or_else(|| cur.error_at(col, format!("unknown name `{name}`")))?;
        if !want.contains(&kind) {
            let expected: Vec<String> = want.iter().map(|k| k.to_string()).collect();
            return Err(cur.error_at(
                col,
                format!("`{name}` is a {kind}, expected a {}", expected.join(" or ")),
            ));
        }
        Ok((name, kind))
    }

    fn define(&mut self, cur: &Cursor, name: &str, col: usize, kind: Kind) -> Result<(), ParseError> {
        if self.kinds.contains_key(name) {
            return Err(cur.error_at(col, format!("duplicate name `{name}`")));
        }
        self.kinds.insert(name.to_string(), kind);
        Ok(())
    }

    fn is_linear(&self, e: &LenExpr) -> bool {
        match e {
            LenExpr::Dist(..) => true,
            LenExpr::Named(n) => self.linear.get(n).copied().unwrap_or(false),
            LenExpr::Int(_) | LenExpr::Sqrt(_) => false,
            LenExpr::Add(a, b) | LenExpr::Sub(a, b) => self.is_linear(a) && self.is_linear(b),
            LenExpr::Mul(a, b) => {
                (a.constant().is_some() && self.is_linear(b))
                    || (b.constant().is_some() && self.is_linear(a))
            }
            LenExpr::Div(a, b) => b.constant().is_some() && self.is_linear(a),
        }
    }

    fn expr(&self, cur: &mut Cursor) -> Result<LenExpr, ParseError> {
        let mut lhs = self.term(cur)?;
        loop {
            if cur.eat_sym('+') {
                lhs = LenExpr::Add(Box::new(lhs), Box::new(self.term(cur)?));
            } else if cur.eat_sym('-') {
                lhs = LenExpr::Sub(Box::new(lhs), Box::new(self.term(cur)?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&self, cur: &mut Cursor) -> Result<LenExpr, ParseError> {
        let mut lhs = self.atom(cur)?;
        loop {
            if cur.eat_sym('*') {
                lhs = LenExpr::Mul(Box::new(lhs), Box::new(self.atom(cur)?));
            } else if cur.eat_sym('/') {
                lhs = LenExpr::Div(Box::new(lhs), Box::new(self.atom(cur)?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn atom(&self, cur: &mut Cursor) -> Result<LenExpr, ParseError> {
        match cur.peek().clone() {
            Tok::Int(n) => {
                cur.next();
                Ok(LenExpr::Int(n))
            }
            Tok::Sym('(') => {
                cur.next();
                let e = self.expr(cur)?;
                cur.sym(')')?;
                Ok(e)
            }
            Tok::Ident(s) if s == "dist" => {
                cur.next();
                cur.sym('(')?;
                let a = self.reference(cur, &[Kind::Point])?;
                cur.next();
                cur.sym(',')?;
                let b = self.reference(cur, &[Kind::Point])?;
                cur.next();
                cur.sym(')')?;
                Ok(LenExpr::Dist(a, b))
            }
            Tok::Ident(s) if s == "sqrt" => {
                cur.next();
                cur.sym('(')?;
                let e = self.expr(cur)?;
                cur.sym(')')?;
                Ok(LenExpr::Sqrt(Box::new(e)))
            }
            Tok::Ident(_) => {
                let n = self.reference(cur, &[Kind::Length])?;
                cur.next();
                Ok(LenExpr::Named(n))
            }
            t => Err(cur.error(format!("expected a length expression, found {t}"))),
        }
    }

    fn length(&self, cur: &mut Cursor) -> Result<LenExpr, ParseError> {
        let col = cur.column();
        let e = self.expr(cur)?;
        if !self.unit && !self.is_linear(&e) {
            return Err(cur.error_at(col, "expression needs a declared unit segment".into()));
        }
        Ok(e)
    }

    fn point_ref(&self, cur: &mut Cursor) -> Result<String, ParseError> {
        let n = self.reference(cur, &[Kind::Point])?;
        cur.next();
        Ok(n)
    }

    fn selector(&self, cur: &mut Cursor) -> Result<Option<Selector>, ParseError> {
        let kw = match cur.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return Ok(None),
        };
        let sel = match kw.as_str() {
            "near" | "far" => {
                cur.next();
                let p = self.point_ref(cur)?;
                if kw == "near" {
                    Selector::Near(p)
                } else {
                    Selector::Far(p)
                }
            }
            "side" | "opposite" => {
                cur.next();
                let point = self.point_ref(cur)?;
                cur.keyword("of")?;
                let line = self.reference(cur, &[Kind::Line])?;
                cur.next();
                if kw == "side" {
                    Selector::SameSide { point, line }
                } else {
                    Selector::OppositeSide { point, line }
                }
            }
            "idx" => {
                cur.next();
                let col = cur.column();
                let i = cur.int()?;
                if i > BigInt::from(1) {
                    return Err(cur.error_at(col, format!("index {i} out of range, expected 0 or 1")));
                }
                Selector::Index(if i.is_zero() { 0 } else { 1 })
            }
            _ => return Ok(None),
        };
        Ok(Some(sel))
    }

    fn statement(&mut self, cur: &mut Cursor, program: &mut Program) -> Result<(), ParseError> {
        let col = cur.column();
        let head = match cur.next() {
            Tok::Ident(s) => s,
            t => return Err(cur.error_at(col, format!("expected a statement, found {t}"))),
        };
        let step = match head.as_str() {
            "unit" => {
                if self.unit {
                    return Err(cur.error_at(col, "unit segment declared twice".into()));
                }
                let a = self.point_ref(cur)?;
                let b_col = cur.column();
                let b = self.point_ref(cur)?;
                if a == b {
                    return Err(cur.error_at(b_col, "unit segment needs two distinct points".into()));
                }
                self.unit = true;
                program.unit = Some((a, b));
                None
            }
            "point" => {
                let (name, ncol) = cur.name()?;
                cur.sym('=')?;
                let step = self.point_body(cur, name.clone())?;
                self.define(cur, &name, ncol, Kind::Point)?;
                Some(step)
            }
            "line" => {
                let (name, ncol) = cur.name()?;
                cur.sym('=')?;
                let step = if cur.eat_keyword("through") {
                    let p = self.point_ref(cur)?;
                    let q = self.point_ref(cur)?;
                    Step::DrawLine { name: name.clone(), p, q }
                } else if cur.eat_keyword("perp") {
                    let point = self.point_ref(cur)?;
                    cur.keyword("to")?;
                    let line = self.reference(cur, &[Kind::Line])?;
                    cur.next();
                    Step::PerpThrough { name: name.clone(), point, line }
                } else {
                    return Err(cur.error(format!("expected `through` or `perp`, found {}", cur.peek())));
                };
                self.define(cur, &name, ncol, Kind::Line)?;
                Some(step)
            }
            "circle" => {
                let (name, ncol) = cur.name()?;
                cur.sym('=')?;
                let step = if cur.eat_keyword("center") {
                    let center = self.point_ref(cur)?;
                    cur.keyword("through")?;
                    let through = self.point_ref(cur)?;
                    Step::DrawCircle { name: name.clone(), center, through }
                } else if cur.eat_keyword("diameter") {
                    let p = self.point_ref(cur)?;
                    let q = self.point_ref(cur)?;
                    Step::CircleOnDiameter { name: name.clone(), p, q }
                } else {
                    return Err(cur.error(format!("expected `center` or `diameter`, found {}", cur.peek())));
                };
                self.define(cur, &name, ncol, Kind::Circle)?;
                Some(step)
            }
            "points" => {
                let mut names = Vec::new();
                while !matches!(cur.peek(), Tok::Sym('=')) {
                    names.push(cur.name()?);
                }
                if names.is_empty() {
                    return Err(cur.error("expected a name, found `=`".into()));
                }
                cur.sym('=')?;
                cur.keyword("divide")?;
                let p = self.point_ref(cur)?;
                let q = self.point_ref(cur)?;
                let ncol = cur.column();
                let n = cur.int()?;
                if n < BigInt::from(2) || n > BigInt::from(1000) {
                    return Err(cur.error_at(ncol, format!("cannot divide into {n} parts")));
                }
                let n: u32 = n.try_into().unwrap();
                if names.len() != n as usize - 1 {
                    return Err(cur.error_at(
                        col,
                        format!(
                            "dividing into {n} parts defines {} points, got {} names",
                            n - 1,
                            names.len()
                        ),
                    ));
                }
                for (name, c) in &names {
                    self.define(cur, name, *c, Kind::Point)?;
                }
                Some(Step::Divide {
                    names: names.into_iter().map(|(n, _)| n).collect(),
                    p,
                    q,
                    n,
                })
            }
            "len" => {
                let (name, ncol) = cur.name()?;
                cur.sym('=')?;
                let expr = self.length(cur)?;
                let linear = self.is_linear(&expr);
                self.define(cur, &name, ncol, Kind::Length)?;
                self.linear.insert(name.clone(), linear);
                Some(Step::LengthDef { name, expr })
            }
            _ => return Err(cur.error_at(col, format!("unknown statement `{head}`"))),
        };
        if *cur.peek() != Tok::End {
            return Err(cur.error(format!("unexpected {}", cur.peek())));
        }
        if let Some(step) = step {
            program.steps.push(step);
        }
        Ok(())
    }

    fn point_body(&self, cur: &mut Cursor, name: String) -> Result<Step, ParseError> {
        if cur.eat_sym('(') {
            let x = cur.rational()?;
            cur.sym(',')?;
            let y = cur.rational()?;
            cur.sym(')')?;
            return Ok(Step::InitialPoint { name, x, y });
        }
        if cur.eat_keyword("intersect") {
            let objects = [Kind::Line, Kind::Circle];
            let a = self.reference(cur, &objects)?;
            cur.next();
            let b = self.reference(cur, &objects)?;
            cur.next();
            let selector = self.selector(cur)?;
            return Ok(Step::Intersect { name, a, b, selector });
        }
        if cur.eat_keyword("midpoint") {
            let p = self.point_ref(cur)?;
            let q = self.point_ref(cur)?;
            return Ok(Step::Midpoint { name, p, q });
        }
        if cur.eat_keyword("onray") {
            let origin = self.point_ref(cur)?;
            let away = cur.eat_keyword("away");
            let toward = self.point_ref(cur)?;
            cur.keyword("dist")?;
            let length = self.length(cur)?;
            return Ok(Step::OnRay {
                name,
                origin,
                toward,
                away,
                length,
            });
        }
        Err(cur.error(format!(
            "expected `(`, `intersect`, `midpoint` or `onray`, found {}",
            cur.peek()
        )))
    }
}

/// Parses and checks a construction script.
pub fn parse(text: &str) -> Result<Program, ParseError> {
    let mut checker = Checker {
        kinds: HashMap::new(),
        linear: HashMap::new(),
        unit: false,
    };
    let mut program = Program::default();
    for (i, line) in text.lines().enumerate() {
        let toks = tokenize(line, i + 1)?;
        if toks.len() == 1 {
            continue;
        }
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line: i + 1,
        };
        checker.statement(&mut cur, &mut program)?;
    }
    Ok(program)
}

/// Parses a closed length expression (integers, `+ − × ÷`, `sqrt`) on one line.
pub fn parse_expr(text: &str) -> Result<LenExpr, ParseError> {
    let checker = Checker {
        kinds: HashMap::new(),
        linear: HashMap::new(),
        unit: true,
    };
    let toks = tokenize(text, 1)?;
    let mut cur = Cursor {
        toks: &toks,
        pos: 0,
        line: 1,
    };
    let e = checker.expr(&mut cur)?;
    if *cur.peek() != Tok::End {
        return Err(cur.error(format!("unexpected {}", cur.peek())));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> ParseError {
        parse(text).unwrap_err()
    }

    #[test]
    fn empty_and_comments() {
        assert_eq!(parse("").unwrap(), Program::default());
        assert_eq!(parse("# nothing\n\n   # here\n").unwrap().steps.len(), 0);
    }

    #[test]
    fn duplicate_name() {
        let e = err("point A = (0,0)\npoint A = (1,0)");
        assert_eq!((e.line, e.column), (2, 7));
        assert!(e.message.contains("duplicate name `A`"));
    }

    #[test]
    fn unknown_name_location() {
        let e = err("point A = (0,0)\nline l = through A B\n");
        assert_eq!((e.line, e.column), (2, 20));
        assert!(e.message.contains("unknown name `B`"));
    }

    #[test]
    fn wrong_kind() {
        let e = err("point A = (0,0)\npoint B = (1,0)\npoint C = intersect A B");
        assert!(e.message.contains("`A` is a point, expected a line or circle"));
    }

    #[test]
    fn divide_arity() {
        let src = "point A = (0,0)\npoint B = (1,0)\npoints X Y = divide A B 4";
        let e = err(src);
        assert_eq!(e.line, 3);
        assert!(e.message.contains("defines 3 points, got 2 names"));
        assert!(parse("point A = (0,0)\npoint B = (1,0)\npoints X Y Z = divide A B 4").is_ok());
    }

    #[test]
    fn syntax_errors() {
        assert_eq!(err("point A = (0,0").message, "expected `)`, found end of line");
        assert_eq!(err("point A = (0,0) extra").message, "unexpected `extra`");
        assert_eq!(err("point A = (1/0,0)").message, "zero denominator");
        assert_eq!(err("frob A").message, "unknown statement `frob`");
        assert_eq!(err("point A = @").column, 11);
        assert!(err("point dist = (0,0)").message.contains("expected a name"));
    }

    #[test]
    fn unit_required_for_products() {
        let base = "point A = (0,0)\npoint B = (3/2,-1)\n";
        assert!(parse(&format!("{base}len a = 3/10*dist(A,B) + dist(B,A)/2")).is_ok());
        let e = err(&format!("{base}len a = dist(A,B)*dist(A,B)"));
        assert!(e.message.contains("unit"));
        assert!(parse(&format!("{base}unit A B\nlen a = dist(A,B)*sqrt(dist(A,B))")).is_ok());
    }

    #[test]
    fn full_statement_set() {
        let src = "\
point A = (0,0)
point B = (1,0)
unit A B
line ab = through A B
line ad = perp A to ab
circle ua = center A through B
point D = intersect ad ua idx 0
point C = midpoint A D
circle cb = center C through B
point E = intersect ad cb far D
point F = intersect ad cb near D
point G = intersect ab ua side D of ad
point H = intersect ab ua opposite D of ad
circle dd = diameter D B
points P Q = divide A B 3
len r = sqrt(dist(A,B)*(dist(C,D)+1))
point K = onray F away E dist r/2 - dist(A,C)
";
        let p = parse(src).unwrap();
        assert_eq!(p.steps.len(), 16);
        assert_eq!(p.unit, Some(("A".into(), "B".into())));
        let again = parse(&p.to_string()).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn closed_expressions() {
        let e = parse_expr("sqrt(6/5*(1+(1+sqrt(5))/2))").unwrap();
        assert_eq!(e.to_string(), "sqrt(6/5*(1+(1+sqrt(5))/2))");
        assert!(parse_expr("dist(A,B)").unwrap_err().message.contains("unknown name `A`"));
        assert_eq!(parse_expr("1 2").unwrap_err().column, 3);
    }

    #[test]
    fn expression_printing_keeps_structure() {
        let src = "point A = (0,0)\npoint B = (1,0)\nunit A B\nlen a = dist(A,B)-(dist(A,B)-1)\nlen b = a/(a*2)/3\n";
        let p = parse(src).unwrap();
        let text = p.to_string();
        assert!(text.contains("len a = dist(A,B)-(dist(A,B)-1)"));
        assert!(text.contains("len b = a/(a*2)/3"));
        assert_eq!(parse(&text).unwrap(), p);
    }
}
