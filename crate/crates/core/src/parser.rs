//! The polynomial input language and the JSON support format.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! map    := poly (";" poly)*
//! poly   := ["+"|"-"] term (("+"|"-") term)*
//! term   := [coef "*"] factor ("*" factor)*
//! factor := var ["^" nat]
//! coef   := rational | "(" rational [("+"|"-") rational "i"] ")"
//! ```
//!
//! Variables are either `x, y, z, w` (positions 1..4) or `x1..xn`; the
//! dimension is inferred from the names used unless an explicit variable
//! list is supplied. Coefficients are exact rationals or Gaussian rationals;
//! floating literals are rejected.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::coeff::GaussianRational;
use crate::expr::{AnalyticMapGerm, ExponentVector, ExprError, PolyExpr};
use crate::{rat_string, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("floating literals are not accepted (byte {position}); use exact rationals")]
    FloatLiteral { position: usize },
    #[error("unknown variable `{name}` at byte {position}")]
    UnknownVariable { position: usize, name: String },
    #[error("cannot mix named variables (x,y,z,w) with indexed variables (x1..xn)")]
    MixedVariableStyles,
    #[error("component {component}: {source}")]
    Component { component: usize, source: ExprError },
    #[error("{0}")]
    Shape(#[from] ExprError),
    #[error("JSON support format: {0}")]
    Json(String),
}

/// Parse a map germ from the polynomial input language. When `variables`
/// is given it fixes both the naming and the ambient dimension; otherwise
/// both are inferred from the variable names appearing in the text.
pub fn parse_map(text: &str, variables: Option<&[String]>) -> Result<AnalyticMapGerm, ParseError> {
    let raw = scan_components(text)?;
    let names = match variables {
        Some(list) => list.to_vec(),
        None => infer_variables(&raw)?,
    };
    let n = names.len();

    let mut components = Vec::with_capacity(raw.len());
    for (idx, component) in raw.iter().enumerate() {
        let terms = component
            .terms
            .iter()
            .map(|t| term_to_pair(t, &names, n))
            .collect::<Result<Vec<_>, _>>()?;
        let poly = PolyExpr::new(n, terms).map_err(|source| ParseError::Component {
            component: idx + 1,
            source,
        })?;
        components.push(poly);
    }
    Ok(AnalyticMapGerm::new(n, components)?)
}

/// Canonical text form: components joined by `"; "`, terms in lexicographic
/// exponent order over variables `x1..xn`. Reparsing with the same variable
/// list reproduces the value exactly.
pub fn serialize_map(germ: &AnalyticMapGerm) -> String {
    let names: Vec<String> = (1..=germ.n()).map(|i| format!("x{i}")).collect();
    germ.components()
        .iter()
        .map(|c| serialize_poly(c, &names))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Variable names matching the canonical serialization of a germ.
pub fn canonical_variables(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn serialize_poly(p: &PolyExpr, names: &[String]) -> String {
    let mut out = String::new();
    for (i, (e, c)) in p.terms().iter().enumerate() {
        let monomial: Vec<String> =
            e.0.iter()
                .enumerate()
                .filter(|&(_, &exp)| exp > 0)
                .map(|(v, &exp)| {
                    if exp == 1 {
                        names[v].clone()
                    } else {
                        format!("{}^{}", names[v], exp)
                    }
                })
                .collect();
        let mono = monomial.join("*");
        let (sign, magnitude) = coefficient_text(c);
        if i == 0 {
            if sign < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if sign < 0 { " - " } else { " + " });
        }
        match magnitude {
            Some(m) => {
                out.push_str(&m);
                out.push('*');
                out.push_str(&mono);
            }
            None => out.push_str(&mono),
        }
    }
    out
}

/// Split a coefficient into a display sign and an optional magnitude string
/// (`None` for ±1, which is absorbed into the sign).
fn coefficient_text(c: &GaussianRational) -> (i32, Option<String>) {
    use num_traits::One;
    if c.is_real() {
        let negative = c.re < Rat::zero();
        let mag = if negative {
            -c.re.clone()
        } else {
            c.re.clone()
        };
        if mag.is_one() {
            (if negative { -1 } else { 1 }, None)
        } else {
            (if negative { -1 } else { 1 }, Some(rat_string(&mag)))
        }
    } else {
        (1, Some(format!("({})", c.canonical_string())))
    }
}

// ---------------------------------------------------------------------------
// Lexing / parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Semi,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    return Err(ParseError::FloatLiteral { position: i });
                }
                let n: BigInt = text[start..i].parse().expect("digit run");
                out.push(Spanned {
                    tok: Tok::Number(n),
                    pos: start,
                });
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(text[start..i].to_string()),
                    pos: start,
                });
            }
            b'+' => push1(&mut out, Tok::Plus, &mut i),
            b'-' => push1(&mut out, Tok::Minus, &mut i),
            b'*' => push1(&mut out, Tok::Star, &mut i),
            b'^' => push1(&mut out, Tok::Caret, &mut i),
            b'/' => push1(&mut out, Tok::Slash, &mut i),
            b'(' => push1(&mut out, Tok::LParen, &mut i),
            b')' => push1(&mut out, Tok::RParen, &mut i),
            b';' => push1(&mut out, Tok::Semi, &mut i),
            b'.' => return Err(ParseError::FloatLiteral { position: i }),
            _ => {
                return Err(ParseError::Syntax {
                    position: i,
                    message: format!("unexpected character {:?}", b as char),
                })
            }
        }
    }
    Ok(out)
}

fn push1(out: &mut Vec<Spanned>, tok: Tok, i: &mut usize) {
    out.push(Spanned { tok, pos: *i });
    *i += 1;
}

/// One syntactic term: coefficient and a list of (variable name, power).
#[derive(Debug)]
struct RawTerm {
    coeff: GaussianRational,
    factors: Vec<(String, usize, u64)>, // name, position, exponent
}

#[derive(Debug)]
struct RawPoly {
    terms: Vec<RawTerm>,
}

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|s| &s.tok)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.len, |s| s.pos)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn error(&self, message: String) -> ParseError {
        ParseError::Syntax {
            position: self.pos(),
            message,
        }
    }

    fn parse_map(&mut self) -> Result<Vec<RawPoly>, ParseError> {
        let mut polys = vec![self.parse_poly()?];
        while matches!(self.peek(), Some(Tok::Semi)) {
            self.bump();
            polys.push(self.parse_poly()?);
        }
        if self.at != self.toks.len() {
            return Err(self.error("trailing input after polynomial".into()));
        }
        Ok(polys)
    }

    fn parse_poly(&mut self) -> Result<RawPoly, ParseError> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -1i32
            }
            Some(Tok::Plus) => {
                self.bump();
                1
            }
            _ => 1,
        };
        loop {
            let mut term = self.parse_term()?;
            if sign < 0 {
                term.coeff = -&term.coeff;
            }
            terms.push(term);
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    sign = 1;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    sign = -1;
                }
                _ => break,
            }
        }
        Ok(RawPoly { terms })
    }

    fn parse_term(&mut self) -> Result<RawTerm, ParseError> {
        let mut coeff = GaussianRational::one();
        let mut factors = Vec::new();
        let mut saw_factor = false;

        // Optional leading coefficient.
        match self.peek() {
            Some(Tok::Number(_)) => {
                let q = self.parse_rational()?;
                coeff = GaussianRational::from_rational(q);
                if matches!(self.peek(), Some(Tok::Star)) {
                    self.bump();
                } else {
                    // A bare rational: no factors follow. Surfaces as a
                    // constant-term error with a sensible message.
                    return Ok(RawTerm { coeff, factors });
                }
            }
            Some(Tok::LParen) => {
                coeff = self.parse_complex()?;
                self.expect(Tok::Star, "`*` after parenthesized coefficient")?;
            }
            _ => {}
        }

        loop {
            match self.peek() {
                Some(Tok::Ident(_)) => {
                    let (name, pos) = match self.bump() {
                        Some(Spanned {
                            tok: Tok::Ident(name),
                            pos,
                        }) => (name, pos),
                        _ => unreachable!(),
                    };
                    let exp = if matches!(self.peek(), Some(Tok::Caret)) {
                        self.bump();
                        match self.bump() {
                            Some(Spanned {
                                tok: Tok::Number(n),
                                ..
                            }) => u64::try_from(&n)
                                .map_err(|_| self.error("exponent too large".into()))?,
                            _ => return Err(self.error("expected exponent after `^`".into())),
                        }
                    } else {
                        1
                    };
                    factors.push((name, pos, exp));
                    saw_factor = true;
                    if matches!(self.peek(), Some(Tok::Star)) {
                        self.bump();
                        continue;
                    }
                    break;
                }
                _ if saw_factor => {
                    return Err(self.error("expected a variable factor after `*`".into()))
                }
                _ => return Err(self.error("expected a variable factor".into())),
            }
        }
        Ok(RawTerm { coeff, factors })
    }

    /// `rational := ["+"|"-"] nat ["/" nat]`
    fn parse_rational(&mut self) -> Result<Rat, ParseError> {
        let sign = match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                -1
            }
            Some(Tok::Plus) => {
                self.bump();
                1
            }
            _ => 1,
        };
        let numer = match self.bump() {
            Some(Spanned {
                tok: Tok::Number(n),
                ..
            }) => n,
            _ => return Err(self.error("expected a number".into())),
        };
        let denom = if matches!(self.peek(), Some(Tok::Slash)) {
            self.bump();
            match self.bump() {
                Some(Spanned {
                    tok: Tok::Number(n),
                    ..
                }) if !n.is_zero() => n,
                Some(Spanned {
                    tok: Tok::Number(_),
                    pos,
                }) => {
                    return Err(ParseError::Syntax {
                        position: pos,
                        message: "zero denominator".into(),
                    })
                }
                _ => return Err(self.error("expected a denominator".into())),
            }
        } else {
            BigInt::from(1)
        };
        let q = Rat::new(numer, denom);
        Ok(if sign < 0 { -q } else { q })
    }

    /// `"(" rational [("+"|"-") rational "i"] ")"` — a Gaussian rational.
    fn parse_complex(&mut self) -> Result<GaussianRational, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let re = self.parse_rational()?;
        let mut im = Rat::zero();
        if matches!(self.peek(), Some(Tok::Plus) | Some(Tok::Minus)) {
            im = self.parse_rational()?;
            match self.bump() {
                Some(Spanned {
                    tok: Tok::Ident(ref s),
                    ..
                }) if s == "i" => {}
                _ => return Err(self.error("expected `i` after imaginary part".into())),
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(GaussianRational::new(re, im))
    }
}

fn scan_components(text: &str) -> Result<Vec<RawPoly>, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        at: 0,
        len: text.len(),
    };
    parser.parse_map()
}

/// Infer the variable list from the names used in the raw terms.
fn infer_variables(polys: &[RawPoly]) -> Result<Vec<String>, ParseError> {
    let mut indexed_max = 0usize;
    let mut named_max = 0usize;
    let mut saw_indexed = false;
    let mut saw_named = false;
    for poly in polys {
        for term in &poly.terms {
            for (name, pos, _) in &term.factors {
                if let Some(idx) = indexed_variable(name) {
                    saw_indexed = true;
                    indexed_max = indexed_max.max(idx);
                } else if let Some(slot) = named_variable(name) {
                    saw_named = true;
                    named_max = named_max.max(slot);
                } else {
                    return Err(ParseError::UnknownVariable {
                        position: *pos,
                        name: name.clone(),
                    });
                }
            }
        }
    }
    if saw_indexed && saw_named {
        return Err(ParseError::MixedVariableStyles);
    }
    if saw_indexed {
        Ok((1..=indexed_max).map(|i| format!("x{i}")).collect())
    } else if saw_named {
        Ok(["x", "y", "z", "w"][..named_max]
            .iter()
            .map(|s| s.to_string())
            .collect())
    } else {
        // No factors at all: only bare constants were written.
        Err(ParseError::Shape(ExprError::ConstantTerm))
    }
}

fn indexed_variable(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('x')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let idx: usize = rest.parse().ok()?;
    if idx == 0 {
        None
    } else {
        Some(idx)
    }
}

fn named_variable(name: &str) -> Option<usize> {
    match name {
        "x" => Some(1),
        "y" => Some(2),
        "z" => Some(3),
        "w" => Some(4),
        _ => None,
    }
}

fn term_to_pair(
    term: &RawTerm,
    names: &[String],
    n: usize,
) -> Result<(ExponentVector, GaussianRational), ParseError> {
    let mut exps = vec![0u64; n];
    for (name, pos, e) in &term.factors {
        let slot =
            names
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| ParseError::UnknownVariable {
                    position: *pos,
                    name: name.clone(),
                })?;
        exps[slot] += e;
    }
    Ok((ExponentVector::new(exps), term.coeff.clone()))
}

// ---------------------------------------------------------------------------
// JSON support format
// ---------------------------------------------------------------------------

/// Parse the JSON support format:
/// `{"n": int, "components": [[[e1..en], ...], ...], "coefficients": [["a/b", ...], ...]?}`.
/// Missing coefficients default to 1; coefficient strings accept the same
/// rational and `a+bi` forms as the text grammar.
pub fn parse_support_json(text: &str) -> Result<AnalyticMapGerm, ParseError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| ParseError::Json("expected a JSON object".into()))?;
    let n = obj
        .get("n")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| ParseError::Json("missing positive integer field `n`".into()))?
        as usize;
    let comps = obj
        .get("components")
        .and_then(|v| v.as_array())
        .ok_or_else(|| ParseError::Json("missing array field `components`".into()))?;
    let coeffs = match obj.get("coefficients") {
        None => None,
        Some(v) => Some(v.as_array().ok_or_else(|| {
            ParseError::Json("`coefficients` must be an array parallel to `components`".into())
        })?),
    };
    if let Some(c) = coeffs {
        if c.len() != comps.len() {
            return Err(ParseError::Json(
                "`coefficients` length differs from `components`".into(),
            ));
        }
    }

    let mut components = Vec::with_capacity(comps.len());
    for (ci, comp) in comps.iter().enumerate() {
        let exps = comp
            .as_array()
            .ok_or_else(|| ParseError::Json(format!("component {} is not an array", ci + 1)))?;
        let mut terms = Vec::with_capacity(exps.len());
        for (ti, e) in exps.iter().enumerate() {
            let entries = e
                .as_array()
                .ok_or_else(|| ParseError::Json(format!("exponent {} is not an array", ti + 1)))?;
            if entries.len() != n {
                return Err(ParseError::Json(format!(
                    "exponent of length {} in dimension {n}",
                    entries.len()
                )));
            }
            let mut exp = Vec::with_capacity(n);
            for v in entries {
                let x = v.as_u64().ok_or_else(|| {
                    ParseError::Json("exponent entries must be non-negative integers".into())
                })?;
                exp.push(x);
            }
            let coeff = match coeffs {
                None => GaussianRational::one(),
                Some(cs) => {
                    let row = cs[ci].as_array().ok_or_else(|| {
                        ParseError::Json("coefficient rows must be arrays".into())
                    })?;
                    if row.len() != exps.len() {
                        return Err(ParseError::Json(format!(
                            "coefficient row {} length differs from its component",
                            ci + 1
                        )));
                    }
                    let s = row[ti]
                        .as_str()
                        .ok_or_else(|| ParseError::Json("coefficients must be strings".into()))?;
                    parse_coefficient_string(s)?
                }
            };
            terms.push((ExponentVector::new(exp), coeff));
        }
        let poly = PolyExpr::new(n, terms).map_err(|source| ParseError::Component {
            component: ci + 1,
            source,
        })?;
        components.push(poly);
    }
    Ok(AnalyticMapGerm::new(n, components)?)
}

/// Parse `"a/b"` or `"a/b+c/di"` (the canonical coefficient strings).
pub fn parse_coefficient_string(s: &str) -> Result<GaussianRational, ParseError> {
    let toks = lex(s)?;
    let mut p = Parser {
        toks,
        at: 0,
        len: s.len(),
    };
    let re = p.parse_rational()?;
    let mut im = Rat::zero();
    if matches!(p.peek(), Some(Tok::Plus) | Some(Tok::Minus)) {
        im = p.parse_rational()?;
        match p.bump() {
            Some(Spanned {
                tok: Tok::Ident(ref name),
                ..
            }) if name == "i" => {}
            _ => {
                return Err(ParseError::Syntax {
                    position: s.len(),
                    message: "expected `i` after imaginary part".into(),
                })
            }
        }
    }
    if p.at != p.toks.len() {
        return Err(ParseError::Syntax {
            position: p.pos(),
            message: "trailing input in coefficient".into(),
        });
    }
    Ok(GaussianRational::new(re, im))
}
