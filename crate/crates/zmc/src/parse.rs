//! Text inputs: holomorphic expressions, Weierstrass data files and
//! `key = value` configuration files.
//!
//! Expression grammar (whitespace is insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary | unary)*      juxtaposition multiplies
//! unary   := ('+' | '-') unary | power
//! power   := atom ('^' ['-'] integer | '^' '(' ['-'] integer ')')?
//! atom    := number | 'w' | 'i' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//! func    := exp | log | ln | sin | cos | sinh | cosh
//! ```
//!
//! Only integer exponents are accepted; anything else would need a branch
//! choice the data file cannot express.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};

use thiserror::Error;
use zmc_core::holofn::HoloError;
use zmc_core::weierstrass::ClosedForms;
use zmc_core::{DomainSpec, HoloExpr, WeierstrassData, C64};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ParseError {
    #[error("column {col}: {msg}")]
    Expr { col: usize, msg: String },
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("closed forms need all of h, g and T")]
    PartialClosedForms,
    #[error("key `{key}`: {msg}")]
    Value { key: String, msg: String },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let ch = chars[k];
        let col = k + 1;
        if ch.is_whitespace() {
            k += 1;
        } else if ch.is_ascii_digit() || (ch == '.' && chars.get(k + 1).is_some_and(|c| c.is_ascii_digit())) {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            // An exponent needs a digit after `e` (and an optional sign),
            // so `2e` still reads as `2·e`.
            if k < chars.len() && (chars[k] == 'e' || chars[k] == 'E') {
                let mut j = k + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    k = j;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                }
            }
            let text: String = chars[start..k].iter().collect();
            let v = text.parse::<f64>().map_err(|_| ParseError::Expr {
                col,
                msg: format!("malformed number `{text}`"),
            })?;
            out.push((col, Tok::Num(v)));
        } else if ch.is_ascii_alphabetic() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_alphanumeric() {
                k += 1;
            }
            out.push((col, Tok::Ident(chars[start..k].iter().collect())));
        } else if "+-*/^()".contains(ch) {
            out.push((col, Tok::Op(ch)));
            k += 1;
        } else {
            return Err(ParseError::Expr {
                col,
                msg: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Expr {
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<(), ParseError> {
        if self.eat(op) {
            Ok(())
        } else {
            self.err(format!("expected `{op}`"))
        }
    }

    fn expr(&mut self) -> Result<HoloExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc + self.term()?;
            } else if self.eat('-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Op('(')))
    }

    fn term(&mut self) -> Result<HoloExpr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc * self.unary()?;
            } else if self.eat('/') {
                acc = acc / self.unary()?;
            } else if self.starts_atom() {
                acc = acc * self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<HoloExpr, ParseError> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn integer(&mut self) -> Result<i32, ParseError> {
        let neg = self.eat('-');
        match self.peek() {
            Some(&Tok::Num(v)) if v.fract() == 0.0 && v.abs() <= 4096.0 => {
                self.pos += 1;
                Ok(if neg { -(v as i32) } else { v as i32 })
            }
            _ => self.err("exponent must be an integer literal"),
        }
    }

    fn power(&mut self) -> Result<HoloExpr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let n = if self.eat('(') {
            let n = self.integer()?;
            self.expect(')')?;
            n
        } else {
            self.integer()?
        };
        if self.peek() == Some(&Tok::Op('^')) {
            return self.err("chained exponents are ambiguous; add parentheses");
        }
        Ok(base.powi(n))
    }

    fn atom(&mut self) -> Result<HoloExpr, ParseError> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of expression");
        };
        match tok {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(HoloExpr::real(v))
            }
            Tok::Op('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Op(op) => self.err(format!("unexpected `{op}`")),
            Tok::Ident(name) => {
                self.pos += 1;
                match name.as_str() {
                    "w" | "z" => Ok(HoloExpr::var()),
                    "i" => Ok(HoloExpr::constant(C64::new(0.0, 1.0))),
                    "pi" => Ok(HoloExpr::real(PI)),
                    "e" => Ok(HoloExpr::real(E)),
                    "exp" | "log" | "ln" | "sin" | "cos" | "sinh" | "cosh" => {
                        self.expect('(')?;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        Ok(apply(&name, arg))
                    }
                    _ => {
                        self.pos -= 1;
                        self.err(format!("unknown identifier `{name}`"))
                    }
                }
            }
        }
    }
}

fn apply(name: &str, arg: HoloExpr) -> HoloExpr {
    let i = HoloExpr::constant(C64::new(0.0, 1.0));
    let half = HoloExpr::real(0.5);
    match name {
        "exp" => arg.exp(),
        "log" | "ln" => arg.ln(),
        "sinh" => half * (arg.clone().exp() - (-arg).exp()),
        "cosh" => half * (arg.clone().exp() + (-arg).exp()),
        "sin" => {
            let iz = i * arg;
            HoloExpr::constant(C64::new(0.0, -0.5)) * (iz.clone().exp() - (-iz).exp())
        }
        "cos" => {
            let iz = i * arg;
            half * (iz.clone().exp() + (-iz).exp())
        }
        _ => unreachable!("function names are matched by the caller"),
    }
}

/// Parse a holomorphic expression in the variable `w`.
pub fn parse_expr(src: &str) -> Result<HoloExpr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        end: src.chars().count() + 1,
        toks,
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// `key = value` lines; `#` starts a comment and repeated keys are errors.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, (usize, String)>, ParseError> {
    let mut out = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ParseError::Line {
                line,
                msg: "expected `key = value`".into(),
            });
        };
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(ParseError::Line {
                line,
                msg: "empty key".into(),
            });
        }
        if out.insert(key.clone(), (line, value.trim().to_string())).is_some() {
            return Err(ParseError::Line {
                line,
                msg: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(out)
}

fn parse_f64(key: &str, s: &str) -> Result<f64, ParseError> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ParseError::Value {
            key: key.into(),
            msg: format!("`{s}` is not a finite number"),
        })
}

fn parse_point(key: &str, s: &str) -> Result<C64, ParseError> {
    let (a, b) = s.split_once(',').ok_or_else(|| ParseError::Value {
        key: key.into(),
        msg: format!("`{s}` is not a point `x,y`"),
    })?;
    Ok(C64::new(parse_f64(key, a)?, parse_f64(key, b)?))
}

fn holo_value(key: &str, e: HoloError) -> ParseError {
    ParseError::Value {
        key: key.into(),
        msg: e.to_string(),
    }
}

/// `disk R`, `halfplane W H delta` or `polygon x,y x,y ...`, with an optional
/// basepoint (the polygon default is the vertex centroid).
pub fn parse_domain(s: &str, base: Option<C64>) -> Result<DomainSpec, ParseError> {
    let mut words = s.split_whitespace();
    let kind = words.next().unwrap_or("");
    let rest: Vec<&str> = words.collect();
    let bad = |msg: &str| ParseError::Value {
        key: "domain".into(),
        msg: msg.into(),
    };
    let spec = match kind {
        "disk" => {
            if rest.len() != 1 {
                return Err(bad("expected `disk R`"));
            }
            DomainSpec::disk(parse_f64("domain", rest[0])?).map_err(|e| holo_value("domain", e))?
        }
        "halfplane" => {
            if rest.len() != 3 {
                return Err(bad("expected `halfplane W H delta`"));
            }
            let v: Vec<f64> = rest.iter().map(|x| parse_f64("domain", x)).collect::<Result<_, _>>()?;
            DomainSpec::half_plane(v[0], v[1], v[2]).map_err(|e| holo_value("domain", e))?
        }
        "polygon" => {
            let verts: Vec<C64> = rest.iter().map(|x| parse_point("domain", x)).collect::<Result<_, _>>()?;
            if verts.len() < 3 {
                return Err(bad("a polygon needs at least three vertices"));
            }
            let n = verts.len() as f64;
            let b = base.unwrap_or_else(|| verts.iter().sum::<C64>() / n);
            return DomainSpec::polygon(verts, b).map_err(|e| holo_value("domain", e));
        }
        _ => return Err(bad("expected `disk`, `halfplane` or `polygon`")),
    };
    match base {
        Some(b) => spec.with_base(b).map_err(|e| holo_value("base", e)),
        None => Ok(spec),
    }
}

/// A data file after parsing, before validation of `(F, G)`.
#[derive(Clone, Debug)]
pub struct DataFile {
    pub f: HoloExpr,
    pub g: HoloExpr,
    pub domain: DomainSpec,
    pub closed: Option<ClosedForms>,
}

const DATA_KEYS: [&str; 7] = ["F", "G", "domain", "base", "h", "g", "T"];

/// Parse a data file:
///
/// ```text
/// F = 4/(1 - w^4)
/// G = w
/// domain = disk 0.9
/// base = 0,0            # optional
/// h = ...               # optional closed forms, all three or none
/// g = ...
/// T = ...
/// ```
pub fn parse_data_file(text: &str) -> Result<DataFile, ParseError> {
    let kv = parse_key_values(text)?;
    for (key, (line, _)) in &kv {
        if !DATA_KEYS.contains(&key.as_str()) {
            return Err(ParseError::Line {
                line: *line,
                msg: format!("unknown key `{key}`"),
            });
        }
    }
    let expr = |key: &'static str| -> Result<Option<HoloExpr>, ParseError> {
        kv.get(key)
            .map(|(line, v)| {
                parse_expr(v).map_err(|e| ParseError::Line {
                    line: *line,
                    msg: format!("{key}: {e}"),
                })
            })
            .transpose()
    };
    let f = expr("F")?.ok_or(ParseError::MissingKey("F"))?;
    let g = expr("G")?.ok_or(ParseError::MissingKey("G"))?;
    let (_, dom) = kv.get("domain").ok_or(ParseError::MissingKey("domain"))?;
    let base = kv.get("base").map(|(_, b)| parse_point("base", b)).transpose()?;
    let domain = parse_domain(dom, base)?;
    let closed = match (expr("h")?, expr("g")?, expr("T")?) {
        (Some(h), Some(g), Some(t)) => Some(ClosedForms { h, g, t }),
        (None, None, None) => None,
        _ => return Err(ParseError::PartialClosedForms),
    };
    Ok(DataFile { f, g, domain, closed })
}

impl DataFile {
    pub fn build(self) -> Result<WeierstrassData, zmc_core::weierstrass::DataError> {
        let data = WeierstrassData::new(self.f, self.g, self.domain)?;
        match self.closed {
            Some(forms) => data.with_closed_forms(forms),
            None => Ok(data),
        }
    }
}
