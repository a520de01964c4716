//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := base ('^' exponent)?
//! base     := number | 'i' | identifier | call | '(' expr ')' | '-' factor
//! call     := ('exp'|'log'|'sqrt'|'conj') '(' expr ')'
//! exponent := integer | '(' integer '/' integer ')'
//! ```
//!
//! Signed integers are accepted in exponents, and `(k)` as well as `(p/q)`.
//! `#` starts a comment running to the end of the line.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::expr::Expr;
use super::rational::CRational;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => *offset,
        }
    }
}

const RESERVED: [&str; 5] = ["i", "exp", "log", "sqrt", "conj"];

/// Names the parser resolves: coordinate symbols, aliases and parameters.
#[derive(Clone, Debug)]
pub struct Vocabulary {
    symbols: HashMap<String, Expr>,
    params: HashSet<String>,
}

impl Vocabulary {
    pub fn empty() -> Self {
        Vocabulary {
            symbols: HashMap::new(),
            params: HashSet::new(),
        }
    }

    /// `x1..x4` plus the complex aliases `z1 = x1 + i·x2`, `z2 = x3 + i·x4`,
    /// `z1b`, `z2b` (conjugates) and `v = z1 + z1b = 2·x1`.
    pub fn standard() -> Self {
        let mut v = Vocabulary::empty();
        for k in 1..=4u8 {
            v.symbols.insert(format!("x{k}"), Expr::x(k));
        }
        let i = Expr::imag_unit();
        let z1 = &Expr::x(1) + &(&i * &Expr::x(2));
        let z2 = &Expr::x(3) + &(&i * &Expr::x(4));
        v.symbols.insert("z1b".into(), z1.conj());
        v.symbols.insert("z2b".into(), z2.conj());
        v.symbols.insert("z1".into(), z1);
        v.symbols.insert("z2".into(), z2);
        v.symbols.insert("v".into(), Expr::x(1).scale(&CRational::int(2)));
        v
    }

    /// Coordinates renamed, e.g. `["x", "y", "z", "q"]` for a chart.
    pub fn chart(names: [&str; 4]) -> Self {
        let mut v = Vocabulary::empty();
        for (k, name) in names.iter().enumerate() {
            v.symbols.insert((*name).to_owned(), Expr::x(k as u8 + 1));
        }
        v
    }

    pub fn with_symbol(mut self, name: &str, value: Expr) -> Self {
        self.symbols.insert(name.to_owned(), value);
        self
    }

    pub fn with_params<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        for n in names {
            self.params.insert(n.as_ref().to_owned());
        }
        self
    }

    pub fn is_known(&self, name: &str) -> bool {
        self.symbols.contains_key(name) || self.params.contains(name) || RESERVED.contains(&name)
    }

    fn resolve(&self, name: &str) -> Option<Expr> {
        if let Some(e) = self.symbols.get(name) {
            return Some(e.clone());
        }
        self.params.contains(name).then(|| Expr::param(name))
    }
}

/// Parse `text` with the standard vocabulary plus the given parameter names.
pub fn parse_expression(text: &str, known_parameters: &[&str]) -> Result<Expr, ParseError> {
    parse_with(text, &Vocabulary::standard().with_params(known_parameters))
}

pub fn parse_with(text: &str, vocab: &Vocabulary) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, vocab };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        _ => Err(p.error("unexpected trailing input")),
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == '#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            let (value, end) = scan_number(text, i)?;
            out.push((Tok::Num(value), start));
            i = end;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_owned()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap();
            return Err(ParseError::Syntax {
                offset: i,
                message: format!("unexpected character `{ch}`"),
            });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Exact decimal → rational, with optional exponent.
fn scan_number(text: &str, start: usize) -> Result<(BigRational, usize), ParseError> {
    let bytes = text.as_bytes();
    let mut i = start;
    let mut digits = String::new();
    let mut frac_len: i64 = 0;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        digits.push(bytes[i] as char);
        i += 1;
    }
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            digits.push(bytes[i] as char);
            frac_len += 1;
            i += 1;
        }
    }
    let mut exp10: i64 = 0;
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        let mut neg = false;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            neg = bytes[j] == b'-';
            j += 1;
        }
        let estart = j;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j == estart {
            return Err(ParseError::Syntax {
                offset: i,
                message: "malformed exponent in number".into(),
            });
        }
        exp10 = text[estart..j].parse::<i64>().map_err(|_| ParseError::Syntax {
            offset: estart,
            message: "exponent too large".into(),
        })?;
        if neg {
            exp10 = -exp10;
        }
        i = j;
    }
    let mantissa: BigInt = digits.parse().map_err(|_| ParseError::Syntax {
        offset: start,
        message: "malformed number".into(),
    })?;
    let shift = exp10 - frac_len;
    if shift.unsigned_abs() > 4096 {
        return Err(ParseError::Syntax {
            offset: start,
            message: "number exponent out of range".into(),
        });
    }
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    let value = if shift >= 0 {
        BigRational::from_integer(mantissa * scale)
    } else {
        BigRational::new(mantissa, scale)
    };
    Ok((value, i))
}

struct Parser<'v> {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    vocab: &'v Vocabulary,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: &str) -> ParseError {
        let found = match self.peek() {
            Tok::End => "end of input".to_owned(),
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Op(c) => format!("`{c}`"),
        };
        ParseError::Syntax {
            offset: self.offset(),
            message: format!("{message}, found {found}"),
        }
    }

    fn expect_op(&mut self, op: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Op(op) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{op}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Tok::Op('/') => {
                    self.bump();
                    acc = &acc / &self.factor()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Op('-') {
            // unary minus binds looser than '^': -x^2 = -(x^2)
            self.bump();
            return Ok(-&self.factor()?);
        }
        let base = self.base()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exponent = self.exponent()?;
            return Ok(base.pow(exponent));
        }
        Ok(base)
    }

    fn signed_integer(&mut self) -> Result<BigInt, ParseError> {
        let neg = if *self.peek() == Tok::Op('-') {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Num(n) if n.is_integer() => {
                self.bump();
                let k = n.to_integer();
                Ok(if neg { -k } else { k })
            }
            _ => Err(self.error("expected integer exponent")),
        }
    }

    fn exponent(&mut self) -> Result<BigRational, ParseError> {
        if *self.peek() == Tok::Op('(') {
            self.bump();
            let num = self.signed_integer()?;
            let den = if *self.peek() == Tok::Op('/') {
                self.bump();
                let at = self.offset();
                let d = self.signed_integer()?;
                if d.is_zero() {
                    return Err(ParseError::Syntax {
                        offset: at,
                        message: "zero denominator in exponent".into(),
                    });
                }
                d
            } else {
                BigInt::one()
            };
            self.expect_op(')')?;
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(self.signed_integer()?))
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::constant(CRational::real(n)))
            }
            Tok::Op('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Tok::Op('-') => {
                self.bump();
                Ok(-&self.factor()?)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "i" => Ok(Expr::imag_unit()),
                    "exp" | "log" | "sqrt" | "conj" => {
                        self.expect_op('(')?;
                        let arg = self.expr()?;
                        self.expect_op(')')?;
                        Ok(match name.as_str() {
                            "exp" => arg.exp(),
                            "log" => arg.log(),
                            "sqrt" => arg.sqrt(),
                            _ => arg.conj(),
                        })
                    }
                    _ => self
                        .vocab
                        .resolve(&name)
                        .ok_or(ParseError::UnknownIdentifier { name, offset: at }),
                }
            }
            _ => Err(self.error("expected an operand")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::{evaluate, Point};

    fn at(e: &Expr, x: [f64; 4]) -> num_complex::Complex64 {
        evaluate(e, &Point::new(x)).unwrap()
    }

    #[test]
    fn alias_expansion_matches_real_form() {
        let a = parse_expression("v - 2*z2*z2b", &[]).unwrap();
        let b = parse_expression("2*x1 - 2*(x3^2 + x4^2)", &[]).unwrap();
        for x in [[1.0, 0.3, -0.2, 0.7], [0.1, 2.0, 1.5, -1.0]] {
            assert!((at(&a, x) - at(&b, x)).norm() < 1e-14);
        }
    }

    #[test]
    fn syntax_error_offset() {
        let err = parse_expression("x1 +* 2", &[]).unwrap_err();
        assert_eq!(err.offset(), 4, "{err}");
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn unknown_identifier() {
        let err = parse_expression("x1 + w", &[]).unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownIdentifier {
                name: "w".into(),
                offset: 5
            }
        );
        assert!(parse_expression("x1 + w", &["w"]).is_ok());
    }

    #[test]
    fn exact_decimals_and_exponents() {
        let e = parse_expression("0.25 * 4", &[]).unwrap();
        assert!(e.is_one());
        let e = parse_expression("1e-9 * 1e9", &[]).unwrap();
        assert!(e.is_one());
        let e = parse_expression("x1^(1/2) * x1^(-1/2)", &[]).unwrap();
        assert!(e.is_one());
        let e = parse_expression("sqrt(x1)^2", &[]).unwrap();
        assert_eq!(e, Expr::x(1));
    }

    #[test]
    fn comments_and_unary_minus() {
        let e = parse_expression("-x1^2 # trailing comment", &[]).unwrap();
        assert_eq!(at(&e, [3.0, 0.0, 0.0, 0.0]).re, -9.0);
        let e = parse_expression("2 * -x1", &[]).unwrap();
        assert_eq!(at(&e, [3.0, 0.0, 0.0, 0.0]).re, -6.0);
    }

    #[test]
    fn conj_call() {
        let e = parse_expression("conj(i*exp(i*phi))", &["phi"]).unwrap();
        let p = Point::new([0.0; 4]).with_param("phi", 0.4);
        let v = evaluate(&e, &p).unwrap();
        let expect = num_complex::Complex64::new(0.0, -1.0) * num_complex::Complex64::new(0.0, -0.4).exp();
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn chart_vocabulary() {
        let v = Vocabulary::chart(["x", "y", "z", "q"]);
        let e = parse_with("x^2 + y", &v).unwrap();
        assert_eq!(at(&e, [2.0, 1.0, 0.0, 0.0]).re, 5.0);
        assert!(parse_with("x1", &v).is_err());
    }
}
