//! Canonical text format: `12*x0*x2 - 12*x0*q0 + 60*x0`, rational
//! coefficients as `3/4*t^2`, `*` optional between factors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::mpoly::{MPoly, Vars};
use super::ratfunc::RatFunc;
use super::PolyError;
use crate::ring::{Integers, Rationals, Ring};

pub fn format_poly<R: Ring>(p: &MPoly<R>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let ring = p.ring();
    let names = p.vars().names();
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().iter().enumerate() {
        let negative = ring.is_negative(c) == Some(true);
        let c_abs = if negative { ring.neg(c) } else { c.clone() };
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if !ring.is_one(&c_abs) || m.is_one() {
            factors.push(ring.fmt_elem(&c_abs));
        }
        for (v, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[v].clone()),
                _ => factors.push(format!("{}^{}", names[v], e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = s[start..i].parse().expect("digits parse");
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(PolyError::Parse { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

/// Values the parser can build: polynomials or rational functions.
trait Value: Sized + Clone {
    fn constant(&self, n: &BigInt) -> Self;
    fn variable(&self, name: &str) -> Result<Self, PolyError>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Result<Self, String>;
    fn neg(&self) -> Self;
    fn pow(&self, e: u32) -> Self;
}

impl Value for MPoly<Rationals> {
    fn constant(&self, n: &BigInt) -> Self {
        MPoly::constant(Rationals, self.vars().clone(), BigRational::from_integer(n.clone()))
    }
    fn variable(&self, name: &str) -> Result<Self, PolyError> {
        MPoly::var(Rationals, self.vars().clone(), name)
    }
    fn add(&self, o: &Self) -> Self {
        self.add_poly(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_poly(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_poly(o)
    }
    fn div(&self, o: &Self) -> Result<Self, String> {
        match o.constant_value() {
            Some(c) if !c.is_zero() => Ok(self.scale(&(BigRational::one() / c))),
            Some(_) => Err("division by zero".into()),
            None => Err("division by a nonconstant polynomial".into()),
        }
    }
    fn neg(&self) -> Self {
        self.neg_poly()
    }
    fn pow(&self, e: u32) -> Self {
        MPoly::pow(self, e)
    }
}

impl Value for RatFunc {
    fn constant(&self, n: &BigInt) -> Self {
        RatFunc::from_poly(MPoly::constant(Integers, self.vars().clone(), n.clone()))
    }
    fn variable(&self, name: &str) -> Result<Self, PolyError> {
        Ok(RatFunc::from_poly(MPoly::var(Integers, self.vars().clone(), name)?))
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn div(&self, o: &Self) -> Result<Self, String> {
        RatFunc::div(self, o).map_err(|e| e.to_string())
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn pow(&self, e: u32) -> Self {
        RatFunc::pow(self, e)
    }
}

struct Parser<'a, V> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    proto: &'a V,
    len: usize,
}

impl<V: Value> Parser<'_, V> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<V, PolyError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<V, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().cloned() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let at = self.offset();
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs).map_err(|msg| PolyError::Parse { pos: at, msg })?;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<V, PolyError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<V, PolyError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<V, PolyError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.proto.constant(&n))
            }
            Some(Tok::Ident(name)) => {
                let at = self.offset();
                self.pos += 1;
                self.proto.variable(&name).map_err(|e| match e {
                    PolyError::UnknownVariable(v) => {
                        PolyError::Parse { pos: at, msg: format!("unknown variable {v}") }
                    }
                    other => other,
                })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }
}

fn parse_with<V: Value>(s: &str, proto: &V) -> Result<V, PolyError> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, proto, len: s.len() };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Parses a polynomial with rational coefficients over `vars`.
pub fn parse_poly(s: &str, vars: &Vars) -> Result<MPoly<Rationals>, PolyError> {
    parse_with(s, &MPoly::zero(Rationals, vars.clone()))
}

/// Parses a polynomial whose coefficients must all be integers.
pub fn parse_int_poly(s: &str, vars: &Vars) -> Result<MPoly<Integers>, PolyError> {
    let p = parse_poly(s, vars)?;
    if p.terms().iter().any(|(_, c)| !c.is_integer()) {
        return Err(PolyError::NonIntegerCoefficient);
    }
    Ok(p.map_coeffs(Integers, |c| c.to_integer()))
}

/// Parses a quotient of polynomials, e.g. `(u+1)/v`.
pub fn parse_ratfunc(s: &str, vars: &Vars) -> Result<RatFunc, PolyError> {
    parse_with(s, &RatFunc::from_poly(MPoly::zero(Integers, vars.clone())))
}

/// Variable names in order of first appearance.
pub fn infer_vars(s: &str) -> Result<Vars, PolyError> {
    let mut names: Vec<String> = Vec::new();
    for (_, t) in tokenize(s)? {
        if let Tok::Ident(n) = t {
            if !names.contains(&n) {
                names.push(n);
            }
        }
    }
    Ok(Vars::new(&names))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let v = Vars::new(&["x0", "x2", "q0"]);
        let s = "12*x0*x2 - 12*x0*q0 + 60*x0";
        let p = parse_poly(s, &v).unwrap();
        assert_eq!(p.to_string(), s);
        let q = parse_poly("-3/4*x2^2*q0 + 1/2 - x0", &v).unwrap();
        assert_eq!(parse_poly(&q.to_string(), &v).unwrap(), q);
        assert_eq!(q.to_string(), "-x0 - 3/4*x2^2*q0 + 1/2");
    }

    #[test]
    fn optional_star_and_parentheses() {
        let v = Vars::new(&["t"]);
        let a = parse_poly("6(108t^4-120t^3+72t^2-28t+5)", &v).unwrap();
        assert_eq!(a.to_string(), "648*t^4 - 720*t^3 + 432*t^2 - 168*t + 30");
        assert_eq!(parse_poly("0", &v).unwrap().to_string(), "0");
        assert_eq!(parse_poly("(t+1)^3 - t^3", &v).unwrap().to_string(), "3*t^2 + 3*t + 1");
    }

    #[test]
    fn parse_errors() {
        let v = Vars::new(&["t"]);
        assert!(matches!(parse_poly("t + s", &v), Err(PolyError::Parse { pos: 4, .. })));
        assert!(parse_poly("1/t", &v).is_err());
        assert!(parse_poly("(t+1", &v).is_err());
        assert!(matches!(parse_int_poly("t/2", &v), Err(PolyError::NonIntegerCoefficient)));
    }
}
