//! Exact costs: rationals extended with the two infinities, plus the small
//! arithmetic-expression language used for symbolic rule costs such as
//! `1+alpha`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Neg;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational used for every cost, probability and ratio in the crate.
pub type Rational = Ratio<i128>;

pub fn rat(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

pub fn int(value: i128) -> Rational {
    Rational::from_integer(value)
}

/// A cost in `Q ∪ {-inf, +inf}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtendedCost {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtendedCost {
    pub const ZERO: ExtendedCost = ExtendedCost::Finite(Ratio::new_raw(0, 1));

    pub fn finite(value: Rational) -> Self {
        ExtendedCost::Finite(value)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedCost::Finite(_))
    }

    pub fn as_finite(&self) -> Option<Rational> {
        match self {
            ExtendedCost::Finite(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtendedCost::Finite(v) if v.is_zero())
    }

    /// Saturating addition; `+inf + -inf` is an error.
    pub fn checked_add(self, other: ExtendedCost) -> Result<ExtendedCost> {
        use ExtendedCost::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::InfinityClash),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Finite(a), Finite(b)) => a.checked_add(&b).map(Finite).ok_or(Error::Overflow),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedCost::NegInf => f64::NEG_INFINITY,
            ExtendedCost::PosInf => f64::INFINITY,
            ExtendedCost::Finite(v) => rational_to_f64(v),
        }
    }

    /// Parses `+inf`, `-inf`, `inf`, or a plain rational (`p/q`, integer, decimal).
    pub fn parse(text: &str) -> Result<ExtendedCost> {
        match text.trim() {
            "+inf" | "inf" | "+∞" | "∞" => Ok(ExtendedCost::PosInf),
            "-inf" | "-∞" => Ok(ExtendedCost::NegInf),
            other => parse_rational(other).map(ExtendedCost::Finite),
        }
    }
}

impl PartialOrd for ExtendedCost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedCost {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtendedCost::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (NegInf, NegInf) | (PosInf, PosInf) => Ordering::Equal,
            (NegInf, _) | (_, PosInf) => Ordering::Less,
            (_, NegInf) | (PosInf, _) => Ordering::Greater,
        }
    }
}

impl From<Rational> for ExtendedCost {
    fn from(v: Rational) -> Self {
        ExtendedCost::Finite(v)
    }
}

impl fmt::Display for ExtendedCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedCost::NegInf => f.write_str("-inf"),
            ExtendedCost::PosInf => f.write_str("+inf"),
            ExtendedCost::Finite(v) => f.write_str(&format_rational(v)),
        }
    }
}

pub fn rational_to_f64(v: &Rational) -> f64 {
    v.numer().to_f64().unwrap_or(f64::NAN) / v.denom().to_f64().unwrap_or(f64::NAN)
}

/// `p/q`, or just `p` for integers.
pub fn format_rational(v: &Rational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Fixed-point rendering with `digits` fractional digits, rounding half to even.
pub fn format_decimal(v: &Rational, digits: u32) -> String {
    let scale = 10i128.pow(digits);
    let negative = v.is_negative();
    let abs = v.abs();
    let scaled_num = abs.numer() * scale;
    let (mut q, r) = scaled_num.div_rem(abs.denom());
    match (2 * r).cmp(abs.denom()) {
        Ordering::Greater => q += 1,
        Ordering::Equal if q.is_odd() => q += 1,
        _ => {}
    }
    let int_part = q / scale;
    let frac_part = q % scale;
    let sign = if negative && q != 0 { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{frac:0width$}",
            frac = frac_part,
            width = digits as usize
        )
    }
}

/// Short human rendering: exact decimal when it terminates within 6 digits,
/// otherwise `p/q`.
pub fn format_short(v: &Rational) -> String {
    if v.is_integer() {
        return v.numer().to_string();
    }
    for digits in 1..=6u32 {
        let scaled = v * int(10i128.pow(digits));
        if scaled.is_integer() {
            return format_decimal(v, digits);
        }
    }
    format_rational(v)
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.3309` or `-1.5`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::parse(format!("`{t}`"), "expected a rational (p/q or decimal)");
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| bad())?;
        let d: i128 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(Error::parse(format!("`{t}`"), "zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if frac.len() > 30 {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numer: i128 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
    let denom = 10i128.pow(frac.len() as u32);
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Arithmetic over rationals and named parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CostExpr {
    Const(ExtendedCost),
    Param(String),
    Neg(Box<CostExpr>),
    Add(Box<CostExpr>, Box<CostExpr>),
    Sub(Box<CostExpr>, Box<CostExpr>),
    Mul(Box<CostExpr>, Box<CostExpr>),
    Div(Box<CostExpr>, Box<CostExpr>),
}

impl CostExpr {
    pub fn parse(text: &str) -> Result<CostExpr> {
        let trimmed = text.trim();
        if let Ok(c) = ExtendedCost::parse(trimmed) {
            return Ok(CostExpr::Const(c));
        }
        let tokens = tokenize(trimmed)?;
        let mut parser = ExprParser { tokens, pos: 0, source: trimmed };
        let expr = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::parse(format!("`{trimmed}`"), "trailing input in cost expression"));
        }
        Ok(expr)
    }

    pub fn params(&self, out: &mut Vec<String>) {
        match self {
            CostExpr::Const(_) => {}
            CostExpr::Param(p) => out.push(p.clone()),
            CostExpr::Neg(a) => a.params(out),
            CostExpr::Add(a, b) | CostExpr::Sub(a, b) | CostExpr::Mul(a, b) | CostExpr::Div(a, b) => {
                a.params(out);
                b.params(out);
            }
        }
    }

    /// Infinities are only allowed as whole constants, never inside arithmetic.
    pub fn eval(&self, params: &BTreeMap<String, Rational>) -> Result<ExtendedCost> {
        if let CostExpr::Const(c) = self {
            return Ok(*c);
        }
        self.eval_finite(params).map(ExtendedCost::Finite)
    }

    fn eval_finite(&self, params: &BTreeMap<String, Rational>) -> Result<Rational> {
        Ok(match self {
            CostExpr::Const(ExtendedCost::Finite(v)) => *v,
            CostExpr::Const(_) => {
                return Err(Error::Validation("infinite constant inside an arithmetic expression".into()))
            }
            CostExpr::Param(name) => *params
                .get(name)
                .ok_or_else(|| Error::Validation(format!("unknown parameter `{name}`")))?,
            CostExpr::Neg(a) => a.eval_finite(params)?.neg(),
            CostExpr::Add(a, b) => a
                .eval_finite(params)?
                .checked_add(&b.eval_finite(params)?)
                .ok_or(Error::Overflow)?,
            CostExpr::Sub(a, b) => a
                .eval_finite(params)?
                .checked_sub(&b.eval_finite(params)?)
                .ok_or(Error::Overflow)?,
            CostExpr::Mul(a, b) => a
                .eval_finite(params)?
                .checked_mul(&b.eval_finite(params)?)
                .ok_or(Error::Overflow)?,
            CostExpr::Div(a, b) => {
                let d = b.eval_finite(params)?;
                if d.is_zero() {
                    return Err(Error::Validation("division by zero in cost expression".into()));
                }
                a.eval_finite(params)?.checked_div(&d).ok_or(Error::Overflow)?
            }
        })
    }
}

impl fmt::Display for CostExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CostExpr::Const(c) => write!(f, "{c}"),
            CostExpr::Param(p) => f.write_str(p),
            CostExpr::Neg(a) => write!(f, "-({a})"),
            CostExpr::Add(a, b) => write!(f, "({a}+{b})"),
            CostExpr::Sub(a, b) => write!(f, "({a}-{b})"),
            CostExpr::Mul(a, b) => write!(f, "({a}*{b})"),
            CostExpr::Div(a, b) => write!(f, "({a}/{b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(parse_rational(&s)?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::parse(format!("`{text}`"), format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct ExprParser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    source: &'a str,
}

impl ExprParser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::parse(format!("`{}`", self.source), msg.to_string())
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<CostExpr> {
        let mut lhs = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == '+' {
                CostExpr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                CostExpr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<CostExpr> {
        let mut lhs = self.factor()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = if op == '*' {
                CostExpr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                CostExpr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<CostExpr> {
        let tok = self.tokens.get(self.pos).cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match tok {
            Tok::Num(v) => Ok(CostExpr::Const(ExtendedCost::Finite(v))),
            Tok::Ident(name) => Ok(CostExpr::Param(name)),
            Tok::Op('-') => Ok(CostExpr::Neg(Box::new(self.factor()?))),
            Tok::Op('+') => self.factor(),
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.peek_op() != Some(')') {
                    return Err(self.err("missing `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Op(c) => Err(self.err(&format!("unexpected `{c}`"))),
        }
    }
}
