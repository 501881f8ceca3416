//! Expression grammar for generating functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' natural)?
//! base   := natural | 'x' | name | '(' expr ')' | 'sqrt' '(' expr ')'
//! ```
//!
//! There is no implicit multiplication. Names resolve through
//! [`Definitions`], which also holds fixed-point definitions.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;

use super::{solve_fixpoint, Series};
use crate::error::{Error, Result};
use crate::rat::Rat;

/// Longest accepted input, in bytes.
pub const MAX_EXPR_LEN: usize = 1 << 16;
/// Largest accepted exponent in `base ^ n`.
pub const MAX_EXPONENT: u32 = 4096;
const MAX_DEPTH: usize = 256;
/// Largest numerator or denominator, in bits, of any intermediate coefficient.
pub const MAX_COEFF_BITS: u64 = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    X,
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sqrt(Box<Expr>),
}

impl Expr {
    /// Evaluates with every symbol looked up in `env`, at working order `order`.
    ///
    /// The result may carry fewer than `order` coefficients when the
    /// expression divides by powers of `x`.
    pub fn eval(&self, order: usize, env: &dyn Fn(&str) -> Option<Series>) -> Result<Series> {
        let out = match self {
            Expr::Num(n) => Series::constant(Rat::from_integer(n.clone()), order),
            Expr::X => Series::x(order),
            Expr::Sym(name) => env(name).ok_or_else(|| Error::UnknownSymbol(name.clone()))?,
            Expr::Neg(a) => -&a.eval(order, env)?,
            Expr::Add(a, b) => &a.eval(order, env)? + &b.eval(order, env)?,
            Expr::Sub(a, b) => &a.eval(order, env)? - &b.eval(order, env)?,
            Expr::Mul(a, b) => &a.eval(order, env)? * &b.eval(order, env)?,
            Expr::Div(a, b) => {
                let (a, b) = (a.eval(order, env)?, b.eval(order, env)?);
                check_linear_growth(&b)?;
                a.div(&b)?
            }
            Expr::Pow(a, n) => {
                let a = a.eval(order, env)?;
                if coeff_bits(&a).saturating_mul(u64::from(*n)) > MAX_COEFF_BITS {
                    return Err(Error::CoefficientTooLarge(MAX_COEFF_BITS));
                }
                a.pow(*n)
            }
            Expr::Sqrt(a) => {
                let a = a.eval(order, env)?;
                check_linear_growth(&a)?;
                a.sqrt()?
            }
        };
        if coeff_bits(&out) > MAX_COEFF_BITS {
            return Err(Error::CoefficientTooLarge(MAX_COEFF_BITS));
        }
        Ok(out)
    }

    /// Evaluates and guarantees exactly `order` coefficients, raising the
    /// working order to cover coefficients lost to divisions by `x`.
    pub fn eval_to_order(&self, order: usize, env: &dyn Fn(&str) -> Option<Series>) -> Result<Series> {
        let mut work = order + 2;
        for _ in 0..6 {
            let s = self.eval(work, env)?;
            if s.order() >= order {
                return Ok(s.truncate(order));
            }
            work += (order - s.order()) + 2;
        }
        let s = self.eval(work, env)?;
        Err(Error::OrderExceeded { index: order, order: s.order() })
    }

    pub fn symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) | Expr::X => {}
            Expr::Sym(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Sqrt(a) => a.collect_symbols(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_symbols(out);
                b.collect_symbols(out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::X => write!(f, "x"),
            Expr::Sym(s) => write!(f, "{s}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a}+{b})"),
            Expr::Sub(a, b) => write!(f, "({a}-{b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Pow(a, n) => write!(f, "({a}^{n})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn coeff_bits(s: &Series) -> u64 {
    s.coeffs().iter().map(|c| c.numer().bits().max(c.denom().bits())).max().unwrap_or(0)
}

/// Reciprocals and square roots grow coefficient `k` to about `k` times the
/// size of the input.
fn check_linear_growth(s: &Series) -> Result<()> {
    if coeff_bits(s).saturating_mul(s.order() as u64) > MAX_COEFF_BITS {
        return Err(Error::CoefficientTooLarge(MAX_COEFF_BITS));
    }
    Ok(())
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("ascii digits");
                out.push((start, Tok::Num(n)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            b'+' | b'-' | b'*' | b'/' | b'^' | b'(' | b')' => {
                out.push((i, Tok::Op(c as char)));
                i += 1;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(Error::Parse { pos: i, msg: format!("unexpected character {ch:?}") });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            self.err(format!("expected '{op}'"))
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("expression nested too deeply");
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            self.enter()?;
            let inner = self.factor()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let base = self.base()?;
        if self.eat('^') {
            let n = match self.peek() {
                Some(Tok::Num(n)) => n.clone(),
                _ => return self.err("expected a natural exponent after '^'"),
            };
            let n = u32::try_from(&n).ok().filter(|&n| n <= MAX_EXPONENT);
            let Some(n) = n else {
                return self.err(format!("exponent larger than {MAX_EXPONENT}"));
            };
            self.pos += 1;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "x" => Ok(Expr::X),
                    "sqrt" => {
                        self.expect('(')?;
                        let inner = self.expr()?;
                        self.expect(')')?;
                        Ok(Expr::Sqrt(Box::new(inner)))
                    }
                    _ => Ok(Expr::Sym(name)),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(_) => self.err("expected a number, 'x', a name, '(' or 'sqrt'"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression into its syntax tree.
pub fn parse_expr(src: &str) -> Result<Expr> {
    if src.len() > MAX_EXPR_LEN {
        return Err(Error::Parse { pos: MAX_EXPR_LEN, msg: "input too long".into() });
    }
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len(), depth: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[derive(Clone, Debug)]
enum Def {
    Expr(Expr),
    Fix(Expr),
}

/// Named series, each defined by an expression over earlier names or as the
/// fixed point `name = expr(name)`.
#[derive(Clone, Debug, Default)]
pub struct Definitions {
    defs: Vec<(String, Def)>,
}

fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "x"
        && name != "sqrt";
    if ok {
        Ok(())
    } else {
        Err(Error::Parse { pos: 0, msg: format!("invalid name {name:?}") })
    }
}

impl Definitions {
    pub fn new() -> Self {
        Self::default()
    }

    /// `name = expr`, where `expr` may use previously defined names.
    pub fn define(&mut self, name: &str, expr: &str) -> Result<()> {
        check_name(name)?;
        let e = parse_expr(expr)?;
        self.check_known(&e, None)?;
        self.defs.push((name.to_string(), Def::Expr(e)));
        Ok(())
    }

    /// `name = expr(name)`, solved as a fixed point.
    pub fn define_fixpoint(&mut self, name: &str, expr: &str) -> Result<()> {
        check_name(name)?;
        let e = parse_expr(expr)?;
        self.check_known(&e, Some(name))?;
        self.defs.push((name.to_string(), Def::Fix(e)));
        Ok(())
    }

    /// Accepts `name=expr`.
    pub fn define_str(&mut self, text: &str) -> Result<()> {
        let (name, expr) = split_def(text)?;
        self.define(name, expr)
    }

    /// Accepts `name=expr` or `name: name=expr`.
    pub fn define_fixpoint_str(&mut self, text: &str) -> Result<()> {
        let (name, expr) = split_def(text)?;
        let name = match name.split_once(':') {
            Some((n, again)) if n.trim() == again.trim() => n.trim(),
            Some(_) => return Err(Error::Parse { pos: 0, msg: format!("malformed fixed-point definition {text:?}") }),
            None => name,
        };
        self.define_fixpoint(name, expr)
    }

    fn check_known(&self, e: &Expr, own: Option<&str>) -> Result<()> {
        for s in e.symbols() {
            if Some(s.as_str()) != own && !self.defs.iter().any(|(n, _)| *n == s) {
                return Err(Error::UnknownSymbol(s));
            }
        }
        Ok(())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.iter().map(|(n, _)| n.as_str())
    }

    /// Every definition evaluated to `order` coefficients, or fewer where
    /// division by a power of `x` loses some.
    pub fn evaluate(&self, order: usize) -> Result<HashMap<String, Series>> {
        self.evaluate_needed(order, |_| true)
    }

    /// Names reachable from the symbols of `e` through the definitions.
    fn dependencies(&self, e: &Expr) -> HashSet<String> {
        let mut needed: HashSet<String> = e.symbols().into_iter().collect();
        for (name, def) in self.defs.iter().rev() {
            if needed.contains(name) {
                let (Def::Expr(d) | Def::Fix(d)) = def;
                needed.extend(d.symbols());
            }
        }
        needed
    }

    fn evaluate_needed(&self, order: usize, needed: impl Fn(&str) -> bool) -> Result<HashMap<String, Series>> {
        let mut env: HashMap<String, Series> = HashMap::new();
        for (name, def) in self.defs.iter().filter(|(n, _)| needed(n)) {
            let value = match def {
                Def::Expr(e) => {
                    let lookup = |s: &str| env.get(s).cloned();
                    e.eval(order, &lookup)?
                }
                Def::Fix(e) => {
                    let outer = &env;
                    solve_fixpoint(order, |u: &Series| {
                        let lookup = |s: &str| if s == name { Some(u.clone()) } else { outer.get(s).cloned() };
                        e.eval(u.order(), &lookup)
                    })?
                }
            };
            env.insert(name.clone(), value);
        }
        Ok(env)
    }

    /// Parses `text` and evaluates it against these definitions.
    pub fn parse_series(&self, text: &str, order: usize) -> Result<Series> {
        let e = parse_expr(text)?;
        self.check_known(&e, None)?;
        let needed = self.dependencies(&e);
        let mut work = order + 4;
        let mut got = 0;
        for _ in 0..6 {
            let env = self.evaluate_needed(work, |n| needed.contains(n))?;
            let lookup = |s: &str| env.get(s).cloned();
            let s = e.eval(work, &lookup)?;
            if s.order() >= order {
                return Ok(s.truncate(order));
            }
            got = s.order();
            work += order - got + 2;
        }
        Err(Error::OrderExceeded { index: order, order: got })
    }
}

fn split_def(text: &str) -> Result<(&str, &str)> {
    match text.split_once('=') {
        Some((n, e)) => Ok((n.trim(), e.trim())),
        None => Err(Error::Parse { pos: 0, msg: format!("expected name=expr, got {text:?}") }),
    }
}

impl Series {
    /// Parses a closed-form expression in `x` to `order` coefficients.
    pub fn parse(text: &str, order: usize) -> Result<Series> {
        Definitions::new().parse_series(text, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &Series) -> Vec<i64> {
        s.to_integers().unwrap().iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn parses_basic_forms() {
        assert_eq!(ints(&Series::parse("1/(1-x)", 6).unwrap()), vec![1; 6]);
        assert_eq!(ints(&Series::parse("(1+x)/(1-x)", 5).unwrap()), vec![1, 2, 2, 2, 2]);
        assert_eq!(ints(&Series::parse("(1-x)^2", 4).unwrap()), vec![1, -2, 1, 0]);
        assert_eq!(ints(&Series::parse("-x + 2*x^2", 4).unwrap()), vec![0, -1, 2, 0]);
        assert_eq!(ints(&Series::parse("2 - -x", 3).unwrap()), vec![2, 1, 0]);
    }

    #[test]
    fn precedence() {
        // 1 - x*x^2/x  ==  1 - x^2
        assert_eq!(ints(&Series::parse("1-x*x^2/x", 5).unwrap()), vec![1, 0, -1, 0, 0]);
        assert_eq!(ints(&Series::parse("2*3-4/2", 2).unwrap()), vec![4, 0]);
    }

    #[test]
    fn radical_forms_cancel_x() {
        let c = Series::parse("(1-sqrt(1-4*x))/(2*x)", 7).unwrap();
        assert_eq!(ints(&c), vec![1, 1, 2, 5, 14, 42, 132]);
        let s = Series::parse("(1-x-sqrt(1-6*x+x^2))/(2*x)", 5).unwrap();
        assert_eq!(ints(&s), vec![1, 2, 6, 22, 90]);
        let m = Series::parse("(1-x-sqrt(1-2*x-3*x^2))/(2*x^2)", 8).unwrap();
        assert_eq!(ints(&m), vec![1, 1, 2, 4, 9, 21, 51, 127]);
    }

    #[test]
    fn errors() {
        assert!(matches!(Series::parse("1/x", 4), Err(Error::ZeroConstantTerm)));
        assert!(matches!(Series::parse("sqrt(2+x)", 4), Err(Error::NotASquare(_))));
        assert!(matches!(Series::parse("2x", 4), Err(Error::Parse { .. })));
        assert!(matches!(Series::parse("(1+x", 4), Err(Error::Parse { .. })));
        assert!(matches!(Series::parse("x^y", 4), Err(Error::Parse { .. })));
        assert!(matches!(Series::parse("", 4), Err(Error::Parse { .. })));
        assert!(matches!(Series::parse("1 $ 2", 4), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(Series::parse("c + 1", 4), Err(Error::UnknownSymbol(_))));
        assert!(matches!(Series::parse("x^99999", 4), Err(Error::Parse { .. })));
        assert!(matches!(Series::parse("1/(x-x)", 4), Err(Error::ZeroConstantTerm)));
    }

    #[test]
    fn coefficient_growth_is_bounded() {
        assert!(matches!(Series::parse("1000^4000", 4), Err(Error::CoefficientTooLarge(_))));
        let slow = "(1-x+597679822)/(1+1010+3162255555575505555-8+31622^112/110/(1+x-8888888)^318)+x";
        assert!(matches!(Series::parse(slow, 8), Err(Error::CoefficientTooLarge(_))));
        assert_eq!(Series::parse("2^4096", 1).unwrap().constant_term(), Rat::from_integer(BigInt::from(2).pow(4096)));
    }

    #[test]
    fn deep_nesting_is_rejected() {
        let src = format!("{}x{}", "(".repeat(1000), ")".repeat(1000));
        assert!(matches!(parse_expr(&src), Err(Error::Parse { .. })));
        let src = "-".repeat(1000) + "x";
        assert!(matches!(parse_expr(&src), Err(Error::Parse { .. })));
    }

    #[test]
    fn named_definitions() {
        let mut d = Definitions::new();
        d.define_str("c = (1-sqrt(1-4*x))/(2*x)").unwrap();
        d.define_str("cc = c^2").unwrap();
        let s = d.parse_series("cc - 1", 6).unwrap();
        assert_eq!(ints(&s), vec![0, 2, 5, 14, 42, 132]);
        assert!(matches!(d.define_str("bad = nope*x"), Err(Error::UnknownSymbol(_))));
        assert!(d.define_str("x = 1").is_err());
        assert!(d.define_str("no equals").is_err());
    }

    #[test]
    fn fixpoint_definitions() {
        let mut d = Definitions::new();
        d.define_fixpoint_str("t: t = 1 + x*t^3").unwrap();
        assert_eq!(ints(&d.parse_series("t", 7).unwrap()), vec![1, 1, 3, 12, 55, 273, 1428]);
        let mut d = Definitions::new();
        d.define_fixpoint_str("u = x + x*u + u^2").unwrap();
        d.define_str("s = u/x").unwrap();
        assert_eq!(ints(&d.parse_series("s", 7).unwrap()), vec![1, 2, 6, 22, 90, 394, 1806]);
        assert!(Definitions::new().define_fixpoint_str("a: b = a").is_err());
    }

    #[test]
    fn display_round_trips_through_parser() {
        let e = parse_expr("(1-x-sqrt(1-6*x+x^2))/(2*x) - -3").unwrap();
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }
}
