//! Polynomial expression language used by family files and CLI arguments.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := var | rational | '(' expr ')'
//! ```
//!
//! A rational literal is an unsigned integer, a fraction `p/q` written without
//! spaces, or a decimal such as `0.25`; all are stored exactly. The optional
//! leading minus of an `expr` is an extension of the plain grammar so that
//! normal forms such as `-3*u2^2 + ...` can be written directly.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{Polynomial, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyExpr {
    Num(Rational),
    Var(usize),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

/// Ordered list of variable names an expression may reference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Self {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    /// `q1..qk, x1..xn` and, when `has_t`, a trailing `t`.
    pub fn family(k: usize, n: usize, has_t: bool) -> Self {
        let mut names: Vec<String> = (1..=k).map(|i| format!("q{i}")).collect();
        names.extend((1..=n).map(|i| format!("x{i}")));
        if has_t {
            names.push("t".to_string());
        }
        Self { names }
    }

    /// Variables named `prefix1..prefixm`.
    pub fn indexed(prefix: &str, m: usize) -> Self {
        Self::new((1..=m).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

pub fn parse(text: &str, vars: &VarSet) -> Result<PolyExpr> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        vars,
        end: text.len(),
    };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some((tok, off)) => Err(Error::Syntax {
            offset: off,
            message: format!("unexpected {tok:?}"),
        }),
    }
}

/// Parses a family expression over `q1..qk`, `x1..xn` and optionally `t`.
pub fn parse_family(text: &str, k: usize, n: usize, has_t: bool) -> Result<PolyExpr> {
    parse(text, &VarSet::family(k, n, has_t))
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    /// A literal, and whether it was written as bare digits.
    Num(Rational, bool),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Token::Plus, start)),
            b'-' => out.push((Token::Minus, start)),
            b'*' => out.push((Token::Star, start)),
            b'^' => out.push((Token::Caret, start)),
            b'(' => out.push((Token::LParen, start)),
            b')' => out.push((Token::RParen, start)),
            b'0'..=b'9' | b'.' => {
                let (value, len) = lex_number(&text[start..], start)?;
                let digits_only = text[start..start + len].bytes().all(|b| b.is_ascii_digit());
                out.push((Token::Num(value, digits_only), start));
                i += len;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Token::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character {:?}", text[start..].chars().next().unwrap_or('?')),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

fn lex_number(s: &str, offset: usize) -> Result<(Rational, usize)> {
    let b = s.as_bytes();
    let digits = |from: usize| b[from..].iter().take_while(|c| c.is_ascii_digit()).count();
    let int_len = digits(0);
    let mut len = int_len;
    let mut value = Rational::from_integer(s[..int_len].parse::<BigInt>().unwrap_or_default());
    if len < b.len() && b[len] == b'.' {
        let frac_len = digits(len + 1);
        if int_len == 0 && frac_len == 0 {
            return Err(Error::Syntax {
                offset,
                message: "malformed number".into(),
            });
        }
        let frac = &s[len + 1..len + 1 + frac_len];
        if frac_len > 0 {
            let num: BigInt = frac.parse().expect("digits");
            let den = BigInt::from(10u32).pow(frac_len as u32);
            value += Rational::new(num, den);
        }
        len += 1 + frac_len;
    } else if len < b.len() && b[len] == b'/' {
        let den_len = digits(len + 1);
        if den_len == 0 {
            return Err(Error::Syntax {
                offset: offset + len,
                message: "expected denominator after '/'".into(),
            });
        }
        let den: BigInt = s[len + 1..len + 1 + den_len].parse().expect("digits");
        if den.is_zero() {
            return Err(Error::Syntax {
                offset: offset + len + 1,
                message: "zero denominator".into(),
            });
        }
        value /= Rational::from_integer(den);
        len += 1 + den_len;
    }
    Ok((value, len))
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    vars: &'a VarSet,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<(Token, usize)> {
        self.tokens.get(self.pos).cloned()
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.tokens.get(self.pos).is_some_and(|t| &t.0 == tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<PolyExpr> {
        let mut lhs = if self.eat(&Token::Minus) {
            PolyExpr::Neg(Box::new(self.term()?))
        } else {
            self.term()?
        };
        loop {
            if self.eat(&Token::Plus) {
                lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Token::Minus) {
                lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.factor()?;
        while self.eat(&Token::Star) {
            lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<PolyExpr> {
        let base = self.base()?;
        if !self.eat(&Token::Caret) {
            return Ok(base);
        }
        let off = self.offset();
        match self.peek() {
            Some((Token::Num(r, true), _)) => {
                let e = r.to_integer().to_u32().ok_or_else(|| Error::Syntax {
                    offset: off,
                    message: "exponent too large".into(),
                })?;
                self.pos += 1;
                Ok(PolyExpr::Pow(Box::new(base), e))
            }
            _ => Err(Error::Syntax {
                offset: off,
                message: "expected unsigned integer exponent".into(),
            }),
        }
    }

    fn base(&mut self) -> Result<PolyExpr> {
        let off = self.offset();
        match self.peek() {
            Some((Token::Num(r, _), _)) => {
                self.pos += 1;
                Ok(PolyExpr::Num(r))
            }
            Some((Token::Ident(name), _)) => {
                self.pos += 1;
                self.vars
                    .index_of(&name)
                    .map(PolyExpr::Var)
                    .ok_or(Error::UndeclaredVariable(name))
            }
            Some((Token::LParen, _)) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Token::RParen) {
                    return Err(Error::Syntax {
                        offset: self.offset(),
                        message: "expected ')'".into(),
                    });
                }
                Ok(e)
            }
            Some((tok, _)) => Err(Error::Syntax {
                offset: off,
                message: format!("unexpected {tok:?}"),
            }),
            None => Err(Error::Syntax {
                offset: off,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

impl PolyExpr {
    /// Renders the expression so that parsing the text reproduces this AST.
    pub fn to_text(&self, vars: &VarSet) -> String {
        let mut s = String::new();
        print_expr(self, vars, &mut s);
        s
    }

    /// Number of top-level additive terms.
    pub fn term_count(&self) -> usize {
        match self {
            PolyExpr::Add(a, _) | PolyExpr::Sub(a, _) => a.term_count() + 1,
            _ => 1,
        }
    }

    pub fn to_polynomial(&self, nvars: usize) -> Polynomial {
        match self {
            PolyExpr::Num(r) => Polynomial::constant(nvars, r.clone()),
            PolyExpr::Var(i) => Polynomial::var(nvars, *i),
            PolyExpr::Neg(a) => -&a.to_polynomial(nvars),
            PolyExpr::Add(a, b) => &a.to_polynomial(nvars) + &b.to_polynomial(nvars),
            PolyExpr::Sub(a, b) => &a.to_polynomial(nvars) - &b.to_polynomial(nvars),
            PolyExpr::Mul(a, b) => &a.to_polynomial(nvars) * &b.to_polynomial(nvars),
            PolyExpr::Pow(a, e) => a.to_polynomial(nvars).pow(*e),
        }
    }

    /// Exact partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize, nvars: usize) -> PolyExpr {
        PolyExpr::from_polynomial(&self.to_polynomial(nvars).partial(var))
    }

    /// Sum-of-monomials expression for a polynomial.
    pub fn from_polynomial(p: &Polynomial) -> PolyExpr {
        // Highest total degree first, then reverse lexicographic within a degree.
        let mut terms: Vec<_> = p.terms().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db) = (a.iter().sum::<u32>(), b.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut acc: Option<PolyExpr> = None;
        for (exps, c) in terms {
            let negative = c.is_negative();
            let mag = c.abs();
            let mut mono: Option<PolyExpr> = None;
            for (i, &k) in exps.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let f = if k == 1 {
                    PolyExpr::Var(i)
                } else {
                    PolyExpr::Pow(Box::new(PolyExpr::Var(i)), k)
                };
                mono = Some(match mono {
                    None => f,
                    Some(m) => PolyExpr::Mul(Box::new(m), Box::new(f)),
                });
            }
            let term = match mono {
                None => PolyExpr::Num(mag),
                Some(m) if mag.is_one() => m,
                Some(m) => PolyExpr::Mul(Box::new(PolyExpr::Num(mag)), Box::new(m)),
            };
            acc = Some(match (acc, negative) {
                (None, false) => term,
                (None, true) => PolyExpr::Neg(Box::new(term)),
                (Some(a), false) => PolyExpr::Add(Box::new(a), Box::new(term)),
                (Some(a), true) => PolyExpr::Sub(Box::new(a), Box::new(term)),
            });
        }
        acc.unwrap_or_else(|| PolyExpr::Num(Rational::zero()))
    }
}

fn print_expr(e: &PolyExpr, vars: &VarSet, out: &mut String) {
    match e {
        PolyExpr::Add(a, b) => {
            print_expr(a, vars, out);
            out.push_str(" + ");
            print_term(b, vars, out);
        }
        PolyExpr::Sub(a, b) => {
            print_expr(a, vars, out);
            out.push_str(" - ");
            print_term(b, vars, out);
        }
        PolyExpr::Neg(a) => {
            out.push('-');
            print_term(a, vars, out);
        }
        _ => print_term(e, vars, out),
    }
}

fn print_term(e: &PolyExpr, vars: &VarSet, out: &mut String) {
    match e {
        PolyExpr::Mul(a, b) => {
            print_term(a, vars, out);
            out.push('*');
            print_factor(b, vars, out);
        }
        _ => print_factor(e, vars, out),
    }
}

fn print_factor(e: &PolyExpr, vars: &VarSet, out: &mut String) {
    match e {
        PolyExpr::Pow(a, k) => {
            print_base(a, vars, out);
            let _ = write!(out, "^{k}");
        }
        _ => print_base(e, vars, out),
    }
}

fn print_base(e: &PolyExpr, vars: &VarSet, out: &mut String) {
    match e {
        PolyExpr::Var(i) => out.push_str(vars.name(*i)),
        PolyExpr::Num(r) if !r.is_negative() => {
            if r.is_integer() {
                let _ = write!(out, "{}", r.numer());
            } else {
                let _ = write!(out, "{}/{}", r.numer(), r.denom());
            }
        }
        PolyExpr::Num(r) => {
            out.push_str("(-");
            print_base(&PolyExpr::Num(-r), vars, out);
            out.push(')');
        }
        _ => {
            out.push('(');
            print_expr(e, vars, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::poly::rational;
    use proptest::prelude::*;

    #[test]
    fn parses_cubic_family_with_two_terms() {
        let e = parse_family("q1^3 + x1*q1", 1, 1, false).unwrap();
        assert_eq!(e.term_count(), 2);
    }

    #[test]
    fn parses_cusp_unfolding_with_three_terms() {
        let e = parse_family("q1^4 + x1*q1^2 + x2*q1", 1, 2, false).unwrap();
        assert_eq!(e.term_count(), 3);
        let p = e.to_polynomial(3);
        assert_eq!(p.eval(&[1.0, -6.0, 8.0]), 1.0 - 6.0 + 8.0);
    }

    #[test]
    fn undeclared_variable_is_reported_by_name() {
        assert_eq!(
            parse_family("q1 + y1", 1, 1, false),
            Err(Error::UndeclaredVariable("y1".into()))
        );
    }

    #[test]
    fn syntax_errors_carry_byte_offsets() {
        match parse_family("q1 + * x1", 1, 1, false) {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("unexpected {other:?}"),
        }
        match parse_family("q1^x1", 1, 1, false) {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_family("(q1", 1, 1, false), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_family("q1 $", 1, 1, false), Err(Error::Syntax { offset: 3, .. })));
        // exponents are bare integers, so `4/2` is not read as 2
        assert!(matches!(parse_family("q1^4/2", 1, 1, false), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_family("q1^2.0", 1, 1, false), Err(Error::Syntax { offset: 3, .. })));
    }

    #[test]
    fn rational_literals_are_exact() {
        let vars = VarSet::indexed("u", 2);
        let e = parse("2/3*u1^3 + u2", &vars).unwrap();
        let p = e.to_polynomial(2);
        assert_eq!(p.coefficient(&[3, 0]), rational(2, 3));
        let d = parse("0.75", &vars).unwrap();
        assert_eq!(d, PolyExpr::Num(rational(3, 4)));
    }

    #[test]
    fn symbolic_partial_derivative() {
        let e = parse_family("q1^3 + x1*q1", 1, 1, false).unwrap();
        let d = e.partial(0, 2);
        assert_eq!(d.to_polynomial(2).eval(&[1.0, 2.0]), 5.0);
        let vars = VarSet::family(1, 1, false);
        assert_eq!(d.to_text(&vars), "3*q1^2 + x1");
    }

    const CORPUS: &[&str] = &[
        "u2",
        "2/3*u1^3 + u2",
        "u2 - 1/2*u1",
        "3/4*u1^4 + 1/2*u1^2*u2 + u2",
        "u2^3 + u1*u2",
        "-3*u2^2 + 4*u1*u2 + u1",
        "u1^3 + u1*u2^2",
        "(u1 + u2)^3 - (u1 - u2)*(2*u1)",
        "-(u1 - u2)^2",
        "u1*(u2*u1) + ((u1^2)^3)",
        "0.125*u1 - 7",
    ];

    #[test]
    fn round_trip_on_normal_form_corpus() {
        let vars = VarSet::indexed("u", 2);
        for text in CORPUS {
            let first = parse(text, &vars).unwrap();
            let again = parse(&first.to_text(&vars), &vars).unwrap();
            assert_eq!(first, again, "{text}");
        }
    }

    fn arb_expr() -> impl Strategy<Value = PolyExpr> {
        let leaf = prop_oneof![
            (0usize..3).prop_map(PolyExpr::Var),
            (0i64..20, 1i64..5).prop_map(|(a, b)| PolyExpr::Num(rational(a, b))),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| PolyExpr::Neg(Box::new(a))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| PolyExpr::Mul(Box::new(a), Box::new(b))),
                (inner, 0u32..4).prop_map(|(a, k)| PolyExpr::Pow(Box::new(a), k)),
            ]
        })
    }

    proptest! {
        #[test]
        fn parse_print_parse_is_stable(e in arb_expr()) {
            let vars = VarSet::family(1, 1, true);
            let text = e.to_text(&vars);
            let first = parse(&text, &vars).unwrap();
            let second = parse(&first.to_text(&vars), &vars).unwrap();
            prop_assert_eq!(&first, &second);
            prop_assert_eq!(first.to_polynomial(3), e.to_polynomial(3));
        }
    }
}
