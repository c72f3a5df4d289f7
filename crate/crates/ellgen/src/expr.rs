//! The manifold mini-language.
//!
//! Grammar (left-associative `x` and `*`, integer/rational scalars,
//! parentheses):
//!
//!   expr    := term (('+' | '-') term)*
//!   term    := unary (('x' | '*') unary)*
//!   unary   := '-' unary | power
//!   power   := atom ('^' int)?
//!   atom    := scalar | 'P' '(' int ')' | 'K3' | 'S6' | 'X4'
//!            | 'TW' '(' 'Z' '=' expr ';' 'A' '=' lines ';' 'B' '=' lines ')'
//!            | '(' expr ')'
//!   lines   := line '+' line
//!   line    := 'O' '(' int (',' int)* ')'
//!   scalar  := int ('/' int)?
//!
//! `x` and `*` both denote multiplication: scalars scale, manifolds form
//! product manifolds, and anything mixed with a bordism vector multiplies
//! through the bordism ring. Sums and differences are vector operations and
//! require equal dimensions.

use crate::bordism::{bordism_product, k3_vector, s6_vector, x4_vector, BordismVector, Manifold};
use crate::cohomology::{CohElement, LineData, MPoly};
use crate::flops::{twisted_bundle, FlopInstance};
use crate::series::{rat_int, Rational};
use num::One;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Semantic(String),
}

/// The value of a manifold expression.
#[derive(Debug, Clone)]
pub enum ExprValue {
    Scalar(Rational),
    Manifold(Manifold),
    Vector(BordismVector),
}

impl ExprValue {
    /// The bordism vector the expression denotes.
    pub fn to_vector(&self) -> Result<BordismVector, ExprError> {
        match self {
            ExprValue::Scalar(_) => Err(ExprError::Semantic(
                "expression denotes a scalar, not a bordism class".into(),
            )),
            ExprValue::Manifold(m) => Ok(m.chern_numbers()),
            ExprValue::Vector(v) => Ok(v.clone()),
        }
    }

    /// The underlying manifold, when the expression is purely geometric.
    pub fn as_manifold(&self) -> Option<&Manifold> {
        match self {
            ExprValue::Manifold(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Semi,
    Comma,
    Eq,
}

fn lex(input: &str) -> Result<Vec<Tok>, ExprError> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                out.push(Tok::RParen);
            }
            '+' => {
                chars.next();
                out.push(Tok::Plus);
            }
            '-' => {
                chars.next();
                out.push(Tok::Minus);
            }
            '*' => {
                chars.next();
                out.push(Tok::Star);
            }
            '/' => {
                chars.next();
                out.push(Tok::Slash);
            }
            '^' => {
                chars.next();
                out.push(Tok::Caret);
            }
            ';' => {
                chars.next();
                out.push(Tok::Semi);
            }
            ',' => {
                chars.next();
                out.push(Tok::Comma);
            }
            '=' => {
                chars.next();
                out.push(Tok::Eq);
            }
            '0'..='9' => {
                let mut n = 0i64;
                while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(d as i64))
                        .ok_or_else(|| ExprError::Parse("integer literal overflow".into()))?;
                    chars.next();
                }
                out.push(Tok::Int(n));
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(s));
            }
            other => {
                return Err(ExprError::Parse(format!("unexpected character '{}'", other)));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), ExprError> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(ExprError::Parse(format!(
                "expected {:?}, found {:?}",
                t, got
            ))),
        }
    }

    fn expect_int(&mut self) -> Result<i64, ExprError> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            got => Err(ExprError::Parse(format!("expected integer, found {:?}", got))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ExprError> {
        match self.next() {
            Some(Tok::Ident(ref s)) if s == kw => Ok(()),
            got => Err(ExprError::Parse(format!(
                "expected '{}', found {:?}",
                kw, got
            ))),
        }
    }

    fn parse_expr(&mut self) -> Result<ExprValue, ExprError> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    acc = add_values(&acc, &rhs, false)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    acc = add_values(&acc, &rhs, true)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<ExprValue, ExprError> {
        let mut acc = self.parse_unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    acc = mul_values(&acc, &rhs)?;
                }
                Some(Tok::Ident(s)) if s == "x" => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    acc = mul_values(&acc, &rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_unary(&mut self) -> Result<ExprValue, ExprError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            let v = self.parse_unary()?;
            return mul_values(&ExprValue::Scalar(rat_int(-1)), &v);
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<ExprValue, ExprError> {
        let base = self.parse_atom()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.pos += 1;
            let e = self.expect_int()?;
            if e < 0 {
                return Err(ExprError::Parse("negative exponent".into()));
            }
            return power_value(&base, e as u32);
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<ExprValue, ExprError> {
        match self.next() {
            Some(Tok::Int(n)) => {
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.pos += 1;
                    let d = self.expect_int()?;
                    if d == 0 {
                        return Err(ExprError::Parse("zero denominator".into()));
                    }
                    Ok(ExprValue::Scalar(Rational::new(n.into(), d.into())))
                } else {
                    Ok(ExprValue::Scalar(rat_int(n)))
                }
            }
            Some(Tok::LParen) => {
                let v = self.parse_expr()?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "P" => {
                    self.expect(Tok::LParen)?;
                    let n = self.expect_int()?;
                    self.expect(Tok::RParen)?;
                    if !(0..=16).contains(&n) {
                        return Err(ExprError::Semantic(format!(
                            "P({}) out of the supported range 0..=16",
                            n
                        )));
                    }
                    Ok(ExprValue::Manifold(Manifold::projective_space(n as u32)))
                }
                "K3" => Ok(ExprValue::Vector(k3_vector())),
                "S6" => Ok(ExprValue::Vector(s6_vector())),
                "X4" => Ok(ExprValue::Vector(x4_vector())),
                "TW" => self.parse_twisted(),
                other => Err(ExprError::Parse(format!("unknown name '{}'", other))),
            },
            got => Err(ExprError::Parse(format!("unexpected token {:?}", got))),
        }
    }

    fn parse_twisted(&mut self) -> Result<ExprValue, ExprError> {
        self.expect(Tok::LParen)?;
        self.expect_keyword("Z")?;
        self.expect(Tok::Eq)?;
        let z = self.parse_expr()?;
        let base = match z {
            ExprValue::Manifold(m) => m,
            _ => {
                return Err(ExprError::Semantic(
                    "the base of TW must be a manifold expression".into(),
                ))
            }
        };
        if base.space.n_layers() != 0 {
            return Err(ExprError::Semantic(
                "the base of TW must be a product of projective spaces".into(),
            ));
        }
        self.expect(Tok::Semi)?;
        self.expect_keyword("A")?;
        self.expect(Tok::Eq)?;
        let a = self.parse_lines(&base)?;
        self.expect(Tok::Semi)?;
        self.expect_keyword("B")?;
        self.expect(Tok::Eq)?;
        let b = self.parse_lines(&base)?;
        self.expect(Tok::RParen)?;
        let inst = FlopInstance::new(base, a, b);
        Ok(ExprValue::Manifold(twisted_bundle(&inst)))
    }

    fn parse_lines(&mut self, base: &Manifold) -> Result<[LineData; 2], ExprError> {
        let first = self.parse_line(base)?;
        self.expect(Tok::Plus)?;
        let second = self.parse_line(base)?;
        Ok([first, second])
    }

    fn parse_line(&mut self, base: &Manifold) -> Result<LineData, ExprError> {
        self.expect_keyword("O")?;
        self.expect(Tok::LParen)?;
        let mut degrees = Vec::new();
        loop {
            let sign = if matches!(self.peek(), Some(Tok::Minus)) {
                self.pos += 1;
                -1
            } else {
                1
            };
            degrees.push(sign * self.expect_int()?);
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => break,
                got => {
                    return Err(ExprError::Parse(format!(
                        "expected ',' or ')' in O(..), found {:?}",
                        got
                    )))
                }
            }
        }
        let m = base.space.n_base_gens();
        if degrees.len() != m && !(m == 0 && degrees == [0]) {
            return Err(ExprError::Semantic(format!(
                "O(..) needs {} multidegrees for this base, got {}",
                m,
                degrees.len()
            )));
        }
        let mut c1: CohElement = MPoly::zero();
        for (i, d) in degrees.iter().enumerate().take(m) {
            if *d != 0 {
                c1 = c1.add(&base.space.h(i).scale(&rat_int(*d)));
            }
        }
        Ok(LineData::new(c1).expect("hyperplane combinations have degree 1"))
    }
}

fn point_vector() -> BordismVector {
    BordismVector::from_numbers(0, &[(crate::bordism::Partition::empty(), Rational::one())])
}

fn mul_values(a: &ExprValue, b: &ExprValue) -> Result<ExprValue, ExprError> {
    use ExprValue::*;
    Ok(match (a, b) {
        (Scalar(x), Scalar(y)) => Scalar(x * y),
        (Scalar(x), Manifold(m)) => Vector(m.chern_numbers().scale(x)),
        (Manifold(m), Scalar(x)) => Vector(m.chern_numbers().scale(x)),
        (Scalar(x), Vector(v)) | (Vector(v), Scalar(x)) => Vector(v.scale(x)),
        (Manifold(m1), Manifold(m2)) => Manifold(crate::bordism::Manifold::product(m1, m2)),
        (m @ Manifold(_), Vector(v)) | (Vector(v), m @ Manifold(_)) => {
            Vector(bordism_product(&m.to_vector()?, v))
        }
        (Vector(v1), Vector(v2)) => Vector(bordism_product(v1, v2)),
    })
}

fn add_values(a: &ExprValue, b: &ExprValue, subtract: bool) -> Result<ExprValue, ExprError> {
    use ExprValue::*;
    if let (Scalar(x), Scalar(y)) = (a, b) {
        return Ok(Scalar(if subtract { x - y } else { x + y }));
    }
    let va = a.to_vector()?;
    let vb = b.to_vector()?;
    if va.dim() != vb.dim() {
        return Err(ExprError::Semantic(format!(
            "cannot add classes of dimensions {} and {}",
            va.dim(),
            vb.dim()
        )));
    }
    Ok(Vector(if subtract { va.sub(&vb) } else { va.add(&vb) }))
}

fn power_value(base: &ExprValue, e: u32) -> Result<ExprValue, ExprError> {
    use ExprValue::*;
    Ok(match base {
        Scalar(x) => {
            let mut acc = Rational::one();
            for _ in 0..e {
                acc *= x;
            }
            Scalar(acc)
        }
        Manifold(m) => {
            if e == 0 {
                Manifold(crate::bordism::Manifold::projective_space(0))
            } else {
                let mut acc = m.clone();
                for _ in 1..e {
                    acc = crate::bordism::Manifold::product(&acc, m);
                }
                Manifold(acc)
            }
        }
        Vector(v) => {
            let mut acc = point_vector();
            for _ in 0..e {
                acc = bordism_product(&acc, v);
            }
            Vector(acc)
        }
    })
}

/// Parse a pair of line bundles "O(..)+O(..)" against a base manifold.
pub fn parse_line_pair(input: &str, base: &Manifold) -> Result<[LineData; 2], ExprError> {
    let toks = lex(input)?;
    let mut p = Parser { toks, pos: 0 };
    let lines = p.parse_lines(base)?;
    if p.pos != p.toks.len() {
        return Err(ExprError::Parse("trailing input after O(..)+O(..)".into()));
    }
    Ok(lines)
}

/// Parse and evaluate a manifold expression.
pub fn parse_manifold_expr(input: &str) -> Result<ExprValue, ExprError> {
    let toks = lex(input)?;
    if toks.is_empty() {
        return Err(ExprError::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let v = p.parse_expr()?;
    if p.pos != p.toks.len() {
        return Err(ExprError::Parse(format!(
            "trailing input at token {:?}",
            p.toks[p.pos]
        )));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bordism::Partition;

    #[test]
    fn parse_projective_spaces_and_products() {
        let v = parse_manifold_expr("P(2)").unwrap();
        let m = v.as_manifold().unwrap();
        assert_eq!(m.n, 2);
        let v = parse_manifold_expr("P(1) x P(1) x P(2)").unwrap();
        assert_eq!(v.as_manifold().unwrap().n, 4);
    }

    #[test]
    fn parse_linear_combinations() {
        let v = parse_manifold_expr("2*K3 - P(1)^2").unwrap().to_vector().unwrap();
        assert_eq!(v.dim(), 2);
        // 2*24 - c2(P1 x P1) = 48 - 4
        assert_eq!(v.get(&Partition::of(&[2])), rat_int(44));
        assert_eq!(v.get(&Partition::of(&[1, 1])), rat_int(-8));

        let v = parse_manifold_expr("1/2 * (K3 + K3)").unwrap().to_vector().unwrap();
        assert_eq!(v, k3_vector());

        let v = parse_manifold_expr("-S6").unwrap().to_vector().unwrap();
        assert_eq!(v.get(&Partition::of(&[3])), rat_int(-2));
    }

    #[test]
    fn parse_vector_products() {
        let v = parse_manifold_expr("K3 x K3").unwrap().to_vector().unwrap();
        assert_eq!(v.get(&Partition::of(&[2, 2])), rat_int(1152));
        let v = parse_manifold_expr("K3 x P(1)").unwrap().to_vector().unwrap();
        assert_eq!(v.dim(), 3);
    }

    #[test]
    fn parse_twisted_bundle() {
        let v = parse_manifold_expr("TW(Z=P(2); A=O(1)+O(0); B=O(0)+O(0))").unwrap();
        let m = v.as_manifold().unwrap();
        assert_eq!(m.n, 5);
        // matches the direct construction
        let inst = crate::flops::cp_example_instance(5);
        let direct = twisted_bundle(&inst);
        assert_eq!(m.chern_numbers(), direct.chern_numbers());
        // multidegree on a product base, with negative entries
        let v = parse_manifold_expr("TW(Z=P(1) x P(1); A=O(1,-2)+O(0,0); B=O(0,1)+O(2,0))");
        assert_eq!(v.unwrap().as_manifold().unwrap().n, 5);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_manifold_expr("Q3"),
            Err(ExprError::Parse(_))
        ));
        assert!(matches!(
            parse_manifold_expr("K3 +"),
            Err(ExprError::Parse(_))
        ));
        assert!(matches!(
            parse_manifold_expr("K3 + S6"),
            Err(ExprError::Semantic(_))
        ));
        assert!(matches!(
            parse_manifold_expr("TW(Z=K3; A=O(0)+O(0); B=O(0)+O(0))"),
            Err(ExprError::Semantic(_))
        ));
        assert!(matches!(
            parse_manifold_expr("P(2) extra"),
            Err(ExprError::Parse(_))
        ));
    }
}
