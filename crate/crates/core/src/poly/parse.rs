//! Text form of polynomials.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' uint)?
//! base     := rational | var | '(' expr ')'
//! rational := int ('/' uint)?
//! var      := 'x' | 'y' | 'z' | 'x' uint
//! ```
//!
//! A leading sign is accepted at the start of an expression and of a
//! parenthesised group. Printing is graded-lex descending with explicit `*`
//! and `^`, and parses back to the same polynomial.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Monomial, PolyError, Polynomial, MAX_DIM};
use crate::exact::Rational;

const MAX_EXPONENT: u32 = 256;

pub fn parse_polynomial(text: &str, dimension: usize) -> Result<Polynomial, PolyError> {
    if !(1..=MAX_DIM).contains(&dimension) {
        return Err(PolyError::InvalidDimension(dimension));
    }
    let mut parser = Parser { chars: text.char_indices().collect(), pos: 0, dim: dimension, len: text.len() };
    let p = parser.expr()?;
    parser.skip_ws();
    if let Some(&(at, c)) = parser.chars.get(parser.pos) {
        return Err(PolyError::Syntax { position: at, message: format!("unexpected '{c}'") });
    }
    Ok(p)
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    dim: usize,
    len: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.pos), Some((_, c)) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(i, _)| i)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax { position: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut negate = false;
        match self.peek() {
            Some('-') => {
                negate = true;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.base()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = {
            self.skip_ws();
            self.offset()
        };
        match self.peek() {
            Some('-') => return Err(PolyError::NegativeExponent { position: at }),
            Some(c) if c.is_ascii_digit() => {}
            Some('(') => return Err(PolyError::FractionalExponent { position: at }),
            _ => return self.syntax("expected an unsigned integer exponent"),
        }
        let digits = self.digits();
        if matches!(self.chars.get(self.pos), Some((_, '/' | '.'))) {
            return Err(PolyError::FractionalExponent { position: at });
        }
        let e: u32 = match digits.parse() {
            Ok(e) if e <= MAX_EXPONENT => e,
            _ => return Err(PolyError::Syntax { position: at, message: "exponent too large".into() }),
        };
        Ok(base.pow(e))
    }

    fn digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            s.push(c);
            self.pos += 1;
        }
        s
    }

    fn base(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return self.syntax("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digits");
                let mut value = Rational::from_integer(num);
                if self.peek() == Some('/') {
                    self.pos += 1;
                    self.skip_ws();
                    if !matches!(self.chars.get(self.pos), Some((_, c)) if c.is_ascii_digit()) {
                        return self.syntax("expected an unsigned integer denominator");
                    }
                    let den: BigInt = self.digits().parse().expect("digits");
                    if den.is_zero() {
                        return self.syntax("zero denominator");
                    }
                    value /= Rational::from_integer(den);
                }
                Ok(Polynomial::constant(self.dim, value))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.offset();
                let mut name = String::new();
                while let Some(&(_, c)) = self.chars.get(self.pos) {
                    if !c.is_ascii_alphanumeric() {
                        break;
                    }
                    name.push(c);
                    self.pos += 1;
                }
                let index = variable_index(&name, self.dim)
                    .ok_or(PolyError::UnknownVariable { name, position: at })?;
                Ok(Polynomial::var(self.dim, index))
            }
            Some(c) => self.syntax(format!("unexpected '{c}'")),
            None => self.syntax("unexpected end of input"),
        }
    }
}

fn variable_index(name: &str, dim: usize) -> Option<usize> {
    let index = match name {
        "x" => 0,
        "y" if dim <= 3 => 1,
        "z" if dim <= 3 => 2,
        _ => {
            let rest = name.strip_prefix('x')?;
            if rest.is_empty() || rest.starts_with('0') || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            rest.parse::<usize>().ok()?.checked_sub(1)?
        }
    };
    (index < dim).then_some(index)
}

pub fn variable_name(index: usize, dim: usize) -> String {
    if dim <= 3 {
        ["x", "y", "z"][index].to_string()
    } else {
        format!("x{}", index + 1)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(&variable_name(i, m.dim()))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

fn write_magnitude(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().rev().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if m.is_one() {
                write_magnitude(f, &mag)?;
            } else {
                if !mag.is_one() {
                    write_magnitude(f, &mag)?;
                    f.write_str("*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn parses_figure_expression() {
        let p = parse_polynomial("x^3 - 3*x*y^2 + 1", 2).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(p.coefficient(&Monomial::new(vec![3, 0])), int(1));
        assert_eq!(p.coefficient(&Monomial::new(vec![1, 2])), int(-3));
        assert_eq!(p.constant_term(), int(1));
        assert_eq!(p.to_string(), "x^3 - 3*x*y^2 + 1");
    }

    #[test]
    fn indexed_variables_and_rationals() {
        let p = parse_polynomial("2/4*x1*x4 - x2^2", 4).unwrap();
        assert_eq!(p.to_string(), "1/2*x1*x4 - x2^2");
        assert_eq!(parse_polynomial(&p.to_string(), 4).unwrap(), p);
        let q = parse_polynomial("-(x - y)^2", 2).unwrap();
        assert_eq!(q.to_string(), "-x^2 + 2*x*y - y^2");
    }

    #[test]
    fn reports_errors_with_positions() {
        assert!(matches!(
            parse_polynomial("x + * y", 2),
            Err(PolyError::Syntax { position: 4, .. })
        ));
        assert!(matches!(
            parse_polynomial("x + z", 2),
            Err(PolyError::UnknownVariable { position: 4, .. })
        ));
        assert!(matches!(parse_polynomial("x3", 2), Err(PolyError::UnknownVariable { .. })));
        assert!(matches!(
            parse_polynomial("x^-1", 2),
            Err(PolyError::NegativeExponent { position: 2 })
        ));
        assert!(matches!(
            parse_polynomial("y^1/2", 2),
            Err(PolyError::FractionalExponent { position: 2 })
        ));
        assert!(matches!(parse_polynomial("(x + y", 2), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_polynomial("2x", 2), Err(PolyError::Syntax { position: 1, .. })));
        assert!(matches!(parse_polynomial("", 2), Err(PolyError::Syntax { .. })));
    }
}
