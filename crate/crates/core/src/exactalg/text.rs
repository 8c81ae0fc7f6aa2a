//! Parser for the canonical text form. It accepts ordinary arithmetic over
//! the six indeterminates, so anything the printers emit reads back to the
//! same numerator and denominator.

use std::str::FromStr;

use num_bigint::BigInt;

use super::{ExactError, MultiPoly, RationalFn, Scalar, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(Var),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ExactError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = input[start..i].parse().expect("digits");
                out.push((start, Tok::Num(n)));
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                let t = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push((i, t));
                i += 1;
            }
            _ => {
                let v = Var::from_name(&c.to_string()).ok_or_else(|| ExactError::Parse {
                    pos: i,
                    msg: format!("unexpected character {c:?}"),
                })?;
                out.push((i, Tok::Var(v)));
                i += 1;
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.len)
    }

    fn err(&self, msg: &str) -> ExactError {
        ExactError::Parse {
            pos: self.offset(),
            msg: msg.to_string(),
        }
    }

    fn expr(&mut self) -> Result<RationalFn, ExactError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFn, ExactError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = div_keep(&acc, &rhs).map_err(|_| self.err("division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFn, ExactError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFn, ExactError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = match self.peek() {
            Some(Tok::Num(n)) => u32::try_from(n.clone()).map_err(|_| self.err("exponent too large"))?,
            _ => return Err(self.err("expected integer exponent")),
        };
        self.pos += 1;
        let e = if negative { -(e as i64) } else { e as i64 };
        base.pow(e).map_err(|_| self.err("negative power of zero"))
    }

    fn atom(&mut self) -> Result<RationalFn, ExactError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(RationalFn::constant(Scalar::from_integer(n)))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(RationalFn::var(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

/// Division that does not cancel anything, so `(a) / (b)` keeps `a` and `b`
/// verbatim as numerator and denominator.
fn div_keep(a: &RationalFn, b: &RationalFn) -> Result<RationalFn, ExactError> {
    if b.is_zero() {
        return Err(ExactError::ZeroDenominator);
    }
    // Constant divisors just scale, which keeps rational coefficients like
    // `3/2*q` as a single numerator.
    if b.den().is_one() {
        if let Some(c) = b.num().as_constant() {
            return RationalFn::new(a.num().scale(&c.recip()), a.den().clone());
        }
    }
    RationalFn::new(a.num() * b.den(), a.den() * b.num())
}

pub fn parse_ratfn(input: &str) -> Result<RationalFn, ExactError> {
    let toks = lex(input)?;
    if toks.is_empty() {
        return Err(ExactError::Parse {
            pos: 0,
            msg: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        len: input.len(),
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

impl FromStr for RationalFn {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ratfn(s)
    }
}

impl FromStr for MultiPoly {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ratfn(s)?.as_poly().ok_or(ExactError::NotAPolynomial)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_form() {
        let f = parse_ratfn("(1 - q^2*t) / (1 - q^3*t)").unwrap();
        assert_eq!(f.to_string(), "(1 - q^2*t) / (1 - q^3*t)");
    }

    #[test]
    fn rational_coefficients() {
        let p: MultiPoly = "3/2*q - 1/3".parse().unwrap();
        assert_eq!(p.to_string(), "-1/3 + 3/2*q");
    }

    #[test]
    fn negative_exponent() {
        let f = parse_ratfn("q^-2").unwrap();
        assert_eq!(f.to_string(), "1 / q^2");
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_ratfn("1 + w"), Err(ExactError::Parse { pos: 4, .. })));
        assert!(matches!(parse_ratfn("(1 + q"), Err(ExactError::Parse { .. })));
        assert!(matches!(parse_ratfn("1/0"), Err(ExactError::Parse { .. })));
        assert!(matches!(parse_ratfn(""), Err(ExactError::Parse { .. })));
        assert_eq!("1/(1-q)".parse::<MultiPoly>().unwrap_err(), ExactError::NotAPolynomial);
    }
}
