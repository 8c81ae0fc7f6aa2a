//! Sparse multivariate polynomials over the rationals in a fixed, closed set
//! of indeterminates.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Scalar;

/// The indeterminates the library knows about. `T` stands for `q^{-s}`;
/// `S` is only used by topological zeta functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Q,
    T,
    X,
    Y,
    Z,
    S,
}

pub const NVARS: usize = 6;

impl Var {
    pub const ALL: [Var; NVARS] = [Var::Q, Var::T, Var::X, Var::Y, Var::Z, Var::S];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Q => "q",
            Var::T => "t",
            Var::X => "X",
            Var::Y => "Y",
            Var::Z => "Z",
            Var::S => "s",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector over all six indeterminates.
///
/// The total order puts terms of low degree in `q, t, X, Y, Z` first and,
/// among those, high powers of `s` first. That makes `1 - q*t` and `s - 1`
/// both print the way people write them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; NVARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var, e: u32) -> Self {
        let mut m = [0; NVARS];
        m[v.index()] = e;
        Monomial(m)
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = [0; NVARS];
        for (i, slot) in m.iter_mut().enumerate() {
            *slot = self.0[i]
                .checked_add(other.0[i])
                .expect("monomial exponent overflow");
        }
        Monomial(m)
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = [0; NVARS];
        for (i, slot) in m.iter_mut().enumerate() {
            *slot = self.0[i].checked_sub(other.0[i])?;
        }
        Some(Monomial(m))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut m = [0; NVARS];
        for (i, slot) in m.iter_mut().enumerate() {
            *slot = self.0[i].min(other.0[i]);
        }
        Monomial(m)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut m = [0; NVARS];
        for (i, slot) in m.iter_mut().enumerate() {
            *slot = self.0[i].max(other.0[i]);
        }
        Monomial(m)
    }

    fn main_degree(&self) -> u64 {
        self.0[..NVARS - 1].iter().map(|&e| e as u64).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.main_degree()
            .cmp(&other.main_degree())
            .then_with(|| other.exp(Var::S).cmp(&self.exp(Var::S)))
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial with rational coefficients. Terms are kept sorted and no
/// stored coefficient is zero, so structural equality is mathematical
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Scalar::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Scalar::one(), Monomial::var(v, 1))
    }

    /// `v^e`.
    pub fn var_pow(v: Var, e: u32) -> Self {
        Self::term(Scalar::one(), Monomial::var(v, e))
    }

    pub fn term(c: Scalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero)
    /// terms, canonicalizing on the way.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(iter: I) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The value if this polynomial has no indeterminates.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The indeterminates that actually occur, in universe order.
    pub fn variables(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|v| self.terms.keys().any(|m| m.exp(*v) > 0))
            .collect()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, a)| (m.mul(mono), a.clone())).collect(),
        }
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, mono: &Monomial) -> Option<MultiPoly> {
        let mut terms = BTreeMap::new();
        for (m, a) in &self.terms {
            terms.insert(m.div(mono)?, a.clone());
        }
        Some(MultiPoly { terms })
    }

    /// Largest monomial dividing every term (1 for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(*first, |acc, m| acc.gcd(m)),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Groups terms by the power of `v`: entry `k` is the coefficient of
    /// `v^k`, itself free of `v`.
    pub fn coefficients_in(&self, v: Var) -> Vec<MultiPoly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![MultiPoly::zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let k = m.exp(v) as usize;
            let mut rest = *m;
            rest.0[v.index()] = 0;
            out[k].add_term(rest, c.clone());
        }
        out
    }

    /// Substitutes a ring element for `v`. Works for any target ring that
    /// can absorb the remaining indeterminates as polynomials.
    pub fn substitute<R: super::Ring + From<MultiPoly>>(&self, v: Var, value: &R) -> R {
        let coeffs = self.coefficients_in(v);
        let mut acc = R::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(value).add(&R::from(c.clone()));
        }
        acc
    }

    /// Substitutes a rational number for `v`.
    pub fn eval_var(&self, v: Var, value: &Scalar) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let mut rest = *m;
            rest.0[v.index()] = 0;
            out.add_term(rest, c * pow_scalar(value, e));
        }
        out
    }

    /// Evaluates at a full point; indeterminates missing from `point` are
    /// treated as an error by returning `None`.
    pub fn eval(&self, point: &[(Var, Scalar)]) -> Option<Scalar> {
        let mut total = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for v in Var::ALL {
                let e = m.exp(v);
                if e == 0 {
                    continue;
                }
                let (_, x) = point.iter().find(|(w, _)| *w == v)?;
                term *= pow_scalar(x, e);
            }
            total += term;
        }
        Some(total)
    }

    /// `v^deg * p(1/v)` where `deg` is the degree of `p` in `v`; the
    /// returned shift is `deg`.
    pub fn invert_var(&self, v: Var) -> (MultiPoly, u32) {
        let deg = self.degree_in(v);
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut m2 = *m;
            m2.0[v.index()] = deg - m.exp(v);
            out.add_term(m2, c.clone());
        }
        (out, deg)
    }

    /// Replaces `v` by `v^k`.
    pub fn stretch_var(&self, v: Var, k: u32) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut m2 = *m;
            m2.0[v.index()] = m.exp(v).checked_mul(k).expect("monomial exponent overflow");
            (m2, c.clone())
        }))
    }

    /// Drops every term whose power of `v` exceeds `max`.
    pub fn truncate_in(&self, v: Var, max: u32) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) <= max)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Coefficient of the last term in the canonical order.
    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.values().next_back()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }
}

pub(crate) fn pow_scalar(x: &Scalar, e: u32) -> Scalar {
    num_traits::pow(x.clone(), e as usize)
}

impl From<Scalar> for MultiPoly {
    fn from(c: Scalar) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($ty:ty, $tr:ident, $method:ident) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'a $ty) -> $ty {
                (&self).$method(rhs)
            }
        }
    };
}
pub(crate) use forward_owned;

forward_owned!(MultiPoly, Add, add);
forward_owned!(MultiPoly, Sub, sub);
forward_owned!(MultiPoly, Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

pub(crate) fn fmt_scalar(c: &Scalar) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(m: &Monomial, sep: &str, latex: bool) -> String {
    let mut parts = Vec::new();
    for v in Var::ALL {
        match m.exp(v) {
            0 => {}
            1 => parts.push(v.name().to_string()),
            e if latex => parts.push(format!("{}^{{{}}}", v.name(), e)),
            e => parts.push(format!("{}^{}", v.name(), e)),
        }
    }
    parts.join(sep)
}

impl MultiPoly {
    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let sep = if latex { " " } else { "*" };
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let coeff = if latex && !a.is_integer() {
                format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
            } else {
                fmt_scalar(&a)
            };
            if m.is_one() {
                out.push_str(&coeff);
            } else {
                if !a.is_one() {
                    out.push_str(&coeff);
                    out.push_str(sep);
                }
                out.push_str(&fmt_monomial(m, sep, latex));
            }
        }
        out
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }
}

/// Canonical text form: `1 - q^2*t`, rational coefficients as `3/2*q`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MultiPoly {
        MultiPoly::var(Var::X)
    }

    #[test]
    fn monomial_product() {
        assert_eq!(&x() * &x(), MultiPoly::var_pow(Var::X, 2));
    }

    #[test]
    fn difference_of_squares() {
        let one = MultiPoly::one();
        let lhs = &(&one - &x()) * &(&one + &x());
        assert_eq!(lhs, &one - &MultiPoly::var_pow(Var::X, 2));
    }

    #[test]
    fn identity_elements() {
        let one = MultiPoly::one();
        let qt = &MultiPoly::var(Var::Q) * &MultiPoly::var(Var::T);
        let f = &one - &qt;
        assert_eq!(&(&f * &one) + &MultiPoly::zero(), f);
        assert_eq!(f.to_string(), "1 - q*t");
    }

    #[test]
    fn display_order() {
        let s = MultiPoly::var(Var::S);
        assert_eq!((&s - &MultiPoly::one()).to_string(), "s - 1");
        let p = &(&MultiPoly::one() - &MultiPoly::var_pow(Var::Q, 2).mul_monomial(&Monomial::var(Var::T, 1)))
            .scale(&Scalar::new(3.into(), 2.into()));
        assert_eq!(p.to_string(), "3/2 - 3/2*q^2*t");
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }

    #[test]
    fn invert_and_content() {
        // q + 2q^3  ->  q^3 (1/q + 2/q^3) = q^2 + 2
        let p = &MultiPoly::var(Var::Q) + &MultiPoly::var_pow(Var::Q, 3).scale(&Scalar::from_integer(2.into()));
        let (inv, shift) = p.invert_var(Var::Q);
        assert_eq!(shift, 3);
        assert_eq!(inv, &MultiPoly::var_pow(Var::Q, 2) + &MultiPoly::int(2));
        assert_eq!(p.monomial_content(), Monomial::var(Var::Q, 1));
    }

    #[test]
    fn coefficients_and_eval() {
        let p = &(&MultiPoly::one() - &(&MultiPoly::var(Var::Q) * &MultiPoly::var(Var::T))) + &MultiPoly::var_pow(Var::T, 2);
        let cs = p.coefficients_in(Var::T);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[1], -MultiPoly::var(Var::Q));
        let v = p.eval(&[(Var::Q, Scalar::from_integer(2.into())), (Var::T, Scalar::from_integer(3.into()))]);
        assert_eq!(v, Some(Scalar::from_integer(4.into())));
        assert_eq!(p.eval(&[(Var::Q, Scalar::one())]), None);
    }
}
