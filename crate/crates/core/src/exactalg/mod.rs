//! Exact arithmetic: rationals, sparse multivariate polynomials in the
//! indeterminates `q, t, X, Y, Z, s`, rational functions, and truncated
//! power series in `t`.
//!
//! Nothing here ever rounds. Rational functions are compared by
//! cross-multiplication, so no polynomial gcd is needed anywhere.

mod poly;
mod ratfn;
mod series;
mod text;

use num_rational::BigRational;
use thiserror::Error;

pub use poly::{Monomial, MultiPoly, Var, NVARS};
pub use ratfn::{ratfn_eq, RationalFn};
pub use series::{expand_factor, series_of_ratfn, series_of_ratfn_at, DirichletTrunc, QMode};
pub use text::parse_ratfn;


/// Exact rational scalar, always in lowest terms with positive denominator.
pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("denominator does not have an invertible constant term in t")]
    NonUnitDenominator,
    #[error("expression has a pole at the requested point")]
    Pole,
    #[error("evaluation point is missing a variable")]
    MissingVariable,
    #[error("expression is not a polynomial")]
    NotAPolynomial,
    #[error("unexpected variable {0} in a series in q and t")]
    UnexpectedVariable(Var),
    #[error("negative power q^{0} cannot appear in a symbolic series")]
    NegativePower(i64),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// The commutative-ring operations shared by scalars, polynomials and
/// rational functions, so q-products can be built over any of them.
pub trait Ring: Clone + Sized {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn from_scalar(c: &Scalar) -> Self;

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Ring for Scalar {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn from_scalar(c: &Scalar) -> Self {
        c.clone()
    }
    fn pow(&self, e: u32) -> Self {
        num_traits::pow(self.clone(), e as usize)
    }
}

impl Ring for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn from_scalar(c: &Scalar) -> Self {
        MultiPoly::constant(c.clone())
    }
}

impl Ring for RationalFn {
    fn zero() -> Self {
        RationalFn::from_poly(MultiPoly::zero())
    }
    fn one() -> Self {
        RationalFn::from_poly(MultiPoly::one())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        RationalFn::is_zero(self)
    }
    fn from_scalar(c: &Scalar) -> Self {
        RationalFn::constant(c.clone())
    }
}

/// Evaluates a polynomial in the single indeterminate `v` at a ring
/// element. Terms involving other indeterminates are rejected.
pub fn eval_univariate<R: Ring>(p: &MultiPoly, v: Var, x: &R) -> Option<R> {
    let mut acc = R::zero();
    for c in p.coefficients_in(v).iter().rev() {
        acc = acc.mul(x).add(&R::from_scalar(&c.as_constant()?));
    }
    Some(acc)
}

pub fn scalar(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(n.into(), d.into())
}
