use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::poly::forward_owned;
use super::{ExactError, Monomial, MultiPoly, Scalar, Var};

/// A quotient of polynomials. Equality is decided by cross-multiplication,
/// so `(1 - X^2)/(1 - X)` equals `1 + X` without any gcd computation.
#[derive(Clone, Debug)]
pub struct RationalFn {
    num: MultiPoly,
    den: MultiPoly,
}

impl RationalFn {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, ExactError> {
        if den.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(RationalFn { num, den })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RationalFn {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn int(c: i64) -> Self {
        Self::from_poly(MultiPoly::int(c))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(MultiPoly::var(v))
    }

    /// `v^e` for any integer `e`.
    pub fn var_pow(v: Var, e: i64) -> Self {
        if e >= 0 {
            Self::from_poly(MultiPoly::var_pow(v, e as u32))
        } else {
            RationalFn {
                num: MultiPoly::one(),
                den: MultiPoly::var_pow(v, (-e) as u32),
            }
        }
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn into_parts(self) -> (MultiPoly, MultiPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this represents, if the denominator divides exactly
    /// in the trivial cases we can decide without a gcd (constant or
    /// monomial denominators).
    pub fn as_poly(&self) -> Option<MultiPoly> {
        let (n, d) = self.reduced_parts();
        if let Some(c) = d.as_constant() {
            return Some(n.scale(&c.recip()));
        }
        None
    }

    fn reduced_parts(&self) -> (MultiPoly, MultiPoly) {
        let r = self.reduce_monomial_content();
        (r.num, r.den)
    }

    /// Cancels the largest monomial dividing both numerator and denominator.
    pub fn reduce_monomial_content(&self) -> RationalFn {
        if self.num.is_zero() {
            return RationalFn::from_poly(MultiPoly::zero());
        }
        let g = self.num.monomial_content().gcd(&self.den.monomial_content());
        if g.is_one() {
            return self.clone();
        }
        RationalFn {
            num: self.num.div_monomial(&g).expect("content divides numerator"),
            den: self.den.div_monomial(&g).expect("content divides denominator"),
        }
    }

    /// Fixes the overall sign so the first printed term of the denominator
    /// is positive. A constant denominator is divided into the numerator.
    pub fn normalize_sign(&self) -> RationalFn {
        let negate = self.den.terms().next().is_some_and(|(_, c)| c.is_negative());
        let mut out = if negate {
            RationalFn {
                num: -&self.num,
                den: -&self.den,
            }
        } else {
            self.clone()
        };
        if let Some(c) = out.den.as_constant() {
            out = RationalFn::from_poly(out.num.scale(&c.recip()));
        }
        out
    }

    pub fn recip(&self) -> Result<RationalFn, ExactError> {
        RationalFn::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Result<RationalFn, ExactError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(RationalFn {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs = self.num.variables();
        for v in self.den.variables() {
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        vs.sort();
        vs
    }

    /// Substitutes a rational number for `v`. Fails if the denominator
    /// vanishes identically afterwards.
    pub fn eval_var(&self, v: Var, value: &Scalar) -> Result<RationalFn, ExactError> {
        RationalFn::new(self.num.eval_var(v, value), self.den.eval_var(v, value))
            .map_err(|_| ExactError::Pole)
    }

    /// Full numeric evaluation.
    pub fn eval(&self, point: &[(Var, Scalar)]) -> Result<Scalar, ExactError> {
        let n = self.num.eval(point).ok_or(ExactError::MissingVariable)?;
        let d = self.den.eval(point).ok_or(ExactError::MissingVariable)?;
        if d.is_zero() {
            return Err(ExactError::Pole);
        }
        Ok(n / d)
    }

    /// Substitutes `v -> 1/v` and clears the resulting powers of `v`.
    pub fn invert_var(&self, v: Var) -> RationalFn {
        let (n, dn) = self.num.invert_var(v);
        let (d, dd) = self.den.invert_var(v);
        // num(1/v)/den(1/v) = (n / v^dn) / (d / v^dd)
        RationalFn {
            num: n.mul_monomial(&Monomial::var(v, dd)),
            den: d.mul_monomial(&Monomial::var(v, dn)),
        }
        .reduce_monomial_content()
    }

    /// Substitutes a rational function for `v`.
    pub fn substitute(&self, v: Var, value: &RationalFn) -> Result<RationalFn, ExactError> {
        let n: RationalFn = self.num.substitute(v, value);
        let d: RationalFn = self.den.substitute(v, value);
        n.checked_div(&d)
    }

    /// Replaces `v` by `v^k`.
    pub fn stretch_var(&self, v: Var, k: u32) -> RationalFn {
        RationalFn {
            num: self.num.stretch_var(v, k),
            den: self.den.stretch_var(v, k),
        }
    }

    pub fn checked_div(&self, other: &RationalFn) -> Result<RationalFn, ExactError> {
        if other.is_zero() {
            return Err(ExactError::ZeroDenominator);
        }
        Ok(RationalFn {
            num: &self.num * &other.den,
            den: &self.den * &other.num,
        }
        .reduce_monomial_content())
    }

    pub fn to_latex(&self) -> String {
        if self.den.is_one() {
            self.num.to_latex()
        } else {
            format!("\\frac{{{}}}{{{}}}", self.num.to_latex(), self.den.to_latex())
        }
    }
}

/// `a/b == c/d` iff `a*d == c*b`.
pub fn ratfn_eq(a: &RationalFn, b: &RationalFn) -> bool {
    &a.num * &b.den == &b.num * &a.den
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        ratfn_eq(self, other)
    }
}

impl From<MultiPoly> for RationalFn {
    fn from(p: MultiPoly) -> Self {
        RationalFn::from_poly(p)
    }
}

impl From<Scalar> for RationalFn {
    fn from(c: Scalar) -> Self {
        RationalFn::constant(c)
    }
}

fn add_parts(a: &RationalFn, b: &RationalFn, negate_b: bool) -> RationalFn {
    let bn = if negate_b { -&b.num } else { b.num.clone() };
    if a.den == b.den {
        return RationalFn {
            num: &a.num + &bn,
            den: a.den.clone(),
        }
        .reduce_monomial_content();
    }
    // Monomial denominators combine over their lcm.
    if a.den.is_monomial() && b.den.is_monomial() {
        let (ma, ca) = a.den.terms().next().map(|(m, c)| (*m, c.clone())).unwrap();
        let (mb, cb) = b.den.terms().next().map(|(m, c)| (*m, c.clone())).unwrap();
        let l = ma.lcm(&mb);
        let na = a.num.mul_monomial(&l.div(&ma).unwrap()).scale(&ca.recip());
        let nb = bn.mul_monomial(&l.div(&mb).unwrap()).scale(&cb.recip());
        return RationalFn {
            num: &na + &nb,
            den: MultiPoly::term(Scalar::one(), l),
        }
        .reduce_monomial_content();
    }
    RationalFn {
        num: &(&a.num * &b.den) + &(&bn * &a.den),
        den: &a.den * &b.den,
    }
    .reduce_monomial_content()
}

impl<'a> Add<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        add_parts(self, rhs, false)
    }
}

impl<'a> Sub<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        add_parts(self, rhs, true)
    }
}

impl<'a> Mul<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        RationalFn {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .reduce_monomial_content()
    }
}

/// Panics on division by zero; use [`RationalFn::checked_div`] otherwise.
impl<'a> Div<&'a RationalFn> for &'a RationalFn {
    type Output = RationalFn;
    fn div(self, rhs: &RationalFn) -> RationalFn {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

forward_owned!(RationalFn, Add, add);
forward_owned!(RationalFn, Sub, sub);
forward_owned!(RationalFn, Mul, mul);
forward_owned!(RationalFn, Div, div);

impl Neg for RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        -&self
    }
}

fn needs_parens(p: &MultiPoly, as_denominator: bool) -> bool {
    if p.num_terms() > 1 {
        return true;
    }
    if !as_denominator {
        return false;
    }
    let s = p.to_string();
    s.contains('*') || s.contains('/') || s.starts_with('-')
}

/// Canonical text form, e.g. `(1 - t) / (1 - q*t)`. A unit denominator is
/// omitted. The output parses back to the same numerator and denominator.
impl fmt::Display for RationalFn {
    /// Prints the sign-normalised form; no factors are cancelled.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.normalize_sign();
        if r.den.is_one() || r.num.is_zero() {
            return write!(f, "{}", r.num);
        }
        if needs_parens(&r.num, false) {
            write!(f, "({})", r.num)?;
        } else {
            write!(f, "{}", r.num)?;
        }
        f.write_str(" / ")?;
        if needs_parens(&r.den, true) {
            write!(f, "({})", r.den)
        } else {
            write!(f, "{}", r.den)
        }
    }
}
