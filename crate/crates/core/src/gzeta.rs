//! Closed-form zeta functions of the groups `G_{m x n}`: local (additive,
//! multiplicative and product forms), global Euler products and Dirichlet
//! coefficients, the topological zeta function, abscissae and central
//! products.
//!
//! Throughout `t` stands for `q^{-s}`, so a factor `1 - q^a t^b` is
//! `1 - q^{a - b s}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exactalg::{series_of_ratfn_at, ExactError, Monomial, MultiPoly, RationalFn, Scalar, Var};
use crate::qcomb::{gp, pochhammer, x_multinomial, OrderedSubset, QcombError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GzetaError {
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("the Euler product diverges at s = {s}: it converges only for s > {abscissa}")]
    DivergentRegion { s: Scalar, abscissa: Scalar },
    #[error("{numerator} numerator factor(s) against {denominator} denominator factor(s): the constant term in q - 1 is not finite and nonzero")]
    UnbalancedDegrees { numerator: i64, denominator: i64 },
    #[error("no denominator factors: the function is entire")]
    EntireFunction,
    #[error("invalid splitting data: {0}")]
    InvalidSplitting(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Qcomb(#[from] QcombError),
}

fn check_mn(m: usize, n: usize) -> Result<(), GzetaError> {
    if m == 0 || n == 0 {
        return Err(GzetaError::InvalidArgs(format!("m and n must be positive, got m = {m}, n = {n}")));
    }
    if m > n {
        return Err(GzetaError::InvalidArgs(format!("expected m <= n, got m = {m}, n = {n}")));
    }
    Ok(())
}

/// `(m, n)` with the smaller one first; `G_{m x n}` and `G_{n x m}` are
/// isomorphic.
pub fn normalize_mn(m: usize, n: usize) -> (usize, usize) {
    (m.min(n), m.max(n))
}

/// `Π (1 - q^a t^b)^e`, times an optional monomial `q^α t^β`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CycloFactorization {
    factors: BTreeMap<(i64, u32), i64>,
    prefactor: Option<(i64, u32)>,
}

impl CycloFactorization {
    pub fn one() -> Self {
        Self::default()
    }

    /// Merges repeated `(a, b)` and drops cancelled factors.
    pub fn from_factors<I: IntoIterator<Item = (i64, u32, i64)>>(factors: I) -> Result<Self, GzetaError> {
        let mut out = Self::one();
        for (a, b, e) in factors {
            out.push(a, b, e)?;
        }
        Ok(out)
    }

    pub fn push(&mut self, a: i64, b: u32, e: i64) -> Result<(), GzetaError> {
        if b == 0 {
            return Err(GzetaError::InvalidArgs(format!("factor (1 - q^{a} t^{b}) needs b >= 1")));
        }
        let slot = self.factors.entry((a, b)).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&(a, b));
        }
        Ok(())
    }

    pub fn with_prefactor(mut self, alpha: i64, beta: u32) -> Self {
        self.prefactor = (alpha != 0 || beta != 0).then_some((alpha, beta));
        self
    }

    /// Factors `(a, b, e)` in increasing `(a, b)`.
    pub fn factors(&self) -> impl Iterator<Item = (i64, u32, i64)> + '_ {
        self.factors.iter().map(|(&(a, b), &e)| (a, b, e))
    }

    pub fn prefactor(&self) -> Option<(i64, u32)> {
        self.prefactor
    }

    pub fn to_ratfn(&self) -> Result<RationalFn, GzetaError> {
        let mut num = MultiPoly::one();
        let mut den = MultiPoly::one();
        let mut q_shift: i64 = 0;
        let mut t_shift: u32 = 0;
        if let Some((alpha, beta)) = self.prefactor {
            q_shift += alpha;
            t_shift += beta;
        }
        for (a, b, e) in self.factors() {
            // 1 - q^a t^b with a < 0 is (q^{-a} - t^b) / q^{-a}.
            let poly = if a >= 0 {
                MultiPoly::one() - MultiPoly::term(Scalar::one(), Monomial::var(Var::Q, a as u32).mul(&Monomial::var(Var::T, b)))
            } else {
                MultiPoly::var_pow(Var::Q, (-a) as u32) - MultiPoly::var_pow(Var::T, b)
            };
            let k = e.unsigned_abs() as u32;
            if e > 0 {
                num = &num * &poly.pow(k);
                if a < 0 {
                    q_shift += a * e;
                }
            } else {
                den = &den * &poly.pow(k);
                if a < 0 {
                    q_shift -= a * e.abs();
                }
            }
        }
        num = num.mul_monomial(&Monomial::var(Var::T, t_shift));
        if q_shift >= 0 {
            num = num.mul_monomial(&Monomial::var(Var::Q, q_shift as u32));
        } else {
            den = den.mul_monomial(&Monomial::var(Var::Q, (-q_shift) as u32));
        }
        Ok(RationalFn::new(num, den)?)
    }

    fn counts(&self) -> (i64, i64) {
        let num = self.factors().filter(|f| f.2 > 0).map(|f| f.2).sum();
        let den = self.factors().filter(|f| f.2 < 0).map(|f| -f.2).sum();
        (num, den)
    }
}

fn fmt_factor(a: i64, b: u32) -> String {
    let q = match a {
        0 => String::new(),
        1 => "q*".to_string(),
        _ => format!("q^{a}*"),
    };
    let t = if b == 1 { "t".to_string() } else { format!("t^{b}") };
    format!("(1 - {q}{t})")
}

/// Factored text form, e.g. `(1 - t)*(1 - q*t) / ((1 - q^2*t)*(1 - q^3*t))`;
/// it parses back to the same rational function.
impl fmt::Display for CycloFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |positive: bool| -> Vec<String> {
            self.factors()
                .filter(|x| (x.2 > 0) == positive)
                .map(|(a, b, e)| {
                    let e = e.abs();
                    if e == 1 {
                        fmt_factor(a, b)
                    } else {
                        format!("{}^{e}", fmt_factor(a, b))
                    }
                })
                .collect()
        };
        let mut num = side(true);
        if let Some((alpha, beta)) = self.prefactor {
            let mut mono = Vec::new();
            if alpha != 0 {
                mono.push(format!("q^{alpha}"));
            }
            if beta != 0 {
                mono.push(format!("t^{beta}"));
            }
            num.insert(0, mono.join("*"));
        }
        let den = side(false);
        let num = if num.is_empty() { "1".to_string() } else { num.join("*") };
        match den.len() {
            0 => write!(f, "{num}"),
            1 => write!(f, "{num} / {}", den[0]),
            _ => write!(f, "{num} / ({})", den.join("*")),
        }
    }
}

/// Residue-field cardinalities of the places in a truncated Euler product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingData {
    cardinalities: Vec<u64>,
}

impl SplittingData {
    pub fn new(cardinalities: Vec<u64>) -> Result<Self, GzetaError> {
        for &q in &cardinalities {
            if prime_power_base(q).is_none() {
                return Err(GzetaError::InvalidSplitting(format!("{q} is not a prime power")));
            }
        }
        Ok(SplittingData { cardinalities })
    }

    /// The places of `Q`: one per prime below `limit`.
    pub fn rational_primes_below(limit: u64) -> Self {
        SplittingData {
            cardinalities: primes_below(limit),
        }
    }

    /// One integer per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self, GzetaError> {
        let mut out = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let q: u64 = line
                .parse()
                .map_err(|_| GzetaError::InvalidSplitting(format!("line {}: '{line}' is not a positive integer", no + 1)))?;
            out.push(q);
        }
        Self::new(out)
    }

    pub fn cardinalities(&self) -> &[u64] {
        &self.cardinalities
    }
}

/// `Some(p)` when `q = p^k` with `k >= 1`.
fn prime_power_base(q: u64) -> Option<u64> {
    if q < 2 {
        return None;
    }
    let p = (2..).take_while(|d| d * d <= q).find(|d| q.is_multiple_of(*d)).unwrap_or(q);
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    (r == 1).then_some(p)
}

pub fn primes_below(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            for j in (i * i..n).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (0..n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// `f^I(X) = (n choose I + n - m)_X (X^{i_1 + 1}; X)_{m - i_1}`; `1` for
/// the empty set.
pub fn f_i(m: usize, n: usize, i: &OrderedSubset) -> Result<MultiPoly, GzetaError> {
    check_mn(m, n)?;
    if i.bound() != m {
        return Err(GzetaError::InvalidArgs(format!("subset {i} must lie in [{}]_0", m as i64 - 1)));
    }
    if i.is_empty() {
        return Ok(MultiPoly::one());
    }
    let binom = x_multinomial(n, &i.shifted(n - m))?;
    let i1 = i.first_or_bound() as u32;
    let x = MultiPoly::var(Var::X);
    let poch = pochhammer(&MultiPoly::var_pow(Var::X, i1 + 1), &x, m as u32 - i1);
    Ok(&binom * &poch)
}

/// Symbolic in `q`, or with `q` specialised to a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QChoice {
    Symbolic,
    Prime(u64),
}

fn specialise(f: RationalFn, q: QChoice) -> Result<RationalFn, GzetaError> {
    match q {
        QChoice::Symbolic => Ok(f),
        QChoice::Prime(p) => Ok(f.eval_var(Var::Q, &Scalar::from_integer(p.into()))?.normalize_sign()),
    }
}

/// `W_i = q^{(m-i)(n+i)} t^{m-i}`.
fn w_i(m: usize, n: usize, i: usize) -> RationalFn {
    let mono = Monomial::var(Var::Q, ((m - i) * (n + i)) as u32).mul(&Monomial::var(Var::T, (m - i) as u32));
    RationalFn::from_poly(MultiPoly::term(Scalar::one(), mono))
}

/// `sum_I f^I(q^{-1}) prod_{i in I} W_i / (1 - W_i)` over a common
/// denominator `q^E prod_i (1 - W_i)`.
pub fn local_additive(m: usize, n: usize, q: QChoice) -> Result<RationalFn, GzetaError> {
    check_mn(m, n)?;
    let subsets = OrderedSubset::all(m);
    let fs: Vec<MultiPoly> = subsets.iter().map(|s| f_i(m, n, s)).collect::<Result<_, _>>()?;
    let shift = fs.iter().map(|f| f.degree_in(Var::X)).max().unwrap_or(0);
    let ws: Vec<MultiPoly> = (0..m).map(|i| w_i(m, n, i).num().clone()).collect();
    let den_factors: Vec<MultiPoly> = ws.iter().map(|w| MultiPoly::one() - w.clone()).collect();

    let mut num = MultiPoly::zero();
    for (subset, f) in subsets.iter().zip(&fs) {
        // q^E f(q^{-1}): X^k becomes q^{E - k}.
        let reversed = MultiPoly::from_terms(
            f.terms()
                .map(|(mono, c)| (Monomial::var(Var::Q, shift - mono.exp(Var::X)), c.clone())),
        );
        let mut part = reversed;
        for (i, (w, d)) in ws.iter().zip(&den_factors).enumerate() {
            part = if subset.contains(i) { &part * w } else { &part * d };
        }
        num = &num + &part;
    }
    let den = den_factors
        .iter()
        .fold(MultiPoly::var_pow(Var::Q, shift), |acc, d| &acc * d);
    let f = RationalFn::new(num, den)?.reduce_monomial_content();
    specialise(f, q)
}

/// The same sum with each geometric factor built by [`gp`]; slower, kept
/// as a second route to the additive formula.
pub fn local_additive_termwise(m: usize, n: usize) -> Result<RationalFn, GzetaError> {
    check_mn(m, n)?;
    let q_inv = RationalFn::var_pow(Var::Q, -1);
    let mut acc = RationalFn::int(0);
    for subset in OrderedSubset::all(m) {
        let mut term = f_i(m, n, &subset)?.substitute(Var::X, &q_inv);
        for &i in subset.elements() {
            term = &term * &gp(&w_i(m, n, i))?;
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `prod_{i<m} (1 - q^i t) / (1 - q^{n+i} t)`.
pub fn local_multiplicative(m: usize, n: usize, q: QChoice) -> Result<RationalFn, GzetaError> {
    check_mn(m, n)?;
    let mut num = MultiPoly::one();
    let mut den = MultiPoly::one();
    for i in 0..m {
        num = &num * &one_minus_qt(i as u32);
        den = &den * &one_minus_qt((n + i) as u32);
    }
    specialise(RationalFn::new(num, den)?, q)
}

fn one_minus_qt(a: u32) -> MultiPoly {
    MultiPoly::one() - MultiPoly::term(Scalar::one(), Monomial::var(Var::Q, a).mul(&Monomial::var(Var::T, 1)))
}

/// The local factor `prod_{i<m} (1 - q^i t) / (1 - q^{n+i} t)` as a
/// factorization in lowest terms. Either order of `m, n` is accepted.
pub fn local_product_form(m: usize, n: usize) -> CycloFactorization {
    let mut f = CycloFactorization::one();
    for i in 0..m {
        f.push(i as i64, 1, 1).expect("b = 1");
        f.push((n + i) as i64, 1, -1).expect("b = 1");
    }
    f
}

/// `s -> k s`: every `(a, b, e)` becomes `(a, k b, e)`.
pub fn central_product(f: &CycloFactorization, k: u32) -> Result<CycloFactorization, GzetaError> {
    if k == 0 {
        return Err(GzetaError::InvalidArgs("central product needs k >= 1".into()));
    }
    let mut out = CycloFactorization::from_factors(f.factors().map(|(a, b, e)| (a, k * b, e)))?;
    out.prefactor = f.prefactor.map(|(alpha, beta)| (alpha, k * beta));
    Ok(out)
}

/// Abscissa of the local series: `max a/b` over denominator factors.
pub fn abscissa_from_factorization(f: &CycloFactorization) -> Result<Scalar, GzetaError> {
    f.factors()
        .filter(|x| x.2 < 0)
        .map(|(a, b, _)| Scalar::new(a.into(), b.into()))
        .max()
        .ok_or(GzetaError::EntireFunction)
}

/// Abscissa of the Euler product of the local factor over all places:
/// `prod_p (1 - p^{a - b s})^{-1}` converges for `b s - a > 1`, so this is
/// `max (a + 1)/b` over denominator factors.
pub fn global_abscissa(f: &CycloFactorization) -> Result<Scalar, GzetaError> {
    f.factors()
        .filter(|x| x.2 < 0)
        .map(|(a, b, _)| Scalar::new((a + 1).into(), b.into()))
        .max()
        .ok_or(GzetaError::EntireFunction)
}

/// `prod_{i<m} (s - i) / (s - n - i)`.
pub fn topological(m: usize, n: usize) -> Result<RationalFn, GzetaError> {
    check_mn(m, n)?;
    let s = MultiPoly::var(Var::S);
    let mut num = MultiPoly::one();
    let mut den = MultiPoly::one();
    for i in 0..m {
        num = &num * &(&s - &MultiPoly::int(i as i64));
        den = &den * &(&s - &MultiPoly::int((n + i) as i64));
    }
    Ok(RationalFn::new(num, den)?)
}

/// The constant term in `q - 1`: each `1 - q^{a - b s}` contributes
/// `-(a - b s)(q - 1)`, so with balanced factor counts the result is
/// `prod (b s - a)^e`.
pub fn topo_of_factorization(f: &CycloFactorization) -> Result<RationalFn, GzetaError> {
    let (numerator, denominator) = f.counts();
    if numerator != denominator {
        return Err(GzetaError::UnbalancedDegrees { numerator, denominator });
    }
    let s = MultiPoly::var(Var::S);
    let mut num = MultiPoly::one();
    let mut den = MultiPoly::one();
    for (a, b, e) in f.factors() {
        let lin = &s.scale(&Scalar::from_integer(b.into())) - &MultiPoly::int(a);
        let pow = lin.pow(e.unsigned_abs() as u32);
        if e > 0 {
            num = &num * &pow;
        } else {
            den = &den * &pow;
        }
    }
    Ok(RationalFn::new(num, den)?.normalize_sign())
}

/// A truncated Euler product: exact when `s` is an integer.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerValue {
    pub places: usize,
    pub exact: Option<Scalar>,
    pub approx: f64,
    /// Bound on the floating-point error of `approx`.
    pub error_bound: f64,
}

/// `prod_{q in S}` of the local factor at `t = q^{-s}`, for `s` beyond the
/// global abscissa `m + n`.
pub fn global_euler(m: usize, n: usize, places: &SplittingData, s: &Scalar) -> Result<EulerValue, GzetaError> {
    let (m, n) = normalize_mn(m, n);
    check_mn(m, n)?;
    let abscissa = Scalar::from_integer(((m + n) as i64).into());
    if *s <= abscissa {
        return Err(GzetaError::DivergentRegion {
            s: s.clone(),
            abscissa,
        });
    }
    let qs = places.cardinalities();
    if s.is_integer() {
        let e = s.to_integer().to_u32().ok_or_else(|| GzetaError::InvalidArgs(format!("s = {s} is too large")))?;
        // Numerators and denominators are multiplied separately and
        // reduced once; reducing every partial product is far slower.
        let (num, den) = qs
            .par_iter()
            .map(|&q| local_factor_exact(m, n, q, e))
            .reduce(|| (BigInt::one(), BigInt::one()), |a, b| (a.0 * b.0, a.1 * b.1));
        let exact = Scalar::new(num, den);
        let approx = ratio_to_f64(&exact);
        return Ok(EulerValue {
            places: qs.len(),
            exact: Some(exact),
            approx,
            error_bound: approx.abs() * f64::EPSILON,
        });
    }
    let sf = ratio_to_f64(s);
    let approx: f64 = qs.iter().map(|&q| local_factor_f64(m, n, q as f64, sf)).product();
    // Each factor carries a few ulps of relative error.
    let error_bound = approx.abs() * f64::EPSILON * 8.0 * (qs.len() as f64 + 1.0);
    Ok(EulerValue {
        places: qs.len(),
        exact: None,
        approx,
        error_bound,
    })
}

/// The local factor at `t = q^{-s}` as an unreduced fraction.
fn local_factor_exact(m: usize, n: usize, q: u64, s: u32) -> (BigInt, BigInt) {
    let q = BigInt::from(q);
    let qs = num_traits::pow(q.clone(), s as usize);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    // 1 - q^{a - s} = (q^s - q^a) / q^s; the q^s cancel in pairs.
    for i in 0..m {
        num *= &qs - num_traits::pow(q.clone(), i);
        den *= &qs - num_traits::pow(q.clone(), n + i);
    }
    (num, den)
}

fn local_factor_f64(m: usize, n: usize, q: f64, s: f64) -> f64 {
    (0..m)
        .map(|i| (1.0 - q.powf(i as f64 - s)) / (1.0 - q.powf((n + i) as f64 - s)))
        .product()
}

/// Correctly rounded for huge numerators and denominators.
pub fn ratio_to_f64(x: &Scalar) -> f64 {
    if let Some(v) = x.to_f64().filter(|v| v.is_finite() && *v != 0.0) {
        return v;
    }
    if x.is_zero() {
        return 0.0;
    }
    // Scale both sides down to 64 significant bits.
    let (num, den) = (x.numer().abs(), x.denom().clone());
    let nb = num.bits() as i64 - 64;
    let db = den.bits() as i64 - 64;
    let n = (num >> nb.max(0) as usize).to_f64().unwrap_or(f64::NAN);
    let d = (den >> db.max(0) as usize).to_f64().unwrap_or(f64::NAN);
    let v = n / d * 2f64.powi((nb.max(0) - db.max(0)) as i32);
    if x.is_negative() {
        -v
    } else {
        v
    }
}

/// Coefficients `a_i` for `i <= cutoff` of the Dirichlet series
/// `prod_{q in S} Z_q`, with `Z_q = sum_k a_{q,k} q^{-ks}` the local factor
/// at `q`. Index `0` is unused and zero.
pub fn global_dirichlet_coeffs_split(m: usize, n: usize, places: &SplittingData, cutoff: usize) -> Result<Vec<BigInt>, GzetaError> {
    let (m, n) = normalize_mn(m, n);
    check_mn(m, n)?;
    let local = local_multiplicative(m, n, QChoice::Symbolic)?;
    let mut acc = vec![BigInt::zero(); cutoff + 1];
    if cutoff >= 1 {
        acc[1] = BigInt::one();
    }
    let mut cache: BTreeMap<u64, Vec<BigInt>> = BTreeMap::new();
    for &q in places.cardinalities() {
        if q as usize > cutoff {
            continue;
        }
        let mut order = 0;
        let mut power = 1usize;
        while power * (q as usize) <= cutoff {
            power *= q as usize;
            order += 1;
        }
        if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(q) {
            let series = series_of_ratfn_at(&local, q, order)?;
            let coeffs = (0..=order)
                .map(|k| series.coeff_scalar(k).map(|c| c.to_integer()).ok_or(ExactError::NotAPolynomial))
                .collect::<Result<Vec<_>, _>>()?;
            e.insert(coeffs);
        }
        let local = &cache[&q];
        let mut next = acc.clone();
        let mut qk = q as usize;
        for c in local.iter().skip(1) {
            if !c.is_zero() {
                for i in 1..=cutoff / qk {
                    if !acc[i].is_zero() {
                        next[i * qk] += &acc[i] * c;
                    }
                }
            }
            qk = qk.saturating_mul(q as usize);
            if qk > cutoff {
                break;
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// The case `K = Q`: twist-isoclass counts `ã_i` of `G_{m x n}(Z)`.
pub fn global_dirichlet_coeffs(m: usize, n: usize, cutoff: usize) -> Result<Vec<BigInt>, GzetaError> {
    global_dirichlet_coeffs_split(m, n, &SplittingData::rational_primes_below(cutoff as u64 + 1), cutoff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;

    fn rf(s: &str) -> RationalFn {
        s.parse().unwrap()
    }

    #[test]
    fn f_i_small() {
        let one = OrderedSubset::new(vec![0], 1).unwrap();
        assert_eq!(f_i(1, 1, &one).unwrap(), rf("1 - X").as_poly().unwrap());
        assert_eq!(f_i(2, 3, &OrderedSubset::empty(2)).unwrap(), MultiPoly::one());
        // (2 choose {0,1})_X (X; X)_2 = (1 + X)(1 - X)(1 - X^2).
        let both = OrderedSubset::new(vec![0, 1], 2).unwrap();
        assert_eq!(f_i(2, 2, &both).unwrap(), rf("(1 + X)*(1 - X)*(1 - X^2)").as_poly().unwrap());
    }

    #[test]
    fn heisenberg_forms() {
        let expect = rf("(1 - t) / (1 - q*t)");
        assert_eq!(local_additive(1, 1, QChoice::Symbolic).unwrap(), expect);
        assert_eq!(local_multiplicative(1, 1, QChoice::Symbolic).unwrap(), expect);
        assert_eq!(local_product_form(1, 1).to_ratfn().unwrap(), expect);
        assert_eq!(local_multiplicative(1, 1, QChoice::Symbolic).unwrap().to_string(), "(1 - t) / (1 - q*t)");
    }

    #[test]
    fn additive_routes_agree() {
        for (m, n) in [(1, 2), (2, 2), (2, 3)] {
            let a = local_additive(m, n, QChoice::Symbolic).unwrap();
            assert_eq!(a, local_additive_termwise(m, n).unwrap());
            assert_eq!(a, local_multiplicative(m, n, QChoice::Symbolic).unwrap());
        }
        assert_eq!(
            local_additive(2, 2, QChoice::Symbolic).unwrap(),
            rf("(1 - t)*(1 - q*t) / ((1 - q^2*t)*(1 - q^3*t))")
        );
    }

    #[test]
    fn product_form_shapes() {
        let f = local_product_form(2, 2);
        assert_eq!(f.factors().collect::<Vec<_>>(), vec![(0, 1, 1), (1, 1, 1), (2, 1, -1), (3, 1, -1)]);
        assert_eq!(local_product_form(1, 3), local_product_form(3, 1));
        assert_eq!(f.to_string(), "(1 - t)*(1 - q*t) / ((1 - q^2*t)*(1 - q^3*t))");
        assert_eq!(rf(&f.to_string()), f.to_ratfn().unwrap());
    }

    #[test]
    fn negative_exponents_and_prefactor() {
        let f = CycloFactorization::from_factors([(-1, 1, 1), (2, 2, -2)]).unwrap().with_prefactor(-2, 1);
        assert_eq!(rf(&f.to_string()), f.to_ratfn().unwrap());
        assert_eq!(f.to_ratfn().unwrap(), rf("q^-2*t*(1 - q^-1*t) / (1 - q^2*t^2)^2"));
    }

    #[test]
    fn topological_forms() {
        assert_eq!(topological(1, 1).unwrap().to_string(), "s / (s - 1)");
        assert_eq!(topological(2, 2).unwrap(), rf("s*(s - 1) / ((s - 2)*(s - 3))"));
        assert_eq!(topological(1, 5).unwrap(), rf("s / (s - 5)"));
        let cancel = CycloFactorization::from_factors([(0, 1, 1), (0, 1, -1)]).unwrap();
        assert_eq!(topo_of_factorization(&cancel).unwrap(), RationalFn::int(1));
        let f = CycloFactorization::from_factors([(2, 1, 1), (5, 1, -1)]).unwrap();
        assert_eq!(topo_of_factorization(&f).unwrap(), rf("(s - 2) / (s - 5)"));
        let bad = CycloFactorization::from_factors([(2, 1, 1)]).unwrap();
        assert!(matches!(topo_of_factorization(&bad), Err(GzetaError::UnbalancedDegrees { .. })));
        assert!(topological(3, 2).is_err());
    }

    #[test]
    fn abscissae() {
        assert_eq!(abscissa_from_factorization(&local_product_form(2, 3)).unwrap(), ratio(4, 1));
        assert_eq!(abscissa_from_factorization(&local_product_form(1, 1)).unwrap(), ratio(1, 1));
        let c = central_product(&local_product_form(1, 4), 3).unwrap();
        assert_eq!(abscissa_from_factorization(&c).unwrap(), ratio(4, 3));
        assert_eq!(global_abscissa(&c).unwrap(), ratio(5, 3));
        assert_eq!(
            abscissa_from_factorization(&CycloFactorization::from_factors([(1, 1, 1)]).unwrap()),
            Err(GzetaError::EntireFunction)
        );
    }

    #[test]
    fn central_products() {
        let h = local_product_form(1, 1);
        assert_eq!(central_product(&h, 1).unwrap(), h);
        assert_eq!(central_product(&h, 2).unwrap().to_ratfn().unwrap(), rf("(1 - t^2) / (1 - q*t^2)"));
    }

    #[test]
    fn euler_products() {
        let none = SplittingData::new(vec![]).unwrap();
        assert_eq!(global_euler(2, 3, &none, &ratio(7, 1)).unwrap().exact, Some(Scalar::one()));
        assert!(matches!(
            global_euler(1, 1, &none, &ratio(2, 1)),
            Err(GzetaError::DivergentRegion { .. })
        ));
        let v = global_euler(1, 1, &SplittingData::rational_primes_below(100), &ratio(3, 1)).unwrap();
        assert!((v.approx - 1.36843).abs() < 3e-3, "{}", v.approx);
        // Non-integer s goes through floating point.
        let w = global_euler(1, 1, &SplittingData::rational_primes_below(100), &ratio(301, 100)).unwrap();
        assert!(w.exact.is_none() && (w.approx - v.approx).abs() < 1e-2);
    }

    #[test]
    fn splitting_data() {
        assert!(SplittingData::new(vec![2, 4, 9, 25]).is_ok());
        assert!(SplittingData::new(vec![6]).is_err());
        assert!(SplittingData::new(vec![1]).is_err());
        let s = SplittingData::parse("# places\n2\n\n3 # inert\n4\n").unwrap();
        assert_eq!(s.cardinalities(), &[2, 3, 4]);
        assert!(SplittingData::parse("2\nx\n").is_err());
        assert_eq!(primes_below(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn dirichlet_coefficients() {
        let a = global_dirichlet_coeffs(1, 2, 30).unwrap();
        assert_eq!(a[1], BigInt::one());
        for p in [2u64, 3, 5, 7] {
            assert_eq!(a[p as usize], BigInt::from(p * p - 1));
        }
        // Multiplicativity.
        assert_eq!(a[6], &a[2] * &a[3]);
        assert_eq!(a[30], &a[2] * &a[3] * &a[5]);
    }
}
