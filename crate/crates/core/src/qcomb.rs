//! q-analogue combinatorics in the indeterminate `X`: Gauss polynomials,
//! Pochhammer symbols, X-multinomials, counts of matrices of given rank
//! over a finite field, and exact checks of the two summation identities
//! behind the multiplicative formula.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactalg::{self, eval_univariate, ratfn_eq, MultiPoly, RationalFn, Scalar, Var};
use crate::limits::{guard, Limits, TooLarge};
use crate::snf::modp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QcombError {
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error(transparent)]
    TooLarge(#[from] TooLarge),
    #[error("specialization hits a pole")]
    SpecializationPole,
}

fn invalid(msg: impl Into<String>) -> QcombError {
    QcombError::InvalidArgs(msg.into())
}

/// `{i_1 < ... < i_l}` inside `[j-1]_0 = {0, ..., j-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedSubset {
    elements: Vec<usize>,
    bound: usize,
}

impl OrderedSubset {
    pub fn new(elements: Vec<usize>, bound: usize) -> Result<Self, QcombError> {
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid(format!("{elements:?} is not strictly increasing")));
        }
        if elements.last().is_some_and(|&e| e >= bound) {
            return Err(invalid(format!("{elements:?} is not contained in [{}]_0", bound as i64 - 1)));
        }
        Ok(OrderedSubset { elements, bound })
    }

    pub fn empty(bound: usize) -> Self {
        OrderedSubset {
            elements: Vec::new(),
            bound,
        }
    }

    /// All subsets of `[bound-1]_0`, ordered by size, then lexicographically.
    pub fn all(bound: usize) -> Vec<OrderedSubset> {
        let mut out: Vec<OrderedSubset> = (0u64..(1u64 << bound))
            .map(|mask| OrderedSubset {
                elements: (0..bound).filter(|&i| mask >> i & 1 == 1).collect(),
                bound,
            })
            .collect();
        out.sort_by(|a, b| a.elements.len().cmp(&b.elements.len()).then_with(|| a.elements.cmp(&b.elements)));
        out
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elements.binary_search(&i).is_ok()
    }

    /// Smallest element, or the bound itself for the empty subset; with
    /// this convention every product indexed by `bound - i_1` is empty.
    pub fn first_or_bound(&self) -> usize {
        self.elements.first().copied().unwrap_or(self.bound)
    }

    /// `I + a` inside `[bound + a - 1]_0`.
    pub fn shifted(&self, a: usize) -> OrderedSubset {
        OrderedSubset {
            elements: self.elements.iter().map(|i| i + a).collect(),
            bound: self.bound + a,
        }
    }
}

impl fmt::Display for OrderedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn x_pow(e: u32) -> MultiPoly {
    MultiPoly::var_pow(Var::X, e)
}

/// `(1 - X)(1 - X^2)...(1 - X^N)`.
pub fn q_bracket_factorial(n: u32) -> MultiPoly {
    (1..=n).fold(MultiPoly::one(), |acc, i| &acc * &(MultiPoly::one() - x_pow(i)))
}

/// The Gauss polynomial `(a choose b)_X`, built by the q-Pascal rule
/// `(a, b) = (a-1, b-1) + X^b (a-1, b)`.
pub fn gauss_binomial(a: u32, b: u32) -> Result<MultiPoly, QcombError> {
    if b > a {
        return Err(invalid(format!("gauss_binomial({a}, {b}) needs b <= a")));
    }
    let b = b.min(a - b) as usize;
    // row[k] = (r choose k)_X for the current r.
    let mut row = vec![MultiPoly::one()];
    for r in 1..=a as usize {
        let next = (0..=r.min(b))
            .map(|k| {
                let left = if k == 0 { MultiPoly::zero() } else { row[k - 1].clone() };
                match row.get(k) {
                    Some(right) => &left + &(&x_pow(k as u32) * right),
                    None => left,
                }
            })
            .collect();
        row = next;
    }
    Ok(row[b].clone())
}

/// `(base; ratio)_k = prod_{i=0}^{k-1} (1 - base * ratio^i)`.
pub fn pochhammer<R: exactalg::Ring>(base: &R, ratio: &R, k: u32) -> R {
    let one = R::one();
    let mut acc = R::one();
    let mut term = base.clone();
    for _ in 0..k {
        acc = acc.mul(&one.sub(&term));
        term = term.mul(ratio);
    }
    acc
}

/// `(j choose I)_X = (j choose i_l)(i_l choose i_{l-1})...(i_2 choose i_1)`.
pub fn x_multinomial(j: usize, i: &OrderedSubset) -> Result<MultiPoly, QcombError> {
    if i.bound() != j {
        return Err(invalid(format!("subset {i} is taken in [{}]_0, not [{}]_0", i.bound() as i64 - 1, j as i64 - 1)));
    }
    let mut acc = MultiPoly::one();
    let mut top = j;
    for &e in i.elements().iter().rev() {
        acc = &acc * &gauss_binomial(top as u32, e as u32)?;
        top = e;
    }
    Ok(acc)
}

/// `W / (1 - W)`.
pub fn gp(w: &RationalFn) -> Result<RationalFn, QcombError> {
    let den = RationalFn::int(1) - w.clone();
    w.checked_div(&den).map_err(|_| QcombError::SpecializationPole)
}

fn spow(x: &Scalar, e: u32) -> Scalar {
    num_traits::pow(x.clone(), e as usize)
}

fn gp_scalar(w: &Scalar) -> Result<Scalar, QcombError> {
    let den = Scalar::one() - w;
    if den.is_zero() {
        return Err(QcombError::SpecializationPole);
    }
    Ok(w / den)
}

/// Number of `i x j` matrices of rank `r` over `F_q`, as a polynomial in
/// `q`, from the closed formula with `k = i - r`:
/// `(j choose j-i+k)_{1/q} (q^{-k-1}; q^{-1})_{i-k} q^{(i-k)(j+k)}`.
/// For `i > j` the transpose is counted.
pub fn rank_count(i: u32, j: u32, r: u32) -> Result<MultiPoly, QcombError> {
    if i > j {
        return rank_count(j, i, r);
    }
    if r > i {
        return Err(invalid(format!("rank_count({i}, {j}, {r}) needs r <= min(i, j)")));
    }
    let k = i - r;
    let qinv = RationalFn::var_pow(Var::Q, -1);
    let binom: RationalFn = gauss_binomial(j, j - i + k)?.substitute(Var::X, &qinv);
    let poch = pochhammer(&RationalFn::var_pow(Var::Q, -(k as i64) - 1), &qinv, i - k);
    let power = RationalFn::var_pow(Var::Q, ((i - k) * (j + k)) as i64);
    let total = &(&binom * &poch) * &power;
    Ok(total.as_poly().expect("matrix counts are polynomials in q"))
}

/// [`rank_count`] at `q = p`.
pub fn rank_count_at(i: u32, j: u32, r: u32, q: u64) -> Result<BigInt, QcombError> {
    let poly = rank_count(i, j, r)?;
    let v = poly
        .eval(&[(Var::Q, Scalar::from_integer(q.into()))])
        .expect("only q occurs");
    Ok(v.to_integer())
}

/// Exhaustive count of `i x j` matrices over `F_p` of rank `r`.
pub fn brute_rank_count(i: u32, j: u32, r: u32, p: u64, limits: &Limits) -> Result<u64, QcombError> {
    if r > i.min(j) {
        return Ok(0);
    }
    let total = guard("rank counting", p, i * j, limits.rank_count_points)?;
    let (i, j) = (i as usize, j as usize);
    let mut entries = vec![0u64; i * j];
    let mut count = 0u64;
    for _ in 0..total {
        let mut m: Vec<Vec<u64>> = entries.chunks(j.max(1)).map(|c| c.to_vec()).collect();
        m.truncate(i);
        if modp::rank(&mut m, p) == r as usize {
            count += 1;
        }
        for e in entries.iter_mut() {
            *e += 1;
            if *e < p {
                break;
            }
            *e = 0;
        }
    }
    Ok(count)
}

/// Checks `(j+a choose I+a)_X (X^{i_1+1}; X)_{j-i_1}
///        = (j choose I)_X (X^{i_1+1+a}; X)_{j-i_1}`.
pub fn verify_translation_lemma(a: usize, j: usize, i: &OrderedSubset) -> Result<bool, QcombError> {
    let lhs = x_multinomial(j + a, &i.shifted(a))?;
    let base = x_multinomial(j, i)?;
    let i1 = i.first_or_bound();
    let len = (j - i1) as u32;
    let x = x_pow(1);
    let num = pochhammer(&x_pow((i1 + 1 + a) as u32), &x, len);
    let den = pochhammer(&x_pow((i1 + 1) as u32), &x, len);
    Ok(&lhs * &den == &base * &num)
}

/// Evaluation mode for the summation identity.
#[derive(Clone, Debug, PartialEq)]
pub enum SvMode {
    Symbolic,
    Specialized(Scalar, Scalar, Scalar),
}

/// Largest `j` accepted by the symbolic check unless overridden.
pub const SV_SYMBOLIC_BOUND: usize = 3;

/// Checks
/// `sum_I (j choose I)_{1/X} (Y X^{-i_1-1}; 1/X)_{j-i_1} prod_{i in I} gp((X^i Z)^{j-i})
///  = (X^{-j} Y Z; X)_j / (Z; X)_j`.
pub fn verify_sv_identity(j: usize, mode: &SvMode) -> Result<bool, QcombError> {
    verify_sv_identity_bounded(j, mode, SV_SYMBOLIC_BOUND)
}

pub fn verify_sv_identity_bounded(j: usize, mode: &SvMode, symbolic_bound: usize) -> Result<bool, QcombError> {
    if j == 0 {
        return Err(invalid("the identity is stated for j >= 1"));
    }
    match mode {
        SvMode::Symbolic => {
            if j > symbolic_bound {
                return Err(invalid(format!("symbolic check limited to j <= {symbolic_bound}")));
            }
            Ok(sv_symbolic(j))
        }
        SvMode::Specialized(x, y, z) => sv_specialized(j, x, y, z),
    }
}

fn sv_symbolic(j: usize) -> bool {
    let x = RationalFn::var(Var::X);
    let y = RationalFn::var(Var::Y);
    let z = RationalFn::var(Var::Z);
    let xinv = RationalFn::var_pow(Var::X, -1);
    let one = RationalFn::int(1);

    // W_i = (X^i Z)^{j-i}; the left side is put over prod_i (1 - W_i).
    let w: Vec<RationalFn> = (0..j)
        .map(|i| {
            let base = &RationalFn::var_pow(Var::X, i as i64) * &z;
            base.pow((j - i) as i64).expect("nonzero base")
        })
        .collect();
    let mut lhs_num = RationalFn::int(0);
    for subset in OrderedSubset::all(j) {
        let i1 = subset.first_or_bound();
        let binom: RationalFn = x_multinomial(j, &subset).expect("valid subset").substitute(Var::X, &xinv);
        let poch = pochhammer(&(&y * &RationalFn::var_pow(Var::X, -(i1 as i64) - 1)), &xinv, (j - i1) as u32);
        let mut term = &binom * &poch;
        for (i, wi) in w.iter().enumerate() {
            term = if subset.contains(i) { &term * wi } else { &term * &(&one - wi) };
        }
        lhs_num = &lhs_num + &term;
    }
    let lhs_den = w.iter().fold(one.clone(), |acc, wi| &acc * &(&one - wi));

    let rhs_num = pochhammer(&(&(&RationalFn::var_pow(Var::X, -(j as i64)) * &y) * &z), &x, j as u32);
    let rhs_den = pochhammer(&z, &x, j as u32);
    ratfn_eq(&(&lhs_num * &rhs_den), &(&rhs_num * &lhs_den))
}

fn sv_specialized(j: usize, x: &Scalar, y: &Scalar, z: &Scalar) -> Result<bool, QcombError> {
    if x.is_zero() {
        return Err(QcombError::SpecializationPole);
    }
    let xinv = x.recip();
    let mut lhs = Scalar::zero();
    for subset in OrderedSubset::all(j) {
        let i1 = subset.first_or_bound();
        let binom = eval_univariate(&x_multinomial(j, &subset)?, Var::X, &xinv).expect("polynomial in X");
        let poch = pochhammer(&(y * spow(&xinv, (i1 + 1) as u32)), &xinv, (j - i1) as u32);
        let mut term = binom * poch;
        for &i in subset.elements() {
            let wi = spow(&(spow(x, i as u32) * z), (j - i) as u32);
            term *= gp_scalar(&wi)?;
        }
        lhs += term;
    }
    let rhs_den = pochhammer(z, x, j as u32);
    if rhs_den.is_zero() {
        return Err(QcombError::SpecializationPole);
    }
    let rhs_num = pochhammer(&(spow(&xinv, j as u32) * y * z), x, j as u32);
    Ok(lhs == rhs_num / rhs_den)
}

/// One randomized specialization and its outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct SvTrial {
    pub point: [Scalar; 3],
    pub holds: bool,
}

/// Checks the identity at `trials` random rational points from a seeded
/// generator, resampling points that hit a pole.
pub fn verify_sv_identity_random(j: usize, trials: usize, seed: u64) -> Result<Vec<SvTrial>, QcombError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    let sample = |rng: &mut ChaCha8Rng| {
        let n: i64 = rng.gen_range(-12..=12);
        let d: i64 = rng.gen_range(1..=9);
        Scalar::new(n.into(), d.into())
    };
    while out.len() < trials {
        let point = [sample(&mut rng), sample(&mut rng), sample(&mut rng)];
        match verify_sv_identity(j, &SvMode::Specialized(point[0].clone(), point[1].clone(), point[2].clone())) {
            Ok(holds) => out.push(SvTrial { point, holds }),
            Err(QcombError::SpecializationPole) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;

    fn px(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn factorials() {
        assert_eq!(q_bracket_factorial(0), MultiPoly::one());
        assert_eq!(q_bracket_factorial(1), px("1 - X"));
        assert_eq!(q_bracket_factorial(3), px("(1 - X)*(1 - X^2)*(1 - X^3)"));
    }

    #[test]
    fn gauss_examples() {
        assert_eq!(gauss_binomial(5, 0).unwrap(), MultiPoly::one());
        assert_eq!(gauss_binomial(2, 1).unwrap(), px("1 + X"));
        assert_eq!(gauss_binomial(4, 2).unwrap(), px("1 + X + 2*X^2 + X^3 + X^4"));
        assert!(matches!(gauss_binomial(1, 2), Err(QcombError::InvalidArgs(_))));
    }

    #[test]
    fn gauss_matches_factorial_quotient() {
        for a in 0..=7 {
            for b in 0..=a {
                let lhs = &gauss_binomial(a, b).unwrap() * &(&q_bracket_factorial(a - b) * &q_bracket_factorial(b));
                assert_eq!(lhs, q_bracket_factorial(a), "({a} choose {b})");
            }
        }
    }

    #[test]
    fn gauss_symmetry_and_classical_limit() {
        for a in 0..=6 {
            for b in 0..=a {
                assert_eq!(gauss_binomial(a, b).unwrap(), gauss_binomial(a, a - b).unwrap());
            }
        }
        let mut binom = vec![1i64];
        for a in 0..=8u32 {
            for b in 0..=a {
                let at1 = gauss_binomial(a, b).unwrap().eval(&[(Var::X, Scalar::one())]).unwrap();
                assert_eq!(at1, Scalar::from_integer(binom[b as usize].into()));
            }
            let mut next = vec![1i64; binom.len() + 1];
            for k in 1..binom.len() {
                next[k] = binom[k - 1] + binom[k];
            }
            binom = next;
        }
    }

    #[test]
    fn pochhammer_examples() {
        let x = MultiPoly::var(Var::X);
        let y = MultiPoly::var(Var::Y);
        assert_eq!(pochhammer(&x, &y, 0), MultiPoly::one());
        assert_eq!(pochhammer(&x, &x, 2), px("(1 - X)*(1 - X^2)"));
        let qi = RationalFn::var_pow(Var::Q, -1);
        let single = pochhammer(&qi, &qi, 1);
        assert_eq!(single, "(q - 1) / q".parse::<RationalFn>().unwrap());
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(x_multinomial(3, &OrderedSubset::empty(3)).unwrap(), MultiPoly::one());
        let s = OrderedSubset::new(vec![1], 2).unwrap();
        assert_eq!(x_multinomial(2, &s).unwrap(), px("1 + X"));
        let s = OrderedSubset::new(vec![1, 2], 3).unwrap();
        assert_eq!(x_multinomial(3, &s).unwrap(), px("(1 + X + X^2)*(1 + X)"));
        assert!(OrderedSubset::new(vec![2], 2).is_err());
        assert!(OrderedSubset::new(vec![1, 1], 3).is_err());
    }

    #[test]
    fn subsets_enumeration() {
        let all = OrderedSubset::all(3);
        assert_eq!(all.len(), 8);
        assert!(all[0].is_empty());
        assert_eq!(all[7].elements(), &[0, 1, 2]);
    }

    #[test]
    fn rank_count_examples() {
        assert_eq!(rank_count(1, 1, 1).unwrap(), px("q - 1"));
        assert_eq!(rank_count_at(2, 2, 1, 2).unwrap(), BigInt::from(9));
        for (i, j) in [(1, 1), (2, 3), (3, 3)] {
            assert_eq!(rank_count(i, j, 0).unwrap(), MultiPoly::one());
        }
        assert_eq!(rank_count(3, 2, 1).unwrap(), rank_count(2, 3, 1).unwrap());
        assert!(rank_count(3, 2, 3).is_err());
    }

    #[test]
    fn rank_counts_partition_all_matrices() {
        for j in 0..=4u32 {
            for i in 0..=j {
                let total = (0..=i).fold(MultiPoly::zero(), |acc, r| &acc + &rank_count(i, j, r).unwrap());
                assert_eq!(total, MultiPoly::var_pow(Var::Q, i * j), "i={i} j={j}");
            }
        }
    }

    #[test]
    fn brute_rank_examples() {
        let lim = Limits::default();
        assert_eq!(brute_rank_count(2, 2, 2, 2, &lim).unwrap(), 6);
        assert_eq!(brute_rank_count(1, 2, 1, 3, &lim).unwrap(), 8);
        assert_eq!(brute_rank_count(2, 3, 1, 2, &lim).unwrap(), 21);
        assert_eq!(rank_count_at(2, 3, 1, 2).unwrap(), BigInt::from(21));
        let tiny = Limits {
            rank_count_points: 10,
            ..Limits::default()
        };
        assert!(matches!(brute_rank_count(2, 2, 1, 2, &tiny), Err(QcombError::TooLarge(_))));
    }

    #[test]
    fn translation_examples() {
        for j in 0..=3 {
            for s in OrderedSubset::all(j) {
                assert!(verify_translation_lemma(0, j, &s).unwrap());
            }
        }
        assert!(verify_translation_lemma(1, 2, &OrderedSubset::new(vec![0], 2).unwrap()).unwrap());
        assert!(verify_translation_lemma(2, 3, &OrderedSubset::new(vec![1], 3).unwrap()).unwrap());
    }

    #[test]
    fn sv_examples() {
        assert!(verify_sv_identity(1, &SvMode::Symbolic).unwrap());
        assert!(verify_sv_identity(2, &SvMode::Specialized(ratio(2, 1), ratio(3, 1), ratio(5, 1))).unwrap());
        // Z = 1 is a pole of the right-hand side.
        assert_eq!(
            verify_sv_identity(2, &SvMode::Specialized(ratio(2, 1), ratio(3, 1), ratio(1, 1))),
            Err(QcombError::SpecializationPole)
        );
        assert!(verify_sv_identity(4, &SvMode::Symbolic).is_err());
    }

    #[test]
    fn sv_random_is_reproducible() {
        let a = verify_sv_identity_random(3, 20, 7).unwrap();
        let b = verify_sv_identity_random(3, 20, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|t| t.holds));
    }
}
