//! The Poincaré series assembled from kernel classes.

use std::collections::BTreeSet;

use super::classes::{classify_kernels, enumerate_f_s, KernelClass};
use super::probe::{smoothness_probe, ProbeReport};
use super::PoincareError;
use crate::exactalg::{Monomial, MultiPoly, RationalFn, Scalar, Var};
use crate::lattice::LieLattice;
use crate::limits::Limits;

/// One summand: a sequence of classes (largest kernel first), `|F_S|`,
/// and the scalar in front of `prod (q^A t^B) / (1 - q^A t^B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TechTerm {
    pub classes: Vec<usize>,
    pub f_s: u64,
    pub coefficient: Scalar,
    pub factors: Vec<(u32, u32)>,
}

#[derive(Clone, Debug)]
pub struct TechResult {
    /// The series as a rational function in `t` with `q = p` substituted.
    pub zeta: RationalFn,
    pub classes: Vec<KernelClass>,
    pub terms: Vec<TechTerm>,
    /// The formula is only proven under the hypotheses checked here.
    pub probe: ProbeReport,
}

fn p_pow(p: u64, e: i64) -> Scalar {
    let base = Scalar::from_integer(p.into());
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// Sums over sequences `S` of nonzero-rank classes with strictly
/// decreasing kernel dimension:
/// `|F_S| q^{-(d' - d'_{c*})} prod_{c in S} q^{A_c} t^{B_c} / (1 - q^{A_c} t^{B_c})`
/// with `A_c = d' - d'_c`, `B_c = (d - d_c)/2` and `c*` the class of
/// smallest kernel in `S`.
pub fn thm_tech_eval(l: &LieLattice, p: u64, limits: &Limits) -> Result<TechResult, PoincareError> {
    let kc = classify_kernels(l, p, limits)?;
    let probe = smoothness_probe(l, p, limits)?;
    let (d, dp) = (l.d(), l.d_prime());
    let ab = |c: &KernelClass| ((dp - c.d_prime_c) as u32, ((d - c.d_c) / 2) as u32);

    // Nonzero-rank classes grouped by kernel dimension, largest first.
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for (i, c) in kc.classes.iter().enumerate().filter(|(_, c)| c.d_c < d) {
        match levels.last_mut() {
            Some(level) if kc.classes[level[0]].d_c == c.d_c => level.push(i),
            _ => levels.push(vec![i]),
        }
    }
    let denominators: BTreeSet<(u32, u32)> = levels.iter().flatten().map(|&i| ab(&kc.classes[i])).collect();

    // Each level contributes nothing or one of its classes.
    let mut sequences: Vec<Vec<usize>> = vec![Vec::new()];
    for level in &levels {
        let mut next = Vec::with_capacity(sequences.len() * (level.len() + 1));
        for s in &sequences {
            next.push(s.clone());
            for &c in level {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        sequences = next;
    }

    let mut terms = Vec::with_capacity(sequences.len());
    let mut num = MultiPoly::zero();
    for seq in sequences {
        let f_s = enumerate_f_s(l, &kc, &seq)?;
        if f_s == 0 {
            continue;
        }
        let factors: Vec<(u32, u32)> = seq.iter().map(|&c| ab(&kc.classes[c])).collect();
        let prefactor = seq.last().map_or(0, |&c| ab(&kc.classes[c]).0 as i64);
        let a_sum: i64 = factors.iter().map(|f| f.0 as i64).sum();
        let b_sum: u32 = factors.iter().map(|f| f.1).sum();
        let coefficient = Scalar::from_integer(f_s.into()) * p_pow(p, a_sum - prefactor);

        let mut part = MultiPoly::term(coefficient.clone(), Monomial::var(Var::T, b_sum));
        for &(a, b) in denominators.iter().filter(|f| !factors.contains(f)) {
            part = &part * &one_minus(p, a, b);
        }
        num = &num + &part;
        terms.push(TechTerm {
            classes: seq,
            f_s,
            coefficient,
            factors,
        });
    }
    let den = denominators.iter().fold(MultiPoly::one(), |acc, &(a, b)| &acc * &one_minus(p, a, b));
    let zeta = RationalFn::new(num, den)?.normalize_sign();
    Ok(TechResult {
        zeta,
        classes: kc.classes,
        terms,
        probe,
    })
}

/// `1 - p^a t^b`.
fn one_minus(p: u64, a: u32, b: u32) -> MultiPoly {
    MultiPoly::one() - MultiPoly::term(p_pow(p, a as i64), Monomial::var(Var::T, b))
}
