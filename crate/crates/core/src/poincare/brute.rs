//! Direct enumeration of the Poincaré series.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::{check_prime, decode, PoincareError};
use crate::exactalg::{DirichletTrunc, Scalar};
use crate::lattice::LieLattice;
use crate::limits::{guard, Limits};
use crate::qcomb::OrderedSubset;
use crate::snf::nu_vector;

/// A label `(I, r_I)` of one summand of the Poincaré series: `I` inside
/// `[h-1]_0`, with a positive multiplicity `r_j` per element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternKey {
    pub subset: OrderedSubset,
    pub r: Vec<u32>,
}

impl PatternKey {
    pub fn h(&self) -> usize {
        self.subset.bound()
    }

    /// `N = sum r_j`, the level at which the pattern is counted.
    pub fn level(&self) -> u32 {
        self.r.iter().sum()
    }

    /// `sum_j r_j (h - i_j)`, the exponent of `t`.
    pub fn weight(&self) -> u32 {
        self.subset
            .elements()
            .iter()
            .zip(&self.r)
            .map(|(&i, &r)| r * (self.h() - i) as u32)
            .sum()
    }

    /// The ν-vector counted by this pattern: with `i_0 = 0`,
    /// `i_{l+1} = h` and `mu_j = i_{j+1} - i_j`, it is `mu_l` zeros, then
    /// `r_l` repeated `mu_{l-1}` times, `r_l + r_{l-1}` repeated
    /// `mu_{l-2}` times, and so on up to `N` repeated `mu_0` times.
    pub fn target(&self) -> Vec<u32> {
        let el = self.subset.elements();
        let l = el.len();
        let bound = |j: usize| -> usize {
            match j {
                0 => 0,
                _ if j == l + 1 => self.h(),
                _ => el[j - 1],
            }
        };
        let mut out = Vec::with_capacity(self.h());
        let mut value = 0u32;
        for j in (0..=l).rev() {
            let mu = bound(j + 1) - bound(j);
            out.extend(std::iter::repeat_n(value, mu));
            if j >= 1 {
                value += self.r[j - 1];
            }
        }
        out
    }
}

impl fmt::Display for PatternKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r: Vec<String> = self.r.iter().map(|x| x.to_string()).collect();
        write!(f, "I={} r=({})", self.subset, r.join(", "))
    }
}

/// All nonempty patterns for `h` with weight at most `max_weight`.
pub fn patterns_up_to(h: usize, max_weight: u32) -> Vec<PatternKey> {
    let mut out = Vec::new();
    for subset in OrderedSubset::all(h).into_iter().filter(|s| !s.is_empty()) {
        let coeffs: Vec<u32> = subset.elements().iter().map(|&i| (h - i) as u32).collect();
        let mut r = vec![1u32; coeffs.len()];
        // Odometer over r with the weight bound pruning each position.
        loop {
            let w: u32 = r.iter().zip(&coeffs).map(|(a, b)| a * b).sum();
            if w <= max_weight {
                out.push(PatternKey {
                    subset: subset.clone(),
                    r: r.clone(),
                });
            }
            let mut pos = 0;
            loop {
                if pos == r.len() {
                    break;
                }
                r[pos] += 1;
                let w: u32 = r.iter().zip(&coeffs).map(|(a, b)| a * b).sum();
                if w <= max_weight {
                    break;
                }
                r[pos] = 1;
                pos += 1;
            }
            if pos == r.len() {
                break;
            }
        }
    }
    out.sort_by_key(|k| (k.weight(), k.level(), k.subset.clone(), k.r.clone()));
    out
}

/// `|N^I_{r_I}|` for every pattern of weight at most `max_weight`, by
/// enumerating the primitive vectors of `(Z/p^N)^{d'}` once per level.
pub fn pattern_counts(l: &LieLattice, p: u64, max_weight: u32, limits: &Limits) -> Result<Vec<(PatternKey, u64)>, PoincareError> {
    check_prime(p)?;
    let cm = l.commutator_matrix(true);
    let h = cm.size() / 2;
    let dp = l.d_prime();
    let patterns = patterns_up_to(h, max_weight);
    let max_level = patterns.iter().map(|k| k.level()).max().unwrap_or(0);
    for n in 1..=max_level {
        guard("Poincaré enumeration", p, n * dp as u32, limits.poincare_points)?;
    }

    let mut out = Vec::with_capacity(patterns.len());
    for n in 1..=max_level {
        let modulus = p.pow(n);
        let total = (modulus as u128).pow(dp as u32);
        let histogram: HashMap<Vec<u32>, u64> = (0..total)
            .into_par_iter()
            .try_fold(HashMap::new, |mut acc: HashMap<Vec<u32>, u64>, index| {
                let w = decode(index, modulus, dp);
                if w.iter().all(|x| x % p == 0) {
                    return Ok(acc);
                }
                let lift: Vec<BigInt> = w.iter().map(|&x| BigInt::from(x)).collect();
                let nu = nu_vector(&cm, &lift, n, p)?;
                *acc.entry(nu.entries).or_insert(0) += 1;
                Ok::<_, PoincareError>(acc)
            })
            .try_reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                Ok(a)
            })?;
        for key in patterns.iter().filter(|k| k.level() == n) {
            let count = histogram.get(&key.target()).copied().unwrap_or(0);
            out.push((key.clone(), count));
        }
    }
    out.sort_by_key(|(k, _)| (k.weight(), k.level(), k.subset.clone(), k.r.clone()));
    Ok(out)
}

/// The Poincaré series of the trimmed commutator matrix of `l` at `p`,
/// truncated at `t^{max_weight}`.
pub fn brute_poincare(l: &LieLattice, p: u64, max_weight: u32, limits: &Limits) -> Result<DirichletTrunc, PoincareError> {
    let counts = pattern_counts(l, p, max_weight, limits)?;
    let mut coeffs = vec![0u64; max_weight as usize + 1];
    coeffs[0] = 1;
    for (key, c) in counts {
        coeffs[key.weight() as usize] += c;
    }
    let coeffs = coeffs.into_iter().map(|c| Scalar::from_integer(c.into())).collect();
    Ok(DirichletTrunc::from_scalars(max_weight as usize, coeffs, p))
}
