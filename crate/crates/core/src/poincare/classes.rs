//! Stratification of `F_p^{d'}` by kernel dimensions, and the sets `F_S`
//! of chains through a sequence of strata.

use rayon::prelude::*;

use super::{check_prime, decode, encode, PoincareError};
use crate::lattice::LieLattice;
use crate::limits::{guard, Limits};
use crate::snf::modp;

/// How many members of each class are kept as representatives.
const REPRESENTATIVES: usize = 4;

/// Points `x` of `F_p^{d'}` sharing `d_c = dim ker R(x)` and
/// `d'_c = dim (ker R(x))'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelClass {
    pub d_c: usize,
    pub d_prime_c: usize,
    pub members: u64,
    /// The first few members in lexicographic order.
    pub representatives: Vec<Vec<u64>>,
}

impl KernelClass {
    /// `rk R(x)`, which is even.
    pub fn rank(&self, d: usize) -> usize {
        d - self.d_c
    }
}

/// Result of [`classify_kernels`]: the classes, ordered by decreasing
/// `d_c` then decreasing `d'_c`, and the class of every point.
#[derive(Clone, Debug)]
pub struct KernelClassification {
    pub p: u64,
    pub d: usize,
    pub d_prime: usize,
    pub classes: Vec<KernelClass>,
    class_of: Vec<u32>,
}

impl KernelClassification {
    pub fn class_index(&self, x: &[u64]) -> usize {
        self.class_of[encode(x, self.p)] as usize
    }

    /// Index of the class with the given invariants.
    pub fn find(&self, d_c: usize, d_prime_c: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.d_c == d_c && c.d_prime_c == d_prime_c)
    }

    pub fn points(&self) -> usize {
        self.class_of.len()
    }
}

/// Basis of `ker S(x)` over `F_p` for the trimmed matrix, and an echelon
/// basis of the span of all brackets of kernel vectors.
pub(crate) fn kernel_data(l: &LieLattice, cm: &crate::lattice::CommutatorMatrix, x: &[u64], p: u64) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let m = cm.evaluate_mod(x, p).expect("length checked by caller");
    let ker = modp::kernel(&m, cm.size(), p);
    let (derived, _) = derived_span(l, &ker, p);
    (ker, derived)
}

/// Partitions `F_p^{d'}` into kernel classes.
pub fn classify_kernels(l: &LieLattice, p: u64, limits: &Limits) -> Result<KernelClassification, PoincareError> {
    check_prime(p)?;
    let dp = l.d_prime();
    let total = guard("kernel classification", p, dp as u32, limits.classification_points)?;
    let cm = l.commutator_matrix(true);
    let invariants: Vec<(usize, usize)> = (0..total)
        .into_par_iter()
        .map(|index| {
            let x = decode(index, p, dp);
            let (ker, derived) = kernel_data(l, &cm, &x, p);
            (ker.len() + dp, derived.len())
        })
        .collect();

    let mut keys: Vec<(usize, usize)> = invariants.clone();
    keys.sort_unstable_by(|a, b| b.cmp(a));
    keys.dedup();
    let mut classes: Vec<KernelClass> = keys
        .iter()
        .map(|&(d_c, d_prime_c)| KernelClass {
            d_c,
            d_prime_c,
            members: 0,
            representatives: Vec::new(),
        })
        .collect();
    let mut class_of = Vec::with_capacity(invariants.len());
    for (index, key) in invariants.iter().enumerate() {
        let c = keys.binary_search_by(|k| key.cmp(k)).expect("key present");
        let class = &mut classes[c];
        class.members += 1;
        if class.representatives.len() < REPRESENTATIVES {
            class.representatives.push(decode(index as u128, p, dp));
        }
        class_of.push(c as u32);
    }
    Ok(KernelClassification {
        p,
        d: l.d(),
        d_prime: dp,
        classes,
        class_of,
    })
}

/// `|F_S|`, counted as chains of kernels. A point `y` of the first class
/// (largest kernel) fixes `K = ker R(y)`. A step picks a functional on
/// the derived algebra `K'`, i.e. a vector of `F_p^{d'}` modulo the
/// annihilator of `K'`, and passes to the radical of the induced
/// alternating form on `K`; the radical must have the invariants of the
/// next class. Over any adapted basis this is `y + x` with `x` supported
/// on the kernel block, so the count agrees with perturbing `y` inside
/// `(ker R(y))'` whenever that perturbation keeps the matrix block
/// diagonal, and it does not depend on coordinates.
pub fn enumerate_f_s(l: &LieLattice, kc: &KernelClassification, seq: &[usize]) -> Result<u64, PoincareError> {
    let dims: Vec<usize> = seq.iter().map(|&c| kc.classes[c].d_c).collect();
    if dims.windows(2).any(|w| w[0] <= w[1]) {
        return Err(PoincareError::NotASequence(dims));
    }
    if seq.is_empty() {
        return Ok(1);
    }
    let cm = l.commutator_matrix(true);
    let p = kc.p;
    let first = seq[0] as u32;
    let count = (0..kc.points())
        .into_par_iter()
        .filter(|&i| kc.class_of[i] == first)
        .map(|i| {
            let (ker, _) = kernel_data(l, &cm, &decode(i as u128, p, kc.d_prime), p);
            chains_from(l, kc, &ker, &seq[1..])
        })
        .sum();
    Ok(count)
}

/// Echelon basis of the span of brackets of `k`, with its pivot columns.
fn derived_span(l: &LieLattice, k: &[Vec<u64>], p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for a in 0..k.len() {
        for b in (a + 1)..k.len() {
            let v = l.bracket_mod(&k[a], &k[b], p);
            if v.iter().any(|&c| c != 0) {
                rows.push(v);
            }
        }
    }
    if rows.is_empty() {
        return (rows, Vec::new());
    }
    let pivots = modp::rref(&mut rows, p);
    rows.truncate(pivots.len());
    (rows, pivots)
}

fn chains_from(l: &LieLattice, kc: &KernelClassification, k: &[Vec<u64>], rest: &[usize]) -> u64 {
    let Some((&next, tail)) = rest.split_first() else {
        return 1;
    };
    let p = kc.p;
    let target = &kc.classes[next];
    let (_, pivots) = derived_span(l, k, p);
    let e = pivots.len();
    let n = k.len();
    // Coordinates of [k_a, k_b] in the echelon basis: its pivot entries.
    let mut coords = vec![vec![vec![0u64; e]; n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            let v = l.bracket_mod(&k[a], &k[b], p);
            for (i, &pc) in pivots.iter().enumerate() {
                coords[a][b][i] = v[pc];
                coords[b][a][i] = (p - v[pc]) % p;
            }
        }
    }
    let mut total = 0;
    let mut lambda = vec![0u64; e];
    for _ in 0..(p as u128).pow(e as u32) {
        let form: Vec<Vec<u64>> = coords
            .iter()
            .map(|row| row.iter().map(|c| c.iter().zip(&lambda).fold(0, |acc, (x, y)| (acc + x * y) % p)).collect())
            .collect();
        let radical = modp::kernel(&form, n, p);
        if radical.len() + kc.d_prime == target.d_c {
            let sub: Vec<Vec<u64>> = radical
                .iter()
                .map(|c| {
                    let mut v = vec![0u64; k[0].len()];
                    for (ci, ka) in c.iter().zip(k) {
                        for (vj, kj) in v.iter_mut().zip(ka) {
                            *vj = (*vj + ci * kj) % p;
                        }
                    }
                    v
                })
                .collect();
            if derived_span(l, &sub, p).1.len() == target.d_prime_c {
                total += chains_from(l, kc, &sub, tail);
            }
        }
        for c in lambda.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
    total
}
