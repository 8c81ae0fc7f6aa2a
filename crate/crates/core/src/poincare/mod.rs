//! Poincaré series of commutator matrices.
//!
//! Two independent routes are provided: [`brute_poincare`] enumerates
//! primitive vectors modulo `p^N` and reads off elementary-divisor
//! patterns, while [`thm_tech_eval`] assembles the series from the
//! stratification of `F_p^{d'}` by kernel dimensions. [`smoothness_probe`]
//! checks the finite-precision hypotheses under which the two agree and
//! [`alpha`] computes the abscissa invariant from the same strata.
//!
//! Everything runs on the trimmed commutator matrix; kernel dimensions are
//! reported for the full matrix, i.e. shifted by `d'`.

mod alpha;
mod brute;
mod classes;
mod probe;
mod tech;

use thiserror::Error;

use crate::exactalg::ExactError;
use crate::limits::TooLarge;
use crate::snf::SnfError;

pub use alpha::{alpha, AlphaReport, AlphaStratum};
pub use brute::{brute_poincare, pattern_counts, patterns_up_to, PatternKey};
pub use classes::{classify_kernels, enumerate_f_s, KernelClass, KernelClassification};
pub use probe::{smoothness_probe, ProbeReport, ProbeStatus};
pub use tech::{thm_tech_eval, TechResult, TechTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoincareError {
    #[error(transparent)]
    TooLarge(#[from] TooLarge),
    #[error("classes do not form a sequence: kernel dimensions {0:?} are not strictly decreasing")]
    NotASequence(Vec<usize>),
    #[error("every functional is degenerate: the lattice is abelian modulo p")]
    NoAdmissibleOmega,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error(transparent)]
    Snf(#[from] SnfError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub(crate) fn check_prime(p: u64) -> Result<(), PoincareError> {
    let prime = p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| !p.is_multiple_of(k));
    // Residues are multiplied in u64, so p must stay below 2^32.
    if prime && p < (1 << 32) {
        Ok(())
    } else {
        Err(PoincareError::NotPrime(p))
    }
}

/// Coordinates of point number `index` of `(Z/base)^len`, most significant
/// first, so index order is lexicographic order.
pub(crate) fn decode(mut index: u128, base: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for slot in out.iter_mut().rev() {
        *slot = (index % base as u128) as u64;
        index /= base as u128;
    }
    out
}

pub(crate) fn encode(v: &[u64], base: u64) -> usize {
    v.iter().fold(0usize, |acc, &x| acc * base as usize + x as usize)
}
