//! Resource guards for exhaustive enumerations.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what} needs {needed} points, above the limit of {limit} (pass --unsafe-limits to override)")]
pub struct TooLarge {
    pub what: &'static str,
    pub needed: u128,
    pub limit: u128,
}

/// Caps on the number of points an enumeration may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Primitive-vector enumeration at one level, `p^{N d'}`.
    pub poincare_points: u128,
    /// Points of `F_p^{d'}` visited by kernel classification, smoothness
    /// probing and the alpha computation.
    pub classification_points: u128,
    /// Matrices visited by exhaustive rank counting, `p^{ij}`.
    pub rank_count_points: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            poincare_points: 100_000_000,
            classification_points: 10_000_000,
            rank_count_points: 10_000_000,
        }
    }
}

impl Limits {
    pub fn unlimited() -> Self {
        Limits {
            poincare_points: u128::MAX,
            classification_points: u128::MAX,
            rank_count_points: u128::MAX,
        }
    }
}

/// `p^e`, or `None` on overflow of `u128`.
pub fn checked_pow(p: u64, e: u32) -> Option<u128> {
    (p as u128).checked_pow(e)
}

pub(crate) fn guard(what: &'static str, p: u64, e: u32, limit: u128) -> Result<u128, TooLarge> {
    match checked_pow(p, e) {
        Some(n) if n <= limit => Ok(n),
        Some(n) => Err(TooLarge { what, needed: n, limit }),
        None => Err(TooLarge {
            what,
            needed: u128::MAX,
            limit,
        }),
    }
}
