//! Finite checks of geometric smoothness of rank loci.
//!
//! For each nonzero `x` in `F_p^{d'}` a few lifts are tried in turn: the
//! canonical one (entries in `[0, p)`), the balanced one (entries in
//! `(-p/2, p/2]`), then canonical plus `p u` for small sign vectors `u`.
//! (1) The first lift whose commutator matrix has Smith form `B^k`, with
//! `k` the rank mod `p`, certifies the point; (2) the derived sublattice of
//! its integral kernel must then be isolated at `p`. If no tried lift
//! passes (1) the point is inconclusive; a failure of (2) is a genuine
//! counterexample.
//!
//! The origin is skipped: only primitive vectors enter the Poincaré series,
//! and every nonzero reduction is the image of a primitive vector.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::{check_prime, decode, PoincareError};
use crate::lattice::LieLattice;
use crate::limits::{guard, Limits};
use crate::snf::{integer_kernel_basis, rank_mod_p, smith_normal_form, snf_equals_B, valuation, CanonicalB, IntMatrix, Valuation};

/// How many inconclusive points are listed in a report.
const LISTED: usize = 8;

/// Lifts tried per point before giving up.
const MAX_LIFTS: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeStatus {
    Pass,
    Fail { witness: Vec<u64> },
    Inconclusive { points: Vec<Vec<u64>>, total: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeReport {
    pub status: ProbeStatus,
    pub checked: u64,
}

impl ProbeReport {
    pub fn label(&self) -> &'static str {
        match self.status {
            ProbeStatus::Pass => "PASS",
            ProbeStatus::Fail { .. } => "FAIL",
            ProbeStatus::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }
}

fn fmt_point(x: &[u64]) -> String {
    let parts: Vec<String> = x.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl fmt::Display for ProbeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.status {
            ProbeStatus::Pass => write!(f, "PASS ({} points checked)", self.checked),
            ProbeStatus::Fail { witness } => {
                write!(f, "FAIL: derived kernel not isolated at x = {}", fmt_point(witness))
            }
            ProbeStatus::Inconclusive { points, total } => {
                let listed: Vec<String> = points.iter().map(|x| fmt_point(x)).collect();
                write!(
                    f,
                    "INCONCLUSIVE at condition (1): no tried lift has the expected Smith form at {total} point(s), e.g. {}",
                    listed.join(", ")
                )
            }
        }
    }
}

enum PointOutcome {
    Ok,
    Inconclusive,
    Fail,
}

/// Candidate lifts of `x`, in the order they are tried.
fn lifts(x: &[u64], p: u64) -> impl Iterator<Item = Vec<BigInt>> + '_ {
    let canonical: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
    let half = p / 2;
    let balanced: Vec<BigInt> = x
        .iter()
        .map(|&c| if c > half { BigInt::from(c) - BigInt::from(p) } else { BigInt::from(c) })
        .collect();
    let n = x.len();
    // Sign vectors u in {-1, 0, 1}^n by increasing support size.
    let shifted = (1..=n).flat_map(move |w| {
        crate::qcomb::OrderedSubset::all(n)
            .into_iter()
            .filter(move |s| s.len() == w)
            .flat_map(move |s| {
                let support = s.elements().to_vec();
                (0u64..1 << w).map(move |signs| {
                    let mut v: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
                    for (bit, &i) in support.iter().enumerate() {
                        let step = BigInt::from(p);
                        if signs >> bit & 1 == 1 {
                            v[i] -= step;
                        } else {
                            v[i] += step;
                        }
                    }
                    v
                })
            })
    });
    std::iter::once(canonical.clone())
        .chain(std::iter::once(balanced).filter(move |b| *b != canonical))
        .chain(shifted)
        .take(MAX_LIFTS)
}

fn probe_point(l: &LieLattice, cm: &crate::lattice::CommutatorMatrix, x: &[u64], p: u64) -> PointOutcome {
    let mut found = None;
    for lift in lifts(x, p) {
        let m = cm.evaluate(&lift).expect("length matches");
        let k = rank_mod_p(&m, p);
        let b = CanonicalB::new(m.rows(), m.cols(), k).expect("rank bounded by size");
        if snf_equals_B(&m, &b, p) {
            found = Some(m);
            break;
        }
    }
    let Some(m) = found else {
        return PointOutcome::Inconclusive;
    };
    let ker = integer_kernel_basis(&m);
    let mut rows = Vec::new();
    for a in 0..ker.len() {
        for c in (a + 1)..ker.len() {
            let u: Vec<i64> = ker[a].iter().map(to_i64).collect();
            let v: Vec<i64> = ker[c].iter().map(to_i64).collect();
            rows.push(l.bracket_of(&u, &v));
        }
    }
    if rows.is_empty() || l.d_prime() == 0 {
        return PointOutcome::Ok;
    }
    let snf = smith_normal_form(&IntMatrix::from_rows(&rows));
    let isolated = snf.diagonal[..snf.rank].iter().all(|e| valuation(e, p) == Valuation::Finite(0));
    if isolated {
        PointOutcome::Ok
    } else {
        PointOutcome::Fail
    }
}

fn to_i64(x: &BigInt) -> i64 {
    i64::try_from(x).expect("kernel coordinates fit in i64")
}

pub fn smoothness_probe(l: &LieLattice, p: u64, limits: &Limits) -> Result<ProbeReport, PoincareError> {
    check_prime(p)?;
    let dp = l.d_prime();
    let total = guard("smoothness probe", p, dp as u32, limits.classification_points)?;
    let cm = l.commutator_matrix(true);
    let outcomes: Vec<(u128, PointOutcome)> = (1..total)
        .into_par_iter()
        .map(|index| (index, probe_point(l, &cm, &decode(index, p, dp), p)))
        .collect();

    let mut inconclusive = Vec::new();
    let mut total_inconclusive = 0u64;
    for (index, outcome) in &outcomes {
        match outcome {
            PointOutcome::Fail => {
                return Ok(ProbeReport {
                    status: ProbeStatus::Fail {
                        witness: decode(*index, p, dp),
                    },
                    checked: outcomes.len() as u64,
                });
            }
            PointOutcome::Inconclusive => {
                total_inconclusive += 1;
                if inconclusive.len() < LISTED {
                    inconclusive.push(decode(*index, p, dp));
                }
            }
            PointOutcome::Ok => {}
        }
    }
    let status = if total_inconclusive == 0 {
        ProbeStatus::Pass
    } else {
        ProbeStatus::Inconclusive {
            points: inconclusive,
            total: total_inconclusive,
        }
    };
    Ok(ProbeReport {
        status,
        checked: outcomes.len() as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_g_mn;

    #[test]
    fn family_passes() {
        for (m, n) in [(1, 1), (1, 2), (2, 2)] {
            let g = make_g_mn(m, n).unwrap();
            for p in [2, 3] {
                assert_eq!(smoothness_probe(&g, p, &Limits::default()).unwrap().status, ProbeStatus::Pass);
            }
        }
    }

    #[test]
    fn abelian_passes() {
        let a = LieLattice::from_brackets("ab", 2, 0, &[]).unwrap();
        assert_eq!(smoothness_probe(&a, 2, &Limits::default()).unwrap().status, ProbeStatus::Pass);
    }

    #[test]
    fn rescaled_is_inconclusive() {
        for p in [2u64, 3] {
            let r = LieLattice::from_brackets("rescaled", 3, 1, &[(0, 1, vec![p as i64])]).unwrap();
            let rep = smoothness_probe(&r, p, &Limits::default()).unwrap();
            assert!(matches!(rep.status, ProbeStatus::Inconclusive { .. }), "{rep}");
        }
    }

    #[test]
    fn non_isolated_kernel_fails() {
        // [e1, e2] = 2 z2, [e3, e4] = z1: at x = (1, 0) the lift has Smith
        // form B^2, its kernel is spanned by e1, e2, and 2 z2 is not isolated.
        let l = LieLattice::from_brackets("bad", 6, 2, &[(0, 1, vec![0, 2]), (2, 3, vec![1, 0])]).unwrap();
        let rep = smoothness_probe(&l, 2, &Limits::default()).unwrap();
        assert!(matches!(rep.status, ProbeStatus::Fail { .. }), "{rep}");
    }
}
