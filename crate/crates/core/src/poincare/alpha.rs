//! The abscissa invariant: the largest root of
//! `rho_omega(s) = 2(d' - dim rad(omega)') - (d - dim rad(omega)) s`
//! over functionals `omega` on the derived sublattice. A functional is
//! identified with `x` in `F_p^{d'}` acting on bracket coordinates, so
//! `rad(omega) = ker R(x)`. Functionals with `rad(omega)` the whole
//! algebra make `rho_omega` vanish identically and are skipped.

use super::classes::classify_kernels;
use super::PoincareError;
use crate::exactalg::Scalar;
use crate::lattice::LieLattice;
use crate::limits::Limits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaStratum {
    pub dim_rad: usize,
    pub dim_rad_derived: usize,
    pub members: u64,
    /// `None` for the degenerate stratum.
    pub root: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaReport {
    pub alpha: Scalar,
    /// Lexicographically first functional attaining the maximum.
    pub witness: Vec<u64>,
    pub strata: Vec<AlphaStratum>,
}

pub fn alpha(l: &LieLattice, p: u64, limits: &Limits) -> Result<AlphaReport, PoincareError> {
    let kc = classify_kernels(l, p, limits)?;
    let (d, dp) = (l.d(), l.d_prime());
    let mut strata = Vec::new();
    let mut best: Option<(Scalar, Vec<u64>)> = None;
    for class in &kc.classes {
        // The origin is not a functional; drop it from its stratum.
        let origin_here = class.representatives.first().is_some_and(|x| x.iter().all(|&c| c == 0));
        let members = class.members - origin_here as u64;
        if members == 0 {
            continue;
        }
        let root = (class.d_c < d).then(|| {
            Scalar::new(
                (2 * (dp - class.d_prime_c) as i64).into(),
                ((d - class.d_c) as i64).into(),
            )
        });
        if let Some(r) = &root {
            let witness = if origin_here {
                first_nonzero_member(&kc, class.d_c, class.d_prime_c)
            } else {
                class.representatives[0].clone()
            };
            let better = match &best {
                None => true,
                Some((b, w)) => r > b || (r == b && witness < *w),
            };
            if better {
                best = Some((r.clone(), witness));
            }
        }
        strata.push(AlphaStratum {
            dim_rad: class.d_c,
            dim_rad_derived: class.d_prime_c,
            members,
            root,
        });
    }
    let (alpha, witness) = best.ok_or(PoincareError::NoAdmissibleOmega)?;
    Ok(AlphaReport { alpha, witness, strata })
}

fn first_nonzero_member(kc: &super::KernelClassification, d_c: usize, d_prime_c: usize) -> Vec<u64> {
    let c = kc.find(d_c, d_prime_c).expect("class exists");
    kc.classes[c]
        .representatives
        .iter()
        .find(|x| x.iter().any(|&v| v != 0))
        .cloned()
        .expect("a stratum with a nonzero member lists one among its first representatives")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ratio;
    use crate::lattice::make_g_mn;

    #[test]
    fn heisenberg() {
        let h = make_g_mn(1, 1).unwrap();
        let r = alpha(&h, 5, &Limits::default()).unwrap();
        assert_eq!(r.alpha, ratio(1, 1));
        assert_eq!(r.witness, vec![1]);
    }

    #[test]
    fn family() {
        for (m, n) in [(1, 2), (2, 2), (2, 3)] {
            let g = make_g_mn(m, n).unwrap();
            let r = alpha(&g, 2, &Limits::default()).unwrap();
            assert_eq!(r.alpha, ratio((m + n - 1) as i64, 1));
        }
    }

    #[test]
    fn abelian_summand_does_not_matter() {
        let h = make_g_mn(1, 1).unwrap().direct_sum_abelian(2);
        assert_eq!(alpha(&h, 3, &Limits::default()).unwrap().alpha, ratio(1, 1));
    }

    #[test]
    fn degenerate_only() {
        let r = LieLattice::from_brackets("rescaled", 3, 1, &[(0, 1, vec![2])]).unwrap();
        assert_eq!(alpha(&r, 2, &Limits::default()), Err(PoincareError::NoAdmissibleOmega));
    }
}
