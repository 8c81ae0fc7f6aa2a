use num_traits::Zero;

use super::{ExactError, Monomial, MultiPoly, RationalFn, Scalar, Var};

/// Whether series coefficients are polynomials in `q` or numbers at `q = p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QMode {
    Symbolic,
    Numeric(u64),
}

/// A power series in `t` truncated after `t^order`. For a local zeta
/// function the coefficient of `t^k` is the number of twist-isoclasses of
/// degree `p^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletTrunc {
    order: usize,
    coeffs: Vec<MultiPoly>,
    mode: QMode,
}

impl DirichletTrunc {
    pub fn new(order: usize, mut coeffs: Vec<MultiPoly>, mode: QMode) -> Self {
        coeffs.resize(order + 1, MultiPoly::zero());
        coeffs.truncate(order + 1);
        DirichletTrunc { order, coeffs, mode }
    }

    pub fn from_scalars(order: usize, coeffs: Vec<Scalar>, p: u64) -> Self {
        Self::new(
            order,
            coeffs.into_iter().map(MultiPoly::constant).collect(),
            QMode::Numeric(p),
        )
    }

    pub fn one(order: usize, mode: QMode) -> Self {
        Self::new(order, vec![MultiPoly::one()], mode)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mode(&self) -> QMode {
        self.mode
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &MultiPoly {
        &self.coeffs[k]
    }

    /// Coefficient of `t^k` as a number; `None` if it still involves `q`.
    pub fn coeff_scalar(&self, k: usize) -> Option<Scalar> {
        self.coeffs.get(k)?.as_constant()
    }

    pub fn mul_trunc(&self, other: &DirichletTrunc) -> DirichletTrunc {
        let order = self.order.min(other.order);
        let mut out = vec![MultiPoly::zero(); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                out[i + j] = &out[i + j] + &(&self.coeffs[i] * &other.coeffs[j]);
            }
        }
        DirichletTrunc::new(order, out, self.mode)
    }

    /// Specialises a symbolic series at `q = p`.
    pub fn at_q(&self, p: u64) -> DirichletTrunc {
        let q = Scalar::from_integer(p.into());
        DirichletTrunc::new(
            self.order,
            self.coeffs.iter().map(|c| c.eval_var(Var::Q, &q)).collect(),
            QMode::Numeric(p),
        )
    }

    /// The truncated polynomial `sum_k c_k t^k`.
    pub fn to_poly(&self) -> MultiPoly {
        let mut acc = MultiPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            acc = &acc + &c.mul_monomial(&Monomial::var(Var::T, k as u32));
        }
        acc
    }
}

/// Truncation of `1/(1 - q^a t^b) = sum_j q^{aj} t^{bj}`.
pub fn expand_factor(a: i64, b: u32, order: usize) -> Result<DirichletTrunc, ExactError> {
    assert!(b >= 1, "t-exponent of a cyclotomic factor must be positive");
    if a < 0 {
        return Err(ExactError::NegativePower(a));
    }
    let mut coeffs = vec![MultiPoly::zero(); order + 1];
    let mut j = 0usize;
    while j * (b as usize) <= order {
        coeffs[j * b as usize] = MultiPoly::var_pow(Var::Q, (a as u32) * j as u32);
        j += 1;
    }
    Ok(DirichletTrunc::new(order, coeffs, QMode::Symbolic))
}

fn check_vars(f: &RationalFn) -> Result<(), ExactError> {
    for v in f.variables() {
        if v != Var::Q && v != Var::T {
            return Err(ExactError::UnexpectedVariable(v));
        }
    }
    Ok(())
}

fn long_division(num: &MultiPoly, den: &MultiPoly, order: usize) -> Result<Vec<MultiPoly>, ExactError> {
    let n = num.coefficients_in(Var::T);
    let d = den.coefficients_in(Var::T);
    let d0 = d
        .first()
        .and_then(|c| c.as_constant())
        .filter(|c| !c.is_zero())
        .ok_or(ExactError::NonUnitDenominator)?;
    let inv = d0.recip();
    let mut out: Vec<MultiPoly> = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = n.get(k).cloned().unwrap_or_else(MultiPoly::zero);
        for i in 1..=k.min(d.len().saturating_sub(1)) {
            if d[i].is_zero() {
                continue;
            }
            acc = &acc - &(&d[i] * &out[k - i]);
        }
        out.push(acc.scale(&inv));
    }
    Ok(out)
}

/// Power-series expansion in `t` of a rational function in `q` and `t`.
/// The denominator must be invertible at `t = 0` once common monomial
/// factors are cancelled.
pub fn series_of_ratfn(f: &RationalFn, order: usize) -> Result<DirichletTrunc, ExactError> {
    check_vars(f)?;
    let r = f.reduce_monomial_content();
    let coeffs = long_division(r.num(), r.den(), order)?;
    Ok(DirichletTrunc::new(order, coeffs, QMode::Symbolic))
}

/// As [`series_of_ratfn`], with `q` specialised to `p` first.
pub fn series_of_ratfn_at(f: &RationalFn, p: u64, order: usize) -> Result<DirichletTrunc, ExactError> {
    check_vars(f)?;
    let q = Scalar::from_integer(p.into());
    let g = f.eval_var(Var::Q, &q)?.reduce_monomial_content();
    let coeffs = long_division(g.num(), g.den(), order)?;
    Ok(DirichletTrunc::new(order, coeffs, QMode::Numeric(p)))
}
