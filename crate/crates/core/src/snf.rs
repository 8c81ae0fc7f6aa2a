//! Exact integer linear algebra: Smith normal form, p-adic valuations of
//! elementary divisors, ranks and kernels over `F_p`, and ν-vectors of
//! evaluated commutator matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::CommutatorMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SnfError {
    #[error("capped elementary-divisor valuations {0:?} do not pair up")]
    PairingViolation(Vec<Valuation>),
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn diag<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone().into());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Entries reduced into `[0, p)`.
    pub fn reduce_mod(&self, p: u64) -> Vec<Vec<u64>> {
        let pb = BigInt::from(p);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.mod_floor(&pb).to_u64().expect("residue fits u64"))
                    .collect()
            })
            .collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero() && (0..i).all(|j| *self.get(i, j) == -self.get(j, i))
            })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Diagonal of the Smith normal form: nonzero entries first, each dividing
/// the next, then zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
}

/// Smith normal form by elimination with smallest-absolute-value pivots.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = m.to_rows();
    let n = rows.min(cols);
    let mut diagonal = Vec::with_capacity(n);

    for t in 0..n {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.magnitude() < a[bi][bj].magnitude()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                diagonal.resize(n, BigInt::zero());
                let rank = diagonal.iter().take_while(|d| !d.is_zero()).count();
                return SnfResult { diagonal, rank };
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in (t + 1)..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                for j in t..cols {
                    let v = &a[i][j] - &q * &a[t][j];
                    a[i][j] = v;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in (t + 1)..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                for row in a.iter_mut().skip(t) {
                    let v = &row[j] - &q * &row[t];
                    row[j] = v;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // The pivot must divide the whole remaining block.
            let pivot = a[t][t].clone();
            let offender = (t + 1..rows).find(|&i| a[i][t + 1..].iter().any(|x| !x.is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        let v = &a[t][j] + &a[i][j];
                        a[t][j] = v;
                    }
                }
                None => break,
            }
        }
        diagonal.push(a[t][t].abs());
    }
    let rank = diagonal.iter().take_while(|d| !d.is_zero()).count();
    SnfResult { diagonal, rank }
}

/// p-adic valuation of an elementary divisor; a zero divisor has infinite
/// valuation and sorts after every finite one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn cap(self, r: u32) -> u32 {
        match self {
            Valuation::Finite(a) => a.min(r),
            Valuation::Infinite => r,
        }
    }
}

pub fn valuation(x: &BigInt, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        y = q;
        v += 1;
    }
}

/// Valuations of the SNF diagonal, ascending.
pub fn elementary_divisor_valuations(m: &IntMatrix, p: u64) -> Vec<Valuation> {
    let snf = smith_normal_form(m);
    let mut vals: Vec<Valuation> = snf.diagonal.iter().map(|d| valuation(d, p)).collect();
    vals.sort();
    vals
}

/// Rank over `F_p` by Gaussian elimination on the reduced matrix.
pub fn rank_mod_p(m: &IntMatrix, p: u64) -> usize {
    let mut a = m.reduce_mod(p);
    modp::rank(&mut a, p)
}

/// Echelonized basis of the right null space over `F_p`.
pub fn kernel_mod_p(m: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
    let a = m.reduce_mod(p);
    modp::kernel(&a, m.cols, p)
}

/// Linear algebra over `F_p` on small residues (`p < 2^32`).
pub mod modp {
    pub fn inv(a: u64, p: u64) -> u64 {
        let mut result = 1u64;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result
    }

    /// Reduces `a` to reduced row echelon form in place; returns the pivot
    /// columns.
    pub fn rref(a: &mut [Vec<u64>], p: u64) -> Vec<usize> {
        let rows = a.len();
        let cols = a.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
                continue;
            };
            a.swap(r, pr);
            let iv = inv(a[r][c], p);
            for x in a[r].iter_mut() {
                *x = *x * iv % p;
            }
            for i in 0..rows {
                if i != r && a[i][c] != 0 {
                    let f = a[i][c];
                    for j in 0..cols {
                        let sub = f * a[r][j] % p;
                        a[i][j] = (a[i][j] + p - sub) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(a: &mut [Vec<u64>], p: u64) -> usize {
        rref(a, p).len()
    }

    /// Basis of `{x : a x = 0}`, one vector per free column, in echelon
    /// form with respect to the free columns.
    pub fn kernel(a: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
        let mut m = a.to_vec();
        let pivots = rref(&mut m, p);
        let mut basis = Vec::new();
        for free in (0..cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][free]) % p;
            }
            basis.push(v);
        }
        basis
    }

    /// Dimension of the span of `vectors`.
    pub fn span_dim(vectors: &[Vec<u64>], p: u64) -> usize {
        if vectors.is_empty() {
            return 0;
        }
        let mut m = vectors.to_vec();
        rank(&mut m, p)
    }
}

/// Elementary-divisor pattern of an alternating matrix, capped at a level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NuVector {
    pub entries: Vec<u32>,
    pub level: u32,
}

/// The ν-vector of `cm` at `w` modulo `p^r`: the `2h` smallest valuations
/// of `cm(w)`, capped at `r`, paired up, for `h = floor(size/2)`.
pub fn nu_vector(cm: &CommutatorMatrix, w: &[BigInt], r: u32, p: u64) -> Result<NuVector, SnfError> {
    let m = cm.evaluate(w).map_err(|e| match e {
        crate::lattice::LatticeError::LengthMismatch { expected, got } => SnfError::LengthMismatch { expected, got },
        _ => unreachable!("evaluate only fails on length"),
    })?;
    nu_vector_of_matrix(&m, r, p)
}

pub fn nu_vector_of_matrix(m: &IntMatrix, r: u32, p: u64) -> Result<NuVector, SnfError> {
    let h = m.rows() / 2;
    let vals = elementary_divisor_valuations(m, p);
    let capped: Vec<u32> = vals.iter().take(2 * h).map(|v| v.cap(r)).collect();
    let mut entries = Vec::with_capacity(h);
    for pair in capped.chunks(2) {
        if pair.len() != 2 || pair[0] != pair[1] {
            return Err(SnfError::PairingViolation(vals));
        }
        entries.push(pair[0]);
    }
    Ok(NuVector { entries, level: r })
}

/// `B^k_{i x j}`: identity `k`-block padded with zeros.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonicalB {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl CanonicalB {
    pub fn new(i: usize, j: usize, k: usize) -> Option<Self> {
        (k <= i.min(j)).then_some(CanonicalB { i, j, k })
    }

    pub fn to_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.i, self.j);
        for d in 0..self.k {
            m.set(d, d, BigInt::one());
        }
        m
    }
}

/// Whether `m` has Smith normal form `b` over the p-local integers: rank
/// `k` over the rationals with all nonzero divisors units at `p`.
#[allow(non_snake_case)]
pub fn snf_equals_B(m: &IntMatrix, b: &CanonicalB, p: u64) -> bool {
    if m.rows() != b.i || m.cols() != b.j {
        return false;
    }
    let snf = smith_normal_form(m);
    snf.rank == b.k && snf.diagonal[..snf.rank].iter().all(|d| valuation(d, p) == Valuation::Finite(0))
}

/// A basis of `ker_Z m` (columns of a unimodular transform), hence an
/// integral basis of the saturated kernel lattice.
pub fn integer_kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let rows = m.rows();
    let n = m.cols();
    let mut a = m.to_rows();
    let mut v: Vec<Vec<BigInt>> = IntMatrix::identity(n).to_rows();

    // Column operations applied to both `a` and `v`.
    fn col_axpy(mat: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
        for row in mat.iter_mut() {
            let x = &row[dst] - f * &row[src];
            row[dst] = x;
        }
    }
    fn col_swap(mat: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    }

    let mut c = 0;
    for r in 0..rows {
        if c == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (c..n).filter(|&j| !a[r][j].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let piv = *nz.iter().min_by(|&&x, &&y| a[r][x].magnitude().cmp(a[r][y].magnitude())).unwrap();
            col_swap(&mut a, c, piv);
            col_swap(&mut v, c, piv);
            let mut done = true;
            for j in (c + 1)..n {
                if a[r][j].is_zero() {
                    continue;
                }
                let q = &a[r][j] / &a[r][c];
                col_axpy(&mut a, j, c, &q);
                col_axpy(&mut v, j, c, &q);
                if !a[r][j].is_zero() {
                    done = false;
                }
            }
            if done {
                c += 1;
                break;
            }
        }
    }
    (c..n).map(|j| v.iter().map(|row| row[j].clone()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn diag_of(rows: &[Vec<i64>]) -> Vec<BigInt> {
        smith_normal_form(&m(rows)).diagonal
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(diag_of(&[vec![2, 0], vec![0, 3]]), big(&[1, 6]));
        assert_eq!(diag_of(&[vec![0, 5], vec![-5, 0]]), big(&[5, 5]));
        let z = smith_normal_form(&IntMatrix::zeros(3, 2));
        assert_eq!(z.diagonal, big(&[0, 0]));
        assert_eq!(z.rank, 0);
        assert_eq!(diag_of(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), big(&[2, 6, 12]));
    }

    #[test]
    fn valuation_examples() {
        let d = IntMatrix::diag(&[1, 6]);
        assert_eq!(elementary_divisor_valuations(&d, 2), vec![Valuation::Finite(0), Valuation::Finite(1)]);
        assert_eq!(elementary_divisor_valuations(&d, 5), vec![Valuation::Finite(0), Valuation::Finite(0)]);
        let a = m(&[vec![0, 4], vec![-4, 0]]);
        assert_eq!(elementary_divisor_valuations(&a, 2), vec![Valuation::Finite(2), Valuation::Finite(2)]);
        let s = m(&[vec![0, 0], vec![0, 0]]);
        assert_eq!(elementary_divisor_valuations(&s, 2), vec![Valuation::Infinite; 2]);
    }

    #[test]
    fn rank_mod_p_examples() {
        for p in [2, 3, 5, 7] {
            assert_eq!(rank_mod_p(&IntMatrix::identity(3), p), 3);
            assert_eq!(rank_mod_p(&IntMatrix::diag(&[p as i64, 1]), p), 1);
        }
    }

    #[test]
    fn kernel_mod_p_examples() {
        assert_eq!(kernel_mod_p(&IntMatrix::zeros(2, 2), 3).len(), 2);
        assert!(kernel_mod_p(&m(&[vec![0, 1], vec![-1, 0]]), 2).is_empty());
        let a = m(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let ker = kernel_mod_p(&a, 5);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let dot: u64 = v.iter().zip([1u64, 2, 3]).map(|(x, y)| x * y).sum();
            assert_eq!(dot % 5, 0);
        }
    }

    #[test]
    fn canonical_b() {
        assert!(snf_equals_B(&IntMatrix::diag(&[1, 1, 0]), &CanonicalB::new(3, 3, 2).unwrap(), 7));
        assert!(!snf_equals_B(&IntMatrix::diag(&[1, 3]), &CanonicalB::new(2, 2, 2).unwrap(), 3));
        assert!(snf_equals_B(&IntMatrix::diag(&[1, 3, 0]), &CanonicalB::new(3, 3, 2).unwrap(), 2));
        assert!(CanonicalB::new(2, 3, 3).is_none());
    }

    #[test]
    fn pairing_violation_is_reported() {
        let err = nu_vector_of_matrix(&IntMatrix::diag(&[1, 2]), 3, 2).unwrap_err();
        assert!(matches!(err, SnfError::PairingViolation(_)));
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // ker of (2 4) over Z is spanned by (-2, 1), not (-4, 2).
        let ker = integer_kernel_basis(&m(&[vec![2, 4]]));
        assert_eq!(ker.len(), 1);
        let g = ker[0].iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        assert_eq!(g, BigInt::one());
        assert_eq!(&ker[0][0] * 2 + &ker[0][1] * 4, BigInt::zero());

        let a = m(&[vec![1, 2, 3], vec![4, 5, 6]]);
        let ker = integer_kernel_basis(&a);
        assert_eq!(ker.len(), 1);
        let k = &ker[0];
        assert!(k == &big(&[1, -2, 1]) || k == &big(&[-1, 2, -1]));
    }
}
