//! 2-nilpotent Lie lattices over `Z` on an adapted basis, their commutator
//! matrices, and the family `G_{m x n}`.
//!
//! Bases are 0-based internally: `e_0, ..., e_{d-1}`, with the last `d'`
//! elements spanning the derived sublattice. Structure constants give each
//! bracket `[e_i, e_j]` in coordinates on that derived part only. The file
//! format is 1-based.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::snf::{smith_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("basis change is not unimodular")]
    NotUnimodular,
    #[error("basis change does not preserve the span of the last d' basis elements")]
    NotAdapted,
}

/// A 2-nilpotent Lie lattice given by integer structure constants
/// `lambda[i][j][k]`, the `k`-th derived coordinate of `[e_i, e_j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieLattice {
    name: String,
    d: usize,
    d_prime: usize,
    lambda: Vec<i64>,
    labels: Vec<String>,
}

impl LieLattice {
    /// Raw constructor; the data is not validated (see [`LieLattice::validate`]).
    pub fn from_constants(name: impl Into<String>, d: usize, d_prime: usize, lambda: Vec<i64>) -> Result<Self, LatticeError> {
        if d_prime > d {
            return Err(LatticeError::InvalidArgs(format!("d' = {d_prime} exceeds d = {d}")));
        }
        if lambda.len() != d * d * d_prime {
            return Err(LatticeError::LengthMismatch {
                expected: d * d * d_prime,
                got: lambda.len(),
            });
        }
        Ok(LieLattice {
            name: name.into(),
            d,
            d_prime,
            lambda,
            labels: default_labels(d),
        })
    }

    /// Builds a lattice from the brackets `[e_i, e_j]` with `i < j`
    /// (0-based), filling in antisymmetry. Unlisted brackets are zero.
    pub fn from_brackets(name: impl Into<String>, d: usize, d_prime: usize, brackets: &[(usize, usize, Vec<i64>)]) -> Result<Self, LatticeError> {
        let mut l = LieLattice::from_constants(name, d, d_prime, vec![0; d * d * d_prime])?;
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= j || j >= d {
                return Err(LatticeError::InvalidArgs(format!("bracket ({i}, {j}) needs i < j < d")));
            }
            if coeffs.len() != d_prime {
                return Err(LatticeError::LengthMismatch {
                    expected: d_prime,
                    got: coeffs.len(),
                });
            }
            for (k, &c) in coeffs.iter().enumerate() {
                l.set(i, j, k, c);
                l.set(j, i, k, -c);
            }
        }
        Ok(l)
    }

    pub fn abelian(d: usize) -> Self {
        LieLattice::from_constants(format!("Z^{d}"), d, 0, Vec::new()).expect("consistent sizes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn d_prime(&self) -> usize {
        self.d_prime
    }

    /// `d - d'`, the size of the trimmed commutator matrix.
    pub fn d_ab(&self) -> usize {
        self.d - self.d_prime
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, LatticeError> {
        if labels.len() != self.d {
            return Err(LatticeError::LengthMismatch {
                expected: self.d,
                got: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.d + j) * self.d_prime + k
    }

    pub fn lambda(&self, i: usize, j: usize, k: usize) -> i64 {
        self.lambda[self.idx(i, j, k)]
    }

    fn set(&mut self, i: usize, j: usize, k: usize, v: i64) {
        let ix = self.idx(i, j, k);
        self.lambda[ix] = v;
    }

    /// Derived coordinates of `[e_i, e_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> &[i64] {
        let start = self.idx(i, j, 0);
        &self.lambda[start..start + self.d_prime]
    }

    pub fn is_abelian(&self) -> bool {
        self.lambda.iter().all(|&x| x == 0)
    }

    /// `[u, v]` in derived coordinates, for `u, v` given on the first
    /// `len` basis elements.
    pub fn bracket_of(&self, u: &[i64], v: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.d_prime];
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                if vj == 0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += ui * vj * self.lambda(i, j, k);
                }
            }
        }
        out
    }

    /// `[u, v]` over `F_p`.
    pub fn bracket_mod(&self, u: &[u64], v: &[u64], p: u64) -> Vec<u64> {
        let mut out = vec![0u64; self.d_prime];
        for i in 0..u.len() {
            for j in (i + 1)..u.len() {
                let cross = (u[i] * v[j] % p + p - u[j] * v[i] % p) % p;
                if cross == 0 {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.lambda(i, j, k).rem_euclid(p as i64) as u64;
                    *o = (*o + cross * c) % p;
                }
            }
        }
        out
    }

    /// Checks every invariant of an adapted, 2-nilpotent presentation.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let (d, dp) = (self.d, self.d_prime);
        let boundary = d - dp;
        for i in 0..d {
            for k in 0..dp {
                if self.lambda(i, i, k) != 0 {
                    violations.push(Violation::NonzeroDiagonal { i, k });
                }
            }
            for j in (i + 1)..d {
                for k in 0..dp {
                    if self.lambda(i, j, k) != -self.lambda(j, i, k) {
                        violations.push(Violation::Antisymmetry { i, j, k });
                    }
                }
                if (i >= boundary || j >= boundary) && self.bracket(i, j).iter().any(|&c| c != 0) {
                    violations.push(Violation::NotTwoNilpotent { i, j });
                }
            }
        }
        let rows: Vec<Vec<i64>> = (0..d)
            .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
            .map(|(i, j)| self.bracket(i, j).to_vec())
            .collect();
        let rank = if rows.is_empty() || dp == 0 {
            0
        } else {
            smith_normal_form(&IntMatrix::from_rows(&rows)).rank
        };
        if rank != dp {
            violations.push(Violation::DerivedRankDeficient { rank, d_prime: dp });
        }
        // [[e_i, e_j], e_l] expands through the derived coordinates.
        let double = |i: usize, j: usize, l: usize| -> Vec<i64> {
            let mut out = vec![0i64; dp];
            for (k, &c) in self.bracket(i, j).iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (kk, o) in out.iter_mut().enumerate() {
                    *o += c * self.lambda(boundary + k, l, kk);
                }
            }
            out
        };
        for i in 0..d {
            for j in (i + 1)..d {
                for l in (j + 1)..d {
                    let (a, b, c) = (double(i, j, l), double(j, l, i), double(l, i, j));
                    if (0..dp).any(|k| a[k] + b[k] + c[k] != 0) {
                        violations.push(Violation::Jacobi { i, j, k: l });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// The commutator matrix, full (`d x d`) or trimmed (`(d-d') x (d-d')`).
    pub fn commutator_matrix(&self, trimmed: bool) -> CommutatorMatrix {
        let size = if trimmed { self.d_ab() } else { self.d };
        let mut forms = Vec::with_capacity(size * size * self.d_prime);
        for i in 0..size {
            for j in 0..size {
                forms.extend_from_slice(self.bracket(i, j));
            }
        }
        CommutatorMatrix {
            size,
            d_prime: self.d_prime,
            forms,
            trimmed,
        }
    }

    /// Rewrites the structure constants in a new basis. Column `a` of `u`
    /// holds the old coordinates of the new basis element `e'_a`.
    pub fn base_change(&self, u: &IntMatrix) -> Result<LieLattice, LatticeError> {
        let (d, dp) = (self.d, self.d_prime);
        let boundary = d - dp;
        if u.rows() != d || u.cols() != d {
            return Err(LatticeError::InvalidArgs(format!("basis change must be {d} x {d}")));
        }
        if (0..boundary).any(|i| (boundary..d).any(|a| !u.get(i, a).is_zero())) {
            return Err(LatticeError::NotAdapted);
        }
        let snf = smith_normal_form(u);
        if snf.rank != d || snf.diagonal.iter().any(|x| !x.is_one()) {
            return Err(LatticeError::NotUnimodular);
        }
        let w: Vec<Vec<BigInt>> = (0..dp).map(|k| (0..dp).map(|l| u.get(boundary + k, boundary + l).clone()).collect()).collect();
        let winv = invert_unimodular(&w).ok_or(LatticeError::NotUnimodular)?;

        let mut out = LieLattice::from_constants(self.name.clone(), d, dp, vec![0; d * d * dp])?;
        out.labels = self.labels.clone();
        for a in 0..d {
            for b in 0..d {
                // Old derived coordinates of [e'_a, e'_b].
                let mut old = vec![BigInt::zero(); dp];
                for i in 0..boundary {
                    let uia = u.get(i, a);
                    if uia.is_zero() {
                        continue;
                    }
                    for j in 0..boundary {
                        let ujb = u.get(j, b);
                        if ujb.is_zero() {
                            continue;
                        }
                        let f = uia * ujb;
                        for (k, o) in old.iter_mut().enumerate() {
                            *o += &f * self.lambda(i, j, k);
                        }
                    }
                }
                for l in 0..dp {
                    let mut v = BigInt::zero();
                    for (k, o) in old.iter().enumerate() {
                        v += &winv[l][k] * o;
                    }
                    out.set(a, b, l, v.to_i64().ok_or_else(|| LatticeError::InvalidArgs("structure constant overflows i64".into()))?);
                }
            }
        }
        Ok(out)
    }

    /// `L + Z^r`: appends `r` central generators that bracket trivially,
    /// placed before the derived part so the basis stays adapted.
    pub fn direct_sum_abelian(&self, r: usize) -> LieLattice {
        let (d, dp) = (self.d, self.d_prime);
        let boundary = d - dp;
        let nd = d + r;
        let map = |i: usize| if i < boundary { i } else { i + r };
        let mut out = LieLattice::from_constants(format!("{} + Z^{r}", self.name), nd, dp, vec![0; nd * nd * dp]).expect("sizes");
        for i in 0..d {
            for j in 0..d {
                for k in 0..dp {
                    out.set(map(i), map(j), k, self.lambda(i, j, k));
                }
            }
        }
        let mut labels: Vec<String> = self.labels[..boundary].to_vec();
        labels.extend((1..=r).map(|t| format!("a{t}")));
        labels.extend_from_slice(&self.labels[boundary..]);
        out.labels = labels;
        out
    }

    pub fn to_file(&self) -> LatticeFile {
        let mut brackets = Vec::new();
        for i in 0..self.d {
            for j in (i + 1)..self.d {
                let c = self.bracket(i, j);
                if c.iter().any(|&x| x != 0) {
                    brackets.push(BracketEntry {
                        i: i + 1,
                        j: j + 1,
                        coeffs: c.to_vec(),
                    });
                }
            }
        }
        LatticeFile {
            name: self.name.clone(),
            d: self.d,
            d_prime: self.d_prime,
            labels: (self.labels != default_labels(self.d)).then(|| self.labels.clone()),
            brackets,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("serializable");
        s.push('\n');
        s
    }
}

fn default_labels(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("e{i}")).collect()
}

/// Inverse of an integer matrix with determinant `+-1`, by elimination
/// over the rationals.
fn invert_unimodular(w: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let n = w.len();
    let mut a: Vec<Vec<BigRational>> = w
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let pr = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, pr);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..2 * n {
                    let v = &a[r][j] - &f * &a[c][j];
                    a[r][j] = v;
                }
            }
        }
    }
    a.into_iter()
        .map(|row| row[n..].iter().map(|x| x.is_integer().then(|| x.to_integer())).collect())
        .collect()
}

/// `G_{m x n}`: generators `c_1..c_{m+n}`, `z_11..z_mn` with
/// `[c_i, c_{m+j}] = z_ij` and all other brackets zero.
pub fn make_g_mn(m: usize, n: usize) -> Result<LieLattice, LatticeError> {
    if m == 0 || n == 0 {
        return Err(LatticeError::InvalidArgs("m and n must be positive".into()));
    }
    let dp = m * n;
    let d = m + n + dp;
    let mut brackets = Vec::with_capacity(dp);
    for i in 0..m {
        for j in 0..n {
            let mut c = vec![0; dp];
            c[i * n + j] = 1;
            brackets.push((i, m + j, c));
        }
    }
    let mut labels: Vec<String> = (1..=m + n).map(|i| format!("c{i}")).collect();
    for i in 1..=m {
        for j in 1..=n {
            labels.push(format!("z{i}{j}"));
        }
    }
    LieLattice::from_brackets(format!("G_{m}x{n}"), d, dp, &brackets)?.with_labels(labels)
}

/// A single invariant violation found by [`LieLattice::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NonzeroDiagonal { i: usize, k: usize },
    Antisymmetry { i: usize, j: usize, k: usize },
    NotTwoNilpotent { i: usize, j: usize },
    DerivedRankDeficient { rank: usize, d_prime: usize },
    Jacobi { i: usize, j: usize, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Report 1-based indices, as in the file format.
        match *self {
            Violation::NonzeroDiagonal { i, k } => write!(f, "[e{0}, e{0}] has nonzero coordinate {1}", i + 1, k + 1),
            Violation::Antisymmetry { i, j, k } => {
                write!(f, "antisymmetry fails for [e{}, e{}] in coordinate {}", i + 1, j + 1, k + 1)
            }
            Violation::NotTwoNilpotent { i, j } => write!(
                f,
                "[e{}, e{}] is nonzero but involves a derived basis element (2-nilpotency)",
                i + 1,
                j + 1
            ),
            Violation::DerivedRankDeficient { rank, d_prime } => {
                write!(f, "brackets span a sublattice of rank {rank}, but d' = {d_prime}")
            }
            Violation::Jacobi { i, j, k } => write!(f, "Jacobi identity fails on (e{}, e{}, e{})", i + 1, j + 1, k + 1),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Matrix of linear forms in `X_1..X_{d'}`; entry `(i, j)` is
/// `sum_k lambda_ij^k X_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorMatrix {
    size: usize,
    d_prime: usize,
    forms: Vec<i64>,
    trimmed: bool,
}

impl CommutatorMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn d_prime(&self) -> usize {
        self.d_prime
    }

    pub fn is_trimmed(&self) -> bool {
        self.trimmed
    }

    /// Coefficients of the linear form at `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> &[i64] {
        let start = (i * self.size + j) * self.d_prime;
        &self.forms[start..start + self.d_prime]
    }

    fn check_len(&self, len: usize) -> Result<(), LatticeError> {
        if len != self.d_prime {
            return Err(LatticeError::LengthMismatch {
                expected: self.d_prime,
                got: len,
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, w: &[BigInt]) -> Result<IntMatrix, LatticeError> {
        self.check_len(w.len())?;
        let mut m = IntMatrix::zeros(self.size, self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                let mut v = BigInt::zero();
                for (c, x) in self.entry(i, j).iter().zip(w) {
                    if *c != 0 {
                        v += x * *c;
                    }
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn evaluate_i64(&self, w: &[i64]) -> Result<IntMatrix, LatticeError> {
        let w: Vec<BigInt> = w.iter().map(|&x| BigInt::from(x)).collect();
        self.evaluate(&w)
    }

    /// The evaluated matrix reduced mod `p`, for `w` with entries in `[0, p)`.
    pub fn evaluate_mod(&self, w: &[u64], p: u64) -> Result<Vec<Vec<u64>>, LatticeError> {
        self.check_len(w.len())?;
        Ok((0..self.size)
            .map(|i| {
                (0..self.size)
                    .map(|j| {
                        self.entry(i, j)
                            .iter()
                            .zip(w)
                            .fold(0u64, |acc, (&c, &x)| (acc + (c.rem_euclid(p as i64) as u64) * x) % p)
                    })
                    .collect()
            })
            .collect())
    }

    /// Renders the matrix with entries written in the variables `X1..`.
    pub fn render(&self) -> String {
        let form = |c: &[i64]| -> String {
            let mut s = String::new();
            for (k, &x) in c.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let var = format!("X{}", k + 1);
                let mag = x.abs();
                let body = if mag == 1 { var } else { format!("{mag}*{var}") };
                if s.is_empty() {
                    s = if x < 0 { format!("-{body}") } else { body };
                } else {
                    s.push_str(if x < 0 { " - " } else { " + " });
                    s.push_str(&body);
                }
            }
            if s.is_empty() {
                "0".into()
            } else {
                s
            }
        };
        let mut out = String::new();
        for i in 0..self.size {
            let row: Vec<String> = (0..self.size).map(|j| form(self.entry(i, j))).collect();
            out.push_str(&format!("[{}]\n", row.join(", ")));
        }
        out
    }
}

/// `evaluate_matrix` as a free function.
pub fn evaluate_matrix(cm: &CommutatorMatrix, w: &[BigInt]) -> Result<IntMatrix, LatticeError> {
    cm.evaluate(w)
}

/// On-disk lattice document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub name: String,
    pub d: usize,
    pub d_prime: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeFileError {
    #[error("{}", fmt_diag(.line, .msg))]
    Parse { line: Option<usize>, msg: String },
    #[error("lattice fails validation:\n{}", .diagnostics.join("\n"))]
    Validation { diagnostics: Vec<String> },
}

fn fmt_diag(line: &Option<usize>, msg: &str) -> String {
    match line {
        Some(l) => format!("line {l}: {msg}"),
        None => msg.to_string(),
    }
}

/// Line number (1-based) of every object in the top-level `brackets`
/// array, in order.
fn bracket_lines(text: &str) -> Vec<usize> {
    let Some(key) = text.find("\"brackets\"") else {
        return Vec::new();
    };
    let mut lines = Vec::new();
    let mut line = 1 + text[..key].matches('\n').count();
    let mut depth = 0i32;
    let mut in_str = false;
    let mut escaped = false;
    let mut started = false;
    for ch in text[key + "\"brackets\"".len()..].chars() {
        if ch == '\n' {
            line += 1;
        }
        if in_str {
            match ch {
                _ if escaped => escaped = false,
                '\\' => escaped = true,
                '"' => in_str = false,
                _ => {}
            }
            continue;
        }
        match ch {
            '"' => in_str = true,
            '[' | '{' => {
                if ch == '{' && depth == 1 && started {
                    lines.push(line);
                }
                if ch == '[' && depth == 0 {
                    started = true;
                }
                depth += 1;
            }
            ']' | '}' => {
                depth -= 1;
                if depth == 0 && started {
                    break;
                }
            }
            _ => {}
        }
    }
    lines
}

/// Parses and validates a lattice document.
pub fn parse_lattice_str(text: &str) -> Result<LieLattice, LatticeFileError> {
    let file: LatticeFile = serde_json::from_str(text).map_err(|e| LatticeFileError::Parse {
        line: Some(e.line()),
        msg: e.to_string(),
    })?;
    let lines = bracket_lines(text);
    let line_of = |t: usize| lines.get(t).copied();
    let (d, dp) = (file.d, file.d_prime);
    if dp > d {
        return Err(LatticeFileError::Parse {
            line: None,
            msg: format!("d_prime = {dp} exceeds d = {d}"),
        });
    }
    let mut seen = std::collections::HashMap::new();
    let mut brackets = Vec::with_capacity(file.brackets.len());
    for (t, b) in file.brackets.iter().enumerate() {
        let err = |msg: String| LatticeFileError::Parse { line: line_of(t), msg };
        if b.i == 0 || b.j == 0 || b.i > d || b.j > d {
            return Err(err(format!("bracket ({}, {}) has an index outside 1..{d}", b.i, b.j)));
        }
        if b.i >= b.j {
            return Err(err(format!("bracket ({}, {}) must have i < j", b.i, b.j)));
        }
        if b.coeffs.len() != dp {
            return Err(err(format!("bracket ({}, {}) has {} coefficients, expected {dp}", b.i, b.j, b.coeffs.len())));
        }
        if let Some(prev) = seen.insert((b.i, b.j), t) {
            return Err(err(format!(
                "bracket ({}, {}) repeats entry {} of the list",
                b.i,
                b.j,
                prev + 1
            )));
        }
        brackets.push((b.i - 1, b.j - 1, b.coeffs.clone()));
    }
    let mut lattice = LieLattice::from_brackets(file.name.clone(), d, dp, &brackets).map_err(|e| LatticeFileError::Parse {
        line: None,
        msg: e.to_string(),
    })?;
    if let Some(labels) = file.labels {
        lattice = lattice.with_labels(labels).map_err(|e| LatticeFileError::Parse {
            line: None,
            msg: format!("labels: {e}"),
        })?;
    }
    let report = lattice.validate();
    if !report.is_valid() {
        let diagnostics = report
            .violations
            .iter()
            .map(|v| {
                let line = match v {
                    Violation::NotTwoNilpotent { i, j } | Violation::Antisymmetry { i, j, .. } => {
                        seen.get(&(i + 1, j + 1)).and_then(|&t| line_of(t))
                    }
                    _ => None,
                };
                fmt_diag(&line, &v.to_string())
            })
            .collect();
        return Err(LatticeFileError::Validation { diagnostics });
    }
    Ok(lattice)
}

pub fn parse_lattice_file(path: &std::path::Path) -> Result<LieLattice, LatticeFileError> {
    let text = std::fs::read_to_string(path).map_err(|e| LatticeFileError::Parse {
        line: None,
        msg: format!("{}: {e}", path.display()),
    })?;
    parse_lattice_str(&text)
}

/// Whether an integer matrix has determinant `+-1`.
pub fn is_unimodular(u: &IntMatrix) -> bool {
    u.rows() == u.cols() && {
        let snf = smith_normal_form(u);
        snf.rank == u.rows() && snf.diagonal.iter().all(|x| x.abs().is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn family_dimensions() {
        for (m, n) in [(1, 1), (1, 2), (2, 3), (3, 3)] {
            let g = make_g_mn(m, n).unwrap();
            assert_eq!(g.d(), m + n + m * n);
            assert_eq!(g.d_prime(), m * n);
            assert!(g.validate().is_valid());
        }
        let g = make_g_mn(2, 3).unwrap();
        // [c_1, c_4] = z_12 (0-based: e_0, e_3, coordinate 1).
        assert_eq!(g.bracket(0, 3), &[0, 1, 0, 0, 0, 0]);
        assert!(make_g_mn(0, 2).is_err());
    }

    #[test]
    fn validation_defects() {
        let mut lambda = vec![0; 2 * 2];
        lambda[1] = 1; // lambda_{12}
        lambda[2] = 1; // lambda_{21}
        let bad = LieLattice::from_constants("bad", 2, 1, lambda).unwrap();
        assert!(bad.validate().violations.iter().any(|v| matches!(v, Violation::Antisymmetry { .. })));

        let flat = LieLattice::from_brackets("flat", 5, 2, &[(0, 1, vec![1, 0]), (0, 2, vec![2, 0])]).unwrap();
        assert!(flat
            .validate()
            .violations
            .contains(&Violation::DerivedRankDeficient { rank: 1, d_prime: 2 }));
    }

    #[test]
    fn commutator_matrices() {
        let h = make_g_mn(1, 1).unwrap();
        let s = h.commutator_matrix(true);
        assert_eq!(s.size(), 2);
        assert_eq!(s.entry(0, 1), &[1]);
        assert_eq!(s.entry(1, 0), &[-1]);
        assert_eq!(s.evaluate(&big(&[5])).unwrap(), IntMatrix::from_rows(&[vec![0, 5], vec![-5, 0]]));
        let r = h.commutator_matrix(false);
        assert_eq!(r.size(), 3);
        for k in 0..3 {
            assert_eq!(r.entry(2, k), &[0]);
            assert_eq!(r.entry(k, 2), &[0]);
        }

        let g = make_g_mn(2, 2).unwrap();
        let m = g.commutator_matrix(true).evaluate(&big(&[1, 0, 0, 1])).unwrap();
        let expect = IntMatrix::from_rows(&[vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![-1, 0, 0, 0], vec![0, -1, 0, 0]]);
        assert_eq!(m, expect);
        assert_eq!(g.commutator_matrix(true).evaluate(&big(&[0; 4])).unwrap(), IntMatrix::zeros(4, 4));
        assert!(matches!(
            g.commutator_matrix(true).evaluate(&big(&[1])),
            Err(LatticeError::LengthMismatch { expected: 4, got: 1 })
        ));
    }

    #[test]
    fn full_restricts_to_trimmed() {
        let g = make_g_mn(2, 3).unwrap();
        let (full, trim) = (g.commutator_matrix(false), g.commutator_matrix(true));
        for i in 0..trim.size() {
            for j in 0..trim.size() {
                assert_eq!(full.entry(i, j), trim.entry(i, j));
            }
        }
    }

    #[test]
    fn base_changes() {
        let g = make_g_mn(1, 2).unwrap();
        assert_eq!(g.base_change(&IntMatrix::identity(5)).unwrap(), g);

        let h = make_g_mn(1, 1).unwrap();
        let neg = IntMatrix::diag(&[1, 1, -1]);
        let h2 = h.base_change(&neg).unwrap();
        assert_eq!(h2.bracket(0, 1), &[-1]);

        let mut not_adapted = IntMatrix::identity(3);
        not_adapted.set(0, 2, BigInt::one());
        assert_eq!(h.base_change(&not_adapted), Err(LatticeError::NotAdapted));
        assert_eq!(h.base_change(&IntMatrix::diag(&[2, 1, 1])), Err(LatticeError::NotUnimodular));
    }

    #[test]
    fn abelian_sum() {
        let h = make_g_mn(1, 1).unwrap().direct_sum_abelian(2);
        assert_eq!(h.d(), 5);
        assert!(h.validate().is_valid());
        assert_eq!(h.bracket(0, 1), &[1]);
        assert_eq!(h.bracket(2, 3), &[0]);
    }

    #[test]
    fn json_round_trip() {
        let g = make_g_mn(2, 3).unwrap();
        let back = parse_lattice_str(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn file_diagnostics_have_lines() {
        let text = r#"{
  "name": "broken",
  "d": 3,
  "d_prime": 1,
  "brackets": [
    {"i": 1, "j": 2, "coeffs": [1]},
    {"i": 1, "j": 3, "coeffs": [1]}
  ]
}"#;
        match parse_lattice_str(text) {
            Err(LatticeFileError::Validation { diagnostics }) => {
                assert!(diagnostics.iter().any(|d| d.starts_with("line 7:") && d.contains("2-nilpotency")), "{diagnostics:?}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let swapped = text.replace(r#"{"i": 1, "j": 3"#, r#"{"i": 3, "j": 1"#);
        match parse_lattice_str(&swapped) {
            Err(LatticeFileError::Parse { line: Some(7), .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
