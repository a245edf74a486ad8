//! Exact dense linear algebra over rationals: square matrices, trace forms,
//! and decision procedures for positive (semi)definiteness.
//!
//! Both definiteness tests are exact. [`is_pd`] runs symmetric Gaussian
//! elimination without pivoting and inspects pivot signs; [`is_psd`]
//! eliminates along positive diagonal entries and recurses on the exact Schur
//! complement. A failed test returns a rational [`Witness`] vector `v` with
//! `vᵀMv ≤ 0`, recomputed against the original matrix before it is returned.

use std::fmt;
use std::ops::Deref;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix rows must form a nonempty square array")]
    NotSquare,
    #[error("index ({0}, {1}) out of range for size {2} (one-based)")]
    IndexOutOfRange(usize, usize, usize),
    #[error("matrix is not symmetric: entry ({0}, {1}) differs from ({1}, {0})")]
    NotSymmetric(usize, usize),
}

/// A square `t×t` matrix of rationals, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    size: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    /// The zero matrix. Panics if `size == 0`.
    pub fn zero(size: usize) -> Self {
        assert!(size >= 1, "matrix size must be at least 1");
        Matrix {
            size,
            entries: vec![Rational::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Matrix::zero(size);
        for i in 0..size {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from nested rows; they must form a nonempty square.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let size = rows.len();
        if size == 0 || rows.iter().any(|r| r.len() != size) {
            return Err(LinalgError::NotSquare);
        }
        Ok(Matrix {
            size,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Test convenience: integer rows. Panics on ragged input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| crate::rational::rat_int(v)).collect())
                .collect(),
        )
        .expect("rows must form a square array")
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Matrix::zero(size);
        for i in 0..size {
            for j in 0..size {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry at zero-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.size + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.size + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|i| (i + 1..self.size).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.size, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            size: self.size,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            size: self.size,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_size(other)?;
        Ok(Matrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_size(other)?;
        Ok(Matrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Plain matrix product.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.check_size(other)?;
        Ok(Matrix::from_fn(self.size, |i, j| {
            (0..self.size)
                .map(|k| self.get(i, k) * other.get(k, j))
                .sum()
        }))
    }

    /// The quadratic form `vᵀ M v`, exact.
    pub fn quadratic_form(&self, v: &[Rational]) -> Rational {
        assert_eq!(v.len(), self.size, "vector length must match matrix size");
        let mut acc = Rational::zero();
        for i in 0..self.size {
            for j in 0..self.size {
                acc += &v[i] * self.get(i, j) * &v[j];
            }
        }
        acc
    }

    fn check_size(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.size != other.size {
            return Err(LinalgError::DimensionMismatch(self.size, other.size));
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.size {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.size {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Sum of the diagonal entries.
pub fn trace(m: &Matrix) -> Rational {
    (0..m.size()).map(|i| m.get(i, i).clone()).sum()
}

/// `tr(A·B)` computed as `Σ_{i,j} A[i][j]·B[j][i]` without forming the product.
pub fn trace_product(a: &Matrix, b: &Matrix) -> Result<Rational, LinalgError> {
    if a.size() != b.size() {
        return Err(LinalgError::DimensionMismatch(a.size(), b.size()));
    }
    let mut acc = Rational::zero();
    for i in 0..a.size() {
        for j in 0..a.size() {
            acc += a.get(i, j) * b.get(j, i);
        }
    }
    Ok(acc)
}

/// The coordinate matrix `W_{k,l}`: 1 at row `k`, column `l`, 0 elsewhere.
/// Indices are one-based, matching the usual `W_{k,l}` convention.
pub fn coordinate_matrix(t: usize, k: usize, l: usize) -> Result<Matrix, LinalgError> {
    if k == 0 || l == 0 || k > t || l > t {
        return Err(LinalgError::IndexOutOfRange(k, l, t));
    }
    let mut m = Matrix::zero(t);
    m.set(k - 1, l - 1, Rational::one());
    Ok(m)
}

/// A square rational matrix known to equal its transpose.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    pub fn new(m: Matrix) -> Result<Self, LinalgError> {
        for i in 0..m.size() {
            for j in i + 1..m.size() {
                if m.get(i, j) != m.get(j, i) {
                    return Err(LinalgError::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymMatrix(m))
    }

    /// For matrices symmetric by construction (sums, Schur complements, ...).
    pub(crate) fn new_unchecked(m: Matrix) -> Self {
        debug_assert!(m.is_symmetric());
        SymMatrix(m)
    }

    pub fn zero(size: usize) -> Self {
        SymMatrix(Matrix::zero(size))
    }

    pub fn identity(size: usize) -> Self {
        SymMatrix(Matrix::identity(size))
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        SymMatrix::new(Matrix::from_rows(rows)?)
    }

    /// Test convenience. Panics on ragged or asymmetric input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        SymMatrix::new(Matrix::from_i64_rows(rows)).expect("rows must be symmetric")
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn scale(&self, c: &Rational) -> SymMatrix {
        SymMatrix(self.0.scale(c))
    }

    pub fn add(&self, other: &SymMatrix) -> Result<SymMatrix, LinalgError> {
        Ok(SymMatrix(self.0.add(&other.0)?))
    }
}

impl Deref for SymMatrix {
    type Target = Matrix;

    fn deref(&self) -> &Matrix {
        &self.0
    }
}

/// A refutation of positive (semi)definiteness: a nonzero rational vector
/// with `value = vectorᵀ·M·vector ≤ 0` for the matrix it witnesses.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub vector: Vec<Rational>,
    pub value: Rational,
}

/// Outcome of an exact definiteness test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Yes,
    No(Witness),
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Yes => None,
            Verdict::No(w) => Some(w),
        }
    }
}

/// Exact positive-definiteness test.
///
/// Runs LDLᵀ elimination on the leading principal submatrices; `M` is PD iff
/// all `t` pivots are strictly positive. At the first pivot `≤ 0` in position
/// `k`, back-substituting the elimination multipliers through `Lᵀv = e_k`
/// yields `v` with `vᵀMv` equal to that pivot.
pub fn is_pd(m: &SymMatrix) -> Verdict {
    let t = m.size();
    let mut work = m.as_matrix().clone();
    // lower[i][k] holds the multiplier used to clear entry (i, k).
    let mut lower = vec![vec![Rational::zero(); t]; t];
    for k in 0..t {
        let pivot = work.get(k, k).clone();
        if !pivot.is_positive() {
            let mut v = vec![Rational::zero(); t];
            v[k] = Rational::one();
            for i in (0..k).rev() {
                let mut s = Rational::zero();
                for (j, vj) in v.iter().enumerate().take(k + 1).skip(i + 1) {
                    s += &lower[j][i] * vj;
                }
                v[i] = -s;
            }
            let value = m.quadratic_form(&v);
            debug_assert_eq!(value, pivot);
            return Verdict::No(Witness { vector: v, value });
        }
        let mults: Vec<Rational> = (k + 1..t).map(|i| work.get(i, k) / &pivot).collect();
        for (offset, i) in (k + 1..t).enumerate() {
            lower[i][k] = mults[offset].clone();
            for j in k + 1..t {
                let delta = &mults[offset] * work.get(k, j);
                let updated = work.get(i, j) - delta;
                work.set(i, j, updated);
            }
        }
    }
    Verdict::Yes
}

/// Exact positive-semidefiniteness test.
///
/// If every diagonal entry is zero, `M` is PSD iff `M = 0`; a nonzero
/// off-diagonal entry gives an indefinite 2×2 witness. A negative diagonal
/// entry is its own witness. Otherwise the first positive diagonal entry is
/// eliminated and the test recurses on the Schur complement, lifting any
/// witness back to the original coordinates.
pub fn is_psd(m: &SymMatrix) -> Verdict {
    let t = m.size();
    if (0..t).all(|i| m.get(i, i).is_zero()) {
        for i in 0..t {
            for j in i + 1..t {
                let e = m.get(i, j);
                if !e.is_zero() {
                    let mut v = vec![Rational::zero(); t];
                    v[i] = Rational::one();
                    v[j] = -e.signum();
                    let value = m.quadratic_form(&v);
                    debug_assert!(value.is_negative());
                    return Verdict::No(Witness { vector: v, value });
                }
            }
        }
        return Verdict::Yes;
    }
    for i in 0..t {
        if m.get(i, i).is_negative() {
            let mut v = vec![Rational::zero(); t];
            v[i] = Rational::one();
            let value = m.get(i, i).clone();
            return Verdict::No(Witness { vector: v, value });
        }
    }
    let p = (0..t)
        .find(|&i| m.get(i, i).is_positive())
        .expect("a positive diagonal entry exists");
    if t == 1 {
        return Verdict::Yes;
    }
    let d = m.get(p, p).clone();
    let kept: Vec<usize> = (0..t).filter(|&i| i != p).collect();
    let schur = Matrix::from_fn(t - 1, |a, b| {
        let (i, j) = (kept[a], kept[b]);
        m.get(i, j) - m.get(i, p) * m.get(j, p) / &d
    });
    match is_psd(&SymMatrix::new_unchecked(schur)) {
        Verdict::Yes => Verdict::Yes,
        Verdict::No(inner) => {
            let mut v = vec![Rational::zero(); t];
            let mut along_pivot = Rational::zero();
            for (a, &i) in kept.iter().enumerate() {
                along_pivot += m.get(i, p) * &inner.vector[a];
                v[i] = inner.vector[a].clone();
            }
            v[p] = -along_pivot / &d;
            let value = m.quadratic_form(&v);
            debug_assert_eq!(value, inner.value);
            Verdict::No(Witness { vector: v, value })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use proptest::prelude::*;

    #[test]
    fn pd_identity() {
        assert!(is_pd(&SymMatrix::identity(2)).is_yes());
    }

    #[test]
    fn pd_indefinite_diagonal() {
        let m = SymMatrix::from_i64_rows(&[&[1, 0], &[0, -1]]);
        match is_pd(&m) {
            Verdict::No(w) => {
                assert_eq!(w.vector, vec![rat_int(0), rat_int(1)]);
                assert_eq!(w.value, rat_int(-1));
            }
            Verdict::Yes => panic!("diag(1,-1) is not PD"),
        }
    }

    #[test]
    fn pd_two_by_two() {
        // Leading minors 2 and 3 are both positive.
        let m = SymMatrix::from_i64_rows(&[&[2, 1], &[1, 2]]);
        assert!(is_pd(&m).is_yes());
        assert!(rat_int(2).is_positive());
        assert!(rat_int(2 * 2 - 1).is_positive());
    }

    #[test]
    fn psd_zero_matrix() {
        assert!(is_psd(&SymMatrix::zero(3)).is_yes());
    }

    #[test]
    fn psd_off_diagonal_witness() {
        let m = SymMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        match is_psd(&m) {
            Verdict::No(w) => {
                assert_eq!(w.vector, vec![rat_int(1), rat_int(-1)]);
                assert_eq!(w.value, rat_int(-2));
            }
            Verdict::Yes => panic!("[[0,1],[1,0]] is indefinite"),
        }
    }

    #[test]
    fn psd_rank_one() {
        // Eigenvalues 0 and 2.
        let m = SymMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert!(is_psd(&m).is_yes());
        assert!(!is_pd(&m).is_yes());
    }

    #[test]
    fn psd_hidden_indefinite() {
        let m = SymMatrix::from_i64_rows(&[&[0, 1], &[1, 1]]);
        match is_psd(&m) {
            Verdict::No(w) => assert!(w.value.is_negative()),
            Verdict::Yes => panic!("zero diagonal with coupling is not PSD"),
        }
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace(&Matrix::identity(3)), rat_int(3));
        assert_eq!(
            trace(&Matrix::from_i64_rows(&[&[2, 5], &[7, 3]])),
            rat_int(5)
        );
        assert_eq!(trace(&coordinate_matrix(2, 1, 2).unwrap()), rat_int(0));
    }

    #[test]
    fn trace_product_examples() {
        let a = Matrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        let b = Matrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(trace_product(&a, &b).unwrap(), rat_int(5));
        assert_eq!(trace_product(&Matrix::identity(2), &a).unwrap(), trace(&a));
        assert!(trace_product(&a, &Matrix::identity(3)).is_err());
    }

    #[test]
    fn coordinate_matrix_pairing() {
        let a = Matrix::from_i64_rows(&[&[5, -2, 7], &[0, 3, 1], &[4, 9, -6]]);
        for k in 1..=3 {
            for l in 1..=3 {
                let w = coordinate_matrix(3, k, l).unwrap();
                assert_eq!(&trace_product(&w, &a).unwrap(), a.get(l - 1, k - 1));
                assert_eq!(w.transpose(), coordinate_matrix(3, l, k).unwrap());
            }
        }
    }

    #[test]
    fn coordinate_matrix_entries() {
        assert_eq!(
            coordinate_matrix(2, 1, 1).unwrap(),
            Matrix::from_i64_rows(&[&[1, 0], &[0, 0]])
        );
        assert_eq!(
            coordinate_matrix(2, 1, 2).unwrap(),
            Matrix::from_i64_rows(&[&[0, 1], &[0, 0]])
        );
        assert!(coordinate_matrix(2, 0, 1).is_err());
        assert!(coordinate_matrix(2, 3, 1).is_err());
    }

    #[test]
    fn symmetry_is_enforced() {
        let m = Matrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(SymMatrix::new(m), Err(LinalgError::NotSymmetric(0, 1)));
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=9).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_symmetric(max_size: usize) -> impl Strategy<Value = SymMatrix> {
        (1..=max_size).prop_flat_map(move |t| {
            proptest::collection::vec(arb_rational(), t * (t + 1) / 2).prop_map(move |vals| {
                let mut m = Matrix::zero(t);
                let mut it = vals.into_iter();
                for i in 0..t {
                    for j in i..t {
                        let v = it.next().unwrap();
                        m.set(i, j, v.clone());
                        m.set(j, i, v);
                    }
                }
                SymMatrix::new_unchecked(m)
            })
        })
    }

    proptest! {
        #[test]
        fn pd_implies_psd(m in arb_symmetric(4)) {
            if is_pd(&m).is_yes() {
                prop_assert!(is_psd(&m).is_yes());
            }
        }

        #[test]
        fn witnesses_recompute(m in arb_symmetric(4)) {
            if let Verdict::No(w) = is_pd(&m) {
                prop_assert!(w.vector.iter().any(|c| !c.is_zero()));
                prop_assert_eq!(m.quadratic_form(&w.vector), w.value.clone());
                prop_assert!(!w.value.is_positive());
            }
            if let Verdict::No(w) = is_psd(&m) {
                prop_assert!(w.vector.iter().any(|c| !c.is_zero()));
                prop_assert_eq!(m.quadratic_form(&w.vector), w.value.clone());
                prop_assert!(w.value.is_negative());
            }
        }

        #[test]
        fn trace_product_is_symmetric_and_matches_product(
            a in arb_symmetric(3), b in arb_symmetric(3)
        ) {
            prop_assume!(a.size() == b.size());
            let ab = trace_product(a.as_matrix(), b.as_matrix()).unwrap();
            let ba = trace_product(b.as_matrix(), a.as_matrix()).unwrap();
            prop_assert_eq!(ab.clone(), ba);
            prop_assert_eq!(ab, trace(&a.as_matrix().mul(b.as_matrix()).unwrap()));
        }
    }
}
