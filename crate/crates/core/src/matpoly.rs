//! Sparse multivariate matrix polynomials over exact rationals.
//!
//! A [`MatPoly`] maps exponent multi-indices to nonzero `t×t` coefficient
//! matrices; zero coefficients are never stored, and the map's lexicographic
//! key order is the canonical term order everywhere (serialization included).
//! Besides ring arithmetic, the module carries the structural transforms the
//! certifiers are built from: evaluation, affine substitution, the Goursat
//! transform, homogenization, its multivariate pairing variant, and the exact
//! back-substitution that undoes it.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::rational::{binomial, inv_pow2, rat, rat_pow, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatPolyError {
    #[error("operand dimensions do not match (variables or matrix size)")]
    DimensionMismatch,
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("degree {actual} exceeds the requested bound {requested}")]
    DegreeExceeded { actual: u32, requested: u32 },
    #[error("expected a univariate polynomial, got {0} variables")]
    NotUnivariate(usize),
    #[error("point has {0} coordinates but the polynomial has {1} variables")]
    PointLength(usize, usize),
}

/// Exponent vector of a monomial; ordering is lexicographic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    /// The exponent vector of the single variable `var`.
    pub fn unit(len: usize, var: usize) -> Self {
        let mut e = vec![0; len];
        e[var] = 1;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, var: usize) -> u32 {
        self.0[var]
    }

    /// Total degree `|α|`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.len(), other.len());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn with_component(&self, var: usize, value: u32) -> MultiIndex {
        let mut e = self.0.clone();
        e[var] = value;
        MultiIndex(e)
    }

    /// Every index of the given length with `|α| ≤ bound`, in graded
    /// lexicographic order (total degree first, then lex).
    pub fn all_up_to(len: usize, bound: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for total in 0..=bound {
            let mut prefix = Vec::with_capacity(len);
            collect_with_total(len, total, &mut prefix, &mut out);
        }
        out
    }
}

fn collect_with_total(
    len: usize,
    remaining: u32,
    prefix: &mut Vec<u32>,
    out: &mut Vec<MultiIndex>,
) {
    if prefix.len() + 1 == len {
        prefix.push(remaining);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    if len == 0 {
        if remaining == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    for e in 0..=remaining {
        prefix.push(e);
        collect_with_total(len, remaining - e, prefix, out);
        prefix.pop();
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// Sparse matrix polynomial `Σ_α A_α X^α` with `t×t` rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatPoly {
    nvars: usize,
    size: usize,
    terms: BTreeMap<MultiIndex, Matrix>,
}

impl MatPoly {
    pub fn zero(nvars: usize, size: usize) -> Self {
        MatPoly {
            nvars,
            size,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, coefficient: Matrix) -> Self {
        let mut p = MatPoly::zero(nvars, coefficient.size());
        p.add_term(MultiIndex::zero(nvars), coefficient);
        p
    }

    pub fn from_terms(
        nvars: usize,
        size: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Matrix)>,
    ) -> Result<Self, MatPolyError> {
        let mut p = MatPoly::zero(nvars, size);
        for (alpha, coefficient) in terms {
            if alpha.len() != nvars || coefficient.size() != size {
                return Err(MatPolyError::DimensionMismatch);
            }
            p.add_term(alpha, coefficient);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic order of their multi-indices.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Matrix)> {
        self.terms.iter()
    }

    /// Coefficient of `X^alpha`; the zero matrix if the term is absent.
    pub fn coeff(&self, alpha: &MultiIndex) -> Matrix {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.size))
    }

    /// Accumulates `coefficient·X^alpha`, dropping the term if it cancels.
    pub fn add_term(&mut self, alpha: MultiIndex, coefficient: Matrix) {
        debug_assert_eq!(alpha.len(), self.nvars);
        debug_assert_eq!(coefficient.size(), self.size);
        if coefficient.is_zero() {
            return;
        }
        match self.terms.remove(&alpha) {
            None => {
                self.terms.insert(alpha, coefficient);
            }
            Some(existing) => {
                let sum = existing.add(&coefficient).expect("sizes match");
                if !sum.is_zero() {
                    self.terms.insert(alpha, sum);
                }
            }
        }
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::total).max()
    }

    /// Largest exponent of `X_var` over the stored terms (0 for the zero polynomial).
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|a| a.get(var)).max().unwrap_or(0)
    }

    /// Leading coefficient of a nonzero univariate polynomial.
    pub fn leading_coefficient(&self) -> Result<Matrix, MatPolyError> {
        if self.nvars != 1 {
            return Err(MatPolyError::NotUnivariate(self.nvars));
        }
        let d = self.degree().ok_or(MatPolyError::ZeroPolynomial)?;
        Ok(self.coeff(&MultiIndex::new(vec![d])))
    }

    pub fn add(&self, other: &MatPoly) -> Result<MatPoly, MatPolyError> {
        if self.nvars != other.nvars || self.size != other.size {
            return Err(MatPolyError::DimensionMismatch);
        }
        let mut out = self.clone();
        for (alpha, coefficient) in &other.terms {
            out.add_term(alpha.clone(), coefficient.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MatPoly) -> Result<MatPoly, MatPolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MatPoly {
        MatPoly {
            nvars: self.nvars,
            size: self.size,
            terms: self
                .terms
                .iter()
                .map(|(a, m)| (a.clone(), m.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> MatPoly {
        if c.is_zero() {
            return MatPoly::zero(self.nvars, self.size);
        }
        MatPoly {
            nvars: self.nvars,
            size: self.size,
            terms: self
                .terms
                .iter()
                .map(|(a, m)| (a.clone(), m.scale(c)))
                .collect(),
        }
    }

    /// Product with a scalar polynomial: each output coefficient is
    /// `Σ_{β+γ=α} p_β·F_γ`.
    pub fn mul_scalar_poly(&self, p: &ScalarPoly) -> Result<MatPoly, MatPolyError> {
        if p.nvars() != self.nvars {
            return Err(MatPolyError::DimensionMismatch);
        }
        let mut out = MatPoly::zero(self.nvars, self.size);
        for (beta, c) in p.terms() {
            for (gamma, m) in &self.terms {
                out.add_term(beta.add(gamma), m.scale(&c));
            }
        }
        Ok(out)
    }

    /// Exact evaluation `Σ A_α · Π x_i^{α_i}`.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Matrix, MatPolyError> {
        if point.len() != self.nvars {
            return Err(MatPolyError::PointLength(point.len(), self.nvars));
        }
        let mut acc = Matrix::zero(self.size);
        for (alpha, m) in &self.terms {
            let mut factor = Rational::one();
            for (x, &e) in point.iter().zip(alpha.exponents()) {
                factor *= rat_pow(x, e);
            }
            acc = acc.add(&m.scale(&factor)).expect("sizes match");
        }
        Ok(acc)
    }

    /// Replaces `X_var` by `a·X_var + b`, expanded exactly.
    pub fn substitute_affine(&self, var: usize, a: &Rational, b: &Rational) -> MatPoly {
        assert!(var < self.nvars, "variable index out of range");
        let mut out = MatPoly::zero(self.nvars, self.size);
        for (alpha, m) in &self.terms {
            let e = alpha.get(var);
            for j in 0..=e {
                let c = binomial(e, j) * rat_pow(a, j) * rat_pow(b, e - j);
                if c.is_zero() {
                    continue;
                }
                out.add_term(alpha.with_component(var, j), m.scale(&c));
            }
        }
        out
    }

    /// The Goursat transform `Σ_i F_i (1−x)^i (1+x)^{d−i}` of a nonzero
    /// univariate polynomial of degree `d`, i.e. `(1+x)^d F((1−x)/(1+x))`
    /// expanded inside polynomial arithmetic.
    pub fn goursat_transform(&self) -> Result<MatPoly, MatPolyError> {
        if self.nvars != 1 {
            return Err(MatPolyError::NotUnivariate(self.nvars));
        }
        let d = self.degree().ok_or(MatPolyError::ZeroPolynomial)?;
        let one_minus_x = ScalarPoly::univariate(&[rat(1, 1), rat(-1, 1)]);
        let one_plus_x = ScalarPoly::univariate(&[rat(1, 1), rat(1, 1)]);
        let mut out = MatPoly::zero(1, self.size);
        for (alpha, m) in &self.terms {
            let i = alpha.get(0);
            let basis = one_minus_x
                .pow(i)
                .mul(&one_plus_x.pow(d - i))
                .expect("univariate");
            out = out.add(&basis.times_matrix(m)).expect("sizes match");
        }
        Ok(out)
    }

    /// Homogenization to exact degree `target`: `x^i ↦ x^i y^{target−i}`.
    pub fn homogenize_univariate(&self, target: u32) -> Result<MatPoly, MatPolyError> {
        if self.nvars != 1 {
            return Err(MatPolyError::NotUnivariate(self.nvars));
        }
        if let Some(d) = self.degree() {
            if d > target {
                return Err(MatPolyError::DegreeExceeded {
                    actual: d,
                    requested: target,
                });
            }
        }
        let mut out = MatPoly::zero(2, self.size);
        for (alpha, m) in &self.terms {
            let i = alpha.get(0);
            out.add_term(MultiIndex::new(vec![i, target - i]), m.clone());
        }
        Ok(out)
    }

    /// Pairs every variable `X_i` with a partner: substitutes `X_i = U_i − V_i`
    /// and pads each term by `Π_i (U_i+V_i)^{degrees_i − β_i}`, producing a
    /// polynomial in `2n` interleaved variables `(U_1, V_1, U_2, V_2, …)` that
    /// is homogeneous of degree `degrees_i` in each pair.
    pub fn multihomogenize(&self, degrees: &[u32]) -> Result<MatPoly, MatPolyError> {
        if degrees.len() != self.nvars {
            return Err(MatPolyError::DimensionMismatch);
        }
        for (i, &bound) in degrees.iter().enumerate() {
            let actual = self.degree_in(i);
            if actual > bound {
                return Err(MatPolyError::DegreeExceeded {
                    actual,
                    requested: bound,
                });
            }
        }
        let n = self.nvars;
        let mut out = MatPoly::zero(2 * n, self.size);
        for (beta, m) in &self.terms {
            let mut factor = ScalarPoly::one(2 * n);
            for (i, &bound) in degrees.iter().enumerate() {
                let u = ScalarPoly::var(2 * n, 2 * i);
                let v = ScalarPoly::var(2 * n, 2 * i + 1);
                let diff = u.sub(&v).expect("matching arity");
                let sum = u.add(&v).expect("matching arity");
                factor = factor
                    .mul(&diff.pow(beta.get(i)))
                    .and_then(|f| f.mul(&sum.pow(bound - beta.get(i))))
                    .expect("matching arity");
            }
            out = out.add(&factor.times_matrix(m)).expect("sizes match");
        }
        Ok(out)
    }

    /// Undoes the pairing substitution: `U_i = (1+X_i)/2`, `V_i = (1−X_i)/2`,
    /// expanded exactly. Inverse of [`MatPoly::multihomogenize`] on its image.
    pub fn dehomogenize_back(&self) -> MatPoly {
        assert!(
            self.nvars.is_multiple_of(2),
            "input must have an even number of variables"
        );
        let n = self.nvars / 2;
        let mut out = MatPoly::zero(n, self.size);
        for (alpha, m) in &self.terms {
            let basis = expand_linear_factor_product(n, alpha).scale(&inv_pow2(alpha.total()));
            out = out.add(&basis.times_matrix(m)).expect("sizes match");
        }
        out
    }

    /// True when every stored coefficient matrix is symmetric.
    pub fn coefficients_symmetric(&self) -> bool {
        self.terms.values().all(Matrix::is_symmetric)
    }

    /// First term (lex order) whose coefficient is not symmetric.
    pub fn first_asymmetric_term(&self) -> Option<&MultiIndex> {
        self.terms
            .iter()
            .find(|(_, m)| !m.is_symmetric())
            .map(|(a, _)| a)
    }
}

/// A polynomial with rational (1×1 matrix) coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScalarPoly(MatPoly);

impl ScalarPoly {
    pub fn zero(nvars: usize) -> Self {
        ScalarPoly(MatPoly::zero(nvars, 1))
    }

    pub fn one(nvars: usize) -> Self {
        ScalarPoly::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MatPoly::zero(nvars, 1);
        p.add_term(MultiIndex::zero(nvars), scalar_matrix(c));
        ScalarPoly(p)
    }

    /// The variable `X_var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        let mut p = MatPoly::zero(nvars, 1);
        p.add_term(MultiIndex::unit(nvars, var), scalar_matrix(Rational::one()));
        ScalarPoly(p)
    }

    /// Univariate polynomial from coefficients in ascending degree order.
    pub fn univariate(coeffs: &[Rational]) -> Self {
        let mut p = MatPoly::zero(1, 1);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(MultiIndex::new(vec![i as u32]), scalar_matrix(c.clone()));
        }
        ScalarPoly(p)
    }

    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self, MatPolyError> {
        Ok(ScalarPoly(MatPoly::from_terms(
            nvars,
            1,
            terms.into_iter().map(|(a, c)| (a, scalar_matrix(c))),
        )?))
    }

    pub fn nvars(&self) -> usize {
        self.0.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn degree(&self) -> Option<u32> {
        self.0.degree()
    }

    pub fn as_matpoly(&self) -> &MatPoly {
        &self.0
    }

    pub fn into_matpoly(self) -> MatPoly {
        self.0
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, Rational)> {
        self.0.terms().map(|(a, m)| (a, m.get(0, 0).clone()))
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Rational {
        self.0.coeff(alpha).get(0, 0).clone()
    }

    pub fn add(&self, other: &ScalarPoly) -> Result<ScalarPoly, MatPolyError> {
        Ok(ScalarPoly(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &ScalarPoly) -> Result<ScalarPoly, MatPolyError> {
        Ok(ScalarPoly(self.0.sub(&other.0)?))
    }

    pub fn mul(&self, other: &ScalarPoly) -> Result<ScalarPoly, MatPolyError> {
        Ok(ScalarPoly(self.0.mul_scalar_poly(other)?))
    }

    pub fn pow(&self, exp: u32) -> ScalarPoly {
        let mut acc = ScalarPoly::one(self.nvars());
        for _ in 0..exp {
            acc = acc.mul(self).expect("matching arity");
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> ScalarPoly {
        ScalarPoly(self.0.scale(c))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, MatPolyError> {
        Ok(self.0.evaluate(point)?.get(0, 0).clone())
    }

    /// The matrix polynomial `p(X)·A` for a constant matrix `A`.
    pub fn times_matrix(&self, a: &Matrix) -> MatPoly {
        let mut out = MatPoly::zero(self.nvars(), a.size());
        for (alpha, c) in self.terms() {
            out.add_term(alpha.clone(), a.scale(&c));
        }
        out
    }
}

fn scalar_matrix(c: Rational) -> Matrix {
    let mut m = Matrix::zero(1);
    m.set(0, 0, c);
    m
}

/// The expanded product `Π_{i=1..n} (1+X_i)^{α_{2i−1}} (1−X_i)^{α_{2i}}`
/// of the hypercube's defining linear forms, in `n` variables.
///
/// `alpha` must have length `2n`; consecutive entries pair the `1+X_i` and
/// `1−X_i` exponents of each variable.
pub fn expand_linear_factor_product(nvars: usize, alpha: &MultiIndex) -> ScalarPoly {
    assert_eq!(alpha.len(), 2 * nvars, "alpha must have length 2n");
    let mut out = ScalarPoly::one(nvars);
    for i in 0..nvars {
        let x = ScalarPoly::var(nvars, i);
        let one = ScalarPoly::one(nvars);
        let plus = one.add(&x).expect("matching arity");
        let minus = one.sub(&x).expect("matching arity");
        out = out
            .mul(&plus.pow(alpha.get(2 * i)))
            .and_then(|p| p.mul(&minus.pow(alpha.get(2 * i + 1))))
            .expect("matching arity");
    }
    out
}
