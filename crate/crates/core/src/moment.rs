//! Tracial moment machinery: finitely-atomic matrix-valued measures, tracial
//! integrals, the Riesz functional, and truncated moment-sequence checks for
//! the box domains.
//!
//! Each check reduces the "for all positive definite `G`" trace conditions to
//! one exact PSD test per index: for symmetric `T`, `tr(GT) ≥ 0` for every PD
//! `G` holds iff `T` is PSD. A pass therefore means "no obstruction up to the
//! checked level", never a full moment-sequence certification.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::certify::{verify_certificate, Certificate};
use crate::linalg::{is_psd, trace_product, Matrix, SymMatrix, Verdict, Witness};
use crate::matpoly::{expand_linear_factor_product, MatPoly, MultiIndex};
use crate::rational::{binomial, rat_pow, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MomentError {
    #[error("index requires moments up to degree {required}, but the sequence stops at {level}")]
    LevelTooHigh { required: u32, level: u32 },
    #[error("operand dimensions do not match (variables or matrix size)")]
    DimensionMismatch,
    #[error("weight of atom {atom} is not positive semidefinite")]
    WeightNotPsd { atom: usize },
    #[error("moment sequence is missing the entry for {0}")]
    MissingEntry(MultiIndex),
    #[error("certificate does not verify against the polynomial")]
    CertificateInvalid,
    #[error("atom {atom} lies outside the certificate domain")]
    AtomOutsideDomain { atom: usize },
}

/// A point mass: a rational location and a PSD weight matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Atom {
    pub point: Vec<Rational>,
    pub weight: SymMatrix,
}

/// A finitely-atomic positive semidefinite matrix-valued measure
/// `E = Σ δ_{point} · weight`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AtomicMeasure {
    nvars: usize,
    size: usize,
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    /// Validates that all points share the variable count, all weights share
    /// the matrix size, and every weight is positive semidefinite.
    pub fn new(nvars: usize, size: usize, atoms: Vec<Atom>) -> Result<Self, MomentError> {
        for (index, atom) in atoms.iter().enumerate() {
            if atom.point.len() != nvars || atom.weight.size() != size {
                return Err(MomentError::DimensionMismatch);
            }
            if !is_psd(&atom.weight).is_yes() {
                return Err(MomentError::WeightNotPsd { atom: index });
            }
        }
        Ok(AtomicMeasure { nvars, size, atoms })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }
}

/// A truncated multi-indexed sequence of symmetric matrices, complete up to
/// total degree `level` (zero matrices are stored explicitly).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentSeq {
    nvars: usize,
    size: usize,
    level: u32,
    entries: BTreeMap<MultiIndex, SymMatrix>,
}

impl MomentSeq {
    /// Validates completeness up to `level` and uniform dimensions.
    pub fn new(
        nvars: usize,
        size: usize,
        level: u32,
        entries: BTreeMap<MultiIndex, SymMatrix>,
    ) -> Result<Self, MomentError> {
        for (alpha, matrix) in &entries {
            if alpha.len() != nvars || matrix.size() != size {
                return Err(MomentError::DimensionMismatch);
            }
        }
        for alpha in MultiIndex::all_up_to(nvars, level) {
            if !entries.contains_key(&alpha) {
                return Err(MomentError::MissingEntry(alpha));
            }
        }
        Ok(MomentSeq {
            nvars,
            size,
            level,
            entries,
        })
    }

    /// The truncated moment sequence `S_α = Σ_atoms point^α · weight` of an
    /// atomic measure.
    pub fn from_atomic(measure: &AtomicMeasure, level: u32) -> MomentSeq {
        let mut entries = BTreeMap::new();
        for alpha in MultiIndex::all_up_to(measure.nvars, level) {
            let mut acc = Matrix::zero(measure.size);
            for atom in &measure.atoms {
                let mut monomial = Rational::one();
                for (x, &e) in atom.point.iter().zip(alpha.exponents()) {
                    monomial *= rat_pow(x, e);
                }
                acc = acc
                    .add(&atom.weight.as_matrix().scale(&monomial))
                    .expect("sizes match");
            }
            entries.insert(
                alpha,
                SymMatrix::new(acc).expect("sum of symmetric matrices"),
            );
        }
        MomentSeq {
            nvars: measure.nvars,
            size: measure.size,
            level,
            entries,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Entries in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &SymMatrix)> {
        self.entries.iter()
    }

    pub fn get(&self, alpha: &MultiIndex) -> Option<&SymMatrix> {
        self.entries.get(alpha)
    }

    /// The sequence `c·S`.
    pub fn scale(&self, c: &Rational) -> MomentSeq {
        MomentSeq {
            nvars: self.nvars,
            size: self.size,
            level: self.level,
            entries: self
                .entries
                .iter()
                .map(|(a, m)| (a.clone(), m.scale(c)))
                .collect(),
        }
    }

    fn moment(&self, alpha: &MultiIndex) -> Result<&SymMatrix, MomentError> {
        if alpha.total() > self.level {
            return Err(MomentError::LevelTooHigh {
                required: alpha.total(),
                level: self.level,
            });
        }
        self.entries
            .get(alpha)
            .ok_or_else(|| MomentError::MissingEntry(alpha.clone()))
    }

    /// Univariate moment `S_k`.
    fn moment_1d(&self, k: u32) -> Result<&SymMatrix, MomentError> {
        self.moment(&MultiIndex::new(vec![k]))
    }
}

/// A failed moment check: the offending index, the localization matrix, and
/// a witness of its indefiniteness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckFailure {
    pub index: MultiIndex,
    pub matrix: SymMatrix,
    pub witness: Witness,
}

/// Result of a truncated moment check up to some level.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckReport {
    pub passed: bool,
    pub level_checked: u32,
    pub first_failure: Option<CheckFailure>,
}

impl CheckReport {
    fn pass(level: u32) -> Self {
        CheckReport {
            passed: true,
            level_checked: level,
            first_failure: None,
        }
    }

    fn fail(level: u32, failure: CheckFailure) -> Self {
        CheckReport {
            passed: false,
            level_checked: level,
            first_failure: Some(failure),
        }
    }
}

/// The exact tracial integral `Σ_atoms tr(F(point)·weight)`.
pub fn tracial_integral(measure: &AtomicMeasure, f: &MatPoly) -> Result<Rational, MomentError> {
    if f.nvars() != measure.nvars || f.size() != measure.size {
        return Err(MomentError::DimensionMismatch);
    }
    let mut acc = Rational::zero();
    for atom in &measure.atoms {
        let value = f
            .evaluate(&atom.point)
            .map_err(|_| MomentError::DimensionMismatch)?;
        acc += trace_product(&value, atom.weight.as_matrix())
            .map_err(|_| MomentError::DimensionMismatch)?;
    }
    Ok(acc)
}

/// The Riesz functional `L_S(F) = Σ_α tr(F_α·S_α)`.
pub fn riesz_eval(sequence: &MomentSeq, f: &MatPoly) -> Result<Rational, MomentError> {
    if f.nvars() != sequence.nvars || f.size() != sequence.size {
        return Err(MomentError::DimensionMismatch);
    }
    let mut acc = Rational::zero();
    for (alpha, coefficient) in f.terms() {
        let moment = sequence.moment(alpha)?;
        acc += trace_product(coefficient, moment.as_matrix())
            .map_err(|_| MomentError::DimensionMismatch)?;
    }
    Ok(acc)
}

/// The `[-1,1]` localization matrix
/// `T_{k,l} = Σ_{i≤k, j≤l} (−1)^j C(k,i) C(l,j) S_{i+j}`,
/// i.e. the coefficients of `(1+x)^k (1−x)^l` applied to the sequence.
pub fn interval_localization_matrix(
    sequence: &MomentSeq,
    k: u32,
    l: u32,
) -> Result<SymMatrix, MomentError> {
    require_univariate(sequence)?;
    let mut acc = Matrix::zero(sequence.size);
    for i in 0..=k {
        for j in 0..=l {
            let mut c = binomial(k, i) * binomial(l, j);
            if j % 2 == 1 {
                c = -c;
            }
            let moment = sequence.moment_1d(i + j)?;
            acc = acc.add(&moment.as_matrix().scale(&c)).expect("sizes match");
        }
    }
    Ok(SymMatrix::new(acc).expect("linear combination of symmetric matrices"))
}

/// The `[0,1]` localization matrix
/// `T'_{k,l} = Σ_{i≤k} (−1)^i C(k,i) S_{i+l}`,
/// i.e. the coefficients of `x^l (1−x)^k` applied to the sequence.
pub fn unit_interval_localization_matrix(
    sequence: &MomentSeq,
    k: u32,
    l: u32,
) -> Result<SymMatrix, MomentError> {
    require_univariate(sequence)?;
    let mut acc = Matrix::zero(sequence.size);
    for i in 0..=k {
        let mut c = binomial(k, i);
        if i % 2 == 1 {
            c = -c;
        }
        let moment = sequence.moment_1d(i + l)?;
        acc = acc.add(&moment.as_matrix().scale(&c)).expect("sizes match");
    }
    Ok(SymMatrix::new(acc).expect("linear combination of symmetric matrices"))
}

/// The hypercube localization matrix `T_α = Σ_β c_β S_β`, where the `c_β` are
/// the monomial coefficients of the expanded linear-form product
/// `Π (1+X_i)^{α_{2i−1}} (1−X_i)^{α_{2i}}`.
pub fn hypercube_localization_matrix(
    sequence: &MomentSeq,
    alpha: &MultiIndex,
) -> Result<SymMatrix, MomentError> {
    if alpha.len() != 2 * sequence.nvars {
        return Err(MomentError::DimensionMismatch);
    }
    if alpha.total() > sequence.level {
        return Err(MomentError::LevelTooHigh {
            required: alpha.total(),
            level: sequence.level,
        });
    }
    let expansion = expand_linear_factor_product(sequence.nvars, alpha);
    let mut acc = Matrix::zero(sequence.size);
    for (beta, c) in expansion.terms() {
        let moment = sequence.moment(beta)?;
        acc = acc.add(&moment.as_matrix().scale(&c)).expect("sizes match");
    }
    Ok(SymMatrix::new(acc).expect("linear combination of symmetric matrices"))
}

/// Checks `is_psd(T_{k,l})` for every `k+l ≤ level`, reporting the first
/// failure in graded lexicographic order.
pub fn check_interval_moment(sequence: &MomentSeq, level: u32) -> Result<CheckReport, MomentError> {
    require_level(sequence, level)?;
    require_univariate(sequence)?;
    for index in MultiIndex::all_up_to(2, level) {
        let (k, l) = (index.get(0), index.get(1));
        let t = interval_localization_matrix(sequence, k, l)?;
        if let Verdict::No(witness) = is_psd(&t) {
            return Ok(CheckReport::fail(
                level,
                CheckFailure {
                    index,
                    matrix: t,
                    witness,
                },
            ));
        }
    }
    Ok(CheckReport::pass(level))
}

/// Checks `is_psd(T'_{k,l})` for every `k+l ≤ level`, reporting the first
/// failure in graded lexicographic order.
pub fn check_unit_interval_moment(
    sequence: &MomentSeq,
    level: u32,
) -> Result<CheckReport, MomentError> {
    require_level(sequence, level)?;
    require_univariate(sequence)?;
    for index in MultiIndex::all_up_to(2, level) {
        let (k, l) = (index.get(0), index.get(1));
        let t = unit_interval_localization_matrix(sequence, k, l)?;
        if let Verdict::No(witness) = is_psd(&t) {
            return Ok(CheckReport::fail(
                level,
                CheckFailure {
                    index,
                    matrix: t,
                    witness,
                },
            ));
        }
    }
    Ok(CheckReport::pass(level))
}

/// Checks `is_psd(T_α)` for every `α ∈ N₀^{2n}` with `|α| ≤ level`, reporting
/// the first failure in graded lexicographic order.
pub fn check_hypercube_moment(
    sequence: &MomentSeq,
    level: u32,
) -> Result<CheckReport, MomentError> {
    require_level(sequence, level)?;
    for alpha in MultiIndex::all_up_to(2 * sequence.nvars, level) {
        let t = hypercube_localization_matrix(sequence, &alpha)?;
        if let Verdict::No(witness) = is_psd(&t) {
            return Ok(CheckReport::fail(
                level,
                CheckFailure {
                    index: alpha,
                    matrix: t,
                    witness,
                },
            ));
        }
    }
    Ok(CheckReport::pass(level))
}

/// The computable direction of the Haviland equivalence: a measure supported
/// in the domain of a verified certificate integrates the certified
/// polynomial to a nonnegative value.
///
/// Returns the exact tracial integral after checking the preconditions; the
/// nonnegativity itself is asserted, since it is a theorem once they hold.
pub fn haviland_necessity_check(
    measure: &AtomicMeasure,
    certificate: &Certificate,
    f: &MatPoly,
) -> Result<Rational, MomentError> {
    let valid = verify_certificate(certificate, f)
        .map(|outcome| outcome.is_valid())
        .unwrap_or(false);
    if !valid {
        return Err(MomentError::CertificateInvalid);
    }
    for (index, atom) in measure.atoms.iter().enumerate() {
        if !certificate.domain.contains(&atom.point) {
            return Err(MomentError::AtomOutsideDomain { atom: index });
        }
    }
    let value = tracial_integral(measure, f)?;
    assert!(
        !value.is_negative(),
        "tracial integral of a certified-positive polynomial must be nonnegative"
    );
    Ok(value)
}

fn require_univariate(sequence: &MomentSeq) -> Result<(), MomentError> {
    if sequence.nvars != 1 {
        return Err(MomentError::DimensionMismatch);
    }
    Ok(())
}

fn require_level(sequence: &MomentSeq, level: u32) -> Result<(), MomentError> {
    if level > sequence.level {
        return Err(MomentError::LevelTooHigh {
            required: level,
            level: sequence.level,
        });
    }
    Ok(())
}
