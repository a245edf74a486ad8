//! Certificate search and verification for matrix polynomials positive on
//! `[-1,1]`, `[0,1]`, and the hypercube `[-1,1]^n`.
//!
//! The search follows the constructive route: transform the input into a
//! polynomial that is homogeneous in paired variables, multiply by the
//! simplex form `Π(U_i+V_i)` until every coefficient matrix is positive
//! definite, then substitute back into products of the domain's linear
//! forms with exact power-of-two rescaling. Every certificate is re-verified
//! by exact reconstruction before it is returned, so a caller never sees a
//! certificate that does not reproduce its input identically.

use std::fmt;

use thiserror::Error;

use crate::linalg::{is_pd, Matrix, SymMatrix, Verdict, Witness};
use crate::matpoly::{expand_linear_factor_product, MatPoly, MatPolyError, MultiIndex, ScalarPoly};
use crate::rational::{inv_pow2, pow2, rat, rat_int, Rational};

/// Default cap on Pólya multiplier applications.
pub const DEFAULT_N_MAX: u32 = 64;
/// Default fast-fail grid density per axis.
pub const DEFAULT_GRID: usize = 33;

/// The box a certificate lives on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Domain {
    /// The interval `[-1,1]` (one variable).
    Interval,
    /// The interval `[0,1]` (one variable).
    UnitInterval,
    /// The hypercube `[-1,1]^n`.
    Hypercube { nvars: usize },
}

impl Domain {
    pub fn nvars(&self) -> usize {
        match self {
            Domain::Interval | Domain::UnitInterval => 1,
            Domain::Hypercube { nvars } => *nvars,
        }
    }

    /// Length of a certificate exponent vector: one pair of linear forms per
    /// variable.
    pub fn alpha_len(&self) -> usize {
        2 * self.nvars()
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        if point.len() != self.nvars() {
            return false;
        }
        match self {
            Domain::Interval | Domain::Hypercube { .. } => {
                point.iter().all(|x| x >= &rat_int(-1) && x <= &rat_int(1))
            }
            Domain::UnitInterval => point.iter().all(|x| x >= &rat_int(0) && x <= &rat_int(1)),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Interval => write!(f, "[-1,1]"),
            Domain::UnitInterval => write!(f, "[0,1]"),
            Domain::Hypercube { nvars } => write!(f, "[-1,1]^{nvars}"),
        }
    }
}

/// One certificate summand: a positive definite matrix paired with the
/// exponents of the domain's linear forms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CertificateTerm {
    pub alpha: MultiIndex,
    pub matrix: SymMatrix,
}

/// A positivity certificate: `F = Σ G_α · Π l_j^{α_j}` with every `G_α`
/// positive definite. Terms are kept in lexicographic `alpha` order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub domain: Domain,
    pub size: usize,
    pub terms: Vec<CertificateTerm>,
}

impl Certificate {
    /// Common total degree of the basis products (`N + d` for a certificate
    /// produced by the search; 0 for a constant certificate).
    pub fn level(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.alpha.total())
            .max()
            .unwrap_or(0)
    }
}

/// Outcome of the Pólya multiplier loop.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyaResult {
    /// Number of multiplier applications performed.
    pub iterations: u32,
    /// The expanded polynomial whose coefficient matrices are all positive
    /// definite.
    pub poly: MatPoly,
}

/// A point of the domain where the polynomial fails to be positive definite.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DomainViolation {
    pub point: Vec<Rational>,
    pub witness: Witness,
}

/// The first non-positive-definite coefficient of the last Pólya iteration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyaDiagnostic {
    pub alpha: MultiIndex,
    pub coefficient: Matrix,
    pub witness: Witness,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("coefficient of X^{alpha} is not symmetric")]
    NotSymmetric { alpha: MultiIndex },
    #[error("not positive definite on the domain at point {}", format_point(&.0.point))]
    NotPositiveOnDomain(DomainViolation),
    #[error("no certificate found within {n_max} multiplier steps; coefficient of {} is not positive definite", .diagnostic.alpha)]
    CertificateNotFound {
        n_max: u32,
        diagnostic: Box<PolyaDiagnostic>,
    },
    #[error("expected a univariate polynomial, got {0} variables")]
    NotUnivariate(usize),
    #[error("polynomial is not homogeneous in paired variables")]
    NotPairHomogeneous,
    #[error("dimension mismatch: {0}")]
    Dimension(#[from] MatPolyError),
    #[error("certificate failed re-verification: {0}")]
    VerificationFailed(String),
}

fn format_point(point: &[Rational]) -> String {
    let coords: Vec<String> = point.iter().map(Rational::to_string).collect();
    format!("[{}]", coords.join(", "))
}

/// Decision returned by [`verify_certificate`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VerifyOutcome {
    Valid,
    /// A certificate matrix failed the positive-definiteness test.
    TermNotPd {
        term: usize,
        witness: Witness,
    },
    /// Reconstruction differs from the target; `alpha` is the first
    /// mismatching monomial in lexicographic order.
    Mismatch {
        alpha: MultiIndex,
    },
}

impl VerifyOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, VerifyOutcome::Valid)
    }
}

/// Scans a rational grid for a point where `F` fails to be positive definite.
///
/// The grid per axis is `{-1 + 2k/(m-1)}` (shifted to `{k/(m-1)}` on
/// `[0,1]`), with the center point (0, resp. 1/2) inserted when `m` is even.
/// Points are visited in ascending order, first axis most significant, and
/// the first failure is returned. A `None` result is a heuristic outcome,
/// never a positivity proof.
///
/// `F` must have symmetric coefficients and match the domain's variable
/// count; `grid_points_per_axis` must be at least 2.
pub fn find_violation(
    f: &MatPoly,
    domain: &Domain,
    grid_points_per_axis: usize,
) -> Option<DomainViolation> {
    assert!(
        grid_points_per_axis >= 2,
        "grid needs at least two points per axis"
    );
    assert_eq!(
        f.nvars(),
        domain.nvars(),
        "variable count must match the domain"
    );
    let axis = axis_grid(domain, grid_points_per_axis);
    let n = domain.nvars();
    let mut cursor = vec![0usize; n];
    loop {
        let point: Vec<Rational> = cursor.iter().map(|&k| axis[k].clone()).collect();
        let value = f.evaluate(&point).expect("point length matches");
        let sym = SymMatrix::new(value).expect("coefficients are symmetric");
        if let Verdict::No(witness) = is_pd(&sym) {
            return Some(DomainViolation { point, witness });
        }
        // odometer increment, last axis fastest
        let mut axis_idx = n;
        loop {
            if axis_idx == 0 {
                return None;
            }
            axis_idx -= 1;
            cursor[axis_idx] += 1;
            if cursor[axis_idx] < axis.len() {
                break;
            }
            cursor[axis_idx] = 0;
        }
    }
}

fn axis_grid(domain: &Domain, m: usize) -> Vec<Rational> {
    let steps = (m - 1) as i64;
    let mut values: Vec<Rational> = match domain {
        Domain::Interval | Domain::Hypercube { .. } => (0..m as i64)
            .map(|k| rat_int(-1) + rat(2 * k, steps))
            .collect(),
        Domain::UnitInterval => (0..m as i64).map(|k| rat(k, steps)).collect(),
    };
    let center = match domain {
        Domain::UnitInterval => rat(1, 2),
        _ => rat_int(0),
    };
    if !values.contains(&center) {
        values.push(center);
    }
    values.sort();
    values
}

/// Repeatedly multiplies a pair-homogeneous polynomial by `multiplier` until
/// every coefficient matrix over the full homogeneous support (absent
/// monomials count as zero) is positive definite.
///
/// Returns the smallest `N ≤ n_max`, in step order, together with the
/// expanded polynomial. Variables must come in consecutive pairs and every
/// term must have the same exponent sum within each pair.
pub fn polya_loop(
    h: &MatPoly,
    multiplier: &ScalarPoly,
    n_max: u32,
) -> Result<PolyaResult, CertifyError> {
    let mut current = h.clone();
    let mut last_failure = None;
    for n in 0..=n_max {
        match first_non_pd_coefficient(&current)? {
            None => {
                return Ok(PolyaResult {
                    iterations: n,
                    poly: current,
                })
            }
            Some(diagnostic) => last_failure = Some(diagnostic),
        }
        if n < n_max {
            current = current.mul_scalar_poly(multiplier)?;
        }
    }
    Err(CertifyError::CertificateNotFound {
        n_max,
        diagnostic: Box::new(last_failure.expect("at least one iteration ran")),
    })
}

/// Exponent sums per variable pair; errors unless every term agrees.
fn pair_degrees(p: &MatPoly) -> Result<Vec<u32>, CertifyError> {
    if p.nvars() == 0 || !p.nvars().is_multiple_of(2) || p.is_zero() {
        return Err(CertifyError::NotPairHomogeneous);
    }
    let pairs = p.nvars() / 2;
    let mut degrees: Option<Vec<u32>> = None;
    for (alpha, _) in p.terms() {
        let sums: Vec<u32> = (0..pairs)
            .map(|i| alpha.get(2 * i) + alpha.get(2 * i + 1))
            .collect();
        match &degrees {
            None => degrees = Some(sums),
            Some(existing) if *existing == sums => {}
            Some(_) => return Err(CertifyError::NotPairHomogeneous),
        }
    }
    Ok(degrees.expect("polynomial is nonzero"))
}

/// First (lex order) monomial of the full homogeneous support whose
/// coefficient fails the positive-definiteness test.
fn first_non_pd_coefficient(p: &MatPoly) -> Result<Option<PolyaDiagnostic>, CertifyError> {
    let degrees = pair_degrees(p)?;
    for alpha in pair_support(&degrees) {
        let coefficient = p.coeff(&alpha);
        let sym = SymMatrix::new(coefficient.clone()).map_err(|_| CertifyError::NotSymmetric {
            alpha: alpha.clone(),
        })?;
        if let Verdict::No(witness) = is_pd(&sym) {
            return Ok(Some(PolyaDiagnostic {
                alpha,
                coefficient,
                witness,
            }));
        }
    }
    Ok(None)
}

/// Every exponent vector with the given per-pair sums, lexicographically
/// ascending.
fn pair_support(degrees: &[u32]) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut choice = vec![0u32; degrees.len()];
    loop {
        let mut alpha = Vec::with_capacity(2 * degrees.len());
        for (i, &total) in degrees.iter().enumerate() {
            alpha.push(choice[i]);
            alpha.push(total - choice[i]);
        }
        out.push(MultiIndex::new(alpha));
        let mut i = degrees.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] <= degrees[i] {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Searches for a certificate `F = Σ G_i (1+x)^i (1−x)^j` on `[-1,1]`.
pub fn certify_interval(f: &MatPoly, n_max: u32) -> Result<Certificate, CertifyError> {
    ensure_univariate(f)?;
    ensure_symmetric(f)?;
    if let Some(violation) = find_violation(f, &Domain::Interval, DEFAULT_GRID) {
        return Err(CertifyError::NotPositiveOnDomain(violation));
    }
    let certificate = interval_core(f, n_max)?;
    verified(certificate, f)
}

/// Searches for a certificate `F = Σ G_i x^i (1−x)^j` on `[0,1]` by pulling
/// the problem back to `[-1,1]` through `x ↦ (x+1)/2` and rescaling the
/// resulting terms by exact powers of two.
pub fn certify_unit_interval(f: &MatPoly, n_max: u32) -> Result<Certificate, CertifyError> {
    ensure_univariate(f)?;
    ensure_symmetric(f)?;
    if let Some(violation) = find_violation(f, &Domain::UnitInterval, DEFAULT_GRID) {
        return Err(CertifyError::NotPositiveOnDomain(violation));
    }
    let pulled_back = f.substitute_affine(0, &rat(1, 2), &rat(1, 2));
    let inner = interval_core(&pulled_back, n_max).map_err(|e| match e {
        CertifyError::NotPositiveOnDomain(v) => {
            // report in [0,1] coordinates
            let point = vec![(v.point[0].clone() + rat_int(1)) / rat_int(2)];
            CertifyError::NotPositiveOnDomain(DomainViolation {
                point,
                witness: v.witness,
            })
        }
        other => other,
    })?;
    let terms = inner
        .terms
        .into_iter()
        .map(|term| {
            let scale = pow2(term.alpha.total());
            CertificateTerm {
                matrix: term.matrix.scale(&scale),
                alpha: term.alpha,
            }
        })
        .collect();
    let certificate = Certificate {
        domain: Domain::UnitInterval,
        size: f.size(),
        terms,
    };
    verified(certificate, f)
}

/// Searches for a certificate `F = Σ G_α Π (1+x_i)^{α_{2i-1}} (1−x_i)^{α_{2i}}`
/// on the hypercube via the pair-homogeneous Pólya loop.
pub fn certify_hypercube(f: &MatPoly, n_max: u32) -> Result<Certificate, CertifyError> {
    ensure_symmetric(f)?;
    let n = f.nvars();
    assert!(
        n >= 1,
        "hypercube certification needs at least one variable"
    );
    let domain = Domain::Hypercube { nvars: n };
    if let Some(violation) = find_violation(f, &domain, DEFAULT_GRID) {
        return Err(CertifyError::NotPositiveOnDomain(violation));
    }
    let degrees: Vec<u32> = (0..n).map(|i| f.degree_in(i)).collect();
    if degrees.iter().all(|&d| d == 0) {
        let constant = f.coeff(&MultiIndex::zero(n));
        let certificate = Certificate {
            domain,
            size: f.size(),
            terms: vec![CertificateTerm {
                alpha: MultiIndex::zero(2 * n),
                matrix: SymMatrix::new(constant).expect("coefficients are symmetric"),
            }],
        };
        return verified(certificate, f);
    }
    let h = f.multihomogenize(&degrees)?;
    let multiplier = pair_sum_product(n);
    let result = polya_loop(&h, &multiplier, n_max)?;
    let terms = result
        .poly
        .terms()
        .map(|(alpha, coefficient)| CertificateTerm {
            alpha: alpha.clone(),
            matrix: SymMatrix::new(coefficient.scale(&inv_pow2(alpha.total())))
                .expect("coefficients are symmetric"),
        })
        .collect();
    let certificate = Certificate {
        domain,
        size: f.size(),
        terms,
    };
    verified(certificate, f)
}

/// Checks that every certificate matrix is positive definite and that the
/// certificate reconstructs `F` as an exact polynomial identity.
pub fn verify_certificate(
    certificate: &Certificate,
    f: &MatPoly,
) -> Result<VerifyOutcome, CertifyError> {
    if f.nvars() != certificate.domain.nvars() || f.size() != certificate.size {
        return Err(CertifyError::Dimension(MatPolyError::DimensionMismatch));
    }
    for term in &certificate.terms {
        if term.alpha.len() != certificate.domain.alpha_len()
            || term.matrix.size() != certificate.size
        {
            return Err(CertifyError::Dimension(MatPolyError::DimensionMismatch));
        }
    }
    for (index, term) in certificate.terms.iter().enumerate() {
        if let Verdict::No(witness) = is_pd(&term.matrix) {
            return Ok(VerifyOutcome::TermNotPd {
                term: index,
                witness,
            });
        }
    }
    let mut reconstruction = MatPoly::zero(f.nvars(), f.size());
    for term in &certificate.terms {
        let basis = basis_poly(&certificate.domain, &term.alpha);
        reconstruction = reconstruction.add(&basis.times_matrix(term.matrix.as_matrix()))?;
    }
    if &reconstruction == f {
        Ok(VerifyOutcome::Valid)
    } else {
        let difference = reconstruction.sub(f)?;
        let alpha = difference
            .terms()
            .next()
            .map(|(a, _)| a.clone())
            .expect("difference is nonzero");
        Ok(VerifyOutcome::Mismatch { alpha })
    }
}

/// The basis product a certificate term multiplies its matrix by.
fn basis_poly(domain: &Domain, alpha: &MultiIndex) -> ScalarPoly {
    match domain {
        Domain::Interval => expand_linear_factor_product(1, alpha),
        Domain::Hypercube { nvars } => expand_linear_factor_product(*nvars, alpha),
        Domain::UnitInterval => {
            let x = ScalarPoly::var(1, 0);
            let one_minus_x = ScalarPoly::one(1).sub(&x).expect("matching arity");
            x.pow(alpha.get(0))
                .mul(&one_minus_x.pow(alpha.get(1)))
                .expect("matching arity")
        }
    }
}

/// The simplex multiplier `Π_i (U_i + V_i)` in `2n` interleaved variables.
fn pair_sum_product(n: usize) -> ScalarPoly {
    let mut out = ScalarPoly::one(2 * n);
    for i in 0..n {
        let sum = ScalarPoly::var(2 * n, 2 * i)
            .add(&ScalarPoly::var(2 * n, 2 * i + 1))
            .expect("matching arity");
        out = out.mul(&sum).expect("matching arity");
    }
    out
}

/// Goursat pipeline on `[-1,1]`, without the fast-fail grid scan (callers
/// run the scan in their own coordinates first).
fn interval_core(f: &MatPoly, n_max: u32) -> Result<Certificate, CertifyError> {
    let d = f
        .degree()
        .expect("the grid scan rejects the zero polynomial");
    if d == 0 {
        let constant = f.coeff(&MultiIndex::zero(1));
        return Ok(Certificate {
            domain: Domain::Interval,
            size: f.size(),
            terms: vec![CertificateTerm {
                alpha: MultiIndex::new(vec![0, 0]),
                matrix: SymMatrix::new(constant).expect("coefficients are symmetric"),
            }],
        });
    }
    // The Goursat leading coefficient is F(-1); it must be positive definite
    // for the degree to be preserved.
    let at_minus_one = f.evaluate(&[rat_int(-1)])?;
    let sym = SymMatrix::new(at_minus_one).expect("coefficients are symmetric");
    if let Verdict::No(witness) = is_pd(&sym) {
        return Err(CertifyError::NotPositiveOnDomain(DomainViolation {
            point: vec![rat_int(-1)],
            witness,
        }));
    }
    let tilde = f.goursat_transform()?;
    let h = tilde.homogenize_univariate(d)?;
    let multiplier = pair_sum_product(1);
    let result = polya_loop(&h, &multiplier, n_max)?;
    // A monomial u^k v^l of the expansion contributes its coefficient, scaled
    // by 1/2^(k+l), against (1−x)^k (1+x)^l; in certificate layout the
    // (1+x)-exponent comes first.
    let mut terms: Vec<CertificateTerm> = result
        .poly
        .terms()
        .map(|(alpha2, coefficient)| {
            let (k, l) = (alpha2.get(0), alpha2.get(1));
            CertificateTerm {
                alpha: MultiIndex::new(vec![l, k]),
                matrix: SymMatrix::new(coefficient.scale(&inv_pow2(k + l)))
                    .expect("coefficients are symmetric"),
            }
        })
        .collect();
    terms.sort_by(|a, b| a.alpha.cmp(&b.alpha));
    Ok(Certificate {
        domain: Domain::Interval,
        size: f.size(),
        terms,
    })
}

fn ensure_univariate(f: &MatPoly) -> Result<(), CertifyError> {
    if f.nvars() != 1 {
        return Err(CertifyError::NotUnivariate(f.nvars()));
    }
    Ok(())
}

fn ensure_symmetric(f: &MatPoly) -> Result<(), CertifyError> {
    if let Some(alpha) = f.first_asymmetric_term() {
        return Err(CertifyError::NotSymmetric {
            alpha: alpha.clone(),
        });
    }
    Ok(())
}

/// Soundness gate: every certificate passes verification before it leaves
/// this module, independent of how the search produced it.
fn verified(certificate: Certificate, f: &MatPoly) -> Result<Certificate, CertifyError> {
    match verify_certificate(&certificate, f)? {
        VerifyOutcome::Valid => Ok(certificate),
        VerifyOutcome::TermNotPd { term, .. } => Err(CertifyError::VerificationFailed(format!(
            "term {term} is not positive definite"
        ))),
        VerifyOutcome::Mismatch { alpha } => Err(CertifyError::VerificationFailed(format!(
            "reconstruction differs at {alpha}"
        ))),
    }
}
