//! JSON file formats: matrix polynomials, certificates, atomic measures, and
//! moment sequences.
//!
//! Rationals travel as canonical strings `"p/q"` (`"/q"` omitted when the
//! denominator is 1), never as floats. Term lists are serialized in
//! lexicographic exponent order, so serialization is deterministic and
//! parse∘serialize is the identity.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use matpos::certify::{Certificate, CertificateTerm, Domain};
use matpos::linalg::{Matrix, SymMatrix};
use matpos::matpoly::{MatPoly, MultiIndex};
use matpos::moment::{Atom, AtomicMeasure, MomentError, MomentSeq};
use matpos::rational::Rational;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid rational {0:?}: expected \"p\" or \"p/q\"")]
    BadRational(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix must be {expected}x{expected}")]
    BadMatrixShape { expected: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("alpha {0:?} has the wrong length (expected {1})")]
    BadAlphaLength(Vec<u32>, usize),
    #[error("unknown domain kind {0:?}")]
    BadDomainKind(String),
    #[error("domain {0:?} requires exactly one variable, file has {1}")]
    DomainArity(String, usize),
    #[error("matrix size must be at least 1")]
    ZeroSize,
    #[error("{0}")]
    Moment(#[from] MomentError),
}

fn parse_rational(s: &str) -> Result<Rational, FormatError> {
    s.parse()
        .map_err(|_| FormatError::BadRational(s.to_string()))
}

fn parse_matrix(rows: &[Vec<String>], expected: usize) -> Result<Matrix, FormatError> {
    if rows.len() != expected || rows.iter().any(|r| r.len() != expected) {
        return Err(FormatError::BadMatrixShape { expected });
    }
    let mut parsed = Vec::with_capacity(expected);
    for row in rows {
        let mut out = Vec::with_capacity(expected);
        for cell in row {
            out.push(parse_rational(cell)?);
        }
        parsed.push(out);
    }
    Matrix::from_rows(parsed).map_err(|_| FormatError::BadMatrixShape { expected })
}

fn parse_symmetric(rows: &[Vec<String>], expected: usize) -> Result<SymMatrix, FormatError> {
    SymMatrix::new(parse_matrix(rows, expected)?).map_err(|_| FormatError::NotSymmetric)
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.size())
        .map(|i| (0..m.size()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn point_strings(point: &[Rational]) -> Vec<String> {
    point.iter().map(Rational::to_string).collect()
}

fn parse_point(strings: &[String]) -> Result<Vec<Rational>, FormatError> {
    strings.iter().map(|s| parse_rational(s)).collect()
}

// ---- matrix polynomials ----------------------------------------------------

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PolyFile {
    pub n: usize,
    pub t: usize,
    pub terms: Vec<PolyTerm>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PolyTerm {
    pub alpha: Vec<u32>,
    pub matrix: Vec<Vec<String>>,
}

impl PolyFile {
    pub fn to_matpoly(&self) -> Result<MatPoly, FormatError> {
        if self.t == 0 {
            return Err(FormatError::ZeroSize);
        }
        let mut poly = MatPoly::zero(self.n, self.t);
        for term in &self.terms {
            if term.alpha.len() != self.n {
                return Err(FormatError::BadAlphaLength(term.alpha.clone(), self.n));
            }
            poly.add_term(
                MultiIndex::new(term.alpha.clone()),
                parse_matrix(&term.matrix, self.t)?,
            );
        }
        Ok(poly)
    }

    pub fn from_matpoly(poly: &MatPoly) -> PolyFile {
        PolyFile {
            n: poly.nvars(),
            t: poly.size(),
            terms: poly
                .terms()
                .map(|(alpha, matrix)| PolyTerm {
                    alpha: alpha.exponents().to_vec(),
                    matrix: matrix_rows(matrix),
                })
                .collect(),
        }
    }
}

// ---- certificates -----------------------------------------------------------

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct DomainJson {
    pub kind: String,
    pub nvars: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CertificateFile {
    pub domain: DomainJson,
    pub t: usize,
    pub terms: Vec<CertTerm>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CertTerm {
    pub alpha: Vec<u32>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<String>>,
}

pub fn domain_kind(domain: &Domain) -> &'static str {
    match domain {
        Domain::Interval => "interval",
        Domain::UnitInterval => "unit-interval",
        Domain::Hypercube { .. } => "hypercube",
    }
}

pub fn parse_domain(kind: &str, nvars: usize) -> Result<Domain, FormatError> {
    match kind {
        "interval" => {
            if nvars != 1 {
                return Err(FormatError::DomainArity(kind.to_string(), nvars));
            }
            Ok(Domain::Interval)
        }
        "unit-interval" => {
            if nvars != 1 {
                return Err(FormatError::DomainArity(kind.to_string(), nvars));
            }
            Ok(Domain::UnitInterval)
        }
        "hypercube" => {
            if nvars == 0 {
                return Err(FormatError::DomainArity(kind.to_string(), nvars));
            }
            Ok(Domain::Hypercube { nvars })
        }
        other => Err(FormatError::BadDomainKind(other.to_string())),
    }
}

impl CertificateFile {
    pub fn to_certificate(&self) -> Result<Certificate, FormatError> {
        if self.t == 0 {
            return Err(FormatError::ZeroSize);
        }
        let domain = parse_domain(&self.domain.kind, self.domain.nvars)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            if term.alpha.len() != domain.alpha_len() {
                return Err(FormatError::BadAlphaLength(
                    term.alpha.clone(),
                    domain.alpha_len(),
                ));
            }
            terms.push(CertificateTerm {
                alpha: MultiIndex::new(term.alpha.clone()),
                matrix: parse_symmetric(&term.g, self.t)?,
            });
        }
        Ok(Certificate {
            domain,
            size: self.t,
            terms,
        })
    }

    pub fn from_certificate(certificate: &Certificate) -> CertificateFile {
        CertificateFile {
            domain: DomainJson {
                kind: domain_kind(&certificate.domain).to_string(),
                nvars: certificate.domain.nvars(),
            },
            t: certificate.size,
            terms: certificate
                .terms
                .iter()
                .map(|term| CertTerm {
                    alpha: term.alpha.exponents().to_vec(),
                    g: matrix_rows(term.matrix.as_matrix()),
                })
                .collect(),
        }
    }
}

// ---- atomic measures ---------------------------------------------------------

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct MeasureFile {
    pub n: usize,
    pub t: usize,
    pub atoms: Vec<AtomJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct AtomJson {
    pub point: Vec<String>,
    pub weight: Vec<Vec<String>>,
}

impl MeasureFile {
    pub fn to_measure(&self) -> Result<AtomicMeasure, FormatError> {
        if self.t == 0 {
            return Err(FormatError::ZeroSize);
        }
        let mut atoms = Vec::with_capacity(self.atoms.len());
        for atom in &self.atoms {
            let point = parse_point(&atom.point)?;
            if point.len() != self.n {
                return Err(FormatError::BadAlphaLength(
                    vec![point.len() as u32],
                    self.n,
                ));
            }
            atoms.push(Atom {
                point,
                weight: parse_symmetric(&atom.weight, self.t)?,
            });
        }
        Ok(AtomicMeasure::new(self.n, self.t, atoms)?)
    }

    pub fn from_measure(measure: &AtomicMeasure) -> MeasureFile {
        MeasureFile {
            n: measure.nvars(),
            t: measure.size(),
            atoms: measure
                .atoms()
                .iter()
                .map(|atom| AtomJson {
                    point: point_strings(&atom.point),
                    weight: matrix_rows(atom.weight.as_matrix()),
                })
                .collect(),
        }
    }
}

// ---- moment sequences ----------------------------------------------------------

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SequenceFile {
    pub n: usize,
    pub t: usize,
    pub level: u32,
    #[serde(rename = "S")]
    pub entries: Vec<SeqEntry>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct SeqEntry {
    pub alpha: Vec<u32>,
    pub matrix: Vec<Vec<String>>,
}

impl SequenceFile {
    pub fn to_sequence(&self) -> Result<MomentSeq, FormatError> {
        if self.t == 0 {
            return Err(FormatError::ZeroSize);
        }
        let mut entries = BTreeMap::new();
        for entry in &self.entries {
            if entry.alpha.len() != self.n {
                return Err(FormatError::BadAlphaLength(entry.alpha.clone(), self.n));
            }
            entries.insert(
                MultiIndex::new(entry.alpha.clone()),
                parse_symmetric(&entry.matrix, self.t)?,
            );
        }
        Ok(MomentSeq::new(self.n, self.t, self.level, entries)?)
    }

    pub fn from_sequence(sequence: &MomentSeq) -> SequenceFile {
        SequenceFile {
            n: sequence.nvars(),
            t: sequence.size(),
            level: sequence.level(),
            entries: sequence
                .entries()
                .map(|(alpha, matrix)| SeqEntry {
                    alpha: alpha.exponents().to_vec(),
                    matrix: matrix_rows(matrix.as_matrix()),
                })
                .collect(),
        }
    }
}

/// Pretty JSON with a trailing newline; field and term order are fixed, so
/// equal values serialize to identical bytes.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    out.push('\n');
    out
}
