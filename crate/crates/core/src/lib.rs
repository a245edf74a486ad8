//! Exact positivity certificates and tracial moment checks for matrix
//! polynomials on `[-1,1]`, `[0,1]`, and the hypercube `[-1,1]^n`.
//!
//! Everything here runs over arbitrary-precision rationals, so definiteness
//! tests, certificate searches, and moment checks are exact decisions rather
//! than floating-point estimates. A returned certificate always reconstructs
//! its input polynomial as an exact identity; a failed definiteness test
//! always carries a rational witness vector.

pub mod certify;
pub mod linalg;
pub mod matpoly;
pub mod moment;
pub mod rational;

pub use certify::{
    certify_hypercube, certify_interval, certify_unit_interval, find_violation, polya_loop,
    verify_certificate, Certificate, CertificateTerm, CertifyError, Domain, DomainViolation,
    PolyaResult, VerifyOutcome,
};
pub use linalg::{
    coordinate_matrix, is_pd, is_psd, trace, trace_product, LinalgError, Matrix, SymMatrix,
    Verdict, Witness,
};
pub use matpoly::{expand_linear_factor_product, MatPoly, MatPolyError, MultiIndex, ScalarPoly};
pub use moment::{
    check_hypercube_moment, check_interval_moment, check_unit_interval_moment,
    haviland_necessity_check, hypercube_localization_matrix, interval_localization_matrix,
    riesz_eval, tracial_integral, unit_interval_localization_matrix, Atom, AtomicMeasure,
    CheckFailure, CheckReport, MomentError, MomentSeq,
};
pub use rational::Rational;
