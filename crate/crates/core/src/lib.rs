//! Numerical analysis of infinite Jacobi (tridiagonal) operators.
//!
//! Coefficient sequences and S-fractions ([`coeffs`]), three-term recurrences
//! ([`recurrence`]), continued-fraction convergents ([`cfrac`]), spectra of
//! finite sections ([`eigenspec`]) and reference families ([`families`]).

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference values in tests keep every digit the oracle printed.
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod cfrac;
pub mod coeffs;
pub mod eigenspec;
mod error;
pub mod families;
pub mod recurrence;
mod scalar;

pub use num_complex::Complex64;

pub use cfrac::{
    check_contraction, estimate_limit, grid_rows, j_convergent, s_convergent, ConvergentStatus, ConvergentValue,
    Fraction, GridRow, JFraction, LimitEstimate, LimitOptions,
};
pub use coeffs::{
    blumenthal_limits, s_to_j, BlumenthalLimits, ClassificationReport, CoefficientSequence, Contraction, Limits,
    SFraction, SFractionDocument, SFractionKind, SRule, SequenceDocument, TailEvidence, TruncatedJacobi, Verdict,
};
pub use eigenspec::{
    eigen_tridiag, interlaces, krein_gj_decay, spectrum_sweep, tridiag_eigenvalues, zero_gap_density,
    AccumulationEstimate, ConvergedPoint, EigenDecomposition, KreinPolynomial, KreinReport, SpectrumReport,
    SpectrumRow, SweepOptions,
};
pub use error::{Error, Result};
pub use families::{bessel_j, bessel_zero, make_family, FamilySpec, FAMILY_NAMES};
pub use recurrence::{
    christoffel_mass, eval_polys, poincare_roots, ratio_sequence, ChristoffelSums, PoincareRoots, PolynomialTrace,
    RatioReport, RatioStatus, RootRegime,
};
pub use scalar::Scalar;
