//! Verification toolkit for woven bases of finite-dimensional spaces.
//!
//! Two Riesz bases are woven when every way of mixing them, taking some
//! basis vectors from the first family and the complementary ones from the
//! second, again yields a Riesz basis. For finite frames this reduces to a
//! statement about the change-of-basis matrix `A = V^-1 W`: the pair is
//! woven exactly when every central (principal) submatrix of `A` is
//! invertible. This crate decides that property, certifies it or produces
//! witnesses against it, reconstructs vectors from mixed samples, explores
//! the same question for Fourier matrices, and certifies shift-invariant
//! perturbation bounds on the function side.
//!
//! All decisions route through one precision policy: fast double-precision
//! singular-value tests with an explicit inconclusive band, escalating to
//! multiprecision ball arithmetic where a certified sign is needed.

pub mod cmatrix;
pub mod error;
pub mod fourier;
pub mod sis;
pub mod index_set;
pub mod linalg;
pub mod precision;
pub mod reconstruct;
pub mod scalar;
pub mod weaving;

mod ball;

pub use cmatrix::{C64, CMatrix, Matrix, XMatrix};
pub use error::{Error, Result};
pub use fourier::{
    classify_fourier, fourier_matrix, is_square_free, minors_exhaustive, scan, two_by_two_witness,
    FourierOptions, FourierScanRow, ScanReport,
};
pub use index_set::IndexSet;
pub use linalg::{
    det, hermitian_eigen_range, invertibility, sigma_extremes, solve, Det, InvertibilityVerdict,
    VerdictStatus,
};
pub use precision::{Mode, PrecisionConfig};
pub use reconstruct::{recover, sample, two_matrix_recover, weaving_operator, MixedSamples};
pub use scalar::{Extended, Real};
pub use sis::{
    boundary_tail_mass, bracket, finite_section_validate, gram_field, multi_perturbation_certify,
    perturbation_certify, pw_corollary_certify, riesz_bounds, BracketSamples, CertificateStatus,
    GramField, PwReport, SISCertificate, SpectrumSamples,
};
pub use weaving::{
    all_minors_nonzero, apply_symmetry, are_woven, change_of_basis, classify_class_w,
    classify_finite_perturbation, dr_criterion, woven_up_to_permutation, ClassStatus, DrReport,
    FastPath, FinitePerturbation, MinorsOutcome, MinorsStatus, Symmetry, WeavingCertificate,
    WeavingOptions,
};
