//! Shared numerical tolerances.
//!
//! Every threshold used by the library is defined here rather than inline,
//! so the zero tests stay auditable and consistent across modules.

/// Relative gap threshold for eigenvalue validation: imaginary parts and
/// consecutive modulus gaps are compared against this times the spectral
/// radius.
pub const TOL_GAP: f64 = 1e-9;

/// Reconstruction tolerance for `from_eigensplit` round trips, scaled by the
/// Frobenius norm of the matrix.
pub const TOL_RECON: f64 = 1e-10;

/// Bi-orthogonality tolerance for dual covectors, scaled by matrix scale.
pub const TOL_DUAL: f64 = 1e-10;

/// Unimodularity slack per dimension: |det - 1| <= TOL_DET * d.
pub const TOL_DET: f64 = 1e-9;

/// Scale-aware zero test for k x k minors: a minor counts as zero when its
/// magnitude is below TOL_MINOR * (max |entry|)^k.
pub const TOL_MINOR: f64 = 1e-12;

/// Rank decisions in transversality checks: smallest singular value must
/// exceed this times the largest.
pub const TOL_RANK: f64 = 1e-8;

/// Subspace distance threshold for flag equality (principal angles).
pub const TOL_FLAG: f64 = 1e-8;

/// Residual threshold for conjugator verification.
pub const TOL_CONJ: f64 = 1e-8;

/// Generic pairing-degeneracy threshold for bracket products.
pub const TOL_PAIRING: f64 = 1e-10;

/// f64 machine epsilon, used by the expansion-fit underflow budget.
pub const EPS_DOUBLE: f64 = f64::EPSILON;

/// Double-double machine epsilon (twofloat carries ~106 significand bits).
pub const EPS_EXTENDED: f64 = 4.93e-32;

/// Central finite-difference step for Jacobian experiments.
pub const FD_STEP: f64 = 1e-5;

/// Singular-value gap ratio that decides numerical rank.
pub const RANK_GAP_RATIO: f64 = 1e3;
