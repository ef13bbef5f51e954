//! Pinned numerical tolerances.

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = crate::qnum::DEFAULT_PRECISION;

/// Residual bound for numeric-layer identities at the default precision.
pub const NUMERIC: f64 = 1e-24;

/// Residual bound used by coupling checks (unitarity, block match, recursions).
pub const COUPLING: f64 = 1e-20;

/// Relative tolerance for matching eigenvalues to closed-form spectra.
pub const LABEL_MATCH: f64 = 1e-12;

/// Agreement of the extrapolated limit with classical coefficients.
pub const CLASSICAL_LIMIT: f64 = 1e-6;

/// Exact-layer identities must vanish identically.
pub const EXACT: f64 = 0.0;
