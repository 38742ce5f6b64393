//! Numeric tolerances used across the crate.
//!
//! Every quantity handled here is an exact rational at desk scale; the
//! tolerances absorb floating-point error only.

/// Maximum deviation of a probability row sum from 1 accepted on input.
pub const ROW_SUM: f64 = 1e-9;

/// Tolerance for equalities between internally computed quantities.
pub const INTERNAL: f64 = 1e-12;

/// One-sided slack applied to inequality checks.
pub const BOUND_SLACK: f64 = 1e-9;

/// A hidden value whose probability stays at or below this threshold in
/// every context counts as unused.
pub const ZERO_SUPPORT: f64 = 1e-9;
