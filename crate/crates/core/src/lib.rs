//! Finite local hidden-variable models for the CHSH scenario.
//!
//! The crate models bipartite experiments with two binary settings per party
//! and ±1 outcomes, explained by a finite set of hidden values whose
//! distribution may depend on the chosen settings. On top of the data model
//! it provides:
//!
//! - joint behaviors, correlators, and the CHSH value C ([`model`]);
//! - the settings-dependence measure M (largest L1 distance between two
//!   contexts' hidden-value distributions, via total variation) and the
//!   hiddenness H (hidden-value count minus one) ([`measures`]);
//! - the optimal CHSH value C_opt = 4 − 2·Σ_λ minᵢ p(λ|i) attainable over
//!   all local responses, responses that attain it, an independent
//!   enumeration oracle, the trade-off bounds
//!   M + 2 ≤ C_opt ≤ min(min(H,3)·M + 2, 4), per-model certification, and
//!   the coarse-graining reduction for large hidden-value sets ([`bounds`]);
//! - the saturating one-parameter families, convex interpolation, and
//!   feasible-region sweeps ([`tight`]);
//! - reproducible finite-statistics simulation ([`montecarlo`]);
//! - model/record files and seeded random generation ([`io`], [`random`]).

pub mod bounds;
pub mod error;
pub mod io;
pub mod measures;
pub mod model;
pub mod montecarlo;
pub mod random;
pub mod tight;
pub mod tolerance;

pub use error::{Error, Result};
pub use model::{Behavior, ContextDistribution, LocalModel, LocalResponses, MeasurementContext};
