//! Total variation distance, the settings-dependence measure M, and the
//! hiddenness measure H.
//!
//! M is the largest L1 distance between the hidden-value distributions of
//! two contexts, so M ∈ [0, 2] and M = 0 exactly when the model is
//! measurement independent. H is the number of hidden values minus one;
//! H = 0 means the model introduces no nontrivial hidden variable.

use crate::error::{Error, Result};
use crate::model::ContextDistribution;
use crate::tolerance;

/// Half the L1 distance between two probability vectors; equals the largest
/// difference |P(E) − Q(E)| over event subsets E.
pub fn total_variation(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Dimension(format!(
            "vectors have lengths {} and {}",
            p.len(),
            q.len()
        )));
    }
    validate_probability_vector(p, "first")?;
    validate_probability_vector(q, "second")?;
    let l1: f64 = p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum();
    Ok(0.5 * l1)
}

fn validate_probability_vector(v: &[f64], which: &str) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Validation(format!("{which} vector is empty")));
    }
    let mut sum = 0.0;
    for &p in v {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::Validation(format!(
                "{which} vector has invalid probability {p}"
            )));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > tolerance::ROW_SUM {
        return Err(Error::Validation(format!(
            "{which} vector sums to {sum}, expected 1 within {}",
            tolerance::ROW_SUM
        )));
    }
    Ok(())
}

/// The settings-dependence measure M: the maximum over context pairs of the
/// L1 distance between their hidden-value distributions.
pub fn measurement_dependence(dist: &ContextDistribution) -> f64 {
    let rows = dist.rows();
    let mut max = 0.0f64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let l1: f64 = rows[i]
                .iter()
                .zip(&rows[j])
                .map(|(a, b)| (a - b).abs())
                .sum();
            max = max.max(l1);
        }
    }
    max
}

/// Which hidden values count toward the hiddenness H.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HiddennessMode {
    /// Count every declared hidden value, including zero-probability ones.
    #[default]
    Declared,
    /// Count only hidden values with positive probability in some context.
    Effective,
}

impl std::fmt::Display for HiddennessMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HiddennessMode::Declared => write!(f, "declared"),
            HiddennessMode::Effective => write!(f, "effective"),
        }
    }
}

impl std::str::FromStr for HiddennessMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "declared" => Ok(HiddennessMode::Declared),
            "effective" => Ok(HiddennessMode::Effective),
            other => Err(Error::Parse(format!(
                "hiddenness mode must be \"declared\" or \"effective\", got {other:?}"
            ))),
        }
    }
}

/// The hiddenness H: hidden-value count minus one.
///
/// A validated distribution always has at least one hidden value with
/// probability above the zero-support threshold, so the effective count
/// cannot reach zero.
pub fn hiddenness(dist: &ContextDistribution, mode: HiddennessMode) -> usize {
    match mode {
        HiddennessMode::Declared => dist.n() - 1,
        HiddennessMode::Effective => {
            let used = (0..dist.n())
                .filter(|&lambda| {
                    dist.column(lambda)
                        .iter()
                        .any(|&p| p > tolerance::ZERO_SUPPORT)
                })
                .count();
            debug_assert!(used >= 1, "normalized rows cannot have empty support");
            used.max(1) - 1
        }
    }
}

/// Drops hidden values whose probability stays at or below the zero-support
/// threshold in every context. Row sums change by at most the removed mass,
/// which is zero for the usual exact-zero padding.
pub fn trim_zero_lambdas(dist: &ContextDistribution) -> ContextDistribution {
    let keep: Vec<usize> = (0..dist.n())
        .filter(|&lambda| {
            dist.column(lambda)
                .iter()
                .any(|&p| p > tolerance::ZERO_SUPPORT)
        })
        .collect();
    if keep.len() == dist.n() {
        return dist.clone();
    }
    let rows = dist.rows();
    let trimmed = std::array::from_fn(|slot| keep.iter().map(|&l| rows[slot][l]).collect());
    ContextDistribution::from_rows_unchecked(trimmed)
}
