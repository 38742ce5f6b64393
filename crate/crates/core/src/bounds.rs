//! The optimal CHSH value for a fixed context-conditional distribution, the
//! trade-off bounds linking it to the settings dependence M and hiddenness H,
//! and the machinery that certifies those bounds on concrete models.
//!
//! For one hidden value with context weights z = (z₁, z₂, z₃, z₄), the best
//! CHSH contribution any local responses can extract is
//! Σⱼ zⱼ − 2·minᵢ zᵢ. Summing over hidden values and using normalization
//! gives the closed form C_opt = 4 − 2·Σ_λ minᵢ p(λ|i). Together with the
//! per-pair L1 bound on M this yields, for every local model,
//!
//!   M + 2  ≤  C_opt  ≤  min( min(H, 3)·M + 2, 4 ),
//!
//! with H = 0 forcing M = 0 and C_opt = 2. The witness search and the
//! coarse-graining reduction below certify the upper bound on concrete
//! distributions: cardinalities 3 and 4 directly, larger ones by merging
//! hidden values that share a minimizing context.

use crate::error::{Error, Result};
use crate::measures::{hiddenness, measurement_dependence, HiddennessMode};
use crate::model::{ContextDistribution, LocalModel, LocalResponses, MeasurementContext};
use crate::tolerance;

/// Default cap on the hidden-value count accepted by the enumeration oracle.
pub const DEFAULT_ORACLE_CAP: usize = 20;

/// Nonnegative context weights of a single hidden value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContextWeights([f64; 4]);

impl ContextWeights {
    pub fn new(weights: [f64; 4]) -> Result<Self> {
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::Domain(format!(
                    "context weight {} must be a nonnegative real, got {w}",
                    i + 1
                )));
            }
        }
        Ok(ContextWeights(weights))
    }

    pub fn as_array(&self) -> [f64; 4] {
        self.0
    }
}

/// Largest value of z₁AB + z₂AB′ + z₃A′B − z₄A′B′ over local expectations
/// A, A′, B, B′ ∈ [−1, 1]; equals Σⱼ zⱼ − 2·minᵢ zᵢ.
pub fn max_chsh_contribution(weights: &ContextWeights) -> f64 {
    let z = weights.as_array();
    let sum: f64 = z.iter().sum();
    let min = z.iter().fold(f64::INFINITY, |acc, &v| acc.min(v));
    sum - 2.0 * min
}

/// Σ_λ minᵢ p(λ|i): the total mass each hidden value keeps in its least
/// likely context.
pub fn min_support_sum(dist: &ContextDistribution) -> f64 {
    (0..dist.n())
        .map(|lambda| {
            dist.column(lambda)
                .iter()
                .fold(f64::INFINITY, |acc, &v| acc.min(v))
        })
        .sum()
}

/// The largest CHSH value any local responses can reach for this
/// distribution: 4 − 2·Σ_λ minᵢ p(λ|i). Always in [2, 4].
pub fn optimal_chsh(dist: &ContextDistribution) -> f64 {
    4.0 - 2.0 * min_support_sum(dist)
}

/// For each hidden value, the smallest context index (1..=4) attaining the
/// minimum probability; ties break toward the lowest index.
pub fn min_context_per_lambda(dist: &ContextDistribution) -> Vec<usize> {
    (0..dist.n())
        .map(|lambda| {
            let column = dist.column(lambda);
            let mut best = 0usize;
            for i in 1..4 {
                if column[i] < column[best] {
                    best = i;
                }
            }
            best + 1
        })
        .collect()
}

const SIGNS: [f64; 2] = [1.0, -1.0];

// Per-hidden-value maximum by checking all 16 deterministic sign
// assignments; returns the value and the first maximizing assignment in
// lexicographic order over (A, A′, B, B′) with +1 before −1.
fn enumerate_cell_max(z: [f64; 4]) -> (f64, [f64; 4]) {
    let mut best = f64::NEG_INFINITY;
    let mut best_assignment = [1.0; 4];
    for a0 in SIGNS {
        for a1 in SIGNS {
            for b0 in SIGNS {
                for b1 in SIGNS {
                    let value = z[0] * a0 * b0 + z[1] * a0 * b1 + z[2] * a1 * b0 - z[3] * a1 * b1;
                    if value > best {
                        best = value;
                        best_assignment = [a0, a1, b0, b1];
                    }
                }
            }
        }
    }
    (best, best_assignment)
}

/// Deterministic responses that attain the optimal CHSH value: for each
/// hidden value, the first maximizing sign assignment in lexicographic order
/// over (A, A′, B, B′) with +1 before −1.
pub fn optimal_responses(dist: &ContextDistribution) -> LocalResponses {
    let n = dist.n();
    let mut a_plus = [vec![0.0; n], vec![0.0; n]];
    let mut b_plus = [vec![0.0; n], vec![0.0; n]];
    for lambda in 0..n {
        let (_, [a0, a1, b0, b1]) = enumerate_cell_max(dist.column(lambda));
        a_plus[0][lambda] = (a0 + 1.0) / 2.0;
        a_plus[1][lambda] = (a1 + 1.0) / 2.0;
        b_plus[0][lambda] = (b0 + 1.0) / 2.0;
        b_plus[1][lambda] = (b1 + 1.0) / 2.0;
    }
    LocalResponses::new(a_plus, b_plus).expect("deterministic tables lie in [0,1]")
}

/// Independent oracle for [`optimal_chsh`]: maximizes each hidden value's
/// contribution over the 16 deterministic sign assignments and sums the
/// maxima. Capped at [`DEFAULT_ORACLE_CAP`] hidden values.
pub fn brute_force_optimal_chsh(dist: &ContextDistribution) -> Result<f64> {
    brute_force_optimal_chsh_with_cap(dist, DEFAULT_ORACLE_CAP)
}

/// As [`brute_force_optimal_chsh`] with an explicit cap.
pub fn brute_force_optimal_chsh_with_cap(dist: &ContextDistribution, cap: usize) -> Result<f64> {
    if dist.n() > cap {
        return Err(Error::Resource(format!(
            "enumeration oracle capped at {cap} hidden values, got {}",
            dist.n()
        )));
    }
    Ok((0..dist.n())
        .map(|lambda| enumerate_cell_max(dist.column(lambda)).0)
        .sum())
}

fn validate_dependence(m: f64) -> Result<()> {
    if !m.is_finite() || !(-tolerance::BOUND_SLACK..=2.0 + tolerance::BOUND_SLACK).contains(&m) {
        return Err(Error::Domain(format!(
            "settings dependence must lie in [0, 2], got {m}"
        )));
    }
    Ok(())
}

/// Tight upper bound on C_opt at hiddenness h and dependence m:
/// min( min(h, 3)·m + 2, 4 ), with h = 0 forcing the classical value 2.
pub fn copt_upper_bound(h: usize, m: f64) -> Result<f64> {
    validate_dependence(m)?;
    if h == 0 {
        if m > tolerance::BOUND_SLACK {
            return Err(Error::Infeasible(format!(
                "a model without hidden variables cannot depend on the settings (m = {m})"
            )));
        }
        return Ok(2.0);
    }
    Ok((h.min(3) as f64 * m + 2.0).min(4.0))
}

/// Tight lower bound on C_opt at dependence m: m + 2.
pub fn copt_lower_bound(m: f64) -> Result<f64> {
    validate_dependence(m)?;
    Ok(m + 2.0)
}

/// The smallest settings dependence compatible with CHSH value c at
/// hiddenness h: (c − 2) / min(h, 3).
pub fn min_dependence_for_chsh(c: f64, h: usize) -> Result<f64> {
    if !c.is_finite()
        || !(2.0 - tolerance::BOUND_SLACK..=4.0 + tolerance::BOUND_SLACK).contains(&c)
    {
        return Err(Error::Domain(format!(
            "CHSH value must lie in [2, 4], got {c}"
        )));
    }
    if h == 0 {
        if c > 2.0 + tolerance::BOUND_SLACK {
            return Err(Error::Infeasible(format!(
                "CHSH value {c} > 2 is unreachable without hidden variables"
            )));
        }
        return Ok(0.0);
    }
    Ok((c - 2.0).max(0.0) / h.min(3) as f64)
}

/// All quantities of the trade-off check for one model, with one flag per
/// inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffReport {
    pub hiddenness: usize,
    /// Settings dependence M of the model's distribution.
    pub dependence: f64,
    /// CHSH value C of the model's behavior.
    pub chsh: f64,
    /// Optimal CHSH value C_opt of the distribution.
    pub optimal_chsh: f64,
    /// M + 2.
    pub lower_bound: f64,
    /// min( min(H,3)·M + 2, 4 ).
    pub upper_bound: f64,
    /// C ≤ C_opt.
    pub chsh_within_optimal: bool,
    /// C_opt ≤ upper bound.
    pub optimal_within_upper: bool,
    /// Lower bound ≤ C_opt.
    pub lower_within_optimal: bool,
}

impl TradeoffReport {
    pub fn all_satisfied(&self) -> bool {
        self.chsh_within_optimal && self.optimal_within_upper && self.lower_within_optimal
    }
}

/// Evaluates C, C_opt, M, and H for one model and checks the three
/// inequalities C ≤ C_opt, C_opt ≤ upper bound, lower bound ≤ C_opt, each
/// with one-sided slack.
pub fn check_tradeoff(model: &LocalModel, mode: HiddennessMode) -> TradeoffReport {
    let dist = model.dist();
    let chsh = model.behavior().chsh();
    let optimal = optimal_chsh(dist);
    let dependence = measurement_dependence(dist);
    let h = hiddenness(dist, mode);
    // At h = 0 any residual dependence is normalization dust, so the bound
    // stays at the classical value.
    let upper_bound = if h == 0 {
        2.0
    } else {
        (h.min(3) as f64 * dependence + 2.0).min(4.0)
    };
    let lower_bound = dependence + 2.0;
    TradeoffReport {
        hiddenness: h,
        dependence,
        chsh,
        optimal_chsh: optimal,
        lower_bound,
        upper_bound,
        chsh_within_optimal: chsh <= optimal + tolerance::BOUND_SLACK,
        optimal_within_upper: optimal <= upper_bound + tolerance::BOUND_SLACK,
        lower_within_optimal: lower_bound <= optimal + tolerance::BOUND_SLACK,
    }
}

/// A triple certifying Σ_λ p(λ|i_λ) + coeff·|p(λ|i) − p(λ|j)| ≥ 1 on a
/// concrete distribution: the step behind the upper bound at cardinalities
/// 3 (coeff 2) and 4 (coeff 3).
///
/// Context indices are 1..=4; the hidden-value index is 0-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundWitness {
    pub i: usize,
    pub j: usize,
    pub lambda: usize,
    /// Value of the certified left-hand side at this triple.
    pub lhs: f64,
}

fn bound_witness(dist: &ContextDistribution, expected_n: usize, coeff: f64) -> Result<BoundWitness> {
    if dist.n() != expected_n {
        return Err(Error::Dimension(format!(
            "witness search requires exactly {expected_n} hidden values, got {}",
            dist.n()
        )));
    }
    let base = min_support_sum(dist);
    let mut best = BoundWitness {
        i: 1,
        j: 1,
        lambda: 0,
        lhs: f64::NEG_INFINITY,
    };
    for i in MeasurementContext::ALL {
        for j in MeasurementContext::ALL {
            for lambda in 0..dist.n() {
                let gap = (dist.prob(i, lambda) - dist.prob(j, lambda)).abs();
                let lhs = base + coeff * gap;
                if lhs > best.lhs {
                    best = BoundWitness {
                        i: i.index(),
                        j: j.index(),
                        lambda,
                        lhs,
                    };
                }
            }
        }
    }
    if best.lhs >= 1.0 - tolerance::BOUND_SLACK {
        Ok(best)
    } else {
        // Guaranteed to exist for every valid distribution; failure means a bug.
        Err(Error::Internal(format!(
            "no witness triple reached 1 (best lhs {} at i={}, j={}, lambda={})",
            best.lhs, best.i, best.j, best.lambda
        )))
    }
}

/// Witness for distributions over exactly 3 hidden values (coefficient 2).
pub fn bound_witness_n3(dist: &ContextDistribution) -> Result<BoundWitness> {
    bound_witness(dist, 3, 2.0)
}

/// Witness for distributions over exactly 4 hidden values (coefficient 3).
pub fn bound_witness_n4(dist: &ContextDistribution) -> Result<BoundWitness> {
    bound_witness(dist, 4, 3.0)
}

/// Result of merging hidden values by their minimizing context: a
/// 4-hidden-value distribution plus the groups (0-based hidden-value
/// indices, one group per context).
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseGraining {
    pub dist: ContextDistribution,
    pub partition: [Vec<usize>; 4],
}

/// Merges the hidden values of a distribution with n ≥ 5 into four groups,
/// one per minimizing context (ties toward the lowest index). Group γ keeps
/// its minimum at context γ, which is what lets the 4-value witness search
/// apply to arbitrarily large hidden-variable sets.
pub fn coarse_grain(dist: &ContextDistribution) -> Result<CoarseGraining> {
    if dist.n() < 5 {
        return Err(Error::Domain(format!(
            "coarse graining applies to 5 or more hidden values, got {}; use the direct witness search",
            dist.n()
        )));
    }
    let assignment = min_context_per_lambda(dist);
    let mut rows = [[0.0f64; 4]; 4];
    let mut partition: [Vec<usize>; 4] = Default::default();
    for (lambda, &gamma) in assignment.iter().enumerate() {
        partition[gamma - 1].push(lambda);
        for (merged, original) in rows.iter_mut().zip(dist.rows()) {
            merged[gamma - 1] += original[lambda];
        }
    }
    let rows = std::array::from_fn(|slot| rows[slot].to_vec());
    Ok(CoarseGraining {
        dist: ContextDistribution::from_rows_unchecked(rows),
        partition,
    })
}
