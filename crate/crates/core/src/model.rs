//! Data model for finite local hidden-variable theories in the two-party,
//! two-setting, two-outcome (CHSH) scenario.
//!
//! Conventions fixed everywhere in this crate:
//!
//! - A *measurement context* is a setting pair (x, y) with x, y ∈ {0, 1}.
//!   Contexts are ordered (0,0), (0,1), (1,0), (1,1) and addressed by the
//!   flat index 1..=4.
//! - Hidden values are addressed by integer indices 0..n-1. Display labels,
//!   when a caller wants them, live in the file layer and never affect the
//!   numerics.
//! - Outcomes are ±1. Response tables store the probability of outcome +1;
//!   the probability of −1 is the complement.
//! - Outcome pairs (a, b) in a [`Behavior`] are ordered
//!   (+,+), (+,−), (−,+), (−,−).

use crate::error::{Error, Result};
use crate::tolerance;

/// Number of measurement contexts in the CHSH scenario.
pub const CONTEXT_COUNT: usize = 4;

/// Outcome pairs (a, b) in the column order used by [`Behavior`].
pub const OUTCOME_PAIRS: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Largest accepted hidden-variable set, by default. The theory places no
/// bound on the cardinality; this guards resource use only.
pub const DEFAULT_LAMBDA_CAP: usize = 1_000_000;

/// One of the four joint measurement settings (x, y).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeasurementContext {
    x: u8,
    y: u8,
}

impl MeasurementContext {
    /// The four contexts in canonical order (0,0), (0,1), (1,0), (1,1).
    pub const ALL: [MeasurementContext; 4] = [
        MeasurementContext { x: 0, y: 0 },
        MeasurementContext { x: 0, y: 1 },
        MeasurementContext { x: 1, y: 0 },
        MeasurementContext { x: 1, y: 1 },
    ];

    pub fn new(x: u8, y: u8) -> Result<Self> {
        if x > 1 || y > 1 {
            return Err(Error::Domain(format!(
                "settings must be 0 or 1, got (x={x}, y={y})"
            )));
        }
        Ok(MeasurementContext { x, y })
    }

    /// Context for the flat index 1..=4.
    pub fn from_index(index: usize) -> Result<Self> {
        match index {
            1..=4 => Ok(Self::ALL[index - 1]),
            _ => Err(Error::Domain(format!(
                "context index must be in 1..=4, got {index}"
            ))),
        }
    }

    /// Flat index in 1..=4.
    pub fn index(self) -> usize {
        self.slot() + 1
    }

    /// Zero-based storage slot.
    pub(crate) fn slot(self) -> usize {
        (2 * self.x + self.y) as usize
    }

    pub fn x(self) -> u8 {
        self.x
    }

    pub fn y(self) -> u8 {
        self.y
    }
}

impl std::fmt::Display for MeasurementContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// The four conditional distributions of the hidden value, one per context.
///
/// Stored as four rows of length n; entry (context, λ) is the probability of
/// hidden value λ given that context. Each row is normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextDistribution {
    rows: [Vec<f64>; 4],
}

impl ContextDistribution {
    pub fn new(rows: [Vec<f64>; 4]) -> Result<Self> {
        Self::with_lambda_cap(rows, DEFAULT_LAMBDA_CAP)
    }

    /// As [`ContextDistribution::new`] with an explicit cardinality cap.
    pub fn with_lambda_cap(rows: [Vec<f64>; 4], cap: usize) -> Result<Self> {
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::Validation(
                "hidden-variable set must be nonempty".into(),
            ));
        }
        if n > cap {
            return Err(Error::Resource(format!(
                "hidden-variable count {n} exceeds the cap {cap}"
            )));
        }
        for (slot, row) in rows.iter().enumerate() {
            let ctx = MeasurementContext::ALL[slot];
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "dist row {} (context {ctx}) has {} entries, expected {n}",
                    slot + 1,
                    row.len()
                )));
            }
            let mut sum = 0.0;
            for (lambda, &p) in row.iter().enumerate() {
                if !p.is_finite() || p < 0.0 {
                    return Err(Error::Validation(format!(
                        "dist row {} (context {ctx}), lambda {lambda}: invalid probability {p}",
                        slot + 1
                    )));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > tolerance::ROW_SUM {
                return Err(Error::Validation(format!(
                    "dist row {} (context {ctx}) sums to {sum}, expected 1 within {}",
                    slot + 1,
                    tolerance::ROW_SUM
                )));
            }
        }
        Ok(ContextDistribution { rows })
    }

    /// Accepts exactly four rows, in canonical context order.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let arr: [Vec<f64>; 4] = rows.try_into().map_err(|r: Vec<Vec<f64>>| {
            Error::Dimension(format!("dist must have 4 rows, got {}", r.len()))
        })?;
        Self::new(arr)
    }

    /// Skips validation; the caller guarantees the rows came from an already
    /// validated table (row permutations, grouping, exact-zero trimming).
    pub(crate) fn from_rows_unchecked(rows: [Vec<f64>; 4]) -> Self {
        ContextDistribution { rows }
    }

    /// Measurement-independent distribution, uniform over n hidden values.
    pub fn uniform(n: usize) -> Result<Self> {
        let row = vec![1.0 / n.max(1) as f64; n];
        Self::new([row.clone(), row.clone(), row.clone(), row])
    }

    /// Number of hidden values, counting declared zero-probability ones.
    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    pub fn prob(&self, ctx: MeasurementContext, lambda: usize) -> f64 {
        self.rows[ctx.slot()][lambda]
    }

    pub fn row(&self, ctx: MeasurementContext) -> &[f64] {
        &self.rows[ctx.slot()]
    }

    pub fn rows(&self) -> &[Vec<f64>; 4] {
        &self.rows
    }

    /// The four context probabilities of one hidden value.
    pub fn column(&self, lambda: usize) -> [f64; 4] {
        [
            self.rows[0][lambda],
            self.rows[1][lambda],
            self.rows[2][lambda],
            self.rows[3][lambda],
        ]
    }

    /// Appends zero-probability hidden values up to cardinality n.
    pub fn padded(&self, n: usize) -> Result<Self> {
        if n < self.n() {
            return Err(Error::Domain(format!(
                "cannot pad {} hidden values down to {n}",
                self.n()
            )));
        }
        let mut rows = self.rows.clone();
        for row in rows.iter_mut() {
            row.resize(n, 0.0);
        }
        Ok(ContextDistribution::from_rows_unchecked(rows))
    }
}

/// Per-party response tables: the probability of outcome +1 for each own
/// setting and hidden value.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalResponses {
    a_plus: [Vec<f64>; 2],
    b_plus: [Vec<f64>; 2],
}

impl LocalResponses {
    pub fn new(a_plus: [Vec<f64>; 2], b_plus: [Vec<f64>; 2]) -> Result<Self> {
        let n = a_plus[0].len();
        if n == 0 {
            return Err(Error::Validation("response tables must be nonempty".into()));
        }
        let check = |name: &str, setting: usize, row: &[f64]| -> Result<()> {
            if row.len() != n {
                return Err(Error::Dimension(format!(
                    "{name} row for setting {setting} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (lambda, &p) in row.iter().enumerate() {
                if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                    return Err(Error::Validation(format!(
                        "{name} row for setting {setting}, lambda {lambda}: probability {p} outside [0,1]"
                    )));
                }
            }
            Ok(())
        };
        for x in 0..2 {
            check("a_plus", x, &a_plus[x])?;
            check("b_plus", x, &b_plus[x])?;
        }
        Ok(LocalResponses { a_plus, b_plus })
    }

    pub fn n(&self) -> usize {
        self.a_plus[0].len()
    }

    /// p(a = +1 | x, λ).
    pub fn a_plus(&self, x: u8, lambda: usize) -> f64 {
        self.a_plus[x as usize][lambda]
    }

    /// p(b = +1 | y, λ).
    pub fn b_plus(&self, y: u8, lambda: usize) -> f64 {
        self.b_plus[y as usize][lambda]
    }

    /// Local expectation of party A's outcome: 2·p(+1|x,λ) − 1, in [−1, 1].
    pub fn a_expectation(&self, x: u8, lambda: usize) -> f64 {
        2.0 * self.a_plus(x, lambda) - 1.0
    }

    /// Local expectation of party B's outcome.
    pub fn b_expectation(&self, y: u8, lambda: usize) -> f64 {
        2.0 * self.b_plus(y, lambda) - 1.0
    }

    pub fn a_rows(&self) -> &[Vec<f64>; 2] {
        &self.a_plus
    }

    pub fn b_rows(&self) -> &[Vec<f64>; 2] {
        &self.b_plus
    }
}

/// A finite local hidden-variable model: context-conditional hidden-value
/// distribution plus per-party responses over the same hidden values.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalModel {
    dist: ContextDistribution,
    responses: LocalResponses,
}

impl LocalModel {
    pub fn new(dist: ContextDistribution, responses: LocalResponses) -> Result<Self> {
        if dist.n() != responses.n() {
            return Err(Error::Dimension(format!(
                "distribution has {} hidden values but responses have {}",
                dist.n(),
                responses.n()
            )));
        }
        Ok(LocalModel { dist, responses })
    }

    pub fn dist(&self) -> &ContextDistribution {
        &self.dist
    }

    pub fn responses(&self) -> &LocalResponses {
        &self.responses
    }

    pub fn n(&self) -> usize {
        self.dist.n()
    }

    /// The observable joint behavior generated by this model:
    /// p(a,b|x,y) = Σ_λ p(λ|x,y) · p(a|x,λ) · p(b|y,λ).
    pub fn behavior(&self) -> Behavior {
        let mut joint = [[0.0f64; 4]; 4];
        for ctx in MeasurementContext::ALL {
            let slot = ctx.slot();
            let row = self.dist.row(ctx);
            for (lambda, &w) in row.iter().enumerate() {
                let pa = self.responses.a_plus(ctx.x(), lambda);
                let pb = self.responses.b_plus(ctx.y(), lambda);
                joint[slot][0] += w * pa * pb;
                joint[slot][1] += w * pa * (1.0 - pb);
                joint[slot][2] += w * (1.0 - pa) * pb;
                joint[slot][3] += w * (1.0 - pa) * (1.0 - pb);
            }
        }
        Behavior::new(joint).expect("behavior generated from a valid model is normalized")
    }
}

/// The 16 observable joint probabilities p(a,b|x,y), one row per context.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    joint: [[f64; 4]; 4],
}

impl Behavior {
    pub fn new(joint: [[f64; 4]; 4]) -> Result<Self> {
        for (slot, row) in joint.iter().enumerate() {
            let ctx = MeasurementContext::ALL[slot];
            let mut sum = 0.0;
            for (col, &p) in row.iter().enumerate() {
                if !p.is_finite() || p < 0.0 {
                    let (a, b) = OUTCOME_PAIRS[col];
                    return Err(Error::Validation(format!(
                        "behavior row {} (context {ctx}), outcome ({a},{b}): invalid probability {p}",
                        slot + 1
                    )));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > tolerance::ROW_SUM {
                return Err(Error::Validation(format!(
                    "behavior row {} (context {ctx}) sums to {sum}, expected 1 within {}",
                    slot + 1,
                    tolerance::ROW_SUM
                )));
            }
        }
        Ok(Behavior { joint })
    }

    pub fn joint(&self) -> &[[f64; 4]; 4] {
        &self.joint
    }

    /// p(a, b | x, y) for outcomes a, b ∈ {+1, −1}.
    pub fn prob(&self, ctx: MeasurementContext, a: i8, b: i8) -> Result<f64> {
        let col = OUTCOME_PAIRS
            .iter()
            .position(|&(pa, pb)| pa == a && pb == b)
            .ok_or_else(|| Error::Domain(format!("outcomes must be ±1, got ({a},{b})")))?;
        Ok(self.joint[ctx.slot()][col])
    }

    /// The outcome-product expectation ⟨xy⟩ = Σ_{a,b} a·b·p(a,b|x,y).
    pub fn correlator(&self, ctx: MeasurementContext) -> f64 {
        let row = &self.joint[ctx.slot()];
        row[0] - row[1] - row[2] + row[3]
    }

    /// The CHSH value ⟨00⟩ + ⟨01⟩ + ⟨10⟩ − ⟨11⟩.
    pub fn chsh(&self) -> f64 {
        let [c00, c01, c10, c11] = [
            self.correlator(MeasurementContext::ALL[0]),
            self.correlator(MeasurementContext::ALL[1]),
            self.correlator(MeasurementContext::ALL[2]),
            self.correlator(MeasurementContext::ALL[3]),
        ];
        c00 + c01 + c10 - c11
    }
}
