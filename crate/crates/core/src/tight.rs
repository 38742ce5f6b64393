//! The one-parameter families that saturate the trade-off bounds, convex
//! interpolation between them, and feasible-region sweeps.
//!
//! Each family is a context-conditional distribution parameterized by
//! p ∈ [0, 1] with settings dependence M = 2p:
//!
//! - `H1` (2 hidden values) reaches C_opt = 2p + 2, the lower bound M + 2.
//!   Padded with zero-probability values it stays on the lower bound at any
//!   declared hiddenness.
//! - `H2` (3 hidden values) reaches C_opt = 4p + 2 for p ≤ 1/2 and
//!   C_opt = 4 beyond, the upper bound at H = 2.
//! - `H3Plus` (4 hidden values plus optional padding) reaches
//!   C_opt = 6p + 2 for p ≤ 1/3 and C_opt = 4 beyond, the upper bound at
//!   H ≥ 3.
//!
//! Both M and C_opt are affine along the convex combination of the lower
//! and upper family tables at matched p, so those segments fill the whole
//! feasible region between the bounds.

use crate::bounds::{copt_lower_bound, copt_upper_bound, optimal_chsh};
use crate::error::{Error, Result};
use crate::measures::measurement_dependence;
use crate::model::ContextDistribution;
use crate::tolerance;

/// The saturating family identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyId {
    H1,
    H2,
    H3Plus,
}

impl FamilyId {
    /// Hidden-value count of the unpadded table.
    pub fn base_lambda_count(self) -> usize {
        match self {
            FamilyId::H1 => 2,
            FamilyId::H2 => 3,
            FamilyId::H3Plus => 4,
        }
    }

    /// The family saturating the upper bound at hiddenness h ≥ 1.
    pub fn for_hiddenness(h: usize) -> Result<Self> {
        match h {
            0 => Err(Error::Domain(
                "no saturating family exists at hiddenness 0; the only feasible point is (0, 2)"
                    .into(),
            )),
            1 => Ok(FamilyId::H1),
            2 => Ok(FamilyId::H2),
            _ => Ok(FamilyId::H3Plus),
        }
    }
}

impl std::fmt::Display for FamilyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyId::H1 => write!(f, "H1"),
            FamilyId::H2 => write!(f, "H2"),
            FamilyId::H3Plus => write!(f, "H3plus"),
        }
    }
}

impl std::str::FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "h1" => Ok(FamilyId::H1),
            "h2" => Ok(FamilyId::H2),
            "h3plus" | "h3+" | "h3" => Ok(FamilyId::H3Plus),
            other => Err(Error::Parse(format!(
                "family must be one of h1, h2, h3plus, got {other:?}"
            ))),
        }
    }
}

/// A point in a saturating family: identifier, parameter, optional padding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightFamily {
    family: FamilyId,
    p: f64,
    pad_to: Option<usize>,
}

impl TightFamily {
    pub fn new(family: FamilyId, p: f64, pad_to: Option<usize>) -> Result<Self> {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!(
                "family parameter must lie in [0, 1], got {p}"
            )));
        }
        if let Some(n) = pad_to {
            if n < family.base_lambda_count() {
                return Err(Error::Domain(format!(
                    "cannot pad family {family} with {} hidden values down to {n}",
                    family.base_lambda_count()
                )));
            }
        }
        Ok(TightFamily { family, p, pad_to })
    }

    pub fn family(&self) -> FamilyId {
        self.family
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn pad_to(&self) -> Option<usize> {
        self.pad_to
    }
}

/// Builds the family table at its parameter. Piecewise families switch
/// branch at p = 1/2 (`H2`) and p = 1/3 (`H3Plus`); at the split both
/// branches agree on (M, C_opt) and the left one is emitted.
pub fn tight_model(params: &TightFamily) -> ContextDistribution {
    let p = params.p;
    // Rows are contexts in canonical order; entries are hidden values.
    let rows: [Vec<f64>; 4] = match params.family {
        FamilyId::H1 => [
            vec![0.0, 1.0],
            vec![p, 1.0 - p],
            vec![p, 1.0 - p],
            vec![p, 1.0 - p],
        ],
        FamilyId::H2 => {
            if p <= 0.5 {
                [
                    vec![0.0, p, 1.0 - p],
                    vec![p, 0.0, 1.0 - p],
                    vec![p, p, 1.0 - 2.0 * p],
                    vec![p, p, 1.0 - 2.0 * p],
                ]
            } else {
                [
                    vec![0.0, p, 1.0 - p],
                    vec![1.0 - p, 0.0, p],
                    vec![1.0 - p, p, 0.0],
                    vec![2.0 * p - 1.0, 1.0 - p, 1.0 - p],
                ]
            }
        }
        FamilyId::H3Plus => {
            if p <= 1.0 / 3.0 {
                [
                    vec![0.0, p, p, 1.0 - 2.0 * p],
                    vec![p, 0.0, p, 1.0 - 2.0 * p],
                    vec![p, p, 0.0, 1.0 - 2.0 * p],
                    vec![p, p, p, 1.0 - 3.0 * p],
                ]
            } else {
                let q = (1.0 - p) / 2.0;
                [
                    vec![0.0, p, q, q],
                    vec![q, 0.0, p, q],
                    vec![q, q, 0.0, p],
                    vec![p, q, q, 0.0],
                ]
            }
        }
    };
    let base = ContextDistribution::new(rows).expect("family tables are normalized");
    match params.pad_to {
        Some(n) => base.padded(n).expect("padding target validated on construction"),
        None => base,
    }
}

/// Which boundary of the feasible region a point sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Lower,
    Upper,
    Interior,
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Boundary::Lower => write!(f, "lower"),
            Boundary::Upper => write!(f, "upper"),
            Boundary::Interior => write!(f, "interior"),
        }
    }
}

/// One evaluated point of a family curve or region sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionPoint {
    /// Family label of the table the point came from ("H0" for the trivial
    /// hiddenness-0 point).
    pub family: String,
    /// Family parameter.
    pub p: f64,
    /// Interpolation parameter: 0 is the lower-bound table, 1 the upper.
    pub t: f64,
    pub hiddenness: usize,
    /// Settings dependence M, computed from the table.
    pub dependence: f64,
    /// Optimal CHSH value, computed from the table.
    pub optimal_chsh: f64,
    pub lower: f64,
    pub upper: f64,
    pub boundary: Boundary,
}

fn classify(copt: f64, lower: f64, upper: f64) -> Boundary {
    if (copt - upper).abs() <= tolerance::BOUND_SLACK {
        Boundary::Upper
    } else if (copt - lower).abs() <= tolerance::BOUND_SLACK {
        Boundary::Lower
    } else {
        Boundary::Interior
    }
}

fn evaluate_point(
    family: String,
    p: f64,
    t: f64,
    dist: &ContextDistribution,
) -> Result<RegionPoint> {
    let h = dist.n() - 1;
    let dependence = measurement_dependence(dist);
    let copt = optimal_chsh(dist);
    let lower = copt_lower_bound(dependence)?;
    let upper = if h == 0 {
        2.0
    } else {
        copt_upper_bound(h, dependence)?
    };
    Ok(RegionPoint {
        family,
        p,
        t,
        hiddenness: h,
        dependence,
        optimal_chsh: copt,
        lower,
        upper,
        boundary: classify(copt, lower, upper),
    })
}

/// Evaluates a family on a uniform p grid over [0, 1]. Every point is
/// computed from the constructed table, not from the closed forms.
pub fn family_curve(
    family: FamilyId,
    steps: usize,
    pad_to: Option<usize>,
) -> Result<Vec<RegionPoint>> {
    if steps < 2 {
        return Err(Error::Domain(format!(
            "curve needs at least 2 grid points, got {steps}"
        )));
    }
    (0..steps)
        .map(|k| {
            let p = k as f64 / (steps - 1) as f64;
            let dist = tight_model(&TightFamily::new(family, p, pad_to)?);
            evaluate_point(family.to_string(), p, 1.0, &dist)
        })
        .collect()
}

/// Entrywise convex combination (1−t)·a + t·b of two distributions over the
/// same hidden values.
pub fn interpolate(
    a: &ContextDistribution,
    b: &ContextDistribution,
    t: f64,
) -> Result<ContextDistribution> {
    if a.n() != b.n() {
        return Err(Error::Dimension(format!(
            "cannot interpolate between {} and {} hidden values; pad the smaller table first",
            a.n(),
            b.n()
        )));
    }
    if !t.is_finite() || !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!(
            "interpolation parameter must lie in [0, 1], got {t}"
        )));
    }
    let rows = std::array::from_fn(|slot| {
        a.rows()[slot]
            .iter()
            .zip(&b.rows()[slot])
            .map(|(&x, &y)| (1.0 - t) * x + t * y)
            .collect()
    });
    ContextDistribution::new(rows)
}

/// Sweeps the feasible (M, C_opt) region at a fixed hiddenness: for each M
/// on the grid, interpolates between the padded lower-bound table and the
/// upper-bound family table at the same parameter. Hiddenness 0 yields the
/// single point (0, 2).
pub fn region_sweep(h: usize, grid_m: usize, grid_t: usize) -> Result<Vec<RegionPoint>> {
    if h == 0 {
        let trivial = ContextDistribution::uniform(1)?;
        return Ok(vec![evaluate_point("H0".into(), 0.0, 0.0, &trivial)?]);
    }
    if grid_m < 2 || grid_t < 2 {
        return Err(Error::Domain(format!(
            "region sweep needs at least 2 grid points per axis, got {grid_m} x {grid_t}"
        )));
    }
    let upper_family = FamilyId::for_hiddenness(h)?;
    let n = h + 1;
    let mut points = Vec::with_capacity(grid_m * grid_t);
    for k in 0..grid_m {
        // M = 2p on both families, so matching p matches M.
        let p = k as f64 / (grid_m - 1) as f64;
        let lower = tight_model(&TightFamily::new(FamilyId::H1, p, Some(n))?);
        let upper = tight_model(&TightFamily::new(upper_family, p, Some(n))?);
        for step in 0..grid_t {
            let t = step as f64 / (grid_t - 1) as f64;
            let dist = interpolate(&lower, &upper, t)?;
            points.push(evaluate_point(upper_family.to_string(), p, t, &dist)?);
        }
    }
    Ok(points)
}

/// CSV rendering of sweep output: fixed header, 12 decimal digits.
pub fn region_points_to_csv(points: &[RegionPoint]) -> String {
    let mut out = String::from("family,p,t,H,M,C_opt,lower,upper,on_boundary\n");
    for pt in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            pt.family,
            crate::io::decimal12(pt.p),
            crate::io::decimal12(pt.t),
            pt.hiddenness,
            crate::io::decimal12(pt.dependence),
            crate::io::decimal12(pt.optimal_chsh),
            crate::io::decimal12(pt.lower),
            crate::io::decimal12(pt.upper),
            pt.boundary,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    #[test]
    fn family_tables_match_the_published_entries() {
        let h1 = tight_model(&TightFamily::new(FamilyId::H1, 0.3, None).unwrap());
        assert_eq!(h1.rows()[0], vec![0.0, 1.0]);
        for slot in 1..4 {
            assert_eq!(h1.rows()[slot], vec![0.3, 1.0 - 0.3]);
        }

        let h2 = tight_model(&TightFamily::new(FamilyId::H2, 0.25, None).unwrap());
        assert_eq!(h2.rows()[3], vec![0.25, 0.25, 0.5]);

        let h3 = tight_model(&TightFamily::new(FamilyId::H3Plus, 0.5, Some(4)).unwrap());
        assert_eq!(h3.rows()[0], vec![0.0, 0.5, 0.25, 0.25]);
        assert_eq!(h3.rows()[1], vec![0.25, 0.0, 0.5, 0.25]);
    }

    #[test]
    fn family_parameter_is_validated() {
        assert!(TightFamily::new(FamilyId::H1, -0.1, None).is_err());
        assert!(TightFamily::new(FamilyId::H1, 1.1, None).is_err());
        assert!(TightFamily::new(FamilyId::H3Plus, 0.5, Some(3)).is_err());
    }

    #[test]
    fn branch_split_agrees_on_measures() {
        for (family, split) in [(FamilyId::H2, 0.5), (FamilyId::H3Plus, 1.0 / 3.0)] {
            let left = tight_model(&TightFamily::new(family, split, None).unwrap());
            let eps = 1e-12;
            let right = tight_model(&TightFamily::new(family, split + eps, None).unwrap());
            assert!(
                (measurement_dependence(&left) - measurement_dependence(&right)).abs() <= 1e-9
            );
            assert!((optimal_chsh(&left) - optimal_chsh(&right)).abs() <= 1e-9);
        }
    }

    #[test]
    fn curves_reproduce_the_closed_forms() {
        for point in family_curve(FamilyId::H1, 21, None).unwrap() {
            let p = point.p;
            assert!((point.dependence - 2.0 * p).abs() <= 1e-12);
            assert!((point.optimal_chsh - (2.0 * p + 2.0)).abs() <= 1e-12);
            assert!((point.optimal_chsh - (point.dependence + 2.0)).abs() <= 1e-12);
            assert_eq!(point.boundary, Boundary::Upper);
        }
        for point in family_curve(FamilyId::H2, 21, None).unwrap() {
            let p = point.p;
            let expected = if p <= 0.5 { 4.0 * p + 2.0 } else { 4.0 };
            assert!((point.dependence - 2.0 * p).abs() <= 1e-12);
            assert!((point.optimal_chsh - expected).abs() <= 1e-12);
            assert_eq!(point.boundary, Boundary::Upper);
        }
        for point in family_curve(FamilyId::H3Plus, 22, None).unwrap() {
            let p = point.p;
            let expected = if p <= 1.0 / 3.0 { 6.0 * p + 2.0 } else { 4.0 };
            assert!((point.dependence - 2.0 * p).abs() <= 1e-12);
            assert!((point.optimal_chsh - expected).abs() <= 1e-12);
            assert_eq!(point.boundary, Boundary::Upper);
        }
    }

    #[test]
    fn padded_lower_family_saturates_the_lower_bound_at_any_hiddenness() {
        for h in 1..=5usize {
            for point in family_curve(FamilyId::H1, 11, Some(h + 1)).unwrap() {
                assert_eq!(point.hiddenness, h);
                assert!((point.optimal_chsh - point.lower).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn interpolation_endpoints_and_normalization() {
        let mut rng = random::rng_from_seed(71);
        let a = random::random_distribution(&mut rng, 4);
        let b = random::random_distribution(&mut rng, 4);
        assert_eq!(interpolate(&a, &b, 0.0).unwrap(), a);
        let mid = interpolate(&a, &b, 0.5).unwrap();
        for row in mid.rows() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
        let short = random::random_distribution(&mut rng, 3);
        assert!(matches!(
            interpolate(&a, &short, 0.5),
            Err(Error::Dimension(_))
        ));
        assert!(interpolate(&a, &b, 1.5).is_err());
    }

    #[test]
    fn measures_are_affine_along_matched_segments() {
        for h in [2usize, 3] {
            let family = FamilyId::for_hiddenness(h).unwrap();
            let n = h + 1;
            for k in 0..=10 {
                let p = k as f64 / 10.0;
                let lower = tight_model(&TightFamily::new(FamilyId::H1, p, Some(n)).unwrap());
                let upper = tight_model(&TightFamily::new(family, p, Some(n)).unwrap());
                let at = |t: f64| {
                    let d = interpolate(&lower, &upper, t).unwrap();
                    (measurement_dependence(&d), optimal_chsh(&d))
                };
                let (m0, c0) = at(0.0);
                let (m1, c1) = at(0.5);
                let (m2, c2) = at(1.0);
                assert!((m1 - 0.5 * (m0 + m2)).abs() <= 1e-9);
                assert!((c1 - 0.5 * (c0 + c2)).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn region_sweep_shapes() {
        // Hiddenness 1: the region is the line C_opt = M + 2.
        for point in region_sweep(1, 11, 3).unwrap() {
            assert!((point.optimal_chsh - (point.dependence + 2.0)).abs() <= 1e-9);
        }

        // Hiddenness 2 at M = 1: C_opt spans [3, 4].
        let points = region_sweep(2, 3, 5).unwrap();
        let at_m1: Vec<&RegionPoint> = points
            .iter()
            .filter(|pt| (pt.dependence - 1.0).abs() <= 1e-9)
            .collect();
        assert!(!at_m1.is_empty());
        let min = at_m1.iter().map(|pt| pt.optimal_chsh).fold(f64::INFINITY, f64::min);
        let max = at_m1
            .iter()
            .map(|pt| pt.optimal_chsh)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((min - 3.0).abs() <= 1e-9);
        assert!((max - 4.0).abs() <= 1e-9);

        // Hiddenness ≥ 3 at M = 2/3: C_opt spans [8/3, 4].
        let points = region_sweep(3, 4, 5).unwrap();
        let at_m23: Vec<&RegionPoint> = points
            .iter()
            .filter(|pt| (pt.dependence - 2.0 / 3.0).abs() <= 1e-9)
            .collect();
        assert!(!at_m23.is_empty());
        let min = at_m23.iter().map(|pt| pt.optimal_chsh).fold(f64::INFINITY, f64::min);
        let max = at_m23
            .iter()
            .map(|pt| pt.optimal_chsh)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((min - 8.0 / 3.0).abs() <= 1e-9);
        assert!((max - 4.0).abs() <= 1e-9);

        // Hiddenness 0 degenerates to the single classical point.
        let trivial = region_sweep(0, 5, 5).unwrap();
        assert_eq!(trivial.len(), 1);
        assert_eq!(trivial[0].dependence, 0.0);
        assert_eq!(trivial[0].optimal_chsh, 2.0);
        assert_eq!(trivial[0].hiddenness, 0);
    }

    #[test]
    fn region_points_stay_inside_the_bounds() {
        for h in [1usize, 2, 3, 5] {
            for point in region_sweep(h, 9, 4).unwrap() {
                assert!(point.lower <= point.optimal_chsh + 1e-9, "{point:?}");
                assert!(point.optimal_chsh <= point.upper + 1e-9, "{point:?}");
            }
        }
    }

    #[test]
    fn csv_has_the_documented_header_and_shape() {
        let points = region_sweep(2, 3, 3).unwrap();
        let csv = region_points_to_csv(&points);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "family,p,t,H,M,C_opt,lower,upper,on_boundary"
        );
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').count(), 9);
        assert!(first.starts_with("H2,"));
        assert_eq!(csv.lines().count(), 1 + points.len());
    }
}
