//! End-to-end acceptance suite.
//!
//! One test per criterion, each printing a PASS line with the measured
//! quantities (visible with `cargo test --test acceptance -- --nocapture`).
//! Criteria 2 and 3 deliberately replay the same seeded model stream.

use std::time::Instant;

use lhv::bounds::{
    bound_witness_n3, bound_witness_n4, brute_force_optimal_chsh, check_tradeoff, coarse_grain,
    min_dependence_for_chsh, min_support_sum, optimal_chsh, optimal_responses,
};
use lhv::measures::{measurement_dependence, HiddennessMode};
use lhv::model::LocalModel;
use lhv::montecarlo::{estimate, sample};
use lhv::random;
use lhv::tight::{region_sweep, tight_model, FamilyId, TightFamily};
use rand::Rng;

fn pass(name: &str, detail: &str) {
    println!("PASS {name}: {detail}");
}

fn family_dist(id: FamilyId, p: f64) -> lhv::ContextDistribution {
    tight_model(&TightFamily::new(id, p, None).unwrap())
}

/// Criterion 1: the closed-form optimum equals the enumeration oracle on
/// 10^4 random distributions with 1..=6 hidden values, within 1e-12,
/// in under 10 s.
#[test]
fn c01_closed_form_equals_enumeration_oracle() {
    let start = Instant::now();
    let mut rng = random::rng_from_seed(0xC1);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=6usize);
        let dist = random::random_distribution(&mut rng, n);
        let gap = (optimal_chsh(&dist) - brute_force_optimal_chsh(&dist).unwrap()).abs();
        worst = worst.max(gap);
        assert!(gap <= 1e-12, "closed form departs from the oracle by {gap}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(
        "c01 oracle equivalence",
        &format!("10000 instances, worst gap {worst:.3e}, {elapsed:.2?}"),
    );
}

fn seeded_models(count: usize) -> impl Iterator<Item = LocalModel> {
    let mut rng = random::rng_from_seed(0xC2C3);
    (0..count).map(move |_| {
        let n = rng.random_range(1..=6usize);
        random::random_model(&mut rng, n)
    })
}

/// Criterion 2: C ≤ min(H,3)·M + 2 and C ≤ 4 across 10^5 random models,
/// zero violations, in under 60 s.
#[test]
fn c02_relaxed_bound_holds_on_random_models() {
    let start = Instant::now();
    let mut max_slack = f64::NEG_INFINITY;
    for model in seeded_models(100_000) {
        let h = model.n() - 1;
        let c = model.behavior().chsh();
        let m = measurement_dependence(model.dist());
        let bound = h.min(3) as f64 * m + 2.0;
        assert!(c <= bound + 1e-9, "C = {c} exceeds bound {bound}");
        assert!(c <= 4.0 + 1e-9, "C = {c} exceeds 4");
        max_slack = max_slack.max(c - bound);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    pass(
        "c02 relaxed bound sweep",
        &format!("100000 models, max C - bound = {max_slack:.3e}, {elapsed:.2?}"),
    );
}

/// Criterion 3: M + 2 ≤ C_opt on the same model stream, zero violations.
#[test]
fn c03_lower_bound_holds_on_the_same_models() {
    let start = Instant::now();
    let mut max_slack = f64::NEG_INFINITY;
    for model in seeded_models(100_000) {
        let m = measurement_dependence(model.dist());
        let copt = optimal_chsh(model.dist());
        assert!(m + 2.0 <= copt + 1e-9, "M + 2 = {} exceeds C_opt = {copt}", m + 2.0);
        max_slack = max_slack.max(m + 2.0 - copt);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    pass(
        "c03 lower bound sweep",
        &format!("100000 models, max (M+2) - C_opt = {max_slack:.3e}, {elapsed:.2?}"),
    );
}

/// Criterion 4: the 2-hidden-value family reproduces C_opt = 2p + 2 and
/// M = 2p on p ∈ {0, 0.05, ..., 1}, hence C_opt = M + 2.
#[test]
fn c04_tightness_at_hiddenness_1() {
    for k in 0..=20 {
        let p = k as f64 * 0.05;
        let dist = family_dist(FamilyId::H1, p);
        let copt = optimal_chsh(&dist);
        let m = measurement_dependence(&dist);
        assert!((copt - (2.0 * p + 2.0)).abs() <= 1e-12, "p = {p}: C_opt = {copt}");
        assert!((m - 2.0 * p).abs() <= 1e-12, "p = {p}: M = {m}");
        assert!((copt - (m + 2.0)).abs() <= 1e-12, "p = {p}: affine relation broken");
    }
    pass("c04 tightness H=1", "21 grid points match 2p+2 and 2p within 1e-12");
}

/// Criterion 5: the 3-hidden-value family reproduces C_opt = 4p + 2 (left
/// branch) and C_opt = 4 (right branch), with M = 2p throughout.
#[test]
fn c05_tightness_at_hiddenness_2() {
    for k in 0..=40 {
        let p = k as f64 / 40.0;
        let dist = family_dist(FamilyId::H2, p);
        let copt = optimal_chsh(&dist);
        let m = measurement_dependence(&dist);
        let expected = if p <= 0.5 { 4.0 * p + 2.0 } else { 4.0 };
        assert!((copt - expected).abs() <= 1e-12, "p = {p}: C_opt = {copt}");
        assert!((m - 2.0 * p).abs() <= 1e-12, "p = {p}: M = {m}");
    }
    pass("c05 tightness H=2", "41 grid points match both branches within 1e-12");
}

/// Criterion 6: the 4-hidden-value family reproduces C_opt = 6p + 2 (left
/// branch) and C_opt = 4 (right branch), with M = 2p throughout.
#[test]
fn c06_tightness_at_hiddenness_3_and_up() {
    for k in 0..=60 {
        let p = k as f64 / 60.0;
        let dist = family_dist(FamilyId::H3Plus, p);
        let copt = optimal_chsh(&dist);
        let m = measurement_dependence(&dist);
        let expected = if p <= 1.0 / 3.0 { 6.0 * p + 2.0 } else { 4.0 };
        assert!((copt - expected).abs() <= 1e-12, "p = {p}: C_opt = {copt}");
        assert!((m - 2.0 * p).abs() <= 1e-12, "p = {p}: M = {m}");
    }
    pass("c06 tightness H>=3", "61 grid points match both branches within 1e-12");
}

/// Criterion 7: the minimal dependence for the quantum maximum 2√2.
#[test]
fn c07_minimal_dependence_for_the_quantum_maximum() {
    let c = 2.0 * std::f64::consts::SQRT_2;
    let cases = [(3usize, 0.276), (2, 0.414), (1, 0.828)];
    for (h, expected) in cases {
        let m = min_dependence_for_chsh(c, h).unwrap();
        assert!((m - expected).abs() <= 1e-3, "H = {h}: M = {m}, expected ~{expected}");
    }
    pass(
        "c07 quantum-maximum trade-off",
        "0.276 / 0.414 / 0.828 reproduced within 1e-3",
    );
}

/// Criterion 8: the witness search succeeds on 10^4 random distributions at
/// each of the two directly-checked cardinalities.
#[test]
fn c08_witnesses_always_exist() {
    let mut rng = random::rng_from_seed(0xC8);
    let mut worst = f64::INFINITY;
    for _ in 0..10_000 {
        let d3 = random::random_distribution(&mut rng, 3);
        let w3 = bound_witness_n3(&d3).expect("witness must exist at n = 3");
        let d4 = random::random_distribution(&mut rng, 4);
        let w4 = bound_witness_n4(&d4).expect("witness must exist at n = 4");
        worst = worst.min(w3.lhs.min(w4.lhs));
        assert!(w3.lhs >= 1.0 - 1e-9);
        assert!(w4.lhs >= 1.0 - 1e-9);
    }
    pass(
        "c08 witness existence",
        &format!("10000 instances each at n=3 and n=4, smallest lhs {worst:.12}"),
    );
}

/// Criterion 9: coarse graining preserves the minimal support mass and the
/// chained inequality Σ_λ p(λ|i_λ) + (3/2)·M ≥ 1 holds.
#[test]
fn c09_coarse_graining_chain() {
    let mut rng = random::rng_from_seed(0xC9);
    let mut worst_gap = 0.0f64;
    let mut worst_margin = f64::INFINITY;
    for _ in 0..1000 {
        let n = rng.random_range(5..=10usize);
        let dist = random::random_distribution(&mut rng, n);
        let coarse = coarse_grain(&dist).unwrap();
        let original = min_support_sum(&dist);
        let merged = min_support_sum(&coarse.dist);
        let gap = (original - merged).abs();
        worst_gap = worst_gap.max(gap);
        assert!(gap <= 1e-12, "support mass changed by {gap}");
        let margin = original + 1.5 * measurement_dependence(&dist);
        worst_margin = worst_margin.min(margin);
        assert!(margin >= 1.0 - 1e-9, "chained inequality broken: {margin}");
    }
    pass(
        "c09 coarse graining",
        &format!("1000 instances, worst mass gap {worst_gap:.3e}, smallest margin {worst_margin:.6}"),
    );
}

/// Criterion 10: along ≥ 20 matched-M segments at hiddenness 2 and 3, M and
/// C_opt are affine in the interpolation parameter and every grid point
/// stays between the bounds.
#[test]
fn c10_affine_segments_fill_the_region() {
    for h in [2usize, 3] {
        let points = region_sweep(h, 21, 3).unwrap();
        let mut segments = 0;
        for chunk in points.chunks(3) {
            let [start, mid, end] = chunk else {
                panic!("grid rows should group into segments of 3")
            };
            assert_eq!(start.t, 0.0);
            assert_eq!(end.t, 1.0);
            let m_gap = mid.dependence - 0.5 * (start.dependence + end.dependence);
            let c_gap = mid.optimal_chsh - 0.5 * (start.optimal_chsh + end.optimal_chsh);
            assert!(m_gap.abs() <= 1e-9, "H = {h}, p = {}: M not affine ({m_gap})", start.p);
            assert!(c_gap.abs() <= 1e-9, "H = {h}, p = {}: C_opt not affine ({c_gap})", start.p);
            segments += 1;
        }
        assert!(segments >= 20, "only {segments} segments");
        for point in &points {
            assert!(point.lower <= point.optimal_chsh + 1e-9, "{point:?}");
            assert!(point.optimal_chsh <= point.upper + 1e-9, "{point:?}");
        }
    }
    pass(
        "c10 affine region fill",
        "21 segments per hiddenness in {2, 3}, collinear within 1e-9, all points inside the bounds",
    );
}

/// Criterion 11: at three fixed seeds, the empirical CHSH value of the
/// saturating 2-hidden-value model at p = 1/2 stays within five standard
/// errors of the exact value 3, in under 5 s.
#[test]
fn c11_monte_carlo_consistency() {
    let start = Instant::now();
    let dist = family_dist(FamilyId::H1, 0.5);
    let responses = optimal_responses(&dist);
    let model = LocalModel::new(dist, responses).unwrap();
    let exact = model.behavior().chsh();
    assert!((exact - 3.0).abs() <= 1e-12);
    let mut worst = 0.0f64;
    for seed in [11u64, 22, 33] {
        let record = sample(&model, 100_000, seed).unwrap();
        let est = estimate(&record).unwrap();
        let deviation = (est.chsh - exact).abs();
        worst = worst.max(deviation / est.stderr);
        assert!(
            deviation <= 5.0 * est.stderr,
            "seed {seed}: deviation {deviation} vs stderr {}",
            est.stderr
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    pass(
        "c11 monte carlo consistency",
        &format!("3 seeds at 100000 trials/context, worst deviation {worst:.2} stderr, {elapsed:.2?}"),
    );
}

/// The full per-model certification also holds across a random sweep, with
/// both hiddenness modes.
#[test]
fn tradeoff_reports_stay_clean_across_modes() {
    let mut rng = random::rng_from_seed(0xAB);
    for _ in 0..2000 {
        let n = rng.random_range(1..=6usize);
        let model = random::random_model(&mut rng, n);
        for mode in [HiddennessMode::Declared, HiddennessMode::Effective] {
            let report = check_tradeoff(&model, mode);
            assert!(report.all_satisfied(), "{report:?}");
        }
    }
    pass("tradeoff certification sweep", "2000 models clean in both hiddenness modes");
}
