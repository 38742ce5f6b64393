//! Command-line tools around the `lhv` crate: validate and inspect model
//! files, certify the trade-off bounds, generate the saturating families,
//! sweep curves and feasible regions to CSV, run simulated experiments, and
//! cross-check the closed-form optimum against the enumeration oracle.
//!
//! Exit status: 0 when every requested check passed, 1 when a check failed,
//! 2 on usage or input errors. The last line on stdout is a machine-parseable
//! summary (`ok ...` / `fail ...`); when a document is written to stdout
//! instead of a file, the summary moves to stderr to keep the document clean.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lhv::bounds::{
    bound_witness_n3, bound_witness_n4, brute_force_optimal_chsh_with_cap, check_tradeoff,
    coarse_grain, min_support_sum, optimal_chsh, optimal_responses, DEFAULT_ORACLE_CAP,
};
use lhv::io::{
    decimal12, default_lambda_labels, model_file_to_json, parse_model_file, record_to_json,
};
use lhv::measures::{hiddenness, measurement_dependence, HiddennessMode};
use lhv::model::{LocalModel, MeasurementContext};
use lhv::montecarlo::{estimate, sample};
use lhv::random;
use lhv::tight::{family_curve, region_points_to_csv, region_sweep, tight_model, FamilyId, TightFamily};
use lhv::tolerance;

/// Environment variable overriding the enumeration-oracle cap.
const ORACLE_CAP_VAR: &str = "LHV_ORACLE_CAP";

#[derive(Parser)]
#[command(
    name = "lhv",
    version,
    about = "Finite local hidden-variable models in the CHSH scenario"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Declared,
    Effective,
}

impl From<ModeArg> for HiddennessMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Declared => HiddennessMode::Declared,
            ModeArg::Effective => HiddennessMode::Effective,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    H1,
    H2,
    H3plus,
}

impl From<FamilyArg> for FamilyId {
    fn from(family: FamilyArg) -> Self {
        match family {
            FamilyArg::H1 => FamilyId::H1,
            FamilyArg::H2 => FamilyId::H2,
            FamilyArg::H3plus => FamilyId::H3Plus,
        }
    }
}

#[derive(Args)]
struct InputArg {
    /// Model file to read.
    #[arg(short, long)]
    input: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file against every probability invariant.
    Validate(InputArg),
    /// Print C, C_opt, M, and H for a model file.
    Compute {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Certify the trade-off bounds and the cardinality-specific checks.
    Verify {
        #[command(flatten)]
        input: InputArg,
        /// How to count hidden values toward H.
        #[arg(long, value_enum, default_value = "declared")]
        hiddenness: ModeArg,
    },
    /// Write a saturating-family model file (with responses attaining C_opt).
    Tight {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Family parameter in [0, 1].
        #[arg(long)]
        p: f64,
        /// Pad with zero-probability hidden values up to this count.
        #[arg(long)]
        pad_to: Option<usize>,
        /// Output path; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a family curve over the parameter grid as CSV.
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Number of parameter grid points.
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long)]
        pad_to: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a feasible-region sweep at fixed hiddenness as CSV.
    Region {
        /// Hiddenness of the region (0 degenerates to the single point (0, 2)).
        #[arg(long = "H", visible_alias = "hiddenness")]
        h: usize,
        /// Number of dependence grid points.
        #[arg(long, default_value_t = 21)]
        steps: usize,
        /// Number of interpolation grid points per dependence value.
        #[arg(long, default_value_t = 5)]
        t_steps: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a simulated experiment and write the record with its estimates.
    Sample {
        #[command(flatten)]
        input: InputArg,
        /// Trials per measurement context.
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cross-check the closed-form optimum against the enumeration oracle.
    Oracle {
        /// Model file to check; mutually exclusive with --random.
        #[arg(short, long, conflicts_with = "random")]
        input: Option<PathBuf>,
        /// Number of random distributions to check instead of a file.
        #[arg(long)]
        random: Option<usize>,
        /// Largest hidden-value count for random distributions.
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() {
    // Die quietly on closed pipes (`lhv region | head`) instead of
    // panicking in println.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => std::process::exit(0),
        Ok(false) => std::process::exit(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn read_model(path: &Path) -> Result<lhv::io::ModelFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    parse_model_file(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Writes a document to the path, or to stdout when no path is given. The
/// summary line then goes to stderr so the document stays machine-readable.
struct Emitter {
    to_stdout: bool,
}

impl Emitter {
    fn write(output: Option<&Path>, document: &str) -> Result<Emitter> {
        match output {
            Some(path) => {
                std::fs::write(path, document)
                    .with_context(|| format!("writing {}", path.display()))?;
                Ok(Emitter { to_stdout: false })
            }
            None => {
                print!("{document}");
                Ok(Emitter { to_stdout: true })
            }
        }
    }

    fn summary(&self, line: &str) {
        if self.to_stdout {
            eprintln!("{line}");
        } else {
            println!("{line}");
        }
    }
}

fn oracle_cap() -> Result<usize> {
    match std::env::var(ORACLE_CAP_VAR) {
        Ok(raw) => raw
            .parse::<usize>()
            .with_context(|| format!("{ORACLE_CAP_VAR} must be a positive integer, got {raw:?}")),
        Err(_) => Ok(DEFAULT_ORACLE_CAP),
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Validate(input) => cmd_validate(&input.input),
        Command::Compute { input, format } => cmd_compute(&input.input, format),
        Command::Verify { input, hiddenness } => cmd_verify(&input.input, hiddenness.into()),
        Command::Tight {
            family,
            p,
            pad_to,
            output,
        } => cmd_tight(family.into(), p, pad_to, output.as_deref()),
        Command::Sweep {
            family,
            steps,
            pad_to,
            output,
        } => cmd_sweep(family.into(), steps, pad_to, output.as_deref()),
        Command::Region {
            h,
            steps,
            t_steps,
            output,
        } => cmd_region(h, steps, t_steps, output.as_deref()),
        Command::Sample {
            input,
            trials,
            seed,
            output,
        } => cmd_sample(&input.input, trials, seed, output.as_deref()),
        Command::Oracle {
            input,
            random,
            n,
            seed,
        } => cmd_oracle(input.as_deref(), random, n, seed),
    }
}

fn cmd_validate(path: &Path) -> Result<bool> {
    let file = read_model(path)?;
    let model = &file.model;
    println!("model: {} hidden values, 4 contexts", model.n());
    if let Some(labels) = &file.lambda_labels {
        println!("labels: {}", labels.join(", "));
    }
    for ctx in MeasurementContext::ALL {
        let sum: f64 = model.dist().row(ctx).iter().sum();
        println!("dist row {} (context {ctx}) sums to {}", ctx.index(), decimal12(sum));
    }
    println!(
        "H = {} (declared), {} (effective)",
        hiddenness(model.dist(), HiddennessMode::Declared),
        hiddenness(model.dist(), HiddennessMode::Effective)
    );
    println!("ok validate n={} file={}", model.n(), path.display());
    Ok(true)
}

fn cmd_compute(path: &Path, format: OutputFormat) -> Result<bool> {
    let file = read_model(path)?;
    let model = &file.model;
    let c = model.behavior().chsh();
    let copt = optimal_chsh(model.dist());
    let m = measurement_dependence(model.dist());
    let h = hiddenness(model.dist(), HiddennessMode::Declared);
    let h_eff = hiddenness(model.dist(), HiddennessMode::Effective);
    match format {
        OutputFormat::Json => {
            println!(
                "{}",
                serde_json::json!({
                    "c": c,
                    "c_opt": copt,
                    "m": m,
                    "h_declared": h,
                    "h_effective": h_eff,
                })
            );
        }
        OutputFormat::Text => {
            println!("C     = {}", decimal12(c));
            println!("C_opt = {}", decimal12(copt));
            println!("M     = {}", decimal12(m));
            println!("H     = {h} (declared), {h_eff} (effective)");
            println!(
                "ok compute C={} C_opt={} M={} H={h} H_eff={h_eff}",
                decimal12(c),
                decimal12(copt),
                decimal12(m)
            );
        }
    }
    Ok(true)
}

fn cmd_verify(path: &Path, mode: HiddennessMode) -> Result<bool> {
    let file = read_model(path)?;
    let model = &file.model;
    let mut all_ok = true;
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("check {name}: {} ({detail})", if ok { "ok" } else { "FAIL" });
        all_ok &= ok;
    };

    let report = check_tradeoff(model, mode);
    check(
        "chsh-within-optimal",
        report.chsh_within_optimal,
        format!("C={} C_opt={}", decimal12(report.chsh), decimal12(report.optimal_chsh)),
    );
    check(
        "optimal-within-upper",
        report.optimal_within_upper,
        format!(
            "C_opt={} upper={}",
            decimal12(report.optimal_chsh),
            decimal12(report.upper_bound)
        ),
    );
    check(
        "lower-within-optimal",
        report.lower_within_optimal,
        format!(
            "lower={} C_opt={}",
            decimal12(report.lower_bound),
            decimal12(report.optimal_chsh)
        ),
    );

    if report.hiddenness == 0 && report.dependence > tolerance::BOUND_SLACK {
        check(
            "dependence-feasible",
            false,
            format!(
                "infeasible: H=0 forces M=0, got M={}",
                decimal12(report.dependence)
            ),
        );
    }

    let dist = model.dist();
    match dist.n() {
        1 => {
            check(
                "trivial-point",
                (report.optimal_chsh - 2.0).abs() <= tolerance::BOUND_SLACK
                    && report.dependence <= tolerance::BOUND_SLACK,
                format!(
                    "M={} C_opt={}",
                    decimal12(report.dependence),
                    decimal12(report.optimal_chsh)
                ),
            );
        }
        2 => {
            let gap = (report.optimal_chsh - 2.0 - report.dependence).abs();
            check(
                "affine-relation",
                gap <= tolerance::BOUND_SLACK,
                format!("|C_opt - 2 - M| = {gap:.3e}"),
            );
        }
        3 => match bound_witness_n3(dist) {
            Ok(w) => check(
                "witness-n3",
                true,
                format!("i={} j={} lambda={} lhs={}", w.i, w.j, w.lambda, decimal12(w.lhs)),
            ),
            Err(e) => check("witness-n3", false, e.to_string()),
        },
        4 => match bound_witness_n4(dist) {
            Ok(w) => check(
                "witness-n4",
                true,
                format!("i={} j={} lambda={} lhs={}", w.i, w.j, w.lambda, decimal12(w.lhs)),
            ),
            Err(e) => check("witness-n4", false, e.to_string()),
        },
        _ => {
            let coarse = coarse_grain(dist)?;
            let gap = (min_support_sum(&coarse.dist) - min_support_sum(dist)).abs();
            check(
                "coarse-support-preserved",
                gap <= tolerance::INTERNAL,
                format!("mass gap {gap:.3e}"),
            );
            match bound_witness_n4(&coarse.dist) {
                Ok(w) => check(
                    "coarse-witness-n4",
                    true,
                    format!("i={} j={} lambda={} lhs={}", w.i, w.j, w.lambda, decimal12(w.lhs)),
                ),
                Err(e) => check("coarse-witness-n4", false, e.to_string()),
            }
            let margin = min_support_sum(dist) + 1.5 * report.dependence;
            check(
                "support-dependence-chain",
                margin >= 1.0 - tolerance::BOUND_SLACK,
                format!("min-support + 1.5*M = {}", decimal12(margin)),
            );
        }
    }

    println!(
        "{} verify H={} M={} C={} C_opt={}",
        if all_ok { "ok" } else { "fail" },
        report.hiddenness,
        decimal12(report.dependence),
        decimal12(report.chsh),
        decimal12(report.optimal_chsh)
    );
    Ok(all_ok)
}

fn cmd_tight(
    family: FamilyId,
    p: f64,
    pad_to: Option<usize>,
    output: Option<&Path>,
) -> Result<bool> {
    let params = TightFamily::new(family, p, pad_to)?;
    let dist = tight_model(&params);
    let responses = optimal_responses(&dist);
    let labels = default_lambda_labels(dist.n());
    let m = measurement_dependence(&dist);
    let copt = optimal_chsh(&dist);
    let model = LocalModel::new(dist, responses)?;
    let document = model_file_to_json(&model, Some(&labels));
    let emitter = Emitter::write(output, &format!("{document}\n"))?;
    emitter.summary(&format!(
        "ok tight family={family} p={} n={} M={} C_opt={}",
        decimal12(p),
        model.n(),
        decimal12(m),
        decimal12(copt)
    ));
    Ok(true)
}

fn cmd_sweep(
    family: FamilyId,
    steps: usize,
    pad_to: Option<usize>,
    output: Option<&Path>,
) -> Result<bool> {
    let points = family_curve(family, steps, pad_to)?;
    let emitter = Emitter::write(output, &region_points_to_csv(&points))?;
    emitter.summary(&format!("ok sweep family={family} points={}", points.len()));
    Ok(true)
}

fn cmd_region(h: usize, steps: usize, t_steps: usize, output: Option<&Path>) -> Result<bool> {
    let points = region_sweep(h, steps, t_steps)?;
    let emitter = Emitter::write(output, &region_points_to_csv(&points))?;
    emitter.summary(&format!("ok region H={h} points={}", points.len()));
    Ok(true)
}

fn cmd_sample(path: &Path, trials: u64, seed: u64, output: Option<&Path>) -> Result<bool> {
    let file = read_model(path)?;
    let record = sample(&file.model, trials, seed)?;
    let est = estimate(&record)?;
    let document = record_to_json(&record, Some(&est));
    let emitter = Emitter::write(output, &format!("{document}\n"))?;
    let exact = file.model.behavior().chsh();
    emitter.summary(&format!(
        "ok sample trials={trials} seed={seed} C_hat={} stderr={} C_exact={}",
        decimal12(est.chsh),
        decimal12(est.stderr),
        decimal12(exact)
    ));
    Ok(true)
}

fn cmd_oracle(
    input: Option<&Path>,
    random_count: Option<usize>,
    n_max: usize,
    seed: u64,
) -> Result<bool> {
    let cap = oracle_cap()?;
    let compare = |dist: &lhv::ContextDistribution| -> Result<f64> {
        let closed = optimal_chsh(dist);
        let enumerated = brute_force_optimal_chsh_with_cap(dist, cap)?;
        Ok((closed - enumerated).abs())
    };
    match (input, random_count) {
        (Some(path), _) => {
            let file = read_model(path)?;
            let gap = compare(file.model.dist())?;
            let ok = gap <= tolerance::INTERNAL;
            println!(
                "{} oracle instances=1 agreed={} max_gap={gap:.3e}",
                if ok { "ok" } else { "fail" },
                usize::from(ok)
            );
            Ok(ok)
        }
        (None, count) => {
            let count = count.unwrap_or(1000);
            if n_max == 0 {
                anyhow::bail!("--n must be at least 1");
            }
            let mut rng = random::rng_from_seed(seed);
            let mut agreed = 0usize;
            let mut max_gap = 0.0f64;
            for _ in 0..count {
                let n = rand::Rng::random_range(&mut rng, 1..=n_max);
                let dist = random::random_distribution(&mut rng, n);
                let gap = compare(&dist)?;
                max_gap = max_gap.max(gap);
                if gap <= tolerance::INTERNAL {
                    agreed += 1;
                }
            }
            let ok = agreed == count;
            println!("{agreed}/{count} agree within 1e-12");
            println!(
                "{} oracle instances={count} agreed={agreed} max_gap={max_gap:.3e}",
                if ok { "ok" } else { "fail" }
            );
            Ok(ok)
        }
    }
}
