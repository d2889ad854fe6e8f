//! Batch front end for the twistor geometry engine.
//!
//! Four commands: `classify` runs the Gray–Hervella classifier for a
//! `(metric, fibre map, t)` configuration, `verify` checks the closed-form
//! structure tensors against differentiation oracles and the frame algebra
//! identities, `curvature` prints the curvature decomposition of a catalog
//! metric, and `catalog` lists the built-in metrics.
//!
//! Exit codes: `0` success, `1` input error, `2` detected inconsistency
//! (classifier refusal or failed verification).

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};
use twistor_gh::analysis::{
    algebra_defects, classify, decomposition_defects, gh_residuals, oracle_defects, RunGrid,
};
use twistor_gh::catalog::{self, CatalogEntry};
use twistor_gh::curvature::curvature_operator;
use twistor_gh::fibermaps::{pushforward_horizontal, unit_lambda_pushforward, MapSign};
use twistor_gh::linalg::{frobenius, sym_eigen3};
use twistor_gh::report::{
    to_csv, to_human, to_json, CurvatureReport, GHReport, SuiteResult, VerifyReport, SCHEMA,
};
use twistor_gh::sample::{base_points, fiber_sample};
use twistor_gh::{Error, FiberMap};

#[derive(Parser)]
#[command(
    name = "twistor-gh",
    version,
    about = "Gray-Hervella analysis of twistor spaces over Riemannian 4-manifold charts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the almost Hermitian structure of a (metric, fibre map, t) run.
    Classify(ClassifyArgs),
    /// Check closed-form tensors against oracles; exit 0 iff every suite passes.
    Verify(VerifyArgs),
    /// Print the curvature decomposition of a catalog metric.
    Curvature(CurvatureArgs),
    /// List the metric catalog.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// Catalog metric name.
    #[arg(long)]
    metric: String,
    /// Metric parameters as a JSON object.
    #[arg(long, default_value = "null")]
    params: String,
    /// Fibre map: id | antipodal | omega | lambda:+:<re>,<im> | lambda:-:<re>,<im>.
    #[arg(long)]
    fibermap: String,
    /// Fibre scale; repeat for several runs.
    #[arg(long = "t")]
    t: Vec<f64>,
    /// Vanishing threshold (nonvanishing margin is 10x this).
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// Base sample points.
    #[arg(long, default_value_t = 4)]
    points: usize,
    /// Fibre sample points per base point.
    #[arg(long = "fiber-points", default_value_t = 8)]
    fiber_points: usize,
    /// Seed for the randomized part of the sample set.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format: json | csv | human.
    #[arg(long, default_value = "human")]
    output: String,
    /// Omit the timestamp so identical configurations give identical bytes.
    #[arg(long = "no-timestamp")]
    no_timestamp: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Catalog metric name.
    #[arg(long)]
    metric: String,
    /// Metric parameters as a JSON object.
    #[arg(long, default_value = "null")]
    params: String,
    /// Restrict to one fibre map (default: a representative set).
    #[arg(long)]
    fibermap: Option<String>,
    /// Fibre scale; repeat for several values.
    #[arg(long = "t")]
    t: Vec<f64>,
    /// Base sample points.
    #[arg(long, default_value_t = 4)]
    points: usize,
    /// Fibre sample points per base point.
    #[arg(long = "fiber-points", default_value_t = 8)]
    fiber_points: usize,
    /// Seed for the randomized samples.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output format: json | human.
    #[arg(long, default_value = "human")]
    output: String,
    /// Omit the timestamp.
    #[arg(long = "no-timestamp")]
    no_timestamp: bool,
}

#[derive(Args)]
struct CurvatureArgs {
    /// Catalog metric name.
    #[arg(long)]
    metric: String,
    /// Metric parameters as a JSON object.
    #[arg(long, default_value = "null")]
    params: String,
    /// Sample points for the curvature predicates.
    #[arg(long, default_value_t = 4)]
    points: usize,
    /// Threshold for the vanishing predicates.
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    /// Output format: json | human.
    #[arg(long, default_value = "human")]
    output: String,
    /// Omit the timestamp.
    #[arg(long = "no-timestamp")]
    no_timestamp: bool,
}

#[derive(Args)]
struct CatalogArgs {
    /// Output format: json | human.
    #[arg(long, default_value = "human")]
    output: String,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::AmbiguousClass(_) | Error::InconsistentClass(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

struct Outcome {
    text: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_ok =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if usage_ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    let result = match cli.command {
        Command::Classify(args) => cmd_classify(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Curvature(args) => cmd_curvature(&args),
        Command::Catalog(args) => cmd_catalog(&args),
    };
    match result {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_entry(metric: &str, params: &str) -> Result<CatalogEntry, Failure> {
    let value: serde_json::Value = serde_json::from_str(params)
        .map_err(|e| Failure::input(format!("--params is not valid JSON: {e}")))?;
    Ok(catalog::build(metric, &value)?)
}

fn t_list(raw: &[f64]) -> Result<Vec<f64>, Failure> {
    let list = if raw.is_empty() { vec![1.0] } else { raw.to_vec() };
    for &t in &list {
        if !(t > 0.0) {
            return Err(Failure::input(format!("fibre scale t must be positive, got {t}")));
        }
    }
    Ok(list)
}

fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn cmd_classify(args: &ClassifyArgs) -> Result<Outcome, Failure> {
    let entry = parse_entry(&args.metric, &args.params)?;
    let fmap = FiberMap::parse(&args.fibermap)?;
    let ts = t_list(&args.t)?;
    if !(args.tol > 0.0) {
        return Err(Failure::input(format!("--tol must be positive, got {}", args.tol)));
    }
    if args.points * args.fiber_points < 8 {
        return Err(Failure::input(format!(
            "classification needs at least 8 sample points, got {} x {}",
            args.points, args.fiber_points
        )));
    }
    let grid = RunGrid {
        base_points: args.points,
        fiber_points: args.fiber_points,
        seed: args.seed,
    };
    let timestamp = (!args.no_timestamp).then(now_unix);
    let mut reports = Vec::new();
    for &t in &ts {
        let residuals = gh_residuals(&entry.metric, &fmap, &[t], &grid)?;
        let cls = classify(&residuals, args.tol)?;
        reports.push(GHReport::new(
            &cls,
            &residuals,
            args.tol,
            t,
            args.points,
            args.fiber_points,
            fmap.label(),
            entry.name.to_string(),
            args.seed,
            timestamp,
        ));
    }
    let text = match args.output.as_str() {
        "json" => to_json(&reports),
        "csv" => to_csv(&reports),
        "human" => to_human(&reports),
        other => return Err(Failure::input(format!("unknown output format '{other}'"))),
    };
    Ok(Outcome { text, code: 0 })
}

/// Tolerances of the verification suites (absolute unless noted).
const ALGEBRA_TOL: f64 = 1e-10;
const DECOMPOSITION_TOL: f64 = 1e-10;
const ORACLE_REL_TOL: f64 = 1e-5;
const ZERO_BLOCK_TOL: f64 = 1e-6;
const STAR_TOL: f64 = 1e-8;

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, Failure> {
    let entry = parse_entry(&args.metric, &args.params)?;
    let ts = t_list(&args.t)?;
    if args.points == 0 || args.fiber_points == 0 {
        return Err(Failure::input("--points and --fiber-points must be positive"));
    }
    let fmaps: Vec<FiberMap> = match &args.fibermap {
        Some(text) => vec![FiberMap::parse(text)?],
        None => vec![
            FiberMap::Identity,
            FiberMap::Antipodal,
            FiberMap::ConstOmega,
            FiberMap::Lambda { re: 2.0, im: 1.0, sign: MapSign::Plus },
            FiberMap::Lambda { re: 2.0, im: 1.0, sign: MapSign::Minus },
        ],
    };
    let xs = base_points(&twistor_gh::MetricChart::sample_box(&entry.metric), args.points);
    let sigmas = fiber_sample(args.fiber_points, args.seed);
    let mut suites = Vec::new();

    // Frame algebra identities, 64 seeded samples per base point.
    {
        let mut worst = 0.0_f64;
        let mut failures = Vec::new();
        for (i, x) in xs.iter().enumerate() {
            let op = curvature_operator(&entry.metric, x)?;
            let d = algebra_defects(&op, 64, args.seed ^ i as u64);
            worst = worst.max(d.max());
            if d.max() > ALGEBRA_TOL {
                failures.push(format!(
                    "algebra identities at {x:?}: defect {:.3e}",
                    d.max()
                ));
            }
        }
        suites.push(SuiteResult {
            suite: "frame algebra identities".to_string(),
            pass: failures.is_empty(),
            max_defect: worst,
            tolerance: ALGEBRA_TOL,
            failures,
        });
    }

    // Curvature decomposition structure.
    {
        let mut worst = 0.0_f64;
        let mut failures = Vec::new();
        for x in &xs {
            let op = curvature_operator(&entry.metric, x)?;
            let d = decomposition_defects(&op);
            worst = worst.max(d.max());
            if d.max() > DECOMPOSITION_TOL {
                failures.push(format!(
                    "curvature decomposition at {x:?}: defect {:.3e}",
                    d.max()
                ));
            }
        }
        suites.push(SuiteResult {
            suite: "curvature decomposition".to_string(),
            pass: failures.is_empty(),
            max_defect: worst,
            tolerance: DECOMPOSITION_TOL,
            failures,
        });
    }

    // Closed structure tensors vs differentiation oracles.
    {
        let mut worst_cov = 0.0_f64;
        let mut worst_nij = 0.0_f64;
        let mut worst_zero = 0.0_f64;
        let mut cov_failures = Vec::new();
        let mut nij_failures = Vec::new();
        let mut zero_failures = Vec::new();
        for fmap in &fmaps {
            for &t in &ts {
                for x in &xs {
                    for sigma in &sigmas {
                        let d = oracle_defects(&entry.metric, x, sigma, fmap, t)?;
                        worst_cov = worst_cov.max(d.cov_deriv_rel);
                        worst_nij = worst_nij.max(d.nijenhuis_rel);
                        worst_zero = worst_zero.max(d.zero_blocks);
                        if d.cov_deriv_rel > ORACLE_REL_TOL {
                            cov_failures.push(format!(
                                "covariant derivative, map {}, t={t}, x={x:?}: defect {:.3e}",
                                fmap.label(),
                                d.cov_deriv_rel
                            ));
                        }
                        if d.nijenhuis_rel > ORACLE_REL_TOL {
                            nij_failures.push(format!(
                                "Nijenhuis tensor, map {}, t={t}, x={x:?}: defect {:.3e}",
                                fmap.label(),
                                d.nijenhuis_rel
                            ));
                        }
                        if d.zero_blocks > ZERO_BLOCK_TOL {
                            zero_failures.push(format!(
                                "vertical zero blocks, map {}, t={t}, x={x:?}: defect {:.3e}",
                                fmap.label(),
                                d.zero_blocks
                            ));
                        }
                    }
                }
            }
        }
        suites.push(SuiteResult {
            suite: "covariant derivative vs oracle".to_string(),
            pass: cov_failures.is_empty(),
            max_defect: worst_cov,
            tolerance: ORACLE_REL_TOL,
            failures: cov_failures,
        });
        suites.push(SuiteResult {
            suite: "Nijenhuis tensor vs oracle".to_string(),
            pass: nij_failures.is_empty(),
            max_defect: worst_nij,
            tolerance: ORACLE_REL_TOL,
            failures: nij_failures,
        });
        suites.push(SuiteResult {
            suite: "oracle vertical zero blocks".to_string(),
            pass: zero_failures.is_empty(),
            max_defect: worst_zero,
            tolerance: ZERO_BLOCK_TOL,
            failures: zero_failures,
        });
    }

    // Closed-form pushforward for unit-circle dilations against the general
    // transport algorithm.
    {
        let star_maps: Vec<(f64, f64, MapSign)> = match &args.fibermap {
            Some(text) => match FiberMap::parse(text)? {
                FiberMap::Lambda { re, im, sign }
                    if (re * re + im * im - 1.0).abs() <= 1e-12 =>
                {
                    vec![(re, im, sign)]
                }
                _ => Vec::new(),
            },
            None => vec![(0.6, 0.8, MapSign::Plus), (0.6, 0.8, MapSign::Minus)],
        };
        if !star_maps.is_empty() {
            let mut worst = 0.0_f64;
            let mut failures = Vec::new();
            let dirs: [[f64; 4]; 2] = [[1.0, 0.0, -0.5, 0.25], [0.2, -1.0, 0.4, 0.8]];
            for &(re, im, sign) in &star_maps {
                let fmap = FiberMap::Lambda { re, im, sign };
                for x in &xs {
                    for sigma in &sigmas {
                        for dir in &dirs {
                            let general =
                                pushforward_horizontal(&entry.metric, x, sigma, &fmap, dir)?;
                            let closed = unit_lambda_pushforward(
                                &entry.metric,
                                x,
                                sigma,
                                re,
                                im,
                                sign,
                                dir,
                            )?;
                            let defect = general.sub(&closed).norm();
                            worst = worst.max(defect);
                            if defect > STAR_TOL {
                                failures.push(format!(
                                    "unit-lambda pushforward, map {}, x={x:?}: defect {defect:.3e}",
                                    fmap.label()
                                ));
                            }
                        }
                    }
                }
            }
            suites.push(SuiteResult {
                suite: "unit-lambda pushforward closed form".to_string(),
                pass: failures.is_empty(),
                max_defect: worst,
                tolerance: STAR_TOL,
                failures,
            });
        }
    }

    let all_pass = suites.iter().all(|s| s.pass);
    let report = VerifyReport {
        schema: SCHEMA.to_string(),
        metric: entry.name.to_string(),
        fibermap: args
            .fibermap
            .clone()
            .unwrap_or_else(|| "default-set".to_string()),
        seed: args.seed,
        all_pass,
        suites,
        timestamp: (!args.no_timestamp).then(now_unix),
    };
    let text = match args.output.as_str() {
        "json" => report.to_json(),
        "human" => report.to_human(),
        other => return Err(Failure::input(format!("unknown output format '{other}'"))),
    };
    Ok(Outcome { text, code: if all_pass { 0 } else { 2 } })
}

fn cmd_curvature(args: &CurvatureArgs) -> Result<Outcome, Failure> {
    let entry = parse_entry(&args.metric, &args.params)?;
    if args.points == 0 {
        return Err(Failure::input("--points must be positive"));
    }
    let xs = base_points(&twistor_gh::MetricChart::sample_box(&entry.metric), args.points);
    let mut max_b = 0.0_f64;
    let mut max_wp = 0.0_f64;
    let mut max_wm = 0.0_f64;
    let mut max_s = 0.0_f64;
    let mut first = None;
    for x in &xs {
        let op = curvature_operator(&entry.metric, x)?;
        let d = op.decompose();
        max_b = max_b.max(frobenius(&d.b));
        max_wp = max_wp.max(frobenius(&d.w_plus));
        max_wm = max_wm.max(frobenius(&d.w_minus));
        max_s = max_s.max(d.scalar.abs());
        if first.is_none() {
            first = Some((*x, d));
        }
    }
    let (point, d) = first.expect("at least one sample point");
    let report = CurvatureReport {
        schema: SCHEMA.to_string(),
        metric: entry.name.to_string(),
        point,
        scalar: d.scalar,
        w_plus_eigenvalues: sym_eigen3(&d.w_plus).0,
        w_minus_eigenvalues: sym_eigen3(&d.w_minus).0,
        b_norm: max_b,
        einstein: max_b <= args.tol,
        self_dual: max_wm <= args.tol,
        anti_self_dual: max_wp <= args.tol,
        scalar_flat: max_s <= args.tol,
        timestamp: (!args.no_timestamp).then(now_unix),
    };
    let text = match args.output.as_str() {
        "json" => report.to_json(),
        "human" => report.to_human(),
        other => return Err(Failure::input(format!("unknown output format '{other}'"))),
    };
    Ok(Outcome { text, code: 0 })
}

fn cmd_catalog(args: &CatalogArgs) -> Result<Outcome, Failure> {
    let entries = catalog::all_default();
    let text = match args.output.as_str() {
        "json" => {
            let rows: Vec<serde_json::Value> = entries
                .iter()
                .map(|e| {
                    serde_json::json!({
                        "name": e.name,
                        "summary": e.summary,
                        "einstein": e.expected.einstein,
                        "self_dual": e.expected.self_dual,
                        "anti_self_dual": e.expected.anti_self_dual,
                        "scalar_flat": e.expected.scalar_flat,
                        "kahler": e.expected.kahler,
                        "hermitian": e.expected.hermitian,
                    })
                })
                .collect();
            let doc = serde_json::json!({ "schema": SCHEMA, "metrics": rows });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("catalog serialization"))
        }
        "human" => {
            let mut out = String::new();
            for e in &entries {
                out.push_str(&format!("{:<15} {}\n", e.name, e.summary));
            }
            out
        }
        other => return Err(Failure::input(format!("unknown output format '{other}'"))),
    };
    Ok(Outcome { text, code: 0 })
}
