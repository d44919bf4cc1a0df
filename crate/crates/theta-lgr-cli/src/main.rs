//! Command-line front end: classification, sampling, verification suites,
//! monoid factorization, Plucker reports, and the contractive flow, all as
//! JSON with deterministic seeding.
//!
//! Exit codes: 0 ok, 1 failed property, 2 parse error, 3 violated
//! invariant, 4 domain error.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use theta_lgr::lagrangian::plucker::{gs_list, plucker, plucker_sign_class};
use theta_lgr::lagrangian::{classify, flow, LagrangianPoint};
use theta_lgr::symplectic::{is_in_theta_monoid, theta_triple_factor, SymplecticElement};
use theta_lgr::verify::{run_suite, SuiteReport, VerifyConfig, SUITE_NAMES};
use theta_lgr::weyl::CosetIndex;
use theta_lgr::{sample, LagrangianError, Rational, RationalMatrix};

const EXIT_PROPERTY: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_DOMAIN: u8 = 4;

#[derive(Parser)]
#[command(name = "theta-lgr", version, about = "Exact theta-positivity toolkit for LG(n, 2n)")]
struct Cli {
    /// Rank n; required by sample, bounds the verify suites
    #[arg(long, global = true)]
    n: Option<usize>,
    /// RNG seed; falls back to THETA_LGR_SEED, then 0
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Residual bound for orbit witnesses
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Input file; stdin when omitted
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Compact single-line JSON instead of pretty-printed
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full stratum signature and positivity report for a point
    Classify,
    /// Deterministic corpus of points from a stratum, a cell, or the
    /// nonnegative region
    Sample {
        /// Target double stratum as "k,l"
        #[arg(long, conflicts_with = "cell")]
        stratum: Option<String>,
        /// Target Cholesky cell as a comma list like "1,3"
        #[arg(long)]
        cell: Option<String>,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Run verification suites and report counts and counterexamples
    Verify {
        /// Suite names (repeatable); all suites when omitted
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Randomized cases per suite
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Triple factorization of a monoid element
    Factor,
    /// Signed minor coordinates, sign class, and support of a point
    Plucker,
    /// Apply the contractive flow at a rational speed
    Flow {
        /// Flow speed, a positive rational like "3/2"
        #[arg(long)]
        speed: String,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure { code: EXIT_PARSE, message: message.into() }
    }

    fn invariant(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INVARIANT, message: message.into() }
    }

    fn domain(message: impl Into<String>) -> Self {
        Failure { code: EXIT_DOMAIN, message: message.into() }
    }

    fn property(message: impl Into<String>) -> Self {
        Failure { code: EXIT_PROPERTY, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if !(cli.tolerance > 0.0) {
        return Err(Failure::parse("--tolerance must be positive"));
    }
    if cli.n == Some(0) {
        return Err(Failure::parse("--n must be at least 1"));
    }
    let report = match &cli.command {
        Command::Classify => cmd_classify(cli)?,
        Command::Sample { stratum, cell, count } => {
            cmd_sample(cli, stratum.as_deref(), cell.as_deref(), *count)?
        }
        Command::Verify { suites, count } => cmd_verify(cli, suites, *count)?,
        Command::Factor => cmd_factor(cli)?,
        Command::Plucker => cmd_plucker(cli)?,
        Command::Flow { speed } => cmd_flow(cli, speed)?,
    };
    emit(cli, &report)
}

fn emit(cli: &Cli, value: &Value) -> Result<(), Failure> {
    let mut text = if cli.json {
        serde_json::to_string(value)
    } else {
        serde_json::to_string_pretty(value)
    }
    .map_err(|e| Failure::domain(format!("serialization failed: {e}")))?;
    text.push('\n');
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_input(cli: &Cli) -> Result<String, Failure> {
    match &cli.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| Failure::parse(format!("cannot read {}: {e}", path.display()))),
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Failure::parse(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn resolve_seed(cli: &Cli) -> Result<u64, Failure> {
    if let Some(seed) = cli.seed {
        return Ok(seed);
    }
    match std::env::var("THETA_LGR_SEED") {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| Failure::parse(format!("THETA_LGR_SEED is not a valid u64: {text:?}"))),
        Err(_) => Ok(0),
    }
}

/// Two-stage point parse so syntax problems and violated invariants exit
/// differently: JSON shape errors are parse failures, the validating
/// constructor names the broken invariant.
fn parse_point(text: &str) -> Result<LagrangianPoint, Failure> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Failure::parse(format!("invalid JSON: {e}")))?;
    let rep_value = value
        .get("rep")
        .ok_or_else(|| Failure::parse("point JSON must have a \"rep\" field"))?;
    let rep: RationalMatrix = serde_json::from_value(rep_value.clone())
        .map_err(|e| Failure::parse(format!("invalid matrix: {e}")))?;
    let point = LagrangianPoint::new(rep).map_err(|e| Failure::invariant(e.to_string()))?;
    if let Some(n) = value.get("n").and_then(Value::as_u64) {
        if n as usize != point.n() {
            return Err(Failure::invariant(format!(
                "declared n = {n} does not match the {} columns of rep",
                point.n()
            )));
        }
    }
    Ok(point)
}

fn theta_label(p: &LagrangianPoint) -> &'static str {
    if p.is_theta_positive() {
        "positive"
    } else if p.is_theta_nonnegative() {
        "nonnegative"
    } else {
        "none"
    }
}

fn subset_labels(list: impl IntoIterator<Item = Vec<usize>>) -> Vec<String> {
    list.into_iter()
        .map(|s| s.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        .collect()
}

fn cmd_classify(cli: &Cli) -> Result<Value, Failure> {
    let p = parse_point(&read_input(cli)?)?;
    let sig = classify(&p).map_err(|e| Failure::invariant(e.to_string()))?;
    Ok(json!({
        "k": sig.k,
        "l": sig.l,
        "K_plus": sig.k_plus,
        "K_minus": sig.k_minus,
        "theta": theta_label(&p),
        "plucker_class": plucker_sign_class(&p).to_string(),
        "gs_list": subset_labels(gs_list(&p)),
    }))
}

fn parse_stratum_spec(spec: &str) -> Result<(usize, usize), Failure> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure::parse(format!("--stratum expects \"k,l\", got {spec:?}")));
    }
    let k = parts[0].trim().parse().map_err(|_| Failure::parse("invalid k in --stratum"))?;
    let l = parts[1].trim().parse().map_err(|_| Failure::parse("invalid l in --stratum"))?;
    Ok((k, l))
}

fn parse_cell_spec(spec: &str) -> Result<CosetIndex, Failure> {
    if spec.trim().is_empty() {
        return Ok(CosetIndex::new());
    }
    spec.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Failure::parse(format!("invalid cell element {t:?}")))
        })
        .collect()
}

fn cmd_sample(
    cli: &Cli,
    stratum: Option<&str>,
    cell: Option<&str>,
    count: usize,
) -> Result<Value, Failure> {
    let n = cli.n.ok_or_else(|| Failure::parse("sample requires --n"))?;
    let seed = resolve_seed(cli)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let p = match (stratum, cell) {
            (Some(spec), None) => {
                let (k, l) = parse_stratum_spec(spec)?;
                let p = sample::stratum_point(k, l, n, &mut rng)
                    .map_err(|e| Failure::domain(e.to_string()))?;
                if theta_lgr::lagrangian::classify_double(&p) != (k, l) {
                    return Err(Failure::property(format!(
                        "sampled point failed to reclassify to stratum ({k},{l})"
                    )));
                }
                p
            }
            (None, Some(spec)) => {
                let target = parse_cell_spec(spec)?;
                let p = sample::cell_point(&target, n, &mut rng)
                    .map_err(|e| Failure::domain(e.to_string()))?;
                if theta_lgr::lagrangian::cell_index(&p).ok() != Some(target.clone()) {
                    return Err(Failure::property(format!(
                        "sampled point failed to reclassify to cell {target:?}"
                    )));
                }
                p
            }
            (None, None) => sample::nonnegative_point(n, &mut rng),
            (Some(_), Some(_)) => {
                return Err(Failure::parse("--stratum and --cell are mutually exclusive"))
            }
        };
        points.push(p);
    }
    serde_json::to_value(&points).map_err(|e| Failure::domain(e.to_string()))
}

fn cmd_verify(cli: &Cli, suites: &[String], count: usize) -> Result<Value, Failure> {
    let cfg = VerifyConfig {
        n_max: cli.n.unwrap_or(3),
        count,
        seed: resolve_seed(cli)?,
        tolerance: cli.tolerance,
    };
    let selected: Vec<String> = if suites.is_empty() {
        SUITE_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        suites.to_vec()
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for name in &selected {
        let report = run_suite(name, &cfg)
            .ok_or_else(|| Failure::parse(format!("unknown suite {name:?}; available: {SUITE_NAMES:?}")))?;
        reports.push(report);
    }
    let all_passed = reports.iter().all(SuiteReport::passed);
    let value = json!({
        "seed": cfg.seed,
        "n_max": cfg.n_max,
        "count": cfg.count,
        "passed": all_passed,
        "suites": reports,
    });
    if all_passed {
        Ok(value)
    } else {
        // Emit the report before signalling failure so the counterexample
        // is never lost.
        emit(cli, &value)?;
        Err(Failure::property("one or more verification suites failed"))
    }
}

fn cmd_factor(cli: &Cli) -> Result<Value, Failure> {
    let text = read_input(cli)?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Failure::parse(format!("invalid JSON: {e}")))?;
    let mat: RationalMatrix = serde_json::from_value(value)
        .map_err(|e| Failure::parse(format!("invalid matrix: {e}")))?;
    let g = SymplecticElement::new(mat).map_err(|e| Failure::invariant(e.to_string()))?;
    if !is_in_theta_monoid(&g) {
        return Err(Failure::domain(
            "element is outside the theta monoid: no triple factorization exists",
        ));
    }
    let f = theta_triple_factor(&g).map_err(|e| Failure::domain(e.to_string()))?;
    let exact = f.product().matrix() == g.matrix();
    Ok(json!({
        "u_minus": f.u_minus.matrix(),
        "torus": f.torus_part.matrix(),
        "u_plus": f.u_plus.matrix(),
        "reassembly_exact": exact,
    }))
}

fn cmd_plucker(cli: &Cli) -> Result<Value, Failure> {
    let p = parse_point(&read_input(cli)?)?;
    let v = plucker(&p);
    let sign_class = v.sign_class().to_string();
    let support = subset_labels(v.support());
    Ok(json!({
        "n": p.n(),
        "coords": v,
        "sign_class": sign_class,
        "gs_list": support,
    }))
}

fn cmd_flow(cli: &Cli, speed: &str) -> Result<Value, Failure> {
    let c = Rational::from_str(speed)
        .map_err(|e| Failure::parse(format!("invalid --speed {speed:?}: {e}")))?;
    let p = parse_point(&read_input(cli)?)?;
    let moved = flow(&c, &p).map_err(|e| match e {
        LagrangianError::FlowSpeedNotPositive(_) => Failure::domain(e.to_string()),
        other => Failure::invariant(other.to_string()),
    })?;
    serde_json::to_value(&moved).map_err(|e| Failure::domain(e.to_string()))
}
