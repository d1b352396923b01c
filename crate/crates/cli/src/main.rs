use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hjts::harness::{self, parse_suites, SuiteConfig, EXIT_CONFIG, EXIT_INTERNAL};
use hjts::{psi, psi_inverse, DualityRoute, Element, HjtsError, JtsKind, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hjts", version, about = "Symplectic duality on classical bounded symmetric domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites over seeded sample points.
    Verify(VerifyArgs),
    /// Evaluate Ψ at a point and map it back.
    Psi {
        #[arg(long)]
        kind: String,
        /// JSON array of coordinates: numbers, or `[re, im]` pairs.
        #[arg(long)]
        point: String,
        #[arg(long, default_value = "box-half", value_parser = ["bergman-quarter", "box-half", "spectral"])]
        route: String,
    },
    /// Print seeded interior sample points as JSON.
    Sample {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.95)]
        cap: f64,
    },
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Kind to verify; repeat for several. Kinds contain commas, so they are
    /// not comma-separated.
    #[arg(long = "kind")]
    kinds: Vec<String>,
    /// Default kinds and default suites (explicit options still apply).
    #[arg(long)]
    all: bool,
    /// Comma-separated suite names: jordan, spectral, duality, equivariance,
    /// hereditary, symplectic, volume, lemma_a1, lemma_a2, beta_exact,
    /// pullback_p1, bergman_metric.
    #[arg(long)]
    suites: Option<String>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tangent_pairs: Option<usize>,
    #[arg(long)]
    tol_exact: Option<f64>,
    #[arg(long)]
    tol_fd: Option<f64>,
    #[arg(long)]
    fd_step: Option<f64>,
    #[arg(long)]
    hessian_step: Option<f64>,
    #[arg(long)]
    boundary_cap: Option<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_CONFIG as u8)
}

fn build_config(args: &VerifyArgs) -> Result<SuiteConfig, HjtsError> {
    let mut cfg = SuiteConfig::default();
    if !args.kinds.is_empty() {
        cfg.kinds = args.kinds.iter().map(|k| k.parse()).collect::<Result<_, _>>()?;
    } else if !args.all {
        return Err(HjtsError::Parse("give at least one --kind, or --all".into()));
    }
    if let Some(s) = &args.suites {
        cfg.suites = parse_suites(s)?;
    }
    macro_rules! set {
        ($($field:ident),*) => { $(if let Some(v) = args.$field { cfg.$field = v; })* };
    }
    set!(points, seed, tangent_pairs, tol_exact, tol_fd, fd_step, hessian_step, boundary_cap);
    cfg.validate()?;
    Ok(cfg)
}

fn verify(args: VerifyArgs) -> ExitCode {
    let cfg = match build_config(&args) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    let report = match harness::run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => return config_error(e),
    };
    for r in &report.results {
        let err = r.max_error.map_or("non-finite".to_string(), |e| format!("{e:.3e}"));
        let mark = if r.pass { "pass" } else { "FAIL" };
        eprintln!("{mark} {:<20} {:<14} n={:<4} max={err} tol={:.1e}", r.kind, r.suite, r.samples, r.tolerance);
    }
    if let Some(e) = &report.error {
        eprintln!("error in {} / {}: {}", e.kind, e.suite, e.message);
    }
    eprintln!("wall time {:.2} s", report.wall_time_s);
    let text = report.to_json();
    match &args.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_INTERNAL as u8);
            }
        }
        None => println!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}

fn parse_point(kind: &JtsKind, text: &str) -> Result<Element, HjtsError> {
    let v: Value = serde_json::from_str(text).map_err(|e| HjtsError::Parse(format!("point: {e}")))?;
    let items = v.as_array().ok_or_else(|| HjtsError::Parse("point must be a JSON array".into()))?;
    let coords = items
        .iter()
        .map(|x| match x {
            Value::Number(n) => n.as_f64().map(|re| C64::new(re, 0.0)),
            Value::Array(p) if p.len() == 2 => Some(C64::new(p[0].as_f64()?, p[1].as_f64()?)),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| HjtsError::Parse("coordinates must be numbers or [re, im] pairs".into()))?;
    Element::new(kind, coords)
}

fn pairs(z: &Element) -> Value {
    json!(z.coords().iter().map(|c| [c.re, c.im]).collect::<Vec<_>>())
}

fn run_psi(kind: &str, point: &str, route: &str) -> ExitCode {
    let route = match route {
        "bergman-quarter" => DualityRoute::BergmanQuarter,
        "spectral" => DualityRoute::Spectral,
        _ => DualityRoute::BoxHalf,
    };
    let parsed = kind.parse::<JtsKind>().and_then(|k| parse_point(&k, point));
    let z = match parsed {
        Ok(z) => z,
        Err(e) => return config_error(e),
    };
    let result = psi(&z, route).and_then(|u| Ok((psi_inverse(&u, route)?, u)));
    match result {
        Ok((back, u)) => {
            let out = json!({
                "kind": kind,
                "psi": pairs(&u),
                "psi_inverse_of_psi": pairs(&back),
                "round_trip_error": back.distance(&z),
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            ExitCode::SUCCESS
        }
        Err(e @ HjtsError::Domain(_)) => config_error(e),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INTERNAL as u8)
        }
    }
}

fn run_sample(kind: &str, count: usize, seed: u64, cap: f64) -> ExitCode {
    let kind: JtsKind = match kind.parse() {
        Ok(k) => k,
        Err(e) => return config_error(e),
    };
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        match harness::sample_domain(&kind, &mut rng, cap) {
            Ok(z) => points.push(pairs(&z)),
            Err(e) => return config_error(e),
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({ "kind": kind.to_string(), "seed": seed, "points": points }))
            .expect("json")
    );
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::Psi { kind, point, route } => run_psi(&kind, &point, &route),
        Command::Sample { kind, count, seed, cap } => run_sample(&kind, count, seed, cap),
    }
}
