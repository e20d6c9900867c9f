//! `cubic`: 27 lines, eigenpoints, discriminant, normal forms and tropical
//! subdivisions of a cubic surface, reported as JSON.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 computation failure.
//! Thread count follows `RAYON_NUM_THREADS`.

mod commands;
mod input;
mod json;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use commands::{Command, Ctx, Options, DEFAULT_BUDGET};

#[derive(Parser, Debug)]
#[command(name = "cubic", version, about = "Invariant and tropical geometry of cubic surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Cubic form, e.g. "x^3 + y^3 + z^3 + w^3".
    #[arg(long, global = true, conflicts_with = "coeffs")]
    poly: Option<String>,

    /// File with 20 coefficients: `name value` lines or a JSON array.
    #[arg(long, global = true)]
    coeffs: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Override the module's acceptance tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Prime for the p-adic valuation.
    #[arg(long, global = true, default_value_t = 2)]
    prime: u64,

    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true, value_name = "OUT")]
    json: Option<PathBuf>,

    /// Omit wall time so reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
enum Cmd {
    /// The 27 lines with Plücker coordinates and real census.
    Lines,
    /// Incidence graph, tritangent planes and double-sixes.
    Incidence,
    /// Incidence data plus Eckardt points.
    Eckardt,
    /// Fixed points of the gradient map.
    Eigenpoints,
    /// Exact discriminant and singular-point witness.
    Discriminant,
    /// Sylvester pentahedral form.
    Pentahedron,
    /// All Cayley–Salmon trihedral-pair representations.
    CayleySalmon,
    /// Transform into the Brundu–Logar normal-form family.
    BrunduLogar,
    /// Regular subdivision from p-adic (or given) valuations.
    Tropical {
        /// 20 valuations (rationals or `inf`) instead of deriving them from the input.
        #[arg(long)]
        valuation: Option<PathBuf>,
    },
    /// Seeded random search for a coordinate change with a smooth tropicalization.
    SmoothSearch {
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Everything applicable to the input.
    Report,
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Lines => "lines",
            Cmd::Incidence => "incidence",
            Cmd::Eckardt => "eckardt",
            Cmd::Eigenpoints => "eigenpoints",
            Cmd::Discriminant => "discriminant",
            Cmd::Pentahedron => "pentahedron",
            Cmd::CayleySalmon => "cayley-salmon",
            Cmd::BrunduLogar => "brundu-logar",
            Cmd::Tropical { .. } => "tropical",
            Cmd::SmoothSearch { .. } => "smooth-search",
            Cmd::Report => "report",
        }
    }

    fn run(&self) -> Command {
        match self {
            Cmd::Lines => commands::lines,
            Cmd::Incidence => commands::incidence,
            Cmd::Eckardt => commands::eckardt,
            Cmd::Eigenpoints => commands::eigen,
            Cmd::Discriminant => commands::discriminant,
            Cmd::Pentahedron => commands::pentahedron,
            Cmd::CayleySalmon => commands::cayley_salmon,
            Cmd::BrunduLogar => commands::brundu_logar_cmd,
            Cmd::Tropical { .. } => commands::tropical,
            Cmd::SmoothSearch { .. } => commands::smooth_search,
            Cmd::Report => commands::report,
        }
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = u8::from(e.use_stderr());
            // Help and version go to stdout with status 0.
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();

    let f = match (&cli.poly, &cli.coeffs) {
        (Some(p), _) => Some(input::from_poly(p)),
        (None, Some(path)) => Some(read(path).and_then(|t| input::from_coeff_file(&t))),
        (None, None) => None,
    };
    let f = match f.transpose() {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let valuation = match &cli.command {
        Cmd::Tropical { valuation: Some(path) } => match read(path).and_then(|t| input::valuation_file(&t)) {
            Ok(v) => Some(v),
            Err(e) => return usage_error(&e),
        },
        _ => None,
    };
    if f.is_none() && valuation.is_none() {
        return usage_error("an input is required: --poly or --coeffs");
    }
    if cli.tol.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
        return usage_error("--tol must be a positive number");
    }
    let budget = match cli.command {
        Cmd::SmoothSearch { budget: 0 } => return usage_error("--budget must be at least 1"),
        Cmd::SmoothSearch { budget } => budget,
        _ => DEFAULT_BUDGET,
    };
    let opts = Options {
        seed: cli.seed,
        tol: cli.tol,
        prime: cli.prime,
        budget,
    };

    let mut report = Map::new();
    report.insert("command".into(), json!(cli.command.name()));
    report.insert("input".into(), f.as_ref().map_or(Value::Null, |f| json!(f)));
    report.insert("polynomial".into(), f.as_ref().map_or(Value::Null, |f| json!(f.to_string())));
    report.insert("seed".into(), json!(cli.seed));
    report.insert(
        "config".into(),
        json!({"tol": cli.tol, "prime": cli.prime, "budget": budget}),
    );

    let ctx = Ctx::new(f, valuation, opts);
    let outcome = (cli.command.run())(&ctx);
    let ok = outcome.is_ok();
    match outcome {
        Ok(s) => {
            report.insert("status".into(), json!("ok"));
            report.insert("results".into(), s.results);
            report.insert("residuals".into(), Value::Object(s.residuals));
        }
        Err(e) => {
            report.insert("status".into(), json!("failed"));
            report.insert("error".into(), json!(e.error));
            report.insert("diagnostic".into(), e.diagnostic);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if !cli.no_timing {
        report.insert("wall_time_seconds".into(), json!(elapsed));
    }

    let text = json::to_string(&Value::Object(report.clone()));
    match &cli.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if ok {
        eprintln!("{}: ok ({elapsed:.2} s)", cli.command.name());
        ExitCode::SUCCESS
    } else {
        eprintln!("{}: failed: {}", cli.command.name(), report["error"].as_str().unwrap_or(""));
        ExitCode::from(2)
    }
}
