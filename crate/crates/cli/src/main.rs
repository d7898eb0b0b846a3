use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use gnep::bench::{run_benchmark, write_csv, BenchConfig};
use gnep::convexify::{check_k_restrictive_closed, check_restrictive_closed, zero_one_report, CheckReport, Verdict};
use gnep::flowgame::{finite_game, generate_instance, GenParams, SourceMode, WeightMode};
use gnep::io::{game_from_point_set_json, instance_from_json, instance_to_json};
use gnep::solvers::{self, Method, SolveConfig, SolveResult, Status};
use gnep::{CdfgInstance, Error, FiniteGnep};

const OK: u8 = 0;
const NO_GNE: u8 = 1;
const INPUT_ERROR: u8 = 2;
const FAILS: u8 = 3;
const UNDECIDED: u8 = 4;
const TIMEOUT: u8 = 5;

#[derive(Parser)]
#[command(name = "gnep", version, about = "Generalized Nash equilibria of discrete flow games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random flow-game instance.
    Gen {
        #[arg(long, default_value_t = 10)]
        nodes: usize,
        #[arg(long, default_value_t = 2)]
        players: usize,
        #[arg(long, value_enum, default_value_t = Sources::Multi)]
        sources: Sources,
        #[arg(long, value_enum, default_value_t = Weights::Unit)]
        weights: Weights,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search an instance for an equilibrium.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
        /// Method: vhat, valpha, vbar, reformulation-exhaustive or gauss-seidel.
        #[arg(long, default_value = "valpha")]
        method: Method,
    },
    /// Minimize the reformulated objective over every integral profile.
    Oracle {
        instance: PathBuf,
        #[command(flatten)]
        opts: SolveOpts,
    },
    /// Structural checks on a point-set game or a flow-game instance.
    Check {
        #[arg(value_enum)]
        check: CheckKind,
        file: PathBuf,
        /// Profile cap when a flow-game instance is enumerated.
        #[arg(long, default_value_t = solvers::DEFAULT_ENUM_CAP)]
        enum_cap: usize,
    },
    /// Run a benchmark sweep and write CSV.
    Bench {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct SolveOpts {
    #[arg(long)]
    penalized: bool,
    #[arg(long, default_value_t = gnep::nikaido::DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, default_value_t = gnep::nikaido::DEFAULT_BETA)]
    beta: f64,
    #[arg(long, default_value_t = solvers::DEFAULT_STARTS)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seconds.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[arg(long, default_value_t = solvers::DEFAULT_ENUM_CAP)]
    enum_cap: usize,
    /// Write the result as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sources {
    Single,
    Multi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weights {
    Unit,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Krc,
    Rc,
    ZeroOne,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<CdfgInstance, Error> {
    instance_from_json(&read(path)?)
}

fn solve_config(opts: &SolveOpts, method: Method) -> Result<SolveConfig, Error> {
    if !(opts.time_limit >= 0.0 && opts.time_limit.is_finite()) {
        return Err(Error::Input(format!("time limit must be a nonnegative number, got {}", opts.time_limit)));
    }
    Ok(SolveConfig {
        method,
        penalized: opts.penalized,
        alpha: opts.alpha,
        beta: opts.beta,
        starts: opts.starts,
        seed: opts.seed,
        time_limit: Duration::from_secs_f64(opts.time_limit),
        enum_cap: opts.enum_cap,
        ..Default::default()
    })
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::GneFound => OK,
        Status::NoGneCertified => NO_GNE,
        Status::Timeout => TIMEOUT,
        Status::BudgetExhausted => UNDECIDED,
    }
}

fn report_solve(method: Method, r: &SolveResult, out: Option<&Path>) -> Result<u8, Error> {
    println!("method: {method}");
    println!("status: {}", r.status.name());
    if let Some(x) = &r.profile {
        println!("profile: {}", serde_json::to_string(x).expect("profile serializes"));
    }
    if let Some(v) = &r.value {
        println!("value: {v}");
    }
    println!("starts: {}", r.starts_used);
    println!("evaluations: {}", r.evaluations);
    if let Some(d) = &r.diagnostic {
        println!("note: {d}");
    }
    if let Some(path) = out {
        let trace: Vec<_> = r
            .trace
            .iter()
            .map(|t| {
                json!({
                    "start": t.start,
                    "evaluations": t.evaluations,
                    "iterations": t.iterations,
                    "objective": if t.objective.is_finite() { json!(t.objective) } else { json!(null) },
                    "rounded": t.rounded,
                    "feasible": t.feasible,
                    "accepted": t.accepted,
                })
            })
            .collect();
        let doc = json!({
            "method": method.name(),
            "status": r.status.name(),
            "profile": r.profile,
            "value": r.value.as_ref().map(|v| v.to_string()),
            "starts": r.starts_used,
            "evaluations": r.evaluations,
            "diagnostic": r.diagnostic,
            "trace": trace,
        });
        write(path, &serde_json::to_string_pretty(&doc).expect("result serializes"))?;
    }
    Ok(status_code(r.status))
}

fn load_finite_game(path: &Path, enum_cap: usize) -> Result<FiniteGnep, Error> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    if value.get("arcs").is_some() {
        finite_game(&instance_from_json(&text)?, enum_cap)
    } else {
        game_from_point_set_json(&text)
    }
}

fn report_check(report: &CheckReport) -> u8 {
    let verdict = match report.verdict {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::Undecided => "undecided",
    };
    println!("verdict: {verdict}");
    println!("method: {:?}", report.method);
    println!("slices: {}", report.slices);
    if report.samples > 0 {
        println!("samples: {}", report.samples);
    }
    if let Some(w) = &report.witness {
        println!("witness: {w}");
    }
    match report.verdict {
        Verdict::Holds => OK,
        Verdict::Fails => FAILS,
        Verdict::Undecided => UNDECIDED,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Gen { nodes, players, sources, weights, seed, out } => {
            let params = GenParams {
                nodes,
                players,
                source_mode: match sources {
                    Sources::Single => SourceMode::Single,
                    Sources::Multi => SourceMode::Multi,
                },
                weight_mode: match weights {
                    Weights::Unit => WeightMode::Unit,
                    Weights::Random => WeightMode::Random,
                },
            };
            let text = instance_to_json(&generate_instance(params, seed)?);
            match out {
                Some(path) => write(&path, &text)?,
                None => println!("{text}"),
            }
            Ok(OK)
        }
        Command::Solve { instance, opts, method } => {
            let inst = load_instance(&instance)?;
            let r = solvers::solve(&inst, &solve_config(&opts, method)?)?;
            report_solve(method, &r, opts.out.as_deref())
        }
        Command::Oracle { instance, opts } => {
            let inst = load_instance(&instance)?;
            let method = Method::ReformulationExhaustive;
            let r = solvers::solve(&inst, &solve_config(&opts, method)?)?;
            report_solve(method, &r, opts.out.as_deref())
        }
        Command::Check { check, file, enum_cap } => {
            let game = load_finite_game(&file, enum_cap)?;
            let report = match check {
                CheckKind::Krc => check_k_restrictive_closed(&game)?,
                CheckKind::Rc => check_restrictive_closed(&game)?,
                CheckKind::ZeroOne => zero_one_report(&game)?,
            };
            Ok(report_check(&report))
        }
        Command::Bench { config, out } => {
            let cfg = BenchConfig::from_json(&read(&config)?)?;
            let report = run_benchmark(&cfg)?;
            let mut buf = Vec::new();
            write_csv(&report, &mut buf)?;
            let text = String::from_utf8(buf).expect("CSV is UTF-8");
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
