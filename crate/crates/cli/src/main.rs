//! Command-line front end for the register oscillator library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or configuration
//! error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use bosoreg::bosonic::{BosonicRegister, GateDecomposition, PhysParams, Quadrature};
use bosoreg::coherent::{coherent_series, displacement_generator_gateform, trajectory, CoherentSpec};
use bosoreg::conventions::{Conventions, Mutation};
use bosoreg::gates::Circuit;
use bosoreg::logic::EventuallyPeriodicSequence;
use bosoreg::state::{format_sig17, Sig17};
use bosoreg::verify::{algebra_check, run_suite, SuiteConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

const DEFAULT_RANK: usize = 32;

#[derive(Parser)]
#[command(name = "bosoreg", version, about = "Qubit-register oscillator toolkit")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Register rank, 2 to 64 [default: 32]
    #[arg(long, global = true)]
    rank: Option<usize>,
    #[arg(long, global = true, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, global = true, default_value_t = 1.0)]
    hbar: f64,
    /// Tolerance for `algebra-check`
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Coherent amplitude, e.g. `0.3`, `0.5i`, `1-2.5i`
    #[arg(long, global = true, allow_hyphen_values = true)]
    z: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the single-site product table and the two-site gate identities
    AlgebraCheck,
    /// Map a bit string (site 0 first) to an integer or a real number
    Map {
        bits: String,
        #[arg(long, value_enum, default_value = "computational")]
        mode: MapMode,
        /// Recurring block appended forever after the bits
        #[arg(long)]
        period: Option<String>,
    },
    /// Emit a number state or a coherent state as JSON
    State {
        #[command(subcommand)]
        kind: StateKind,
    },
    /// Emit the gate-sum form of an oscillator operator
    Decompose {
        #[arg(value_enum)]
        kind: DecomposeKind,
    },
    /// Tabulate expectation values along a coherent-state orbit
    Evolve {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, allow_hyphen_values = true)]
        t1: f64,
        /// Number of time points, both ends included
        #[arg(long, default_value_t = 101)]
        steps: usize,
    },
    /// Run the acceptance suite
    Verify {
        /// Run under a deliberately broken convention
        #[arg(long)]
        inject: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapMode {
    Computational,
    Continuum,
}

#[derive(Subcommand)]
enum StateKind {
    /// `(a⁺)ⁿ|ground)`, normalised
    Number { n: usize },
    Coherent {
        #[arg(allow_hyphen_values = true)]
        z: String,
        /// Skip the `|z|² ≤ R/4` truncation guard
        #[arg(long)]
        allow_truncation: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecomposeKind {
    Position,
    Momentum,
    Displacement,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`; a bare `i` means one.
fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {text:?}");
    let num = |t: &str| -> Result<f64, String> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(s.parse::<f64>().map_err(|_| bad())?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(
            body[..k].parse::<f64>().map_err(|_| bad())?,
            num(&body[k..])?,
        )),
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

impl RunConfig {
    fn rank(&self) -> Result<usize, Failure> {
        let rank = self.rank.unwrap_or(DEFAULT_RANK);
        if !(2..=64).contains(&rank) {
            return Err(usage(format!("--rank must lie in 2..=64, got {rank}")));
        }
        Ok(rank)
    }

    fn params(&self) -> Result<PhysParams, Failure> {
        Ok(PhysParams::new(self.alpha, self.beta, self.hbar)?)
    }

    fn z(&self) -> Result<Option<Complex64>, Failure> {
        self.z.as_deref().map(parse_complex).transpose().map_err(Failure::Usage)
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes") + "\n"
}

fn algebra_check_cmd(cfg: &RunConfig) -> Outcome {
    if cfg.tol.is_nan() || cfg.tol < 0.0 {
        return Err(usage("--tol must be non-negative"));
    }
    let groups = algebra_check(cfg.tol, &Conventions::STANDARD)?;
    let pass = groups.iter().all(|g| g.pass);
    let text = match cfg.format_or(Format::Text) {
        Format::Json => {
            #[derive(Serialize)]
            struct Report<'a> {
                pass: bool,
                tol: Sig17,
                groups: &'a [bosoreg::verify::IdentityGroup],
            }
            to_json(&Report {
                pass,
                tol: Sig17(cfg.tol),
                groups: &groups,
            })
        }
        _ => {
            let mut out = String::new();
            for g in &groups {
                let verdict = if g.pass { "PASS" } else { "FAIL" };
                out += &format!(
                    "[{verdict}] {:<22} max deviation {}\n",
                    g.name,
                    format_sig17(g.max_deviation)
                );
            }
            out
        }
    };
    if pass {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}

fn map_cmd(cfg: &RunConfig, bits: &str, mode: MapMode, period: Option<&str>) -> Outcome {
    let seq = EventuallyPeriodicSequence::parse(bits, period.unwrap_or(""))?;
    let class = seq.classify().to_string();
    let json = cfg.format_or(Format::Text) == Format::Json;
    match mode {
        MapMode::Computational => {
            if !seq.period().is_empty() {
                return Err(usage("a recurring nonzero tail has no computational index"));
            }
            let index = seq.computational_map()?.0;
            if json {
                Ok(to_json(
                    &serde_json::json!({ "mode": "computational", "value": index, "class": class }),
                ))
            } else {
                Ok(format!("{index}\n{class}\n"))
            }
        }
        MapMode::Continuum => {
            let r = seq.continuum_map();
            let rational = format!("{}/{}", r.numer(), r.denom());
            let decimal = seq.continuum_value();
            if json {
                #[derive(Serialize)]
                struct Continuum<'a> {
                    mode: &'a str,
                    rational: &'a str,
                    decimal: Sig17,
                    class: &'a str,
                }
                Ok(to_json(&Continuum {
                    mode: "continuum",
                    rational: &rational,
                    decimal: Sig17(decimal),
                    class: &class,
                }))
            } else {
                Ok(format!("{rational}\n{}\n{class}\n", format_sig17(decimal)))
            }
        }
    }
}

fn state_cmd(cfg: &RunConfig, kind: &StateKind) -> Outcome {
    let rank = cfg.rank()?;
    let params = cfg.params()?;
    match kind {
        StateKind::Number { n } => {
            let state = BosonicRegister::new(params, rank)?.number_state(*n)?;
            Ok(state.to_json() + "\n")
        }
        StateKind::Coherent { z, allow_truncation } => {
            let z = parse_complex(z).map_err(Failure::Usage)?;
            let spec = CoherentSpec::new(z, params, rank)?.with_guard(!allow_truncation);
            Ok(coherent_series(&spec)?.to_json() + "\n")
        }
    }
}

#[derive(Serialize)]
struct DecompositionDocument<'a> {
    kind: &'a str,
    full: &'a Circuit,
    reduced: &'a Circuit,
}

fn decompose_cmd(cfg: &RunConfig, kind: DecomposeKind) -> Outcome {
    let rank = cfg.rank()?;
    let params = cfg.params()?;
    let (name, d): (&str, GateDecomposition) = match kind {
        DecomposeKind::Position => (
            "position",
            BosonicRegister::new(params, rank)?.gate_decomposition(Quadrature::Position)?,
        ),
        DecomposeKind::Momentum => (
            "momentum",
            BosonicRegister::new(params, rank)?.gate_decomposition(Quadrature::Momentum)?,
        ),
        DecomposeKind::Displacement => {
            let z = cfg.z()?.ok_or_else(|| usage("decompose displacement needs --z"))?;
            (
                "displacement",
                displacement_generator_gateform(&CoherentSpec::new(z, params, rank)?)?,
            )
        }
    };
    Ok(to_json(&DecompositionDocument {
        kind: name,
        full: d.full.circuit(),
        reduced: d.reduced.circuit(),
    }))
}

fn evolve_cmd(cfg: &RunConfig, t0: f64, t1: f64, steps: usize) -> Outcome {
    if steps < 2 {
        return Err(usage("--steps must be at least 2"));
    }
    if t0.is_nan() || t1.is_nan() || t1 <= t0 {
        return Err(usage("--t1 must exceed --t0"));
    }
    let z = cfg.z()?.unwrap_or_default();
    let spec = CoherentSpec::new(z, cfg.params()?, cfg.rank()?)?;
    let times: Vec<f64> = (0..steps)
        .map(|k| t0 + (t1 - t0) * k as f64 / (steps - 1) as f64)
        .collect();
    let tr = trajectory(&spec, &times)?;
    match cfg.format_or(Format::Csv) {
        Format::Json => {
            let col = |v: &[f64]| v.iter().copied().map(Sig17).collect::<Vec<_>>();
            #[derive(Serialize)]
            struct Columns {
                t: Vec<Sig17>,
                x: Vec<Sig17>,
                p: Vec<Sig17>,
                h: Vec<Sig17>,
            }
            Ok(to_json(&Columns {
                t: col(&tr.times),
                x: col(&tr.x_exp),
                p: col(&tr.p_exp),
                h: col(&tr.h_exp),
            }))
        }
        _ => Ok(tr.to_csv()),
    }
}

fn verify_cmd(cfg: &RunConfig, inject: Option<&str>) -> Outcome {
    let mutation: Mutation = inject.map(str::parse).transpose()?.unwrap_or_default();
    if cfg.rank.is_some() {
        cfg.rank()?;
    }
    let suite = SuiteConfig {
        params: cfg.params()?,
        conv: Conventions::mutated(mutation),
        seed: cfg.seed,
        rank: cfg.rank,
    };
    let report = run_suite(&suite)?;
    let text = match cfg.format_or(Format::Text) {
        Format::Json => to_json(&report),
        _ => {
            let mut out = format!("mutation: {mutation}, seed: {}\n", cfg.seed);
            for c in &report.criteria {
                out += &c.summary_line();
                out.push('\n');
            }
            out += if report.pass {
                "verify: all criteria passed\n"
            } else {
                "verify: FAILED\n"
            };
            out
        }
    };
    if report.pass {
        Ok(text)
    } else {
        Err(Failure::Verification(text))
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), String> {
    match &cfg.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = &cli.config;
    let outcome = match &cli.command {
        Command::AlgebraCheck => algebra_check_cmd(cfg),
        Command::Map { bits, mode, period } => map_cmd(cfg, bits, *mode, period.as_deref()),
        Command::State { kind } => state_cmd(cfg, kind),
        Command::Decompose { kind } => decompose_cmd(cfg, *kind),
        Command::Evolve { t0, t1, steps } => evolve_cmd(cfg, *t0, *t1, *steps),
        Command::Verify { inject } => verify_cmd(cfg, inject.as_deref()),
    };
    let (text, code) = match outcome {
        Ok(text) => (text, ExitCode::SUCCESS),
        Err(Failure::Verification(text)) => (text, ExitCode::from(1)),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    if let Err(msg) = emit(cfg, &text) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    code
}
