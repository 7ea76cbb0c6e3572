use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sga_core::corpus::{self, ActionBounds, UltragraphBounds};
use sga_core::ideals;
use sga_core::io::{Instance, InstanceFile};
use sga_core::report;
use sga_core::verify::{self, Suite, VerifyOptions};
use sga_core::PrimeField;

#[derive(Parser)]
#[command(name = "sga", version, about = "Partial actions of finite groupoids and their skew groupoid rings")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Groupoid,
    Action,
    Ultragraph,
}

#[derive(Clone, Copy, ValueEnum)]
enum UltraCheck {
    K,
    Recurrent,
}

#[derive(clap::Args)]
struct RingArgs {
    /// Prime field order.
    #[arg(long, default_value_t = 2)]
    field: u32,
    /// Ideal-enumeration cap on the ring dimension (overrides SGA_MAX_DIM).
    #[arg(long)]
    max_dim: Option<usize>,
}

impl RingArgs {
    fn resolve(&self) -> Result<(PrimeField, usize), Failure> {
        let field = PrimeField::new(self.field)?;
        Ok((field, self.max_dim.unwrap_or_else(|| ideals::cap_for(field.p()))))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance file against the axioms.
    Validate { path: PathBuf },
    /// Property dossier of an instance.
    Report {
        path: PathBuf,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// All two-sided ideals of the skew groupoid ring.
    Ideals {
        path: PathBuf,
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Machine verification of the structural theorems; exits 1 on any failure.
    Theorems {
        path: PathBuf,
        #[arg(long, default_value = "all", value_parser = Suite::NAMES)]
        suite: String,
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = 12)]
        max_loop_len: usize,
        /// Include per-check wall-clock times (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Condition (K) or loop recurrence for an ultragraph.
    Ultragraph {
        path: PathBuf,
        #[arg(long, value_enum)]
        check: UltraCheck,
        #[arg(long, default_value_t = 12)]
        max_loop_len: usize,
    },
    /// Generate a random instance file.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        points: usize,
        #[arg(long, default_value_t = 4)]
        morphisms: usize,
        /// Upper bound on the skew ring dimension.
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long, default_value_t = 4)]
        vertices: usize,
        #[arg(long, default_value_t = 6)]
        edges: usize,
    },
}

/// An error with its exit code: 1 for domain errors, 2 for I/O.
struct Failure {
    code: u8,
    message: String,
}

impl From<sga_core::Error> for Failure {
    fn from(e: sga_core::Error) -> Failure {
        Failure { code: 1, message: e.to_string() }
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })?;
    Ok(InstanceFile::parse(&text)?.validate()?)
}

fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).unwrap(),
        Format::Text => {
            let mut lines = Vec::new();
            flatten("", value, &mut lines);
            lines.join("\n")
        }
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<String>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(a) if a.iter().any(|v| v.is_object()) => {
            a.iter().enumerate().for_each(|(i, v)| flatten(&key(&i.to_string()), v, out))
        }
        Value::String(s) => out.push(format!("{prefix}: {s}")),
        v => out.push(format!("{prefix}: {v}")),
    }
}

fn run(cli: &Cli) -> Result<(Value, u8), Failure> {
    match &cli.command {
        Command::Validate { path } => {
            let inst = load(path)?;
            Ok((json!({"valid": true, "kind": inst.kind(), "fingerprint": inst.fingerprint()}), 0))
        }
        Command::Report { path, ring } => {
            let (field, cap) = ring.resolve()?;
            Ok((report::dossier(&load(path)?, field, cap)?, 0))
        }
        Command::Ideals { path, ring } => {
            let (field, cap) = ring.resolve()?;
            match load(path)? {
                Instance::Action(a) => Ok((report::ideal_listing(&a, field, cap)?, 0)),
                other => Err(Failure { code: 1, message: format!("ideals need an action instance, got {}", other.kind()) }),
            }
        }
        Command::Theorems { path, suite, ring, max_loop_len, timings } => {
            let (field, cap) = ring.resolve()?;
            let inst = load(path)?;
            let opts = VerifyOptions { cap, max_loop_len: *max_loop_len, timings: *timings, ..VerifyOptions::new(field) };
            let rep = verify::run_suite(&inst, suite.parse()?, &opts);
            let code = u8::from(!rep.passed());
            Ok((serde_json::to_value(&rep).unwrap(), code))
        }
        Command::Ultragraph { path, check, max_loop_len } => match load(path)? {
            Instance::Ultragraph(u) => Ok(match check {
                UltraCheck::K => {
                    let loops: serde_json::Map<String, Value> = u
                        .condition_k_report()
                        .into_iter()
                        .map(|(v, c)| (v, serde_json::to_value(c).unwrap()))
                        .collect();
                    (json!({"condition_K": u.condition_k(), "simple_loops": loops}), 0)
                }
                UltraCheck::Recurrent => {
                    let r = u.check_kr(*max_loop_len);
                    let code = u8::from(!r.consistent);
                    (serde_json::to_value(r).unwrap(), code)
                }
            }),
            other => Err(Failure { code: 1, message: format!("expected an ultragraph instance, got {}", other.kind()) }),
        },
        Command::Gen { kind, seed, points, morphisms, max_dim, vertices, edges } => {
            let bounds = ActionBounds { max_points: *points, max_morphisms: *morphisms, max_dim: *max_dim };
            let inst = match kind {
                Kind::Action => Instance::Action(corpus::random_instance(*seed, bounds)?),
                Kind::Groupoid => {
                    Instance::Groupoid(corpus::random_instance(*seed, bounds)?.groupoid().clone())
                }
                Kind::Ultragraph => Instance::Ultragraph(corpus::random_ultragraph(
                    *seed,
                    UltragraphBounds { vertices: *vertices, edges: *edges },
                )?),
            };
            Ok((serde_json::to_value(inst.to_file()).unwrap(), 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((value, code)) => {
            // Instance files are always JSON so that they can be read back.
            let format = if matches!(cli.command, Command::Gen { .. }) { Format::Json } else { cli.format };
            println!("{}", render(&value, format));
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
