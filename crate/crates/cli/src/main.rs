//! `rsfusion`: command-line access to the elliptic fusion ring computations.

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use ruijsenaars_fusion::lattice::DEFAULT_SEED;
use ruijsenaars_fusion::verify::{Suite, VerifyConfig};
use ruijsenaars_fusion::{Error, ModelParams, Partition, Scalar};
use serde_json::json;

use commands::RouteArg;
use output::{encode, write_atomic, Format, Rendered};

#[derive(Parser, Debug)]
#[command(name = "rsfusion", version, about = "Elliptic Ruijsenaars eigenpolynomials and fusion rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// Number of variables.
    #[arg(long)]
    n: usize,
    /// Level; required in level-locked mode.
    #[arg(long)]
    m: Option<u32>,
    /// Coupling.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    g: f64,
    /// Elliptic nome, |p| < 1.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    p: f64,
    /// Period parameter in free mode.
    #[arg(long)]
    alpha: Option<f64>,
    /// Tie α to the level, α = 2π/(m + n g).
    #[arg(long)]
    level_locked: bool,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for the randomized operator combination.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Precision::F64)]
    precision: Precision,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Precision {
    F64,
    F32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Limits,
    Ring,
    Spectrum,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenpolynomial P_μ in the elementary symmetric basis.
    Poly {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        mu: Partition,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Littlewood–Richardson coefficients of P_λ P_μ.
    Lr {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        lam: Partition,
        #[arg(long)]
        mu: Partition,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Pieri weights ψ′ and hop coefficients for the vertical strips over λ.
    Pieri {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        lam: Partition,
        /// Strip size; all sizes when omitted.
        #[arg(long)]
        r: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Labeled joint spectrum of the truncated operators.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fusion structure constants over the level-m labels.
    Fusion {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value_t = RouteArg::Verlinde)]
        route: RouteArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// S-matrix, its inverse and the determinant check.
    Smatrix {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Property and oracle comparisons.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Restrict to one rank.
        #[arg(long)]
        n: Option<usize>,
        /// Restrict to one level.
        #[arg(long)]
        m: Option<u32>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

enum Failure {
    Usage(String),
    Compute(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

fn build_params<T: Scalar>(a: &ModelArgs, locked: bool) -> Result<ModelParams<T>, Failure> {
    let (g, p) = (T::lit(a.g), T::lit(a.p));
    if locked || a.level_locked {
        if a.alpha.is_some() {
            return Err(Failure::Usage("--alpha conflicts with level-locked mode".into()));
        }
        let m = a.m.ok_or_else(|| Failure::Usage("level-locked mode needs --m".into()))?;
        Ok(ModelParams::level_locked(a.n, m, g, p)?)
    } else {
        let alpha = a.alpha.ok_or_else(|| Failure::Usage("free mode needs --alpha (or --level-locked)".into()))?;
        Ok(ModelParams::free(a.n, T::lit(alpha), g, p)?)
    }
}

fn check_len(p: &Partition, n: usize, flag: &str) -> Result<(), Failure> {
    if p.len() != n {
        return Err(Failure::Usage(format!("--{flag} {p} has {} parts, expected {n}", p.len())));
    }
    Ok(())
}

fn run_model<T: Scalar>(command: &Command) -> Result<(Rendered, serde_json::Value, bool), Failure> {
    let (rendered, prm) = match command {
        Command::Poly { model, mu, .. } => {
            check_len(mu, model.n, "mu")?;
            let prm = build_params::<T>(model, false)?;
            (commands::poly(&prm, mu)?, prm)
        }
        Command::Lr { model, lam, mu, .. } => {
            check_len(lam, model.n, "lam")?;
            check_len(mu, model.n, "mu")?;
            let prm = build_params::<T>(model, false)?;
            (commands::lr(&prm, lam, mu)?, prm)
        }
        Command::Pieri { model, lam, r, .. } => {
            check_len(lam, model.n, "lam")?;
            if let Some(r) = r {
                if *r == 0 || *r > model.n {
                    return Err(Failure::Usage(format!("--r must lie in 1..={}", model.n)));
                }
            }
            let prm = build_params::<T>(model, false)?;
            (commands::pieri(&prm, lam, *r)?, prm)
        }
        Command::Spectrum { model, output } => {
            let prm = build_params::<T>(model, true)?;
            (commands::spectrum(&prm, output.seed)?, prm)
        }
        Command::Fusion { model, route, output } => {
            let prm = build_params::<T>(model, true)?;
            (commands::fusion(&prm, *route, output.seed)?, prm)
        }
        Command::Smatrix { model, output } => {
            let prm = build_params::<T>(model, true)?;
            (commands::smatrix(&prm, output.seed)?, prm)
        }
        Command::Verify { .. } => unreachable!("verify has no model parameters"),
    };
    let header = serde_json::to_value(prm.header()).expect("header serializes");
    Ok((rendered, header, true))
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let (name, output) = match &cli.command {
        Command::Poly { output, .. } => ("poly", output),
        Command::Lr { output, .. } => ("lr", output),
        Command::Pieri { output, .. } => ("pieri", output),
        Command::Spectrum { output, .. } => ("spectrum", output),
        Command::Fusion { output, .. } => ("fusion", output),
        Command::Smatrix { output, .. } => ("smatrix", output),
        Command::Verify { output, .. } => ("verify", output),
    };
    let (rendered, header, ok) = match &cli.command {
        Command::Verify { suite, n, m, .. } => {
            if output.precision != Precision::F64 {
                return Err(Failure::Usage("verify runs in double precision only".into()));
            }
            let mut cfg = VerifyConfig { seed: output.seed, ..VerifyConfig::default() };
            if let Some(n) = n {
                if *n < 2 {
                    return Err(Failure::Usage("--n must be at least 2".into()));
                }
                cfg.ns = vec![*n];
            }
            if let Some(m) = m {
                if *m == 0 {
                    return Err(Failure::Usage("--m must be at least 1".into()));
                }
                cfg.ms = vec![*m];
            }
            let suite = match suite {
                SuiteArg::Limits => Suite::Limits,
                SuiteArg::Ring => Suite::Ring,
                SuiteArg::Spectrum => Suite::Spectrum,
                SuiteArg::All => Suite::All,
            };
            let (rendered, ok) = commands::verify(suite, &cfg);
            (rendered, serde_json::Value::Null, ok)
        }
        other => match output.precision {
            Precision::F64 => run_model::<f64>(other)?,
            Precision::F32 => run_model::<f32>(other)?,
        },
    };
    let precision = match output.precision {
        Precision::F64 => "f64",
        Precision::F32 => "f32",
    };
    let envelope = Rendered {
        json: json!({
            "command": name,
            "params": header,
            "precision": precision,
            "seed": output.seed,
            "result": rendered.json,
        }),
        table: rendered.table,
    };
    let bytes = encode(&envelope, output.format).map_err(Failure::Io)?;
    match &output.out {
        Some(path) => write_atomic(path, &bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(&bytes).map_err(|e| Failure::Io(e.to_string()))?,
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => Cli::command().error(ErrorKind::ValueValidation, msg).exit(),
        Err(Failure::Compute(Error::InvalidParams(msg))) => {
            Cli::command().error(ErrorKind::ValueValidation, format!("InvalidParams: {msg}")).exit()
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
