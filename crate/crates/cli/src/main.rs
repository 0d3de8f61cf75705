//! `cavity`: parameter sweeps and datasets for the cavity electron gas.
//!
//! Exit codes: 0 success, 2 config error, 3 domain or pole error,
//! 4 eigensolver convergence error, 1 I/O failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod error;
mod output;
mod settings;
mod sweep;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use cavity_core::response::ResponseKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::commands::{EftSub, ManySub};
use crate::error::{CliError, Result};
use crate::settings::Settings;

#[derive(Parser, Debug)]
#[command(
    name = "cavity",
    version,
    about = "Cavity-coupled 2D electron gas: spectra, response, effective theory, many-mode checks"
)]
struct Cli {
    /// Config file: `key = value` lines, or a JSON document written by this tool.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Output path, `-` for stdout.
    #[arg(long, global = true, default_value = "-")]
    out: String,
    /// Sweep as var=start:stop:count[:log].
    #[arg(long, global = true)]
    sweep: Option<String>,
    /// Broadening η (rad/s).
    #[arg(long, global = true, allow_hyphen_values = true)]
    eta: Option<String>,
    /// Dimensionless cutoff Λ₀.
    #[arg(long, global = true, allow_hyphen_values = true)]
    lambda0: Option<String>,
    /// Number of cavity modes.
    #[arg(long, global = true)]
    modes: Option<String>,
    /// Switch to ratio units with this ω_p/ω.
    #[arg(long, global = true, allow_hyphen_values = true)]
    ratio: Option<String>,
    /// Collective coupling γ: a single phase row, or the mode frequency that realises it.
    #[arg(long, global = true, allow_hyphen_values = true)]
    gamma: Option<String>,
    /// Significant digits in numeric output (1 to 17).
    #[arg(long, global = true)]
    digits: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Phase label (stable, critical, unstable) over γ.
    Phase,
    /// Response function or optical conductivity over frequency.
    Response {
        #[arg(value_enum)]
        kind: KindArg,
    },
    /// Continuum effective theory.
    Eft {
        #[arg(value_enum)]
        sub: EftArg,
    },
    /// Exact many-mode diagonalization.
    Manymode {
        #[arg(value_enum)]
        sub: ManyArg,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KindArg {
    Aa,
    Ea,
    Jj,
    Ja,
    Aj,
    Sigma,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EftArg {
    Coupling,
    Mass,
    Mu,
    Casimir,
    Jellium,
    Chi,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ManyArg {
    Diag,
    LowestScan,
    CouplingRun,
}

fn settings(cli: &Cli) -> Result<Settings> {
    let mut s = Settings::default();
    if let Some(path) = &cli.config {
        s.load_file(path)?;
    }
    let flags = [
        ("eta", &cli.eta),
        ("lambda0", &cli.lambda0),
        ("modes", &cli.modes),
        ("ratio", &cli.ratio),
        ("gamma", &cli.gamma),
        ("sweep", &cli.sweep),
        ("digits", &cli.digits),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            s.apply(key, v, &format!("--{key}"), 0)?;
        }
    }
    if let Some(f) = cli.format {
        let v = match f {
            FormatArg::Csv => "csv",
            FormatArg::Json => "json",
        };
        s.apply("format", v, "--format", 0)?;
    }
    Ok(s)
}

fn run(cli: &Cli) -> Result<()> {
    let s = settings(cli)?;
    let rec = match cli.command {
        Command::Phase => commands::phase(&s)?,
        Command::Response { kind } => {
            let k = match kind {
                KindArg::Aa => ResponseKind::AA,
                KindArg::Ea => ResponseKind::EA,
                KindArg::Jj => ResponseKind::JJ,
                KindArg::Ja => ResponseKind::JA,
                KindArg::Aj => ResponseKind::AJ,
                KindArg::Sigma => ResponseKind::Sigma,
            };
            commands::response(&s, k)?
        }
        Command::Eft { sub } => commands::eft(
            &s,
            match sub {
                EftArg::Coupling => EftSub::Coupling,
                EftArg::Mass => EftSub::Mass,
                EftArg::Mu => EftSub::Mu,
                EftArg::Casimir => EftSub::Casimir,
                EftArg::Jellium => EftSub::Jellium,
                EftArg::Chi => EftSub::Chi,
            },
        )?,
        Command::Manymode { sub } => commands::manymode(
            &s,
            match sub {
                ManyArg::Diag => ManySub::Diag,
                ManyArg::LowestScan => ManySub::LowestScan,
                ManyArg::CouplingRun => ManySub::CouplingRun,
            },
        )?,
    };
    let mut buf = Vec::new();
    rec.write(&mut buf, s.format, s.digits)
        .map_err(|source| CliError::Io {
            path: cli.out.clone(),
            source,
        })?;
    let written = if cli.out == "-" {
        std::io::stdout().lock().write_all(&buf)
    } else {
        fs::write(&cli.out, &buf)
    };
    written.map_err(|source| CliError::Io {
        path: cli.out.clone(),
        source,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
