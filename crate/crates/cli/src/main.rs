use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jacgb_core::roots::DEFAULT_SEED;
use jacgb_core::run::{run, Command, Format, RunConfig};
use jacgb_core::verify::DEFAULT_TOL;
use num_complex::Complex64;

/// Groebner basis and solution set of the cube-root Laurent coefficient system.
#[derive(Parser, Debug)]
#[command(name = "jacgb", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Emit the equations E_1 … E_{m+1}.
    System(Common),
    /// Emit the triangular basis ~E_k, the remainders R_k and the λ tables.
    Groebner(Common),
    /// Check Buchberger's criterion for E_1 … E_{m-1}; nonzero exit on failure.
    CheckGb(Common),
    /// Enumerate solution branches.
    Solve(Common),
    /// Check every branch numerically; nonzero exit if a count bound fails.
    Verify(Common),
    /// Print ~E_1 … ~E_5 (m defaults to 10).
    Table(Common),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct Common {
    /// Exponent m; must satisfy 3∤m>3.
    #[arg(long)]
    m: Option<u32>,

    #[arg(long, value_enum, conflicts_with_all = ["json", "text"])]
    format: Option<FormatArg>,

    /// Shorthand for --format json.
    #[arg(long, conflicts_with = "text")]
    json: bool,

    /// Shorthand for --format text.
    #[arg(long)]
    text: bool,

    /// Sample value of y as `re` or `re,im` (repeatable).
    #[arg(long = "y-sample", value_parser = parse_complex, allow_hyphen_values = true)]
    y_sample: Vec<Complex64>,

    /// Residual and root-finding tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Worker threads.
    #[arg(long, env = "JACGB_THREADS")]
    threads: Option<usize>,

    /// Seed for the root finder's starting points.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Write the document to this file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,

    /// check-gb: reduce every S-pair, including coprime ones.
    #[arg(long)]
    full: bool,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parse = |p: &str| {
        p.trim()
            .parse::<f64>()
            .map_err(|e| format!("invalid number `{p}`: {e}"))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse(re)?, parse(im)?)),
        None => Ok(Complex64::new(parse(s)?, 0.0)),
    }
}

fn config(command: Command, c: Common) -> RunConfig {
    let format = match (c.format, c.json, c.text) {
        (Some(FormatArg::Json), _, _) | (None, true, _) => Some(Format::Json),
        (Some(FormatArg::Text), _, _) | (None, _, true) => Some(Format::Text),
        _ => None,
    };
    RunConfig {
        command,
        m: c.m,
        y_samples: c.y_sample,
        tol: c.tol,
        format,
        output_path: c.output,
        threads: c.threads,
        seed: c.seed,
        full: c.full,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.command {
        Cmd::System(c) => config(Command::System, c),
        Cmd::Groebner(c) => config(Command::Groebner, c),
        Cmd::CheckGb(c) => config(Command::CheckGb, c),
        Cmd::Solve(c) => config(Command::Solve, c),
        Cmd::Verify(c) => config(Command::Verify, c),
        Cmd::Table(c) => config(Command::Table, c),
    };
    let out = run(&cfg);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(u8::try_from(out.exit_code).unwrap_or(1))
}
