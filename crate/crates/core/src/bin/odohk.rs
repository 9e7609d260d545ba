use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use odometer_homology::cli::{execute, parse_spec_with, render, AhTarget, Command, Format, ReportOptions, SpecOverrides};
use odometer_homology::Error;

const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_INVARIANT_VIOLATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "odohk", version, about = "Invariants of odometer actions of Z, Z ⋊ Z_2 and Z × Z_2")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    format: OutputFormat,

    /// Highest homology degree reported
    #[arg(long, default_value_t = 3, global = true)]
    max_degree: usize,

    /// Horizon D for fixed-point enumeration (default d + 3)
    #[arg(long, global = true)]
    horizon: Option<usize>,

    /// Finite levels for AH certificates, comma separated
    #[arg(long, value_delimiter = ',', global = true)]
    ah_levels: Option<Vec<usize>>,

    /// Override the group of the spec document
    #[arg(long, global = true)]
    group: Option<String>,

    /// Override the depth of the spec document
    #[arg(long, global = true)]
    depth: Option<usize>,

    /// Override the tail: `explicit` or `geometric:<ratio>`
    #[arg(long, global = true)]
    tail: Option<String>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct SpecArg {
    /// Spec document: a path, `-` for stdin, or inline JSON
    spec: String,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Every invariant in one report
    Invariants(SpecArg),
    /// K-theory against homology
    HkCheck(SpecArg),
    /// Exact sequence certificates
    AhCheck {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, conflicts_with = "colimit")]
        level: Option<usize>,
        #[arg(long)]
        colimit: bool,
    },
    /// Topological freeness verdict
    Topfree(SpecArg),
    /// Closed forms against brute force
    Oracles(SpecArg),
}

fn read_spec(arg: &str) -> Result<String, Error> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return Ok(arg.to_string());
    }
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Invalid(format!("stdin: {}", e)))?;
        return Ok(s);
    }
    std::fs::read_to_string(arg).map_err(|e| Error::Invalid(format!("{}: {}", arg, e)))
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvariantViolation(_) => EXIT_INVARIANT_VIOLATION,
        _ => EXIT_INVALID_INPUT,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let (spec_arg, command) = match &cli.command {
        Cmd::Invariants(s) => (s, Command::Invariants),
        Cmd::HkCheck(s) => (s, Command::HkCheck),
        Cmd::AhCheck { spec, level, colimit } => {
            let target = match (level, colimit) {
                (Some(k), _) => AhTarget::Level(*k),
                (None, true) => AhTarget::Colimit,
                (None, false) => AhTarget::All,
            };
            (spec, Command::AhCheck(target))
        }
        Cmd::Topfree(s) => (s, Command::Topfree),
        Cmd::Oracles(s) => (s, Command::Oracles),
    };
    let overrides = SpecOverrides {
        group: cli.group.clone(),
        depth: cli.depth,
        tail: cli.tail.clone(),
    };
    let spec = parse_spec_with(&read_spec(&spec_arg.spec)?, &overrides)?;
    let options = ReportOptions {
        max_degree: cli.max_degree,
        ah_levels: cli.ah_levels.clone(),
        horizon: cli.horizon,
    };
    let output = execute(&command, &spec, &options)?;
    let format = match cli.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Text => Format::Text,
    };
    print!("{}", render(&output.document, format));
    Ok(if output.invariant_violation { EXIT_INVARIANT_VIOLATION } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("odohk: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}
