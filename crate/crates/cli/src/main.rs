use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hocolim_cli::{parse_degrees, run, Command, Format, JobSpec};

#[derive(Parser)]
#[command(name = "hocolim", version, about = "Group homology, continuous homology of towers, and orbit spectral sequences")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// H_* of a finite group with coefficients in a module.
    GroupHomology(Opts),
    /// Limits of the homology towers of a group/module tower.
    ContinuousHomology(Opts),
    /// Homology of the orbit bicomplex as a limit over levels.
    Orbit(Opts),
    /// Orbit homology of the levelwise Eilenberg-Mac Lane input, checked against continuous homology.
    EmOrbit(Opts),
    /// Spectral sequence pages of a bicomplex, or of the orbit bicomplex at the deepest level.
    SsPages(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Table,
    Structured,
}

#[derive(Args)]
struct Opts {
    #[arg(long)]
    input: PathBuf,
    /// A single degree.
    #[arg(long, conflicts_with = "degrees", value_parser = parse_degrees)]
    degree: Option<(usize, usize)>,
    /// Inclusive range `A..B`.
    #[arg(long, value_parser = parse_degrees)]
    degrees: Option<(usize, usize)>,
    /// Use the first `I` levels of the tower.
    #[arg(long)]
    depth: Option<usize>,
    /// Maximum number of generators of any bar chain group.
    #[arg(long, default_value_t = hocolim::bar::DEFAULT_CAP)]
    cap: u64,
    /// Unnormalized (Moore) bar complex.
    #[arg(long)]
    moore: bool,
    #[arg(long, default_value_t = 3)]
    pages: usize,
    #[arg(long, value_enum, default_value_t = Fmt::Table)]
    format: Fmt,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, o) = match cli.command {
        Cmd::GroupHomology(o) => (Command::GroupHomology, o),
        Cmd::ContinuousHomology(o) => (Command::ContinuousHomology, o),
        Cmd::Orbit(o) => (Command::Orbit, o),
        Cmd::EmOrbit(o) => (Command::EmOrbit, o),
        Cmd::SsPages(o) => (Command::SsPages, o),
    };
    let job = JobSpec {
        command,
        input: o.input,
        degrees: o.degree.or(o.degrees),
        depth: o.depth,
        cap: o.cap,
        moore: o.moore,
        pages: o.pages,
        format: match o.format {
            Fmt::Table => Format::Table,
            Fmt::Structured => Format::Structured,
        },
    };
    match run(&job) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
