//! `arccoord`: spines, widths, Poisson structures and flat surfaces from
//! JSON surface files.

mod commands;
mod config;
mod error;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arccoord::SurfaceFile;
use clap::{Args, Parser, Subcommand};

use commands::BivectorKind;
use config::{Format, RunConfig};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "arccoord", version, about = "Arc-system coordinates on bordered hyperbolic surfaces")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Newton residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Widths within this of zero count as zero when reading off a spine.
    #[arg(long, global = true, default_value_t = arccoord::spine::ZERO_WIDTH_TOLERANCE)]
    zero_tol: f64,
    /// Flip cap for spine searches (default 10·N²).
    #[arg(long, global = true)]
    max_flips: Option<usize>,
    #[arg(long, global = true, default_value_t = 100)]
    max_iterations: usize,
    /// Relative finite-difference step.
    #[arg(long, global = true, default_value_t = arccoord::poisson::GRADIENT_STEP)]
    fd_step: f64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Height of the cylinders drawn in SVG output, in flat units.
    #[arg(long, global = true, default_value_t = 1.0)]
    truncation_height: f64,
    /// Write output here instead of stdout. With a directory input this is
    /// the output directory.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Flip to the spine of a surface given by a-lengths.
    Spine { input: PathBuf },
    /// Find a-lengths on a maximal system realizing per-arc widths.
    SolveWidths { input: PathBuf },
    /// Poisson bivector of a surface, or its combinatorial limit.
    Poisson {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = BivectorKind::Wp)]
        kind: BivectorKind,
    },
    /// Deviation of the normalized bivector from its combinatorial limit.
    LimitScan {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [10.0, 100.0, 1000.0])]
        totals: Vec<f64>,
        /// Solve every total from scratch, in parallel.
        #[arg(long)]
        cold: bool,
    },
    /// Coordinates along the family with fixed projective widths.
    Interpolate {
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = [1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0])]
        totals: Vec<f64>,
        #[arg(long)]
        cold: bool,
    },
    /// Flat surface glued from a weighted ribbon graph.
    Strebel { input: PathBuf },
    /// Random maximal system with random a-lengths, seeded by --seed.
    Sample {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        boundary: usize,
        #[arg(long, default_value_t = 0.5)]
        lo: f64,
        #[arg(long, default_value_t = 3.0)]
        hi: f64,
    },
}

impl Command {
    fn input(&self) -> Option<&Path> {
        match self {
            Command::Spine { input }
            | Command::SolveWidths { input }
            | Command::Poisson { input, .. }
            | Command::LimitScan { input, .. }
            | Command::Interpolate { input, .. }
            | Command::Strebel { input } => Some(input),
            Command::Sample { .. } => None,
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::LimitScan { .. } | Command::Interpolate { .. } => Format::Csv,
            _ => Format::Json,
        }
    }

    fn cold(&self) -> bool {
        matches!(self, Command::LimitScan { cold: true, .. } | Command::Interpolate { cold: true, .. })
    }
}

fn run_one(cmd: &Command, cfg: &RunConfig, surface: Option<&SurfaceFile>) -> Result<String, CliError> {
    let file = || surface.ok_or_else(|| CliError::Input("missing input".into()));
    match cmd {
        Command::Spine { .. } => commands::spine(file()?, cfg),
        Command::SolveWidths { .. } => commands::solve_widths(file()?, cfg),
        Command::Poisson { kind, .. } => commands::poisson(file()?, *kind, cfg),
        Command::LimitScan { totals, .. } => commands::limit_scan(file()?, totals, cfg),
        Command::Interpolate { totals, .. } => commands::interpolate(file()?, totals, cfg),
        Command::Strebel { .. } => commands::strebel(file()?, cfg),
        Command::Sample { genus, boundary, lo, hi } => commands::sample(*genus, *boundary, *lo, *hi, cfg),
    }
}

fn read_surface(path: &Path) -> Result<SurfaceFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Svg => "svg",
    }
}

/// Runs the command on every `*.json` file of `dir`, one thread per file,
/// writing `<stem>.<ext>` into `out_dir`. Returns the worst exit code.
fn run_batch(cmd: &Command, cfg: &RunConfig, dir: &Path, out_dir: &Path) -> Result<u8, CliError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    std::fs::create_dir_all(out_dir)?;
    let codes: Vec<u8> = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .iter()
            .map(|path| {
                scope.spawn(move || {
                    let out = read_surface(path).and_then(|s| run_one(cmd, cfg, Some(&s)));
                    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
                    match out {
                        Ok(text) => {
                            let target = out_dir.join(format!("{stem}.{}", extension(cfg.format)));
                            match std::fs::write(&target, text) {
                                Ok(()) => 0,
                                Err(e) => {
                                    eprintln!("{}: {e}", target.display());
                                    error::EXIT_PARSE
                                }
                            }
                        }
                        Err(e) => {
                            eprintln!("{}: {e}", path.display());
                            e.exit_code()
                        }
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or(error::EXIT_NUMERIC)).collect()
    });
    log::info!("processed {} files", codes.len());
    Ok(codes.into_iter().max().unwrap_or(0))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let g = &cli.global;
    let cfg = RunConfig {
        newton_tol: g.tol,
        flip_zero_tol: g.zero_tol,
        fd_step: g.fd_step,
        max_flips: g.max_flips,
        max_iterations: g.max_iterations,
        format: g.format.unwrap_or(cli.command.default_format()),
        seed: g.seed,
        truncation_height: g.truncation_height,
        cold_start: cli.command.cold(),
    }
    .validate()?;
    match cli.command.input() {
        Some(dir) if dir.is_dir() => {
            let out_dir = g
                .output
                .as_deref()
                .ok_or_else(|| CliError::Input("a directory input needs --output <dir>".into()))?;
            run_batch(&cli.command, &cfg, dir, out_dir)
        }
        input => {
            let surface = input.map(read_surface).transpose()?;
            let text = run_one(&cli.command, &cfg, surface.as_ref())?;
            match &g.output {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ARCCOORD_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
