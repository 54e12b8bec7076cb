//! Command-line front end for the modatlas library.

mod commands;
mod json;

use clap::{Parser, Subcommand, ValueEnum};
use modatlas::error::Error;
use num_complex::Complex64;
use serde_json::Value;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "modatlas", version, about = "Eisenstein series, polymorphic maps and critical-point atlases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate E2, E4, E6, Δ or J at a point.
    Eval {
        #[arg(long, value_enum, ignore_case = true)]
        form: FormArg,
        #[arg(long, value_parser = parse_tau, allow_hyphen_values = true)]
        tau: Complex64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Evaluate s4, s6, s2+, s2- or the pair {s2+, s2-}.
    Map {
        #[arg(long = "fn", value_parser = parse_map)]
        map: MapArg,
        #[arg(long, value_parser = parse_tau, allow_hyphen_values = true)]
        tau: Complex64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Count and locate critical points of E2, E4 or E6 on tiles of the V tessellation.
    Critical {
        #[arg(long, value_enum, ignore_case = true)]
        form: CriticalArg,
        #[arg(long, conflicts_with = "depth", required_unless_present = "depth")]
        tile: Option<String>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = modatlas::critical::DEFAULT_TRUNCATION)]
        truncate: f64,
        #[arg(long, default_value_t = modatlas::critical::DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: modatlas::verify::Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        strict: bool,
    },
    /// Trace the preimage of a real interval under s4, s6 or s2+.
    Locus {
        #[arg(long = "fn", value_parser = parse_locus_map)]
        map: modatlas::polymorphic::MapKey,
        #[arg(long, value_parser = parse_interval)]
        interval: modatlas::locus::Interval,
        #[arg(long, value_parser = parse_tau, allow_hyphen_values = true)]
        start: Complex64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 2000)]
        max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the tiles of the T or V tessellation up to a word depth.
    Tessellate {
        #[arg(long, value_enum, ignore_case = true)]
        family: FamilyArg,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormArg {
    E2,
    E4,
    E6,
    Delta,
    J,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CriticalArg {
    E2,
    E4,
    E6,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FamilyArg {
    T,
    V,
}

#[derive(Clone, Copy, Debug)]
enum MapArg {
    Single(modatlas::polymorphic::MapKey),
    Pair,
}

fn parse_tau(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|_| format!("bad real part {re:?}"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part {im:?}"))?;
    if !re.is_finite() || !(im > 0.0) || !im.is_finite() {
        return Err(format!("{s:?} is not in the upper half-plane"));
    }
    Ok(Complex64::new(re, im))
}

fn parse_map(s: &str) -> Result<MapArg, String> {
    if s == "s2pair" {
        return Ok(MapArg::Pair);
    }
    s.parse().map(MapArg::Single)
}

fn parse_locus_map(s: &str) -> Result<modatlas::polymorphic::MapKey, String> {
    use modatlas::polymorphic::MapKey;
    match s.parse()? {
        MapKey::S2Minus => Err("locus supports s4, s6 and s2+".into()),
        k => Ok(k),
    }
}

fn parse_suite(s: &str) -> Result<modatlas::verify::Suite, String> {
    s.parse()
}

fn parse_interval(s: &str) -> Result<modatlas::locus::Interval, String> {
    s.parse()
}

/// Why a command did not produce a result.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Numerical(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        if e.is_invalid_input() {
            Failure::Invalid(e.to_string())
        } else {
            Failure::Numerical(e.to_string())
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Numerical(_) | Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Numerical(m) | Failure::Io(m) => m,
        }
    }
}

/// What a command hands back for the envelope.
pub struct Outcome {
    pub inputs: Value,
    pub results: Value,
    pub residuals: Value,
    /// 0, or 1 when a verification check failed.
    pub code: u8,
    /// Rows for a CSV file in place of the JSON envelope.
    pub csv: Option<Vec<Vec<String>>>,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("MODATLAS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| Failure::Invalid(format!("MODATLAS_THREADS={raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Numerical(e.to_string()))
}

fn name_of(c: &Command) -> &'static str {
    match c {
        Command::Eval { .. } => "eval",
        Command::Map { .. } => "map",
        Command::Critical { .. } => "critical",
        Command::Verify { .. } => "verify",
        Command::Locus { .. } => "locus",
        Command::Tessellate { .. } => "tessellate",
    }
}

fn dispatch(c: &Command) -> Result<Outcome, Failure> {
    match c {
        Command::Eval { form, tau, tol } => commands::eval(*form, *tau, *tol),
        Command::Map { map, tau, tol } => commands::map(*map, *tau, *tol),
        Command::Critical { form, tile, depth, truncate, grid, tol } => commands::critical(*form, tile.as_deref(), *depth, *truncate, *grid, *tol),
        Command::Verify { suite, seed, strict } => Ok(commands::verify(*suite, *seed, *strict)),
        Command::Locus { map, interval, start, step, max, out } => commands::locus(*map, *interval, *start, *step, *max, out.is_some()),
        Command::Tessellate { family, depth, .. } => commands::tessellate(*family, *depth),
    }
}

fn out_path(c: &Command) -> Option<&PathBuf> {
    match c {
        Command::Locus { out, .. } | Command::Tessellate { out, .. } => out.as_ref(),
        _ => None,
    }
}

fn write_csv(path: &PathBuf, rows: &[Vec<String>]) -> Result<(), Failure> {
    let io = |e: csv::Error| Failure::Io(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn run(argv: &[String]) -> Result<u8, Failure> {
    let started = Instant::now();
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                print!("{e}");
                return Ok(0);
            }
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            return Err(Failure::Invalid(line.to_string()));
        }
    };
    configure_threads()?;
    let outcome = dispatch(&cli.command)?;
    let path = out_path(&cli.command);
    if let (Some(rows), Some(path)) = (&outcome.csv, path) {
        write_csv(path, rows)?;
        return Ok(outcome.code);
    }
    let envelope = json::object([
        ("command", Value::String(name_of(&cli.command).into())),
        ("argv", Value::Array(argv.iter().skip(1).cloned().map(Value::String).collect())),
        ("inputs", outcome.inputs),
        ("results", outcome.results),
        ("residuals", outcome.residuals),
        ("version", Value::String(format!("modatlas {}", env!("CARGO_PKG_VERSION")))),
        ("timing", json::object([("elapsed_seconds", json::real(started.elapsed().as_secs_f64()))])),
    ]);
    let text = json::render(&envelope);
    match path {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    match run(&argv) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("modatlas: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
