use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::{env, fmt, fs};

use atomshift::Complex64;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

mod commands;
mod config;

/// Environment variable naming the default output directory.
const OUT_DIR_VAR: &str = "ATOMSHIFT_OUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "atomshift", version, about = "Dressed-state jumps and coherent shifts of a driven atom", args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mixing angle, splitting and jump rates for one drive amplitude
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Dressed(commands::DressedArgs),
    /// Coherent shift and jump budget of a rectangular pulse
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Shift(commands::ShiftArgs),
    /// Pulse length needed for a target shift within a jump budget
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Plan(commands::PlanArgs),
    /// Monte Carlo ensemble of dressed-state jump trajectories
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Trajectory(commands::TrajectoryArgs),
    /// Photon-pair wavefunction on a time or frequency grid
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Pairs(commands::PairsArgs),
    /// Conditional-phase gate and cat-state overlaps
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Cat(commands::CatArgs),
    /// Optical Bloch cross-check of the dressed-state predictions
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Oracle(commands::OracleArgs),
    /// Oracle cross-check over a grid of detunings and amplitudes
    #[command(args_override_self = true, allow_negative_numbers = true)]
    Sweep(commands::SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Serialize)]
pub struct Output {
    /// Artifact format; the JSON summary is always written
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output directory [default: $ATOMSHIFT_OUT_DIR, else the current directory]
    #[arg(long)]
    #[serde(skip)]
    pub out_dir: Option<PathBuf>,
    /// `key = value` file or a previous JSON summary; flags override it
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

/// Complex number given as `re` or `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cplx(pub Complex64);

impl FromStr for Cplx {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let num = |p: &str| p.parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
        match parts.as_slice() {
            [re] => Ok(Cplx(Complex64::new(num(re)?, 0.0))),
            [re, im] => Ok(Cplx(Complex64::new(num(re)?, num(im)?))),
            _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
        }
    }
}

impl Serialize for Cplx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Comma-separated list of numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct List(pub Vec<f64>);

impl FromStr for List {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(List)
    }
}

/// What a subcommand produced.
pub struct Outcome {
    pub result: Value,
    pub csv: Option<String>,
}

#[derive(Debug)]
pub struct Failure(pub String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<atomshift::Error> for Failure {
    fn from(e: atomshift::Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(e.to_string())
    }
}

fn with_config(raw: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config::find_config(&raw[1..]) else {
        return Ok(raw);
    };
    let extra = config::load(path.as_ref())?;
    let Some(sub) = raw.iter().skip(1).position(|a| !a.starts_with('-')) else {
        return Ok(raw);
    };
    let at = sub + 2;
    let mut out = raw[..at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&raw[at..]);
    Ok(out)
}

fn write_artifacts(name: &str, out: &Output, config: Value, outcome: Outcome) -> Result<(), Failure> {
    let mut summary = Map::new();
    summary.insert("command".into(), Value::from(name));
    summary.insert("config".into(), config);
    match outcome.result {
        Value::Object(m) => summary.extend(m),
        other => {
            summary.insert("result".into(), other);
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(summary))?;
    text.push('\n');

    let dir = out
        .out_dir
        .clone()
        .or_else(|| env::var_os(OUT_DIR_VAR).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)?;
    fs::write(dir.join(format!("{name}.json")), &text)?;
    if out.format == Format::Csv {
        if let Some(csv) = outcome.csv {
            fs::write(dir.join(format!("{name}.csv")), csv)?;
        }
    }
    print!("{text}");
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    macro_rules! dispatch {
        ($name:literal, $args:expr, $f:path) => {{
            let args = $args;
            let config = serde_json::to_value(&args)?;
            let outcome = $f(&args)?;
            write_artifacts($name, &args.out, config, outcome)
        }};
    }
    match cli.command {
        Command::Dressed(a) => dispatch!("dressed", a, commands::dressed),
        Command::Shift(a) => dispatch!("shift", a, commands::shift),
        Command::Plan(a) => dispatch!("plan", a, commands::plan),
        Command::Trajectory(a) => dispatch!("trajectory", a, commands::trajectory),
        Command::Pairs(a) => dispatch!("pairs", a, commands::pairs),
        Command::Cat(a) => dispatch!("cat", a, commands::cat),
        Command::Oracle(a) => dispatch!("oracle", a, commands::oracle),
        Command::Sweep(a) => dispatch!("sweep", a, commands::sweep),
    }
}

fn main() -> ExitCode {
    let raw: Vec<String> = env::args().collect();
    let argv = match with_config(raw) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
