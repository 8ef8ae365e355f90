use std::ffi::OsString;
use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use bvpcf_core::DEFAULT_MAX_BITS;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Expand,
    Predict,
    Verify,
    Scan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Expand => "expand",
            Command::Predict => "predict",
            Command::Verify => "verify",
            Command::Scan => "scan",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Text,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        }
    }
}

/// A validated invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub k: RangeInclusive<u64>,
    pub m: RangeInclusive<u32>,
    pub terms: usize,
    pub precision_cap: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

pub const MIN_PRECISION_CAP: u64 = 64;
pub const DEFAULT_TERMS: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "bvpcf", version, about = "Certified continued fractions of k^(1/m) and partial quotient analysis")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// List partial quotients and convergents.
    Expand(CommonArgs),
    /// Predict each b_{n+1} from H_n and A_n and compare with the exact value.
    Predict(CommonArgs),
    /// Check the remainder, window and floor-formula claims index by index.
    Verify(CommonArgs),
    /// Verify over ranges of k and m and collect every violation.
    Scan(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Radicand.
    #[arg(long, conflicts_with = "k_range")]
    k: Option<u64>,
    /// Inclusive radicand range LO..HI.
    #[arg(long = "k-range", value_name = "LO..HI", value_parser = parse_range::<u64>)]
    k_range: Option<Span<u64>>,
    /// Root degree.
    #[arg(long, conflicts_with = "m_range")]
    m: Option<u32>,
    /// Inclusive degree range LO..HI.
    #[arg(long = "m-range", value_name = "LO..HI", value_parser = parse_range::<u32>)]
    m_range: Option<Span<u32>>,
    /// Largest index n.
    #[arg(long, default_value_t = DEFAULT_TERMS)]
    terms: usize,
    /// Hard cap on the bits of alpha used by any enclosure.
    #[arg(long = "precision-cap", default_value_t = DEFAULT_MAX_BITS)]
    precision_cap: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Span<T> {
    lo: T,
    hi: T,
}

fn parse_range<T>(s: &str) -> Result<Span<T>, String>
where
    T: std::str::FromStr + PartialOrd + Copy + fmt::Display,
    T::Err: fmt::Display,
{
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let lo: T = lo.trim().parse().map_err(|e| format!("bad lower bound {lo:?}: {e}"))?;
    let hi: T = hi.trim().parse().map_err(|e| format!("bad upper bound {hi:?}: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok(Span { lo, hi })
}

fn pick<T: Copy>(single: Option<T>, span: Option<Span<T>>, flag: &str) -> Result<RangeInclusive<T>, CliError> {
    match (single, span) {
        (Some(v), None) => Ok(v..=v),
        (None, Some(s)) => Ok(s.lo..=s.hi),
        _ => Err(CliError::InvalidConfig(format!("exactly one of --{flag} and --{flag}-range is required"))),
    }
}

/// Parses a full argument vector, program name first.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(CliError::Usage)?;
    let (command, args) = match cli.command {
        Sub::Expand(a) => (Command::Expand, a),
        Sub::Predict(a) => (Command::Predict, a),
        Sub::Verify(a) => (Command::Verify, a),
        Sub::Scan(a) => (Command::Scan, a),
    };
    let config = RunConfig {
        command,
        k: pick(args.k, args.k_range, "k")?,
        m: pick(args.m, args.m_range, "m")?,
        terms: args.terms,
        precision_cap: args.precision_cap,
        format: args.format,
        out: args.out,
    };
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.terms < 1 {
            return Err(CliError::InvalidConfig("--terms must be at least 1".into()));
        }
        if self.precision_cap < MIN_PRECISION_CAP {
            return Err(CliError::InvalidConfig(format!("--precision-cap must be at least {MIN_PRECISION_CAP} bits")));
        }
        if self.k.is_empty() || self.m.is_empty() {
            return Err(CliError::InvalidConfig("ranges must be non-empty".into()));
        }
        if *self.m.start() < 2 {
            return Err(CliError::InvalidConfig("root degree must be at least 2".into()));
        }
        Ok(())
    }
}
