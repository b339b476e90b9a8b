//! `clearvoice` command-line front end.
//!
//! Exit codes: 0 success, 1 processing failure, 2 usage or configuration
//! error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use clearvoice_core::{ChannelLayout, Preset, SampleFormat};

pub mod analyze;
pub mod batch;
pub mod error;
pub mod gen;
pub mod info;
pub mod mix;
pub mod pipeline;

pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "clearvoice", version, about = "Dialogue-enhancing downmixes of multichannel audio")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Show format, layout and levels of a WAV file.
    Info(InfoArgs),
    /// Mix one file with a preset or a custom matrix.
    Mix(MixArgs),
    /// Mix every entry of a JSON manifest.
    Batch(BatchArgs),
    /// Generate a test signal from a JSON spec.
    Gen(GenArgs),
    /// Meter one file, or compare two mixes of the same program.
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    pub input: PathBuf,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Layout override (2.0, 3.0, 5.1 or 5.1+2); must match the channel count.
    #[arg(long, value_parser = parse_layout)]
    pub layout: Option<ChannelLayout>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("matrix_source").required(true).args(["preset", "matrix"])))]
pub struct MixArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// es-stereo, ebu-stereo or es-51.
    #[arg(long, value_parser = parse_preset)]
    pub preset: Option<Preset>,
    /// JSON matrix file.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Normalization ceiling in dBFS (<= 0).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub target_peak: f64,
    /// Never rescale, even if the mix clips.
    #[arg(long)]
    pub no_normalize: bool,
    /// pcm16, pcm24, pcm32, float32 or float64.
    #[arg(long, default_value = "pcm24")]
    pub format: SampleFormat,
    /// Write the mix report JSON here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Layout override (2.0, 3.0, 5.1 or 5.1+2); must match the channel count.
    #[arg(long, value_parser = parse_layout)]
    pub layout: Option<ChannelLayout>,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    pub manifest: PathBuf,
    /// Parallel entries; defaults to the number of CPUs.
    #[arg(long, env = "CLEARVOICE_JOBS", value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
    /// Also write the summary JSON here.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub spec: PathBuf,
    pub output: PathBuf,
    #[arg(long, default_value = "pcm24")]
    pub format: SampleFormat,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub file_a: PathBuf,
    pub file_b: Option<PathBuf>,
    /// Write min/max envelope CSV; with two files, `X.csv` becomes `X.a.csv`
    /// and `X.b.csv`.
    #[arg(long)]
    pub envelope: Option<PathBuf>,
    /// Envelope bins (default: 1000, or the frame count if shorter).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub bins: Option<u64>,
    /// Layout override (2.0, 3.0, 5.1 or 5.1+2); must match the channel count.
    #[arg(long, value_parser = parse_layout)]
    pub layout: Option<ChannelLayout>,
}

fn parse_layout(s: &str) -> std::result::Result<ChannelLayout, String> {
    s.parse().map_err(|e: clearvoice_core::LayoutError| e.to_string())
}

fn parse_preset(s: &str) -> std::result::Result<Preset, String> {
    s.parse().map_err(|e: clearvoice_core::MatrixError| e.to_string())
}

/// Run a parsed command, writing normal output to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Info(args) => info::run(&args, out),
        Command::Mix(args) => mix::run(&args, out),
        Command::Batch(args) => batch::run(&args, out),
        Command::Gen(args) => gen::run(&args, out),
        Command::Analyze(args) => analyze::run(&args, out),
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn run_from<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { error::EXIT_USAGE } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub(crate) fn write_out(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::processing(format!("cannot write output: {e}")))
}
