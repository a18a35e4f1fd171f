//! `bincue`: generate test signals, simulate rig captures, analyze binaural
//! cues and compare rigs against a baseline.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bincue",
    version,
    about = "Binaural cue simulation and analysis"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Sample rate for generated and simulated audio, in Hz.
    #[arg(long, global = true, default_value_t = 48_000)]
    sample_rate: u32,
    /// Air temperature in degrees Celsius.
    #[arg(
        long = "temp",
        global = true,
        default_value_t = 20.0,
        allow_negative_numbers = true
    )]
    temperature_c: f64,
    /// Seed for noise generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Leave the timestamp out of reports so reruns are byte-identical.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Output path; each command has its own default.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a test signal to a mono WAV file.
    Generate {
        kind: SignalKind,
        #[arg(long, default_value_t = 5.0)]
        seconds: f64,
        /// Sine frequency in Hz.
        #[arg(long, default_value_t = 1000.0, allow_negative_numbers = true)]
        freq: f64,
        /// Sine peak amplitude, 0 to 1.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        amplitude: f64,
        /// Gate pink or sine to a rectangular burst of this length at the
        /// start, silence after (1 s when given without a value).
        #[arg(long, num_args = 0..=1, default_missing_value = "1")]
        burst: Option<f64>,
        /// Impulse position in samples.
        #[arg(long, default_value_t = 0)]
        offset: usize,
        #[arg(long, value_enum, default_value_t = Encoding::Float32)]
        encoding: Encoding,
    },
    /// Measure ITD and ILD of a stereo capture (left = near ear).
    Analyze {
        input: PathBuf,
        #[arg(long, default_value_t = 8192)]
        fft_size: usize,
        #[arg(long, default_value_t = 0.5)]
        overlap: f64,
        #[arg(long, value_enum, default_value_t = WeightingArg::None)]
        weighting: WeightingArg,
        /// Octave centres for the ILD table, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = bincue::analysis::OCTAVE_CENTERS_HZ)]
        bands: Vec<f64>,
        /// CSV of the transfer function; defaults to the JSON path with a .csv extension.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Simulate a rig capture of a source at an azimuth on the left.
    Simulate {
        /// Preset name (human, full-dummy, semi-dummy, jecklin, ortf) or config file.
        #[arg(long)]
        rig: String,
        /// Source azimuth in degrees, 0 (front) to 90 (left).
        #[arg(long, allow_negative_numbers = true)]
        azimuth: f64,
        /// Mono WAV to play, or `pink` for built-in pink noise.
        #[arg(long, default_value = "pink")]
        signal: String,
        /// Length of the built-in pink noise.
        #[arg(long, default_value_t = 10.0)]
        seconds: f64,
    },
    /// Binauralize a mono WAV at an azimuth (positive = left).
    Render {
        input: PathBuf,
        /// Azimuth in degrees, -90 to 90.
        #[arg(long, allow_negative_numbers = true)]
        azimuth: f64,
        #[arg(long, default_value = "human")]
        rig: String,
        /// Output gain in dB, at most 0.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        gain_db: f64,
    },
    /// Compare analysis reports against a baseline report.
    Compare {
        baseline: PathBuf,
        #[arg(required = true)]
        candidates: Vec<PathBuf>,
        /// CSV table; defaults to the JSON path with a .csv extension.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SignalKind {
    Pink,
    Sine,
    Impulse,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Encoding {
    Pcm16,
    Pcm24,
    Float32,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WeightingArg {
    None,
    Phat,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bincue: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
