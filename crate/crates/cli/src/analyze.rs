//! Metering and side-by-side comparison of mixes, e.g. a regular downmix
//! against the Enhanced Speech mix of the same program.

use std::io::Write;
use std::path::{Path, PathBuf};

use clearvoice_core::{waveform_envelope, AudioClip, Dbfs, Envelope, PerChannel};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::info::{load, FileSummary};
use crate::pipeline::write_file;
use crate::{write_out, AnalyzeArgs};

pub const ANALYSIS_SCHEMA: u32 = 1;
const DEFAULT_BINS: usize = 1000;

#[derive(Debug, Serialize)]
pub struct LevelDelta {
    /// Second file minus first file, per channel.
    pub sample_peak_db: PerChannel<Dbfs>,
    pub rms_db: PerChannel<Dbfs>,
}

#[derive(Debug, Serialize)]
pub struct EnvelopeComparison {
    pub bins: usize,
    /// Bins where the second file's largest absolute sample does not exceed
    /// the first file's.
    pub bins_second_not_louder: PerChannel<usize>,
}

#[derive(Debug, Serialize)]
pub struct Analysis {
    pub schema: u32,
    pub files: Vec<FileSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<LevelDelta>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub envelopes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub envelope_comparison: Option<EnvelopeComparison>,
}

fn db_delta(a: Dbfs, b: Dbfs) -> Dbfs {
    if a.0 == b.0 {
        // Covers two silent channels, where inf - inf would be NaN.
        Dbfs(0.0)
    } else {
        Dbfs(b.0 - a.0)
    }
}

fn per_channel_delta(a: &PerChannel<Dbfs>, b: &PerChannel<Dbfs>) -> PerChannel<Dbfs> {
    PerChannel::new(
        a.layout(),
        a.values().iter().zip(b.values()).map(|(&x, &y)| db_delta(x, y)).collect(),
    )
}

/// `dir/mix.csv` -> `dir/mix.a.csv`
fn suffixed(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

fn envelope_of(clip: &AudioClip, bins: Option<u64>) -> Result<Envelope> {
    let bins = match bins {
        Some(b) => usize::try_from(b).map_err(CliError::usage)?,
        None => DEFAULT_BINS.min(clip.frame_count()),
    };
    waveform_envelope(clip, bins).map_err(CliError::processing)
}

fn abs_peak(bin: (f64, f64)) -> f64 {
    bin.0.abs().max(bin.1.abs())
}

pub fn run(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<()> {
    let a = load(&args.file_a, args.layout)?;
    let b = match &args.file_b {
        Some(path) => Some(load(path, args.layout)?),
        None => None,
    };

    let mut files = vec![FileSummary::new(&args.file_a, &a)];
    let mut delta = None;
    if let (Some(b), Some(path_b)) = (&b, &args.file_b) {
        if a.clip.sample_rate() != b.clip.sample_rate() || a.clip.frame_count() != b.clip.frame_count() {
            return Err(CliError::processing(format!(
                "cannot compare {} ({} frames at {} Hz) with {} ({} frames at {} Hz): duration and sample rate must match",
                args.file_a.display(),
                a.clip.frame_count(),
                a.clip.sample_rate(),
                path_b.display(),
                b.clip.frame_count(),
                b.clip.sample_rate()
            )));
        }
        let summary_b = FileSummary::new(path_b, b);
        if a.clip.layout() == b.clip.layout() {
            delta = Some(LevelDelta {
                sample_peak_db: per_channel_delta(
                    &files[0].meters.sample_peak_dbfs,
                    &summary_b.meters.sample_peak_dbfs,
                ),
                rms_db: per_channel_delta(&files[0].meters.rms_dbfs, &summary_b.meters.rms_dbfs),
            });
        }
        files.push(summary_b);
    }

    let mut envelopes = Vec::new();
    let mut comparison = None;
    if let Some(path) = &args.envelope {
        let env_a = envelope_of(&a.clip, args.bins)?;
        match &b {
            None => {
                write_file(path, env_a.to_csv().as_bytes())?;
                envelopes.push(path.display().to_string());
            }
            Some(b) => {
                let env_b = envelope_of(&b.clip, args.bins)?;
                let (pa, pb) = (suffixed(path, "a"), suffixed(path, "b"));
                write_file(&pa, env_a.to_csv().as_bytes())?;
                write_file(&pb, env_b.to_csv().as_bytes())?;
                envelopes.push(pa.display().to_string());
                envelopes.push(pb.display().to_string());
                if env_a.layout() == env_b.layout() {
                    let counts = env_a
                        .channels()
                        .iter()
                        .zip(env_b.channels())
                        .map(|(ca, cb)| {
                            ca.iter()
                                .zip(cb)
                                .filter(|(x, y)| abs_peak(**y) <= abs_peak(**x))
                                .count()
                        })
                        .collect();
                    comparison = Some(EnvelopeComparison {
                        bins: env_a.bin_count(),
                        bins_second_not_louder: PerChannel::new(env_a.layout(), counts),
                    });
                }
            }
        }
    }

    let analysis = Analysis {
        schema: ANALYSIS_SCHEMA,
        files,
        delta,
        envelopes,
        envelope_comparison: comparison,
    };
    let mut text = serde_json::to_string_pretty(&analysis).expect("analysis serializes");
    text.push('\n');
    write_out(out, &text)
}
