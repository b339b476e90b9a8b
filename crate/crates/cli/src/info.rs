use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use clearvoice_core::{decode_wav, ChannelLayout, DecodedWav, MeterSet};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::{write_out, InfoArgs};

const NOT_ELIGIBLE: &str =
    "not eligible for Enhanced Speech: only multichannel input with a center channel (3.0, 5.1, 5.1+2) can be converted";

/// Read and decode a file for inspection. Any failure is a usage-class error.
pub(crate) fn load(path: &Path, layout: Option<ChannelLayout>) -> Result<DecodedWav> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    decode_wav(&bytes, layout).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

#[derive(Debug, Serialize)]
pub struct FileSummary {
    pub path: String,
    pub format: String,
    pub sample_rate: u32,
    pub channels: usize,
    pub layout: ChannelLayout,
    pub frames: usize,
    pub duration_s: f64,
    pub eligible: bool,
    pub meters: MeterSet,
    pub warnings: Vec<String>,
}

impl FileSummary {
    pub fn new(path: &Path, decoded: &DecodedWav) -> Self {
        let clip = &decoded.clip;
        let mut warnings = decoded.warnings.clone();
        let eligible = clip.layout().is_multichannel();
        if !eligible {
            warnings.push(NOT_ELIGIBLE.to_string());
        }
        FileSummary {
            path: path.display().to_string(),
            format: decoded.format.to_string(),
            sample_rate: clip.sample_rate(),
            channels: clip.channel_count(),
            layout: clip.layout(),
            frames: clip.frame_count(),
            duration_s: clip.duration_secs(),
            eligible,
            meters: MeterSet::measure(clip),
            warnings,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "file: {}", self.path);
        let _ = writeln!(s, "format: {}, {} Hz", self.format, self.sample_rate);
        let _ = writeln!(s, "channels: {}", self.channels);
        let _ = writeln!(s, "layout: {}", self.layout.describe());
        let _ = writeln!(s, "duration: {:.3} s ({} frames)", self.duration_s, self.frames);
        for ((ch, peak), (_, rms)) in self.meters.sample_peak_dbfs.iter().zip(self.meters.rms_dbfs.iter()) {
            let _ = writeln!(s, "  {:<11} peak {:>10}FS  rms {:>10}FS", ch.name(), peak.to_string(), rms.to_string());
        }
        if let Some(sbr) = self.meters.speech_background_ratio_db {
            let _ = writeln!(s, "speech/background: {sbr}");
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

pub fn run(args: &InfoArgs, out: &mut dyn Write) -> Result<()> {
    let decoded = load(&args.input, args.layout)?;
    let summary = FileSummary::new(&args.input, &decoded);
    if args.json {
        let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
        text.push('\n');
        write_out(out, &text)
    } else {
        write_out(out, &summary.to_text())
    }
}
