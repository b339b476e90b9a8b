//! One file through the mixer: read, validate, mix, write. Shared by `mix`
//! and `batch`.

use std::fs;
use std::path::Path;

use clearvoice_core::{
    decode_wav, downmix, encode_wav, ensure_multichannel, preset_matrix, ChannelLayout,
    DownmixMatrix, LayoutError, MixError, MixReport, NormalizationPolicy, Preset, SampleFormat,
    WavError,
};

use crate::error::{CliError, Result};

/// Where the matrix comes from. Presets are built against the input layout.
#[derive(Debug, Clone)]
pub enum MatrixSource {
    Preset(Preset),
    Custom(DownmixMatrix),
}

impl MatrixSource {
    pub fn load_matrix_file(path: &Path) -> Result<MatrixSource> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read matrix {}: {e}", path.display())))?;
        DownmixMatrix::from_json(&text)
            .map(MatrixSource::Custom)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    fn resolve(&self, layout: ChannelLayout) -> Result<DownmixMatrix> {
        match self {
            MatrixSource::Preset(p) => preset_matrix(*p, layout).map_err(CliError::processing),
            MatrixSource::Custom(m) => Ok(m.clone()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MixJob<'a> {
    pub input: &'a Path,
    pub output: &'a Path,
    pub matrix: &'a MatrixSource,
    pub policy: NormalizationPolicy,
    pub format: SampleFormat,
    pub report: Option<&'a Path>,
    pub layout_override: Option<ChannelLayout>,
}

pub fn report_json(report: &MixReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}

fn read_error(path: &Path, err: WavError) -> CliError {
    match err {
        // No mono layout exists; mono and stereo both fail the same rule.
        WavError::Layout(LayoutError::UnsupportedCount(n)) if n < 3 => CliError::processing(
            format!("{}: {}", path.display(), MixError::unsupported_channels(n)),
        ),
        other => CliError::processing(format!("{}: {other}", path.display())),
    }
}

pub fn run_mix(job: &MixJob<'_>) -> Result<MixReport> {
    let bytes = fs::read(job.input)
        .map_err(|e| CliError::processing(format!("cannot read {}: {e}", job.input.display())))?;
    let decoded = decode_wav(&bytes, job.layout_override).map_err(|e| read_error(job.input, e))?;
    let clip = decoded.clip;
    ensure_multichannel(clip.layout())
        .map_err(|e| CliError::processing(format!("{}: {e}", job.input.display())))?;
    let matrix = job.matrix.resolve(clip.layout())?;
    let (mixed, mut report) = downmix(&clip, &matrix, &job.policy)
        .map_err(|e| CliError::processing(format!("{}: {e}", job.input.display())))?;
    report.warnings.extend(decoded.warnings);

    let encoded = encode_wav(&mixed, job.format)
        .map_err(|e| CliError::processing(format!("{}: {e}", job.output.display())))?;
    write_file(job.output, &encoded)?;
    if let Some(path) = job.report {
        write_file(path, report_json(&report).as_bytes())?;
    }
    Ok(report)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| {
            CliError::processing(format!("cannot create {}: {e}", parent.display()))
        })?;
    }
    fs::write(path, bytes)
        .map_err(|e| CliError::processing(format!("cannot write {}: {e}", path.display())))
}
