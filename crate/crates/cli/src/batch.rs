//! Manifest-driven batch mixing.
//!
//! ```json
//! {"defaults": {"target_peak_db": 0.0, "normalize": true, "format": "pcm24"},
//!  "entries": [
//!    {"input": "ep1.wav", "output": "out/ep1.wav", "preset": "es-stereo", "report": "out/ep1.json"},
//!    {"input": "concert.wav", "output": "out/concert.wav", "preset": "es-stereo",
//!     "excluded": true, "exclusion_reason": "music program"}]}
//! ```
//!
//! Relative paths resolve against the manifest's directory. Exclusion is
//! purely data-driven. Failed entries do not stop the batch; the summary is
//! assembled in manifest order once every entry has finished, so it does
//! not depend on `--jobs`.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clearvoice_core::{Preset, SampleFormat};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::mix::policy;
use crate::pipeline::{run_mix, write_file, MatrixSource, MixJob};
use crate::{write_out, BatchArgs};

pub const SUMMARY_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    #[serde(default)]
    pub target_peak_db: f64,
    #[serde(default = "default_true")]
    pub normalize: bool,
    #[serde(default = "default_format")]
    pub format: String,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults {
            target_peak_db: 0.0,
            normalize: true,
            format: default_format(),
        }
    }
}

fn default_true() -> bool {
    true
}

fn default_format() -> String {
    SampleFormat::Int24.name().to_string()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub input: PathBuf,
    pub output: PathBuf,
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub matrix: Option<PathBuf>,
    #[serde(default)]
    pub report: Option<PathBuf>,
    #[serde(default)]
    pub excluded: bool,
    #[serde(default)]
    pub exclusion_reason: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatchManifest {
    #[serde(default)]
    pub defaults: Defaults,
    #[serde(default)]
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Done,
    Skipped,
    Failed,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryResult {
    pub index: usize,
    pub input: String,
    pub output: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization_scalar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchSummary {
    pub schema: u32,
    pub done: usize,
    pub skipped: usize,
    pub failed: usize,
    pub entries: Vec<EntryResult>,
}

struct Prepared {
    entry: Entry,
    input: PathBuf,
    output: PathBuf,
    report: Option<PathBuf>,
    source: Option<MatrixSource>,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Parse and validate a manifest; every problem here is a configuration
/// error that stops the batch before anything runs.
fn prepare(manifest_path: &Path) -> Result<(Vec<Prepared>, Defaults)> {
    let text = fs::read_to_string(manifest_path).map_err(|e| {
        CliError::usage(format!("cannot read manifest {}: {e}", manifest_path.display()))
    })?;
    let manifest: BatchManifest = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", manifest_path.display())))?;
    let base = manifest_path.parent().unwrap_or(Path::new(""));

    let mut written = HashSet::new();
    let mut prepared = Vec::with_capacity(manifest.entries.len());
    for (i, entry) in manifest.entries.into_iter().enumerate() {
        let source = match (&entry.preset, &entry.matrix) {
            (Some(name), None) => Some(MatrixSource::Preset(
                name.parse::<Preset>()
                    .map_err(|e| CliError::usage(format!("entry {i}: {e}")))?,
            )),
            (None, Some(path)) => Some(
                MatrixSource::load_matrix_file(&resolve(base, path))
                    .map_err(|e| CliError::usage(format!("entry {i}: {e}")))?,
            ),
            (None, None) if entry.excluded => None,
            _ => {
                return Err(CliError::usage(format!(
                    "entry {i}: give exactly one of \"preset\" or \"matrix\""
                )))
            }
        };
        let input = resolve(base, &entry.input);
        let output = resolve(base, &entry.output);
        let report = entry.report.as_ref().map(|r| resolve(base, r));
        for path in std::iter::once(&output).chain(report.as_ref()) {
            if !written.insert(path.clone()) {
                return Err(CliError::usage(format!(
                    "entry {i}: path {} is written by more than one entry",
                    path.display()
                )));
            }
        }
        prepared.push(Prepared {
            entry,
            input,
            output,
            report,
            source,
        });
    }
    for p in &prepared {
        if written.contains(&p.input) {
            return Err(CliError::usage(format!(
                "input {} is also an output of the batch",
                p.input.display()
            )));
        }
    }
    Ok((prepared, manifest.defaults))
}

fn run_entry(index: usize, p: &Prepared, defaults: &Defaults, format: SampleFormat) -> EntryResult {
    let mut result = EntryResult {
        index,
        input: p.entry.input.display().to_string(),
        output: p.entry.output.display().to_string(),
        status: Status::Done,
        matrix_id: None,
        normalization_scalar: None,
        reason: None,
        error: None,
    };
    let Some(source) = p.source.as_ref().filter(|_| !p.entry.excluded) else {
        result.status = Status::Skipped;
        result.reason = Some(
            p.entry
                .exclusion_reason
                .clone()
                .unwrap_or_else(|| "excluded".to_string()),
        );
        return result;
    };
    let outcome = policy(defaults.normalize, defaults.target_peak_db).and_then(|policy| {
        run_mix(&MixJob {
            input: &p.input,
            output: &p.output,
            matrix: source,
            policy,
            format,
            report: p.report.as_deref(),
            layout_override: None,
        })
    });
    match outcome {
        Ok(report) => {
            result.matrix_id = Some(report.matrix_id.to_string());
            result.normalization_scalar = Some(report.normalization_scalar);
        }
        Err(e) => {
            result.status = Status::Failed;
            result.error = Some(e.to_string());
        }
    }
    result
}

/// Run a manifest with `jobs` worker threads.
pub fn run_manifest(manifest_path: &Path, jobs: usize) -> Result<BatchSummary> {
    let (prepared, defaults) = prepare(manifest_path)?;
    let format: SampleFormat = defaults.format.parse().map_err(CliError::usage)?;
    policy(defaults.normalize, defaults.target_peak_db)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::processing(format!("cannot start worker pool: {e}")))?;
    let entries: Vec<EntryResult> = pool.install(|| {
        prepared
            .par_iter()
            .enumerate()
            .map(|(i, p)| run_entry(i, p, &defaults, format))
            .collect()
    });
    let count = |s: Status| entries.iter().filter(|e| e.status == s).count();
    Ok(BatchSummary {
        schema: SUMMARY_SCHEMA,
        done: count(Status::Done),
        skipped: count(Status::Skipped),
        failed: count(Status::Failed),
        entries,
    })
}

pub fn run(args: &BatchArgs, out: &mut dyn Write) -> Result<()> {
    let jobs = args.jobs.map(|j| j as usize).unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    });
    let summary = run_manifest(&args.manifest, jobs)?;
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    if let Some(path) = &args.summary {
        write_file(path, text.as_bytes())?;
    }
    write_out(out, &text)?;
    for e in summary.entries.iter().filter(|e| e.status == Status::Failed) {
        eprintln!("entry {} failed: {}", e.index, e.error.as_deref().unwrap_or(""));
    }
    if summary.failed > 0 {
        Err(CliError::processing(format!(
            "{} of {} entries failed",
            summary.failed,
            summary.entries.len()
        )))
    } else {
        Ok(())
    }
}

