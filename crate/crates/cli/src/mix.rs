use std::io::Write;

use clearvoice_core::NormalizationPolicy;

use crate::error::{CliError, Result};
use crate::pipeline::{run_mix, MatrixSource, MixJob};
use crate::{write_out, MixArgs};

pub(crate) fn policy(normalize: bool, target_peak_db: f64) -> Result<NormalizationPolicy> {
    NormalizationPolicy::from_db(normalize, target_peak_db)
        .map_err(|_| CliError::usage(format!("--target-peak must be <= 0 dBFS, got {target_peak_db}")))
}

pub fn run(args: &MixArgs, out: &mut dyn Write) -> Result<()> {
    let source = match (&args.preset, &args.matrix) {
        (Some(p), None) => MatrixSource::Preset(*p),
        (None, Some(path)) => MatrixSource::load_matrix_file(path)?,
        _ => return Err(CliError::usage("give exactly one of --preset or --matrix")),
    };
    let job = MixJob {
        input: &args.input,
        output: &args.output,
        matrix: &source,
        policy: policy(!args.no_normalize, args.target_peak)?,
        format: args.format,
        report: args.report.as_deref(),
        layout_override: args.layout,
    };
    let report = run_mix(&job)?;
    let peak = report.output_peak.values().iter().copied().fold(0.0, f64::max);
    write_out(
        out,
        &format!(
            "{} -> {} [{} {} -> {}] scalar {} peak {:.6}\n",
            args.input.display(),
            args.output.display(),
            report.matrix_id,
            report.matrix.input_layout(),
            report.matrix.output_layout(),
            report.normalization_scalar,
            peak
        ),
    )?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}
