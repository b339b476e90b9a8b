use std::fs;
use std::io::Write;

use clearvoice_core::{encode_wav, generate, TestSignalSpec};

use crate::error::{CliError, Result};
use crate::pipeline::write_file;
use crate::{write_out, GenArgs};

pub fn run(args: &GenArgs, out: &mut dyn Write) -> Result<()> {
    let text = fs::read_to_string(&args.spec)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", args.spec.display())))?;
    let spec = TestSignalSpec::from_json(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.spec.display())))?;
    let clip = generate(&spec).map_err(CliError::usage)?;
    let bytes = encode_wav(&clip, args.format).map_err(CliError::processing)?;
    write_file(&args.output, &bytes)?;
    write_out(
        out,
        &format!(
            "{}: {} frames, {} at {} Hz, {}\n",
            args.output.display(),
            clip.frame_count(),
            clip.layout().describe(),
            clip.sample_rate(),
            args.format
        ),
    )
}
