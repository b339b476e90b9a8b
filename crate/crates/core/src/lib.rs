//! Dialogue-enhancing ("Enhanced Speech") downmixing of multichannel
//! broadcast audio.
//!
//! The center channel of a 3.0/5.1 master is assumed to carry the dialogue.
//! A static matrix boosts it and attenuates everything else, either into a
//! stereo track or back into 5.1. If the mixed track would clip above
//! 0 dBFS, the whole track is scaled down by one scalar so its peak sits at
//! the ceiling.
//!
//! ```
//! use clearvoice_core::{downmix, preset_matrix, AudioClip, Channel, ChannelLayout,
//!     NormalizationPolicy, Preset};
//!
//! let mut clip = AudioClip::silence(ChannelLayout::Surround51, 48_000, 480);
//! clip.channel_mut(Channel::C).unwrap().fill(0.5);
//! let matrix = preset_matrix(Preset::EsStereo, clip.layout()).unwrap();
//! let (out, report) = downmix(&clip, &matrix, &NormalizationPolicy::default()).unwrap();
//! assert_eq!(out.channels()[0][0], 0.75);
//! assert_eq!(report.normalization_scalar, 1.0);
//! ```

pub mod clip;
pub mod gain;
pub mod layout;
pub mod matrix;
pub mod meter;
pub mod mix;
pub mod signal;
pub mod wav;

pub use clip::{AudioClip, ClipError};
pub use gain::{db_to_gain, gain_to_db, Gain};
pub use layout::{infer_layout, Channel, ChannelLayout, LayoutError, PerChannel};
pub use matrix::{attenuation_matrix, preset_matrix, DownmixMatrix, MatrixError, MatrixId, Preset};
pub use meter::{
    bin_ranges, rms_per_channel, sample_peak_dbfs, speech_background_ratio, stem_speech_background_ratio,
    waveform_envelope, Dbfs, Envelope, MeterError, MeterSet,
};
pub use mix::{
    apply_matrix, downmix, ensure_multichannel, normalize_by_peak, peak_scan, MixError, MixReport,
    NormalizationPolicy,
};
pub use signal::{gate_is_on, generate, ChannelSignal, Component, Gate, SignalError, TestSignalSpec};
pub use wav::{decode_wav, encode_wav, read_wav, write_wav, DecodedWav, Encoding, SampleFormat, WavError};
