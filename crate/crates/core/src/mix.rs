//! Matrix application, the clip check and max-peak normalization.
//!
//! A mix is two passes over the whole track: apply the matrix, then scan
//! every output sample for the peak. Only if that peak exceeds the policy
//! ceiling is the whole track scaled, by one scalar shared across channels,
//! so that its peak lands exactly on the ceiling.

use serde::Serialize;
use thiserror::Error;

use crate::clip::AudioClip;
use crate::gain::{db_to_gain, Gain};
use crate::layout::{ChannelLayout, PerChannel};
use crate::matrix::{DownmixMatrix, MatrixId};
use crate::meter::{stem_speech_background_ratio, Dbfs, MeterSet};

/// Version of the JSON report layout.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MixError {
    #[error("{layout} input is not eligible: only multichannel audio with a center channel (3.0, 5.1, 5.1+2) can be converted; mono to mono and stereo to stereo are not handled")]
    UnsupportedInput { layout: String },
    #[error("clip layout {clip} does not match matrix input layout {matrix}")]
    LayoutMismatch {
        clip: ChannelLayout,
        matrix: ChannelLayout,
    },
    #[error("normalization target must be within (0, 1] (<= 0 dBFS), got {0}")]
    InvalidTarget(f64),
}

impl MixError {
    /// Unsupported-input error for a stream of `channels` channels.
    pub fn unsupported_channels(channels: usize) -> Self {
        let layout = match channels {
            1 => "mono".to_string(),
            2 => "stereo".to_string(),
            n => format!("{n}-channel"),
        };
        MixError::UnsupportedInput { layout }
    }
}

/// Fails unless `layout` carries a dedicated center channel.
pub fn ensure_multichannel(layout: ChannelLayout) -> Result<(), MixError> {
    if layout.is_multichannel() {
        Ok(())
    } else {
        Err(MixError::unsupported_channels(layout.channel_count()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizationPolicy {
    enabled: bool,
    target_peak: f64,
}

impl Default for NormalizationPolicy {
    /// Enabled, ceiling at 0 dBFS (1.0).
    fn default() -> Self {
        NormalizationPolicy {
            enabled: true,
            target_peak: 1.0,
        }
    }
}

impl NormalizationPolicy {
    pub fn new(enabled: bool, target_peak: f64) -> Result<Self, MixError> {
        if !(target_peak > 0.0 && target_peak <= 1.0) {
            return Err(MixError::InvalidTarget(target_peak));
        }
        Ok(NormalizationPolicy {
            enabled,
            target_peak,
        })
    }

    /// Ceiling given in dBFS, e.g. `-1.0` for 0.891.
    pub fn from_db(enabled: bool, target_db: f64) -> Result<Self, MixError> {
        if target_db.is_nan() || target_db > 0.0 {
            return Err(MixError::InvalidTarget(db_to_gain(target_db).0));
        }
        Self::new(enabled, db_to_gain(target_db).0)
    }

    pub fn disabled() -> Self {
        NormalizationPolicy {
            enabled: false,
            target_peak: 1.0,
        }
    }

    pub fn enabled(&self) -> bool {
        self.enabled
    }

    pub fn target_peak(&self) -> f64 {
        self.target_peak
    }
}

/// Apply the matrix: `out[o][t] = Σ_i m[o][i] · in[i][t]`, accumulated in
/// input-channel order. The result is not normalized.
pub fn apply_matrix(clip: &AudioClip, matrix: &DownmixMatrix) -> Result<AudioClip, MixError> {
    if clip.layout() != matrix.input_layout() {
        return Err(MixError::LayoutMismatch {
            clip: clip.layout(),
            matrix: matrix.input_layout(),
        });
    }
    let frames = clip.frame_count();
    let inputs = clip.channels();
    let planes: Vec<Vec<f64>> = matrix
        .rows()
        .iter()
        .map(|row| {
            let mut out = vec![0.0; frames];
            for (&gain, input) in row.iter().zip(inputs) {
                if gain == 0.0 {
                    continue;
                }
                for (acc, &x) in out.iter_mut().zip(input) {
                    *acc += gain * x;
                }
            }
            out
        })
        .collect();
    Ok(AudioClip::new(matrix.output_layout(), clip.sample_rate(), planes)
        .expect("matrix output shape matches its layout"))
}

/// Largest absolute sample per channel; zero for empty clips.
pub fn peak_scan(clip: &AudioClip) -> PerChannel<f64> {
    let peaks = clip
        .channels()
        .iter()
        .map(|plane| plane.iter().fold(0.0f64, |p, &s| p.max(s.abs())))
        .collect();
    PerChannel::new(clip.layout(), peaks)
}

/// Scale the whole clip down to `policy.target_peak` if, and only if, its
/// global sample peak exceeds it. Returns the clip and the applied scalar
/// (exactly 1.0 when untouched).
pub fn normalize_by_peak(clip: AudioClip, policy: &NormalizationPolicy) -> (AudioClip, Gain) {
    let peak = peak_scan(&clip).values().iter().copied().fold(0.0, f64::max);
    normalize_with_peak(clip, policy, peak)
}

fn normalize_with_peak(mut clip: AudioClip, policy: &NormalizationPolicy, peak: f64) -> (AudioClip, Gain) {
    if !policy.enabled || peak <= policy.target_peak {
        return (clip, Gain::UNITY);
    }
    let scalar = policy.target_peak / peak;
    for plane in clip.planes_mut() {
        for s in plane.iter_mut() {
            *s *= scalar;
        }
    }
    (clip, Gain(scalar))
}

/// Provenance and measurements of one mix.
#[derive(Debug, Clone, Serialize)]
pub struct MixReport {
    pub schema: u32,
    pub matrix_id: MatrixId,
    pub matrix: DownmixMatrix,
    pub policy: NormalizationPolicy,
    pub pre_norm_peak: PerChannel<f64>,
    pub normalization_scalar: f64,
    pub output_peak: PerChannel<f64>,
    pub metrics: MeterSet,
    /// Speech-to-background ratio of the output, measured by mixing the
    /// center (speech) and non-center, non-LFE (background) stems of the
    /// input separately through the same matrix. A proxy for dialogue
    /// prominence, not an intelligibility score.
    pub stem_speech_background_ratio_db: Option<Dbfs>,
    pub warnings: Vec<String>,
}

/// Full mix: apply the matrix, scan peaks, normalize if the result would
/// clip. Mono and stereo inputs are rejected.
pub fn downmix(
    clip: &AudioClip,
    matrix: &DownmixMatrix,
    policy: &NormalizationPolicy,
) -> Result<(AudioClip, MixReport), MixError> {
    ensure_multichannel(clip.layout())?;
    let mixed = apply_matrix(clip, matrix)?;
    let pre_norm_peak = peak_scan(&mixed);
    let global = pre_norm_peak.values().iter().copied().fold(0.0, f64::max);
    let (out, scalar) = normalize_with_peak(mixed, policy, global);
    let output_peak = PerChannel::new(
        out.layout(),
        pre_norm_peak.values().iter().map(|p| p * scalar.0).collect(),
    );
    let report = MixReport {
        schema: REPORT_SCHEMA,
        matrix_id: matrix.id(),
        matrix: matrix.clone(),
        policy: *policy,
        pre_norm_peak,
        normalization_scalar: scalar.0,
        output_peak,
        metrics: MeterSet::measure(&out),
        stem_speech_background_ratio_db: stem_speech_background_ratio(clip, matrix).ok(),
        warnings: Vec::new(),
    };
    Ok((out, report))
}
