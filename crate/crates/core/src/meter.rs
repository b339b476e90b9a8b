//! Per-channel level meters, the speech-to-background ratio and waveform
//! envelopes.
//!
//! dBFS uses the amplitude convention: a full-scale square wave reads 0 dBFS
//! RMS and a full-scale sine reads -3.01 dBFS RMS. Silence reads `-inf`.
//! Loudness (K-weighted LUFS) and true peak are not measured here.

use std::fmt::{self, Write as _};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::clip::AudioClip;
use crate::gain::{gain_to_db, Gain};
use crate::layout::{Channel, ChannelLayout, PerChannel};
use crate::matrix::DownmixMatrix;
use crate::mix::{apply_matrix, peak_scan};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeterError {
    #[error("clip has no frames")]
    Empty,
    #[error("layout {0} has no center channel")]
    MissingCenter(ChannelLayout),
    #[error("layout {0} has no background channel besides C and LFE")]
    NoBackground(ChannelLayout),
    #[error("{bins} bins requested but the clip has only {frames} frames")]
    TooManyBins { bins: usize, frames: usize },
    #[error("bin count must be at least 1")]
    ZeroBins,
    #[error(transparent)]
    Mix(#[from] crate::mix::MixError),
}

/// A decibel value. Non-finite values serialize as the strings `"-inf"` and
/// `"inf"` so JSON reports never carry `null` or NaN.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Dbfs(pub f64);

impl Dbfs {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_silent(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

impl fmt::Display for Dbfs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            write!(f, "{:.2} dB", self.0)
        } else if self.0 > 0.0 {
            f.write_str("+inf dB")
        } else {
            f.write_str("-inf dB")
        }
    }
}

impl Serialize for Dbfs {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            serializer.serialize_f64(self.0)
        } else if self.0 > 0.0 {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_str("-inf")
        }
    }
}

fn mean_square(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().map(|s| s * s).sum::<f64>() / samples.len() as f64
}

fn power_db(mean_square: f64) -> Dbfs {
    Dbfs(gain_to_db(Gain(mean_square.sqrt())))
}

/// RMS level per channel in dBFS.
pub fn rms_per_channel(clip: &AudioClip) -> Result<PerChannel<Dbfs>, MeterError> {
    if clip.frame_count() == 0 {
        return Err(MeterError::Empty);
    }
    Ok(rms_unchecked(clip))
}

fn rms_unchecked(clip: &AudioClip) -> PerChannel<Dbfs> {
    PerChannel::new(
        clip.layout(),
        clip.channels().iter().map(|c| power_db(mean_square(c))).collect(),
    )
}

pub fn sample_peak_dbfs(clip: &AudioClip) -> PerChannel<Dbfs> {
    let peaks = peak_scan(clip);
    PerChannel::new(
        clip.layout(),
        peaks.values().iter().map(|&p| Dbfs(gain_to_db(Gain(p)))).collect(),
    )
}

fn is_background(channel: Channel) -> bool {
    !matches!(channel, Channel::C | Channel::Lfe)
}

/// Ratio of two pooled energies in dB. Silent speech reads `-inf` (taking
/// precedence), silent background reads `+inf`.
fn energy_ratio_db(speech: f64, background: f64) -> Dbfs {
    if speech == 0.0 {
        Dbfs(f64::NEG_INFINITY)
    } else if background == 0.0 {
        Dbfs(f64::INFINITY)
    } else {
        Dbfs(10.0 * (speech / background).log10())
    }
}

/// Speech-to-background ratio: RMS of C against the pooled RMS of every
/// channel except C and LFE. Pooling sums the per-channel mean squares, so
/// a single background channel at the same level as C reads 0 dB.
pub fn speech_background_ratio(clip: &AudioClip) -> Result<Dbfs, MeterError> {
    let layout = clip.layout();
    let speech = clip
        .channel(Channel::C)
        .ok_or(MeterError::MissingCenter(layout))?;
    if !layout.channels().iter().any(|&c| is_background(c)) {
        return Err(MeterError::NoBackground(layout));
    }
    let background: f64 = layout
        .channels()
        .iter()
        .zip(clip.channels())
        .filter(|(&c, _)| is_background(c))
        .map(|(_, samples)| mean_square(samples))
        .sum();
    Ok(energy_ratio_db(mean_square(speech), background))
}

fn pooled_energy(clip: &AudioClip) -> f64 {
    clip.channels().iter().map(|c| mean_square(c)).sum()
}

/// Speech-to-background ratio of what `matrix` does to `clip`, for any
/// output layout (including 2.0, which has no center to measure).
///
/// The input's speech stem (C) and background stem (every channel but C
/// and LFE) are mixed separately and their pooled output energies compared.
/// The matrix is linear, so this is exactly the split present in the full
/// mix before normalization, and normalization does not change it.
pub fn stem_speech_background_ratio(
    clip: &AudioClip,
    matrix: &DownmixMatrix,
) -> Result<Dbfs, MeterError> {
    let layout = clip.layout();
    if !layout.contains(Channel::C) {
        return Err(MeterError::MissingCenter(layout));
    }
    let background_channels: Vec<Channel> = layout
        .channels()
        .iter()
        .copied()
        .filter(|&c| is_background(c))
        .collect();
    if background_channels.is_empty() {
        return Err(MeterError::NoBackground(layout));
    }
    let speech = apply_matrix(&clip.with_only(&[Channel::C]), matrix)?;
    let background = apply_matrix(&clip.with_only(&background_channels), matrix)?;
    Ok(energy_ratio_db(pooled_energy(&speech), pooled_energy(&background)))
}

/// Peak, RMS and (when the layout has a center) speech-to-background meters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeterSet {
    pub sample_peak_dbfs: PerChannel<Dbfs>,
    pub rms_dbfs: PerChannel<Dbfs>,
    pub speech_background_ratio_db: Option<Dbfs>,
}

impl MeterSet {
    /// Empty clips read as silent rather than failing.
    pub fn measure(clip: &AudioClip) -> MeterSet {
        MeterSet {
            sample_peak_dbfs: sample_peak_dbfs(clip),
            rms_dbfs: rms_unchecked(clip),
            speech_background_ratio_db: speech_background_ratio(clip).ok(),
        }
    }
}

/// Per-bin (min, max) sample values, one table per channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    layout: ChannelLayout,
    channels: Vec<Vec<(f64, f64)>>,
}

impl Envelope {
    pub fn layout(&self) -> ChannelLayout {
        self.layout
    }

    pub fn bin_count(&self) -> usize {
        self.channels.first().map_or(0, Vec::len)
    }

    pub fn channel(&self, index: usize) -> &[(f64, f64)] {
        &self.channels[index]
    }

    pub fn channels(&self) -> &[Vec<(f64, f64)>] {
        &self.channels
    }

    /// `bin,L_min,L_max,R_min,R_max,...` header followed by one row per bin.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin");
        for ch in self.layout.channels() {
            let _ = write!(out, ",{ch}_min,{ch}_max");
        }
        out.push('\n');
        for bin in 0..self.bin_count() {
            let _ = write!(out, "{bin}");
            for plane in &self.channels {
                let (lo, hi) = plane[bin];
                let _ = write!(out, ",{lo},{hi}");
            }
            out.push('\n');
        }
        out
    }
}

/// Frame range of each of `bins` contiguous near-equal bins; the first
/// `frames % bins` bins are one frame longer.
pub fn bin_ranges(frames: usize, bins: usize) -> Vec<std::ops::Range<usize>> {
    let base = frames / bins;
    let extra = frames % bins;
    let mut start = 0;
    (0..bins)
        .map(|b| {
            let len = base + usize::from(b < extra);
            let range = start..start + len;
            start += len;
            range
        })
        .collect()
}

/// Min/max envelope of every channel over `bins` bins.
pub fn waveform_envelope(clip: &AudioClip, bins: usize) -> Result<Envelope, MeterError> {
    if bins == 0 {
        return Err(MeterError::ZeroBins);
    }
    let frames = clip.frame_count();
    if bins > frames {
        return Err(MeterError::TooManyBins { bins, frames });
    }
    let ranges = bin_ranges(frames, bins);
    let channels = clip
        .channels()
        .iter()
        .map(|plane| {
            ranges
                .iter()
                .map(|r| {
                    plane[r.clone()]
                        .iter()
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &s| {
                            (lo.min(s), hi.max(s))
                        })
                })
                .collect()
        })
        .collect();
    Ok(Envelope {
        layout: clip.layout(),
        channels,
    })
}
