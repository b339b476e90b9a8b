use thiserror::Error;

use crate::layout::{Channel, ChannelLayout};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClipError {
    #[error("layout {layout} expects {expected} channels, got {actual}")]
    ChannelCount {
        layout: ChannelLayout,
        expected: usize,
        actual: usize,
    },
    #[error("channel {channel} has {actual} samples, expected {expected}")]
    RaggedChannel {
        channel: usize,
        expected: usize,
        actual: usize,
    },
    #[error("sample rate must be positive")]
    ZeroSampleRate,
}

/// Planar 64-bit float audio. `±1.0` is digital full scale (0 dBFS).
///
/// Samples may exceed full scale only on intermediate, not yet normalized
/// mixes.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    layout: ChannelLayout,
    sample_rate: u32,
    channels: Vec<Vec<f64>>,
}

impl AudioClip {
    pub fn new(
        layout: ChannelLayout,
        sample_rate: u32,
        channels: Vec<Vec<f64>>,
    ) -> Result<Self, ClipError> {
        if sample_rate == 0 {
            return Err(ClipError::ZeroSampleRate);
        }
        if channels.len() != layout.channel_count() {
            return Err(ClipError::ChannelCount {
                layout,
                expected: layout.channel_count(),
                actual: channels.len(),
            });
        }
        let frames = channels.first().map_or(0, Vec::len);
        if let Some((i, ch)) = channels.iter().enumerate().find(|(_, c)| c.len() != frames) {
            return Err(ClipError::RaggedChannel {
                channel: i,
                expected: frames,
                actual: ch.len(),
            });
        }
        Ok(AudioClip {
            layout,
            sample_rate,
            channels,
        })
    }

    pub fn silence(layout: ChannelLayout, sample_rate: u32, frames: usize) -> Self {
        assert!(sample_rate > 0, "sample rate must be positive");
        AudioClip {
            layout,
            sample_rate,
            channels: vec![vec![0.0; frames]; layout.channel_count()],
        }
    }

    pub fn layout(&self) -> ChannelLayout {
        self.layout
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn frame_count(&self) -> usize {
        self.channels.first().map_or(0, Vec::len)
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn duration_secs(&self) -> f64 {
        self.frame_count() as f64 / f64::from(self.sample_rate)
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.channels
    }

    pub fn channel(&self, channel: Channel) -> Option<&[f64]> {
        self.layout
            .index_of(channel)
            .map(|i| self.channels[i].as_slice())
    }

    pub fn channel_mut(&mut self, channel: Channel) -> Option<&mut [f64]> {
        self.layout
            .index_of(channel)
            .map(|i| self.channels[i].as_mut_slice())
    }

    /// Mutable access to every channel at once. Lengths cannot change.
    pub fn planes_mut(&mut self) -> impl Iterator<Item = &mut [f64]> {
        self.channels.iter_mut().map(Vec::as_mut_slice)
    }

    pub fn into_channels(self) -> Vec<Vec<f64>> {
        self.channels
    }

    /// Multiply every sample by `factor`.
    pub fn scaled(&self, factor: f64) -> AudioClip {
        let mut out = self.clone();
        for plane in out.planes_mut() {
            for s in plane.iter_mut() {
                *s *= factor;
            }
        }
        out
    }

    /// Copy of this clip keeping only the listed channels; all others are zeroed.
    pub fn with_only(&self, keep: &[Channel]) -> AudioClip {
        let mut out = self.clone();
        for (i, &ch) in self.layout.channels().iter().enumerate() {
            if !keep.contains(&ch) {
                out.channels[i].iter_mut().for_each(|s| *s = 0.0);
            }
        }
        out
    }
}
