//! Channel identifiers and the canonical channel layouts.
//!
//! Layouts are decided purely by channel count:
//!
//! | channels | layout  | order                                   |
//! |----------|---------|-----------------------------------------|
//! | 2        | `2.0`   | L R                                     |
//! | 3        | `3.0`   | L R C                                   |
//! | 6        | `5.1`   | L R C LFE Ls Rs                         |
//! | 8        | `5.1+2` | L R C LFE Ls Rs StereoLeft StereoRight  |
//!
//! All dialogue is assumed to sit in the center channel `C`. Material with a
//! "blurred" center (dialogue bleeding into L/R) still mixes, but the
//! enhancement is correspondingly weaker.

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("unsupported channel count {0}: no standard layout (expected 2, 3, 6 or 8 channels)")]
    UnsupportedCount(usize),
    #[error("layout override {layout} has {expected} channels but the stream has {actual}")]
    OverrideMismatch {
        layout: ChannelLayout,
        expected: usize,
        actual: usize,
    },
    #[error("unknown layout name {0:?}")]
    UnknownLayout(String),
    #[error("unknown channel name {0:?}")]
    UnknownChannel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    L,
    R,
    C,
    Lfe,
    Ls,
    Rs,
    StereoLeft,
    StereoRight,
}

impl Channel {
    pub const ALL: [Channel; 8] = [
        Channel::L,
        Channel::R,
        Channel::C,
        Channel::Lfe,
        Channel::Ls,
        Channel::Rs,
        Channel::StereoLeft,
        Channel::StereoRight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Channel::L => "L",
            Channel::R => "R",
            Channel::C => "C",
            Channel::Lfe => "LFE",
            Channel::Ls => "Ls",
            Channel::Rs => "Rs",
            Channel::StereoLeft => "StereoLeft",
            Channel::StereoRight => "StereoRight",
        }
    }

    /// Speaker-position bit in a WAVE_FORMAT_EXTENSIBLE channel mask, if any.
    pub fn speaker_bit(self) -> Option<u32> {
        match self {
            Channel::L => Some(0x1),
            Channel::R => Some(0x2),
            Channel::C => Some(0x4),
            Channel::Lfe => Some(0x8),
            Channel::Ls => Some(0x10),
            Channel::Rs => Some(0x20),
            Channel::StereoLeft | Channel::StereoRight => None,
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = LayoutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Channel::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| LayoutError::UnknownChannel(s.to_string()))
    }
}

/// One of the canonical, count-determined channel layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelLayout {
    Stereo20,
    Surround30,
    Surround51,
    Surround51Plus2,
}

impl ChannelLayout {
    pub const ALL: [ChannelLayout; 4] = [
        ChannelLayout::Stereo20,
        ChannelLayout::Surround30,
        ChannelLayout::Surround51,
        ChannelLayout::Surround51Plus2,
    ];

    pub fn channels(self) -> &'static [Channel] {
        use Channel::*;
        match self {
            ChannelLayout::Stereo20 => &[L, R],
            ChannelLayout::Surround30 => &[L, R, C],
            ChannelLayout::Surround51 => &[L, R, C, Lfe, Ls, Rs],
            ChannelLayout::Surround51Plus2 => &[L, R, C, Lfe, Ls, Rs, StereoLeft, StereoRight],
        }
    }

    pub fn channel_count(self) -> usize {
        self.channels().len()
    }

    pub fn index_of(self, channel: Channel) -> Option<usize> {
        self.channels().iter().position(|&c| c == channel)
    }

    pub fn contains(self, channel: Channel) -> bool {
        self.index_of(channel).is_some()
    }

    /// Short name used on the command line and in JSON documents.
    pub fn name(self) -> &'static str {
        match self {
            ChannelLayout::Stereo20 => "2.0",
            ChannelLayout::Surround30 => "3.0",
            ChannelLayout::Surround51 => "5.1",
            ChannelLayout::Surround51Plus2 => "5.1+2",
        }
    }

    /// Layouts carrying a dedicated dialogue channel; the only valid mix inputs.
    pub fn is_multichannel(self) -> bool {
        self.contains(Channel::C)
    }

    pub fn channel_mask(self) -> u32 {
        match self {
            // StereoLeft/StereoRight have no speaker position, so the whole
            // layout is written as "unassigned".
            ChannelLayout::Surround51Plus2 => 0,
            _ => self
                .channels()
                .iter()
                .filter_map(|c| c.speaker_bit())
                .fold(0, |acc, bit| acc | bit),
        }
    }

    /// "5.1 (L R C LFE Ls Rs)"
    pub fn describe(self) -> String {
        let names: Vec<&str> = self.channels().iter().map(|c| c.name()).collect();
        format!("{} ({})", self.name(), names.join(" "))
    }
}

impl fmt::Display for ChannelLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelLayout {
    type Err = LayoutError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "2.0" | "stereo" => Ok(ChannelLayout::Stereo20),
            "3.0" => Ok(ChannelLayout::Surround30),
            "5.1" => Ok(ChannelLayout::Surround51),
            "5.1+2" => Ok(ChannelLayout::Surround51Plus2),
            _ => Err(LayoutError::UnknownLayout(s.to_string())),
        }
    }
}

impl Serialize for ChannelLayout {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for ChannelLayout {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Map a channel count to its canonical layout. An override, when supplied,
/// wins as long as its channel count matches.
pub fn infer_layout(
    channel_count: usize,
    layout_override: Option<ChannelLayout>,
) -> Result<ChannelLayout, LayoutError> {
    if let Some(layout) = layout_override {
        if layout.channel_count() != channel_count {
            return Err(LayoutError::OverrideMismatch {
                layout,
                expected: layout.channel_count(),
                actual: channel_count,
            });
        }
        return Ok(layout);
    }
    match channel_count {
        2 => Ok(ChannelLayout::Stereo20),
        3 => Ok(ChannelLayout::Surround30),
        6 => Ok(ChannelLayout::Surround51),
        8 => Ok(ChannelLayout::Surround51Plus2),
        n => Err(LayoutError::UnsupportedCount(n)),
    }
}

/// Per-channel values that serialize as a JSON object keyed by channel name,
/// in layout order.
#[derive(Debug, Clone, PartialEq)]
pub struct PerChannel<T> {
    layout: ChannelLayout,
    values: Vec<T>,
}

impl<T> PerChannel<T> {
    /// Panics if `values.len()` differs from the layout's channel count.
    pub fn new(layout: ChannelLayout, values: Vec<T>) -> Self {
        assert_eq!(layout.channel_count(), values.len(), "per-channel length");
        PerChannel { layout, values }
    }

    pub fn layout(&self) -> ChannelLayout {
        self.layout
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, channel: Channel) -> Option<&T> {
        self.layout.index_of(channel).map(|i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Channel, &T)> {
        self.layout.channels().iter().copied().zip(self.values.iter())
    }
}

impl<T> std::ops::Index<usize> for PerChannel<T> {
    type Output = T;

    fn index(&self, index: usize) -> &T {
        &self.values[index]
    }
}

impl<T: Serialize> Serialize for PerChannel<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.values.len()))?;
        for (channel, value) in self.iter() {
            map.serialize_entry(channel.name(), value)?;
        }
        map.end()
    }
}
