//! Downmix matrices: the three fixed presets, generalized background
//! attenuation variants, and user-supplied JSON matrices.
//!
//! Coefficients are linear gain multiples indexed `[output][input]`.
//!
//! | preset       | output | gains                                                      |
//! |--------------|--------|------------------------------------------------------------|
//! | `es-stereo`  | 2.0    | L = 0.25·L + 1.5·C + 0.25·Ls, R = 0.25·R + 1.5·C + 0.25·Rs |
//! | `ebu-stereo` | 2.0    | L = 1·L + 0.707·C + 0.707·Ls, R = 1·R + 0.707·C + 0.707·Rs |
//! | `es-51`      | 5.1    | diagonal 0.4, 0.4, 1.5, 0.25, 0.25, 0.25                   |
//!
//! LFE never feeds a stereo output, and the embedded StereoLeft/StereoRight
//! pair of 8-channel masters is ignored by every preset.

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::gain::{db_to_gain, Gain};
use crate::layout::{Channel, ChannelLayout};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("preset {preset} does not accept {layout} input")]
    UnsupportedLayout { preset: Preset, layout: ChannelLayout },
    #[error("attenuation matrix needs a center channel in the input layout, got {0}")]
    NoCenter(ChannelLayout),
    #[error("attenuation matrix output must be 2.0 or 5.1, got {0}")]
    UnsupportedOutput(ChannelLayout),
    #[error("background attenuation must be <= 0 dB, got {0} dB")]
    PositiveBackground(f64),
    #[error("gain must be a finite value >= 0, got {0}")]
    InvalidGain(f64),
    #[error("invalid matrix config: {0}")]
    Config(String),
    #[error("unknown preset {0:?} (expected es-stereo, ebu-stereo or es-51)")]
    UnknownPreset(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Enhanced Speech stereo downmix.
    EsStereo,
    /// Conventional EBU stereo downmix.
    EbuStereo,
    /// Enhanced Speech 5.1 remix.
    Es51,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::EsStereo, Preset::EbuStereo, Preset::Es51];

    pub fn name(self) -> &'static str {
        match self {
            Preset::EsStereo => "es-stereo",
            Preset::EbuStereo => "ebu-stereo",
            Preset::Es51 => "es-51",
        }
    }

    pub fn output_layout(self) -> ChannelLayout {
        match self {
            Preset::EsStereo | Preset::EbuStereo => ChannelLayout::Stereo20,
            Preset::Es51 => ChannelLayout::Surround51,
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| MatrixError::UnknownPreset(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixId {
    Preset(Preset),
    Custom,
}

impl MatrixId {
    pub fn name(self) -> &'static str {
        match self {
            MatrixId::Preset(p) => p.name(),
            MatrixId::Custom => "custom",
        }
    }
}

impl fmt::Display for MatrixId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for MatrixId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DownmixMatrix {
    id: MatrixId,
    input_layout: ChannelLayout,
    output_layout: ChannelLayout,
    coefficients: Vec<Vec<f64>>,
}

impl DownmixMatrix {
    /// An all-zero matrix.
    pub fn zeros(id: MatrixId, input_layout: ChannelLayout, output_layout: ChannelLayout) -> Self {
        DownmixMatrix {
            id,
            input_layout,
            output_layout,
            coefficients: vec![
                vec![0.0; input_layout.channel_count()];
                output_layout.channel_count()
            ],
        }
    }

    pub fn id(&self) -> MatrixId {
        self.id
    }

    pub fn input_layout(&self) -> ChannelLayout {
        self.input_layout
    }

    pub fn output_layout(&self) -> ChannelLayout {
        self.output_layout
    }

    /// Coefficient rows, one per output channel, each indexed by input channel.
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.coefficients
    }

    /// Gain from `input` into `output`; zero when either channel is absent.
    pub fn coefficient(&self, output: Channel, input: Channel) -> Gain {
        match (self.output_layout.index_of(output), self.input_layout.index_of(input)) {
            (Some(o), Some(i)) => Gain(self.coefficients[o][i]),
            _ => Gain::ZERO,
        }
    }

    /// Set a coefficient. Channels missing from the layouts are ignored,
    /// which is how surround terms vanish for 3.0 input.
    pub fn set(&mut self, output: Channel, input: Channel, gain: Gain) -> Result<(), MatrixError> {
        if !gain.0.is_finite() || gain.0 < 0.0 {
            return Err(MatrixError::InvalidGain(gain.0));
        }
        if let (Some(o), Some(i)) = (self.output_layout.index_of(output), self.input_layout.index_of(input)) {
            self.coefficients[o][i] = gain.0;
        }
        Ok(())
    }

    fn scale_input(&mut self, input: usize, factor: f64) {
        for row in &mut self.coefficients {
            row[input] *= factor;
        }
    }

    /// Parse a JSON matrix document:
    ///
    /// ```json
    /// {"input_layout": "5.1", "output_layout": "2.0",
    ///  "coefficients": {"L": {"L": 0.25, "C": 1.5, "Ls": 0.25},
    ///                   "R": {"R": 0.25, "C": 1.5, "Rs": 0.25}}}
    /// ```
    ///
    /// Absent entries are zero. Errors name the offending channel key.
    pub fn from_json(text: &str) -> Result<Self, MatrixError> {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| MatrixError::Config(format!("not valid JSON: {e}")))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| MatrixError::Config("top level must be an object".into()))?;
        let layout_field = |key: &str| -> Result<ChannelLayout, MatrixError> {
            let raw = obj
                .get(key)
                .ok_or_else(|| MatrixError::Config(format!("missing \"{key}\"")))?
                .as_str()
                .ok_or_else(|| MatrixError::Config(format!("\"{key}\" must be a string")))?;
            raw.parse()
                .map_err(|e| MatrixError::Config(format!("\"{key}\": {e}")))
        };
        let input_layout = layout_field("input_layout")?;
        let output_layout = layout_field("output_layout")?;
        let mut matrix = DownmixMatrix::zeros(MatrixId::Custom, input_layout, output_layout);

        let rows = obj
            .get("coefficients")
            .ok_or_else(|| MatrixError::Config("missing \"coefficients\"".into()))?
            .as_object()
            .ok_or_else(|| MatrixError::Config("\"coefficients\" must be an object".into()))?;
        for (out_key, row) in rows {
            let out_ch: Channel = out_key
                .parse()
                .map_err(|_| MatrixError::Config(format!("unknown output channel \"{out_key}\"")))?;
            let o = output_layout.index_of(out_ch).ok_or_else(|| {
                MatrixError::Config(format!(
                    "output channel \"{out_key}\" is not in layout {output_layout}"
                ))
            })?;
            let row = row.as_object().ok_or_else(|| {
                MatrixError::Config(format!("coefficients for \"{out_key}\" must be an object"))
            })?;
            for (in_key, value) in row {
                let in_ch: Channel = in_key.parse().map_err(|_| {
                    MatrixError::Config(format!(
                        "unknown input channel \"{in_key}\" in row \"{out_key}\""
                    ))
                })?;
                let i = input_layout.index_of(in_ch).ok_or_else(|| {
                    MatrixError::Config(format!(
                        "input channel \"{in_key}\" in row \"{out_key}\" is not in layout {input_layout}"
                    ))
                })?;
                let gain = value.as_f64().ok_or_else(|| {
                    MatrixError::Config(format!(
                        "coefficient \"{out_key}\".\"{in_key}\" must be a number"
                    ))
                })?;
                if !gain.is_finite() || gain < 0.0 {
                    return Err(MatrixError::Config(format!(
                        "coefficient \"{out_key}\".\"{in_key}\" must be >= 0, got {gain}"
                    )));
                }
                matrix.coefficients[o][i] = gain;
            }
        }
        Ok(matrix)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix serializes")
    }
}

struct Row<'a> {
    input_layout: ChannelLayout,
    gains: &'a [f64],
}

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        for (ch, &g) in self.input_layout.channels().iter().zip(self.gains) {
            if g != 0.0 {
                map.serialize_entry(ch.name(), &g)?;
            }
        }
        map.end()
    }
}

struct Rows<'a>(&'a DownmixMatrix);

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let m = self.0;
        let mut map = serializer.serialize_map(Some(m.coefficients.len()))?;
        for (ch, gains) in m.output_layout.channels().iter().zip(&m.coefficients) {
            map.serialize_entry(
                ch.name(),
                &Row {
                    input_layout: m.input_layout,
                    gains,
                },
            )?;
        }
        map.end()
    }
}

/// Serializes in the same shape [`DownmixMatrix::from_json`] accepts
/// (zero coefficients omitted).
impl Serialize for DownmixMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("input_layout", &self.input_layout)?;
        map.serialize_entry("output_layout", &self.output_layout)?;
        map.serialize_entry("coefficients", &Rows(self))?;
        map.end()
    }
}

/// Build one of the fixed preset matrices for the given input layout.
pub fn preset_matrix(preset: Preset, input_layout: ChannelLayout) -> Result<DownmixMatrix, MatrixError> {
    use Channel::*;
    let supported = match preset {
        Preset::EsStereo | Preset::EbuStereo => input_layout.is_multichannel(),
        Preset::Es51 => matches!(
            input_layout,
            ChannelLayout::Surround51 | ChannelLayout::Surround51Plus2
        ),
    };
    if !supported {
        return Err(MatrixError::UnsupportedLayout {
            preset,
            layout: input_layout,
        });
    }
    let mut m = DownmixMatrix::zeros(MatrixId::Preset(preset), input_layout, preset.output_layout());
    let mut set = |o, i, g| m.set(o, i, Gain(g)).expect("preset gains are valid");
    match preset {
        Preset::EsStereo => {
            set(L, L, 0.25);
            set(L, C, 1.5);
            set(L, Ls, 0.25);
            set(R, R, 0.25);
            set(R, C, 1.5);
            set(R, Rs, 0.25);
        }
        Preset::EbuStereo => {
            set(L, L, 1.0);
            set(L, C, 0.707);
            set(L, Ls, 0.707);
            set(R, R, 1.0);
            set(R, C, 0.707);
            set(R, Rs, 0.707);
        }
        Preset::Es51 => {
            set(L, L, 0.4);
            set(R, R, 0.4);
            set(C, C, 1.5);
            set(Lfe, Lfe, 0.25);
            set(Ls, Ls, 0.25);
            set(Rs, Rs, 0.25);
        }
    }
    Ok(m)
}

/// Generalized background-attenuation matrix.
///
/// Starts from the EBU stereo downmix (2.0 output) or the identity (5.1
/// output), scales every non-center input by `background_db`, then sets the
/// center contribution(s) to `center_gain`.
pub fn attenuation_matrix(
    input_layout: ChannelLayout,
    output_layout: ChannelLayout,
    background_db: f64,
    center_gain: Gain,
) -> Result<DownmixMatrix, MatrixError> {
    if background_db.is_nan() || background_db > 0.0 {
        return Err(MatrixError::PositiveBackground(background_db));
    }
    if !center_gain.0.is_finite() || center_gain.0 < 0.0 {
        return Err(MatrixError::InvalidGain(center_gain.0));
    }
    let center_in = input_layout
        .index_of(Channel::C)
        .ok_or(MatrixError::NoCenter(input_layout))?;

    let mut m = match output_layout {
        ChannelLayout::Stereo20 => {
            let mut base = preset_matrix(Preset::EbuStereo, input_layout)?;
            base.id = MatrixId::Custom;
            base
        }
        ChannelLayout::Surround51 => {
            let mut base = DownmixMatrix::zeros(MatrixId::Custom, input_layout, output_layout);
            for &ch in output_layout.channels() {
                base.set(ch, ch, Gain::UNITY)?;
            }
            base
        }
        other => return Err(MatrixError::UnsupportedOutput(other)),
    };

    let background = db_to_gain(background_db).0;
    for i in 0..input_layout.channel_count() {
        if i != center_in {
            m.scale_input(i, background);
        }
    }
    for row in &mut m.coefficients {
        if row[center_in] != 0.0 {
            row[center_in] = center_gain.0;
        }
    }
    Ok(m)
}
