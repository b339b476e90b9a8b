//! RIFF/WAVE reading and writing.
//!
//! Integer PCM sample `x` of width `b` maps to `x / 2^(b-1)`, so negative full
//! scale is exactly `-1.0` and the largest positive code is `1 - 2^(1-b)`.
//! Writing rounds half away from zero and clamps to the integer range.
//!
//! Unknown chunks are skipped on read and never written.

use std::fmt;
use std::io::{Read, Write};

use thiserror::Error;

use crate::clip::AudioClip;
use crate::layout::{infer_layout, ChannelLayout, LayoutError};

const FORMAT_PCM: u16 = 0x0001;
const FORMAT_IEEE_FLOAT: u16 = 0x0003;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

// Last 14 bytes shared by KSDATAFORMAT_SUBTYPE_PCM and _IEEE_FLOAT; the
// first two bytes carry the plain format tag.
const SUBFORMAT_TAIL: [u8; 14] = [
    0x00, 0x00, 0x00, 0x00, 0x10, 0x00, 0x80, 0x00, 0x00, 0xAA, 0x00, 0x38, 0x9B, 0x71,
];

#[derive(Debug, Error)]
pub enum WavError {
    #[error("malformed RIFF/WAVE: {0}")]
    Malformed(String),
    #[error("unsupported format tag 0x{0:04X}")]
    UnsupportedFormatTag(u16),
    #[error("unsupported bit depth: {bits}-bit {encoding}")]
    UnsupportedBitDepth { encoding: Encoding, bits: u16 },
    #[error("truncated data chunk: header declares {declared} bytes, {available} present")]
    Truncated { declared: u64, available: u64 },
    #[error("non-finite sample in float data at frame {frame}")]
    NonFinite { frame: usize },
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error("cannot write integer PCM: sample {value} at frame {frame} of channel {channel} is outside [-1, 1] (normalization skipped?)")]
    OutOfRange {
        channel: usize,
        frame: usize,
        value: f64,
    },
    #[error("cannot write a clip with zero channels")]
    NoChannels,
    #[error("data chunk too large for RIFF ({0} bytes)")]
    TooLarge(u64),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Encoding {
    Int,
    Float,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Int => "integer PCM",
            Encoding::Float => "IEEE float",
        })
    }
}

/// The five supported sample encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SampleFormat {
    Int16,
    Int24,
    Int32,
    Float32,
    Float64,
}

impl SampleFormat {
    pub const ALL: [SampleFormat; 5] = [
        SampleFormat::Int16,
        SampleFormat::Int24,
        SampleFormat::Int32,
        SampleFormat::Float32,
        SampleFormat::Float64,
    ];

    pub fn new(encoding: Encoding, bits: u16) -> Result<Self, WavError> {
        match (encoding, bits) {
            (Encoding::Int, 16) => Ok(SampleFormat::Int16),
            (Encoding::Int, 24) => Ok(SampleFormat::Int24),
            (Encoding::Int, 32) => Ok(SampleFormat::Int32),
            (Encoding::Float, 32) => Ok(SampleFormat::Float32),
            (Encoding::Float, 64) => Ok(SampleFormat::Float64),
            _ => Err(WavError::UnsupportedBitDepth { encoding, bits }),
        }
    }

    pub fn encoding(self) -> Encoding {
        match self {
            SampleFormat::Int16 | SampleFormat::Int24 | SampleFormat::Int32 => Encoding::Int,
            SampleFormat::Float32 | SampleFormat::Float64 => Encoding::Float,
        }
    }

    pub fn bits(self) -> u16 {
        match self {
            SampleFormat::Int16 => 16,
            SampleFormat::Int24 => 24,
            SampleFormat::Int32 | SampleFormat::Float32 => 32,
            SampleFormat::Float64 => 64,
        }
    }

    pub fn bytes(self) -> usize {
        usize::from(self.bits() / 8)
    }

    pub fn name(self) -> &'static str {
        match self {
            SampleFormat::Int16 => "pcm16",
            SampleFormat::Int24 => "pcm24",
            SampleFormat::Int32 => "pcm32",
            SampleFormat::Float32 => "float32",
            SampleFormat::Float64 => "float64",
        }
    }

    /// One quantization step in normalized units; zero for float formats.
    pub fn lsb(self) -> f64 {
        match self.encoding() {
            Encoding::Int => (2.0f64).powi(1 - i32::from(self.bits())),
            Encoding::Float => 0.0,
        }
    }
}

impl fmt::Display for SampleFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SampleFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SampleFormat::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                format!("unknown sample format {s:?} (expected pcm16, pcm24, pcm32, float32 or float64)")
            })
    }
}

/// Result of decoding a WAV file.
#[derive(Debug, Clone)]
pub struct DecodedWav {
    pub clip: AudioClip,
    pub format: SampleFormat,
    /// Channel mask from an extensible header, if there was one.
    pub channel_mask: Option<u32>,
    pub warnings: Vec<String>,
}

struct Fmt {
    channels: u16,
    sample_rate: u32,
    block_align: u16,
    format: SampleFormat,
    channel_mask: Option<u32>,
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

fn parse_fmt(body: &[u8]) -> Result<Fmt, WavError> {
    if body.len() < 16 {
        return Err(WavError::Malformed(format!(
            "fmt chunk is {} bytes, need at least 16",
            body.len()
        )));
    }
    let tag = u16_at(body, 0);
    let channels = u16_at(body, 2);
    let sample_rate = u32_at(body, 4);
    let block_align = u16_at(body, 12);
    let bits = u16_at(body, 14);

    let mut channel_mask = None;
    let encoding = match tag {
        FORMAT_PCM => Encoding::Int,
        FORMAT_IEEE_FLOAT => Encoding::Float,
        FORMAT_EXTENSIBLE => {
            if body.len() < 40 {
                return Err(WavError::Malformed(
                    "extensible fmt chunk shorter than 40 bytes".into(),
                ));
            }
            let cb_size = u16_at(body, 16);
            if cb_size < 22 {
                return Err(WavError::Malformed(format!(
                    "extensible fmt extension size {cb_size} < 22"
                )));
            }
            let valid_bits = u16_at(body, 18);
            if valid_bits > bits {
                return Err(WavError::Malformed(format!(
                    "valid bits {valid_bits} exceed container size {bits}"
                )));
            }
            channel_mask = Some(u32_at(body, 20));
            let guid = &body[24..40];
            if guid[2..] != SUBFORMAT_TAIL {
                return Err(WavError::Malformed("unrecognized extensible sub-format GUID".into()));
            }
            match u16_at(guid, 0) {
                FORMAT_PCM => Encoding::Int,
                FORMAT_IEEE_FLOAT => Encoding::Float,
                other => return Err(WavError::UnsupportedFormatTag(other)),
            }
        }
        other => return Err(WavError::UnsupportedFormatTag(other)),
    };
    let format = SampleFormat::new(encoding, bits)?;
    if channels == 0 {
        return Err(WavError::Malformed("zero channels".into()));
    }
    if sample_rate == 0 {
        return Err(WavError::Malformed("zero sample rate".into()));
    }
    let expected_align = usize::from(channels) * format.bytes();
    if usize::from(block_align) != expected_align {
        return Err(WavError::Malformed(format!(
            "block align {block_align} does not match {channels} x {bits}-bit"
        )));
    }
    Ok(Fmt {
        channels,
        sample_rate,
        block_align,
        format,
        channel_mask,
    })
}

fn decode_sample(format: SampleFormat, b: &[u8]) -> f64 {
    match format {
        SampleFormat::Int16 => f64::from(i16::from_le_bytes([b[0], b[1]])) / 32768.0,
        SampleFormat::Int24 => {
            // Sign-extend by placing the 3 bytes in the top of an i32.
            let v = i32::from_le_bytes([0, b[0], b[1], b[2]]) >> 8;
            f64::from(v) / 8_388_608.0
        }
        SampleFormat::Int32 => f64::from(i32::from_le_bytes([b[0], b[1], b[2], b[3]])) / 2_147_483_648.0,
        SampleFormat::Float32 => f64::from(f32::from_le_bytes([b[0], b[1], b[2], b[3]])),
        SampleFormat::Float64 => {
            f64::from_le_bytes([b[0], b[1], b[2], b[3], b[4], b[5], b[6], b[7]])
        }
    }
}

/// Decode a complete WAV file held in memory.
pub fn decode_wav(
    bytes: &[u8],
    layout_override: Option<ChannelLayout>,
) -> Result<DecodedWav, WavError> {
    if bytes.len() < 12 {
        return Err(WavError::Malformed(format!(
            "file is {} bytes, too short for a RIFF header",
            bytes.len()
        )));
    }
    if &bytes[0..4] != b"RIFF" {
        return Err(WavError::Malformed("missing RIFF signature".into()));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(WavError::Malformed("RIFF form type is not WAVE".into()));
    }
    // Tolerate RIFF sizes that disagree with the file length; chunk bounds
    // are checked individually.
    let riff_end = (u32_at(bytes, 4) as usize).saturating_add(8).min(bytes.len());

    let mut fmt: Option<Fmt> = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12usize;
    while pos + 8 <= riff_end {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as u64;
        let body_start = pos + 8;
        let available = (bytes.len() - body_start) as u64;
        match id {
            b"fmt " => {
                if size > available {
                    return Err(WavError::Malformed("fmt chunk runs past end of file".into()));
                }
                if fmt.is_some() {
                    return Err(WavError::Malformed("duplicate fmt chunk".into()));
                }
                fmt = Some(parse_fmt(&bytes[body_start..body_start + size as usize])?);
            }
            b"data" => {
                if fmt.is_none() {
                    return Err(WavError::Malformed("data chunk before fmt chunk".into()));
                }
                if size > available {
                    return Err(WavError::Truncated {
                        declared: size,
                        available,
                    });
                }
                data = Some(&bytes[body_start..body_start + size as usize]);
                break;
            }
            _ => {}
        }
        // Chunks are word aligned.
        let next = body_start as u64 + size + (size & 1);
        if next > bytes.len() as u64 {
            break;
        }
        pos = next as usize;
    }

    let fmt = fmt.ok_or_else(|| WavError::Malformed("no fmt chunk".into()))?;
    let data = data.ok_or_else(|| WavError::Malformed("no data chunk".into()))?;

    let mut warnings = Vec::new();
    let layout = infer_layout(usize::from(fmt.channels), layout_override)?;
    if let Some(mask) = fmt.channel_mask {
        if mask != 0 && mask.count_ones() != u32::from(fmt.channels) {
            warnings.push(format!(
                "channel mask 0x{mask:X} names {} speakers for {} channels; layout {} chosen by channel count",
                mask.count_ones(),
                fmt.channels,
                layout
            ));
        }
    }

    let block = usize::from(fmt.block_align);
    if data.len() % block != 0 {
        let whole = (data.len() / block * block) as u64;
        return Err(WavError::Truncated {
            declared: data.len() as u64,
            available: whole,
        });
    }
    let frames = data.len() / block;
    let n_ch = usize::from(fmt.channels);
    let width = fmt.format.bytes();
    let mut planes = vec![Vec::with_capacity(frames); n_ch];
    for (frame_index, frame) in data.chunks_exact(block).enumerate() {
        for (plane, raw) in planes.iter_mut().zip(frame.chunks_exact(width)) {
            let v = decode_sample(fmt.format, raw);
            if !v.is_finite() {
                return Err(WavError::NonFinite { frame: frame_index });
            }
            plane.push(v);
        }
    }
    let clip = AudioClip::new(layout, fmt.sample_rate, planes)
        .map_err(|e| WavError::Malformed(e.to_string()))?;
    Ok(DecodedWav {
        clip,
        format: fmt.format,
        channel_mask: fmt.channel_mask,
        warnings,
    })
}

/// Read a WAV stream to the end and decode it.
pub fn read_wav<R: Read>(
    mut reader: R,
    layout_override: Option<ChannelLayout>,
) -> Result<DecodedWav, WavError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    decode_wav(&bytes, layout_override)
}

fn quantize(value: f64, bits: u16) -> i64 {
    let scale = (1i64 << (bits - 1)) as f64;
    // f64::round is half-away-from-zero.
    let q = (value * scale).round() as i64;
    q.clamp(-(1i64 << (bits - 1)), (1i64 << (bits - 1)) - 1)
}

/// Encode a clip as a canonical RIFF/WAVE file.
///
/// Integer targets require every sample to lie within `[-1, 1]`; anything
/// larger means a normalization step was skipped.
pub fn encode_wav(clip: &AudioClip, format: SampleFormat) -> Result<Vec<u8>, WavError> {
    let n_ch = clip.channel_count();
    if n_ch == 0 {
        return Err(WavError::NoChannels);
    }
    if format.encoding() == Encoding::Int {
        for (c, plane) in clip.channels().iter().enumerate() {
            if let Some((t, &v)) = plane
                .iter()
                .enumerate()
                .find(|(_, v)| !(-1.0..=1.0).contains(*v))
            {
                return Err(WavError::OutOfRange {
                    channel: c,
                    frame: t,
                    value: v,
                });
            }
        }
    }

    let width = format.bytes();
    let block_align = n_ch * width;
    let data_len = (clip.frame_count() as u64) * block_align as u64;
    let layout = clip.layout();
    let extensible = n_ch > 2 || format.bits() != 16;
    let fmt_len: u32 = if extensible { 40 } else { 16 };
    let riff_len = 4 + (8 + u64::from(fmt_len)) + 8 + data_len + (data_len & 1);
    if riff_len > u64::from(u32::MAX) {
        return Err(WavError::TooLarge(data_len));
    }

    let mut out = Vec::with_capacity(riff_len as usize + 8);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(riff_len as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");

    let plain_tag = match format.encoding() {
        Encoding::Int => FORMAT_PCM,
        Encoding::Float => FORMAT_IEEE_FLOAT,
    };
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&fmt_len.to_le_bytes());
    out.extend_from_slice(&(if extensible { FORMAT_EXTENSIBLE } else { plain_tag }).to_le_bytes());
    out.extend_from_slice(&(n_ch as u16).to_le_bytes());
    out.extend_from_slice(&clip.sample_rate().to_le_bytes());
    out.extend_from_slice(&(clip.sample_rate() * block_align as u32).to_le_bytes());
    out.extend_from_slice(&(block_align as u16).to_le_bytes());
    out.extend_from_slice(&format.bits().to_le_bytes());
    if extensible {
        out.extend_from_slice(&22u16.to_le_bytes());
        out.extend_from_slice(&format.bits().to_le_bytes());
        out.extend_from_slice(&layout.channel_mask().to_le_bytes());
        out.extend_from_slice(&plain_tag.to_le_bytes());
        out.extend_from_slice(&SUBFORMAT_TAIL);
    }

    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    let planes = clip.channels();
    for t in 0..clip.frame_count() {
        for plane in planes {
            let v = plane[t];
            match format {
                SampleFormat::Int16 => {
                    out.extend_from_slice(&(quantize(v, 16) as i16).to_le_bytes())
                }
                SampleFormat::Int24 => {
                    out.extend_from_slice(&(quantize(v, 24) as i32).to_le_bytes()[..3])
                }
                SampleFormat::Int32 => {
                    out.extend_from_slice(&(quantize(v, 32) as i32).to_le_bytes())
                }
                SampleFormat::Float32 => out.extend_from_slice(&(v as f32).to_le_bytes()),
                SampleFormat::Float64 => out.extend_from_slice(&v.to_le_bytes()),
            }
        }
    }
    if data_len & 1 == 1 {
        out.push(0);
    }
    Ok(out)
}

pub fn write_wav<W: Write>(
    mut writer: W,
    clip: &AudioClip,
    format: SampleFormat,
) -> Result<(), WavError> {
    let bytes = encode_wav(clip, format)?;
    writer.write_all(&bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stereo(samples: Vec<f64>) -> AudioClip {
        AudioClip::new(ChannelLayout::Stereo20, 48000, vec![samples.clone(), samples]).unwrap()
    }

    #[test]
    fn int16_negative_full_scale() {
        let mut bytes = encode_wav(&stereo(vec![0.0]), SampleFormat::Int16).unwrap();
        let n = bytes.len();
        bytes[n - 4..n - 2].copy_from_slice(&i16::MIN.to_le_bytes());
        let decoded = decode_wav(&bytes, None).unwrap();
        assert_eq!(decoded.clip.channels()[0][0], -1.0);
    }

    #[test]
    fn positive_full_scale_clamps() {
        let bytes = encode_wav(&stereo(vec![1.0]), SampleFormat::Int16).unwrap();
        let n = bytes.len();
        assert_eq!(i16::from_le_bytes([bytes[n - 4], bytes[n - 3]]), 32767);
        let bytes = encode_wav(&stereo(vec![1.0]), SampleFormat::Int24).unwrap();
        let decoded = decode_wav(&bytes, None).unwrap();
        assert_eq!(decoded.clip.channels()[0][0], 1.0 - 2f64.powi(-23));
    }

    #[test]
    fn rounds_half_away_from_zero() {
        assert_eq!(quantize(0.5 / 32768.0, 16), 1);
        assert_eq!(quantize(-0.5 / 32768.0, 16), -1);
        assert_eq!(quantize(0.49 / 32768.0, 16), 0);
    }

    #[test]
    fn silence_float32_is_zero_bytes() {
        let clip = AudioClip::silence(ChannelLayout::Surround51, 48000, 100);
        let bytes = encode_wav(&clip, SampleFormat::Float32).unwrap();
        let data_at = bytes.windows(4).position(|w| w == b"data").unwrap();
        let len = u32_at(&bytes, data_at + 4) as usize;
        assert_eq!(len, 100 * 6 * 4);
        assert!(bytes[data_at + 8..data_at + 8 + len].iter().all(|&b| b == 0));
    }

    #[test]
    fn six_channel_24_bit_header() {
        let clip = AudioClip::silence(ChannelLayout::Surround51, 48000, 10);
        let decoded = decode_wav(&encode_wav(&clip, SampleFormat::Int24).unwrap(), None).unwrap();
        assert_eq!(decoded.clip.layout(), ChannelLayout::Surround51);
        assert_eq!(decoded.clip.sample_rate(), 48000);
        assert_eq!(decoded.format, SampleFormat::Int24);
        assert_eq!(decoded.channel_mask, Some(0x3F));
        assert!(decoded.warnings.is_empty());
    }

    #[test]
    fn stereo_reads_as_stereo() {
        let bytes = encode_wav(&stereo(vec![0.25; 8]), SampleFormat::Int16).unwrap();
        let decoded = decode_wav(&bytes, None).unwrap();
        assert_eq!(decoded.clip.layout(), ChannelLayout::Stereo20);
        assert_eq!(decoded.channel_mask, None);
    }

    #[test]
    fn out_of_range_integer_write_fails() {
        let err = encode_wav(&stereo(vec![0.0, 1.2]), SampleFormat::Int24).unwrap_err();
        assert!(matches!(err, WavError::OutOfRange { frame: 1, .. }));
        // Floats carry headroom.
        assert!(encode_wav(&stereo(vec![1.2]), SampleFormat::Float32).is_ok());
    }

    #[test]
    fn truncated_data_chunk() {
        let clip = AudioClip::silence(ChannelLayout::Surround51, 48000, 10);
        let bytes = encode_wav(&clip, SampleFormat::Int16).unwrap();
        let err = decode_wav(&bytes[..bytes.len() - 5], None).unwrap_err();
        assert!(matches!(err, WavError::Truncated { .. }), "{err}");
    }

    #[test]
    fn unsupported_tag_and_depth() {
        let clip = AudioClip::silence(ChannelLayout::Stereo20, 8000, 1);
        let mut bytes = encode_wav(&clip, SampleFormat::Int16).unwrap();
        bytes[20..22].copy_from_slice(&0x0055u16.to_le_bytes());
        assert!(matches!(
            decode_wav(&bytes, None),
            Err(WavError::UnsupportedFormatTag(0x55))
        ));
        let mut bytes = encode_wav(&clip, SampleFormat::Int16).unwrap();
        // 8-bit PCM
        bytes[32..34].copy_from_slice(&2u16.to_le_bytes());
        bytes[34..36].copy_from_slice(&8u16.to_le_bytes());
        assert!(matches!(
            decode_wav(&bytes, None),
            Err(WavError::UnsupportedBitDepth { bits: 8, .. })
        ));
    }

    #[test]
    fn five_channels_need_override() {
        // Hand-build a 5-channel PCM16 file.
        let mut bytes = Vec::new();
        bytes.extend_from_slice(b"RIFF");
        bytes.extend_from_slice(&(4u32 + 24 + 8 + 10).to_le_bytes());
        bytes.extend_from_slice(b"WAVE");
        bytes.extend_from_slice(b"fmt ");
        bytes.extend_from_slice(&16u32.to_le_bytes());
        bytes.extend_from_slice(&1u16.to_le_bytes());
        bytes.extend_from_slice(&5u16.to_le_bytes());
        bytes.extend_from_slice(&48000u32.to_le_bytes());
        bytes.extend_from_slice(&(48000u32 * 10).to_le_bytes());
        bytes.extend_from_slice(&10u16.to_le_bytes());
        bytes.extend_from_slice(&16u16.to_le_bytes());
        bytes.extend_from_slice(b"data");
        bytes.extend_from_slice(&10u32.to_le_bytes());
        bytes.extend_from_slice(&[0; 10]);
        assert!(matches!(
            decode_wav(&bytes, None),
            Err(WavError::Layout(LayoutError::UnsupportedCount(5)))
        ));
    }

    #[test]
    fn skips_unknown_chunks_with_padding() {
        let clip = stereo(vec![0.5, -0.5]);
        let plain = encode_wav(&clip, SampleFormat::Int16).unwrap();
        // Insert an odd-sized LIST chunk (plus pad byte) between fmt and data.
        let mut bytes = plain[..36].to_vec();
        bytes.extend_from_slice(b"LIST");
        bytes.extend_from_slice(&3u32.to_le_bytes());
        bytes.extend_from_slice(&[1, 2, 3, 0]);
        bytes.extend_from_slice(&plain[36..]);
        let riff = (bytes.len() - 8) as u32;
        bytes[4..8].copy_from_slice(&riff.to_le_bytes());
        let decoded = decode_wav(&bytes, None).unwrap();
        assert_eq!(decoded.clip, decode_wav(&plain, None).unwrap().clip);
    }

    #[test]
    fn mask_mismatch_warns() {
        let clip = AudioClip::silence(ChannelLayout::Surround51, 48000, 2);
        let mut bytes = encode_wav(&clip, SampleFormat::Int24).unwrap();
        bytes[40..44].copy_from_slice(&0x3u32.to_le_bytes());
        let decoded = decode_wav(&bytes, None).unwrap();
        assert_eq!(decoded.clip.layout(), ChannelLayout::Surround51);
        assert_eq!(decoded.channel_mask, Some(0x3));
        assert_eq!(decoded.warnings.len(), 1);
    }

    #[test]
    fn rejects_nan() {
        let clip = stereo(vec![f64::NAN]);
        let bytes = encode_wav(&clip, SampleFormat::Float64).unwrap();
        assert!(matches!(
            decode_wav(&bytes, None),
            Err(WavError::NonFinite { frame: 0 })
        ));
    }

    #[test]
    fn empty_input() {
        assert!(matches!(decode_wav(&[], None), Err(WavError::Malformed(_))));
    }
}
