#![allow(dead_code)]

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use clearvoice_core::{decode_wav, encode_wav, AudioClip, ChannelLayout, SampleFormat};

pub fn clearvoice(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clearvoice"))
        .args(args)
        .current_dir(dir)
        .env_remove("CLEARVOICE_JOBS")
        .output()
        .expect("spawn clearvoice")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub fn write_clip(path: &Path, clip: &AudioClip, format: SampleFormat) {
    fs::write(path, encode_wav(clip, format).unwrap()).unwrap();
}

pub fn read_clip(path: &Path) -> AudioClip {
    decode_wav(&fs::read(path).unwrap(), None).unwrap().clip
}

/// A 1-channel 16-bit PCM file; no mono layout exists, so it is built by hand.
pub fn mono_wav(samples: &[i16]) -> Vec<u8> {
    let data_len = (samples.len() * 2) as u32;
    let mut b = Vec::new();
    b.extend_from_slice(b"RIFF");
    b.extend_from_slice(&(4 + 24 + 8 + data_len).to_le_bytes());
    b.extend_from_slice(b"WAVE");
    b.extend_from_slice(b"fmt ");
    b.extend_from_slice(&16u32.to_le_bytes());
    b.extend_from_slice(&1u16.to_le_bytes());
    b.extend_from_slice(&1u16.to_le_bytes());
    b.extend_from_slice(&48000u32.to_le_bytes());
    b.extend_from_slice(&96000u32.to_le_bytes());
    b.extend_from_slice(&2u16.to_le_bytes());
    b.extend_from_slice(&16u16.to_le_bytes());
    b.extend_from_slice(b"data");
    b.extend_from_slice(&data_len.to_le_bytes());
    for s in samples {
        b.extend_from_slice(&s.to_le_bytes());
    }
    b
}

/// Deterministic test-side PRNG, independent of the crate's noise source.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0
    }

    /// Uniform in [-1, 1).
    pub fn signed(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u64() >> 33) % n as u64) as usize
    }
}

pub fn random_clip(rng: &mut Lcg, layout: ChannelLayout, frames: usize, amplitude: f64) -> AudioClip {
    let planes = (0..layout.channel_count())
        .map(|_| (0..frames).map(|_| amplitude * rng.signed()).collect())
        .collect();
    AudioClip::new(layout, 48000, planes).unwrap()
}
