//! Deterministic multichannel test signals for checking mix coefficients.
//!
//! A spec is JSON:
//!
//! ```json
//! {"layout": "5.1", "sample_rate": 48000, "duration": 2.0,
//!  "channels": {
//!    "C":  {"kind": "sine", "freq": 997, "amplitude": 0.5},
//!    "Ls": {"kind": "noise", "seed": 7, "amplitude": 0.3,
//!           "gate": {"on_s": 1.0, "off_s": 0.5}}}}
//! ```
//!
//! Channels not listed are silent. Noise is uniform white noise in
//! `[-amplitude, amplitude]` from a seeded ChaCha generator, so the same spec
//! always produces the same samples. A gate alternates on/off segments
//! starting "on" at frame 0.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clip::AudioClip;
use crate::layout::{Channel, ChannelLayout};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignalError {
    #[error("invalid test signal spec: {0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> SignalError {
    SignalError::Invalid(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Component {
    Sine { freq: f64, amplitude: f64 },
    Noise { seed: u64, amplitude: f64 },
    Silence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub on_s: f64,
    pub off_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSignal {
    #[serde(flatten)]
    pub component: Component,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate: Option<Gate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSignalSpec {
    pub layout: ChannelLayout,
    pub sample_rate: u32,
    /// Seconds.
    pub duration: f64,
    #[serde(default)]
    pub channels: BTreeMap<String, ChannelSignal>,
}

impl TestSignalSpec {
    pub fn new(layout: ChannelLayout, sample_rate: u32, duration: f64) -> Self {
        TestSignalSpec {
            layout,
            sample_rate,
            duration,
            channels: BTreeMap::new(),
        }
    }

    pub fn with(mut self, channel: Channel, component: Component) -> Self {
        self.channels.insert(
            channel.name().to_string(),
            ChannelSignal {
                component,
                gate: None,
            },
        );
        self
    }

    pub fn with_gated(mut self, channel: Channel, component: Component, gate: Gate) -> Self {
        self.channels.insert(
            channel.name().to_string(),
            ChannelSignal {
                component,
                gate: Some(gate),
            },
        );
        self
    }

    pub fn from_json(text: &str) -> Result<Self, SignalError> {
        let spec: TestSignalSpec =
            serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn frame_count(&self) -> usize {
        (self.duration * f64::from(self.sample_rate)).round() as usize
    }

    pub fn validate(&self) -> Result<(), SignalError> {
        if self.sample_rate == 0 {
            return Err(invalid("sample_rate must be positive"));
        }
        if !self.duration.is_finite() || self.duration < 0.0 {
            return Err(invalid(format!("duration must be >= 0 seconds, got {}", self.duration)));
        }
        for (key, signal) in &self.channels {
            let channel: Channel = key
                .parse()
                .map_err(|_| invalid(format!("unknown channel \"{key}\"")))?;
            if !self.layout.contains(channel) {
                return Err(invalid(format!(
                    "channel \"{key}\" is not in layout {}",
                    self.layout
                )));
            }
            let amplitude = match signal.component {
                Component::Sine { freq, amplitude } => {
                    if !(freq.is_finite() && freq > 0.0) {
                        return Err(invalid(format!("\"{key}\": frequency must be > 0, got {freq}")));
                    }
                    amplitude
                }
                Component::Noise { amplitude, .. } => amplitude,
                Component::Silence => 0.0,
            };
            if !(0.0..=1.0).contains(&amplitude) {
                return Err(invalid(format!(
                    "\"{key}\": amplitude must be in [0, 1], got {amplitude}"
                )));
            }
            if let Some(gate) = signal.gate {
                if !(gate.on_s.is_finite() && gate.on_s > 0.0 && gate.off_s.is_finite() && gate.off_s >= 0.0) {
                    return Err(invalid(format!(
                        "\"{key}\": gate needs on_s > 0 and off_s >= 0"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Whether frame `t` falls in an "on" segment of `gate`.
pub fn gate_is_on(gate: &Gate, sample_rate: u32, t: usize) -> bool {
    let rate = f64::from(sample_rate);
    let on = (gate.on_s * rate).round() as usize;
    let off = (gate.off_s * rate).round() as usize;
    if off == 0 {
        return true;
    }
    t % (on + off) < on
}

fn render(signal: &ChannelSignal, sample_rate: u32, frames: usize) -> Vec<f64> {
    let mut out = match signal.component {
        Component::Silence => vec![0.0; frames],
        Component::Sine { freq, amplitude } => {
            let step = 2.0 * std::f64::consts::PI * freq / f64::from(sample_rate);
            (0..frames).map(|t| amplitude * (step * t as f64).sin()).collect()
        }
        Component::Noise { seed, amplitude } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..frames)
                .map(|_| amplitude * (2.0 * rng.random::<f64>() - 1.0))
                .collect()
        }
    };
    if let Some(gate) = &signal.gate {
        for (t, s) in out.iter_mut().enumerate() {
            if !gate_is_on(gate, sample_rate, t) {
                *s = 0.0;
            }
        }
    }
    out
}

pub fn generate(spec: &TestSignalSpec) -> Result<AudioClip, SignalError> {
    spec.validate()?;
    let frames = spec.frame_count();
    let mut clip = AudioClip::silence(spec.layout, spec.sample_rate, frames);
    for (key, signal) in &spec.channels {
        let channel: Channel = key.parse().expect("validated");
        let samples = render(signal, spec.sample_rate, frames);
        clip.channel_mut(channel)
            .expect("validated")
            .copy_from_slice(&samples);
    }
    Ok(clip)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mix::peak_scan;

    #[test]
    fn parses_and_generates() {
        let spec = TestSignalSpec::from_json(
            r#"{"layout":"5.1","sample_rate":48000,"duration":0.5,
                "channels":{"C":{"kind":"sine","freq":997,"amplitude":0.5},
                            "Ls":{"kind":"noise","seed":7,"amplitude":0.3,"gate":{"on_s":0.1,"off_s":0.1}}}}"#,
        )
        .unwrap();
        let clip = generate(&spec).unwrap();
        assert_eq!(clip.frame_count(), 24000);
        let peaks = peak_scan(&clip);
        assert!(peaks[2] <= 0.5 && peaks[2] > 0.499);
        assert!(peaks[4] <= 0.3 && peaks[4] > 0.29);
        assert_eq!(peaks[0], 0.0);
        let ls = clip.channel(Channel::Ls).unwrap();
        assert!(ls[4800..9600].iter().all(|&s| s == 0.0));
        assert!(ls[..4800].iter().any(|&s| s != 0.0));
    }

    #[test]
    fn deterministic() {
        let spec = TestSignalSpec::new(ChannelLayout::Surround30, 8000, 0.1)
            .with(Channel::C, Component::Noise { seed: 42, amplitude: 1.0 });
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = TestSignalSpec::new(ChannelLayout::Surround30, 8000, 0.1)
            .with(Channel::C, Component::Noise { seed: 43, amplitude: 1.0 });
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        let base = TestSignalSpec::new(ChannelLayout::Surround30, 8000, 0.1);
        let loud = base.clone().with(Channel::C, Component::Sine { freq: 100.0, amplitude: 1.5 });
        assert!(generate(&loud).is_err());
        let missing = base.clone().with(Channel::Ls, Component::Silence);
        let err = generate(&missing).unwrap_err().to_string();
        assert!(err.contains("\"Ls\""), "{err}");
        assert!(TestSignalSpec::from_json(r#"{"layout":"4.0","sample_rate":1,"duration":1}"#).is_err());
        let bad_gate = base.with_gated(
            Channel::C,
            Component::Silence,
            Gate { on_s: 0.0, off_s: 1.0 },
        );
        assert!(bad_gate.validate().is_err());
    }
}
