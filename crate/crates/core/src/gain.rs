use std::fmt;

use serde::{Deserialize, Serialize};

/// A linear gain multiple. Gains are stored and applied linearly; decibels
/// only appear at the edges (flags, reports).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gain(pub f64);

impl Gain {
    pub const UNITY: Gain = Gain(1.0);
    pub const ZERO: Gain = Gain(0.0);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn from_db(db: f64) -> Gain {
        db_to_gain(db)
    }

    pub fn to_db(self) -> f64 {
        gain_to_db(self)
    }
}

impl fmt::Display for Gain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x", self.0)
    }
}

/// `10^(db/20)`.
pub fn db_to_gain(db: f64) -> Gain {
    Gain(10f64.powf(db / 20.0))
}

/// `20·log10(g)`. A zero gain yields `f64::NEG_INFINITY`.
pub fn gain_to_db(gain: Gain) -> f64 {
    if gain.0 == 0.0 {
        return f64::NEG_INFINITY;
    }
    20.0 * gain.0.log10()
}
