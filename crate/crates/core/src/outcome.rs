//! Dichotomic outcomes, the four outcome cells, and apparatus settings.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Result of one dichotomic measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn value(self) -> i64 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Outcome::Plus => '+',
            Outcome::Minus => '-',
        }
    }
}

impl TryFrom<i64> for Outcome {
    type Error = i64;

    fn try_from(value: i64) -> std::result::Result<Self, i64> {
        match value {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            other => Err(other),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// One of the four joint outcomes `(A, B)`, in the fixed order
/// `++`, `+-`, `-+`, `--` used for storage and sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cell {
    #[serde(rename = "++")]
    PlusPlus,
    #[serde(rename = "+-")]
    PlusMinus,
    #[serde(rename = "-+")]
    MinusPlus,
    #[serde(rename = "--")]
    MinusMinus,
}

impl Cell {
    pub const ALL: [Cell; 4] = [Cell::PlusPlus, Cell::PlusMinus, Cell::MinusPlus, Cell::MinusMinus];

    pub fn new(a: Outcome, b: Outcome) -> Self {
        match (a, b) {
            (Outcome::Plus, Outcome::Plus) => Cell::PlusPlus,
            (Outcome::Plus, Outcome::Minus) => Cell::PlusMinus,
            (Outcome::Minus, Outcome::Plus) => Cell::MinusPlus,
            (Outcome::Minus, Outcome::Minus) => Cell::MinusMinus,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn outcomes(self) -> (Outcome, Outcome) {
        match self {
            Cell::PlusPlus => (Outcome::Plus, Outcome::Plus),
            Cell::PlusMinus => (Outcome::Plus, Outcome::Minus),
            Cell::MinusPlus => (Outcome::Minus, Outcome::Plus),
            Cell::MinusMinus => (Outcome::Minus, Outcome::Minus),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.outcomes();
        write!(f, "{a}{b}")
    }
}

/// Physical convention relating analyzer angles to measurement bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Polarization: outcome statistics depend on twice the angle.
    #[default]
    Photon,
    /// Spin one-half: statistics depend on the angle itself.
    Spin,
}

impl Kind {
    /// The factor `k` in `cos(k (a - b))`.
    pub fn angle_factor(self) -> f64 {
        match self {
            Kind::Photon => 2.0,
            Kind::Spin => 1.0,
        }
    }

    /// Rotation after which a measurement basis repeats up to sign.
    pub fn period(self) -> f64 {
        match self {
            Kind::Photon => PI,
            Kind::Spin => 2.0 * PI,
        }
    }
}

/// Analyzer angle in radians, stored as given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Setting(f64);

impl Setting {
    pub fn new(angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::NonFinite { what: "setting angle" });
        }
        Ok(Setting(angle))
    }

    pub fn angle(self) -> f64 {
        self.0
    }

    /// Angle reduced to `[0, π)` for photons or `[0, 2π)` for spins.
    pub fn canonical(self, kind: Kind) -> f64 {
        let period = kind.period();
        let r = self.0.rem_euclid(period);
        if r >= period {
            0.0
        } else {
            r
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SettingPair {
    pub a: Setting,
    pub b: Setting,
}

impl SettingPair {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Ok(SettingPair {
            a: Setting::new(a)?,
            b: Setting::new(b)?,
        })
    }
}

impl fmt::Display for SettingPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, b={})", self.a, self.b)
    }
}
