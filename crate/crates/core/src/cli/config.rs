//! Declarative scenario description, read from JSON.

use std::fmt;
use std::path::PathBuf;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use super::CliError;
use crate::hv::MalusProductModel;
use crate::outcome::{Kind, SettingPair};
use crate::quantum::{state_from_spec, StateSpec, TwoQubitState};
use crate::scalar::{parse_rational, rational_from_f64_decimal};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Check,
    Trace,
    Quantum,
    Sweep,
    Mixed,
    Mc,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Check => "check",
            ScenarioKind::Trace => "trace",
            ScenarioKind::Quantum => "quantum",
            ScenarioKind::Sweep => "sweep",
            ScenarioKind::Mixed => "mixed",
            ScenarioKind::Mc => "mc",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Angle in radians. Only JSON numbers are accepted; unit-suffixed strings
/// such as `"deg:30"` are rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(pub f64);

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct AngleVisitor;

        impl Visitor<'_> for AngleVisitor {
            type Value = Angle;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an angle in radians as a JSON number")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Angle, E> {
                Ok(Angle(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Angle, E> {
                Err(E::custom(format!("angle {v:?} rejected: angles are radians given as JSON numbers")))
            }
        }

        deserializer.deserialize_any(AngleVisitor)
    }
}

/// A probability given as a JSON number (read through its decimal text) or
/// a string holding a decimal or fraction such as `"1/3"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbabilityValue {
    Number(f64),
    Text(String),
}

impl ProbabilityValue {
    pub fn to_rational(&self) -> Result<BigRational, CliError> {
        match self {
            ProbabilityValue::Number(x) => rational_from_f64_decimal(*x),
            ProbabilityValue::Text(s) => parse_rational(s),
        }
        .ok_or_else(|| CliError::Config(format!("cannot read probability {self:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateConfig {
    /// `"singlet"` or `"phi_plus"`.
    Named(String),
    Product { product: [Angle; 2] },
    /// Four `[re, im]` pairs in `++, +-, -+, --` order.
    Amplitudes { amplitudes: [[f64; 2]; 4] },
}

impl StateConfig {
    pub fn spec(&self) -> Result<StateSpec, CliError> {
        match self {
            StateConfig::Named(name) => match name.as_str() {
                "singlet" => Ok(StateSpec::Singlet),
                "phi_plus" => Ok(StateSpec::PhiPlus),
                other => Err(CliError::Config(format!("unknown state {other:?}; expected \"singlet\" or \"phi_plus\""))),
            },
            StateConfig::Product { product } => Ok(StateSpec::Product(product[0].0, product[1].0)),
            StateConfig::Amplitudes { amplitudes } => Ok(StateSpec::Raw(amplitudes.map(|[re, im]| Complex64::new(re, im)))),
        }
    }

    pub fn is_singlet(&self) -> bool {
        matches!(self, StateConfig::Named(name) if name == "singlet")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingsConfig {
    pub a: Angle,
    pub b: Angle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    A,
    B,
    /// Both settings move together.
    Ab,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub param: SweepParam,
    pub from: Angle,
    pub to: Angle,
    pub steps: usize,
}

impl SweepConfig {
    /// `steps` evenly spaced values including both endpoints.
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        let (from, to) = (self.from.0, self.to.0);
        if self.steps < 2 {
            return Err(CliError::Config(format!("sweep needs at least 2 steps, got {}", self.steps)));
        }
        if !(from.is_finite() && to.is_finite() && from < to) {
            return Err(CliError::Config(format!("sweep range must satisfy from < to, got [{from}, {to}]")));
        }
        let last = self.steps - 1;
        Ok((0..self.steps)
            .map(|i| if i == last { to } else { from + (to - from) * i as f64 / last as f64 })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarginalModelConfig {
    pub u: Angle,
    pub v: Angle,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<[ProbabilityValue; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateConfig>,
    #[serde(default)]
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub settings: Option<SettingsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marginal_model: Option<MarginalModelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn missing(scenario: ScenarioKind, field: &str) -> CliError {
    CliError::Config(format!("scenario {scenario} requires field \"{field}\""))
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: ScenarioConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if config.schema != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema {}; this build reads schema {SCHEMA_VERSION}",
                config.schema
            )));
        }
        Ok(config)
    }

    pub fn scenario(&self) -> Result<ScenarioKind, CliError> {
        self.scenario.ok_or_else(|| CliError::Config("no scenario given".into()))
    }

    /// Checks that the fields the scenario needs are present.
    pub fn validate(&self) -> Result<ScenarioKind, CliError> {
        let scenario = self.scenario()?;
        let need = |present: bool, field: &str| if present { Ok(()) } else { Err(missing(scenario, field)) };
        match scenario {
            ScenarioKind::Check | ScenarioKind::Trace => need(self.distribution.is_some(), "distribution")?,
            ScenarioKind::Quantum => {
                need(self.state.is_some(), "state")?;
                need(self.settings.is_some(), "settings")?;
            }
            ScenarioKind::Mixed => {
                need(self.state.is_some(), "state")?;
                need(self.settings.is_some(), "settings")?;
                need(self.marginal_model.is_some(), "marginal_model")?;
            }
            ScenarioKind::Sweep => {
                need(self.state.is_some(), "state")?;
                need(self.settings.is_some(), "settings")?;
                need(self.sweep.is_some(), "sweep")?;
            }
            ScenarioKind::Mc => {
                need(self.distribution.is_some(), "distribution")?;
                need(self.samples.is_some(), "samples")?;
            }
        }
        if self.sweep.is_some() && matches!(scenario, ScenarioKind::Check | ScenarioKind::Trace | ScenarioKind::Mc) {
            return Err(CliError::Config(format!("scenario {scenario} does not take a sweep block")));
        }
        if let Some(sweep) = &self.sweep {
            sweep.points()?;
        }
        if let Some(z) = self.z {
            if !(z > 0.0 && z.is_finite()) {
                return Err(CliError::Config(format!("z must be positive, got {z}")));
            }
        }
        Ok(scenario)
    }

    pub fn exact_distribution(&self) -> Result<[BigRational; 4], CliError> {
        let values = self.distribution.as_ref().ok_or_else(|| CliError::Config("no distribution given".into()))?;
        let [a, b, c, d] = values;
        Ok([a.to_rational()?, b.to_rational()?, c.to_rational()?, d.to_rational()?])
    }

    pub fn setting_pair(&self) -> Result<SettingPair, CliError> {
        let s = self.settings.ok_or_else(|| CliError::Config("no settings given".into()))?;
        Ok(SettingPair::new(s.a.0, s.b.0)?)
    }

    pub fn two_qubit_state(&self) -> Result<TwoQubitState, CliError> {
        let state = self.state.as_ref().ok_or_else(|| CliError::Config("no state given".into()))?;
        Ok(state_from_spec(&state.spec()?, self.kind)?)
    }

    pub fn malus_model(&self) -> Result<MalusProductModel, CliError> {
        let m = self.marginal_model.ok_or_else(|| CliError::Config("no marginal_model given".into()))?;
        Ok(MalusProductModel::new(m.u.0, m.v.0, self.kind)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let text = r#"{
            "schema": 1, "scenario": "sweep", "state": "singlet", "kind": "photon",
            "settings": {"a": 0, "b": 0.0},
            "sweep": {"param": "b", "from": 0, "to": 3.141592653589793, "steps": 5},
            "output": {"report": "r.json", "table": "t.csv"}
        }"#;
        let c = ScenarioConfig::from_json(text).unwrap();
        assert_eq!(c.validate().unwrap(), ScenarioKind::Sweep);
        assert_eq!(c.sweep.unwrap().points().unwrap().len(), 5);
        assert_eq!(c.kind, Kind::Photon);
    }

    #[test]
    fn degree_strings_are_rejected() {
        let text = r#"{"schema": 1, "scenario": "quantum", "state": "singlet", "settings": {"a": "deg:30", "b": 0}}"#;
        let err = ScenarioConfig::from_json(text).unwrap_err();
        assert!(err.to_string().contains("radians"), "{err}");
    }

    #[test]
    fn wrong_schema_and_unknown_fields_are_rejected() {
        assert!(ScenarioConfig::from_json(r#"{"schema": 2, "scenario": "check"}"#).is_err());
        assert!(ScenarioConfig::from_json(r#"{"schema": 1, "scenario": "check", "extra": 1}"#).is_err());
    }

    #[test]
    fn required_fields_per_scenario() {
        let c = ScenarioConfig::from_json(r#"{"schema": 1, "scenario": "check"}"#).unwrap();
        assert!(c.validate().unwrap_err().to_string().contains("distribution"));
        let c = ScenarioConfig::from_json(r#"{"schema": 1, "scenario": "mixed", "state": "singlet", "settings": {"a": 0, "b": 0}}"#).unwrap();
        assert!(c.validate().unwrap_err().to_string().contains("marginal_model"));
        let c = ScenarioConfig::from_json(r#"{"schema": 1, "scenario": "mc", "distribution": [1, 0, 0, 0]}"#).unwrap();
        assert!(c.validate().unwrap_err().to_string().contains("samples"));
    }

    #[test]
    fn sweep_preconditions() {
        let sweep = |steps, from, to| SweepConfig { param: SweepParam::B, from: Angle(from), to: Angle(to), steps };
        assert!(sweep(1, 0.0, 1.0).points().is_err());
        assert!(sweep(3, 1.0, 1.0).points().is_err());
        assert_eq!(sweep(3, 0.0, 1.0).points().unwrap(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn probabilities_read_exactly() {
        let text = r#"{"schema": 1, "scenario": "check", "distribution": [0.4, "1/10", "0.2", 0.3]}"#;
        let c = ScenarioConfig::from_json(text).unwrap();
        let p = c.exact_distribution().unwrap();
        assert_eq!(p[0], BigRational::new(2.into(), 5.into()));
        assert_eq!(p[1], BigRational::new(1.into(), 10.into()));
        assert_eq!(p[2], BigRational::new(1.into(), 5.into()));
    }

    #[test]
    fn state_forms() {
        let c: StateConfig = serde_json::from_str(r#"{"product": [0, 0.5]}"#).unwrap();
        assert_eq!(c.spec().unwrap(), StateSpec::Product(0.0, 0.5));
        let c: StateConfig = serde_json::from_str(r#"{"amplitudes": [[1,0],[0,0],[0,0],[0,1]]}"#).unwrap();
        assert!(matches!(c.spec().unwrap(), StateSpec::Raw(_)));
        let c: StateConfig = serde_json::from_str(r#""ghz""#).unwrap();
        assert!(c.spec().is_err());
    }

    #[test]
    fn echo_round_trips() {
        let text = r#"{"schema": 1, "scenario": "mixed", "state": "singlet", "kind": "spin",
            "settings": {"a": 0.1, "b": 0.2}, "marginal_model": {"u": 0, "v": 0}, "z": 4.0,
            "distribution": [0.25, "1/4", 0.25, 0.25], "output": {"report": "out.json"}}"#;
        let c = ScenarioConfig::from_json(text).unwrap();
        let echo = serde_json::to_string(&c).unwrap();
        assert_eq!(ScenarioConfig::from_json(&echo).unwrap(), c);
    }
}
