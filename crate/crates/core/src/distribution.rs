use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::outcome::{Cell, Outcome, SettingPair};
use crate::scalar::Probability;

/// Probabilities of the four joint outcomes for one setting pair.
///
/// Entries are non-negative and sum to one, exactly for rational scalars and
/// within the float tolerances otherwise. Constructed only through
/// [`validate_distribution`] or its aliases.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointDistribution<T> {
    probs: [T; 4],
    settings: Option<SettingPair>,
}

/// Checks four probabilities in `++, +-, -+, --` order.
///
/// Float entries in `[-1e-12, 0)` are clamped to zero. The sum is checked but
/// never renormalized.
pub fn validate_distribution<T: Probability>(probs: [T; 4]) -> Result<JointDistribution<T>> {
    if probs.iter().any(|p| !p.is_finite_value()) {
        return Err(Error::NonFinite { what: "probability" });
    }
    let clamp = T::clamp_tolerance();
    let mut clamped = probs;
    for (cell, p) in Cell::ALL.into_iter().zip(clamped.iter_mut()) {
        if *p < -clamp.clone() {
            return Err(Error::NegativeProbability { cell, value: p.approx() });
        }
        if p.is_negative() {
            *p = T::zero();
        }
    }
    let sum = clamped.iter().cloned().fold(T::zero(), |acc, p| acc + p);
    if (sum.clone() - T::one()).abs() > T::normalization_tolerance() {
        return Err(Error::NotNormalized { sum: sum.approx() });
    }
    Ok(JointDistribution { probs: clamped, settings: None })
}

impl<T: Probability> JointDistribution<T> {
    pub fn new(p_pp: T, p_pm: T, p_mp: T, p_mm: T) -> Result<Self> {
        validate_distribution([p_pp, p_pm, p_mp, p_mm])
    }

    pub fn with_settings(mut self, settings: SettingPair) -> Self {
        self.settings = Some(settings);
        self
    }

    pub fn settings(&self) -> Option<SettingPair> {
        self.settings
    }

    pub fn probabilities(&self) -> &[T; 4] {
        &self.probs
    }

    pub fn get(&self, cell: Cell) -> &T {
        &self.probs[cell.index()]
    }

    pub fn prob(&self, a: Outcome, b: Outcome) -> &T {
        self.get(Cell::new(a, b))
    }

    pub fn pp(&self) -> &T {
        &self.probs[0]
    }

    pub fn pm(&self) -> &T {
        &self.probs[1]
    }

    pub fn mp(&self) -> &T {
        &self.probs[2]
    }

    pub fn mm(&self) -> &T {
        &self.probs[3]
    }

    pub fn total(&self) -> T {
        self.probs.iter().cloned().fold(T::zero(), |acc, p| acc + p)
    }

    /// Tolerance for identities that hold exactly when the entries sum to one.
    ///
    /// Every such identity is off by at most `|sum - 1|`, which is zero for
    /// exact scalars.
    pub fn identity_tolerance(&self) -> T {
        if T::EXACT {
            T::zero()
        } else {
            T::comparison_tolerance() + (self.total() - T::one()).abs()
        }
    }

    pub fn to_f64(&self) -> JointDistribution<f64> {
        JointDistribution {
            probs: [self.probs[0].approx(), self.probs[1].approx(), self.probs[2].approx(), self.probs[3].approx()],
            settings: self.settings,
        }
    }
}

impl JointDistribution<f64> {
    pub fn uniform() -> Self {
        JointDistribution { probs: [0.25; 4], settings: None }
    }
}

impl JointDistribution<BigRational> {
    pub fn from_ratios(ratios: [(i64, i64); 4]) -> Result<Self> {
        let probs = ratios.map(|(n, d)| BigRational::new(n.into(), d.into()));
        validate_distribution(probs)
    }
}
