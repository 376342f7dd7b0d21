//! Hidden-variable side: Malus-law subensembles with definite polarizations,
//! and the constructor that takes marginals and correlator from different
//! distributions.

use serde::Serialize;

use crate::distribution::{validate_distribution, JointDistribution};
use crate::error::{Error, Result};
use crate::inequality::{summarize, CorrelatorSummary, Provenance};
use crate::outcome::{Kind, Outcome, Setting, SettingPair};
use crate::quantum::{born_joint, TwoQubitState};
use crate::scalar::Probability;

/// Two particles with definite polarizations `u` and `v`, measured
/// independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MalusProductModel {
    pub u: Setting,
    pub v: Setting,
    pub kind: Kind,
}

impl MalusProductModel {
    pub fn new(u: f64, v: f64, kind: Kind) -> Result<Self> {
        Ok(MalusProductModel { u: Setting::new(u)?, v: Setting::new(v)?, kind })
    }
}

/// Probability of outcome `+` for a particle with definite polarization `u`
/// at an analyzer set to `a`: `cos²(k (a - u) / 2)`.
pub fn malus_transmission(u: Setting, a: Setting, kind: Kind) -> f64 {
    let half = kind.angle_factor() * (a.angle() - u.angle()) / 2.0;
    half.cos().powi(2)
}

/// `Ā(u, a) = cos(k (a - u))`.
pub fn malus_marginal(u: Setting, a: Setting, kind: Kind) -> f64 {
    (kind.angle_factor() * (a.angle() - u.angle())).cos()
}

/// Factorized joint distribution `P(s, t) = P(s | u, a) · P(t | v, b)`.
pub fn malus_product_joint(model: &MalusProductModel, pair: SettingPair) -> Result<JointDistribution<f64>> {
    let pa = malus_transmission(model.u, pair.a, model.kind);
    let pb = malus_transmission(model.v, pair.b, model.kind);
    let single = |p: f64, o: Outcome| match o {
        Outcome::Plus => p,
        Outcome::Minus => 1.0 - p,
    };
    let probs = [
        single(pa, Outcome::Plus) * single(pb, Outcome::Plus),
        single(pa, Outcome::Plus) * single(pb, Outcome::Minus),
        single(pa, Outcome::Minus) * single(pb, Outcome::Plus),
        single(pa, Outcome::Minus) * single(pb, Outcome::Minus),
    ];
    validate_distribution(probs).map(|d| d.with_settings(pair))
}

/// Where one side of a mixed triple was computed from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Source {
    Malus { model: MalusProductModel, settings: SettingPair },
    Quantum { state: TwoQubitState, settings: SettingPair },
    Distribution { probabilities: [f64; 4], settings: Option<SettingPair> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixedSummary<T = f64> {
    pub summary: CorrelatorSummary<T>,
    pub marginal_source: Source,
    pub correlation_source: Source,
}

fn ensure_same_settings(marginal: Option<SettingPair>, correlation: Option<SettingPair>) -> Result<()> {
    match (marginal, correlation) {
        (Some(m), Some(c)) if m != c => Err(Error::SettingMismatch {
            marginal: m.to_string(),
            correlation: c.to_string(),
        }),
        _ => Ok(()),
    }
}

/// Marginals of `marginal`, correlator of `correlation`.
///
/// Passing the same distribution twice reproduces the single-distribution
/// triple, apart from the provenance tag.
pub fn mix_distributions<T: Probability>(
    marginal: &JointDistribution<T>,
    correlation: &JointDistribution<T>,
) -> Result<MixedSummary<T>> {
    ensure_same_settings(marginal.settings(), correlation.settings())?;
    let m = summarize(marginal)?;
    let c = summarize(correlation)?;
    let describe = |d: &JointDistribution<T>| Source::Distribution {
        probabilities: d.to_f64().probabilities().to_owned(),
        settings: d.settings(),
    };
    Ok(MixedSummary {
        summary: CorrelatorSummary { mean_a: m.mean_a, mean_b: m.mean_b, corr: c.corr, provenance: Provenance::Mixed },
        marginal_source: describe(marginal),
        correlation_source: describe(correlation),
    })
}

/// Marginals from a Malus-law subensemble, correlator from the Born rule.
pub fn mixed_triple(
    model: &MalusProductModel,
    marginal_settings: SettingPair,
    state: &TwoQubitState,
    correlation_settings: SettingPair,
) -> Result<MixedSummary> {
    ensure_same_settings(Some(marginal_settings), Some(correlation_settings))?;
    let hv = malus_product_joint(model, marginal_settings)?;
    let quantum = born_joint(state, correlation_settings)?;
    let mixed = mix_distributions(&hv, &quantum)?;
    Ok(MixedSummary {
        summary: mixed.summary,
        marginal_source: Source::Malus { model: *model, settings: marginal_settings },
        correlation_source: Source::Quantum { state: state.clone(), settings: correlation_settings },
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, SQRT_2};

    use super::*;
    use crate::inequality::{check_distribution, check_summary};
    use crate::quantum::{random_pure_state, state_from_spec, StateSpec};

    fn s(x: f64) -> Setting {
        Setting::new(x).unwrap()
    }

    fn pair(a: f64, b: f64) -> SettingPair {
        SettingPair::new(a, b).unwrap()
    }

    #[test]
    fn malus_marginal_examples() {
        assert_eq!(malus_marginal(s(0.0), s(0.0), Kind::Photon), 1.0);
        assert!(malus_marginal(s(0.0), s(FRAC_PI_4), Kind::Photon).abs() < 1e-15);
        assert!((malus_marginal(s(0.0), s(FRAC_PI_2), Kind::Photon) + 1.0).abs() < 1e-15);
        assert!(malus_marginal(s(0.0), s(FRAC_PI_2), Kind::Spin).abs() < 1e-15);
    }

    #[test]
    fn marginal_is_signed_transmission() {
        for i in 0..40 {
            let (u, a) = (s(0.1 * i as f64), s(-0.23 * i as f64));
            for kind in [Kind::Photon, Kind::Spin] {
                let p = malus_transmission(u, a, kind);
                assert!((2.0 * p - 1.0 - malus_marginal(u, a, kind)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn product_joint_examples() {
        let model = MalusProductModel::new(0.0, 0.0, Kind::Photon).unwrap();
        let p = malus_product_joint(&model, pair(0.0, 0.0)).unwrap();
        assert_eq!(p.probabilities(), &[1.0, 0.0, 0.0, 0.0]);

        let p = malus_product_joint(&model, pair(FRAC_PI_4, FRAC_PI_4)).unwrap();
        for x in p.probabilities() {
            assert!((x - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn product_joint_factorizes_and_satisfies_bounds() {
        for i in 0..200 {
            let f = i as f64;
            let kind = if i % 2 == 0 { Kind::Photon } else { Kind::Spin };
            let model = MalusProductModel::new(0.3 * f, -0.7 * f, kind).unwrap();
            let p = malus_product_joint(&model, pair(1.1 * f, 0.13 * f)).unwrap();
            let summary = summarize(&p).unwrap();
            assert!((summary.corr - summary.mean_a * summary.mean_b).abs() < 1e-12);
            assert!(check_distribution(&p).unwrap().satisfied);
        }
    }

    #[test]
    fn canonical_mixing_violates_lower_bound_by_two() {
        let model = MalusProductModel::new(0.0, 0.0, Kind::Photon).unwrap();
        let singlet = state_from_spec(&StateSpec::Singlet, Kind::Photon).unwrap();
        let mixed = mixed_triple(&model, pair(0.0, 0.0), &singlet, pair(0.0, 0.0)).unwrap();
        let t = &mixed.summary;
        assert_eq!(t.provenance, Provenance::Mixed);
        assert!((t.mean_a - 1.0).abs() < 1e-12 && (t.mean_b - 1.0).abs() < 1e-12);
        assert!((t.corr + 1.0).abs() < 1e-12);
        let r = check_summary(t).unwrap();
        assert!(!r.satisfied);
        assert!((r.lower_slack + 2.0).abs() < 1e-12);
    }

    #[test]
    fn mixing_at_forty_five_degrees_is_satisfied() {
        let model = MalusProductModel::new(0.0, 0.0, Kind::Photon).unwrap();
        let singlet = state_from_spec(&StateSpec::Singlet, Kind::Photon).unwrap();
        let pr = pair(FRAC_PI_4, FRAC_PI_4);
        let r = check_summary(&mixed_triple(&model, pr, &singlet, pr).unwrap().summary).unwrap();
        assert!(r.summary.mean_a.abs() < 1e-15 && (r.summary.corr + 1.0).abs() < 1e-15);
        assert!((r.upper_bound - 1.0).abs() < 1e-15 && (r.lower_bound + 1.0).abs() < 1e-15);
        assert!(r.satisfied);
    }

    // Closed forms along a = b = θ with u = v = 0: Ā = B̄ = cos 2θ, E = -1,
    // so lower slack = -1 - (-1 + 2|cos 2θ|) = -2|cos 2θ|.
    #[test]
    fn mixed_lower_slack_follows_closed_form() {
        let model = MalusProductModel::new(0.0, 0.0, Kind::Photon).unwrap();
        let singlet = state_from_spec(&StateSpec::Singlet, Kind::Photon).unwrap();
        for (theta, expected) in [(0.0, -2.0), (FRAC_PI_8, -SQRT_2), (FRAC_PI_4, 0.0)] {
            let pr = pair(theta, theta);
            let r = check_summary(&mixed_triple(&model, pr, &singlet, pr).unwrap().summary).unwrap();
            let closed = -2.0 * (2.0 * theta).cos().abs();
            assert!((r.lower_slack - closed).abs() < 1e-12);
            assert!((r.lower_slack - expected).abs() < 1e-12, "θ={theta}: {}", r.lower_slack);
        }
    }

    #[test]
    fn mismatched_settings_are_rejected() {
        let model = MalusProductModel::new(0.0, 0.0, Kind::Photon).unwrap();
        let singlet = state_from_spec(&StateSpec::Singlet, Kind::Photon).unwrap();
        let err = mixed_triple(&model, pair(0.0, 0.0), &singlet, pair(0.0, 0.1)).unwrap_err();
        assert!(matches!(err, Error::SettingMismatch { .. }));
    }

    #[test]
    fn mixing_a_distribution_with_itself_is_never_violated() {
        for seed in 0..300 {
            let state = random_pure_state(seed, Kind::Photon);
            let p = born_joint(&state, pair(seed as f64 * 0.1, seed as f64 * 0.2)).unwrap();
            let mixed = mix_distributions(&p, &p).unwrap();
            let single = summarize(&p).unwrap();
            assert_eq!(mixed.summary.corr, single.corr);
            assert_eq!(mixed.summary.mean_a, single.mean_a);
            let verdict = check_summary(&mixed.summary).unwrap().satisfied;
            assert_eq!(verdict, check_distribution(&p).unwrap().satisfied);
            assert!(verdict);
        }
    }
}
