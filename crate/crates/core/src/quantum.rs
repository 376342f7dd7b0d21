//! Born-rule joint distributions for two-qubit pure states under ideal
//! projective measurements.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::distribution::{validate_distribution, JointDistribution};
use crate::error::{Error, Result};
use crate::inequality::{CorrelatorSummary, Provenance};
use crate::outcome::{Kind, Outcome, SettingPair};
use crate::rng::generator;

/// Normalized state in the basis `++, +-, -+, --` of the reference analyzers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoQubitState {
    amplitudes: [Complex64; 4],
    kind: Kind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// `(|+-> - |-+>) / √2`
    Singlet,
    /// `(|++> + |-->) / √2`
    PhiPlus,
    /// Each particle in the `+` state of an analyzer at the given angle.
    Product(f64, f64),
    Raw([Complex64; 4]),
}

impl TwoQubitState {
    /// Normalizes `amplitudes`; fails only when they are all zero.
    pub fn new(amplitudes: [Complex64; 4], kind: Kind) -> Result<Self> {
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { what: "amplitude" });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(TwoQubitState { amplitudes: amplitudes.map(|z| z / norm), kind })
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amplitudes
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }
}

pub fn state_from_spec(spec: &StateSpec, kind: Kind) -> Result<TwoQubitState> {
    let c = |re: f64| Complex64::new(re, 0.0);
    let amplitudes = match spec {
        StateSpec::Singlet => [c(0.0), c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2), c(0.0)],
        StateSpec::PhiPlus => [c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)],
        StateSpec::Product(theta1, theta2) => {
            for theta in [theta1, theta2] {
                if !theta.is_finite() {
                    return Err(Error::NonFinite { what: "product state angle" });
                }
            }
            let u = basis_vector(Outcome::Plus, *theta1, kind);
            let v = basis_vector(Outcome::Plus, *theta2, kind);
            [c(u[0] * v[0]), c(u[0] * v[1]), c(u[1] * v[0]), c(u[1] * v[1])]
        }
        StateSpec::Raw(amplitudes) => *amplitudes,
    };
    TwoQubitState::new(amplitudes, kind)
}

/// Real unit vector for `outcome` of an analyzer at `angle`.
///
/// The `+` vector is `(cos h, sin h)` and the `-` vector `(-sin h, cos h)`
/// with `h = angle` for photons and `h = angle / 2` for spins.
pub fn basis_vector(outcome: Outcome, angle: f64, kind: Kind) -> [f64; 2] {
    let h = angle * kind.angle_factor() / 2.0;
    let (s, c) = h.sin_cos();
    match outcome {
        Outcome::Plus => [c, s],
        Outcome::Minus => [-s, c],
    }
}

/// `P(s, t) = |<s(a) ⊗ t(b) | ψ>|²` for the four outcome pairs.
pub fn born_joint(state: &TwoQubitState, pair: SettingPair) -> Result<JointDistribution<f64>> {
    let kind = state.kind;
    let psi = &state.amplitudes;
    let mut probs = [0.0; 4];
    for (i, (s, t)) in [
        (Outcome::Plus, Outcome::Plus),
        (Outcome::Plus, Outcome::Minus),
        (Outcome::Minus, Outcome::Plus),
        (Outcome::Minus, Outcome::Minus),
    ]
    .into_iter()
    .enumerate()
    {
        let u = basis_vector(s, pair.a.angle(), kind);
        let v = basis_vector(t, pair.b.angle(), kind);
        let amp = psi[0] * (u[0] * v[0]) + psi[1] * (u[0] * v[1]) + psi[2] * (u[1] * v[0]) + psi[3] * (u[1] * v[1]);
        probs[i] = amp.norm_sqr();
    }
    validate_distribution(probs).map(|d| d.with_settings(pair))
}

/// `(0, 0, -cos(k (a - b)))` for the singlet.
pub fn singlet_closed_form(pair: SettingPair, kind: Kind) -> CorrelatorSummary<f64> {
    let corr = -(kind.angle_factor() * (pair.a.angle() - pair.b.angle())).cos();
    CorrelatorSummary { mean_a: 0.0, mean_b: 0.0, corr, provenance: Provenance::SingleDistribution }
}

/// Haar-random state from eight standard-normal draws.
pub fn random_pure_state(seed: u64, kind: Kind) -> TwoQubitState {
    let mut rng = generator(seed);
    loop {
        let amplitudes: [Complex64; 4] = std::array::from_fn(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        });
        if let Ok(state) = TwoQubitState::new(amplitudes, kind) {
            return state;
        }
    }
}
