//! Random points of the probability simplex over the four outcome cells.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::index;
use rand_distr::{Distribution, Exp1};

use crate::distribution::{validate_distribution, JointDistribution};
use crate::error::{Error, Result};
use crate::rng::generator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexMode {
    /// Lattice points with every entry a multiple of `1/denominator`.
    Exact { denominator: u64 },
    /// Dirichlet(1, 1, 1, 1) in double precision.
    Float,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SampledDistribution {
    Exact(JointDistribution<BigRational>),
    Float(JointDistribution<f64>),
}

pub fn random_distribution(seed: u64, mode: SimplexMode) -> Result<SampledDistribution> {
    match mode {
        SimplexMode::Exact { denominator } => random_exact_distribution(seed, denominator).map(SampledDistribution::Exact),
        SimplexMode::Float => Ok(SampledDistribution::Float(random_float_distribution(seed))),
    }
}

/// Uniform over the compositions of `denominator` into four non-negative
/// parts: three distinct bar positions among `denominator + 3` slots.
pub fn random_exact_distribution(seed: u64, denominator: u64) -> Result<JointDistribution<BigRational>> {
    if denominator == 0 {
        return Err(Error::InvalidDenominator);
    }
    let counts = lattice_composition(seed, denominator);
    let den = BigInt::from(denominator);
    validate_distribution(counts.map(|c| BigRational::new(BigInt::from(c), den.clone())))
}

/// The four parts `(n_pp, n_pm, n_mp, n_mm)` behind [`random_exact_distribution`].
pub fn lattice_composition(seed: u64, denominator: u64) -> [u64; 4] {
    let mut rng = generator(seed);
    let slots = denominator.checked_add(3).expect("denominator below u64::MAX - 3");
    let len = usize::try_from(slots).expect("slot count fits in usize");
    let mut bars: Vec<u64> = index::sample(&mut rng, len, 3).into_iter().map(|i| i as u64).collect();
    bars.sort_unstable();
    [bars[0], bars[1] - bars[0] - 1, bars[2] - bars[1] - 1, slots - 1 - bars[2]]
}

/// Four unit-exponential draws divided by their sum.
pub fn random_float_distribution(seed: u64) -> JointDistribution<f64> {
    let mut rng = generator(seed);
    loop {
        let draws: [f64; 4] = std::array::from_fn(|_| Exp1.sample(&mut rng));
        let total: f64 = draws.iter().sum();
        if total > 0.0 {
            if let Ok(dist) = validate_distribution(draws.map(|x| x / total)) {
                return dist;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;

    #[test]
    fn exact_sample_lives_on_the_lattice() {
        let p = random_exact_distribution(42, 100).unwrap();
        let den = BigInt::from(100);
        for x in p.probabilities() {
            assert!((x * BigRational::from_integer(den.clone())).is_integer());
        }
        assert_eq!(p.total(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(random_distribution(42, SimplexMode::Exact { denominator: 100 }).unwrap(),
                   random_distribution(42, SimplexMode::Exact { denominator: 100 }).unwrap());
        assert_eq!(random_float_distribution(9), random_float_distribution(9));
        assert_ne!(random_float_distribution(9), random_float_distribution(10));
    }

    #[test]
    fn zero_denominator_is_rejected() {
        assert_eq!(random_exact_distribution(1, 0), Err(Error::InvalidDenominator));
    }

    #[test]
    fn denominator_one_hits_every_vertex() {
        let mut seen = std::collections::HashSet::new();
        for seed in 0..200 {
            seen.insert(lattice_composition(seed, 1));
        }
        assert_eq!(seen.len(), 4);
    }

    // N = 2 has C(5, 3) = 10 lattice points; each should appear ~1/10 of the time.
    #[test]
    fn lattice_sampling_is_uniform() {
        let draws = 20_000u64;
        let mut hist: HashMap<[u64; 4], u64> = HashMap::new();
        for seed in 0..draws {
            let c = lattice_composition(seed, 2);
            assert_eq!(c.iter().sum::<u64>(), 2);
            *hist.entry(c).or_default() += 1;
        }
        assert_eq!(hist.len(), 10);
        let expected = draws as f64 / 10.0;
        let sd = (draws as f64 * 0.1 * 0.9).sqrt();
        for (point, count) in hist {
            assert!((count as f64 - expected).abs() < 5.0 * sd, "{point:?}: {count}");
        }
    }

    #[test]
    fn float_sample_is_normalized() {
        for seed in 0..100 {
            let p = random_float_distribution(seed);
            assert!((p.total() - 1.0).abs() < 1e-12);
            assert!(p.probabilities().iter().all(|&x| x >= 0.0));
        }
    }
}
