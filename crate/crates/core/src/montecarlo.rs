//! Finite-sample trials drawn from a joint distribution, with estimators and
//! a z-scored version of the inequality check.
//!
//! Trials are drawn in blocks of [`BLOCK_SIZE`]. Block `i` uses its own
//! generator seeded with [`stream_seed`]`(seed, i)` and maps each uniform
//! double `u` to the first cell in `++, +-, -+, --` order whose cumulative
//! probability exceeds `u`. Block boundaries depend only on `n`, so merged
//! counts do not depend on how many threads ran the blocks.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::inequality::{check_distribution, check_summary, CorrelatorSummary, InequalityReport, Provenance};
use crate::rng::{generator, stream_seed, uniform_unit};
use crate::scalar::Probability;

pub const BLOCK_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TrialCounts {
    pub n_pp: u64,
    pub n_pm: u64,
    pub n_mp: u64,
    pub n_mm: u64,
    pub seed: u64,
}

impl TrialCounts {
    pub fn new(counts: [u64; 4], seed: u64) -> Result<Self> {
        if counts.iter().sum::<u64>() == 0 {
            return Err(Error::InvalidSampleSize);
        }
        let [n_pp, n_pm, n_mp, n_mm] = counts;
        Ok(TrialCounts { n_pp, n_pm, n_mp, n_mm, seed })
    }

    pub fn n_total(&self) -> u64 {
        self.n_pp + self.n_pm + self.n_mp + self.n_mm
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.n_pp, self.n_pm, self.n_mp, self.n_mm]
    }
}

fn cumulative<T: Probability>(dist: &JointDistribution<T>) -> [f64; 3] {
    let [pp, pm, mp, _] = dist.probabilities().clone();
    let c1 = pp;
    let c2 = c1.clone() + pm;
    let c3 = c2.clone() + mp;
    [c1.approx(), c2.approx(), c3.approx()]
}

fn sample_block(cum: &[f64; 3], len: u64, seed: u64) -> [u64; 4] {
    let mut rng = generator(seed);
    let mut counts = [0u64; 4];
    for _ in 0..len {
        let u = uniform_unit(&mut rng);
        let cell = if u < cum[0] {
            0
        } else if u < cum[1] {
            1
        } else if u < cum[2] {
            2
        } else {
            3
        };
        counts[cell] += 1;
    }
    counts
}

fn sample_blocks(cum: &[f64; 3], n: u64, seed: u64) -> [u64; 4] {
    let blocks = n.div_ceil(BLOCK_SIZE);
    (0..blocks)
        .into_par_iter()
        .map(|i| {
            let len = BLOCK_SIZE.min(n - i * BLOCK_SIZE);
            sample_block(cum, len, stream_seed(seed, i))
        })
        .reduce(|| [0; 4], |a, b| std::array::from_fn(|k| a[k] + b[k]))
}

/// `n` independent categorical draws from `dist`, on the global thread pool.
pub fn sample_counts<T: Probability>(dist: &JointDistribution<T>, n: u64, seed: u64) -> Result<TrialCounts> {
    if n < 1 {
        return Err(Error::InvalidSampleSize);
    }
    TrialCounts::new(sample_blocks(&cumulative(dist), n, seed), seed)
}

/// Same draws as [`sample_counts`], on a dedicated pool of `threads` workers.
pub fn sample_counts_with_threads<T: Probability>(
    dist: &JointDistribution<T>,
    n: u64,
    seed: u64,
    threads: usize,
) -> Result<TrialCounts> {
    if n < 1 {
        return Err(Error::InvalidSampleSize);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InternalInconsistency(format!("thread pool: {e}")))?;
    let cum = cumulative(dist);
    TrialCounts::new(pool.install(|| sample_blocks(&cum, n, seed)), seed)
}

/// A correlator triple with a standard error on each component.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalSummary {
    pub summary: CorrelatorSummary<f64>,
    pub se_a: f64,
    pub se_b: f64,
    pub se_corr: f64,
}

impl EmpiricalSummary {
    /// Marginals (and their errors) from one estimate, correlator from another.
    pub fn mixed(marginals: &Estimate, correlation: &Estimate) -> Self {
        EmpiricalSummary {
            summary: CorrelatorSummary {
                mean_a: marginals.summary.summary.mean_a,
                mean_b: marginals.summary.summary.mean_b,
                corr: correlation.summary.summary.corr,
                provenance: Provenance::Mixed,
            },
            se_a: marginals.summary.se_a,
            se_b: marginals.summary.se_b,
            se_corr: correlation.summary.se_corr,
        }
    }

    /// Conservative standard error of either slack: `se_corr + se_a + se_b`.
    pub fn slack_error(&self) -> f64 {
        self.se_corr + self.se_a + self.se_b
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    /// Empirical frequencies, exact.
    pub frequencies: JointDistribution<BigRational>,
    pub summary: EmpiricalSummary,
    pub n_total: u64,
}

fn standard_error(mean: f64, n: u64) -> f64 {
    ((1.0 - mean * mean).max(0.0) / n as f64).sqrt()
}

pub fn estimate(counts: &TrialCounts) -> Result<Estimate> {
    let n = counts.n_total();
    if n < 1 {
        return Err(Error::InvalidSampleSize);
    }
    let den = BigInt::from(n);
    let frequencies = JointDistribution::new(
        BigRational::new(counts.n_pp.into(), den.clone()),
        BigRational::new(counts.n_pm.into(), den.clone()),
        BigRational::new(counts.n_mp.into(), den.clone()),
        BigRational::new(counts.n_mm.into(), den),
    )?;
    let summary = crate::inequality::summarize(&frequencies)?.to_f64();
    Ok(Estimate {
        summary: EmpiricalSummary {
            se_a: standard_error(summary.mean_a, n),
            se_b: standard_error(summary.mean_b, n),
            se_corr: standard_error(summary.corr, n),
            summary,
        },
        frequencies,
        n_total: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Satisfied,
    Violated,
    /// Not produced by the symmetric rule used here.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalReport {
    pub report: InequalityReport<f64>,
    pub z: f64,
    pub slack_error: f64,
    /// A slack below `-threshold` counts as a violation.
    pub threshold: f64,
    pub verdict: Verdict,
}

pub const DEFAULT_Z: f64 = 5.0;

fn verdict_for(report: InequalityReport<f64>, sigma: f64, z: f64) -> Result<EmpiricalReport> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::InvalidZ(z));
    }
    let threshold = z * sigma;
    let verdict = if report.upper_slack >= -threshold && report.lower_slack >= -threshold {
        Verdict::Satisfied
    } else {
        Verdict::Violated
    };
    Ok(EmpiricalReport { report, z, slack_error: sigma, threshold, verdict })
}

/// Checks the bounds on empirical frequencies of one run.
pub fn empirical_check(counts: &TrialCounts, z: f64) -> Result<EmpiricalReport> {
    let est = estimate(counts)?;
    let report = check_distribution(&est.frequencies)?.to_f64();
    verdict_for(report, est.summary.slack_error(), z)
}

/// Checks the bounds on a possibly mixed empirical triple.
pub fn empirical_check_summary(summary: &EmpiricalSummary, z: f64) -> Result<EmpiricalReport> {
    let report = check_summary(&summary.summary)?;
    verdict_for(report, summary.slack_error(), z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::{malus_product_joint, MalusProductModel};
    use crate::outcome::{Kind, SettingPair};
    use crate::quantum::{born_joint, state_from_spec, StateSpec};

    #[test]
    fn point_mass_draws_one_cell() {
        let p = JointDistribution::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let c = sample_counts(&p, 100, 3).unwrap();
        assert_eq!(c.as_array(), [100, 0, 0, 0]);
        let p = JointDistribution::new(0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(sample_counts(&p, 100, 3).unwrap().as_array(), [0, 0, 0, 100]);
    }

    #[test]
    fn counts_are_deterministic_per_seed() {
        let p = JointDistribution::new(0.4, 0.1, 0.2, 0.3).unwrap();
        let a = sample_counts(&p, 200_000, 11).unwrap();
        assert_eq!(a, sample_counts(&p, 200_000, 11).unwrap());
        assert_ne!(a, sample_counts(&p, 200_000, 12).unwrap());
        assert_eq!(a.n_total(), 200_000);
    }

    #[test]
    fn thread_count_does_not_change_counts() {
        let p = JointDistribution::uniform();
        let n = 5 * BLOCK_SIZE + 17;
        let one = sample_counts_with_threads(&p, n, 5, 1).unwrap();
        for threads in [2, 3, 8] {
            assert_eq!(sample_counts_with_threads(&p, n, 5, threads).unwrap(), one);
        }
    }

    #[test]
    fn uniform_counts_stay_within_five_sigma() {
        let n = 1_000_000u64;
        let c = sample_counts(&JointDistribution::uniform(), n, 2024).unwrap();
        let sd = (n as f64 * 0.25 * 0.75).sqrt();
        for k in c.as_array() {
            assert!((k as f64 - 250_000.0).abs() < 5.0 * sd, "{k}");
        }
    }

    #[test]
    fn zero_samples_rejected() {
        let p = JointDistribution::uniform();
        assert_eq!(sample_counts(&p, 0, 1), Err(Error::InvalidSampleSize));
        assert!(TrialCounts::new([0; 4], 0).is_err());
    }

    #[test]
    fn estimate_examples() {
        let e = estimate(&TrialCounts::new([250_000; 4], 0).unwrap()).unwrap();
        let s = &e.summary;
        assert_eq!((s.summary.mean_a, s.summary.mean_b, s.summary.corr), (0.0, 0.0, 0.0));
        assert!((s.se_corr - 0.001).abs() < 1e-15);

        let e = estimate(&TrialCounts::new([100, 0, 0, 0], 0).unwrap()).unwrap();
        let s = &e.summary;
        assert_eq!((s.summary.mean_a, s.summary.mean_b, s.summary.corr), (1.0, 1.0, 1.0));
        assert_eq!((s.se_a, s.se_b, s.se_corr), (0.0, 0.0, 0.0));

        let e = estimate(&TrialCounts::new([40, 10, 20, 30], 0).unwrap()).unwrap();
        let s = &e.summary.summary;
        assert!(s.mean_a.abs() < 1e-15);
        assert!((s.mean_b - 0.2).abs() < 1e-15);
        assert!((s.corr - 0.4).abs() < 1e-15);
    }

    #[test]
    fn empirical_check_examples() {
        let c = sample_counts(&JointDistribution::uniform(), 1_000_000, 1).unwrap();
        let r = empirical_check(&c, DEFAULT_Z).unwrap();
        assert_eq!(r.verdict, Verdict::Satisfied);

        let r = empirical_check(&TrialCounts::new([100, 0, 0, 0], 0).unwrap(), DEFAULT_Z).unwrap();
        assert_eq!(r.verdict, Verdict::Satisfied);
        assert_eq!((r.report.upper_slack, r.report.lower_slack), (0.0, 0.0));

        assert!(empirical_check(&c, 0.0).is_err());
        assert!(empirical_check(&c, f64::NAN).is_err());
    }

    #[test]
    fn empirical_mixing_is_detected() {
        let pair = SettingPair::new(0.0, 0.0).unwrap();
        let hv = malus_product_joint(&MalusProductModel::new(0.0, 0.0, Kind::Photon).unwrap(), pair).unwrap();
        let singlet = state_from_spec(&StateSpec::Singlet, Kind::Photon).unwrap();
        let q = born_joint(&singlet, pair).unwrap();
        let marg = estimate(&sample_counts(&hv, 10_000, 1).unwrap()).unwrap();
        let corr = estimate(&sample_counts(&q, 10_000, 2).unwrap()).unwrap();
        let r = empirical_check_summary(&EmpiricalSummary::mixed(&marg, &corr), DEFAULT_Z).unwrap();
        assert_eq!(r.verdict, Verdict::Violated);
        assert!((r.report.lower_slack + 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_distribution_runs_are_satisfied() {
        let p = JointDistribution::uniform();
        let satisfied = (0..1000)
            .filter(|&seed| {
                let c = sample_counts(&p, 10_000, seed).unwrap();
                empirical_check(&c, DEFAULT_Z).unwrap().verdict == Verdict::Satisfied
            })
            .count();
        assert!(satisfied >= 999);
    }
}
