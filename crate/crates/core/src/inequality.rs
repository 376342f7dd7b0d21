//! Marginals, correlator, and the two-sided bound
//! `1 - |Ā - B̄| ≥ E ≥ -1 + |Ā + B̄|`.

use serde::Serialize;

use crate::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::outcome::{Cell, Outcome};
use crate::scalar::Probability;

/// `(1 - |A - B|, A·B, -1 + |A + B|)` for one pair of outcomes.
///
/// All three components coincide for every combination of ±1 values.
pub fn pointwise_identity(a: Outcome, b: Outcome) -> (i64, i64, i64) {
    let (a, b) = (a.value(), b.value());
    (1 - (a - b).abs(), a * b, -1 + (a + b).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Marginals and correlator come from one joint distribution.
    SingleDistribution,
    /// Marginals and correlator come from different distributions.
    Mixed,
}

/// The triple `(Ā, B̄, E)` with `E` the average of the product `AB`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelatorSummary<T> {
    pub mean_a: T,
    pub mean_b: T,
    pub corr: T,
    pub provenance: Provenance,
}

fn check_unit<T: Probability>(what: &'static str, value: &T) -> Result<()> {
    check_unit_within(what, value, &T::comparison_tolerance())
}

fn check_unit_within<T: Probability>(what: &'static str, value: &T, slop: &T) -> Result<()> {
    if !value.is_finite_value() {
        return Err(Error::NonFinite { what });
    }
    if value.abs() > T::one() + slop.clone() {
        return Err(Error::OutOfRange { what, value: value.approx() });
    }
    Ok(())
}

impl<T: Probability> CorrelatorSummary<T> {
    pub fn new(mean_a: T, mean_b: T, corr: T, provenance: Provenance) -> Result<Self> {
        check_unit("mean_a", &mean_a)?;
        check_unit("mean_b", &mean_b)?;
        check_unit("corr", &corr)?;
        Ok(CorrelatorSummary { mean_a, mean_b, corr, provenance })
    }

    pub fn to_f64(&self) -> CorrelatorSummary<f64> {
        CorrelatorSummary {
            mean_a: self.mean_a.approx(),
            mean_b: self.mean_b.approx(),
            corr: self.corr.approx(),
            provenance: self.provenance,
        }
    }
}

/// Marginal averages and correlator of `dist`.
///
/// The correlator is computed as the signed sum over outcomes and through
/// both rearrangements `1 - 2P(+-) - 2P(-+)` and `-1 + 2P(++) + 2P(--)`;
/// disagreement beyond [`JointDistribution::identity_tolerance`] is an
/// arithmetic fault.
pub fn summarize<T: Probability>(dist: &JointDistribution<T>) -> Result<CorrelatorSummary<T>> {
    let [pp, pm, mp, mm] = dist.probabilities().clone();
    let two = T::from_int(2);

    let mean_a = pp.clone() + pm.clone() - mp.clone() - mm.clone();
    let mean_b = pp.clone() - pm.clone() + mp.clone() - mm.clone();
    let direct = pp.clone() - pm.clone() - mp.clone() + mm.clone();
    let left = T::one() - two.clone() * pm - two.clone() * mp;
    let right = -T::one() + two.clone() * pp + two * mm;

    let tol = dist.identity_tolerance();
    if (direct.clone() - left.clone()).abs() > tol || (direct.clone() - right.clone()).abs() > tol {
        return Err(Error::InternalInconsistency(format!(
            "correlator paths disagree: direct {}, left {}, right {}",
            direct.approx(),
            left.approx(),
            right.approx()
        )));
    }
    // An unnormalized float input may push a component past ±1 by |sum - 1|.
    let slop = tol.max_of(T::comparison_tolerance());
    check_unit_within("mean_a", &mean_a, &slop)?;
    check_unit_within("mean_b", &mean_b, &slop)?;
    check_unit_within("corr", &direct, &slop)?;
    Ok(CorrelatorSummary { mean_a, mean_b, corr: direct, provenance: Provenance::SingleDistribution })
}

/// `(upper, lower) = (1 - |Ā - B̄|, -1 + |Ā + B̄|)`.
///
/// For means in the closed unit square `lower ≤ upper`.
pub fn leggett_bounds<T: Probability>(mean_a: &T, mean_b: &T) -> Result<(T, T)> {
    check_unit("mean_a", mean_a)?;
    check_unit("mean_b", mean_b)?;
    Ok(bounds_unchecked(mean_a, mean_b))
}

fn bounds_unchecked<T: Probability>(mean_a: &T, mean_b: &T) -> (T, T) {
    let upper = T::one() - (mean_a.clone() - mean_b.clone()).abs();
    let lower = -T::one() + (mean_a.clone() + mean_b.clone()).abs();
    (upper, lower)
}

/// Records that a slack equals `4 · P(cell)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlackWitness<T> {
    pub cell: Cell,
    pub probability: T,
}

impl<T: Probability> SlackWitness<T> {
    pub fn new(cell: Cell, dist: &JointDistribution<T>) -> Self {
        SlackWitness { cell, probability: dist.get(cell).clone() }
    }

    /// The value the witnessed slack must equal.
    pub fn slack(&self) -> T {
        T::from_int(4) * self.probability.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport<T> {
    pub summary: CorrelatorSummary<T>,
    pub upper_bound: T,
    pub lower_bound: T,
    pub upper_slack: T,
    pub lower_slack: T,
    /// Slack below zero tolerated before the verdict flips to violated.
    pub tolerance: T,
    pub satisfied: bool,
    pub witness_upper: Option<SlackWitness<T>>,
    pub witness_lower: Option<SlackWitness<T>>,
}

impl<T: Probability> InequalityReport<T> {
    pub fn min_slack(&self) -> T {
        if self.upper_slack < self.lower_slack {
            self.upper_slack.clone()
        } else {
            self.lower_slack.clone()
        }
    }

    pub fn upper_tight(&self) -> bool {
        self.upper_slack.abs() <= self.tolerance
    }

    pub fn lower_tight(&self) -> bool {
        self.lower_slack.abs() <= self.tolerance
    }

    pub fn to_f64(&self) -> InequalityReport<f64> {
        let witness = |w: &Option<SlackWitness<T>>| {
            w.as_ref().map(|w| SlackWitness { cell: w.cell, probability: w.probability.approx() })
        };
        InequalityReport {
            summary: self.summary.to_f64(),
            upper_bound: self.upper_bound.approx(),
            lower_bound: self.lower_bound.approx(),
            upper_slack: self.upper_slack.approx(),
            lower_slack: self.lower_slack.approx(),
            tolerance: self.tolerance.approx(),
            satisfied: self.satisfied,
            witness_upper: witness(&self.witness_upper),
            witness_lower: witness(&self.witness_lower),
        }
    }
}

fn report_with_tolerance<T: Probability>(summary: &CorrelatorSummary<T>, tolerance: T) -> Result<InequalityReport<T>> {
    let slop = tolerance.clone().max_of(T::comparison_tolerance());
    check_unit_within("mean_a", &summary.mean_a, &slop)?;
    check_unit_within("mean_b", &summary.mean_b, &slop)?;
    check_unit_within("corr", &summary.corr, &slop)?;
    let (upper_bound, lower_bound) = bounds_unchecked(&summary.mean_a, &summary.mean_b);
    let upper_slack = upper_bound.clone() - summary.corr.clone();
    let lower_slack = summary.corr.clone() - lower_bound.clone();
    let satisfied = upper_slack >= -tolerance.clone() && lower_slack >= -tolerance.clone();
    Ok(InequalityReport {
        summary: summary.clone(),
        upper_bound,
        lower_bound,
        upper_slack,
        lower_slack,
        tolerance,
        satisfied,
        witness_upper: None,
        witness_lower: None,
    })
}

/// Evaluates both bounds on a bare triple.
///
/// Mixed triples are accepted and may come out violated.
pub fn check_summary<T: Probability>(summary: &CorrelatorSummary<T>) -> Result<InequalityReport<T>> {
    report_with_tolerance(summary, T::comparison_tolerance())
}

/// Cells whose probabilities equal the upper and lower slack, up to a factor 4.
///
/// Ties (`Ā = B̄`, `Ā + B̄ = 0`) take the `≥` branch; both identities hold there.
pub fn witness_cells<T: Probability>(mean_a: &T, mean_b: &T) -> (Cell, Cell) {
    let upper = if mean_a >= mean_b { Cell::MinusPlus } else { Cell::PlusMinus };
    let lower = if (mean_a.clone() + mean_b.clone()) >= T::zero() { Cell::MinusMinus } else { Cell::PlusPlus };
    (upper, lower)
}

/// Evaluates both bounds on a single distribution and attaches the
/// probability each slack equals.
///
/// The verdict is always satisfied for a valid distribution. For float input
/// the tolerance widens by `|sum - 1|`, the amount by which an unnormalized
/// input shifts every slack.
pub fn check_distribution<T: Probability>(dist: &JointDistribution<T>) -> Result<InequalityReport<T>> {
    let summary = summarize(dist)?;
    let tol = dist.identity_tolerance();
    let mut report = report_with_tolerance(&summary, tol.clone().max_of(T::comparison_tolerance()))?;

    let (upper_cell, lower_cell) = witness_cells(&summary.mean_a, &summary.mean_b);
    let witness_upper = SlackWitness::new(upper_cell, dist);
    let witness_lower = SlackWitness::new(lower_cell, dist);
    for (name, slack, witness) in [
        ("upper", &report.upper_slack, &witness_upper),
        ("lower", &report.lower_slack, &witness_lower),
    ] {
        if (slack.clone() - witness.slack()).abs() > tol {
            return Err(Error::InternalInconsistency(format!(
                "{name} slack {} differs from 4·P({}) = {}",
                slack.approx(),
                witness.cell,
                witness.slack().approx()
            )));
        }
    }
    report.witness_upper = Some(witness_upper);
    report.witness_lower = Some(witness_lower);
    Ok(report)
}
