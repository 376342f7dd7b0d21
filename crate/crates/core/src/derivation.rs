//! Step-by-step replay of how the two-sided bound follows from the
//! non-negativity of the four joint probabilities.
//!
//! Every step is stored as `lhs ≥ rhs` (or `lhs = rhs`) with
//! `slack = lhs - rhs`. Identity steps must have zero slack; each elementary
//! inequality step has a slack equal to four times one cell probability.

use serde::Serialize;

use crate::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::inequality::{summarize, SlackWitness};
use crate::outcome::Cell;
use crate::scalar::Probability;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StepLabel {
    /// `1 - 2P(+-) - 2P(-+) = E`
    #[serde(rename = "eq2-left")]
    Eq2Left,
    /// `E = -1 + 2P(++) + 2P(--)`
    #[serde(rename = "eq2-right")]
    Eq2Right,
    #[serde(rename = "ineq3a")]
    Ineq3a,
    #[serde(rename = "ineq3b")]
    Ineq3b,
    #[serde(rename = "ineq4a")]
    Ineq4a,
    /// `1 + 2P(+-) - 2P(-+) ≥ E`
    #[serde(rename = "ineq4b")]
    Ineq4b,
    /// `1 - 2P(+-) + 2P(-+) = 1 - Ā + B̄`
    #[serde(rename = "rewrite4a")]
    Rewrite4a,
    /// `1 + 2P(+-) - 2P(-+) = 1 + Ā - B̄`
    #[serde(rename = "rewrite4b")]
    Rewrite4b,
    #[serde(rename = "ineq5a")]
    Ineq5a,
    #[serde(rename = "ineq5b")]
    Ineq5b,
    #[serde(rename = "ineq6")]
    Ineq6,
    #[serde(rename = "ineq7a")]
    Ineq7a,
    #[serde(rename = "ineq7b")]
    Ineq7b,
    #[serde(rename = "ineq8a")]
    Ineq8a,
    #[serde(rename = "ineq8b")]
    Ineq8b,
    /// `-1 + 2P(++) - 2P(--) = -1 + Ā + B̄`
    #[serde(rename = "rewrite8a")]
    Rewrite8a,
    /// `-1 - 2P(++) + 2P(--) = -1 - Ā - B̄`
    #[serde(rename = "rewrite8b")]
    Rewrite8b,
    #[serde(rename = "ineq9a")]
    Ineq9a,
    #[serde(rename = "ineq9b")]
    Ineq9b,
    #[serde(rename = "ineq10")]
    Ineq10,
    /// `1 - |Ā - B̄| ≥ E ≥ -1 + |Ā + B̄|`
    #[serde(rename = "ineq11")]
    Ineq11,
}

impl StepLabel {
    pub fn is_identity(self) -> bool {
        matches!(
            self,
            StepLabel::Eq2Left | StepLabel::Eq2Right | StepLabel::Rewrite4a | StepLabel::Rewrite4b | StepLabel::Rewrite8a | StepLabel::Rewrite8b
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep<T> {
    pub label: StepLabel,
    pub lhs: T,
    /// Only the final two-sided step has a middle term (the correlator).
    pub middle: Option<T>,
    pub rhs: T,
    /// `lhs - rhs`, or the smaller of the two gaps for a two-sided step.
    pub slack: T,
    pub witness: Option<SlackWitness<T>>,
}

impl<T: Probability> TraceStep<T> {
    /// `(lhs - middle, middle - rhs)` for the two-sided step.
    pub fn gaps(&self) -> Option<(T, T)> {
        self.middle
            .as_ref()
            .map(|m| (self.lhs.clone() - m.clone(), m.clone() - self.rhs.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivationTrace<T> {
    pub steps: Vec<TraceStep<T>>,
}

impl<T: Probability> DerivationTrace<T> {
    pub fn step(&self, label: StepLabel) -> &TraceStep<T> {
        self.steps
            .iter()
            .find(|s| s.label == label)
            .expect("every label is emitted")
    }

    pub fn slack(&self, label: StepLabel) -> &T {
        &self.step(label).slack
    }
}

struct Builder<'a, T> {
    dist: &'a JointDistribution<T>,
    tol: T,
    steps: Vec<TraceStep<T>>,
}

impl<T: Probability> Builder<'_, T> {
    fn identity(&mut self, label: StepLabel, lhs: T, rhs: T) -> Result<()> {
        let slack = lhs.clone() - rhs.clone();
        if slack.abs() > self.tol {
            return Err(Error::InternalInconsistency(format!(
                "identity step {label:?} has slack {}",
                slack.approx()
            )));
        }
        self.steps.push(TraceStep { label, lhs, middle: None, rhs, slack, witness: None });
        Ok(())
    }

    fn inequality(&mut self, label: StepLabel, lhs: T, rhs: T, cell: Cell) -> Result<()> {
        let slack = lhs.clone() - rhs.clone();
        let witness = SlackWitness::new(cell, self.dist);
        if (slack.clone() - witness.slack()).abs() > self.tol {
            return Err(Error::InternalInconsistency(format!(
                "step {label:?} slack {} differs from 4·P({cell}) = {}",
                slack.approx(),
                witness.slack().approx()
            )));
        }
        self.steps.push(TraceStep { label, lhs, middle: None, rhs, slack, witness: Some(witness) });
        Ok(())
    }

    fn slack_of(&self, label: StepLabel) -> T {
        self.steps
            .iter()
            .find(|s| s.label == label)
            .map(|s| s.slack.clone())
            .expect("step emitted earlier")
    }
}

/// Replays the derivation on `dist`, checking each identity and witness.
///
/// The second intermediate inequality on the left-hand side is taken as
/// `1 + 2P(+-) - 2P(-+) ≥ E`, the form implied by its neighbours.
pub fn derivation_trace<T: Probability>(dist: &JointDistribution<T>) -> Result<DerivationTrace<T>> {
    let summary = summarize(dist)?;
    let [pp, pm, mp, mm] = dist.probabilities().clone();
    let (ma, mb, corr) = (summary.mean_a, summary.mean_b, summary.corr);
    let one = T::one();
    let two = T::from_int(2);
    let mut b = Builder { dist, tol: dist.identity_tolerance(), steps: Vec::with_capacity(21) };

    // Left-hand chain: upper bound.
    let eq2_left = one.clone() - two.clone() * pm.clone() - two.clone() * mp.clone();
    let eq2_right = -one.clone() + two.clone() * pp.clone() + two.clone() * mm.clone();
    b.identity(StepLabel::Eq2Left, eq2_left.clone(), corr.clone())?;
    b.identity(StepLabel::Eq2Right, corr.clone(), eq2_right.clone())?;

    let upper_a = one.clone() - two.clone() * pm.clone() + two.clone() * mp.clone();
    let upper_b = one.clone() + two.clone() * pm.clone() - two.clone() * mp.clone();
    b.inequality(StepLabel::Ineq3a, upper_a.clone(), eq2_left.clone(), Cell::MinusPlus)?;
    b.inequality(StepLabel::Ineq3b, upper_b.clone(), eq2_left, Cell::PlusMinus)?;
    b.inequality(StepLabel::Ineq4a, upper_a.clone(), corr.clone(), Cell::MinusPlus)?;
    b.inequality(StepLabel::Ineq4b, upper_b.clone(), corr.clone(), Cell::PlusMinus)?;

    let marg_5a = one.clone() - ma.clone() + mb.clone();
    let marg_5b = one.clone() + ma.clone() - mb.clone();
    b.identity(StepLabel::Rewrite4a, upper_a, marg_5a.clone())?;
    b.identity(StepLabel::Rewrite4b, upper_b, marg_5b.clone())?;
    b.inequality(StepLabel::Ineq5a, marg_5a, corr.clone(), Cell::MinusPlus)?;
    b.inequality(StepLabel::Ineq5b, marg_5b, corr.clone(), Cell::PlusMinus)?;

    let upper_bound = one.clone() - (ma.clone() - mb.clone()).abs();
    let (branch, cell) = if ma >= mb {
        (StepLabel::Ineq5a, Cell::MinusPlus)
    } else {
        (StepLabel::Ineq5b, Cell::PlusMinus)
    };
    b.inequality(StepLabel::Ineq6, upper_bound.clone(), corr.clone(), cell)?;
    if (b.slack_of(StepLabel::Ineq6) - b.slack_of(branch)).abs() > b.tol {
        return Err(Error::InternalInconsistency(format!("ineq6 slack differs from selected branch {branch:?}")));
    }

    // Right-hand chain: lower bound.
    let lower_a = -one.clone() + two.clone() * pp.clone() - two.clone() * mm.clone();
    let lower_b = -one.clone() - two.clone() * pp.clone() + two.clone() * mm.clone();
    b.inequality(StepLabel::Ineq7a, eq2_right.clone(), lower_a.clone(), Cell::MinusMinus)?;
    b.inequality(StepLabel::Ineq7b, eq2_right, lower_b.clone(), Cell::PlusPlus)?;
    b.inequality(StepLabel::Ineq8a, corr.clone(), lower_a.clone(), Cell::MinusMinus)?;
    b.inequality(StepLabel::Ineq8b, corr.clone(), lower_b.clone(), Cell::PlusPlus)?;

    let marg_9a = -one.clone() + ma.clone() + mb.clone();
    let marg_9b = -one.clone() - ma.clone() - mb.clone();
    b.identity(StepLabel::Rewrite8a, lower_a, marg_9a.clone())?;
    b.identity(StepLabel::Rewrite8b, lower_b, marg_9b.clone())?;
    b.inequality(StepLabel::Ineq9a, corr.clone(), marg_9a, Cell::MinusMinus)?;
    b.inequality(StepLabel::Ineq9b, corr.clone(), marg_9b, Cell::PlusPlus)?;

    let lower_bound = -one + (ma.clone() + mb.clone()).abs();
    let (branch, cell) = if ma + mb >= T::zero() {
        (StepLabel::Ineq9a, Cell::MinusMinus)
    } else {
        (StepLabel::Ineq9b, Cell::PlusPlus)
    };
    b.inequality(StepLabel::Ineq10, corr.clone(), lower_bound.clone(), cell)?;
    if (b.slack_of(StepLabel::Ineq10) - b.slack_of(branch)).abs() > b.tol {
        return Err(Error::InternalInconsistency(format!("ineq10 slack differs from selected branch {branch:?}")));
    }

    let upper_gap = upper_bound.clone() - corr.clone();
    let lower_gap = corr.clone() - lower_bound.clone();
    let slack = if upper_gap < lower_gap { upper_gap } else { lower_gap };
    b.steps.push(TraceStep {
        label: StepLabel::Ineq11,
        lhs: upper_bound,
        middle: Some(corr),
        rhs: lower_bound,
        slack,
        witness: None,
    });

    Ok(DerivationTrace { steps: b.steps })
}
