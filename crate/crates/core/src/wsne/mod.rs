//! Exact well-supported Nash equilibrium checking and search for win-lose
//! games.
//!
//! A strategy pair `(p, q)` is an eps-WSNE when every pure strategy in the
//! support of `p` earns at least `max_i (Aq)_i - eps` against `q`, and
//! every pure strategy in the support of `q` earns at least
//! `max_j (p^T B)_j - eps` against `p`. All quantities are exact.

mod construct;
mod feasibility;
mod search;

pub use construct::{wsne_from_cycle, wsne_from_undominated, Construction};
pub use feasibility::{feasible_on_supports, Feasibility, SupportPair};
pub use search::{
    crosscheck_characterization, exhaustive_search, exhaustive_search_parallel, CrossCheck, CrossCheckPoint,
    ExhaustiveOutcome,
};

use crate::error::{Error, Result};
use crate::game::{Side, WinLoseGame};
use crate::scalar::ExactScalar;

/// A probability vector over pure strategies with exact entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedStrategy<S> {
    probs: Vec<S>,
}

impl<S: ExactScalar> MixedStrategy<S> {
    /// Rejects negative entries and vectors that do not sum to exactly one.
    pub fn new(probs: Vec<S>) -> Result<Self> {
        if let Some(i) = probs.iter().position(|x| x.is_negative()) {
            return Err(Error::InvalidStrategy(format!("entry {i} is negative")));
        }
        let total = probs.iter().fold(S::zero(), |acc, x| acc + x.clone());
        if !total.is_one() {
            return Err(Error::InvalidStrategy(format!("entries sum to {total}, not 1")));
        }
        Ok(MixedStrategy { probs })
    }

    pub fn pure(len: usize, index: usize) -> Result<Self> {
        Self::uniform(len, &[index])
    }

    /// Uniform over the distinct members of `support`.
    pub fn uniform(len: usize, support: &[usize]) -> Result<Self> {
        let mut support = support.to_vec();
        support.sort_unstable();
        support.dedup();
        if support.is_empty() {
            return Err(Error::InvalidStrategy("empty support".into()));
        }
        if let Some(&i) = support.iter().find(|&&i| i >= len) {
            return Err(Error::InvalidStrategy(format!(
                "support index {i} out of range for {len} strategies"
            )));
        }
        let mass = S::one() / S::from_count(support.len());
        let mut probs = vec![S::zero(); len];
        for i in support {
            probs[i] = mass.clone();
        }
        Ok(MixedStrategy { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[S] {
        &self.probs
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.probs.len())
            .filter(|&i| self.probs[i].is_positive())
            .collect()
    }
}

/// `(Aq, p^T B)`.
pub fn payoffs<S: ExactScalar>(
    g: &WinLoseGame,
    p: &MixedStrategy<S>,
    q: &MixedStrategy<S>,
) -> Result<(Vec<S>, Vec<S>)> {
    if p.len() != g.rows() || q.len() != g.cols() {
        return Err(Error::DimensionMismatch(format!(
            "strategies of length ({}, {}) for a {}x{} game",
            p.len(),
            q.len(),
            g.rows(),
            g.cols()
        )));
    }
    let row = (0..g.rows())
        .map(|i| {
            (0..g.cols())
                .filter(|&j| g.a(i, j))
                .fold(S::zero(), |acc, j| acc + q.probs[j].clone())
        })
        .collect();
    let col = (0..g.cols())
        .map(|j| {
            (0..g.rows())
                .filter(|&i| g.b(i, j))
                .fold(S::zero(), |acc, i| acc + p.probs[i].clone())
        })
        .collect();
    Ok((row, col))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation<S> {
    pub player: Side,
    pub strategy: usize,
    pub payoff: S,
    /// How far the payoff falls below `best - eps`.
    pub shortfall: S,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WsneVerdict<S> {
    pub valid: bool,
    pub epsilon: S,
    pub row_best: S,
    pub col_best: S,
    pub violations: Vec<Violation<S>>,
    /// Least `payoff - (best - eps)` over both supports. Zero means some
    /// supported strategy sits exactly on the boundary.
    pub min_slack: S,
}

impl<S: ExactScalar> WsneVerdict<S> {
    pub fn is_tight(&self) -> bool {
        self.min_slack.is_zero()
    }
}

pub fn check_wsne<S: ExactScalar>(
    g: &WinLoseGame,
    p: &MixedStrategy<S>,
    q: &MixedStrategy<S>,
    eps: &S,
) -> Result<WsneVerdict<S>> {
    if eps.is_negative() {
        return Err(Error::NegativeEpsilon);
    }
    let (row, col) = payoffs(g, p, q)?;
    let row_best = row.iter().max().cloned().unwrap_or_else(S::zero);
    let col_best = col.iter().max().cloned().unwrap_or_else(S::zero);
    let mut violations = Vec::new();
    let mut min_slack: Option<S> = None;
    for (player, strategy, payoffs, best) in [
        (Side::Row, p, &row, &row_best),
        (Side::Column, q, &col, &col_best),
    ] {
        let threshold = best.clone() - eps.clone();
        for i in strategy.support() {
            let slack = payoffs[i].clone() - threshold.clone();
            if slack.is_negative() {
                violations.push(Violation {
                    player,
                    strategy: i,
                    payoff: payoffs[i].clone(),
                    shortfall: -slack.clone(),
                });
            }
            if min_slack.as_ref().is_none_or(|m| slack < *m) {
                min_slack = Some(slack);
            }
        }
    }
    Ok(WsneVerdict {
        valid: violations.is_empty(),
        epsilon: eps.clone(),
        row_best,
        col_best,
        violations,
        min_slack: min_slack.expect("supports are nonempty"),
    })
}
