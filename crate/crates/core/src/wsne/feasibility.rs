//! Exact feasibility of the WSNE inequalities on fixed supports.
//!
//! The inequalities decouple: the conditions on the row support constrain
//! only `q`, those on the column support only `p`. Each half is a small
//! system over the simplex, decided by Fourier-Motzkin elimination with
//! exact back-substitution.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::game::WinLoseGame;
use crate::scalar::ExactScalar;

use super::MixedStrategy;

/// Candidate supports: row indices `rows` and column indices `cols`,
/// both sorted and nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportPair {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl SupportPair {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        SupportPair { rows, cols }
    }

    fn validate(&self, g: &WinLoseGame) -> Result<()> {
        if self.rows.is_empty() || self.cols.is_empty() {
            return Err(Error::InvalidParameter("supports must be nonempty".into()));
        }
        if self.rows.iter().any(|&i| i >= g.rows()) || self.cols.iter().any(|&j| j >= g.cols()) {
            return Err(Error::DimensionMismatch(format!(
                "supports {self:?} exceed a {}x{} game",
                g.rows(),
                g.cols()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility<S> {
    Feasible {
        p: MixedStrategy<S>,
        q: MixedStrategy<S>,
    },
    Infeasible,
}

impl<S> Feasibility<S> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible { .. })
    }
}

/// Decides whether some `p` supported within `S.rows` and `q` supported
/// within `S.cols` make every strategy of `S.rows` and `S.cols` an
/// eps-approximate best response. Any feasible point is an eps-WSNE.
pub fn feasible_on_supports<S: ExactScalar>(
    g: &WinLoseGame,
    supports: &SupportPair,
    eps: &S,
) -> Result<Feasibility<S>> {
    if eps.is_negative() {
        return Err(Error::NegativeEpsilon);
    }
    supports.validate(g)?;
    Ok(decide(g, supports, eps))
}

pub(super) fn decide<S: ExactScalar>(g: &WinLoseGame, supports: &SupportPair, eps: &S) -> Feasibility<S> {
    // q must keep every row of the row support near the best row
    let Some(q) = mix_for_responders(&supports.cols, &supports.rows, g.rows(), eps, |i, j| g.a(i, j))
    else {
        return Feasibility::Infeasible;
    };
    let Some(p) = mix_for_responders(&supports.rows, &supports.cols, g.cols(), eps, |j, i| g.b(i, j))
    else {
        return Feasibility::Infeasible;
    };
    Feasibility::Feasible {
        p: MixedStrategy::new(scatter(&supports.rows, p, g.rows())).expect("simplex point"),
        q: MixedStrategy::new(scatter(&supports.cols, q, g.cols())).expect("simplex point"),
    }
}

fn scatter<S: ExactScalar>(support: &[usize], values: Vec<S>, len: usize) -> Vec<S> {
    let mut out = vec![S::zero(); len];
    for (&i, v) in support.iter().zip(values) {
        out[i] = v;
    }
    out
}

/// Finds a distribution `x` over `mixers` such that each responder earns at
/// least the best of all `opponents` responses minus `eps`, where
/// `payoff(response, mixer)` is the responder's 0-1 payoff.
fn mix_for_responders<S: ExactScalar>(
    mixers: &[usize],
    responders: &[usize],
    opponents: usize,
    eps: &S,
    payoff: impl Fn(usize, usize) -> bool,
) -> Option<Vec<S>> {
    let t = mixers.len();
    let free = t - 1;
    // payoff columns restricted to the mixers, deduplicated
    let mut patterns: Vec<Vec<i64>> = (0..opponents)
        .map(|o| mixers.iter().map(|&x| i64::from(payoff(o, x))).collect())
        .collect();
    patterns.sort();
    patterns.dedup();
    let mut system = System::new(free);
    for &r in responders {
        let own: Vec<i64> = mixers.iter().map(|&x| i64::from(payoff(r, x))).collect();
        for other in &patterns {
            // sum_x (own - other)_x * x_x >= -eps, with x_last = 1 - sum(rest)
            let d: Vec<i64> = own.iter().zip(other).map(|(a, b)| a - b).collect();
            let coeffs = (0..free).map(|v| S::from_fraction(d[v] - d[free], 1)).collect();
            system.push(coeffs, -eps.clone() - S::from_fraction(d[free], 1));
        }
    }
    for v in 0..free {
        let mut coeffs = vec![S::zero(); free];
        coeffs[v] = S::one();
        system.push(coeffs, S::zero());
    }
    system.push(vec![-S::one(); free], -S::one());
    let mut x = system.solve()?;
    let last = x.iter().fold(S::one(), |acc, v| acc - v.clone());
    x.push(last);
    Some(x)
}

/// Inequalities `coeffs . x >= rhs`, kept normalized with only the
/// tightest right-hand side per direction.
#[derive(Clone, Debug)]
struct System<S> {
    vars: usize,
    rows: BTreeMap<Vec<S>, S>,
    infeasible: bool,
}

impl<S: ExactScalar> System<S> {
    fn new(vars: usize) -> Self {
        System {
            vars,
            rows: BTreeMap::new(),
            infeasible: false,
        }
    }

    fn push(&mut self, mut coeffs: Vec<S>, mut rhs: S) {
        let Some(scale) = coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) else {
            if rhs.is_positive() {
                self.infeasible = true;
            }
            return;
        };
        for c in &mut coeffs {
            *c = c.clone() / scale.clone();
        }
        rhs = rhs / scale;
        match self.rows.get_mut(&coeffs) {
            Some(existing) if *existing >= rhs => {}
            Some(existing) => *existing = rhs,
            None => {
                self.rows.insert(coeffs, rhs);
            }
        }
    }

    /// Projects out variable `v`.
    fn eliminate(&self, v: usize) -> System<S> {
        let mut next = System::new(self.vars);
        next.infeasible = self.infeasible;
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for (coeffs, rhs) in &self.rows {
            if coeffs[v].is_positive() {
                lower.push((coeffs, rhs));
            } else if coeffs[v].is_negative() {
                upper.push((coeffs, rhs));
            } else {
                next.push(coeffs.clone(), rhs.clone());
            }
        }
        for (lc, lr) in &lower {
            for (uc, ur) in &upper {
                let (a, b) = (lc[v].clone(), -uc[v].clone());
                let coeffs = lc
                    .iter()
                    .zip(uc.iter())
                    .map(|(x, y)| x.clone() * b.clone() + y.clone() * a.clone())
                    .collect();
                next.push(coeffs, (*lr).clone() * b.clone() + (*ur).clone() * a.clone());
            }
        }
        next
    }

    fn solve(self) -> Option<Vec<S>> {
        let n = self.vars;
        // levels[j]: variables n-1 .. n-j eliminated
        let mut levels = vec![self];
        for v in (0..n).rev() {
            let next = levels.last().expect("nonempty").eliminate(v);
            if next.infeasible {
                return None;
            }
            levels.push(next);
        }
        if levels.last().expect("nonempty").infeasible {
            return None;
        }
        let mut x: Vec<S> = Vec::with_capacity(n);
        for v in 0..n {
            let system = &levels[n - 1 - v];
            let mut lo: Option<S> = None;
            let mut hi: Option<S> = None;
            for (coeffs, rhs) in &system.rows {
                let c = &coeffs[v];
                if c.is_zero() {
                    continue;
                }
                let rest = x
                    .iter()
                    .zip(coeffs)
                    .fold(rhs.clone(), |acc, (xv, cv)| acc - xv.clone() * cv.clone());
                let bound = rest / c.clone();
                if c.is_positive() {
                    if lo.as_ref().is_none_or(|l| bound > *l) {
                        lo = Some(bound);
                    }
                } else if hi.as_ref().is_none_or(|h| bound < *h) {
                    hi = Some(bound);
                }
            }
            let value = match (lo, hi) {
                (Some(l), Some(h)) => {
                    debug_assert!(l <= h, "projection admits a value");
                    l
                }
                (Some(l), None) => l,
                (None, Some(h)) => h,
                (None, None) => S::zero(),
            };
            x.push(value);
        }
        Some(x)
    }
}
