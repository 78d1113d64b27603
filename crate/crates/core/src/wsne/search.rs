use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{CharWitness, WinLoseGame};
use crate::scalar::{one_minus_inverse, ExactScalar};

use super::feasibility::{decide, Feasibility, SupportPair};
use super::MixedStrategy;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExhaustiveOutcome<S> {
    Witness {
        supports: SupportPair,
        p: MixedStrategy<S>,
        q: MixedStrategy<S>,
        /// Support pairs examined up to and including the witness.
        pairs_examined: u64,
    },
    NoneExists {
        pairs_refuted: u64,
    },
}

impl<S> ExhaustiveOutcome<S> {
    pub fn is_witness(&self) -> bool {
        matches!(self, ExhaustiveOutcome::Witness { .. })
    }
}

/// All subsets of `0..n` with `1..=k` members, by size and then
/// lexicographically.
fn graded_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=k.min(n) {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            out.push(combo.clone());
            let Some(i) = (0..size).rev().find(|&i| combo[i] < n - size + i) else {
                break;
            };
            combo[i] += 1;
            for j in i + 1..size {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    out
}

fn validate(g: &WinLoseGame, k: usize, eps: &impl ExactScalar) -> Result<()> {
    if k == 0 || k > g.rows().min(g.cols()) {
        return Err(Error::InvalidParameter(format!(
            "support bound {k} outside 1..={} for a {}x{} game",
            g.rows().min(g.cols()),
            g.rows(),
            g.cols()
        )));
    }
    if eps.is_negative() {
        return Err(Error::NegativeEpsilon);
    }
    Ok(())
}

/// Enumerates every support pair with at most `k` strategies per player,
/// row supports in the outer loop, each in size-then-lexicographic order,
/// and returns the first pair admitting an eps-WSNE.
pub fn exhaustive_search<S: ExactScalar>(g: &WinLoseGame, k: usize, eps: &S) -> Result<ExhaustiveOutcome<S>> {
    validate(g, k, eps)?;
    let rows = graded_subsets(g.rows(), k);
    let cols = graded_subsets(g.cols(), k);
    let mut examined = 0u64;
    for p_set in &rows {
        for q_set in &cols {
            examined += 1;
            let supports = SupportPair {
                rows: p_set.clone(),
                cols: q_set.clone(),
            };
            if let Feasibility::Feasible { p, q } = decide(g, &supports, eps) {
                return Ok(ExhaustiveOutcome::Witness {
                    supports,
                    p,
                    q,
                    pairs_examined: examined,
                });
            }
        }
    }
    Ok(ExhaustiveOutcome::NoneExists {
        pairs_refuted: examined,
    })
}

/// Same contract as [`exhaustive_search`], with the pair space split
/// across `workers` threads. The reported witness is still the first one
/// in enumeration order.
pub fn exhaustive_search_parallel<S: ExactScalar>(
    g: &WinLoseGame,
    k: usize,
    eps: &S,
    workers: usize,
) -> Result<ExhaustiveOutcome<S>> {
    if workers <= 1 {
        return exhaustive_search(g, k, eps);
    }
    validate(g, k, eps)?;
    let rows = graded_subsets(g.rows(), k);
    let cols = graded_subsets(g.cols(), k);
    let total = rows.len() * cols.len();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let found = pool.install(|| {
        (0..total).into_par_iter().find_map_first(|idx| {
            let supports = SupportPair {
                rows: rows[idx / cols.len()].clone(),
                cols: cols[idx % cols.len()].clone(),
            };
            match decide(g, &supports, eps) {
                Feasibility::Feasible { p, q } => Some(ExhaustiveOutcome::Witness {
                    supports,
                    p,
                    q,
                    pairs_examined: idx as u64 + 1,
                }),
                Feasibility::Infeasible => None,
            }
        })
    });
    Ok(found.unwrap_or(ExhaustiveOutcome::NoneExists {
        pairs_refuted: total as u64,
    }))
}

#[derive(Clone, Debug)]
pub struct CrossCheckPoint<S> {
    pub eps: S,
    pub outcome: ExhaustiveOutcome<S>,
    pub agree: bool,
}

/// The combinatorial decision and the support-enumeration oracle, side by
/// side, at two epsilons inside `[1 - 1/k, 1)`.
#[derive(Clone, Debug)]
pub struct CrossCheck<S> {
    pub k: usize,
    pub characterization: CharWitness,
    pub points: Vec<CrossCheckPoint<S>>,
}

impl<S> CrossCheck<S> {
    pub fn agree(&self) -> bool {
        self.points.iter().all(|p| p.agree)
    }
}

pub fn crosscheck_characterization<S: ExactScalar>(g: &WinLoseGame, k: usize) -> Result<CrossCheck<S>> {
    let characterization = g.char_decision(k)?;
    let predicted = !characterization.is_neither();
    let points = [one_minus_inverse::<S>(k), one_minus_inverse::<S>(2 * k)]
        .into_iter()
        .map(|eps| {
            let outcome = exhaustive_search(g, k, &eps)?;
            Ok(CrossCheckPoint {
                agree: outcome.is_witness() == predicted,
                eps,
                outcome,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CrossCheck {
        k,
        characterization,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;
    use crate::wsne::check_wsne;
    use crate::Rational64;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn triangle_game() -> WinLoseGame {
        WinLoseGame::bipartify(&Digraph::cycle(3))
    }

    #[test]
    fn graded_order() {
        assert_eq!(
            graded_subsets(3, 2),
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(graded_subsets(8, 3).len(), 8 + 28 + 56);
    }

    #[test]
    fn triangle_has_no_pure_wsne() {
        let out = exhaustive_search(&triangle_game(), 1, &r(99, 100)).unwrap();
        assert_eq!(out, ExhaustiveOutcome::NoneExists { pairs_refuted: 9 });
    }

    #[test]
    fn triangle_has_pair_supported_wsne() {
        let g = triangle_game();
        match exhaustive_search(&g, 2, &r(1, 2)).unwrap() {
            ExhaustiveOutcome::Witness { supports, p, q, .. } => {
                assert!(supports.rows.len() <= 2 && supports.cols.len() <= 2);
                assert!(check_wsne(&g, &p, &q, &r(1, 2)).unwrap().valid);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pure_equilibrium_found() {
        let g = WinLoseGame::from_matrices(&[vec![1]], &[vec![1]]).unwrap();
        let out = exhaustive_search(&g, 1, &r(0, 1)).unwrap();
        assert!(matches!(out, ExhaustiveOutcome::Witness { pairs_examined: 1, .. }));
    }

    #[test]
    fn rejects_out_of_range_k() {
        assert!(exhaustive_search(&triangle_game(), 0, &r(1, 2)).is_err());
        assert!(exhaustive_search(&triangle_game(), 4, &r(1, 2)).is_err());
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = triangle_game();
        for (k, eps) in [(1, r(99, 100)), (2, r(1, 2)), (3, r(0, 1))] {
            assert_eq!(
                exhaustive_search(&g, k, &eps).unwrap(),
                exhaustive_search_parallel(&g, k, &eps, 4).unwrap()
            );
        }
    }

    #[test]
    fn crosscheck_examples() {
        let g = triangle_game();
        let c = crosscheck_characterization::<Rational64>(&g, 1).unwrap();
        assert!(c.agree() && c.characterization.is_neither());
        let c = crosscheck_characterization::<Rational64>(&g, 2).unwrap();
        assert!(c.agree() && c.points.iter().all(|p| p.outcome.is_witness()));
        let g = WinLoseGame::from_matrices(&[vec![1]], &[vec![1]]).unwrap();
        assert!(crosscheck_characterization::<Rational64>(&g, 1).unwrap().agree());

        let sink = WinLoseGame::from_matrices(&[vec![1]], &[vec![0]]).unwrap();
        assert!(matches!(crosscheck_characterization::<Rational64>(&sink, 1), Err(Error::ZeroOutDegree(_))));
    }
}
