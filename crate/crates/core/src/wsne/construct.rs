use crate::error::{Error, Result};
use crate::game::{Side, WinLoseGame};
use crate::scalar::{one_minus_inverse, ExactScalar};

use super::MixedStrategy;

/// A strategy pair together with the epsilon it is built to satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction<S> {
    pub p: MixedStrategy<S>,
    pub q: MixedStrategy<S>,
    pub eps: S,
}

/// Uniform play on an undominated one-sided set `U`, answered by the
/// opponent mixing uniformly over the least-index out-neighbor of each
/// member of `U`. Valid at `eps = 1 - 1/|U|`.
pub fn wsne_from_undominated<S: ExactScalar>(
    g: &WinLoseGame,
    side: Side,
    set: &[usize],
) -> Result<Construction<S>> {
    g.check_min_out_degree()?;
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    let len = match side {
        Side::Row => g.rows(),
        Side::Column => g.cols(),
    };
    if set.is_empty() || set.iter().any(|&x| x >= len) {
        return Err(Error::InvalidWitness(format!("{set:?} is not a nonempty {side:?} set")));
    }
    let d = g.to_bipartite_digraph();
    let vertices: Vec<usize> = set.iter().map(|&x| g.vertex(side, x)).collect();
    if let Some(dom) = d.is_dominated(&vertices)? {
        return Err(Error::InvalidWitness(format!(
            "{side:?} set {set:?} is dominated by vertex {dom}"
        )));
    }
    let image: Vec<usize> = vertices
        .iter()
        .map(|&v| g.side_of(d.out_neighbors(v).first().expect("out-degree checked")).1)
        .collect();
    let (p, q) = match side {
        Side::Row => (
            MixedStrategy::uniform(g.rows(), &set)?,
            MixedStrategy::uniform(g.cols(), &image)?,
        ),
        Side::Column => (
            MixedStrategy::uniform(g.rows(), &image)?,
            MixedStrategy::uniform(g.cols(), &set)?,
        ),
    };
    Ok(Construction {
        p,
        q,
        eps: one_minus_inverse(set.len()),
    })
}

/// Uniform play on the row and column vertices of a directed cycle of
/// length `2k` in the bipartite digraph. Valid at `eps = 1 - 1/k`.
pub fn wsne_from_cycle<S: ExactScalar>(g: &WinLoseGame, cycle: &[usize]) -> Result<Construction<S>> {
    let len = cycle.len();
    if len == 0 || len % 2 == 1 {
        return Err(Error::InvalidWitness(format!("cycle of length {len} is not even")));
    }
    let d = g.to_bipartite_digraph();
    let mut seen = vec![false; d.vertex_count()];
    for (idx, &v) in cycle.iter().enumerate() {
        let w = cycle[(idx + 1) % len];
        if !d.has_arc(v, w) {
            return Err(Error::InvalidWitness(format!("no arc {v} -> {w}")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidWitness(format!("vertex {v} repeats")));
        }
    }
    let (rows, cols): (Vec<usize>, Vec<usize>) = cycle.iter().partition(|&&v| v < g.rows());
    let cols: Vec<usize> = cols.into_iter().map(|v| v - g.rows()).collect();
    Ok(Construction {
        p: MixedStrategy::uniform(g.rows(), &rows)?,
        q: MixedStrategy::uniform(g.cols(), &cols)?,
        eps: one_minus_inverse(len / 2),
    })
}
