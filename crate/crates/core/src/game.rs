//! Win-lose bimatrix games and their bipartite best-response digraphs.
//!
//! Bipartite vertex `i < m` is row `r_i`; vertex `m + j` is column `c_j`.
//! Arc `r_i -> c_j` iff `A[i][j] = 1` and arc `c_j -> r_i` iff `B[i][j] = 1`.

use std::fmt;

use crate::digraph::Digraph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Row,
    Column,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WinLoseGame {
    rows: usize,
    cols: usize,
    a: Vec<bool>,
    b: Vec<bool>,
}

impl WinLoseGame {
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut a: impl FnMut(usize, usize) -> bool,
        mut b: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        let cells = || (0..rows).flat_map(move |i| (0..cols).map(move |j| (i, j)));
        WinLoseGame {
            rows,
            cols,
            a: cells().map(|(i, j)| a(i, j)).collect(),
            b: cells().map(|(i, j)| b(i, j)).collect(),
        }
    }

    /// Builds a game from 0-1 matrices given row by row.
    pub fn from_matrices(a: &[Vec<u8>], b: &[Vec<u8>]) -> Result<Self> {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        if b.len() != rows {
            return Err(Error::DimensionMismatch(format!(
                "A has {rows} rows, B has {}",
                b.len()
            )));
        }
        for (name, m) in [("A", a), ("B", b)] {
            for (i, row) in m.iter().enumerate() {
                if row.len() != cols {
                    return Err(Error::DimensionMismatch(format!(
                        "{name} row {i} has {} entries, expected {cols}",
                        row.len()
                    )));
                }
                if let Some(&x) = row.iter().find(|&&x| x > 1) {
                    return Err(Error::InvalidParameter(format!(
                        "{name} row {i} holds {x}; win-lose payoffs are 0 or 1"
                    )));
                }
            }
        }
        Ok(WinLoseGame::from_fn(rows, cols, |i, j| a[i][j] == 1, |i, j| b[i][j] == 1))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row player's payoff at `(i, j)`.
    #[inline]
    pub fn a(&self, i: usize, j: usize) -> bool {
        self.a[i * self.cols + j]
    }

    /// Column player's payoff at `(i, j)`.
    #[inline]
    pub fn b(&self, i: usize, j: usize) -> bool {
        self.b[i * self.cols + j]
    }

    pub fn vertex(&self, side: Side, index: usize) -> usize {
        match side {
            Side::Row => index,
            Side::Column => self.rows + index,
        }
    }

    pub fn side_of(&self, vertex: usize) -> (Side, usize) {
        if vertex < self.rows {
            (Side::Row, vertex)
        } else {
            (Side::Column, vertex - self.rows)
        }
    }

    pub fn to_bipartite_digraph(&self) -> Digraph {
        let m = self.rows;
        let mut d = Digraph::new(m + self.cols);
        for i in 0..m {
            for j in 0..self.cols {
                if self.a(i, j) {
                    d.add_arc(i, m + j).expect("in range");
                }
                if self.b(i, j) {
                    d.add_arc(m + j, i).expect("in range");
                }
            }
        }
        d
    }

    /// Square game on `V(D)`: `A[i][j] = 1` iff `i = j` or `i -> j`;
    /// `B[i][j] = 1` iff `j -> i`.
    pub fn bipartify(d: &Digraph) -> Self {
        let n = d.vertex_count();
        WinLoseGame::from_fn(n, n, |i, j| i == j || d.has_arc(i, j), |i, j| d.has_arc(j, i))
    }

    /// Bipartite vertices with no outgoing arc.
    pub fn zero_out_degree_vertices(&self) -> Vec<usize> {
        let rows = (0..self.rows).filter(|&i| !(0..self.cols).any(|j| self.a(i, j)));
        let cols = (0..self.cols)
            .filter(|&j| !(0..self.rows).any(|i| self.b(i, j)))
            .map(|j| self.rows + j);
        rows.chain(cols).collect()
    }

    pub fn check_min_out_degree(&self) -> Result<()> {
        let bad = self.zero_out_degree_vertices();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::ZeroOutDegree(bad))
        }
    }

    /// Decides whether the bipartite digraph has a cycle of length at most
    /// `2k` or a one-sided undominated set of cardinality `k`.
    ///
    /// A shortest cycle wins when both exist. Undominated sets are searched
    /// on the row side first, each side in lexicographic order.
    pub fn char_decision(&self, k: usize) -> Result<CharWitness> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        self.check_min_out_degree()?;
        let d = self.to_bipartite_digraph();
        if let Some(cycle) = d.shortest_cycle().filter(|c| c.len() <= 2 * k) {
            return Ok(CharWitness::Cycle(cycle));
        }
        for (side, len) in [(Side::Row, self.rows), (Side::Column, self.cols)] {
            if k > len {
                continue;
            }
            let vertices: Vec<usize> = (0..len).map(|x| self.vertex(side, x)).collect();
            if let Some(set) = d.find_undominated_among(&vertices, k)? {
                let indices = set.into_iter().map(|v| self.side_of(v).1).collect();
                return Ok(CharWitness::Undominated { side, indices });
            }
        }
        Ok(CharWitness::Neither)
    }
}

impl fmt::Debug for WinLoseGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let grid = |get: &dyn Fn(usize, usize) -> bool| -> Vec<String> {
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| if get(i, j) { '1' } else { '0' }).collect())
                .collect()
        };
        f.debug_struct("WinLoseGame")
            .field("a", &grid(&|i, j| self.a(i, j)))
            .field("b", &grid(&|i, j| self.b(i, j)))
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharWitness {
    /// Bipartite vertex sequence of a directed cycle.
    Cycle(Vec<usize>),
    Undominated { side: Side, indices: Vec<usize> },
    Neither,
}

impl CharWitness {
    pub fn is_neither(&self) -> bool {
        matches!(self, CharWitness::Neither)
    }
}
