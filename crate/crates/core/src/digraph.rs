//! Finite digraphs on vertices `0..n` with bitset adjacency rows.

use std::collections::VecDeque;
use std::fmt;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::residues::ResidueSet;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<BitSet>,
}

/// Length of the shortest directed cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Girth {
    Cycle(usize),
    Acyclic,
}

impl Girth {
    /// Every directed cycle has length at least `k` (vacuous when acyclic).
    pub fn at_least(self, k: usize) -> bool {
        match self {
            Girth::Cycle(g) => g >= k,
            Girth::Acyclic => true,
        }
    }

    pub fn length(self) -> Option<usize> {
        match self {
            Girth::Cycle(g) => Some(g),
            Girth::Acyclic => None,
        }
    }
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            n,
            out: vec![BitSet::new(n); n],
        }
    }

    pub fn from_arcs<I: IntoIterator<Item = (usize, usize)>>(n: usize, arcs: I) -> Result<Self> {
        let mut d = Digraph::new(n);
        for (u, v) in arcs {
            d.add_arc(u, v)?;
        }
        Ok(d)
    }

    /// The directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn cycle(n: usize) -> Self {
        Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n))).expect("in range")
    }

    /// Arc `z1 -> z2` iff `z1 - z2 mod q` lies in `generators`.
    pub fn cayley(q: usize, generators: &ResidueSet) -> Result<Self> {
        if generators.modulus() != q {
            return Err(Error::ModulusMismatch {
                expected: q,
                found: generators.modulus(),
            });
        }
        // out(z) = z - Y, i.e. the negated generators rotated by z
        let negated = BitSet::from_indices(q, generators.iter().map(|y| (q - y) % q));
        let out = (0..q)
            .map(|z| {
                let mut row = BitSet::new(q);
                negated.rotate_or_into(z, &mut row);
                row
            })
            .collect();
        Ok(Digraph { n: q, out })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.out[u].insert(v);
        Ok(())
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && self.out[u].contains(v)
    }

    pub fn out_neighbors(&self, v: usize) -> &BitSet {
        &self.out[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count()
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(BitSet::count).sum()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().map(move |v| (u, v)))
    }

    pub fn in_neighborhoods(&self) -> Vec<BitSet> {
        let mut inn = vec![BitSet::new(self.n); self.n];
        for (u, v) in self.arcs() {
            inn[v].insert(u);
        }
        inn
    }

    pub fn min_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).min().unwrap_or(0)
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.out[v].is_empty()).collect()
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {} for {} vertices",
                perm.len(),
                self.n
            )));
        }
        let mut seen = BitSet::new(self.n);
        for &p in perm {
            self.check_vertex(p)?;
            if seen.contains(p) {
                return Err(Error::InvalidParameter(format!("{p} repeated in permutation")));
            }
            seen.insert(p);
        }
        Digraph::from_arcs(self.n, self.arcs().map(|(u, v)| (perm[u], perm[v])))
    }

    /// A shortest directed cycle as its vertex sequence, or `None` if the
    /// digraph is acyclic. Ties go to the least start vertex, then to the
    /// breadth-first tree built from ascending neighbor order.
    pub fn shortest_cycle(&self) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            let bound = best.as_ref().map_or(usize::MAX, Vec::len);
            dist.fill(usize::MAX);
            queue.clear();
            dist[start] = 0;
            queue.push_back(start);
            'bfs: while let Some(u) = queue.pop_front() {
                if dist[u] + 1 >= bound {
                    break;
                }
                for w in self.out[u].iter() {
                    if w == start {
                        let mut cycle = vec![u];
                        let mut x = u;
                        while x != start {
                            x = parent[x];
                            cycle.push(x);
                        }
                        cycle.reverse();
                        best = Some(cycle);
                        break 'bfs;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    }
                }
            }
            if best.as_ref().is_some_and(|c| c.len() == 1) {
                break;
            }
        }
        best
    }

    pub fn girth(&self) -> Girth {
        self.shortest_cycle()
            .map_or(Girth::Acyclic, |c| Girth::Cycle(c.len()))
    }

    /// Least vertex with an arc to every member of `set`, if any.
    pub fn is_dominated(&self, set: &[usize]) -> Result<Option<usize>> {
        if set.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        let mut target = BitSet::new(self.n);
        for &v in set {
            self.check_vertex(v)?;
            target.insert(v);
        }
        Ok((0..self.n).find(|&v| target.is_subset(&self.out[v])))
    }

    /// Lexicographically first undominated `l`-subset of the vertices.
    pub fn find_undominated_set(&self, l: usize) -> Result<Option<Vec<usize>>> {
        let all: Vec<usize> = (0..self.n).collect();
        self.find_undominated_among(&all, l)
    }

    /// Lexicographically first `l`-subset of `candidates` (ascending) that
    /// no vertex of the whole digraph dominates.
    pub fn find_undominated_among(&self, candidates: &[usize], l: usize) -> Result<Option<Vec<usize>>> {
        if l == 0 {
            return Err(Error::InvalidParameter("subset size must be positive".into()));
        }
        if l > candidates.len() {
            return Err(Error::SubsetTooLarge {
                size: l,
                available: candidates.len(),
            });
        }
        for &c in candidates {
            self.check_vertex(c)?;
        }
        let inn = self.in_neighborhoods();
        let mut chosen = Vec::with_capacity(l);
        Ok(undominated_dfs(&inn, candidates, l, 0, &BitSet::full(self.n), &mut chosen))
    }

    /// Every `l`-subset has a dominator. For `l <= n` this covers all
    /// smaller subsets too, since they extend to `l`-subsets.
    pub fn all_subsets_dominated(&self, l: usize) -> Result<bool> {
        Ok(self.find_undominated_set(l)?.is_none())
    }

    /// Arc `v -> w` iff `v != w` and some walk of length `1..=t` leads from
    /// `v` to `w`.
    pub fn power(&self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter("power exponent must be positive".into()));
        }
        let out = (0..self.n)
            .map(|v| {
                let mut reach = self.out[v].clone();
                let mut frontier = reach.clone();
                for _ in 1..t {
                    let mut next = BitSet::new(self.n);
                    for u in frontier.iter() {
                        next.union_with(&self.out[u]);
                    }
                    for r in reach.iter() {
                        next.remove(r);
                    }
                    if next.is_empty() {
                        break;
                    }
                    reach.union_with(&next);
                    frontier = next;
                }
                reach.remove(v);
                reach
            })
            .collect();
        Ok(Digraph { n: self.n, out })
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }
}

fn undominated_dfs(
    inn: &[BitSet],
    candidates: &[usize],
    l: usize,
    start: usize,
    common: &BitSet,
    chosen: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let depth = chosen.len();
    let last = candidates.len() - (l - depth);
    for idx in start..=last {
        let mut next = common.clone();
        next.intersect_with(&inn[candidates[idx]]);
        chosen.push(candidates[idx]);
        if next.is_empty() {
            // every completion is undominated; take the least one
            let rest = l - chosen.len();
            let mut set = chosen.clone();
            set.extend_from_slice(&candidates[idx + 1..idx + 1 + rest]);
            return Some(set);
        }
        if chosen.len() < l {
            if let Some(found) = undominated_dfs(inn, candidates, l, idx + 1, &next, chosen) {
                return Some(found);
            }
        }
        chosen.pop();
    }
    None
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

/// A digraph confirmed to have girth at least `k` with every `l`-subset
/// dominated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KlCertificate {
    pub k: usize,
    pub l: usize,
    pub girth: Girth,
    pub domination_exhaustive: bool,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KlFailure {
    ShortCycle(Vec<usize>),
    Undominated(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KlVerdict {
    Verified(KlCertificate),
    Failed(KlFailure),
}

impl KlVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, KlVerdict::Verified(_))
    }
}

pub fn certify_kl(d: &Digraph, k: usize, l: usize) -> Result<KlVerdict> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidParameter("k and l must be positive".into()));
    }
    if l > d.vertex_count() {
        return Err(Error::SubsetTooLarge {
            size: l,
            available: d.vertex_count(),
        });
    }
    let cycle = d.shortest_cycle();
    if let Some(c) = cycle.as_ref().filter(|c| c.len() < k) {
        return Ok(KlVerdict::Failed(KlFailure::ShortCycle(c.clone())));
    }
    if let Some(s) = d.find_undominated_set(l)? {
        return Ok(KlVerdict::Failed(KlFailure::Undominated(s)));
    }
    Ok(KlVerdict::Verified(KlCertificate {
        k,
        l,
        girth: cycle.map_or(Girth::Acyclic, |c| Girth::Cycle(c.len())),
        domination_exhaustive: true,
        verified: true,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paley7() -> Digraph {
        Digraph::cayley(7, &ResidueSet::new(7, [1, 2, 4]).unwrap()).unwrap()
    }

    #[test]
    fn cayley_examples() {
        let c3 = Digraph::cayley(3, &ResidueSet::new(3, [1]).unwrap()).unwrap();
        assert_eq!(c3.arcs().collect::<Vec<_>>(), vec![(0, 2), (1, 0), (2, 1)]);
        let p = paley7();
        assert!((0..7).all(|v| p.out_degree(v) == 3));
        assert_eq!(p.arc_count(), 21);
        let empty = Digraph::cayley(2, &ResidueSet::empty(2).unwrap()).unwrap();
        assert_eq!((empty.vertex_count(), empty.arc_count()), (2, 0));
        assert!(matches!(
            Digraph::cayley(5, &ResidueSet::new(7, [1]).unwrap()),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn girth_examples() {
        assert_eq!(Digraph::cycle(3).girth(), Girth::Cycle(3));
        assert_eq!(Digraph::from_arcs(2, [(0, 1)]).unwrap().girth(), Girth::Acyclic);
        let p = paley7();
        assert_eq!(p.girth(), Girth::Cycle(3));
        assert!(p.has_arc(0, 6) && p.has_arc(6, 4) && p.has_arc(4, 0));
        assert_eq!(Digraph::from_arcs(2, [(1, 1)]).unwrap().girth(), Girth::Cycle(1));
        assert_eq!(Digraph::from_arcs(2, [(0, 1), (1, 0)]).unwrap().girth(), Girth::Cycle(2));
    }

    #[test]
    fn shortest_cycle_is_a_cycle() {
        let p = paley7();
        let c = p.shortest_cycle().unwrap();
        for i in 0..c.len() {
            assert!(p.has_arc(c[i], c[(i + 1) % c.len()]));
        }
    }

    #[test]
    fn domination_examples() {
        let tri = Digraph::cycle(3);
        assert_eq!(tri.is_dominated(&[1]).unwrap(), Some(0));
        assert_eq!(tri.is_dominated(&[0, 1]).unwrap(), None);
        let c3 = Digraph::cayley(3, &ResidueSet::new(3, [1]).unwrap()).unwrap();
        assert_eq!(c3.is_dominated(&[1]).unwrap(), Some(2));
        assert!(matches!(tri.is_dominated(&[]), Err(Error::EmptyVertexSet)));
        assert!(tri.is_dominated(&[3]).is_err());

        let p = paley7();
        for a in 0..7 {
            for b in a + 1..7 {
                assert!(p.is_dominated(&[a, b]).unwrap().is_some());
            }
        }
    }

    #[test]
    fn undominated_examples() {
        let tri = Digraph::cycle(3);
        assert!(tri.all_subsets_dominated(1).unwrap());
        assert!(!tri.all_subsets_dominated(2).unwrap());
        assert_eq!(tri.find_undominated_set(2).unwrap(), Some(vec![0, 1]));
        assert!(paley7().all_subsets_dominated(2).unwrap());
        assert_eq!(paley7().find_undominated_set(2).unwrap(), None);
        let loop1 = Digraph::from_arcs(1, [(0, 0)]).unwrap();
        assert_eq!(loop1.find_undominated_set(1).unwrap(), None);
        assert!(tri.find_undominated_set(4).is_err());
    }

    #[test]
    fn power_examples() {
        let c5 = Digraph::cycle(5);
        assert_eq!(c5.power(1).unwrap(), c5);
        let sq = c5.power(2).unwrap();
        assert!((0..5).all(|v| sq.out_neighbors(v).iter().collect::<Vec<_>>()
            == {
                let mut w = vec![(v + 1) % 5, (v + 2) % 5];
                w.sort();
                w
            }));
        assert_eq!(sq.girth(), Girth::Cycle(3));
        let arc = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        assert_eq!(arc.power(3).unwrap(), arc);
        assert!(arc.power(0).is_err());
    }

    #[test]
    fn power_drops_self_loops() {
        let d = Digraph::from_arcs(2, [(0, 0), (0, 1), (1, 0)]).unwrap();
        let p = d.power(2).unwrap();
        assert!(!p.has_arc(0, 0) && !p.has_arc(1, 1));
        assert!(p.has_arc(0, 1) && p.has_arc(1, 0));
    }

    #[test]
    fn min_out_degree_examples() {
        assert_eq!(Digraph::cycle(3).min_out_degree(), 1);
        assert_eq!(paley7().min_out_degree(), 3);
        assert_eq!(Digraph::new(2).min_out_degree(), 0);
    }

    #[test]
    fn certify_examples() {
        assert!(certify_kl(&Digraph::cycle(3), 3, 1).unwrap().is_verified());
        match certify_kl(&paley7(), 3, 2).unwrap() {
            KlVerdict::Verified(c) => {
                assert_eq!(c.girth, Girth::Cycle(3));
                assert!(c.verified && c.domination_exhaustive);
            }
            other => panic!("{other:?}"),
        }
        match certify_kl(&paley7(), 4, 2).unwrap() {
            KlVerdict::Failed(KlFailure::ShortCycle(c)) => assert_eq!(c.len(), 3),
            other => panic!("{other:?}"),
        }
        match certify_kl(&Digraph::cycle(3), 3, 2).unwrap() {
            KlVerdict::Failed(KlFailure::Undominated(s)) => assert_eq!(s, vec![0, 1]),
            other => panic!("{other:?}"),
        }
        let dag = Digraph::from_arcs(3, [(0, 1), (0, 2)]).unwrap();
        assert!(certify_kl(&dag, 100, 1).is_ok());
        assert!(certify_kl(&dag, 0, 1).is_err());
    }
}
