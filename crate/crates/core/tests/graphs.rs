mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wsne_forge::{certify_kl, Digraph, Girth, KlFailure, KlVerdict, ResidueSet, Side, WinLoseGame};

use common::{all_subsets, random_digraph};

/// Length of the shortest simple cycle, by depth-first enumeration of every
/// simple path.
fn brute_girth(d: &Digraph) -> Option<usize> {
    fn extend(d: &Digraph, start: usize, path: &mut Vec<usize>, best: &mut Option<usize>) {
        let last = *path.last().unwrap();
        for w in d.out_neighbors(last).iter() {
            if w == start {
                *best = Some(best.map_or(path.len(), |b| b.min(path.len())));
            } else if w > start && !path.contains(&w) {
                path.push(w);
                extend(d, start, path, best);
                path.pop();
            }
        }
    }
    let mut best = None;
    for start in 0..d.vertex_count() {
        extend(d, start, &mut vec![start], &mut best);
    }
    best
}

/// Reachability by walks of length exactly `1..=t`, via boolean matrix
/// products.
fn brute_power(d: &Digraph, t: usize) -> Digraph {
    let n = d.vertex_count();
    let adj: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| d.has_arc(u, v)).collect()).collect();
    let mut walk = adj.clone();
    let mut any = adj.clone();
    for _ in 1..t {
        walk = (0..n)
            .map(|u| (0..n).map(|v| (0..n).any(|w| walk[u][w] && adj[w][v])).collect())
            .collect();
        for u in 0..n {
            for v in 0..n {
                any[u][v] |= walk[u][v];
            }
        }
    }
    let mut out = Digraph::new(n);
    for (u, row) in any.iter().enumerate() {
        for (v, &reach) in row.iter().enumerate() {
            if u != v && reach {
                out.add_arc(u, v).unwrap();
            }
        }
    }
    out
}

fn digraph_strategy(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.25), n * n).prop_map(move |bits| {
            let mut d = Digraph::new(n);
            for (idx, _) in bits.iter().enumerate().filter(|(_, b)| **b) {
                d.add_arc(idx / n, idx % n).unwrap();
            }
            d
        })
    })
}

proptest! {
    #[test]
    fn girth_matches_cycle_enumeration(d in digraph_strategy(7)) {
        let cycle = d.shortest_cycle();
        prop_assert_eq!(cycle.as_ref().map(Vec::len), brute_girth(&d));
        if let Some(c) = cycle {
            for (i, &v) in c.iter().enumerate() {
                prop_assert!(d.has_arc(v, c[(i + 1) % c.len()]));
            }
        }
    }

    #[test]
    fn power_matches_walks(d in digraph_strategy(7), t in 1usize..5) {
        prop_assert_eq!(d.power(t).unwrap(), brute_power(&d, t));
    }

    #[test]
    fn undominated_search_matches_subsets(d in digraph_strategy(7), l in 1usize..4) {
        prop_assume!(l <= d.vertex_count());
        let expected = all_subsets(d.vertex_count())
            .filter(|s| s.len() == l)
            .filter(|s| (0..d.vertex_count()).all(|v| s.iter().any(|&x| !d.has_arc(v, x))))
            .min();
        prop_assert_eq!(d.find_undominated_set(l).unwrap(), expected);
    }

    #[test]
    fn relabeling_preserves_certification(d in digraph_strategy(6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let perm = common::random_permutation(&mut rng, d.vertex_count());
        let e = d.relabel(&perm).unwrap();
        prop_assert_eq!(d.girth(), e.girth());
        for l in 1..=d.vertex_count().min(3) {
            prop_assert_eq!(
                certify_kl(&d, 3, l).unwrap().is_verified(),
                certify_kl(&e, 3, l).unwrap().is_verified()
            );
        }
    }
}

#[test]
fn power_of_cycle_keeps_long_cycles() {
    // C_9 squared: every cycle still needs at least ceil(9/2) arcs.
    let d = Digraph::cycle(9).power(2).unwrap();
    assert_eq!(d.girth(), Girth::Cycle(5));
    assert_eq!(d.arc_count(), 18);
}

#[test]
fn paley_power_is_complete() {
    let p7 = Digraph::cayley(7, &ResidueSet::new(7, [1, 2, 4]).unwrap()).unwrap();
    let sq = p7.power(2).unwrap();
    assert_eq!(sq.arc_count(), 42);
    assert_eq!(sq.girth(), Girth::Cycle(2));
}

#[test]
fn cayley_arcs_follow_differences() {
    let y = ResidueSet::new(11, [1, 3, 9]).unwrap();
    let d = Digraph::cayley(11, &y).unwrap();
    for u in 0..11 {
        for v in 0..11 {
            assert_eq!(d.has_arc(u, v), y.contains((u + 11 - v) % 11));
        }
    }
}

#[test]
fn certify_reports_undominated_witness() {
    let d = Digraph::cycle(5);
    match certify_kl(&d, 5, 2).unwrap() {
        KlVerdict::Failed(KlFailure::Undominated(s)) => {
            assert_eq!(s.len(), 2);
            assert!(d.is_dominated(&s).unwrap().is_none());
        }
        other => panic!("{other:?}"),
    }
    assert!(certify_kl(&d, 5, 1).unwrap().is_verified());
}

#[test]
fn bipartite_mapping_on_random_digraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let n = 1 + (rand::Rng::gen_range(&mut rng, 0..7));
        let d = random_digraph(&mut rng, n, 0.3, true);
        let g = WinLoseGame::bipartify(&d);
        let bip = g.to_bipartite_digraph();
        for i in 0..n {
            for j in 0..n {
                let (r, c) = (g.vertex(Side::Row, i), g.vertex(Side::Column, j));
                assert_eq!(bip.has_arc(r, c), i == j || d.has_arc(i, j));
                assert_eq!(bip.has_arc(c, r), d.has_arc(j, i));
            }
        }
        match (d.girth(), bip.girth()) {
            (Girth::Cycle(a), Girth::Cycle(b)) => assert!(b % 2 == 0 && a <= b && b <= 2 * a.div_ceil(2)),
            (Girth::Acyclic, Girth::Acyclic) => {}
            other => panic!("{other:?} for {d:?}"),
        }
    }
}
