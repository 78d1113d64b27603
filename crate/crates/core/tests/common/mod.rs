#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use wsne_forge::{Digraph, WinLoseGame};

pub fn random_digraph(rng: &mut ChaCha8Rng, n: usize, density: f64, loops: bool) -> Digraph {
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if (u != v || loops) && rng.gen_bool(density) {
                d.add_arc(u, v).unwrap();
            }
        }
    }
    d
}

/// Square win-lose game whose bipartite digraph has no sinks.
pub fn random_game(rng: &mut ChaCha8Rng, n: usize, density: f64) -> WinLoseGame {
    loop {
        let a: Vec<Vec<u8>> = (0..n).map(|_| (0..n).map(|_| rng.gen_bool(density) as u8).collect()).collect();
        let b: Vec<Vec<u8>> = (0..n).map(|_| (0..n).map(|_| rng.gen_bool(density) as u8).collect()).collect();
        let g = WinLoseGame::from_matrices(&a, &b).unwrap();
        if g.check_min_out_degree().is_ok() {
            return g;
        }
    }
}

pub fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// Every subset of `0..n` as a sorted vector, including the empty one.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
}

/// Square win-lose game whose bipartite digraph gives every vertex between
/// one and `max_out` out-neighbors, which keeps cycles long.
pub fn sparse_game(rng: &mut ChaCha8Rng, n: usize, max_out: usize) -> WinLoseGame {
    let mut a = vec![vec![0u8; n]; n];
    let mut b = vec![vec![0u8; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        for _ in 0..rng.gen_range(1..=max_out) {
            row[rng.gen_range(0..n)] = 1;
        }
        for _ in 0..rng.gen_range(1..=max_out) {
            b[rng.gen_range(0..n)][i] = 1;
        }
    }
    WinLoseGame::from_matrices(&a, &b).unwrap()
}

/// Two random permutations as `A` and `B`, plus extra ones at `extra`
/// density. Every vertex has an in-neighbor, so singletons are dominated.
pub fn permutation_game(rng: &mut ChaCha8Rng, n: usize, extra: f64) -> WinLoseGame {
    let sigma = random_permutation(rng, n);
    let tau = random_permutation(rng, n);
    let mut a = vec![vec![0u8; n]; n];
    let mut b = vec![vec![0u8; n]; n];
    for i in 0..n {
        a[i][sigma[i]] = 1;
        b[tau[i]][i] = 1;
        for j in 0..n {
            if rng.gen_bool(extra) {
                a[i][j] = 1;
            }
            if rng.gen_bool(extra) {
                b[i][j] = 1;
            }
        }
    }
    WinLoseGame::from_matrices(&a, &b).unwrap()
}
