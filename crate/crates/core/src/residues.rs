//! Subsets of the cyclic group `Z_q`: difference sets, iterated sumsets, and
//! the search for sets whose differences cover the group while short sums
//! avoid zero.

use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};

use num_integer::Integer;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// A subset of `Z_q` together with its modulus `q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: usize,
    members: BitSet,
}

impl ResidueSet {
    pub fn new<I: IntoIterator<Item = usize>>(modulus: usize, members: I) -> Result<Self> {
        let mut set = ResidueSet::empty(modulus)?;
        for value in members {
            if value >= modulus {
                return Err(Error::ResidueOutOfRange { value, modulus });
            }
            set.members.insert(value);
        }
        Ok(set)
    }

    pub fn empty(modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        Ok(ResidueSet {
            modulus,
            members: BitSet::new(modulus),
        })
    }

    fn from_bits(members: BitSet) -> Self {
        ResidueSet {
            modulus: members.len(),
            members,
        }
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, r: usize) -> bool {
        self.members.contains(r)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn bits(&self) -> &BitSet {
        &self.members
    }

    /// `{ a - b mod q : a, b in self }`.
    pub fn difference_set(&self) -> ResidueSet {
        let q = self.modulus;
        let mut out = BitSet::new(q);
        // a - b = a + (q - b)
        for b in self.iter() {
            self.members.rotate_or_into((q - b) % q, &mut out);
        }
        ResidueSet::from_bits(out)
    }

    /// The sumset `self + other`, both over the same modulus.
    pub fn sumset(&self, other: &ResidueSet) -> Result<ResidueSet> {
        self.check_modulus(other)?;
        Ok(self.sumset_unchecked(other))
    }

    fn sumset_unchecked(&self, other: &ResidueSet) -> ResidueSet {
        let mut out = BitSet::new(self.modulus);
        for y in other.iter() {
            self.members.rotate_or_into(y, &mut out);
        }
        ResidueSet::from_bits(out)
    }

    /// `(s)Y`: all sums of `s` members, repetition allowed.
    pub fn iterated_sumset(&self, s: usize) -> Result<ResidueSet> {
        if s == 0 {
            return Err(Error::ZeroSummands);
        }
        let mut acc = self.clone();
        for _ in 1..s {
            acc = acc.sumset_unchecked(self);
        }
        Ok(acc)
    }

    /// Smallest `s` in `1..=max_s` with `0 ∈ (s)Y`.
    pub fn first_zero_sum(&self, max_s: usize) -> Option<usize> {
        if self.is_empty() {
            return None;
        }
        let mut acc = self.clone();
        for s in 1..=max_s {
            if s > 1 {
                acc = acc.sumset_unchecked(self);
            }
            if acc.contains(0) {
                return Some(s);
            }
        }
        None
    }

    pub fn is_complete_difference_set(&self) -> bool {
        self.difference_set().members.is_full()
    }

    /// `Y - Y = Z_q` and `0 ∉ (s)Y` for every `1 <= s < kappa`.
    pub fn satisfies_haight(&self, kappa: usize) -> bool {
        self.is_complete_difference_set()
            && self.first_zero_sum(kappa.saturating_sub(1)).is_none()
    }

    /// Number of residues missing from `Y - Y` plus the number of levels
    /// `s < kappa` at which `0 ∈ (s)Y`. Zero iff `satisfies_haight`.
    pub fn haight_defect(&self, kappa: usize) -> usize {
        let missing = self.modulus - self.difference_set().len();
        let mut violated = 0;
        if !self.is_empty() {
            let mut acc = self.clone();
            for s in 1..kappa {
                if s > 1 {
                    acc = acc.sumset_unchecked(self);
                }
                if acc.contains(0) {
                    violated += 1;
                }
            }
        }
        missing + violated
    }

    /// `{ x - y mod q : x in self }`.
    pub fn shift(&self, y: usize) -> Result<ResidueSet> {
        if y >= self.modulus {
            return Err(Error::ResidueOutOfRange {
                value: y,
                modulus: self.modulus,
            });
        }
        let mut out = BitSet::new(self.modulus);
        self.members
            .rotate_or_into((self.modulus - y) % self.modulus, &mut out);
        Ok(ResidueSet::from_bits(out))
    }

    /// `{ u * x mod q : x in self }`.
    pub fn scale(&self, u: usize) -> ResidueSet {
        let q = self.modulus;
        ResidueSet::from_bits(BitSet::from_indices(q, self.iter().map(|x| (x * u) % q)))
    }

    /// Whether the sorted member list is lexicographically least among all
    /// unit multiples `uY`, `gcd(u, q) = 1`.
    pub fn is_scaling_canonical(&self) -> bool {
        let q = self.modulus;
        let own = self.to_vec();
        (2..q)
            .filter(|u| u.gcd(&q) == 1)
            .all(|u| self.scale(u).to_vec() >= own)
    }

    fn check_modulus(&self, other: &ResidueSet) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                expected: self.modulus,
                found: other.modulus,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.to_vec(), self.modulus)
    }
}

/// A residue set whose Haight conditions were checked from scratch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HaightCertificate {
    set: ResidueSet,
    kappa: usize,
    verified: bool,
}

impl HaightCertificate {
    /// Checks the conditions and returns a certificate only if they hold.
    pub fn certify(set: ResidueSet, kappa: usize) -> Option<Self> {
        let mut cert = HaightCertificate {
            set,
            kappa,
            verified: false,
        };
        cert.verified = cert.reverify();
        cert.verified.then_some(cert)
    }

    pub fn modulus(&self) -> usize {
        self.set.modulus()
    }

    pub fn set(&self) -> &ResidueSet {
        &self.set
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn verified(&self) -> bool {
        self.verified
    }

    /// Re-runs both checks on the stored set.
    pub fn reverify(&self) -> bool {
        self.kappa >= 2 && self.set.satisfies_haight(self.kappa)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Randomized,
}

#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub kappa: usize,
    pub q_min: usize,
    pub q_max: usize,
    /// Maximum number of candidate sets evaluated.
    pub budget: u64,
    pub seed: u64,
    pub mode: SearchMode,
    pub workers: usize,
}

impl SearchSpec {
    pub fn exhaustive(kappa: usize, q_max: usize, budget: u64) -> Self {
        SearchSpec {
            kappa,
            q_min: 1,
            q_max,
            budget,
            seed: 0,
            mode: SearchMode::Exhaustive,
            workers: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSearch(m.to_string()));
        if self.kappa < 2 {
            return bad("kappa must be at least 2");
        }
        if self.q_min == 0 {
            return bad("q_min must be at least 1");
        }
        if self.q_min > self.q_max {
            return bad("q_min exceeds q_max");
        }
        if self.budget == 0 {
            return bad("budget must be at least 1");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found {
        certificate: HaightCertificate,
        evaluations: u64,
    },
    /// Budget exhausted. Says nothing about existence.
    NotFound { evaluations: u64 },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&HaightCertificate> {
        match self {
            SearchOutcome::Found { certificate, .. } => Some(certificate),
            SearchOutcome::NotFound { .. } => None,
        }
    }

    pub fn evaluations(&self) -> u64 {
        match self {
            SearchOutcome::Found { evaluations, .. } | SearchOutcome::NotFound { evaluations } => {
                *evaluations
            }
        }
    }
}

/// Smallest `s` with `s(s-1) + 1 >= q`; no smaller set can have `Y - Y = Z_q`.
fn min_complete_size(q: usize) -> usize {
    let mut s = 1;
    while s * (s - 1) + 1 < q {
        s += 1;
    }
    s
}

pub fn search_haight_set(spec: &SearchSpec) -> Result<SearchOutcome> {
    spec.validate()?;
    Ok(match spec.mode {
        SearchMode::Exhaustive => exhaustive_search(spec),
        SearchMode::Randomized if spec.workers == 1 => {
            randomized_search(spec, spec.seed, spec.budget, &AtomicBool::new(false))
        }
        SearchMode::Randomized => parallel_randomized_search(spec),
    })
}

fn exhaustive_search(spec: &SearchSpec) -> SearchOutcome {
    let mut evaluations = 0u64;
    // Z_1 admits no solution: 0 is the only residue.
    for q in spec.q_min.max(2)..=spec.q_max {
        for size in min_complete_size(q)..q {
            let mut combo: Vec<usize> = (1..=size).collect();
            loop {
                if evaluations == spec.budget {
                    return SearchOutcome::NotFound { evaluations };
                }
                evaluations += 1;
                let set = ResidueSet::new(q, combo.iter().copied()).expect("in range");
                if set.is_scaling_canonical() {
                    if let Some(certificate) = HaightCertificate::certify(set, spec.kappa) {
                        return SearchOutcome::Found {
                            certificate,
                            evaluations,
                        };
                    }
                }
                if !next_combination(&mut combo, q - 1) {
                    break;
                }
            }
        }
    }
    SearchOutcome::NotFound { evaluations }
}

/// Advances a strictly increasing combination over `1..=max` in
/// lexicographic order.
fn next_combination(combo: &mut [usize], max: usize) -> bool {
    let k = combo.len();
    for i in (0..k).rev() {
        if combo[i] < max - (k - 1 - i) {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Steepest descent over single-element swaps with random restarts.
fn randomized_search(spec: &SearchSpec, seed: u64, budget: u64, stop: &AtomicBool) -> SearchOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut evaluations = 0u64;
    let q_lo = spec.q_min.max(2);
    if q_lo > spec.q_max {
        return SearchOutcome::NotFound { evaluations };
    }
    while evaluations < budget && !stop.load(Ordering::Relaxed) {
        let q = rng.gen_range(q_lo..=spec.q_max);
        let lo = min_complete_size(q);
        if lo > q - 1 {
            evaluations += 1;
            continue;
        }
        // a digraph of girth >= kappa on q vertices tends to have
        // out-degree below q / (kappa - 1)
        let hi = ((q - 1) / (spec.kappa - 1)).clamp(lo, q - 1);
        let size = rng.gen_range(lo..=hi);
        let mut members: Vec<usize> = sample(&mut rng, q - 1, size)
            .into_iter()
            .map(|i| i + 1)
            .collect();
        members.sort_unstable();
        let mut current = ResidueSet::new(q, members).expect("in range");
        let mut cost = current.haight_defect(spec.kappa);
        evaluations += 1;
        loop {
            if cost == 0 {
                if let Some(certificate) = HaightCertificate::certify(current, spec.kappa) {
                    return SearchOutcome::Found {
                        certificate,
                        evaluations,
                    };
                }
                break;
            }
            let mut best: Option<(usize, ResidueSet)> = None;
            'swaps: for out in current.iter() {
                for inn in 1..q {
                    if current.contains(inn) {
                        continue;
                    }
                    if evaluations >= budget {
                        break 'swaps;
                    }
                    evaluations += 1;
                    let mut cand = current.clone();
                    cand.members.remove(out);
                    cand.members.insert(inn);
                    let c = cand.haight_defect(spec.kappa);
                    if best.as_ref().is_none_or(|(b, _)| c < *b) {
                        best = Some((c, cand));
                    }
                }
            }
            match best {
                Some((c, cand)) if c < cost => {
                    cost = c;
                    current = cand;
                }
                _ => break,
            }
        }
    }
    SearchOutcome::NotFound { evaluations }
}

fn parallel_randomized_search(spec: &SearchSpec) -> SearchOutcome {
    let stop = AtomicBool::new(false);
    let workers = spec.workers as u64;
    let outcomes: Vec<SearchOutcome> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let stop = &stop;
                let share = spec.budget / workers + u64::from(w < spec.budget % workers);
                let seed = spec.seed.wrapping_add(w.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                scope.spawn(move || {
                    let out = randomized_search(spec, seed, share, stop);
                    if out.certificate().is_some() {
                        stop.store(true, Ordering::Relaxed);
                    }
                    out
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });
    let evaluations = outcomes.iter().map(SearchOutcome::evaluations).sum();
    match outcomes
        .into_iter()
        .find_map(|o| o.certificate().cloned())
    {
        Some(certificate) => SearchOutcome::Found {
            certificate,
            evaluations,
        },
        None => SearchOutcome::NotFound { evaluations },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rs(q: usize, m: &[usize]) -> ResidueSet {
        ResidueSet::new(q, m.iter().copied()).unwrap()
    }

    /// All sums of `s` members, by walking every ordered s-tuple.
    fn brute_sumset(q: usize, y: &[usize], s: usize) -> Vec<usize> {
        let mut out = vec![false; q];
        let mut idx = vec![0usize; s];
        if y.is_empty() {
            return vec![];
        }
        loop {
            out[idx.iter().map(|&i| y[i]).sum::<usize>() % q] = true;
            let mut pos = 0;
            loop {
                if pos == s {
                    return (0..q).filter(|&r| out[r]).collect();
                }
                idx[pos] += 1;
                if idx[pos] < y.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn difference_set_examples() {
        assert_eq!(rs(7, &[3]).difference_set().to_vec(), vec![0]);
        assert!(rs(5, &[]).difference_set().is_empty());
        assert_eq!(rs(7, &[1, 2, 4]).difference_set().to_vec(), (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn iterated_sumset_examples() {
        let y = rs(7, &[1, 2, 4]);
        assert_eq!(y.iterated_sumset(1).unwrap(), y);
        assert_eq!(y.iterated_sumset(2).unwrap().to_vec(), vec![1, 2, 3, 4, 5, 6]);
        assert!(y.iterated_sumset(3).unwrap().contains(0));
        assert!(matches!(y.iterated_sumset(0), Err(Error::ZeroSummands)));
    }

    #[test]
    fn completeness_examples() {
        assert!(rs(3, &[1, 2]).is_complete_difference_set());
        assert!(rs(7, &[1, 2, 4]).is_complete_difference_set());
        assert!(!rs(4, &[0, 2]).is_complete_difference_set());
    }

    #[test]
    fn haight_examples() {
        assert!(rs(7, &[1, 2, 4]).satisfies_haight(3));
        assert!(!rs(7, &[1, 2, 4]).satisfies_haight(4));
        assert!(rs(3, &[1, 2]).satisfies_haight(2));
        assert_eq!(rs(7, &[1, 2, 4]).haight_defect(4), 1);
    }

    #[test]
    fn shift_examples() {
        assert_eq!(rs(7, &[1, 2, 4]).shift(0).unwrap().to_vec(), vec![1, 2, 4]);
        assert_eq!(rs(7, &[1, 2, 4]).shift(1).unwrap().to_vec(), vec![0, 1, 3]);
        assert_eq!(rs(5, &[0]).shift(2).unwrap().to_vec(), vec![3]);
        assert!(rs(5, &[0]).shift(5).is_err());
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(ResidueSet::new(0, []), Err(Error::ZeroModulus)));
        assert!(matches!(
            ResidueSet::new(4, [4]),
            Err(Error::ResidueOutOfRange { value: 4, modulus: 4 })
        ));
        assert!(rs(5, &[1]).sumset(&rs(6, &[1])).is_err());
    }

    #[test]
    fn search_examples() {
        let out = search_haight_set(&SearchSpec::exhaustive(2, 3, 1_000_000)).unwrap();
        let cert = out.certificate().expect("kappa 2 at q 3");
        assert_eq!((cert.modulus(), cert.set().to_vec()), (3, vec![1, 2]));
        assert!(cert.verified());

        let out = search_haight_set(&SearchSpec::exhaustive(3, 7, 1_000_000)).unwrap();
        let cert = out.certificate().expect("kappa 3 at q 7");
        assert_eq!(cert.modulus(), 7);
        assert!(cert.reverify());

        let out = search_haight_set(&SearchSpec::exhaustive(3, 4, 1_000_000)).unwrap();
        assert!(out.certificate().is_none());
    }

    #[test]
    fn search_respects_budget() {
        let out = search_haight_set(&SearchSpec::exhaustive(3, 7, 3)).unwrap();
        assert!(matches!(out, SearchOutcome::NotFound { evaluations: 3 }));
    }

    #[test]
    fn invalid_search_specs() {
        let mut spec = SearchSpec::exhaustive(1, 7, 10);
        assert!(search_haight_set(&spec).is_err());
        spec.kappa = 3;
        spec.q_min = 9;
        assert!(search_haight_set(&spec).is_err());
        spec.q_min = 1;
        spec.budget = 0;
        assert!(search_haight_set(&spec).is_err());
    }

    #[test]
    fn randomized_search_is_seed_deterministic() {
        let spec = SearchSpec {
            kappa: 3,
            q_min: 7,
            q_max: 20,
            budget: 200_000,
            seed: 11,
            mode: SearchMode::Randomized,
            workers: 1,
        };
        let a = search_haight_set(&spec).unwrap();
        let b = search_haight_set(&spec).unwrap();
        let ca = a.certificate().expect("kappa 3 is easy");
        assert_eq!(Some(ca), b.certificate());
        assert_eq!(a.evaluations(), b.evaluations());
        assert!(ca.reverify());
    }

    #[test]
    fn parallel_randomized_search_certifies() {
        let spec = SearchSpec {
            kappa: 3,
            q_min: 7,
            q_max: 25,
            budget: 400_000,
            seed: 3,
            mode: SearchMode::Randomized,
            workers: 4,
        };
        let out = search_haight_set(&spec).unwrap();
        assert!(out.certificate().expect("found").reverify());
    }

    #[test]
    fn no_kappa3_set_below_seven() {
        // exhaustive over every subset of Z_q, without pruning
        for q in 1..7usize {
            for mask in 0u32..(1 << q) {
                let y = ResidueSet::new(q, (0..q).filter(|i| mask >> i & 1 == 1)).unwrap();
                assert!(!y.satisfies_haight(3), "{y:?}");
            }
        }
    }

    fn arb_set() -> impl Strategy<Value = ResidueSet> {
        (1usize..=20).prop_flat_map(|q| {
            proptest::collection::btree_set(0..q, 0..=q.min(8))
                .prop_map(move |m| ResidueSet::new(q, m).unwrap())
        })
    }

    proptest! {
        #[test]
        fn difference_set_symmetric(y in arb_set()) {
            let d = y.difference_set();
            let q = y.modulus();
            if !y.is_empty() {
                prop_assert!(d.contains(0));
            }
            for r in d.iter() {
                prop_assert!(d.contains((q - r) % q));
            }
        }

        #[test]
        fn shift_preserves_differences(y in arb_set(), t in 0usize..20) {
            let t = t % y.modulus();
            prop_assert_eq!(y.shift(t).unwrap().difference_set(), y.difference_set());
        }

        #[test]
        fn unit_scaling_preserves_haight(y in arb_set(), u in 1usize..20, kappa in 2usize..6) {
            let q = y.modulus();
            prop_assume!(u.gcd(&q) == 1);
            prop_assert_eq!(y.scale(u).satisfies_haight(kappa), y.satisfies_haight(kappa));
        }

        #[test]
        fn haight_monotone_in_kappa(y in arb_set(), kappa in 2usize..7) {
            if y.satisfies_haight(kappa) {
                for k2 in 2..=kappa {
                    prop_assert!(y.satisfies_haight(k2));
                }
            }
        }

        #[test]
        fn sumset_matches_tuple_enumeration(
            q in 1usize..=20,
            raw in proptest::collection::btree_set(0usize..20, 0..=5),
            s in 1usize..=4,
        ) {
            let members: Vec<usize> = raw.into_iter().map(|x| x % q).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
            let y = ResidueSet::new(q, members.iter().copied()).unwrap();
            prop_assert_eq!(y.iterated_sumset(s).unwrap().to_vec(), brute_sumset(q, &members, s));
        }
    }
}
