//! Fixed-width bit vectors used for residue sets and adjacency rows.

use std::fmt;

const WORD: usize = 64;

/// A fixed-length set of indices `0..len` packed into `u64` words.
///
/// Bits at positions `>= len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = BitSet {
            len,
            words: vec![!0; len.div_ceil(WORD)],
        };
        s.trim();
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut s = BitSet::new(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    /// Panics if `i >= len`.
    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// ORs the cyclic rotation of `self` by `shift` into `out`: bit `i` of
    /// `self` lands on bit `(i + shift) mod len` of `out`.
    pub fn rotate_or_into(&self, shift: usize, out: &mut BitSet) {
        debug_assert_eq!(self.len, out.len);
        if self.len == 0 {
            return;
        }
        let shift = shift % self.len;
        // low part: bits [0, len - shift) move up by `shift`
        self.shl_or_into(shift, out);
        // wrapped part: bits [len - shift, len) move down by `len - shift`
        if shift != 0 {
            self.shr_or_into(self.len - shift, out);
        }
        out.trim();
    }

    fn shl_or_into(&self, shift: usize, out: &mut BitSet) {
        let (wshift, bshift) = (shift / WORD, shift % WORD);
        let n = self.words.len();
        for k in (wshift..n).rev() {
            let src = k - wshift;
            let mut w = self.words[src] << bshift;
            if bshift != 0 && src > 0 {
                w |= self.words[src - 1] >> (WORD - bshift);
            }
            out.words[k] |= w;
        }
    }

    fn shr_or_into(&self, shift: usize, out: &mut BitSet) {
        let (wshift, bshift) = (shift / WORD, shift % WORD);
        let n = self.words.len();
        for k in 0..n.saturating_sub(wshift) {
            let src = k + wshift;
            let mut w = self.words[src] >> bshift;
            if bshift != 0 && src + 1 < n {
                w |= self.words[src + 1] << (WORD - bshift);
            }
            out.words[k] |= w;
        }
    }

    fn trim(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Ones<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}
