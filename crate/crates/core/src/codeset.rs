//! Sets of words: an explicit sorted list for small lengths, or a bit array
//! over the even-weight words for the 2^26-word codes of length 32.

use rayon::iter::Either;
use rayon::prelude::*;

use crate::bits::{BitArray, BlockOnes};
use crate::error::{Error, Result};
use crate::word::{low_mask, Word};

#[derive(Clone, Debug)]
enum Repr {
    Sorted(Vec<u64>),
    /// Bit `i` stands for the even word `(i << 1) | parity(i)`.
    Even {
        bits: BitArray,
        count: u64,
    },
}

#[derive(Clone, Debug)]
pub struct CodeSet {
    len: u32,
    repr: Repr,
}

/// Even word whose first `n - 1` coordinates are `index`.
#[inline]
pub(crate) fn even_from_index(index: u64) -> u64 {
    (index << 1) | (index.count_ones() as u64 & 1)
}

/// Odd word whose first `n - 1` coordinates are `index`.
#[cfg(test)]
#[inline]
pub(crate) fn odd_from_index(index: u64) -> u64 {
    (index << 1) | (!index.count_ones() as u64 & 1)
}

impl CodeSet {
    /// Collects raw integer-encoded words, sorting and removing duplicates.
    pub fn from_raw_words(len: u32, words: impl IntoIterator<Item = u64>) -> Self {
        let mut v: Vec<u64> = words.into_iter().collect();
        debug_assert!(v.iter().all(|w| w & !low_mask(len) == 0));
        v.sort_unstable();
        v.dedup();
        CodeSet {
            len,
            repr: Repr::Sorted(v),
        }
    }

    pub fn from_words(len: u32, words: &[Word]) -> Result<Self> {
        for w in words {
            if w.len() != len {
                return Err(Error::LengthMismatch {
                    left: w.len(),
                    right: len,
                });
            }
        }
        Ok(Self::from_raw_words(len, words.iter().map(Word::bits)))
    }

    /// Wraps a bit array indexed by even words with the last coordinate dropped.
    pub(crate) fn from_even_bits(len: u32, bits: BitArray) -> Self {
        debug_assert_eq!(bits.len(), 1u64 << (len - 1));
        let count = bits.count_ones();
        CodeSet {
            len,
            repr: Repr::Even { bits, count },
        }
    }

    /// Word length.
    pub fn length(&self) -> u32 {
        self.len
    }

    pub fn cardinality(&self) -> u64 {
        match &self.repr {
            Repr::Sorted(v) => v.len() as u64,
            Repr::Even { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality() == 0
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Even { .. })
    }

    #[inline]
    pub fn contains(&self, w: u64) -> bool {
        match &self.repr {
            Repr::Sorted(v) => v.binary_search(&w).is_ok(),
            Repr::Even { bits, .. } => w.count_ones().is_multiple_of(2) && bits.get(w >> 1),
        }
    }

    pub fn contains_word(&self, w: &Word) -> bool {
        w.len() == self.len && self.contains(w.bits())
    }

    /// Words in ascending order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = u64> + '_> {
        match &self.repr {
            Repr::Sorted(v) => Box::new(v.iter().copied()),
            Repr::Even { bits, .. } => Box::new(bits.iter_ones().map(even_from_index)),
        }
    }

    pub fn par_iter(&self) -> impl ParallelIterator<Item = u64> + '_ {
        match &self.repr {
            Repr::Sorted(v) => Either::Left(v.par_iter().copied()),
            Repr::Even { bits, .. } => Either::Right(
                bits.blocks()
                    .par_iter()
                    .enumerate()
                    .flat_map_iter(|(bi, &b)| {
                        BlockOnes(b).map(move |o| even_from_index(bi as u64 * 64 + o))
                    }),
            ),
        }
    }

    pub fn words(&self) -> Vec<Word> {
        self.iter().map(|w| Word::from_raw(self.len, w)).collect()
    }

    pub fn as_slice(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Sorted(v) => Some(v),
            Repr::Even { .. } => None,
        }
    }

    pub fn min(&self) -> Option<u64> {
        self.iter().next()
    }

    /// S + v, as an explicit list.
    pub fn translate(&self, v: u64) -> CodeSet {
        CodeSet::from_raw_words(self.len, self.iter().map(|w| w ^ v))
    }

    pub fn all_even(&self) -> bool {
        match &self.repr {
            Repr::Sorted(v) => v.iter().all(|w| w.count_ones() % 2 == 0),
            Repr::Even { .. } => true,
        }
    }

    /// First odd-weight member, if any.
    pub fn first_odd(&self) -> Option<u64> {
        match &self.repr {
            Repr::Sorted(v) => v.iter().copied().find(|w| w.count_ones() % 2 == 1),
            Repr::Even { .. } => None,
        }
    }

    /// Set equality, independent of representation.
    pub fn same_set(&self, other: &CodeSet) -> bool {
        if self.len != other.len || self.cardinality() != other.cardinality() {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Sorted(a), Repr::Sorted(b)) => a == b,
            (Repr::Even { bits: a, .. }, Repr::Even { bits: b, .. }) => a == b,
            _ => self.iter().zip(other.iter()).all(|(a, b)| a == b),
        }
    }

    /// Removes a word; returns whether it was present. Converts to a list.
    pub fn remove(&mut self, w: u64) -> bool {
        let mut v: Vec<u64> = self.iter().collect();
        let hit = match v.binary_search(&w) {
            Ok(pos) => {
                v.remove(pos);
                true
            }
            Err(_) => false,
        };
        self.repr = Repr::Sorted(v);
        hit
    }

    /// Adds a word; returns whether it was new. Converts to a list.
    pub fn insert(&mut self, w: u64) -> bool {
        let mut v: Vec<u64> = self.iter().collect();
        let new = match v.binary_search(&w) {
            Ok(_) => false,
            Err(pos) => {
                v.insert(pos, w);
                true
            }
        };
        self.repr = Repr::Sorted(v);
        new
    }
}

impl PartialEq for CodeSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_set(other)
    }
}

impl Eq for CodeSet {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_deduplicated() {
        let s = CodeSet::from_raw_words(8, [5, 3, 5, 0]);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3, 5]);
        assert!(s.contains(3));
        assert!(!s.contains(4));
    }

    #[test]
    fn even_index_maps() {
        for i in 0..1024u64 {
            let e = even_from_index(i);
            let o = odd_from_index(i);
            assert_eq!(e.count_ones() % 2, 0);
            assert_eq!(o.count_ones() % 2, 1);
            assert_eq!(e >> 1, i);
            assert_eq!(o >> 1, i);
        }
    }

    #[test]
    fn dense_and_sorted_agree() {
        let words: Vec<u64> = (0u64..256)
            .filter(|w| w.count_ones() % 2 == 0 && w % 3 == 0)
            .collect();
        let list = CodeSet::from_raw_words(8, words.iter().copied());
        let mut bits = BitArray::new(128);
        for &w in &words {
            bits.set(w >> 1);
        }
        let dense = CodeSet::from_even_bits(8, bits);
        assert_eq!(list, dense);
        assert_eq!(dense.iter().collect::<Vec<_>>(), words);
        let mut par: Vec<u64> = dense.par_iter().collect();
        par.sort_unstable();
        assert_eq!(par, words);
        assert!(dense.contains(words[3]));
        assert!(!dense.contains(1));
    }

    #[test]
    fn insert_remove() {
        let mut s = CodeSet::from_raw_words(4, [0, 15]);
        assert!(s.insert(6));
        assert!(!s.insert(6));
        assert!(s.remove(0));
        assert!(!s.remove(0));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![6, 15]);
    }
}
