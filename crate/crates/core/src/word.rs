//! Binary words of length at most 64 and the level-`t` array view of
//! words whose length is a power of two.
//!
//! Coordinate 0 is the leftmost character of the serialized form and the
//! most significant bit of the integer encoding, so that ascending integer
//! order is ascending order of the binary strings.

use std::fmt;
use std::str::FromStr;

use crate::codeset::CodeSet;
use crate::error::{Error, Result};

/// Bit mask with the `len` low bits set.
pub(crate) fn low_mask(len: u32) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// A vector over GF(2) with an explicit length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: u32,
    bits: u64,
}

impl Word {
    /// Builds a word from its integer encoding; bits above `len` are rejected.
    pub fn new(len: u32, bits: u64) -> Result<Self> {
        if len > 64 {
            return Err(Error::WordTooLong(len));
        }
        if bits & !low_mask(len) != 0 {
            return Err(Error::MalformedRep(format!(
                "integer {bits:#x} does not fit in {len} bits"
            )));
        }
        Ok(Word { len, bits })
    }

    pub(crate) fn from_raw(len: u32, bits: u64) -> Self {
        debug_assert!(len <= 64 && bits & !low_mask(len) == 0);
        Word { len, bits }
    }

    pub fn zero(len: u32) -> Result<Self> {
        Word::new(len, 0)
    }

    /// The word whose 1-coordinates are exactly `support`.
    pub fn from_support(len: u32, support: &[u32]) -> Result<Self> {
        if len > 64 {
            return Err(Error::WordTooLong(len));
        }
        let mut bits = 0;
        for &k in support {
            if k >= len {
                return Err(Error::MalformedRep(format!(
                    "coordinate {k} out of range for length {len}"
                )));
            }
            bits |= 1u64 << (len - 1 - k);
        }
        Ok(Word { len, bits })
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn bit(&self, k: u32) -> bool {
        k < self.len && self.bits >> (self.len - 1 - k) & 1 == 1
    }

    pub fn support(&self) -> Vec<u32> {
        (0..self.len).filter(|&k| self.bit(k)).collect()
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn parity(&self) -> Parity {
        if self.weight().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn same_len(&self, other: &Word) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Word) -> Result<Word> {
        self.same_len(other)?;
        Ok(Word {
            len: self.len,
            bits: self.bits ^ other.bits,
        })
    }

    pub fn distance(&self, other: &Word) -> Result<u32> {
        self.same_len(other)?;
        Ok((self.bits ^ other.bits).count_ones())
    }

    /// All words at distance exactly 1.
    pub fn neighbors(&self) -> impl Iterator<Item = Word> + '_ {
        (0..self.len).map(move |k| Word {
            len: self.len,
            bits: self.bits ^ (1u64 << k),
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len {
            f.write_str(if self.bit(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let len = s.len() as u32;
        if len > 64 {
            return Err(Error::WordTooLong(len));
        }
        let mut bits = 0u64;
        for (k, c) in s.chars().enumerate() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => {
                    return Err(Error::parse(
                        1,
                        k + 1,
                        format!("unexpected character {c:?}"),
                    ))
                }
            }
        }
        Ok(Word { len, bits })
    }
}

/// Ω(S): every word at distance exactly 1 from some element of `set`.
pub fn neighborhood(set: &CodeSet) -> CodeSet {
    let len = set.length();
    CodeSet::from_raw_words(
        len,
        set.iter()
            .flat_map(|w| (0..len).map(move |k| w ^ (1u64 << k))),
    )
}

/// The ambient space F^n with n = 2^m, carrying the array views.
///
/// At level `t` a word is a `2^t x 2^(m-t)` array: coordinate `k` sits in
/// row `k / 2^(m-t)` and column `k % 2^(m-t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Space {
    m: u32,
}

impl Space {
    pub fn new(n: u32) -> Result<Self> {
        if !n.is_power_of_two() || !(4..=64).contains(&n) {
            return Err(Error::InvalidLength(n));
        }
        Ok(Space {
            m: n.trailing_zeros(),
        })
    }

    pub fn n(&self) -> u32 {
        1 << self.m
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn full_mask(&self) -> u64 {
        low_mask(self.n())
    }

    /// Row length (number of columns) at level `t`.
    pub fn width(&self, t: u32) -> u32 {
        1 << (self.m - t)
    }

    pub fn rows(&self, t: u32) -> u32 {
        1 << t
    }

    pub(crate) fn check_level(&self, t: u32, max: u32) -> Result<()> {
        if t == 0 || t > max {
            return Err(Error::LevelOutOfRange { t, max });
        }
        Ok(())
    }

    /// Integer mask of coordinate `k`.
    pub fn coord_mask(&self, k: u32) -> u64 {
        1u64 << (self.n() - 1 - k)
    }

    pub fn coord(&self, t: u32, row: u32, col: u32) -> u32 {
        row * self.width(t) + col
    }

    pub fn row_col(&self, t: u32, k: u32) -> (u32, u32) {
        let w = self.width(t);
        (k / w, k % w)
    }

    /// Row `i` of the level-`t` view, as a word of length `2^(m-t)`.
    pub fn row(&self, x: u64, t: u32, i: u32) -> u64 {
        let w = self.width(t);
        (x >> (self.n() - (i + 1) * w)) & low_mask(w)
    }

    /// Places `row` (a `2^(m-t)`-bit value) at row `i` of the level-`t` view.
    pub fn place_row(&self, row: u64, t: u32, i: u32) -> u64 {
        let w = self.width(t);
        row << (self.n() - (i + 1) * w)
    }

    /// p^t on raw bits: the XOR of the `2^t` rows, computed by halving folds.
    pub fn parity_check_raw(&self, x: u64, t: u32) -> u64 {
        let mut acc = x;
        let mut len = self.n();
        for _ in 0..t {
            len /= 2;
            acc = (acc >> len) ^ (acc & low_mask(len));
        }
        acc
    }

    pub fn word(&self, bits: u64) -> Word {
        Word::from_raw(self.n(), bits & self.full_mask())
    }

    pub(crate) fn check_word(&self, w: &Word) -> Result<()> {
        if w.len() != self.n() {
            return Err(Error::LengthMismatch {
                left: w.len(),
                right: self.n(),
            });
        }
        Ok(())
    }

    /// The generalized parity check p^t(w), 1 <= t <= m.
    pub fn parity_check(&self, w: &Word, t: u32) -> Result<Word> {
        self.check_word(w)?;
        self.check_level(t, self.m)?;
        Ok(Word::from_raw(
            self.width(t),
            self.parity_check_raw(w.bits(), t),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s16() -> Space {
        Space::new(16).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(Word::zero(16).unwrap().weight(), 0);
        assert_eq!(Word::from_support(16, &[0, 8]).unwrap().weight(), 2);
        assert_eq!(Word::new(16, 0xffff).unwrap().weight(), 16);
    }

    #[test]
    fn distances() {
        let z = Word::zero(16).unwrap();
        let ones = Word::new(16, 0xffff).unwrap();
        assert_eq!(z.distance(&ones).unwrap(), 16);
        assert_eq!(ones.distance(&ones).unwrap(), 0);
        let a = Word::from_support(16, &[0]).unwrap();
        let b = Word::from_support(16, &[1]).unwrap();
        assert_eq!(a.distance(&b).unwrap(), 2);
        assert!(matches!(
            a.distance(&Word::zero(8).unwrap()),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn addition() {
        let w = Word::from_support(16, &[0, 8]).unwrap();
        let u = Word::from_support(16, &[8, 9]).unwrap();
        assert_eq!(w.add(&Word::zero(16).unwrap()).unwrap(), w);
        assert_eq!(w.add(&w).unwrap(), Word::zero(16).unwrap());
        assert_eq!(w.add(&u).unwrap().support(), vec![0, 9]);
        assert!(w.add(&Word::zero(15).unwrap()).is_err());
    }

    #[test]
    fn parities() {
        assert_eq!(Word::zero(16).unwrap().parity(), Parity::Even);
        assert_eq!(Word::from_support(16, &[3]).unwrap().parity(), Parity::Odd);
        assert_eq!(
            Word::from_support(16, &[3, 5]).unwrap().parity(),
            Parity::Even
        );
    }

    #[test]
    fn string_round_trip_is_coordinate_ordered() {
        let w = Word::from_support(16, &[0, 15]).unwrap();
        assert_eq!(w.to_string(), "1000000000000001");
        assert_eq!(w.bits(), 0x8001);
        assert_eq!("1000000000000001".parse::<Word>().unwrap(), w);
        assert!("10x1".parse::<Word>().is_err());
    }

    #[test]
    fn neighborhood_of_zero() {
        let set = CodeSet::from_raw_words(16, [0u64]);
        let nb = neighborhood(&set);
        assert_eq!(nb.cardinality(), 16);
        assert!(nb.iter().all(|w| w.count_ones() == 1));
    }

    #[test]
    fn parity_check_examples() {
        let s = s16();
        let e0 = Word::from_support(16, &[0]).unwrap();
        assert_eq!(s.parity_check(&e0, 2).unwrap().to_string(), "1000");
        let w = Word::from_support(16, &[0, 8]).unwrap();
        assert_eq!(s.parity_check(&w, 1).unwrap(), Word::zero(8).unwrap());
        assert!(s.parity_check(&w, 5).is_err());
        assert!(s.parity_check(&w, 0).is_err());
        // level m folds everything into a single parity bit
        assert_eq!(s.parity_check(&w, 4).unwrap().len(), 1);
    }

    #[test]
    fn parity_check_matches_row_sum() {
        let s = s16();
        for x in (0u64..1 << 16).step_by(97) {
            for t in 1..=4 {
                let folded = (0..s.rows(t)).fold(0, |acc, i| acc ^ s.row(x, t, i));
                assert_eq!(folded, s.parity_check_raw(x, t));
            }
        }
    }

    #[test]
    fn array_view_round_trip() {
        for n in [4u32, 16, 32, 64] {
            let s = Space::new(n).unwrap();
            for t in 1..s.m() {
                for k in 0..n {
                    let (i, j) = s.row_col(t, k);
                    assert!(i < s.rows(t) && j < s.width(t));
                    assert_eq!(s.coord(t, i, j), k);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(Space::new(12).is_err());
        assert!(Space::new(2).is_err());
        assert!(Space::new(128).is_err());
        assert!(Word::new(8, 0x100).is_err());
    }

    proptest! {
        #[test]
        fn parity_check_is_linear(u in 0u64..1 << 16, v in 0u64..1 << 16, t in 1u32..=4) {
            let s = s16();
            prop_assert_eq!(
                s.parity_check_raw(u ^ v, t),
                s.parity_check_raw(u, t) ^ s.parity_check_raw(v, t)
            );
        }

        #[test]
        fn parity_check_preserves_weight_parity(x in 0u64..1 << 16, t in 1u32..=4) {
            let s = s16();
            prop_assert_eq!(s.parity_check_raw(x, t).count_ones() % 2, x.count_ones() % 2);
        }

        #[test]
        fn neighborhood_is_monotone_and_flips_parity(
            small in proptest::collection::vec(0u64..1 << 16, 1..6),
            extra in proptest::collection::vec(0u64..1 << 16, 0..6),
        ) {
            let evens: Vec<u64> = small.iter().map(|&w| if w.count_ones() % 2 == 1 { w ^ 1 } else { w }).collect();
            let a = CodeSet::from_raw_words(16, evens.iter().copied());
            let b = CodeSet::from_raw_words(16, evens.iter().chain(extra.iter()).copied());
            let na = neighborhood(&a);
            let nb = neighborhood(&b);
            prop_assert!(na.iter().all(|w| nb.contains(w)));
            prop_assert!(na.iter().all(|w| w.count_ones() % 2 == 1));
        }
    }
}
