//! Linear algebra over GF(2) on words packed into `u64`.

use crate::codeset::CodeSet;
use crate::error::{Error, Result};
use crate::word::Word;

/// Echelon basis keyed by pivot (the highest set bit of each vector).
#[derive(Clone, Debug)]
pub struct Basis {
    rows: [u64; 64],
    dim: u32,
}

impl Default for Basis {
    fn default() -> Self {
        Self::new()
    }
}

impl Basis {
    pub fn new() -> Self {
        Basis {
            rows: [0; 64],
            dim: 0,
        }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Reduces `x` against the basis; zero iff `x` is in the span.
    #[inline]
    pub fn reduce(&self, mut x: u64) -> u64 {
        let mut pending = x;
        while pending != 0 {
            let p = 63 - pending.leading_zeros();
            let r = self.rows[p as usize];
            if r != 0 {
                x ^= r;
            }
            pending = x & ((1u64 << p) - 1);
        }
        x
    }

    pub fn contains(&self, x: u64) -> bool {
        self.reduce(x) == 0
    }

    /// Adds `x`; returns whether it was independent.
    pub fn insert(&mut self, x: u64) -> bool {
        let r = self.reduce(x);
        if r == 0 {
            return false;
        }
        let p = 63 - r.leading_zeros();
        self.rows[p as usize] = r;
        self.dim += 1;
        true
    }

    /// Reduced row-echelon form, pivots descending.
    pub fn rref(&self) -> Vec<u64> {
        let mut rows = self.rows;
        for p in 0..64 {
            let r = rows[p];
            if r == 0 {
                continue;
            }
            for row in rows[p + 1..].iter_mut() {
                if *row >> p & 1 == 1 {
                    *row ^= r;
                }
            }
        }
        rows.iter().rev().copied().filter(|&r| r != 0).collect()
    }
}

/// An affine subspace `offset + span(basis)` of F^len.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    len: u32,
    offset: u64,
    basis: Vec<u64>,
}

impl AffineSubspace {
    /// The smallest affine subspace containing every point.
    pub fn span_of(len: u32, points: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut iter = points.into_iter();
        let base = iter.next().ok_or(Error::EmptySet)?;
        let mut basis = Basis::new();
        for p in iter {
            basis.insert(p ^ base);
        }
        Ok(Self::from_basis(len, base, &basis))
    }

    pub(crate) fn from_basis(len: u32, point: u64, basis: &Basis) -> Self {
        AffineSubspace {
            len,
            offset: basis.reduce(point),
            basis: basis.rref(),
        }
    }

    pub fn linear(len: u32, vectors: impl IntoIterator<Item = u64>) -> Self {
        let mut basis = Basis::new();
        for v in vectors {
            basis.insert(v);
        }
        Self::from_basis(len, 0, &basis)
    }

    pub fn length(&self) -> u32 {
        self.len
    }

    /// The minimum element.
    pub fn offset(&self) -> Word {
        Word::from_raw(self.len, self.offset)
    }

    pub fn basis(&self) -> Vec<Word> {
        self.basis
            .iter()
            .map(|&b| Word::from_raw(self.len, b))
            .collect()
    }

    pub(crate) fn raw_basis(&self) -> &[u64] {
        &self.basis
    }

    pub(crate) fn raw_offset(&self) -> u64 {
        self.offset
    }

    pub fn dimension(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn is_linear(&self) -> bool {
        self.offset == 0
    }

    pub fn contains(&self, w: u64) -> bool {
        let mut x = w ^ self.offset;
        for &b in &self.basis {
            let p = 63 - b.leading_zeros();
            if x >> p & 1 == 1 {
                x ^= b;
            }
        }
        x == 0
    }

    pub fn translate(&self, v: u64) -> AffineSubspace {
        let mut basis = Basis::new();
        for &b in &self.basis {
            basis.insert(b);
        }
        Self::from_basis(self.len, self.offset ^ v, &basis)
    }

    /// Materializes every element (ascending); only sensible for small dimension.
    pub fn elements(&self) -> CodeSet {
        let d = self.basis.len();
        CodeSet::from_raw_words(
            self.len,
            (0u64..1 << d).map(|mask| {
                self.basis
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(self.offset, |acc, (_, &b)| acc ^ b)
            }),
        )
    }
}

/// Affine span of a set of words.
pub fn affine_span(set: &CodeSet) -> Result<AffineSubspace> {
    AffineSubspace::span_of(set.length(), set.iter())
}
