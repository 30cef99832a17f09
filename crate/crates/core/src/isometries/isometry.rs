use std::fmt;

use crate::codeset::CodeSet;
use crate::error::{Error, Result};
use crate::word::{low_mask, Word};

/// An isometry of F^n in normal form `x ↦ shift + perm(x)`, where `perm`
/// moves the bit at coordinate `i` to coordinate `perm[i]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Isometry {
    n: u32,
    perm: Vec<u8>,
    shift: u64,
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Isometry {{ perm: {:?}, shift: {} }}",
            self.perm,
            Word::from_raw(self.n, self.shift)
        )
    }
}

impl Isometry {
    pub fn identity(n: u32) -> Self {
        Isometry {
            n,
            perm: (0..n as u8).collect(),
            shift: 0,
        }
    }

    pub fn translation(shift: &Word) -> Self {
        Isometry {
            n: shift.len(),
            perm: (0..shift.len() as u8).collect(),
            shift: shift.bits(),
        }
    }

    pub fn new(perm: Vec<u32>, shift: &Word) -> Result<Self> {
        let n = shift.len();
        if perm.len() != n as usize {
            return Err(Error::LengthMismatch {
                left: perm.len() as u32,
                right: n,
            });
        }
        let mut seen = 0u64;
        for &p in &perm {
            if p >= n || seen >> p & 1 == 1 {
                return Err(Error::MalformedRep(format!(
                    "{perm:?} is not a permutation of 0..{n}"
                )));
            }
            seen |= 1 << p;
        }
        Ok(Isometry {
            n,
            perm: perm.into_iter().map(|p| p as u8).collect(),
            shift: shift.bits(),
        })
    }

    pub(crate) fn from_raw(n: u32, perm: Vec<u8>, shift: u64) -> Self {
        debug_assert_eq!(perm.len(), n as usize);
        debug_assert_eq!(shift & !low_mask(n), 0);
        Isometry { n, perm, shift }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn perm(&self) -> Vec<u32> {
        self.perm.iter().map(|&p| p as u32).collect()
    }

    pub(crate) fn perm_raw(&self) -> &[u8] {
        &self.perm
    }

    /// Image of coordinate `i`.
    #[inline]
    pub fn image(&self, i: u32) -> u32 {
        self.perm[i as usize] as u32
    }

    pub fn shift(&self) -> Word {
        Word::from_raw(self.n, self.shift)
    }

    pub(crate) fn shift_raw(&self) -> u64 {
        self.shift
    }

    pub fn is_translation(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.is_translation()
    }

    /// Applies only the coordinate permutation.
    #[inline]
    pub fn permute(&self, x: u64) -> u64 {
        let n = self.n;
        let mut out = 0u64;
        let mut rest = x;
        while rest != 0 {
            let b = rest.trailing_zeros();
            rest &= rest - 1;
            let k = n - 1 - b;
            out |= 1u64 << (n - 1 - self.perm[k as usize] as u32);
        }
        out
    }

    /// Preimage under the coordinate permutation.
    pub fn unpermute(&self, y: u64) -> u64 {
        let n = self.n;
        let mut out = 0u64;
        for (k, &p) in self.perm.iter().enumerate() {
            if y >> (n - 1 - p as u32) & 1 == 1 {
                out |= 1u64 << (n - 1 - k as u32);
            }
        }
        out
    }

    #[inline]
    pub fn apply_raw(&self, x: u64) -> u64 {
        self.shift ^ self.permute(x)
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.len() != self.n {
            return Err(Error::LengthMismatch {
                left: w.len(),
                right: self.n,
            });
        }
        Ok(Word::from_raw(self.n, self.apply_raw(w.bits())))
    }

    pub fn apply_set(&self, set: &CodeSet) -> Result<CodeSet> {
        if set.length() != self.n {
            return Err(Error::LengthMismatch {
                left: set.length(),
                right: self.n,
            });
        }
        let table = PermTable::new(self);
        Ok(CodeSet::from_raw_words(
            self.n,
            set.iter().map(|x| table.apply(x)),
        ))
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Isometry) -> Isometry {
        Isometry {
            n: self.n,
            perm: other.perm.iter().map(|&p| self.perm[p as usize]).collect(),
            shift: self.shift ^ self.permute(other.shift),
        }
    }

    pub fn invert(&self) -> Isometry {
        let mut inv = vec![0u8; self.n as usize];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p as usize] = i as u8;
        }
        let shift = self.unpermute(self.shift);
        Isometry {
            n: self.n,
            perm: inv,
            shift,
        }
    }
}

/// Byte-sliced lookup tables for fast bulk application.
pub(crate) struct PermTable {
    shift: u64,
    tables: Vec<[u64; 256]>,
}

impl PermTable {
    pub(crate) fn new(g: &Isometry) -> Self {
        let n = g.n;
        let chunks = n.div_ceil(8);
        let mut tables = vec![[0u64; 256]; chunks as usize];
        for (c, table) in tables.iter_mut().enumerate() {
            for byte in 0..256u64 {
                let x = (byte << (8 * c)) & low_mask(n);
                table[byte as usize] = g.permute(x);
            }
        }
        PermTable {
            shift: g.shift,
            tables,
        }
    }

    #[inline]
    pub(crate) fn apply(&self, x: u64) -> u64 {
        let mut out = self.shift;
        for (c, table) in self.tables.iter().enumerate() {
            out ^= table[(x >> (8 * c) & 0xff) as usize];
        }
        out
    }
}
