use std::sync::atomic::{AtomicU64, Ordering};

/// Fixed-size bit array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitArray {
    len: u64,
    blocks: Vec<u64>,
}

impl BitArray {
    pub fn new(len: u64) -> Self {
        BitArray {
            len,
            blocks: vec![0; len.div_ceil(64) as usize],
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: u64) -> bool {
        self.blocks[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Sets bit `i`, returning its previous value.
    #[inline]
    pub fn set(&mut self, i: u64) -> bool {
        let block = &mut self.blocks[(i / 64) as usize];
        let mask = 1u64 << (i % 64);
        let prev = *block & mask != 0;
        *block |= mask;
        prev
    }

    pub fn count_ones(&self) -> u64 {
        self.blocks.iter().map(|b| b.count_ones() as u64).sum()
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = u64> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &b)| {
            let base = bi as u64 * 64;
            BlockOnes(b).map(move |o| base + o)
        })
    }
}

/// Set-bit positions of one block, ascending.
pub(crate) struct BlockOnes(pub(crate) u64);

impl Iterator for BlockOnes {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(tz as u64)
    }
}

/// Bit array that can be marked concurrently.
pub struct AtomicBitArray {
    len: u64,
    blocks: Vec<AtomicU64>,
}

impl AtomicBitArray {
    pub fn new(len: u64) -> Self {
        let n = len.div_ceil(64) as usize;
        AtomicBitArray {
            len,
            blocks: std::iter::repeat_with(|| AtomicU64::new(0))
                .take(n)
                .collect(),
        }
    }

    /// Sets bit `i`, returning its previous value.
    #[inline]
    pub fn set(&self, i: u64) -> bool {
        let mask = 1u64 << (i % 64);
        self.blocks[(i / 64) as usize].fetch_or(mask, Ordering::Relaxed) & mask != 0
    }

    pub fn into_bits(self) -> BitArray {
        BitArray {
            len: self.len,
            blocks: self.blocks.into_iter().map(AtomicU64::into_inner).collect(),
        }
    }
}
