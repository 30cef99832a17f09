//! Perfectness verification, rank, kernel and distinctness of codes.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::bits::AtomicBitArray;
use crate::codeset::CodeSet;
use crate::error::{Error, Result};
use crate::gf2::{AffineSubspace, Basis};

/// Codewords used to reject kernel candidates before a full check.
const KERNEL_PROBES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeReport {
    pub n: u32,
    pub cardinality: u64,
    pub expected_cardinality: u64,
    pub min_distance_at_least_4: bool,
    pub omega_covers_odd: bool,
    pub omega_disjoint: bool,
    /// Odd words not adjacent to any codeword.
    pub uncovered: u64,
    /// Odd words adjacent to more than one codeword, counted with multiplicity.
    pub collisions: u64,
    pub rank: u32,
    pub rank_deficiency: i64,
    pub kernel_dimension: u32,
}

impl CodeReport {
    pub fn is_extended_perfect(&self) -> bool {
        self.cardinality == self.expected_cardinality
            && self.omega_disjoint
            && self.omega_covers_odd
    }

    /// Names of the failed conditions, in report order.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.cardinality != self.expected_cardinality {
            out.push("cardinality");
        }
        if !self.omega_disjoint {
            out.push("omega_disjoint");
        }
        if !self.omega_covers_odd {
            out.push("omega_covers_odd");
        }
        out
    }
}

impl fmt::Display for CodeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "cardinality={}", self.cardinality)?;
        writeln!(f, "expected_cardinality={}", self.expected_cardinality)?;
        writeln!(
            f,
            "min_distance_at_least_4={}",
            self.min_distance_at_least_4
        )?;
        writeln!(f, "omega_covers_odd={}", self.omega_covers_odd)?;
        writeln!(f, "omega_disjoint={}", self.omega_disjoint)?;
        writeln!(f, "uncovered={}", self.uncovered)?;
        writeln!(f, "collisions={}", self.collisions)?;
        writeln!(f, "rank={}", self.rank)?;
        writeln!(f, "rank_deficiency={}", self.rank_deficiency)?;
        writeln!(f, "kernel_dimension={}", self.kernel_dimension)?;
        writeln!(f, "extended_perfect={}", self.is_extended_perfect())
    }
}

/// Neighborhood bookkeeping over the odd words of length n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coverage {
    pub uncovered: u64,
    pub collisions: u64,
}

fn check_length(n: u32) -> Result<u32> {
    if !n.is_power_of_two() || !(4..=32).contains(&n) {
        return Err(Error::InvalidLength(n));
    }
    Ok(n.trailing_zeros())
}

/// Marks every odd word by the codewords at distance 1. Odd words are
/// indexed by their first n - 1 coordinates.
pub fn coverage(code: &CodeSet) -> Result<Coverage> {
    let n = code.length();
    check_length(n)?;
    if let Some(x) = code.first_odd() {
        return Err(Error::OddWord(crate::word::Word::new(n, x)?.to_string()));
    }
    let marks = AtomicBitArray::new(1u64 << (n - 1));
    let collisions = AtomicU64::new(0);
    code.par_iter().for_each(|x| {
        let mut local = 0;
        for k in 0..n {
            local += marks.set((x ^ (1u64 << k)) >> 1) as u64;
        }
        if local > 0 {
            collisions.fetch_add(local, Ordering::Relaxed);
        }
    });
    let covered = marks.into_bits().count_ones();
    Ok(Coverage {
        uncovered: (1u64 << (n - 1)) - covered,
        collisions: collisions.into_inner(),
    })
}

/// Cardinality 2^{n - log n - 1}, disjoint neighborhoods and full odd coverage.
pub fn is_extended_perfect(code: &CodeSet) -> Result<bool> {
    let m = check_length(code.length())?;
    let expected = 1u64 << (code.length() - m - 1);
    let cov = coverage(code)?;
    Ok(code.cardinality() == expected && cov.uncovered == 0 && cov.collisions == 0)
}

pub fn verify_extended_perfect(code: &CodeSet) -> Result<CodeReport> {
    let n = code.length();
    let m = check_length(n)?;
    if code.is_empty() {
        return Err(Error::EmptySet);
    }
    let cov = coverage(code)?;
    let rank = rank(code)?;
    Ok(CodeReport {
        n,
        cardinality: code.cardinality(),
        expected_cardinality: 1u64 << (n - m - 1),
        min_distance_at_least_4: cov.collisions == 0,
        omega_covers_odd: cov.uncovered == 0,
        omega_disjoint: cov.collisions == 0,
        uncovered: cov.uncovered,
        collisions: cov.collisions,
        rank,
        rank_deficiency: (n as i64 - 1) - rank as i64,
        kernel_dimension: kernel(code)?.dimension(),
    })
}

/// Whether every word of F^len is within distance 1 of exactly one codeword.
pub fn verify_perfect(code: &CodeSet) -> Result<bool> {
    let len = code.length();
    if len > 32 {
        return Err(Error::Unsupported(format!(
            "covering check at length {len}"
        )));
    }
    let marks = AtomicBitArray::new(1u64 << len);
    let clash = AtomicU64::new(0);
    code.par_iter().for_each(|x| {
        let mut local = marks.set(x) as u64;
        for k in 0..len {
            local += marks.set(x ^ (1u64 << k)) as u64;
        }
        if local > 0 {
            clash.fetch_add(local, Ordering::Relaxed);
        }
    });
    Ok(clash.into_inner() == 0 && marks.into_bits().count_ones() == 1u64 << len)
}

/// Dimension of the affine span.
pub fn rank(code: &CodeSet) -> Result<u32> {
    let base = code.min().ok_or(Error::EmptySet)?;
    let mut basis = Basis::new();
    let full = code.length();
    for x in code.iter() {
        basis.insert(x ^ base);
        if basis.dim() == full {
            break;
        }
    }
    Ok(basis.dim())
}

/// (n - 1) - rank.
pub fn rank_deficiency(code: &CodeSet) -> Result<i64> {
    Ok(code.length() as i64 - 1 - rank(code)? as i64)
}

/// {k : C + k = C}, searched among the differences c + c_0.
pub fn kernel(code: &CodeSet) -> Result<AffineSubspace> {
    let c0 = code.min().ok_or(Error::EmptySet)?;
    let stride = (code.cardinality() as usize / KERNEL_PROBES).max(1);
    let probes: Vec<u64> = code.iter().step_by(stride).take(KERNEL_PROBES).collect();
    let mut basis = Basis::new();
    for c in code.iter() {
        let k = c ^ c0;
        if basis.contains(k) {
            continue;
        }
        if probes.iter().all(|&p| code.contains(p ^ k))
            && code.par_iter().all(|x| code.contains(x ^ k))
        {
            basis.insert(k);
        }
    }
    Ok(AffineSubspace::from_basis(code.length(), 0, &basis))
}

/// Set inequality.
pub fn distinct(a: &CodeSet, b: &CodeSet) -> Result<bool> {
    if a.length() != b.length() {
        return Err(Error::LengthMismatch {
            left: a.length(),
            right: b.length(),
        });
    }
    Ok(!a.same_set(b))
}

/// Exact perfect-covering oracle by brute force over all words, for tests
/// at small lengths: counts the codewords within distance 1 of each word.
pub fn covering_counts(code: &CodeSet) -> Result<Vec<u8>> {
    let len = code.length();
    if len > 20 {
        return Err(Error::Unsupported(format!(
            "brute-force covering at length {len}"
        )));
    }
    let mut counts = vec![0u8; 1 << len];
    for x in code.iter() {
        counts[x as usize] += 1;
        for k in 0..len {
            counts[(x ^ (1u64 << k)) as usize] += 1;
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_code, sample_tree, Mode};
    use crate::scaffold::hamming_code;
    use crate::word::Space;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn h16() -> CodeSet {
        hamming_code(&Space::new(16).unwrap()).unwrap()
    }

    #[test]
    fn hamming_report() {
        let r = verify_extended_perfect(&h16()).unwrap();
        assert!(r.is_extended_perfect());
        assert_eq!(r.cardinality, 2048);
        assert_eq!(r.rank, 11);
        assert_eq!(r.rank_deficiency, 4);
        assert_eq!(r.kernel_dimension, 11);
        assert!(r.to_string().contains("rank=11\n"));
        assert!(r.to_string().ends_with("extended_perfect=true\n"));
    }

    #[test]
    fn deleted_codeword_leaves_sixteen_uncovered() {
        let mut h = h16();
        let victim = h.iter().nth(100).unwrap();
        h.remove(victim);
        let r = verify_extended_perfect(&h).unwrap();
        assert_eq!(r.uncovered, 16);
        assert!(r.omega_disjoint);
        assert!(!r.is_extended_perfect());
        assert_eq!(r.failures(), vec!["cardinality", "omega_covers_odd"]);
    }

    #[test]
    fn added_word_breaks_disjointness() {
        let h = h16();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let mut x: u64 = rng.gen_range(0..1 << 16);
            if x.count_ones() % 2 == 1 {
                x ^= 1;
            }
            if h.contains(x) {
                continue;
            }
            let mut bigger = h.clone();
            bigger.insert(x);
            let r = verify_extended_perfect(&bigger).unwrap();
            assert!(!r.omega_disjoint);
            assert!(!r.min_distance_at_least_4);
        }
    }

    #[test]
    fn odd_codeword_is_an_error() {
        let c = CodeSet::from_raw_words(16, [0u64, 1]);
        assert!(matches!(
            verify_extended_perfect(&c),
            Err(Error::OddWord(_))
        ));
    }

    #[test]
    fn small_perfect_codes() {
        assert!(verify_perfect(&CodeSet::from_raw_words(3, [0b000, 0b111])).unwrap());
        assert!(!verify_perfect(&CodeSet::from_raw_words(3, [0b000])).unwrap());
        assert!(!verify_perfect(&CodeSet::from_raw_words(3, [0b000, 0b011])).unwrap());
    }

    #[test]
    fn punctured_hamming_against_brute_force() {
        let p = CodeSet::from_raw_words(15, h16().iter().map(|x| x >> 1));
        let counts = covering_counts(&p).unwrap();
        assert!(counts.iter().all(|&c| c == 1));
        assert!(verify_perfect(&p).unwrap());
        let mut q = p.clone();
        let first = q.min().unwrap();
        q.remove(first);
        assert!(!verify_perfect(&q).unwrap());
    }

    #[test]
    fn rank_is_translation_invariant() {
        let s = Space::new(16).unwrap();
        let c = build_code(&sample_tree(s, 3, Mode::La3).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = rank(&c).unwrap();
        for _ in 0..5 {
            let v = rng.gen_range(0..1u64 << 16);
            assert_eq!(rank(&c.translate(v)).unwrap(), r);
        }
        assert_eq!(rank(&h16().translate(0b1010)).unwrap(), 11);
    }

    #[test]
    fn kernel_of_hamming_and_random_sets() {
        assert_eq!(kernel(&h16()).unwrap().dimension(), 11);
        let mut evens: Vec<u64> = (0..1u64 << 16)
            .filter(|x| x.count_ones() % 2 == 0)
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        evens.shuffle(&mut rng);
        let random = CodeSet::from_raw_words(16, evens[..2048].iter().copied());
        assert_eq!(kernel(&random).unwrap().dimension(), 0);
    }

    #[test]
    fn kernel_candidates_are_exhaustive() {
        let s = Space::new(16).unwrap();
        let c = build_code(&sample_tree(s, 5, Mode::La3).unwrap()).unwrap();
        let ker = kernel(&c).unwrap();
        assert!(ker.dimension() >= 4);
        // every period, found by brute force over all k, lies in the computed kernel
        for k in 0..1u64 << 16 {
            let period = c.iter().all(|x| c.contains(x ^ k));
            assert_eq!(period, ker.contains(k), "k={k:#x}");
        }
    }

    #[test]
    fn distinctness() {
        let h = h16();
        assert!(!distinct(&h, &h).unwrap());
        let s = Space::new(16).unwrap();
        let c = build_code(&sample_tree(s, 1, Mode::La3).unwrap()).unwrap();
        assert!(distinct(&h, &c).unwrap());
        assert!(distinct(&h, &CodeSet::from_raw_words(8, [0u64])).is_err());
    }

    #[test]
    fn la3_code_invariants() {
        let s = Space::new(16).unwrap();
        for seed in 0..5 {
            let c = build_code(&sample_tree(s, seed, Mode::La3).unwrap()).unwrap();
            let r = verify_extended_perfect(&c).unwrap();
            assert!(r.is_extended_perfect());
            assert_eq!(r.rank, 13);
            assert_eq!(r.rank_deficiency, 2);
            assert!(r.kernel_dimension >= 1 << r.rank_deficiency);
        }
    }
}
