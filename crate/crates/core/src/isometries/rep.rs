//! Canonical representatives 𝒟^t of the cosets 𝒜^t/ℬ^t.
//!
//! For t < m-1 a representative is fixed by, in every level-t column, the
//! half of the rows that receives the even rows (stored as the half that
//! contains row 0), plus one bit selecting the translation class ē_t.
//! For t = m-1 it is fixed by the unordered partition of the coordinates
//! into four blocks that receive the level-(m-2) columns, plus one of four
//! translation classes.
//!
//! Representatives are realized as π∘τ_b, so the normal-form shift is π(b).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scaffold::b_span;
use crate::word::Space;

use super::groups::{check_group_level, column_map, in_a, in_top_translations};
use super::Isometry;

/// Largest enumeration `enumerate_d` will start.
pub const ENUMERATION_BUDGET: u64 = 1 << 25;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RepData {
    /// Per column, the row set (bit `i` = row `i`) containing row 0.
    Columns { halves: Vec<u64>, tbit: bool },
    /// Coordinate sets (bit `k` = coordinate `k`) sorted by minimum element.
    Blocks { blocks: [u64; 4], tclass: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DRep {
    t: u32,
    data: RepData,
}

fn mask_elems(mask: u64) -> Vec<u32> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

fn even_rows(rows: u32) -> u64 {
    (0..rows).step_by(2).fold(0, |acc, i| acc | 1u64 << i)
}

fn top_blocks(s: &Space) -> [u64; 4] {
    let level = s.m() - 2;
    let mut blocks = [0u64; 4];
    for (c, b) in blocks.iter_mut().enumerate() {
        for i in 0..s.rows(level) {
            *b |= 1u64 << s.coord(level, i, c as u32);
        }
    }
    blocks
}

/// Support {0, 1}, {0, 2} and their sum, indexed by translation class.
fn top_class_word(s: &Space, class: u8) -> u64 {
    match class {
        0 => 0,
        1 => s.coord_mask(0) | s.coord_mask(1),
        2 => s.coord_mask(0) | s.coord_mask(2),
        _ => s.coord_mask(1) | s.coord_mask(2),
    }
}

/// ē_t: rows 0 and 1 of column 0 at level t.
fn split_word(s: &Space, t: u32) -> u64 {
    s.coord_mask(0) | s.coord_mask(s.width(t))
}

impl DRep {
    pub fn new(s: &Space, t: u32, data: RepData) -> Result<Self> {
        let rep = DRep { t, data };
        rep.validate(s)?;
        Ok(rep)
    }

    /// The representative of the trivial coset.
    pub fn identity(s: &Space, t: u32) -> Result<Self> {
        check_group_level(s, t)?;
        let data = if t == s.m() - 1 {
            RepData::Blocks {
                blocks: top_blocks(s),
                tclass: 0,
            }
        } else {
            RepData::Columns {
                halves: vec![even_rows(s.rows(t)); s.width(t) as usize],
                tbit: false,
            }
        };
        Ok(DRep { t, data })
    }

    pub fn level(&self) -> u32 {
        self.t
    }

    pub fn data(&self) -> &RepData {
        &self.data
    }

    /// Translation class: `tbit` or `tclass`.
    pub fn translation_class(&self) -> u8 {
        match self.data {
            RepData::Columns { tbit, .. } => tbit as u8,
            RepData::Blocks { tclass, .. } => tclass,
        }
    }

    /// Same partition data, ignoring the translation class.
    pub fn same_partition(&self, other: &DRep) -> bool {
        match (&self.data, &other.data) {
            (RepData::Columns { halves: a, .. }, RepData::Columns { halves: b, .. }) => a == b,
            (RepData::Blocks { blocks: a, .. }, RepData::Blocks { blocks: b, .. }) => a == b,
            _ => false,
        }
    }

    pub fn validate(&self, s: &Space) -> Result<()> {
        check_group_level(s, self.t)?;
        let bad = |msg: String| Err(Error::MalformedRep(msg));
        let top = self.t == s.m() - 1;
        match &self.data {
            RepData::Columns { halves, .. } => {
                if top {
                    return bad(format!("level {} needs a block partition", self.t));
                }
                let rows = s.rows(self.t);
                if halves.len() != s.width(self.t) as usize {
                    return bad(format!(
                        "expected {} columns, got {}",
                        s.width(self.t),
                        halves.len()
                    ));
                }
                for (j, &h) in halves.iter().enumerate() {
                    if h & 1 == 0 || h.count_ones() != rows / 2 || h >> rows != 0 {
                        return bad(format!(
                            "column {j}: {:?} is not a half of the {rows} rows containing row 0",
                            mask_elems(h)
                        ));
                    }
                }
            }
            RepData::Blocks { blocks, tclass } => {
                if !top {
                    return bad(format!("level {} needs column halves", self.t));
                }
                let n = s.n();
                let mut union = 0u64;
                for (c, &b) in blocks.iter().enumerate() {
                    if b.count_ones() != n / 4 || union & b != 0 {
                        return bad(format!("block {c} has wrong size or overlaps"));
                    }
                    union |= b;
                    if c > 0 && b.trailing_zeros() < blocks[c - 1].trailing_zeros() {
                        return bad("blocks are not sorted by minimum".into());
                    }
                }
                if union != crate::word::low_mask(n) {
                    return bad("blocks do not cover every coordinate".into());
                }
                if *tclass > 3 {
                    return bad(format!("translation class {tclass} out of range"));
                }
            }
        }
        Ok(())
    }

    /// The isometry π∘τ_b this representative stands for.
    pub fn realize(&self, s: &Space) -> Result<Isometry> {
        self.validate(s)?;
        Ok(self.realize_unchecked(s))
    }

    pub(crate) fn realize_unchecked(&self, s: &Space) -> Isometry {
        let n = s.n();
        let mut perm = vec![0u8; n as usize];
        let b = match &self.data {
            RepData::Columns { halves, tbit } => {
                let t = self.t;
                let rows = s.rows(t);
                let evens: Vec<u32> = (0..rows).step_by(2).collect();
                let odds: Vec<u32> = (1..rows).step_by(2).collect();
                for (j, &h) in halves.iter().enumerate() {
                    let block = mask_elems(h);
                    let rest = mask_elems(!h & ((1u64 << rows) - 1));
                    for (src, dst) in evens.iter().zip(&block).chain(odds.iter().zip(&rest)) {
                        perm[s.coord(t, *src, j as u32) as usize] =
                            s.coord(t, *dst, j as u32) as u8;
                    }
                }
                if *tbit {
                    split_word(s, t)
                } else {
                    0
                }
            }
            RepData::Blocks { blocks, tclass } => {
                let level = s.m() - 2;
                for (c, &blk) in blocks.iter().enumerate() {
                    for (i, dst) in mask_elems(blk).into_iter().enumerate() {
                        perm[s.coord(level, i as u32, c as u32) as usize] = dst as u8;
                    }
                }
                top_class_word(s, *tclass)
            }
        };
        let pi = Isometry::from_raw(n, perm, 0);
        let shift = pi.permute(b);
        Isometry::from_raw(n, pi.perm_raw().to_vec(), shift)
    }

    /// Canonical text form: `D<t>:cols=<rows;rows;…>:b=<k>` or
    /// `D<t>:blocks=<coords|coords|coords|coords>:b=<k>`.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

fn join(mask: u64) -> String {
    mask_elems(mask)
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for DRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.data {
            RepData::Columns { halves, tbit } => {
                let cols: Vec<String> = halves.iter().map(|&h| join(h)).collect();
                write!(f, "D{}:cols={}:b={}", self.t, cols.join(";"), *tbit as u8)
            }
            RepData::Blocks { blocks, tclass } => {
                let bl: Vec<String> = blocks.iter().map(|&b| join(b)).collect();
                write!(f, "D{}:blocks={}:b={}", self.t, bl.join("|"), tclass)
            }
        }
    }
}

fn parse_list(s: &str) -> Result<u64> {
    let mut mask = 0u64;
    let mut prev: Option<u32> = None;
    for tok in s.split(',') {
        let v: u32 = tok
            .parse()
            .map_err(|_| Error::MalformedRep(format!("bad index {tok:?}")))?;
        if v >= 64 || prev.is_some_and(|p| p >= v) {
            return Err(Error::MalformedRep(format!(
                "indices must be ascending and below 64 in {s:?}"
            )));
        }
        prev = Some(v);
        mask |= 1u64 << v;
    }
    Ok(mask)
}

/// Parses the text form; call [`DRep::validate`] against a space afterwards.
impl FromStr for DRep {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let malformed = || Error::MalformedRep(format!("cannot parse {text:?}"));
        let mut parts = text.split(':');
        let head = parts.next().ok_or_else(malformed)?;
        let body = parts.next().ok_or_else(malformed)?;
        let tail = parts.next().ok_or_else(malformed)?;
        if parts.next().is_some() {
            return Err(malformed());
        }
        let t: u32 = head
            .strip_prefix('D')
            .and_then(|x| x.parse().ok())
            .ok_or_else(malformed)?;
        let class: u8 = tail
            .strip_prefix("b=")
            .and_then(|x| x.parse().ok())
            .ok_or_else(malformed)?;
        let data = if let Some(cols) = body.strip_prefix("cols=") {
            if class > 1 {
                return Err(malformed());
            }
            RepData::Columns {
                halves: cols.split(';').map(parse_list).collect::<Result<_>>()?,
                tbit: class == 1,
            }
        } else if let Some(bl) = body.strip_prefix("blocks=") {
            let v: Vec<u64> = bl.split('|').map(parse_list).collect::<Result<_>>()?;
            let blocks: [u64; 4] = v.try_into().map_err(|_| malformed())?;
            RepData::Blocks {
                blocks,
                tclass: class,
            }
        } else {
            return Err(malformed());
        };
        Ok(DRep { t, data })
    }
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::from(1u32), |acc, i| acc * i)
}

fn binomial(n: u64, k: u64) -> BigUint {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// |𝒟^t|: n!/(6((n/4)!)^4) at t = m-1, otherwise 2((1/2)C(2^t, 2^{t-1}))^{2^{m-t}}.
pub fn d_size(s: &Space, t: u32) -> Result<BigUint> {
    check_group_level(s, t)?;
    let n = s.n() as u64;
    if t == s.m() - 1 {
        return Ok(factorial(n) / (BigUint::from(6u32) * factorial(n / 4).pow(4)));
    }
    let k = s.rows(t) as u64;
    let half_binom = binomial(k, k / 2) / 2u32;
    Ok(half_binom.pow(s.width(t)) * 2u32)
}

/// All row halves of a `rows`-row column containing row 0, ascending.
fn column_halves(rows: u32) -> Vec<u64> {
    (0u64..1 << rows)
        .filter(|h| h & 1 == 1 && h.count_ones() == rows / 2)
        .collect()
}

/// Uniform random representative.
pub fn sample_d<R: Rng + ?Sized>(s: &Space, t: u32, rng: &mut R) -> Result<DRep> {
    check_group_level(s, t)?;
    if t == s.m() - 1 {
        let n = s.n();
        let mut coords: Vec<u32> = (0..n).collect();
        coords.shuffle(rng);
        let mut blocks = [0u64; 4];
        for (c, chunk) in coords.chunks((n / 4) as usize).enumerate() {
            blocks[c] = chunk.iter().fold(0, |acc, &k| acc | 1u64 << k);
        }
        blocks.sort_by_key(|b| b.trailing_zeros());
        return Ok(DRep {
            t,
            data: RepData::Blocks {
                blocks,
                tclass: rng.gen_range(0..4),
            },
        });
    }
    let rows = s.rows(t);
    let halves = (0..s.width(t))
        .map(|_| {
            let mut others: Vec<u32> = (1..rows).collect();
            others.shuffle(rng);
            others[..(rows / 2 - 1) as usize]
                .iter()
                .fold(1u64, |acc, &r| acc | 1u64 << r)
        })
        .collect();
    Ok(DRep {
        t,
        data: RepData::Columns {
            halves,
            tbit: rng.gen(),
        },
    })
}

/// Lexicographic successor of a k-combination of `0..len`.
fn next_combination(idx: &mut [usize], len: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < len - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Streaming enumeration of 𝒟^t, each representative exactly once.
pub struct DRepIter {
    t: u32,
    state: IterState,
    done: bool,
}

enum IterState {
    Columns {
        choices: Vec<u64>,
        digits: Vec<usize>,
        tbit: bool,
    },
    Blocks {
        n: usize,
        /// For each of the first three blocks, the chosen positions (beyond
        /// the forced minimum) in the pool left by the earlier blocks.
        combos: [Vec<usize>; 3],
        tclass: u8,
    },
}

pub fn enumerate_d(s: &Space, t: u32) -> Result<DRepIter> {
    let size = d_size(s, t)?;
    if size > BigUint::from(ENUMERATION_BUDGET) {
        return Err(Error::BudgetExceeded {
            size: size.to_string(),
            budget: ENUMERATION_BUDGET,
        });
    }
    let state = if t == s.m() - 1 {
        let q = (s.n() / 4) as usize;
        IterState::Blocks {
            n: s.n() as usize,
            combos: std::array::from_fn(|_| (0..q - 1).collect()),
            tclass: 0,
        }
    } else {
        IterState::Columns {
            choices: column_halves(s.rows(t)),
            digits: vec![0; s.width(t) as usize],
            tbit: false,
        }
    };
    Ok(DRepIter {
        t,
        state,
        done: false,
    })
}

fn blocks_from_combos(n: usize, combos: &[Vec<usize>; 3]) -> [u64; 4] {
    let mut pool: Vec<u32> = (0..n as u32).collect();
    let mut blocks = [0u64; 4];
    for (b, combo) in combos.iter().enumerate() {
        let rest = pool.split_off(1);
        let mut mask = 1u64 << pool[0];
        let mut taken = vec![false; rest.len()];
        for &i in combo {
            mask |= 1u64 << rest[i];
            taken[i] = true;
        }
        blocks[b] = mask;
        pool = rest
            .into_iter()
            .zip(taken)
            .filter(|(_, tk)| !tk)
            .map(|(c, _)| c)
            .collect();
    }
    blocks[3] = pool.iter().fold(0, |acc, &c| acc | 1u64 << c);
    blocks
}

impl Iterator for DRepIter {
    type Item = DRep;

    fn next(&mut self) -> Option<DRep> {
        if self.done {
            return None;
        }
        let t = self.t;
        match &mut self.state {
            IterState::Columns {
                choices,
                digits,
                tbit,
            } => {
                let item = DRep {
                    t,
                    data: RepData::Columns {
                        halves: digits.iter().map(|&d| choices[d]).collect(),
                        tbit: *tbit,
                    },
                };
                if !*tbit {
                    *tbit = true;
                } else {
                    *tbit = false;
                    let mut carried = true;
                    for d in digits.iter_mut() {
                        *d += 1;
                        if *d < choices.len() {
                            carried = false;
                            break;
                        }
                        *d = 0;
                    }
                    self.done = carried;
                }
                Some(item)
            }
            IterState::Blocks { n, combos, tclass } => {
                let item = DRep {
                    t,
                    data: RepData::Blocks {
                        blocks: blocks_from_combos(*n, combos),
                        tclass: *tclass,
                    },
                };
                if *tclass < 3 {
                    *tclass += 1;
                } else {
                    *tclass = 0;
                    let q = *n / 4;
                    // pool sizes after fixing each block's minimum
                    let pools = [*n - 1, *n - q - 1, *n - 2 * q - 1];
                    let mut advanced = false;
                    for b in (0..3).rev() {
                        if next_combination(&mut combos[b], pools[b]) {
                            for later in combos.iter_mut().skip(b + 1) {
                                *later = (0..q - 1).collect();
                            }
                            advanced = true;
                            break;
                        }
                    }
                    self.done = !advanced;
                }
                Some(item)
            }
        }
    }
}

/// Splits g ∈ 𝒜^t as g = realize(rep) ∘ h with h ∈ ℬ^t.
pub fn factor_mod_b(s: &Space, g: &Isometry, t: u32) -> Result<(DRep, Isometry)> {
    if !in_a(s, g, t)? {
        return Err(Error::NotInGroup { t });
    }
    let m = s.m();
    let data = if t == m - 1 {
        let level = m - 2;
        let mut blocks = [0u64; 4];
        for (c, b) in blocks.iter_mut().enumerate() {
            for i in 0..s.rows(level) {
                *b |= 1u64 << g.image(s.coord(level, i, c as u32));
            }
        }
        blocks.sort_by_key(|b| b.trailing_zeros());
        RepData::Blocks { blocks, tclass: 0 }
    } else {
        let cols = column_map(s, g, t).ok_or(Error::NotInGroup { t })?;
        let rows = s.rows(t);
        let all = (1u64 << rows) - 1;
        let mut halves = vec![0u64; s.width(t) as usize];
        for (j, &dest) in cols.iter().enumerate() {
            let img = (0..rows).step_by(2).fold(0u64, |acc, i| {
                acc | 1u64 << s.row_col(t, g.image(s.coord(t, i, j as u32))).0
            });
            halves[dest as usize] = if img & 1 == 1 { img } else { all & !img };
        }
        RepData::Columns {
            halves,
            tbit: false,
        }
    };
    let mut rep = DRep { t, data };
    let pi = rep.realize_unchecked(s);
    let residual = pi.unpermute(g.shift_raw());
    match &mut rep.data {
        RepData::Columns { tbit, .. } => *tbit = !b_span(s, t).contains(residual),
        RepData::Blocks { tclass, .. } => {
            *tclass = (0..4)
                .find(|&c| in_top_translations(s, residual ^ top_class_word(s, c)))
                .expect("even shift lies in one of four classes");
        }
    }
    let d = rep.realize_unchecked(s);
    let h = d.invert().compose_unchecked(g);
    Ok((rep, h))
}
