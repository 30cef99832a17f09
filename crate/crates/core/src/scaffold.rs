//! The structured sets V^t, A^t, Ω(A^t), Θ(A^t), B^t and the extended
//! Hamming code H = A^{m-1}.
//!
//! Every set has two routes: a closed-form membership predicate usable at
//! any length, and a definitional enumeration (recursive unions, explicit
//! neighborhoods and closures) that serves as an oracle at small lengths.

use crate::bits::BitArray;
use crate::codeset::CodeSet;
use crate::error::{Error, Result};
use crate::gf2::{AffineSubspace, Basis};
use crate::word::{neighborhood, Space, Word};

/// Largest length for which the definitional Θ scan and full-space filters run.
pub const DEFINITIONAL_MAX_N: u32 = 16;

/// Largest set materialized as an explicit list.
const ENUMERATION_BUDGET: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LevelSetKind {
    V,
    A,
    OmegaA,
    ThetaA,
    B,
    H,
}

/// One of the scaffold sets at a given level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LevelSetId {
    space: Space,
    kind: LevelSetKind,
    t: u32,
}

impl LevelSetId {
    pub fn new(space: Space, kind: LevelSetKind, t: u32) -> Result<Self> {
        let t = if kind == LevelSetKind::H {
            space.m() - 1
        } else {
            space.check_level(t, space.m() - 1)?;
            t
        };
        Ok(LevelSetId { space, kind, t })
    }

    pub fn hamming(space: Space) -> Self {
        LevelSetId {
            space,
            kind: LevelSetKind::H,
            t: space.m() - 1,
        }
    }

    pub fn kind(&self) -> LevelSetKind {
        self.kind
    }

    pub fn level(&self) -> u32 {
        self.t
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// log2 of the cardinality, from the closed-form size formulas.
    pub fn log2_cardinality(&self) -> u32 {
        let s = self.space;
        let (n, m, t) = (s.n(), s.m(), self.t);
        let w = s.width(t);
        match self.kind {
            LevelSetKind::V => w - 1,
            LevelSetKind::A => w * ((1 << t) - 1) - t,
            LevelSetKind::OmegaA => w * ((1 << t) - 1) + m - t,
            LevelSetKind::ThetaA if t < m - 1 => w * ((1 << t) - 1),
            LevelSetKind::ThetaA => n - 1,
            LevelSetKind::B => n - w - 1,
            LevelSetKind::H => n - m - 1,
        }
    }

    /// Closed-form membership.
    pub fn contains(&self, x: u64) -> bool {
        let s = &self.space;
        let t = self.t;
        match self.kind {
            LevelSetKind::V => in_v(s, x, t),
            LevelSetKind::A | LevelSetKind::H => a_span(s, t).contains(x),
            LevelSetKind::OmegaA => s.parity_check_raw(x, t).count_ones() == 1,
            LevelSetKind::ThetaA => theta_a_contains(s, x, t),
            LevelSetKind::B => b_contains(s, x, t),
        }
    }

    /// Filters F^n through the closed-form predicate.
    pub fn enumerate_closed(&self) -> Result<CodeSet> {
        let n = self.space.n();
        if n > DEFINITIONAL_MAX_N {
            return Err(Error::Unsupported(format!("full-space scan at length {n}")));
        }
        match self.kind {
            LevelSetKind::A | LevelSetKind::H => {
                let span = a_span(&self.space, self.t);
                Ok(CodeSet::from_raw_words(
                    n,
                    (0..1u64 << n).filter(|&x| span.contains(x)),
                ))
            }
            _ => Ok(CodeSet::from_raw_words(
                n,
                (0..1u64 << n).filter(|&x| self.contains(x)),
            )),
        }
    }

    /// Computes the set from its definition.
    pub fn enumerate_definitional(&self) -> Result<CodeSet> {
        let s = &self.space;
        let t = self.t;
        match self.kind {
            LevelSetKind::V => Ok(CodeSet::from_raw_words(s.n(), v_raw(s, t))),
            LevelSetKind::A | LevelSetKind::H => a_enumerate(s, t),
            LevelSetKind::OmegaA => Ok(neighborhood(&a_enumerate(s, t)?)),
            LevelSetKind::ThetaA => theta(s, &a_enumerate(s, t)?),
            LevelSetKind::B if t == 1 => Ok(CodeSet::from_raw_words(s.n(), v_raw(s, 1))),
            LevelSetKind::B => {
                let closure = theta(s, &a_enumerate(s, t - 1)?)?;
                Ok(sum_set(
                    &CodeSet::from_raw_words(s.n(), v_raw(s, t)),
                    &closure,
                ))
            }
        }
    }
}

fn in_v(s: &Space, x: u64, t: u32) -> bool {
    let r0 = s.row(x, t, 0);
    r0.count_ones().is_multiple_of(2) && x == s.place_row(r0, t, 0) | s.place_row(r0, t, 1)
}

fn theta_a_contains(s: &Space, x: u64, t: u32) -> bool {
    if t < s.m() - 1 {
        s.parity_check_raw(x, t) == 0
    } else {
        x.count_ones().is_multiple_of(2)
    }
}

/// Eq. (8) style test: zero row sum and zero total over even-indexed rows.
/// At t = 1 this reduces to membership in V^1.
fn b_contains(s: &Space, x: u64, t: u32) -> bool {
    if t == 1 {
        return in_v(s, x, 1);
    }
    if s.parity_check_raw(x, t) != 0 {
        return false;
    }
    let even_rows = (0..s.rows(t))
        .step_by(2)
        .fold(0u64, |acc, i| acc ^ s.row(x, t, i));
    even_rows.count_ones() % 2 == 0
}

/// V^t in enumeration order: ascending by the even row word v.
pub(crate) fn v_raw(s: &Space, t: u32) -> Vec<u64> {
    let w = s.width(t);
    (0..1u64 << w)
        .filter(|v| v.count_ones() % 2 == 0)
        .map(|v| s.place_row(v, t, 0) | s.place_row(v, t, 1))
        .collect()
}

/// |V^t| = 2^(2^(m-t) - 1).
pub fn v_len(s: &Space, t: u32) -> u64 {
    1u64 << (s.width(t) - 1)
}

/// The ordered enumeration of V^t.
pub fn v_set(s: &Space, t: u32) -> Result<Vec<Word>> {
    s.check_level(t, s.m() - 1)?;
    Ok(v_raw(s, t).into_iter().map(|x| s.word(x)).collect())
}

/// Position of `x` in the V^t enumeration.
#[cfg(test)]
pub(crate) fn v_index(s: &Space, x: u64, t: u32) -> Option<usize> {
    if !in_v(s, x, t) {
        return None;
    }
    let v = s.row(x, t, 0);
    // even words below v: half of all words below v, rounded by v's own parity
    Some((v / 2) as usize)
}

/// Basis of span(V^1 ∪ … ∪ V^t).
pub(crate) fn a_basis(s: &Space, t: u32) -> Basis {
    let mut basis = Basis::new();
    for level in 1..=t {
        let w = s.width(level);
        for k in 1..w {
            let v = (1u64 << (w - 1)) | (1u64 << (w - 1 - k));
            basis.insert(s.place_row(v, level, 0) | s.place_row(v, level, 1));
        }
    }
    basis
}

/// A^t as a linear subspace.
pub fn a_span(s: &Space, t: u32) -> AffineSubspace {
    AffineSubspace::from_basis(s.n(), 0, &a_basis(s, t))
}

/// Basis of {x : p^level(x) = 0}; at level m this is the even-weight space.
pub(crate) fn column_parity_basis(s: &Space, level: u32) -> Vec<u64> {
    let mut out = Vec::new();
    for j in 0..s.width(level) {
        let top = s.coord_mask(s.coord(level, 0, j));
        for i in 1..s.rows(level) {
            out.push(top | s.coord_mask(s.coord(level, i, j)));
        }
    }
    out
}

/// Θ(A^t) from its closed form, as a linear subspace.
pub fn theta_a_span(s: &Space, t: u32) -> AffineSubspace {
    let level = if t < s.m() - 1 { t } else { s.m() };
    AffineSubspace::linear(s.n(), column_parity_basis(s, level))
}

/// B^t as a linear subspace: span(V^t) + Θ(A^{t-1}), with B^1 = V^1.
pub fn b_span(s: &Space, t: u32) -> AffineSubspace {
    let mut vecs: Vec<u64> = v_basis(s, t);
    if t > 1 {
        vecs.extend(column_parity_basis(s, t - 1));
    }
    AffineSubspace::linear(s.n(), vecs)
}

pub(crate) fn v_basis(s: &Space, t: u32) -> Vec<u64> {
    let w = s.width(t);
    (1..w)
        .map(|k| {
            let v = (1u64 << (w - 1)) | (1u64 << (w - 1 - k));
            s.place_row(v, t, 0) | s.place_row(v, t, 1)
        })
        .collect()
}

pub fn a_membership(s: &Space, w: &Word, t: u32) -> Result<bool> {
    s.check_word(w)?;
    s.check_level(t, s.m() - 1)?;
    Ok(a_span(s, t).contains(w.bits()))
}

pub fn omega_a_membership(s: &Space, w: &Word, t: u32) -> Result<bool> {
    s.check_word(w)?;
    Ok(LevelSetId::new(*s, LevelSetKind::OmegaA, t)?.contains(w.bits()))
}

pub fn theta_a_membership(s: &Space, w: &Word, t: u32) -> Result<bool> {
    s.check_word(w)?;
    Ok(LevelSetId::new(*s, LevelSetKind::ThetaA, t)?.contains(w.bits()))
}

pub fn b_membership(s: &Space, w: &Word, t: u32) -> Result<bool> {
    s.check_word(w)?;
    Ok(LevelSetId::new(*s, LevelSetKind::B, t)?.contains(w.bits()))
}

/// A^t by the recursion A^1 = V^1, A^t = V^t + A^{t-1}.
pub fn a_enumerate(s: &Space, t: u32) -> Result<CodeSet> {
    s.check_level(t, s.m() - 1)?;
    let size = 1u64 << LevelSetId::new(*s, LevelSetKind::A, t)?.log2_cardinality();
    if size > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            size: size.to_string(),
            budget: ENUMERATION_BUDGET,
        });
    }
    let mut set = CodeSet::from_raw_words(s.n(), v_raw(s, 1));
    for level in 2..=t {
        set = sum_set(&CodeSet::from_raw_words(s.n(), v_raw(s, level)), &set);
    }
    Ok(set)
}

/// The extended Hamming code H = A^{m-1}. Length 32 yields a dense set.
pub fn hamming_code(s: &Space) -> Result<CodeSet> {
    let t = s.m() - 1;
    if s.n() <= 16 {
        return a_enumerate(s, t);
    }
    if s.n() > 32 {
        return Err(Error::Unsupported(format!(
            "materializing the Hamming code of length {}",
            s.n()
        )));
    }
    let span = a_span(s, t);
    let basis = span.raw_basis();
    let mut bits = BitArray::new(1u64 << (s.n() - 1));
    let mut x = 0u64;
    bits.set(x >> 1);
    for i in 1u64..1 << basis.len() {
        x ^= basis[i.trailing_zeros() as usize];
        bits.set(x >> 1);
    }
    Ok(CodeSet::from_even_bits(s.n(), bits))
}

/// {a + b : a ∈ left, b ∈ right}.
pub fn sum_set(left: &CodeSet, right: &CodeSet) -> CodeSet {
    CodeSet::from_raw_words(
        left.length(),
        left.iter().flat_map(|a| right.iter().map(move |b| a ^ b)),
    )
}

/// Θ(G) computed from its definition: even words whose whole neighborhood
/// lies in Ω(G).
pub fn theta(s: &Space, g: &CodeSet) -> Result<CodeSet> {
    let n = s.n();
    if g.length() != n {
        return Err(Error::LengthMismatch {
            left: g.length(),
            right: n,
        });
    }
    if let Some(odd) = g.first_odd() {
        return Err(Error::OddWord(s.word(odd).to_string()));
    }
    if n > DEFINITIONAL_MAX_N {
        return Err(Error::Unsupported(format!(
            "definitional closure at length {n}"
        )));
    }
    let mut omega = BitArray::new(1u64 << n);
    for x in g.iter() {
        for k in 0..n {
            omega.set(x ^ (1u64 << k));
        }
    }
    Ok(CodeSet::from_raw_words(
        n,
        (0..1u64 << n)
            .filter(|x| x.count_ones() % 2 == 0)
            .filter(|&x| (0..n).all(|k| omega.get(x ^ (1u64 << k)))),
    ))
}
