//! Membership in the stabilizer groups 𝒜^t = Aut(Ω(A^t)) and
//! ℬ^t = Aut(B^t), structurally and by definition.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scaffold::{b_span, theta_a_span, v_raw, DEFINITIONAL_MAX_N};
use crate::word::Space;

use super::Isometry;

pub(crate) fn check_group_level(s: &Space, t: u32) -> Result<()> {
    if s.m() < 3 {
        return Err(Error::Unsupported(format!(
            "isometry groups need n >= 8, got {}",
            s.n()
        )));
    }
    s.check_level(t, s.m() - 1)
}

fn check_len(s: &Space, g: &Isometry) -> Result<()> {
    if g.n() != s.n() {
        return Err(Error::LengthMismatch {
            left: g.n(),
            right: s.n(),
        });
    }
    Ok(())
}

/// Destination column of every level-`level` column, if the permutation
/// keeps columns intact.
pub(crate) fn column_map(s: &Space, g: &Isometry, level: u32) -> Option<Vec<u32>> {
    let w = s.width(level);
    let mut out = Vec::with_capacity(w as usize);
    for j in 0..w {
        let dest = s.row_col(level, g.image(s.coord(level, 0, j))).1;
        for i in 1..s.rows(level) {
            if s.row_col(level, g.image(s.coord(level, i, j))).1 != dest {
                return None;
            }
        }
        out.push(dest);
    }
    Some(out)
}

/// Parities of the level-`level` columns, column 0 in bit 0.
pub(crate) fn column_parities(s: &Space, x: u64, level: u32) -> u32 {
    let p = s.parity_check_raw(x, level);
    let w = s.width(level);
    (0..w).fold(0, |acc, j| acc | ((p >> (w - 1 - j) & 1) as u32) << j)
}

/// Whether all level-(m-2) columns of `x` have equal parity, i.e. `x` lies in
/// Θ(A^{m-2}) + {0, 1111 0…0}.
pub(crate) fn in_top_translations(s: &Space, x: u64) -> bool {
    let p = column_parities(s, x, s.m() - 2);
    p == 0 || p == 0b1111
}

/// Structural test for 𝒜^t.
pub fn in_a(s: &Space, g: &Isometry, t: u32) -> Result<bool> {
    check_group_level(s, t)?;
    check_len(s, g)?;
    if t == s.m() - 1 {
        return Ok(g.shift_raw().count_ones().is_multiple_of(2));
    }
    Ok(column_map(s, g, t).is_some() && s.parity_check_raw(g.shift_raw(), t) == 0)
}

/// Structural test for ℬ^t.
pub fn in_b(s: &Space, g: &Isometry, t: u32) -> Result<bool> {
    check_group_level(s, t)?;
    check_len(s, g)?;
    let m = s.m();
    if t == m - 1 {
        return Ok(column_map(s, g, m - 2).is_some() && in_top_translations(s, g.shift_raw()));
    }
    if column_map(s, g, t).is_none() {
        return Ok(false);
    }
    for j in 0..s.width(t) {
        let parity = |i: u32| s.row_col(t, g.image(s.coord(t, i, j))).0 % 2;
        let first = parity(0);
        let keeps_classes = (0..s.rows(t)).all(|i| parity(i) == (first + i) % 2);
        if !keeps_classes {
            return Ok(false);
        }
    }
    Ok(b_span(s, t).contains(g.shift_raw()))
}

/// Definitional test for 𝒜^t: g(Ω(A^t)) = Ω(A^t), by a full scan of F^n.
pub fn in_a_definitional(s: &Space, g: &Isometry, t: u32) -> Result<bool> {
    check_group_level(s, t)?;
    check_len(s, g)?;
    if s.n() > DEFINITIONAL_MAX_N {
        return Err(Error::Unsupported(format!("full scan at length {}", s.n())));
    }
    let in_omega = |x: u64| s.parity_check_raw(x, t).count_ones() == 1;
    Ok((0..1u64 << s.n())
        .filter(|&x| in_omega(x))
        .all(|x| in_omega(g.apply_raw(x))))
}

/// Definitional test for ℬ^t as the stabilizer of the linear set B^t.
pub fn in_b_definitional(s: &Space, g: &Isometry, t: u32) -> Result<bool> {
    check_group_level(s, t)?;
    check_len(s, g)?;
    let b = b_span(s, t);
    if b.dimension() > 2 * DEFINITIONAL_MAX_N {
        return Err(Error::Unsupported(format!("enumerating B^{t}")));
    }
    let elems = b.elements();
    let preserved = elems.iter().all(|x| b.contains(g.apply_raw(x)));
    Ok(preserved)
}

/// Definitional test for ℬ^t as the stabilizer of the collection
/// {r + Ω(A^{t-1})}_{r ∈ V^t} (t ≥ 2), or of A^1 = V^1 (t = 1).
pub fn in_b_by_collection(s: &Space, g: &Isometry, t: u32) -> Result<bool> {
    check_group_level(s, t)?;
    check_len(s, g)?;
    if s.n() > DEFINITIONAL_MAX_N {
        return Err(Error::Unsupported(format!("full scan at length {}", s.n())));
    }
    let vt = v_raw(s, t);
    if t == 1 {
        return Ok(vt
            .iter()
            .all(|&x| vt.binary_search(&g.apply_raw(x)).is_ok()));
    }
    let omega: Vec<u64> = (0..1u64 << s.n())
        .filter(|&x| s.parity_check_raw(x, t - 1).count_ones() == 1)
        .collect();
    let in_omega = |x: u64| s.parity_check_raw(x, t - 1).count_ones() == 1;
    let mut hit = vec![false; vt.len()];
    for &r in &vt {
        let first = g.apply_raw(r ^ omega[0]);
        let Some(dest) = vt.iter().position(|&q| in_omega(first ^ q)) else {
            return Ok(false);
        };
        let q = vt[dest];
        if !omega.iter().all(|&x| in_omega(g.apply_raw(r ^ x) ^ q)) {
            return Ok(false);
        }
        if std::mem::replace(&mut hit[dest], true) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Permutation that sends column `j` to `col_perm[j]` and, inside column
/// `j`, row `i` to row `row_perms[j][i]`.
pub(crate) fn column_structured_perm(
    s: &Space,
    level: u32,
    col_perm: &[u32],
    row_perms: &[Vec<u32>],
) -> Vec<u8> {
    let mut perm = vec![0u8; s.n() as usize];
    for j in 0..s.width(level) {
        for i in 0..s.rows(level) {
            let src = s.coord(level, i, j);
            let dst = s.coord(
                level,
                row_perms[j as usize][i as usize],
                col_perm[j as usize],
            );
            perm[src as usize] = dst as u8;
        }
    }
    perm
}

fn random_perm<R: Rng + ?Sized>(len: u32, rng: &mut R) -> Vec<u32> {
    let mut p: Vec<u32> = (0..len).collect();
    p.shuffle(rng);
    p
}

fn random_word_in<R: Rng + ?Sized>(basis: &[u64], rng: &mut R) -> u64 {
    basis
        .iter()
        .filter(|_| rng.gen::<bool>())
        .fold(0, |acc, &b| acc ^ b)
}

/// Uniform element of 𝒜^t built from its generators: a column permutation,
/// independent row permutations in each column, and a Θ(A^t) shift.
pub fn sample_a<R: Rng + ?Sized>(s: &Space, t: u32, rng: &mut R) -> Result<Isometry> {
    check_group_level(s, t)?;
    let n = s.n();
    let perm: Vec<u8> = if t == s.m() - 1 {
        random_perm(n, rng).into_iter().map(|p| p as u8).collect()
    } else {
        let cols = random_perm(s.width(t), rng);
        let rows: Vec<Vec<u32>> = (0..s.width(t))
            .map(|_| random_perm(s.rows(t), rng))
            .collect();
        column_structured_perm(s, t, &cols, &rows)
    };
    let shift = random_word_in(theta_a_span(s, t).raw_basis(), rng);
    Ok(Isometry::from_raw(n, perm, shift))
}

/// Uniform element of ℬ^t.
pub fn sample_b<R: Rng + ?Sized>(s: &Space, t: u32, rng: &mut R) -> Result<Isometry> {
    check_group_level(s, t)?;
    let m = s.m();
    let n = s.n();
    if t == m - 1 {
        let level = m - 2;
        let cols = random_perm(s.width(level), rng);
        let rows: Vec<Vec<u32>> = (0..s.width(level))
            .map(|_| random_perm(s.rows(level), rng))
            .collect();
        let perm = column_structured_perm(s, level, &cols, &rows);
        let mut shift = random_word_in(theta_a_span(s, level).raw_basis(), rng);
        if rng.gen::<bool>() {
            shift ^= (0..4).fold(0, |acc, k| acc | s.coord_mask(k));
        }
        return Ok(Isometry::from_raw(n, perm, shift));
    }
    let half = s.rows(t) / 2;
    let cols = random_perm(s.width(t), rng);
    let rows: Vec<Vec<u32>> = (0..s.width(t))
        .map(|_| {
            let evens = random_perm(half, rng);
            let odds = random_perm(half, rng);
            let swap = rng.gen::<bool>() as u32;
            let mut p = vec![0u32; s.rows(t) as usize];
            for k in 0..half {
                p[(2 * k) as usize] = 2 * evens[k as usize] + swap;
                p[(2 * k + 1) as usize] = 2 * odds[k as usize] + 1 - swap;
            }
            p
        })
        .collect();
    let perm = column_structured_perm(s, t, &cols, &rows);
    let shift = random_word_in(b_span(s, t).raw_basis(), rng);
    Ok(Isometry::from_raw(n, perm, shift))
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::from(1u32), |acc, i| acc * i)
}

/// Orders (|𝒜^t|, |ℬ^t|) from the semidirect factorizations of the groups.
pub fn group_orders(s: &Space, t: u32) -> Result<(BigUint, BigUint)> {
    check_group_level(s, t)?;
    let n = s.n() as u64;
    let m = s.m();
    let two = BigUint::from(2u32);
    if t == m - 1 {
        // S_n ⋉ Z_2^{n-1}, and 𝒜^{m-2} ⋉ {τ_0, τ_1111…}
        let a = factorial(n) * two.pow((n - 1) as u32);
        let (a_prev, _) = group_orders(s, m - 2)?;
        return Ok((a, a_prev * 2u32));
    }
    let cols = s.width(t) as u64;
    let rows = s.rows(t) as u64;
    let col_perms = factorial(cols);
    let a =
        col_perms.clone() * factorial(rows).pow(cols as u32) * two.pow((cols * (rows - 1)) as u32);
    let half = factorial(rows / 2);
    let b = col_perms
        * (BigUint::from(2u32) * &half * &half).pow(cols as u32)
        * two.pow((cols * (rows - 1) - 1) as u32);
    Ok((a, b))
}
