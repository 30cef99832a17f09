use rayon::prelude::*;

use crate::analysis::verify_extended_perfect;
use crate::bits::AtomicBitArray;
use crate::codeset::CodeSet;
use crate::components::assemble;
use crate::error::{Error, Result};
use crate::isometries::{Isometry, PermTable};
use crate::scaffold::{v_basis, v_raw, DEFINITIONAL_MAX_N};
use crate::word::Space;

use super::{ensure_valid, AssignmentTree};

/// Largest length whose codes are returned as explicit sorted lists.
const LIST_MAX_N: u32 = DEFINITIONAL_MAX_N;

/// The code of a valid tree.
///
/// Each path (r_2, …, r_{m-1}) contributes G(V^1) for the composite
/// G = g ∘ τ_{r_{m-1}} ∘ g_{r_{m-1}} ∘ … ∘ τ_{r_2} ∘ g_{r_2,…,r_{m-1}}, which
/// is affine, so its image is walked in Gray-code order from G(0). Length 32
/// fills a bit array over the even words.
pub fn build_code(tree: &AssignmentTree) -> Result<CodeSet> {
    ensure_valid(tree)?;
    let s = tree.space();
    let maps = tree.realized();
    let leaves = leaf_maps(&s, &maps);
    let basis = v_basis(&s, 1);
    let n = s.n();
    if n <= LIST_MAX_N {
        let mut words = Vec::with_capacity(leaves.len() << basis.len());
        for g in &leaves {
            gray_walk(g, &basis, |x| words.push(x));
        }
        return Ok(CodeSet::from_raw_words(n, words));
    }
    let bits = AtomicBitArray::new(1u64 << (n - 1));
    leaves.par_iter().for_each(|g| {
        gray_walk(g, &basis, |x| {
            bits.set(x >> 1);
        })
    });
    Ok(CodeSet::from_even_bits(n, bits.into_bits()))
}

/// Composite isometries of all full paths, in flat order of level 2.
fn leaf_maps(s: &Space, maps: &[Vec<Isometry>]) -> Vec<Isometry> {
    let m = s.m();
    let mut current = vec![maps[(m - 2) as usize][0].clone()];
    for t in (2..m).rev() {
        let vt = v_raw(s, t);
        let level = &maps[(t - 2) as usize];
        let mut next = Vec::with_capacity(current.len() * vt.len());
        for (suffix, f) in current.iter().enumerate() {
            for (i, &r) in vt.iter().enumerate() {
                let step = Isometry::translation(&s.word(r))
                    .compose_unchecked(&level[suffix * vt.len() + i]);
                next.push(f.compose_unchecked(&step));
            }
        }
        current = next;
    }
    current
}

fn gray_walk(g: &Isometry, basis: &[u64], mut emit: impl FnMut(u64)) {
    let images: Vec<u64> = basis.iter().map(|&b| g.permute(b)).collect();
    let mut x = g.apply_raw(0);
    emit(x);
    for i in 1u64..1 << images.len() {
        x ^= images[i.trailing_zeros() as usize];
        emit(x);
    }
}

/// The intermediate set A^t_{suffix} of a valid tree, by direct recursion.
/// `suffix` is (i_{t+1}, …, i_{m-1}); lengths up to 16.
pub fn intermediate(tree: &AssignmentTree, t: u32, suffix: &[usize]) -> Result<CodeSet> {
    ensure_valid(tree)?;
    let s = tree.space();
    if s.n() > LIST_MAX_N {
        return Err(Error::Unsupported(format!(
            "recursive evaluation at length {}",
            s.n()
        )));
    }
    s.check_level(t, s.m() - 1)?;
    let maps = tree.realized();
    let index = if t + 1 < s.m() {
        tree.flat_index(t + 1, suffix)?
    } else if suffix.is_empty() {
        0
    } else {
        return Err(Error::Unsupported("order m-1 has an empty suffix".into()));
    };
    Ok(intermediate_at(&s, &maps, t, index))
}

fn intermediate_at(s: &Space, maps: &[Vec<Isometry>], t: u32, suffix_index: usize) -> CodeSet {
    if t == 1 {
        return CodeSet::from_raw_words(s.n(), v_raw(s, 1));
    }
    let len = v_raw(s, t).len();
    let children: Vec<CodeSet> = (0..len)
        .map(|i| intermediate_at(s, maps, t - 1, suffix_index * len + i))
        .collect();
    let level = &maps[(t - 2) as usize][suffix_index * len..(suffix_index + 1) * len];
    assemble(s, t, level, &children).expect("level sizes match")
}

/// The code of a valid tree by the recursive union, up to length 16.
pub fn build_code_recursive(tree: &AssignmentTree) -> Result<CodeSet> {
    let s = tree.space();
    let top = intermediate(tree, s.m() - 1, &[])?;
    let root = &tree.realized()[(s.m() - 2) as usize][0];
    let table = PermTable::new(root);
    Ok(CodeSet::from_raw_words(
        s.n(),
        top.iter().map(|x| table.apply(x)),
    ))
}

/// Deletes the last coordinate of every codeword of an extended 1-perfect
/// code, giving a 1-perfect code of length n - 1.
pub fn puncture(code: &CodeSet) -> Result<CodeSet> {
    let report = verify_extended_perfect(code)?;
    if !report.is_extended_perfect() {
        return Err(Error::NotExtendedPerfect);
    }
    Ok(CodeSet::from_raw_words(
        code.length() - 1,
        code.iter().map(|x| x >> 1),
    ))
}
