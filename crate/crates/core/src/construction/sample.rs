use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::components::degenerate_raw;
use crate::error::{Error, Result};
use crate::isometries::{sample_a, sample_d, Isometry};
use crate::scaffold::v_raw;
use crate::word::Space;

use super::{AssignmentTree, LocalAut, Mode};

/// Attempts per collection before LA3 sampling gives up.
pub const REJECTION_CAP: u32 = 10_000;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream for one slot; depends only on the seed, the slot and the attempt.
fn node_rng(seed: u64, t: u32, index: usize, attempt: u32) -> ChaCha8Rng {
    let mut h = splitmix64(seed);
    for x in [t as u64, index as u64, attempt as u64] {
        h = splitmix64(h ^ x);
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn sample_slot(
    s: &Space,
    mode: Mode,
    t: u32,
    index: usize,
    seed: u64,
    attempt: u32,
) -> Result<LocalAut> {
    let mut rng = node_rng(seed, t, index, attempt);
    Ok(if mode.uses_reps() {
        LocalAut::Rep(sample_d(s, t - 1, &mut rng)?)
    } else {
        LocalAut::Raw(sample_a(s, t - 1, &mut rng)?)
    })
}

/// A random tree, a deterministic function of (length, seed, mode).
///
/// LA1 draws uniform elements of 𝒜^{t-1}; LA2 and LA3 draw uniform
/// representatives. LA3 redraws a whole collection until it is
/// nondegenerate, which makes the tree uniform over valid LA3 trees.
pub fn sample_tree(s: Space, seed: u64, mode: Mode) -> Result<AssignmentTree> {
    let mut tree = AssignmentTree::empty(s, mode)?;
    let m = s.m();
    for t in 2..=m {
        let len = tree.level_len(t);
        if mode != Mode::La3 || t == m {
            for i in 0..len {
                tree.set_slot(t, i, sample_slot(&s, mode, t, i, seed, 0)?);
            }
            continue;
        }
        let l = v_raw(&s, t);
        for start in (0..len).step_by(l.len()) {
            let mut attempt = 0;
            loop {
                let slots = (start..start + l.len())
                    .map(|i| sample_slot(&s, mode, t, i, seed, attempt))
                    .collect::<Result<Vec<_>>>()?;
                let maps = slots
                    .iter()
                    .map(|la| la.isometry(&s))
                    .collect::<Result<Vec<Isometry>>>()?;
                let refs: Vec<&Isometry> = maps.iter().collect();
                if !degenerate_raw(&l, &refs) {
                    for (k, la) in slots.into_iter().enumerate() {
                        tree.set_slot(t, start + k, la);
                    }
                    break;
                }
                attempt += 1;
                if attempt >= REJECTION_CAP {
                    return Err(Error::RejectionCapExceeded {
                        t,
                        attempts: attempt,
                    });
                }
            }
        }
    }
    Ok(tree)
}

/// Fraction of rejected draws for LA3 collections at level t over `trials`
/// independent collections; used to check the expected degeneracy rates.
pub fn rejection_rate(s: Space, t: u32, trials: u32, seed: u64) -> Result<f64> {
    s.check_level(t, s.m() - 1)?;
    let l = v_raw(&s, t);
    let mut degenerate = 0u32;
    for trial in 0..trials {
        let maps = (0..l.len())
            .map(|i| sample_slot(&s, Mode::La3, t, i, seed, trial)?.isometry(&s))
            .collect::<Result<Vec<Isometry>>>()?;
        let refs: Vec<&Isometry> = maps.iter().collect();
        degenerate += degenerate_raw(&l, &refs) as u32;
    }
    Ok(degenerate as f64 / trials as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::validate_tree;

    fn s16() -> Space {
        Space::new(16).unwrap()
    }

    #[test]
    fn deterministic() {
        for mode in [Mode::La1, Mode::La2, Mode::La3] {
            assert_eq!(
                sample_tree(s16(), 42, mode).unwrap(),
                sample_tree(s16(), 42, mode).unwrap()
            );
        }
        assert_ne!(
            sample_tree(s16(), 1, Mode::La3).unwrap(),
            sample_tree(s16(), 2, Mode::La3).unwrap()
        );
    }

    #[test]
    fn hundred_valid_distinct_la3_trees() {
        let trees: Vec<AssignmentTree> = (0..100)
            .map(|seed| sample_tree(s16(), seed, Mode::La3).unwrap())
            .collect();
        for tree in &trees {
            assert!(validate_tree(tree).is_ok());
        }
        for (i, a) in trees.iter().enumerate() {
            for b in &trees[i + 1..] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn la1_and_la2_trees_validate() {
        for seed in 0..10 {
            for mode in [Mode::La1, Mode::La2] {
                assert!(validate_tree(&sample_tree(s16(), seed, mode).unwrap()).is_ok());
            }
        }
    }

    #[test]
    fn rejection_rates_match_degenerate_fractions() {
        // 16/256 at level 2, 324/26244 at level 3
        let r2 = rejection_rate(s16(), 2, 20_000, 5).unwrap();
        assert!((r2 - 16.0 / 256.0).abs() < 0.01, "{r2}");
        let r3 = rejection_rate(s16(), 3, 20_000, 6).unwrap();
        assert!((r3 - 324.0 / 26_244.0).abs() < 0.004, "{r3}");
    }

    #[test]
    fn la3_tree_at_32() {
        let s = Space::new(32).unwrap();
        let tree = sample_tree(s, 3, Mode::La3).unwrap();
        assert!(validate_tree(&tree).is_ok());
    }
}
