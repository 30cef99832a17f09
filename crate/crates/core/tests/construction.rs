use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use perfcode::analysis::{distinct, kernel, verify_extended_perfect};
use perfcode::codeset::CodeSet;
use perfcode::components::{is_bold, is_component};
use perfcode::construction::{
    build_code, build_code_recursive, intermediate, sample_tree, validate_tree, AssignmentTree,
    LocalAut, Mode,
};
use perfcode::isometries::{sample_a, sample_d};
use perfcode::word::Space;

fn s16() -> Space {
    Space::new(16).unwrap()
}

#[test]
fn hundred_trees_per_mode_give_extended_perfect_codes() {
    for mode in [Mode::La1, Mode::La2, Mode::La3] {
        for seed in 0..100 {
            let code = build_code(&sample_tree(s16(), seed, mode).unwrap()).unwrap();
            let r = verify_extended_perfect(&code).unwrap();
            assert!(r.is_extended_perfect(), "{mode} seed {seed}: {r}");
        }
    }
}

#[test]
fn la3_kernels_meet_rank_deficiency_bound() {
    for seed in 200..260 {
        let code = build_code(&sample_tree(s16(), seed, Mode::La3).unwrap()).unwrap();
        let r = verify_extended_perfect(&code).unwrap();
        assert_eq!(r.rank_deficiency, 2);
        assert!(r.kernel_dimension >= 1 << r.rank_deficiency, "seed {seed}");
    }
}

#[test]
fn intermediates_are_components_and_la3_intermediates_are_bold() {
    let s = s16();
    for (seed, mode) in (0..12).map(|i| (i, [Mode::La1, Mode::La2, Mode::La3][i as usize % 3])) {
        let tree = sample_tree(s, seed, mode).unwrap();
        for (t, suffix) in [
            (1u32, vec![3usize, 1]),
            (2, vec![0]),
            (2, vec![1]),
            (3, vec![]),
        ] {
            let g = intermediate(&tree, t, &suffix).unwrap();
            assert!(is_component(&s, &g, t).unwrap(), "{mode} t={t}");
            if mode == Mode::La3 {
                assert!(is_bold(&s, &g, t).unwrap(), "seed {seed} t={t}");
            }
        }
    }
}

#[test]
fn recursive_and_fast_routes_agree() {
    for seed in 0..20 {
        let tree = sample_tree(s16(), seed, Mode::La3).unwrap();
        assert_eq!(
            build_code(&tree).unwrap(),
            build_code_recursive(&tree).unwrap()
        );
    }
}

fn random_slot(tree: &AssignmentTree, rng: &mut ChaCha8Rng) -> (u32, Vec<usize>) {
    let m = tree.space().m();
    let t = rng.gen_range(2..=m);
    let index = rng.gen_range(0..tree.level_len(t));
    (t, tree.path_of(t, index))
}

/// Distinct valid LA3 trees give distinct codes, including pairs that differ
/// in a single assignment.
#[test]
fn distinct_la3_trees_give_distinct_codes() {
    let s = s16();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut pairs = 0;
    let mut single = 0;
    while pairs < 1000 {
        let a = sample_tree(s, rng.gen(), Mode::La3).unwrap();
        let b = if pairs % 2 == 0 {
            let mut b = a.clone();
            let (t, path) = random_slot(&a, &mut rng);
            let rep = sample_d(&s, t - 1, &mut rng).unwrap();
            b.set(t, &path, LocalAut::Rep(rep)).unwrap();
            if validate_tree(&b).is_err() {
                continue;
            }
            single += 1;
            b
        } else {
            sample_tree(s, rng.gen(), Mode::La3).unwrap()
        };
        let ca = build_code(&a).unwrap();
        let cb = build_code(&b).unwrap();
        assert_eq!(distinct(&ca, &cb).unwrap(), a != b);
        pairs += 1;
    }
    assert!(single >= 400);
}

/// A raw element of the right group in place of one LA1 assignment keeps the
/// code extended perfect.
#[test]
fn la1_single_replacement_stays_perfect() {
    let s = s16();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let mut tree = sample_tree(s, rng.gen(), Mode::La1).unwrap();
        let (t, path) = random_slot(&tree, &mut rng);
        tree.set(
            t,
            &path,
            LocalAut::Raw(sample_a(&s, t - 1, &mut rng).unwrap()),
        )
        .unwrap();
        let code = build_code(&tree).unwrap();
        assert!(verify_extended_perfect(&code)
            .unwrap()
            .is_extended_perfect());
    }
}

/// Every period of a code is a difference of codewords: random words outside
/// the candidate set never fix the code.
#[test]
fn kernel_candidates_are_exhaustive() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for seed in 0..5 {
        let code = build_code(&sample_tree(s16(), seed, Mode::La3).unwrap()).unwrap();
        let c0 = code.min().unwrap();
        let candidates = CodeSet::from_raw_words(16, code.iter().map(|c| c ^ c0));
        let ker = kernel(&code).unwrap();
        for _ in 0..2000 {
            let k: u64 = rng.gen::<u64>() & 0xffff;
            let periodic = code.iter().all(|x| code.contains(x ^ k));
            if !candidates.contains(k) {
                assert!(!periodic);
            }
            assert_eq!(periodic, ker.contains(k));
        }
        for k in ker.elements().iter() {
            assert!(code.iter().all(|x| code.contains(x ^ k)));
        }
    }
}

#[test]
fn la3_at_32_builds() {
    let s = Space::new(32).unwrap();
    let tree = sample_tree(s, 11, Mode::La3).unwrap();
    assert!(validate_tree(&tree).is_ok());
    let other = sample_tree(s, 12, Mode::La3).unwrap();
    assert_ne!(tree, other);
}
