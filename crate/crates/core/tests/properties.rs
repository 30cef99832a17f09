use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use perfcode::codefile::CodeFile;
use perfcode::codeset::CodeSet;
use perfcode::construction::{parse_tree, sample_tree, serialize_tree, Mode};
use perfcode::counting::{historical_bounds, k_la_exact_log2, k_la_upper_log2};
use perfcode::isometries::{
    factor_mod_b, in_a, in_a_definitional, in_b, in_b_definitional, sample_a, sample_b, DRep,
};
use perfcode::scaffold::{a_enumerate, b_span, sum_set, theta, v_set};
use perfcode::word::{neighborhood, Space};

fn s16() -> Space {
    Space::new(16).unwrap()
}

fn even(x: u64) -> u64 {
    x ^ (x.count_ones() as u64 & 1)
}

fn small_even_set() -> impl Strategy<Value = CodeSet> {
    prop::collection::vec(0u64..1 << 16, 1..5)
        .prop_map(|v| CodeSet::from_raw_words(16, v.into_iter().map(even)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn equal_neighborhoods_iff_equal_closures(
        a in small_even_set(),
        b in small_even_set(),
        use_closure in any::<bool>(),
    ) {
        let s = s16();
        let b = if use_closure { theta(&s, &a).unwrap() } else { b };
        let same_omega = neighborhood(&a) == neighborhood(&b);
        let same_theta = theta(&s, &a).unwrap() == theta(&s, &b).unwrap();
        prop_assert_eq!(same_omega, same_theta);
        if use_closure {
            prop_assert!(same_omega);
        }
    }

    #[test]
    fn b_sets_are_closed_under_addition(t in 1u32..4, seed in any::<u64>()) {
        let span = b_span(&s16(), t);
        prop_assert!(span.is_linear());
        let basis: Vec<u64> = span.basis().iter().map(|w| w.bits()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pick = || basis.iter().filter(|_| rng.gen::<bool>()).fold(0, |a, b| a ^ b);
        let (x, y) = (pick(), pick());
        prop_assert!(span.contains(x) && span.contains(y) && span.contains(x ^ y));
    }

    #[test]
    fn structural_group_tests_match_definitions(t in 1u32..4, seed in any::<u64>()) {
        let s = s16();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sample_a(&s, t, &mut rng).unwrap();
        prop_assert!(in_a(&s, &g, t).unwrap());
        prop_assert!(in_a_definitional(&s, &g, t).unwrap());
        prop_assert_eq!(in_b(&s, &g, t).unwrap(), in_b_definitional(&s, &g, t).unwrap());
        let h = sample_b(&s, t, &mut rng).unwrap();
        prop_assert!(in_b(&s, &h, t).unwrap());
        prop_assert!(in_b_definitional(&s, &h, t).unwrap());
    }

    #[test]
    fn factorization_is_complete_and_idempotent(t in 1u32..4, seed in any::<u64>()) {
        let s = s16();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = sample_a(&s, t, &mut rng).unwrap();
        let (rep, h) = factor_mod_b(&s, &g, t).unwrap();
        prop_assert!(in_b(&s, &h, t).unwrap());
        prop_assert_eq!(rep.realize(&s).unwrap().compose(&h).unwrap(), g);
        let (again, rest) = factor_mod_b(&s, &rep.realize(&s).unwrap(), t).unwrap();
        prop_assert_eq!(&again, &rep);
        prop_assert!(rest.is_identity());
        let text = rep.to_string();
        prop_assert_eq!(text.parse::<DRep>().unwrap(), rep);
    }

    #[test]
    fn code_files_round_trip(
        len in 3u32..20,
        words in prop::collection::vec(any::<u64>(), 0..40),
        complete in any::<bool>(),
    ) {
        let code = CodeSet::from_raw_words(len, words.into_iter().map(|w| w & ((1 << len) - 1)));
        let file = CodeFile::new(code, complete);
        let text = file.serialize();
        let back: CodeFile = text.parse().unwrap();
        prop_assert_eq!(back.serialize(), text);
        prop_assert_eq!(back, file);
    }

    #[test]
    fn tree_files_round_trip(seed in any::<u64>(), mode in 0usize..3, n in prop::sample::select(vec![8u32, 16])) {
        let mode = [Mode::La1, Mode::La2, Mode::La3][mode];
        prop_assume!(!(n == 8 && mode == Mode::La3));
        let tree = sample_tree(Space::new(n).unwrap(), seed, mode).unwrap();
        let text = serialize_tree(&tree);
        let back = parse_tree(&text).unwrap();
        prop_assert_eq!(serialize_tree(&back), text);
        prop_assert_eq!(back, tree);
    }
}

#[test]
fn a_sets_follow_the_recursion() {
    let s = s16();
    for t in 2..4 {
        let vt = CodeSet::from_words(16, &v_set(&s, t).unwrap()).unwrap();
        let expected = sum_set(&vt, &a_enumerate(&s, t - 1).unwrap());
        assert_eq!(a_enumerate(&s, t).unwrap(), expected);
    }
}

#[test]
fn a_sets_sit_in_their_closures_with_index_two_to_the_t() {
    let s = s16();
    for t in 1..3 {
        let a = a_enumerate(&s, t).unwrap();
        let th = theta(&s, &a).unwrap();
        assert!(a.iter().all(|x| th.contains(x)));
        assert_eq!(th.cardinality(), a.cardinality() << t);
    }
}

#[test]
fn counts_sit_between_the_bounds() {
    for n in [16, 32, 64] {
        let h = historical_bounds(n).unwrap();
        let e = k_la_exact_log2(n).unwrap();
        let u = k_la_upper_log2(n).unwrap();
        assert!(
            h.vasilev < h.refined_lower && h.refined_lower < e && e <= u,
            "n={n}"
        );
    }
}
