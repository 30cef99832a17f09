//! Components of order t, μ-components, bold components and degenerate
//! collections of local automorphisms.

use rayon::prelude::*;

use crate::codeset::CodeSet;
use crate::error::{Error, Result};
use crate::isometries::{Isometry, PermTable};
use crate::scaffold::{b_span, v_raw, LevelSetId, LevelSetKind, DEFINITIONAL_MAX_N};
use crate::word::{neighborhood, Space};

pub use crate::gf2::{affine_span, AffineSubspace};

/// Codewords probed by the sampled distance check above the definitional scale.
const DISTANCE_SAMPLES: u64 = 4096;

fn check_even(s: &Space, g: &CodeSet) -> Result<()> {
    if g.length() != s.n() {
        return Err(Error::LengthMismatch {
            left: g.length(),
            right: s.n(),
        });
    }
    match g.first_odd() {
        Some(x) => Err(Error::OddWord(s.word(x).to_string())),
        None => Ok(()),
    }
}

/// No codeword at distance 2 from any of an evenly spaced sample.
fn sampled_distance_at_least_4(s: &Space, g: &CodeSet) -> bool {
    let n = s.n();
    let stride = (g.cardinality() / DISTANCE_SAMPLES).max(1) as usize;
    let sample: Vec<u64> = g.iter().step_by(stride).collect();
    sample
        .par_iter()
        .all(|&x| (0..n).all(|i| (i + 1..n).all(|j| !g.contains(x ^ (1u64 << i) ^ (1u64 << j)))))
}

/// |G| = |A^t| and Ω(G) = Ω(A^t).
///
/// Up to length 16 the neighborhood is computed outright. Beyond that, G
/// is checked to lie in Θ(A^t) exactly and to have minimum distance 4 on a
/// sample of codewords.
pub fn is_component(s: &Space, g: &CodeSet, t: u32) -> Result<bool> {
    s.check_level(t, s.m() - 1)?;
    check_even(s, g)?;
    let a = LevelSetId::new(*s, LevelSetKind::A, t)?;
    if g.cardinality() != 1u64 << a.log2_cardinality() {
        return Ok(false);
    }
    if s.n() <= DEFINITIONAL_MAX_N {
        let omega = neighborhood(g);
        let target = LevelSetId::new(*s, LevelSetKind::OmegaA, t)?;
        return Ok(omega.cardinality() == 1u64 << target.log2_cardinality()
            && omega.iter().all(|x| target.contains(x)));
    }
    let theta = LevelSetId::new(*s, LevelSetKind::ThetaA, t)?;
    if !g.par_iter().all(|x| theta.contains(x)) {
        return Ok(false);
    }
    Ok(sampled_distance_at_least_4(s, g))
}

/// Whether M = G + μ for a component G of order t, with μ supported on the
/// first 2^{m-t} coordinates.
pub fn is_mu_component(s: &Space, m: &CodeSet, t: u32, mu: &crate::word::Word) -> Result<bool> {
    s.check_word(mu)?;
    s.check_level(t, s.m() - 1)?;
    let full = s.full_mask();
    let w = s.width(t);
    let allowed = full & !(full >> w);
    if mu.bits() & !allowed != 0 {
        return Err(Error::ShiftSupport { width: w });
    }
    let shifted = m.translate(mu.bits());
    if !shifted.all_even() {
        return Ok(false);
    }
    is_component(s, &shifted, t)
}

/// Whether the component G of order t has ⟨G⟩ = B^t.
pub fn is_bold(s: &Space, g: &CodeSet, t: u32) -> Result<bool> {
    if !is_component(s, g, t)? {
        return Err(Error::NotComponent { t });
    }
    let span = affine_span(g)?;
    let b = b_span(s, t);
    Ok(span.dimension() == b.dimension()
        && b.contains(span.raw_offset())
        && span.raw_basis().iter().all(|&v| b.contains(v)))
}

/// Degeneracy of a collection indexed by the linear subspace `l`:
/// `collection[i]` belongs to `l[i]`. Degenerate means one shared
/// coordinate permutation and r ↦ r + v_r affine on `l`.
pub fn is_degenerate(s: &Space, l: &[crate::word::Word], collection: &[Isometry]) -> Result<bool> {
    if l.len() != collection.len() {
        return Err(Error::LengthMismatch {
            left: l.len() as u32,
            right: collection.len() as u32,
        });
    }
    for w in l {
        s.check_word(w)?;
    }
    for g in collection {
        if g.n() != s.n() {
            return Err(Error::LengthMismatch {
                left: g.n(),
                right: s.n(),
            });
        }
    }
    let raw: Vec<u64> = l.iter().map(|w| w.bits()).collect();
    check_subspace(&raw)?;
    let maps: Vec<&Isometry> = collection.iter().collect();
    Ok(degenerate_raw(&raw, &maps))
}

fn check_subspace(l: &[u64]) -> Result<()> {
    let mut sorted = l.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let span = AffineSubspace::linear(64, l.iter().copied());
    if sorted.len() != l.len()
        || sorted.first() != Some(&0)
        || (span.dimension() >= 64 || 1usize << span.dimension() != l.len())
    {
        return Err(Error::NotSubspace);
    }
    Ok(())
}

/// Degeneracy test on a valid index subspace `l` (which contains 0).
pub(crate) fn degenerate_raw(l: &[u64], maps: &[&Isometry]) -> bool {
    let perm = maps[0].perm_raw();
    if maps.iter().any(|g| g.perm_raw() != perm) {
        return false;
    }
    let zero = l
        .iter()
        .position(|&r| r == 0)
        .expect("index set contains 0");
    let v0 = maps[zero].shift_raw();
    // echelon rows keyed by leading bit: (r, v_r + v_0)
    let mut rows: [(u64, u64); 64] = [(0, 0); 64];
    for (&r, g) in l.iter().zip(maps) {
        let mut x = r;
        let mut phi = g.shift_raw() ^ v0;
        while x != 0 {
            let p = 63 - x.leading_zeros() as usize;
            let (b, f) = rows[p];
            if b == 0 {
                rows[p] = (x, phi);
                break;
            }
            x ^= b;
            phi ^= f;
        }
        if x == 0 && phi != 0 {
            return false;
        }
    }
    true
}

/// One step of the recursive union: ⋃_i (V^t[i] + maps[i](parts[i])).
pub fn assemble(s: &Space, t: u32, maps: &[Isometry], parts: &[CodeSet]) -> Result<CodeSet> {
    s.check_level(t, s.m() - 1)?;
    let vt = v_raw(s, t);
    if maps.len() != vt.len() || parts.len() != vt.len() {
        return Err(Error::LengthMismatch {
            left: maps.len().max(parts.len()) as u32,
            right: vt.len() as u32,
        });
    }
    let mut words = Vec::new();
    for ((&r, g), part) in vt.iter().zip(maps).zip(parts) {
        let table = PermTable::new(g);
        words.extend(part.iter().map(|x| r ^ table.apply(x)));
    }
    Ok(CodeSet::from_raw_words(s.n(), words))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometries::{enumerate_d, sample_a, sample_d, DRep};
    use crate::scaffold::{a_enumerate, hamming_code, v_set};
    use crate::word::Word;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s16() -> Space {
        Space::new(16).unwrap()
    }

    fn v1(s: &Space) -> CodeSet {
        CodeSet::from_raw_words(s.n(), v_raw(s, 1))
    }

    #[test]
    fn scaffold_sets_are_components() {
        let s = s16();
        for t in 1..4 {
            let a = a_enumerate(&s, t).unwrap();
            assert!(is_component(&s, &a, t).unwrap());
            let mut broken = a.clone();
            let victim = a.iter().nth(3).unwrap();
            broken.remove(victim);
            // {0, 1} is not in A^t but lies at distance 2 from members
            let outsider = s.coord_mask(0) | s.coord_mask(1);
            assert!(!a.contains(outsider));
            broken.insert(outsider);
            assert!(!is_component(&s, &broken, t).unwrap(), "t={t}");
        }
    }

    #[test]
    fn odd_member_is_an_error() {
        let s = s16();
        let odd = CodeSet::from_raw_words(16, [1u64]);
        assert!(matches!(is_component(&s, &odd, 1), Err(Error::OddWord(_))));
    }

    #[test]
    fn images_under_a_are_components() {
        let s = s16();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for t in 1..4 {
            let a = a_enumerate(&s, t).unwrap();
            for _ in 0..5 {
                let g = sample_a(&s, t, &mut rng).unwrap();
                assert!(is_component(&s, &g.apply_set(&a).unwrap(), t).unwrap());
            }
        }
    }

    #[test]
    fn sampled_check_at_32() {
        let s = Space::new(32).unwrap();
        let a = a_enumerate(&s, 2).unwrap();
        assert!(is_component(&s, &a, 2).unwrap());
        let mut broken = a.clone();
        broken.remove(a.iter().nth(5).unwrap());
        assert!(!is_component(&s, &broken, 2).unwrap());
    }

    #[test]
    fn mu_components() {
        let s = s16();
        for t in 2..4 {
            let prev = a_enumerate(&s, t - 1).unwrap();
            for r in v_set(&s, t).unwrap() {
                let shifted = prev.translate(r.bits());
                assert!(is_mu_component(&s, &shifted, t - 1, &r).unwrap());
            }
            let a = a_enumerate(&s, t).unwrap();
            assert!(is_mu_component(&s, &a, t, &Word::zero(16).unwrap()).unwrap());
            let e = Word::from_support(16, &[0]).unwrap();
            assert!(
                !is_mu_component(&s, &a.translate(e.bits()), t, &Word::zero(16).unwrap()).unwrap()
            );
        }
        let a1 = a_enumerate(&s, 1).unwrap();
        let far = Word::from_support(16, &[0, 9]).unwrap();
        assert!(matches!(
            is_mu_component(&s, &a1, 1, &far),
            Err(Error::ShiftSupport { width: 8 })
        ));
    }

    #[test]
    fn unions_of_mu_components_are_components() {
        let s = s16();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for t in 2..4 {
            let prev = a_enumerate(&s, t - 1).unwrap();
            for _ in 0..3 {
                let maps: Vec<Isometry> = (0..v_raw(&s, t).len())
                    .map(|_| sample_a(&s, t - 1, &mut rng).unwrap())
                    .collect();
                for (r, g) in v_raw(&s, t).iter().zip(&maps) {
                    let part = g.apply_set(&prev).unwrap().translate(*r);
                    assert!(is_mu_component(&s, &part, t - 1, &s.word(*r)).unwrap());
                }
                let parts = vec![prev.clone(); maps.len()];
                let g = assemble(&s, t, &maps, &parts).unwrap();
                assert!(is_component(&s, &g, t).unwrap());
            }
        }
    }

    #[test]
    fn affine_span_of_hamming_code() {
        let s = s16();
        let h = hamming_code(&s).unwrap();
        let span = affine_span(&h).unwrap();
        assert_eq!(span.dimension(), 11);
        assert!(span.is_linear());
    }

    #[test]
    fn boldness_of_scaffold_sets() {
        let s = s16();
        assert!(is_bold(&s, &a_enumerate(&s, 1).unwrap(), 1).unwrap());
        assert!(!is_bold(&s, &a_enumerate(&s, 2).unwrap(), 2).unwrap());
        let not_component = CodeSet::from_raw_words(16, [0u64]);
        assert!(matches!(
            is_bold(&s, &not_component, 2),
            Err(Error::NotComponent { t: 2 })
        ));
    }

    fn realize_all(s: &Space, reps: &[DRep]) -> Vec<Isometry> {
        reps.iter().map(|r| r.realize(s).unwrap()).collect()
    }

    /// Every collection over 𝒟^t indexed by V^{t+1}, as digit strings.
    fn all_collections(base: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
        (0..base.pow(len as u32)).map(move |mut code| {
            (0..len)
                .map(|_| {
                    let d = code % base;
                    code /= base;
                    d
                })
                .collect()
        })
    }

    #[test]
    fn degenerate_collection_counts() {
        let s = s16();
        for (t, total, expected) in [(1u32, 256usize, 16usize), (2, 26_244, 324)] {
            let isos = realize_all(&s, &enumerate_d(&s, t).unwrap().collect::<Vec<_>>());
            let l = v_raw(&s, t + 1);
            let mut count = 0;
            let mut seen = 0;
            for digits in all_collections(isos.len(), l.len()) {
                let maps: Vec<&Isometry> = digits.iter().map(|&d| &isos[d]).collect();
                count += degenerate_raw(&l, &maps) as usize;
                seen += 1;
            }
            assert_eq!(seen, total);
            assert_eq!(count, expected, "t={t}");
        }
    }

    #[test]
    fn constant_collection_is_degenerate() {
        let s = s16();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = sample_a(&s, 1, &mut rng).unwrap();
        let l = v_set(&s, 2).unwrap();
        assert!(is_degenerate(&s, &l, &vec![g; l.len()]).unwrap());
    }

    #[test]
    fn degeneracy_input_checks() {
        let s = s16();
        let l = v_set(&s, 2).unwrap();
        let id = Isometry::identity(16);
        assert!(is_degenerate(&s, &l[..3], &vec![id.clone(); 3]).is_err());
        assert!(is_degenerate(&s, &l, &vec![id; 3]).is_err());
    }

    #[test]
    fn two_point_collections_degenerate_iff_same_permutation() {
        let s = s16();
        let isos = realize_all(&s, &enumerate_d(&s, 2).unwrap().collect::<Vec<_>>());
        let l = v_raw(&s, 3);
        for a in &isos {
            for b in &isos {
                assert_eq!(degenerate_raw(&l, &[a, b]), a.perm_raw() == b.perm_raw());
            }
        }
    }

    #[test]
    fn affine_function_count() {
        // affine {0,1}-valued functions on V^{t+1}, counted by brute force
        let s = s16();
        for t in [2u32, 3] {
            let l = v_raw(&s, t);
            let mut affine = 0;
            for f in 0u64..1 << l.len() {
                let value = |r: u64| f >> l.iter().position(|&x| x == r).unwrap() & 1;
                let ok = l.iter().all(|&a| {
                    l.iter().all(|&b| {
                        l.iter()
                            .all(|&c| value(a) ^ value(b) ^ value(c) == value(a ^ b ^ c))
                    })
                });
                affine += ok as usize;
            }
            assert_eq!(affine, 2 * l.len());
        }
    }

    #[test]
    fn boldness_follows_nondegeneracy_at_order_2() {
        let s = s16();
        let isos = realize_all(&s, &enumerate_d(&s, 1).unwrap().collect::<Vec<_>>());
        let l = v_raw(&s, 2);
        let parts = vec![v1(&s); l.len()];
        let mut bold = 0;
        for digits in all_collections(2, l.len()) {
            let maps: Vec<Isometry> = digits.iter().map(|&d| isos[d].clone()).collect();
            let refs: Vec<&Isometry> = maps.iter().collect();
            let g = assemble(&s, 2, &maps, &parts).unwrap();
            let is_b = is_bold(&s, &g, 2).unwrap();
            assert_eq!(is_b, !degenerate_raw(&l, &refs));
            bold += is_b as usize;
        }
        assert_eq!(bold, 240);
    }

    fn random_bold_order2(s: &Space, rng: &mut ChaCha8Rng) -> CodeSet {
        let l = v_raw(s, 2);
        let parts = vec![v1(s); l.len()];
        loop {
            let maps: Vec<Isometry> = (0..l.len())
                .map(|_| sample_d(s, 1, rng).unwrap().realize(s).unwrap())
                .collect();
            let refs: Vec<&Isometry> = maps.iter().collect();
            if !degenerate_raw(&l, &refs) {
                return assemble(s, 2, &maps, &parts).unwrap();
            }
        }
    }

    #[test]
    fn boldness_follows_nondegeneracy_at_order_3() {
        let s = s16();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let l = v_raw(&s, 3);
        let isos = realize_all(&s, &enumerate_d(&s, 2).unwrap().collect::<Vec<_>>());
        for trial in 0..12 {
            let parts: Vec<CodeSet> = (0..2).map(|_| random_bold_order2(&s, &mut rng)).collect();
            let a = rng.gen_range(0..isos.len());
            // every third trial uses a constant collection
            let b = if trial % 3 == 0 {
                a
            } else {
                rng.gen_range(0..isos.len())
            };
            let maps = vec![isos[a].clone(), isos[b].clone()];
            let degenerate = degenerate_raw(&l, &[&maps[0], &maps[1]]);
            let g = assemble(&s, 3, &maps, &parts).unwrap();
            assert_eq!(is_bold(&s, &g, 3).unwrap(), !degenerate);
        }
    }

    #[test]
    fn distinct_pairs_give_distinct_images() {
        let s = s16();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let bold: Vec<CodeSet> = (0..4).map(|_| random_bold_order2(&s, &mut rng)).collect();
        for _ in 0..40 {
            let d1 = sample_d(&s, 2, &mut rng).unwrap();
            let d2 = sample_d(&s, 2, &mut rng).unwrap();
            let g1 = &bold[rng.gen_range(0..bold.len())];
            let g2 = &bold[rng.gen_range(0..bold.len())];
            if d1 == d2 {
                continue;
            }
            let i1 = d1.realize(&s).unwrap().apply_set(g1).unwrap();
            let i2 = d2.realize(&s).unwrap().apply_set(g2).unwrap();
            assert_ne!(i1, i2);
        }
    }
}
