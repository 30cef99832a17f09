//! Brute-force oracle suites at lengths 8 and 16: closed forms against
//! definitional computations, representative counts, degeneracy counts,
//! the exact count and end-to-end construction.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{distinct, verify_extended_perfect};
use crate::codeset::CodeSet;
use crate::components::degenerate_raw;
use crate::construction::{build_code, sample_tree, AssignmentTree, Mode};
use crate::counting::{d_size_from_orders, k_la_exact};
use crate::error::{Error, Result};
use crate::isometries::{d_size, enumerate_d, factor_mod_b, in_b, sample_a, DRep, Isometry};
use crate::scaffold::{
    a_enumerate, b_membership, hamming_code, omega_a_membership, sum_set, theta,
    theta_a_membership, v_raw,
};
use crate::word::{neighborhood, Space};

/// Largest number of collections enumerated by the degeneracy suite.
const COLLECTION_BUDGET: u64 = 1 << 20;
/// Largest representative set checked pairwise for coset distinctness.
const PAIRWISE_BUDGET: u64 = 1 << 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            _ => Err(Error::Unsupported(format!("selftest level {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} ({} ms): {}",
            self.name, self.millis, self.detail
        )
    }
}

type Outcome = Result<(bool, String)>;

fn timed(name: &'static str, f: impl FnOnce() -> Outcome) -> Check {
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    Check {
        name,
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

/// Runs every suite for the given length, in a fixed order.
pub fn run(n: u32, level: Level) -> Result<Vec<Check>> {
    if n != 8 && n != 16 {
        return Err(Error::Unsupported(format!("selftest at length {n}")));
    }
    let s = Space::new(n)?;
    let full = level == Level::Full;
    let mut out = vec![
        timed("closure-equivalence", || {
            closure_equivalence(&s, if full { 200 } else { 20 })
        }),
        timed("level-sets", || level_sets(&s)),
        timed("b-sets", || b_sets(&s)),
    ];
    let mut nondegenerate = Vec::new();
    out.push(timed("degenerate-collections", || {
        degenerate_collections(&s, &mut nondegenerate)
    }));
    out.push(timed("representatives", || representatives(&s, full)));
    if s.m() >= 4 {
        out.push(timed("exact-count", || exact_count(&s, &nondegenerate)));
    }
    if full {
        out.push(timed("factorization", || factorization(&s, 300)));
        out.push(timed("construction", || construction(&s, 10)));
    }
    Ok(out)
}

fn random_even_set(s: &Space, size: usize, rng: &mut ChaCha8Rng) -> CodeSet {
    let mask = s.full_mask();
    CodeSet::from_raw_words(
        s.n(),
        (0..size).map(|_| {
            let x = rng.gen::<u64>() & mask;
            x ^ (x.count_ones() as u64 & 1)
        }),
    )
}

/// Ω(S) = Ω(S') exactly when Θ(S) = Θ(S'), on pairs built to hit both
/// outcomes.
fn closure_equivalence(s: &Space, pairs: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a1 = a_enumerate(s, 1)?;
    let mut equal_omegas = 0;
    for i in 0..pairs {
        let base = if i % 5 == 0 {
            a1.clone()
        } else {
            random_even_set(s, 1 + i % 4, &mut rng)
        };
        let other = match i % 3 {
            0 => theta(s, &base)?,
            1 => {
                let mut o = base.clone();
                let extra = random_even_set(s, 1, &mut rng);
                o.insert(extra.iter().next().unwrap_or(0));
                o
            }
            _ => random_even_set(s, 1 + i % 4, &mut rng),
        };
        let same_omega = neighborhood(&base) == neighborhood(&other);
        let same_theta = theta(s, &base)? == theta(s, &other)?;
        if same_omega != same_theta {
            return Ok((
                false,
                format!("pair {i}: Ω equal {same_omega}, Θ equal {same_theta}"),
            ));
        }
        equal_omegas += same_omega as usize;
    }
    Ok((
        true,
        format!("{pairs} pairs, {equal_omegas} with equal neighborhoods"),
    ))
}

/// Closed-form Ω(A^t) and Θ(A^t) against neighborhoods and closures of the
/// enumerated A^t, with |Ω| = n|A^t| and |Θ| = 2^t|A^t| (all even words at
/// the top level).
fn level_sets(s: &Space) -> Outcome {
    let n = s.n();
    let mut sizes = Vec::new();
    for t in 1..s.m() {
        let a = a_enumerate(s, t)?;
        let omega = neighborhood(&a);
        let theta_def = theta(s, &a)?;
        for x in 0..1u64 << n {
            let w = s.word(x);
            if x.count_ones() % 2 == 1 {
                if omega_a_membership(s, &w, t)? != omega.contains(x) {
                    return Ok((false, format!("Ω(A^{t}) differs at {w}")));
                }
            } else if theta_a_membership(s, &w, t)? != theta_def.contains(x) {
                return Ok((false, format!("Θ(A^{t}) differs at {w}")));
            }
        }
        let expected_theta = if t < s.m() - 1 {
            a.cardinality() << t
        } else {
            1 << (n - 1)
        };
        if omega.cardinality() != n as u64 * a.cardinality()
            || theta_def.cardinality() != expected_theta
        {
            return Ok((false, format!("cardinalities at t={t}")));
        }
        sizes.push(format!(
            "t={t}: |Ω|={} |Θ|={}",
            omega.cardinality(),
            theta_def.cardinality()
        ));
    }
    Ok((true, sizes.join(", ")))
}

/// Closed-form B^t against V^t + Θ(A^{t-1}).
fn b_sets(s: &Space) -> Outcome {
    let mut sizes = Vec::new();
    for t in 2..s.m() {
        let vt = CodeSet::from_raw_words(s.n(), v_raw(s, t));
        let def = sum_set(&vt, &theta(s, &a_enumerate(s, t - 1)?)?);
        for x in (0..1u64 << s.n()).filter(|x| x.count_ones() % 2 == 0) {
            if b_membership(s, &s.word(x), t)? != def.contains(x) {
                return Ok((false, format!("B^{t} differs at {}", s.word(x))));
            }
        }
        sizes.push(format!("t={t}: |B|={}", def.cardinality()));
    }
    Ok((true, sizes.join(", ")))
}

fn realize_all(s: &Space, reps: &[DRep]) -> Result<Vec<Isometry>> {
    reps.iter().map(|r| r.realize(s)).collect()
}

fn small_d_size(s: &Space, t: u32) -> Result<Option<u64>> {
    Ok(u64::try_from(d_size(s, t)?).ok())
}

/// Exhaustive degeneracy counts over all collections of representatives
/// indexed by V^{t+1}; the expected count is |𝒟^t|·|V^{t+1}|. Records the
/// nondegenerate counts for the exact-count suite.
fn degenerate_collections(s: &Space, nondegenerate: &mut Vec<(u32, u64)>) -> Outcome {
    let mut notes = Vec::new();
    for t in 1..s.m() - 1 {
        let l = v_raw(s, t + 1);
        let Some(d) = small_d_size(s, t)? else {
            continue;
        };
        let total = (d as u128).pow(l.len() as u32);
        if total > COLLECTION_BUDGET as u128 {
            notes.push(format!("t={t}: {total} collections skipped"));
            continue;
        }
        let isos = realize_all(s, &enumerate_d(s, t)?.collect::<Vec<_>>())?;
        let mut digits = vec![0usize; l.len()];
        let mut degenerate = 0u64;
        for _ in 0..total {
            let maps: Vec<&Isometry> = digits.iter().map(|&i| &isos[i]).collect();
            degenerate += degenerate_raw(&l, &maps) as u64;
            for dgt in digits.iter_mut() {
                *dgt += 1;
                if *dgt < isos.len() {
                    break;
                }
                *dgt = 0;
            }
        }
        let expected = d * l.len() as u64;
        if degenerate != expected {
            return Ok((
                false,
                format!("t={t}: {degenerate} degenerate, expected {expected}"),
            ));
        }
        nondegenerate.push((t, total as u64 - degenerate));
        notes.push(format!("t={t}: {degenerate} of {total}"));
    }
    Ok((true, notes.join(", ")))
}

/// Representative counts against the closed form and the group orders, and
/// pairwise coset distinctness where the set is small.
fn representatives(s: &Space, full: bool) -> Outcome {
    let mut notes = Vec::new();
    for t in 1..s.m() {
        let size = d_size(s, t)?;
        if size != d_size_from_orders(s.n(), t)? {
            return Ok((
                false,
                format!("t={t}: closed form disagrees with group orders"),
            ));
        }
        let small = u64::try_from(&size).ok().filter(|&d| d <= PAIRWISE_BUDGET);
        if let Some(d) = small {
            let reps: Vec<DRep> = enumerate_d(s, t)?.collect();
            if reps.len() as u64 != d {
                return Ok((
                    false,
                    format!("t={t}: enumerated {}, expected {d}", reps.len()),
                ));
            }
            let isos = realize_all(s, &reps)?;
            for (i, a) in isos.iter().enumerate() {
                let inv = a.invert();
                for (j, b) in isos.iter().enumerate() {
                    if in_b(s, &inv.compose(b)?, t)? != (i == j) {
                        return Ok((false, format!("t={t}: cosets of {i} and {j}")));
                    }
                }
            }
            notes.push(format!("t={t}: {d} pairwise distinct"));
        } else if full {
            let count = enumerate_d(s, t)?.count() as u64;
            if BigUint::from(count) != size {
                return Ok((false, format!("t={t}: streamed {count}, expected {size}")));
            }
            notes.push(format!("t={t}: {count} streamed"));
        } else {
            notes.push(format!("t={t}: {size} by formula"));
        }
    }
    Ok((true, notes.join(", ")))
}

/// The exact count against the product of exhaustive nondegenerate counts.
fn exact_count(s: &Space, nondegenerate: &[(u32, u64)]) -> Outcome {
    let m = s.m();
    let exact = k_la_exact(s.n())?;
    if nondegenerate.len() as u32 != m - 2 {
        return Ok((true, format!("{exact}; exhaustive cross-check skipped")));
    }
    let mut product = d_size(s, m - 1)?;
    for &(t, count) in nondegenerate {
        let exponent: u64 = (t + 2..m).map(|i| v_raw(s, i).len() as u64).product();
        product *= BigUint::from(count).pow(exponent as u32);
    }
    Ok((
        product == exact,
        format!("{exact} vs exhaustive product {product}"),
    ))
}

/// Random elements of 𝒜^t factor as a representative times an element of ℬ^t.
fn factorization(s: &Space, samples: usize) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for t in 1..s.m() {
        for _ in 0..samples {
            let g = sample_a(s, t, &mut rng)?;
            let (rep, h) = factor_mod_b(s, &g, t)?;
            if !in_b(s, &h, t)? || rep.realize(s)?.compose(&h)? != g {
                return Ok((false, format!("t={t}: factorization of {g:?}")));
            }
        }
    }
    Ok((true, format!("{samples} samples per level")))
}

/// The identity tree gives the Hamming code; sampled trees give pairwise
/// distinct extended perfect codes.
fn construction(s: &Space, seeds: u64) -> Outcome {
    let h = hamming_code(s)?;
    if build_code(&AssignmentTree::identity(*s, Mode::La2)?)? != h {
        return Ok((false, "identity tree does not give the Hamming code".into()));
    }
    let mode = if s.m() >= 4 { Mode::La3 } else { Mode::La2 };
    let mut codes: Vec<CodeSet> = Vec::new();
    for seed in 0..seeds {
        let code = build_code(&sample_tree(*s, seed, mode)?)?;
        let report = verify_extended_perfect(&code)?;
        if !report.is_extended_perfect() {
            return Ok((false, format!("seed {seed}: {:?}", report.failures())));
        }
        codes.push(code);
    }
    if mode == Mode::La3 {
        for (i, a) in codes.iter().enumerate() {
            for b in &codes[i + 1..] {
                if !distinct(a, b)? {
                    return Ok((false, "two seeds gave the same code".into()));
                }
            }
        }
    }
    Ok((true, format!("{seeds} {mode} codes verified")))
}
