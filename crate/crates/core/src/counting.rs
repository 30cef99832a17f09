//! Exact evaluation of the LA code counts and the bounds they are compared
//! with.
//!
//! Counts are products of powers base^exponent with exact big-integer bases.
//! Values are materialized up to length 32; log2 values come from the exact
//! bases at every length, which keeps length 64 (about 2^26 bits) in reach.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::isometries::{d_size, group_orders};
use crate::scaffold::v_len;
use crate::word::Space;

/// Largest length whose counts are materialized as integers.
pub const EXACT_MAX_N: u32 = 32;

/// A base-2 logarithm.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogValue(pub f64);

impl LogValue {
    pub fn log2(self) -> f64 {
        self.0
    }
}

/// Rendered as `2^x` with two decimals.
impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2^{:.2}", self.0)
    }
}

/// log2 of a positive integer from its bit length and leading 64 bits.
pub fn log2_big(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "log2 of zero");
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().expect("at most 64 bits");
    (top as f64).log2() + shift as f64
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

fn binomial(n: u64, k: u64) -> BigUint {
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn counting_space(n: u32) -> Result<Space> {
    let s = Space::new(n)?;
    if s.m() < 4 {
        return Err(Error::InvalidLength(n));
    }
    Ok(s)
}

/// `base^exponent` with an exponent that is a power of two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Power {
    pub base: BigUint,
    pub log2_exponent: u32,
}

impl Power {
    pub fn log2(&self) -> f64 {
        log2_big(&self.base) * (self.log2_exponent as f64).exp2()
    }

    pub fn value(&self) -> BigUint {
        let mut v = self.base.clone();
        for _ in 0..self.log2_exponent {
            v = &v * &v;
        }
        v
    }
}

/// log2 of ∏_{i=lo}^{m-1} |V^i|.
fn log2_v_product(s: &Space, lo: u32) -> u32 {
    (lo..s.m()).map(|i| s.width(i) - 1).sum()
}

/// Factors of the exact count: |𝒟^{m-1}| and, for t = 1..m-2,
/// (|𝒟^t|^{|V^{t+1}|} - |𝒟^t|·|V^{t+1}|)^{|V^{t+2}|⋯|V^{m-1}|}.
pub fn k_la_exact_factors(n: u32) -> Result<Vec<Power>> {
    let s = counting_space(n)?;
    let m = s.m();
    let mut out = vec![Power {
        base: d_size(&s, m - 1)?,
        log2_exponent: 0,
    }];
    for t in 1..=m - 2 {
        let d = d_size(&s, t)?;
        let v = v_len(&s, t + 1);
        let base = d.pow(v as u32) - &d * v;
        out.push(Power {
            base,
            log2_exponent: log2_v_product(&s, t + 2),
        });
    }
    Ok(out)
}

/// Factors of the upper bound: |𝒟^{m-1}| and |𝒟^t|^{|V^{t+1}|⋯|V^{m-1}|}.
pub fn k_la_upper_factors(n: u32) -> Result<Vec<Power>> {
    let s = counting_space(n)?;
    let m = s.m();
    let mut out = vec![Power {
        base: d_size(&s, m - 1)?,
        log2_exponent: 0,
    }];
    for t in 1..=m - 2 {
        out.push(Power {
            base: d_size(&s, t)?,
            log2_exponent: log2_v_product(&s, t + 1),
        });
    }
    Ok(out)
}

fn materialize(n: u32, factors: Vec<Power>) -> Result<BigUint> {
    if n > EXACT_MAX_N {
        return Err(Error::Unsupported(format!(
            "materializing a count of about 2^{:.0} at length {n}",
            factors.iter().map(Power::log2).sum::<f64>()
        )));
    }
    Ok(factors.iter().map(Power::value).product())
}

/// Number of distinct codes from nondegenerate trees.
pub fn k_la_exact(n: u32) -> Result<BigUint> {
    materialize(n, k_la_exact_factors(n)?)
}

/// Upper bound on the number of codes from representative trees.
pub fn k_la_upper(n: u32) -> Result<BigUint> {
    materialize(n, k_la_upper_factors(n)?)
}

pub fn k_la_exact_log2(n: u32) -> Result<LogValue> {
    Ok(LogValue(
        k_la_exact_factors(n)?.iter().map(Power::log2).sum(),
    ))
}

pub fn k_la_upper_log2(n: u32) -> Result<LogValue> {
    Ok(LogValue(
        k_la_upper_factors(n)?.iter().map(Power::log2).sum(),
    ))
}

/// log2(exact) - log2(upper), summed factor by factor so the difference
/// keeps full precision.
pub fn exact_upper_gap(n: u32) -> Result<f64> {
    let exact = k_la_exact_factors(n)?;
    let upper = k_la_upper_factors(n)?;
    let s = counting_space(n)?;
    let mut gap = 0.0;
    for (t, (e, u)) in (0u32..).zip(exact.iter().zip(&upper)).skip(1) {
        // e.base / u.base^{|V^{t+1}|} = 1 - |V^{t+1}| / |𝒟^t|^{|V^{t+1}| - 1}
        let v = v_len(&s, t + 1);
        let d_pow = u.base.pow((v - 1) as u32);
        let rel = (BigUint::from(v) << 64u32) / d_pow;
        let x = rel.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(64);
        gap += (-x).ln_1p() / std::f64::consts::LN_2 * (e.log2_exponent as f64).exp2();
    }
    Ok(gap)
}

/// log2 of the three classical bounds on the number of perfect codes of
/// length n - 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HistoricalBounds {
    /// Product of 2^{2^{N - log N - 1}} over N = n/2, n/4, …, 2.
    pub vasilev: LogValue,
    /// 2^{2^{n/2 - log(n/2) - 1}} · 3^{2^{n/4 - 1}} · 2^{2^{n/4 - log(n/4) - 1}}.
    pub refined_lower: LogValue,
    /// 2^{2^{N - 1.5 log N + log ln(eN)}} with N = n.
    pub upper_n: LogValue,
    /// The same expression with N = n - 1.
    pub upper_n_minus_1: LogValue,
}

fn upper_expression(big_n: f64) -> f64 {
    (big_n - 1.5 * big_n.log2() + (1.0 + big_n.ln()).log2()).exp2()
}

pub fn historical_bounds(n: u32) -> Result<HistoricalBounds> {
    let s = counting_space(n)?;
    let m = s.m() as i32;
    let term = |log_big_n: i32| 2f64.powi((1i32 << log_big_n) - log_big_n - 1);
    let vasilev = (1..m).map(|k| term(m - k)).sum();
    let refined = term(m - 1) + 2f64.powi((n / 4) as i32 - 1) * 3f64.log2() + term(m - 2);
    Ok(HistoricalBounds {
        vasilev: LogValue(vasilev),
        refined_lower: LogValue(refined),
        upper_n: LogValue(upper_expression(n as f64)),
        upper_n_minus_1: LogValue(upper_expression(n as f64 - 1.0)),
    })
}

/// Lower bounds on nonequivalent codes: K̃/(n!·2^{n-5}) for extended codes
/// and K̃/((n-1)!·2^{n-5}) for perfect codes. Negative values are kept.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonequivalenceBounds {
    pub extended: LogValue,
    pub punctured: LogValue,
}

pub fn nonequivalence_bounds(n: u32) -> Result<NonequivalenceBounds> {
    let k = k_la_exact_log2(n)?.0;
    let n64 = n as u64;
    let tail = n as f64 - 5.0;
    Ok(NonequivalenceBounds {
        extended: LogValue(k - log2_big(&factorial(n64)) - tail),
        punctured: LogValue(k - log2_big(&factorial(n64 - 1)) - tail),
    })
}

/// One factor of the expansion of the upper bound, for k = 2^t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionTerm {
    pub k: u32,
    pub log2: f64,
}

/// Factors (2·2^{-n/k}·C(k, k/2)^{n/k})^{2^{n/k - log(n/k) - 1}} for
/// k = 2, 4, …, n/4, and separately log2 |𝒟^{m-1}| = log2(n!/(6((n/4)!)^4)).
pub fn asymptotic_expansion(n: u32) -> Result<(Vec<ExpansionTerm>, f64)> {
    let s = counting_space(n)?;
    let m = s.m();
    let terms = (1..=m - 2)
        .map(|t| {
            let k = 1u32 << t;
            let cols = n / k;
            let log_cols = m - t;
            let per_column = log2_big(&binomial(k as u64, (k / 2) as u64)) - 1.0;
            let base = 1.0 + cols as f64 * per_column;
            let exponent = 2f64.powi(cols as i32 - log_cols as i32 - 1);
            ExpansionTerm {
                k,
                log2: base * exponent,
            }
        })
        .collect();
    let n64 = n as u64;
    let top = log2_big(&factorial(n64)) - 6f64.log2() - 4.0 * log2_big(&factorial(n64 / 4));
    Ok((terms, top))
}

/// |𝒟^t| from the group orders, |𝒜^t| / |ℬ^t|.
pub fn d_size_from_orders(n: u32, t: u32) -> Result<BigUint> {
    let s = Space::new(n)?;
    let (a, b) = group_orders(&s, t)?;
    if !(&a % &b).is_zero() {
        return Err(Error::Unsupported("group orders do not divide".into()));
    }
    Ok(a / b)
}
