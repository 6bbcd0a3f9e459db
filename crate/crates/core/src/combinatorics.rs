//! Exact integer combinatorics.
//!
//! Every count used by the entropy formulas lives here: i-permutations
//! `P(n, i)`, binomials `C(n, i)`, the arrangement count
//! `F(i) = Σ_k P(i, k)` and the maximum-entropy normalizer
//! `Σ_i P(n, i)(F(i) − 1)`. All results are [`BigCount`]s; nothing in this
//! module touches floating point except [`BigCount::ln`] at the very end.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Sub};
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative integer.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// Nearest `f64`, or `+inf` when the value is beyond `f64::MAX`.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Natural logarithm, accurate to double precision for any magnitude.
    ///
    /// Returns `-inf` for zero.
    pub fn ln(&self) -> f64 {
        if self.0.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.0.bits();
        if bits <= 1000 {
            return self.to_f64().ln();
        }
        // Keep the top 64 significant bits and account for the rest as a power of two.
        let shift = bits - 64;
        let mantissa = (&self.0 >> shift).to_f64().expect("64-bit value fits in f64");
        mantissa.ln() + shift as f64 * std::f64::consts::LN_2
    }

    /// Difference, or `None` if it would be negative.
    pub fn checked_sub(&self, rhs: &BigCount) -> Option<BigCount> {
        if self.0 >= rhs.0 {
            Some(BigCount(&self.0 - &rhs.0))
        } else {
            None
        }
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<usize> for BigCount {
    fn from(v: usize) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl PartialEq<u64> for BigCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl Add for BigCount {
    type Output = BigCount;
    fn add(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a BigCount> for BigCount {
    type Output = BigCount;
    fn add(self, rhs: &'a BigCount) -> BigCount {
        BigCount(self.0 + &rhs.0)
    }
}

impl<'a> Mul<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn mul(self, rhs: &'a BigCount) -> BigCount {
        BigCount(&self.0 * &rhs.0)
    }
}

impl Mul for BigCount {
    type Output = BigCount;
    fn mul(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 * rhs.0)
    }
}

/// Panics on underflow; use [`BigCount::checked_sub`] when that is possible.
impl Sub<u64> for BigCount {
    type Output = BigCount;
    fn sub(self, rhs: u64) -> BigCount {
        BigCount(self.0 - BigUint::from(rhs))
    }
}

impl Sum for BigCount {
    fn sum<I: Iterator<Item = BigCount>>(iter: I) -> BigCount {
        iter.fold(BigCount::zero(), |acc, x| acc + x)
    }
}

// factorials[k] = k!, grown on demand.
static FACTORIALS: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

fn factorial_uncached(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `n!`, served from a process-wide memo table.
pub fn factorial(n: usize) -> BigCount {
    if let Ok(table) = FACTORIALS.read() {
        if let Some(v) = table.get(n) {
            return BigCount(v.clone());
        }
    }
    let Ok(mut table) = FACTORIALS.write() else {
        // Poisoned lock: fall back to direct computation.
        return BigCount(factorial_uncached(n));
    };
    if table.is_empty() {
        table.push(BigUint::one());
    }
    while table.len() <= n {
        let k = table.len();
        let next = &table[k - 1] * BigUint::from(k);
        table.push(next);
    }
    BigCount(table[n].clone())
}

fn check_le(n: usize, i: usize, op: &str) -> Result<()> {
    if i > n {
        Err(Error::domain(format!("{op}(n = {n}, i = {i}) requires i <= n")))
    } else {
        Ok(())
    }
}

/// `P(n, i) = n! / (n − i)!`, the number of ordered i-tuples of distinct elements.
pub fn permutation_count(n: usize, i: usize) -> Result<BigCount> {
    check_le(n, i, "permutation_count")?;
    Ok(BigCount(factorial(n).0 / factorial(n - i).0))
}

/// `C(n, i) = n! / (i! (n − i)!)`.
pub fn combination_count(n: usize, i: usize) -> Result<BigCount> {
    check_le(n, i, "combination_count")?;
    let k = i.min(n - i);
    let mut acc = BigUint::one();
    for j in 0..k {
        // acc = C(n, j) here, so the division is exact.
        acc = acc * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    Ok(BigCount(acc))
}

/// `F(i) = Σ_{k=0}^{i} P(i, k)`: the number of ordered arrangements of all
/// subsets of an i-set, the empty arrangement included.
pub fn f_sum(i: usize) -> BigCount {
    // F(0) = 1 and F(i) = i·F(i−1) + 1.
    let mut acc = BigUint::one();
    for k in 1..=i {
        acc = acc * BigUint::from(k) + BigUint::one();
    }
    BigCount(acc)
}

/// `F(i)` when element order is ignored: `Σ_{k=0}^{i} C(i, k) = 2^i`.
pub fn f_sum_combinatorial(i: usize) -> BigCount {
    BigCount(BigUint::one() << i)
}

/// The permutation count once events are restricted to at most one element:
/// 1 for `i = 0`, `n` for `i = 1`, 0 otherwise. Defined for `n ≥ 1` only.
pub fn degenerate_permutation_count(n: usize, i: usize) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::domain("degenerate_permutation_count is defined for n >= 1 only"));
    }
    Ok(match i {
        0 => BigCount::one(),
        1 => BigCount::from(n),
        _ => BigCount::zero(),
    })
}

/// `Σ_{i=1}^{n} P(n, i)(F(i) − 1)`, the normalizer of the maximum-entropy PMF.
pub fn rps_normalizer(n: usize) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::domain("rps_normalizer requires n >= 1"));
    }
    let mut total = BigUint::zero();
    let mut f = BigUint::one(); // F(i−1)
    let mut p = BigUint::one(); // P(n, i−1)
    for i in 1..=n {
        f = f * BigUint::from(i) + BigUint::one();
        p *= BigUint::from(n - i + 1);
        total += &p * (&f - BigUint::one());
    }
    Ok(BigCount(total))
}

/// `Σ_{i=1}^{n} C(n, i)(2^i − 1)`, the maximum-Deng-entropy normalizer.
///
/// Equals `3^n − 2^n`.
pub fn deng_normalizer(n: usize) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::domain("deng_normalizer requires n >= 1"));
    }
    let mut total = BigCount::zero();
    for i in 1..=n {
        let c = combination_count(n, i)?;
        total = total + &c * &(f_sum_combinatorial(i) - 1);
    }
    Ok(total)
}

/// `Σ_{i=1}^{n} C(n, i)(F(i) − 1)` with `F(i) = Σ_{k=0}^{i} C(i, k)` summed
/// term by term: the RPS normalizer once element order is ignored.
pub fn order_ignored_normalizer(n: usize) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::domain("order_ignored_normalizer requires n >= 1"));
    }
    let mut total = BigCount::zero();
    for i in 1..=n {
        let mut f = BigCount::zero();
        for k in 0..=i {
            f = f + combination_count(i, k)?;
        }
        total = total + &combination_count(n, i)? * &(f - 1);
    }
    Ok(total)
}

/// `Σ_{i=1}^{n} P̃(n, i)·i`, the order-free singleton normalizer; always `n`.
pub fn singleton_normalizer(n: usize) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::domain("singleton_normalizer requires n >= 1"));
    }
    let mut total = BigCount::zero();
    for i in 1..=n {
        // F(i) under P̃ is i + 1, so F(i) − 1 = i.
        total = total + &degenerate_permutation_count(n, i)? * &BigCount::from(i);
    }
    Ok(total)
}
