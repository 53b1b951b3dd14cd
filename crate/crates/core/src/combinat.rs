//! Exact integer and rational combinatorics.
//!
//! Everything here is computed without rounding: big integers for counts,
//! reduced big rationals for the Bernoulli numbers.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};

pub type ExactInteger = BigInt;
pub type ExactRational = BigRational;

pub fn factorial(n: u32) -> ExactInteger {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// The shifted double factorial `(m-1)(m-3)...`, stopping at 2 for odd `m`
/// and at 1 for even `m`. Returns 1 for `m <= 1`.
///
/// This is not the usual `m(m-2)...`; `semi_factorial(6) == 15` and
/// `semi_factorial(7) == 48`.
pub fn semi_factorial(m: u32) -> ExactInteger {
    let mut acc = BigInt::one();
    let mut j = m as i64 - 1;
    while j >= 1 {
        acc *= j;
        j -= 2;
    }
    acc
}

/// `n choose k`, with the convention that it is 0 when `k > n`.
pub fn binomial(n: u32, k: u32) -> ExactInteger {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn generalized_binomial(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (a - i as f64) / (i as f64 + 1.0))
}

pub fn catalan(k: u32) -> ExactInteger {
    central_binomial(k) / (k + 1)
}

pub fn central_binomial(k: u32) -> ExactInteger {
    binomial(2 * k, k)
}

pub fn middle_binomial(k: u32) -> ExactInteger {
    binomial(k, k / 2)
}

/// Number of set partitions of a `k`-element set.
pub fn bell(k: u32) -> ExactInteger {
    let mut table: Vec<BigInt> = vec![BigInt::one()];
    for m in 0..k {
        let next = (0..=m).map(|s| binomial(m, s) * &table[(m - s) as usize]).sum();
        table.push(next);
    }
    table.pop().unwrap()
}

static BERNOULLI_MEMO: Mutex<Vec<BigRational>> = Mutex::new(Vec::new());

/// Bernoulli number `B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: u32) -> ExactRational {
    let mut memo = BERNOULLI_MEMO.lock().unwrap_or_else(|p| p.into_inner());
    while memo.len() <= n as usize {
        let m = memo.len() as u32;
        let value = if m == 0 {
            BigRational::one()
        } else {
            let sum: BigRational = memo
                .iter()
                .enumerate()
                .map(|(k, b)| b * BigRational::from_integer(binomial(m + 1, k as u32)))
                .sum();
            -sum / BigRational::from_integer(BigInt::from(m + 1))
        };
        memo.push(value);
    }
    memo[n as usize].clone()
}

/// `1^p + 2^p + ... + N^p` through the Bernoulli-number closed form.
pub fn power_sum(p: u32, n: u64) -> ExactInteger {
    let big_n = BigRational::from_integer(BigInt::from(n));
    let mut sum = BigRational::zero();
    for k in 0..=p {
        let mut term = BigRational::from_integer(binomial(p + 1, k)) * bernoulli(k);
        term *= num_traits::pow(big_n.clone(), (p + 1 - k) as usize);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    let value = sum / BigRational::from_integer(BigInt::from(p + 1));
    debug_assert!(value.is_integer());
    value.to_integer()
}

/// A bijection of `{1, ..., N}`, stored zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    /// Builds a permutation from its one-based image list.
    pub fn new(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i == 0 || i > n || seen[i - 1] {
                return invalid(format!("{images:?} is not a permutation of 1..={n}"));
            }
            seen[i - 1] = true;
        }
        Ok(Self(images.iter().map(|i| i - 1).collect()))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// The transposition of `i` and `j` (one-based) in `S_n`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i - 1, j - 1);
        Self(images)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Image of `i`, zero-based.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "permutations of different sizes");
        Self(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inversions(&self) -> usize {
        let p = &self.0;
        (0..p.len())
            .map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count())
            .sum()
    }

    pub fn fixed_points(&self) -> usize {
        self.0.iter().enumerate().filter(|(i, &p)| *i == p).count()
    }

    /// All of `S_n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut next = Some((0..n).collect::<Vec<_>>());
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut p = current.clone();
            if let Some(i) = (0..p.len().saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) {
                let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).unwrap();
                p.swap(i, j);
                p[i + 1..].reverse();
                next = Some(p);
            }
            Some(Permutation(current))
        })
    }
}

pub fn signature(sigma: &Permutation) -> i32 {
    if sigma.inversions().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Number of pairings of a `k`-element set.
pub fn count_pairings(k: u32) -> ExactInteger {
    if k % 2 == 1 {
        return BigInt::zero();
    }
    (1..=k / 2).fold(BigInt::one(), |acc, j| acc * (2 * j - 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Plain,
    Conjugate,
}

/// A word over the two colors; parses `◦`/`o` as plain and `•`/`x` as conjugate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ColoredWord(pub Vec<Color>);

impl ColoredWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count(&self, color: Color) -> usize {
        self.0.iter().filter(|&&c| c == color).count()
    }
}

impl FromStr for ColoredWord {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '◦' | 'o' | 'O' => Ok(Color::Plain),
                '•' | 'x' | 'X' => Ok(Color::Conjugate),
                other => invalid(format!("unexpected character {other:?} in colored word")),
            })
            .collect::<Result<Vec<_>>>()
            .map(ColoredWord)
    }
}

impl fmt::Display for ColoredWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            f.write_str(match c {
                Color::Plain => "◦",
                Color::Conjugate => "•",
            })?;
        }
        Ok(())
    }
}

/// Pairings of the word's positions in which every pair joins a plain
/// letter with a conjugate one.
pub fn count_matching_pairings(word: &ColoredWord) -> ExactInteger {
    let w = &word.0;
    count_perfect_matchings(w.len(), |i, j| w[i] != w[j])
}

/// Counts perfect matchings of `0..len` using only pairs accepted by `allowed`.
pub(crate) fn count_perfect_matchings(len: usize, allowed: impl Fn(usize, usize) -> bool) -> BigInt {
    assert!(len <= 64, "matching count limited to 64 positions");
    if len % 2 == 1 {
        return BigInt::zero();
    }
    let full = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    let mut memo = HashMap::new();
    matchings_from(full, &allowed, &mut memo)
}

fn matchings_from(
    free: u64,
    allowed: &impl Fn(usize, usize) -> bool,
    memo: &mut HashMap<u64, BigInt>,
) -> BigInt {
    if free == 0 {
        return BigInt::one();
    }
    if let Some(v) = memo.get(&free) {
        return v.clone();
    }
    let i = free.trailing_zeros() as usize;
    let rest = free & !(1u64 << i);
    let mut total = BigInt::zero();
    let mut scan = rest;
    while scan != 0 {
        let j = scan.trailing_zeros() as usize;
        scan &= scan - 1;
        if allowed(i, j) {
            total += matchings_from(rest & !(1u64 << j), allowed, memo);
        }
    }
    memo.insert(free, total.clone());
    total
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let (n, d) = (r.numer().abs(), r.denom().clone());
    let shift = n.bits() as i64 - d.bits() as i64;
    let scaled = if shift > 0 {
        BigRational::new(n, d << (shift as usize))
    } else {
        BigRational::new(n << ((-shift) as usize), d)
    };
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

pub(crate) fn int_to_f64(n: &BigInt) -> f64 {
    rational_to_f64(&BigRational::from_integer(n.clone()))
}
