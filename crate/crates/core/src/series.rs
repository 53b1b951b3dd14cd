//! Power series with truncation bounds, and the classical constants.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::combinat::{bernoulli, catalan, central_binomial, factorial, int_to_f64};
use crate::error::{domain, invalid, Error, Result};
use crate::Estimate;

/// How the tail of a series may be bounded after truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    /// Terms alternate in sign and shrink in modulus: the first omitted
    /// term bounds the tail.
    Alternating,
    /// `|c_{k+1}/c_k|` is non-increasing; once the term ratio drops below
    /// 1/2 a geometric bound applies.
    RatioDecreasing,
    /// Nothing is known; the tail bound is reported as `+inf`.
    Unknown,
}

type CoeffFn = dyn Fn(usize) -> f64 + Send + Sync;

#[derive(Clone)]
pub struct PowerSeries {
    coeff: Arc<CoeffFn>,
    radius: Option<f64>,
    tail: TailModel,
}

impl std::fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PowerSeries")
            .field("radius", &self.radius)
            .field("tail", &self.tail)
            .finish_non_exhaustive()
    }
}

impl PowerSeries {
    pub fn new(coeff: impl Fn(usize) -> f64 + Send + Sync + 'static) -> Self {
        Self { coeff: Arc::new(coeff), radius: None, tail: TailModel::Unknown }
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = Some(radius);
        self
    }

    pub fn with_tail(mut self, tail: TailModel) -> Self {
        self.tail = tail;
        self
    }

    pub fn from_coefficients(coeffs: Vec<f64>) -> Self {
        Self::new(move |k| coeffs.get(k).copied().unwrap_or(0.0))
    }

    pub fn exp() -> Self {
        Self::new(|k| (-ln_factorial(k)).exp()).with_tail(TailModel::RatioDecreasing)
    }

    pub fn sin() -> Self {
        Self::new(|k| match k % 4 {
            1 => (-ln_factorial(k)).exp(),
            3 => -(-ln_factorial(k)).exp(),
            _ => 0.0,
        })
        .with_tail(TailModel::RatioDecreasing)
    }

    pub fn cos() -> Self {
        Self::new(|k| match k % 4 {
            0 => (-ln_factorial(k)).exp(),
            2 => -(-ln_factorial(k)).exp(),
            _ => 0.0,
        })
        .with_tail(TailModel::RatioDecreasing)
    }

    pub fn geometric() -> Self {
        Self::new(|_| 1.0).with_radius(1.0)
    }

    pub fn coefficient(&self, k: usize) -> f64 {
        (self.coeff)(k)
    }

    pub fn radius(&self) -> Option<f64> {
        self.radius
    }
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

/// Sums the first `terms` terms at `x` and bounds what was left out.
pub fn eval_series(s: &PowerSeries, x: f64, terms: usize) -> Result<Estimate> {
    if let Some(r) = s.radius {
        if x.abs() >= r {
            return domain(format!("|x| = {} outside the radius of convergence {r}", x.abs()));
        }
    }
    let value = if x == 0.0 {
        if terms == 0 { 0.0 } else { s.coefficient(0) }
    } else {
        // Horner from the top keeps the rounding of small terms local.
        (0..terms).rev().fold(0.0, |acc, k| acc * x + s.coefficient(k))
    };
    let error = if x == 0.0 {
        if terms == 0 { s.coefficient(0).abs() } else { 0.0 }
    } else {
        tail_bound(s, x, terms)
    };
    Ok(Estimate { value, error })
}

fn tail_bound(s: &PowerSeries, x: f64, terms: usize) -> f64 {
    let term = |k: usize| s.coefficient(k) * x.powi(k as i32);
    match s.tail {
        TailModel::Unknown => f64::INFINITY,
        TailModel::Alternating => term(terms).abs(),
        TailModel::RatioDecreasing => {
            let nonzero: Vec<usize> = (terms..terms + 8).filter(|&k| s.coefficient(k) != 0.0).take(2).collect();
            match nonzero.as_slice() {
                [a, b] => {
                    let (ta, tb) = (term(*a).abs(), term(*b).abs());
                    let rho = if ta == 0.0 { 0.0 } else { tb / ta };
                    if rho < 0.5 {
                        ta / (1.0 - rho)
                    } else {
                        f64::INFINITY
                    }
                }
                _ => f64::INFINITY,
            }
        }
    }
}

/// Estimates the radius of convergence from `coeffs[..n]`, using the largest
/// `|c_k|^(1/k)` over the second half as a stand-in for the limsup.
///
/// Heuristic: when the root test values keep falling by more than a quarter
/// between the two halves, the coefficients are taken to decay faster than
/// any geometric sequence and `+inf` is returned.
pub fn convergence_radius(coeffs: &[f64], n: usize) -> Result<f64> {
    if n < 8 {
        return invalid("convergence_radius needs at least 8 coefficients");
    }
    if coeffs.len() < n {
        return invalid(format!("only {} coefficients supplied, {n} requested", coeffs.len()));
    }
    let root = |k: usize| coeffs[k].abs().powf(1.0 / k as f64);
    let window_max = |lo: usize, hi: usize| (lo.max(1)..hi).map(root).fold(0.0, f64::max);
    let late = window_max(n / 2, n);
    if late == 0.0 {
        return Ok(f64::INFINITY);
    }
    let early = window_max(n / 4, n / 2);
    if early > 0.0 && late < 0.75 * early {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / late)
}

/// Partial sum of `4(1 - 1/3 + 1/5 - ...)`, with the alternating-series bound.
pub fn pi_leibnitz(terms: usize) -> Result<Estimate> {
    if terms == 0 {
        return invalid("pi_leibnitz needs at least one term");
    }
    let sum: f64 = (0..terms)
        .rev()
        .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / (2 * k + 1) as f64)
        .sum();
    Ok(Estimate { value: 4.0 * sum, error: 4.0 / (2 * terms + 1) as f64 })
}

/// `1 + 1/4 + ... + 1/terms^2`, summed smallest first.
pub fn basel_sum(terms: usize) -> Result<f64> {
    if terms == 0 {
        return invalid("basel_sum needs at least one term");
    }
    Ok((1..=terms).rev().map(|k| 1.0 / (k as f64 * k as f64)).sum())
}

/// Bracket `(1/(n+1), 1/n)` for the omitted tail, from comparison with `∫dx/x²`.
pub fn basel_tail_bracket(terms: usize) -> (f64, f64) {
    let n = terms as f64;
    (1.0 / (n + 1.0), 1.0 / n)
}

/// Partial sum plus the midpoint of the tail bracket; the error is the half width.
pub fn basel_corrected(terms: usize) -> Result<Estimate> {
    let (lo, hi) = basel_tail_bracket(terms);
    Ok(Estimate { value: basel_sum(terms)? + 0.5 * (lo + hi), error: 0.5 * (hi - lo) })
}

/// `sum 1/k!` for `k < terms` with its geometric tail bound.
pub fn e_series(terms: usize) -> Result<Estimate> {
    if terms == 0 {
        return invalid("e_series needs at least one term");
    }
    let est = eval_series(&PowerSeries::exp(), 1.0, terms)?;
    Ok(est)
}

pub fn babylonian_sqrt(a: f64, tol: f64) -> Result<f64> {
    if !(a > 0.0) || !(tol > 0.0) {
        return domain(format!("babylonian_sqrt needs a > 0 and tol > 0, got a = {a}, tol = {tol}"));
    }
    let mut iterates = babylonian_iterates(a).take(2000);
    let mut x = iterates
        .find(|x| (x * x - a).abs() <= tol)
        .ok_or(Error::NonConvergence { what: "babylonian_sqrt", iterations: 2000 })?;
    // keep going while the iterates still decrease; they settle on the
    // correctly rounded root within a step or two
    for next in iterates {
        if next >= x {
            break;
        }
        x = next;
    }
    Ok(x)
}

/// The Babylonian iterates `x -> (x + a/x)/2` from `max(a, 1)`.
pub fn babylonian_iterates(a: f64) -> impl Iterator<Item = f64> {
    std::iter::successors(Some(a.max(1.0)), move |&x| Some(0.5 * (x + a / x)))
}

/// Coefficient of `x^(2k-1)` in the Laurent expansion of `coth x`.
pub fn coth_series_coeff(k: u32) -> BigRational {
    let four_k = BigInt::from(4u32).pow(k);
    bernoulli(2 * k) * BigRational::from_integer(four_k) / BigRational::from_integer(factorial(2 * k))
}

/// `sqrt(1 - 4t) = 1 - 2 sum_{k>=1} C_{k-1} t^k`, coefficients precomputed up to `terms`.
pub fn sqrt_one_minus_4t(terms: usize) -> PowerSeries {
    let coeffs: Vec<f64> = (0..terms.max(1))
        .map(|k| if k == 0 { 1.0 } else { -2.0 * int_to_f64(&catalan(k as u32 - 1)) })
        .collect();
    PowerSeries::from_coefficients(coeffs).with_radius(0.25)
}

/// `1/sqrt(1 - 4t) = sum D_k t^k`.
pub fn inv_sqrt_one_minus_4t(terms: usize) -> PowerSeries {
    let coeffs: Vec<f64> = (0..terms.max(1)).map(|k| int_to_f64(&central_binomial(k as u32))).collect();
    PowerSeries::from_coefficients(coeffs).with_radius(0.25)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn exp_series() {
        let e = eval_series(&PowerSeries::exp(), 1.0, 25).unwrap();
        assert!((e.value - std::f64::consts::E).abs() < 1e-15);
        assert!(e.error < 1e-20 && e.error > 0.0);
        let inv = eval_series(&PowerSeries::exp(), -1.0, 25).unwrap();
        assert!((inv.value - 1.0 / std::f64::consts::E).abs() < 1e-15);
        let few = eval_series(&PowerSeries::exp(), 1.0, 6).unwrap();
        assert!((few.value - std::f64::consts::E).abs() <= few.error);
    }

    #[test]
    fn value_at_origin_is_constant_term() {
        let s = PowerSeries::new(|k| (k + 3) as f64);
        let v = eval_series(&s, 0.0, 10).unwrap();
        assert_eq!(v.value, 3.0);
        assert_eq!(v.error, 0.0);
    }

    #[test]
    fn radius_is_enforced() {
        assert!(eval_series(&PowerSeries::geometric(), 1.0, 5).is_err());
        let g = eval_series(&PowerSeries::geometric(), 0.5, 60).unwrap();
        assert!((g.value - 2.0).abs() < 1e-15);
        assert!(g.error.is_infinite());
        assert!(eval_series(&sqrt_one_minus_4t(10), 0.25, 10).is_err());
    }

    #[test]
    fn alternating_tail() {
        let s = PowerSeries::new(|k| if k % 2 == 0 { 1.0 } else { -1.0 } / (k + 1) as f64)
            .with_radius(1.0 + 1e-9)
            .with_tail(TailModel::Alternating);
        let v = eval_series(&s, 1.0, 1000).unwrap();
        assert!((v.value - 2f64.ln()).abs() <= v.error);
    }

    #[test]
    fn radius_estimates() {
        let ones = vec![1.0; 40];
        assert!((convergence_radius(&ones, 40).unwrap() - 1.0).abs() < 1e-12);
        let pow2: Vec<f64> = (0..40).map(|k| 2f64.powi(k)).collect();
        assert!((convergence_radius(&pow2, 40).unwrap() - 0.5).abs() < 1e-12);
        let inv_fact: Vec<f64> = (0..40).map(|k| (-ln_factorial(k)).exp()).collect();
        assert!(convergence_radius(&inv_fact, 40).unwrap().is_infinite());
        assert!(convergence_radius(&[0.0; 16], 16).unwrap().is_infinite());
        let harmonic: Vec<f64> = (0..200).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        let r = convergence_radius(&harmonic, 200).unwrap();
        assert!((r - 1.0).abs() < 0.05, "{r}");
        assert!(convergence_radius(&ones, 4).is_err());
    }

    #[test]
    fn leibnitz() {
        let one = pi_leibnitz(1).unwrap();
        assert_eq!(one.value, 4.0);
        let many = pi_leibnitz(500).unwrap();
        assert!((many.value - std::f64::consts::PI).abs() <= many.error);
        assert!(many.error <= 4e-3);
        assert!(pi_leibnitz(0).is_err());
    }

    #[test]
    fn basel() {
        assert_eq!(basel_sum(1).unwrap(), 1.0);
        let target = std::f64::consts::PI.powi(2) / 6.0;
        for n in [10usize, 100, 1000] {
            let tail = target - basel_sum(n).unwrap();
            let (lo, hi) = basel_tail_bracket(n);
            assert!(lo < tail && tail < hi, "n = {n}");
        }
        let corrected = basel_corrected(1000).unwrap();
        assert!((corrected.value - target).abs() < 1e-6);
    }

    #[test]
    fn babylonian() {
        assert_eq!(babylonian_sqrt(4.0, 1e-12).unwrap(), 2.0);
        let r3 = babylonian_sqrt(3.0, 1e-12).unwrap();
        assert!((r3 - 1.7320508075688772).abs() < 1e-12);
        let r2 = babylonian_sqrt(2.0, 1e-14).unwrap();
        assert!((r2 * r2 - 2.0).abs() <= 1e-14);
        assert!(babylonian_sqrt(-1.0, 1e-6).is_err());
        assert!(babylonian_sqrt(2.0, 0.0).is_err());
    }

    // x/(e^x - 1) by power-series long division of 1 by (e^x - 1)/x
    fn bernoulli_generating_coeffs(n: usize) -> Vec<BigRational> {
        let d: Vec<BigRational> =
            (0..n).map(|k| BigRational::new(BigInt::one(), factorial(k as u32 + 1))).collect();
        let mut q = vec![BigRational::zero(); n];
        for k in 0..n {
            let mut r = if k == 0 { BigRational::one() } else { BigRational::zero() };
            for j in 0..k {
                r -= &q[j] * &d[k - j];
            }
            q[k] = r / &d[0];
        }
        q
    }

    #[test]
    fn coth_coefficients_by_long_division() {
        // coth x = 1/x + 2 * (x/(e^{2x}-1)) / x ... equivalently coefficient
        // of x^{2k-1} is 2^{2k} g_{2k} with g the x/(e^x-1) coefficients.
        let g = bernoulli_generating_coeffs(12);
        assert_eq!(g[1], BigRational::new((-1).into(), 2.into()));
        assert_eq!(g[2], BigRational::new(1.into(), 12.into()));
        assert_eq!(g[4], BigRational::new((-1).into(), 720.into()));
        for k in 0..5u32 {
            let oracle = &g[2 * k as usize] * BigRational::from_integer(BigInt::from(4u32).pow(k));
            assert_eq!(coth_series_coeff(k), oracle);
        }
        assert_eq!(coth_series_coeff(0), BigRational::one());
        assert_eq!(coth_series_coeff(1), BigRational::new(1.into(), 3.into()));
        assert_eq!(coth_series_coeff(2), BigRational::new((-1).into(), 45.into()));
    }

    #[test]
    fn sqrt_series() {
        let s = sqrt_one_minus_4t(120);
        assert_eq!(s.coefficient(0), 1.0);
        assert_eq!(s.coefficient(2), -2.0);
        assert_eq!(eval_series(&s, 0.0, 60).unwrap().value, 1.0);
        // at 60 terms the omitted tail is still about 4e-9 at t = 0.2
        let v60 = eval_series(&s, 0.2, 60).unwrap().value;
        assert!((v60 - 0.2f64.sqrt()).abs() < 1e-8);
        let v = eval_series(&s, 0.2, 120).unwrap().value;
        assert!((v - 0.2f64.sqrt()).abs() < 1e-10, "{v}");
        let inv = eval_series(&inv_sqrt_one_minus_4t(80), 0.1, 80).unwrap().value;
        assert!((inv - 1.0 / 0.6f64.sqrt()).abs() < 1e-12);
    }
}
