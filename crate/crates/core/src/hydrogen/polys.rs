use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinat::{binomial, factorial, rational_to_f64};

/// Polynomial with exact rational coefficients, ascending degree.
#[derive(Clone, PartialEq)]
pub struct ExactPolynomial {
    coeffs: Vec<BigRational>,
    approx: Vec<f64>,
}

impl ExactPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let approx = coeffs.iter().map(rational_to_f64).collect();
        Self { coeffs, approx }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.approx.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `p(c x)`.
    pub fn dilate(&self, c: &BigRational) -> Self {
        let mut pow = BigRational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow *= c;
        }
        Self::new(out)
    }
}

impl Add for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn add(self, o: &ExactPolynomial) -> ExactPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = BigRational::zero();
        ExactPolynomial::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + o.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl Mul for &ExactPolynomial {
    type Output = ExactPolynomial;
    fn mul(self, o: &ExactPolynomial) -> ExactPolynomial {
        if self.is_zero() || o.is_zero() {
            return ExactPolynomial::new(vec![]);
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ExactPolynomial::new(out)
    }
}

impl fmt::Debug for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactPolynomial({self})")
    }
}

impl fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()) {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (first, sign) {
                (true, "-") => write!(f, "-")?,
                (true, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => {}
                _ => write!(f, "{a}*")?,
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

fn ratio(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

type Cache<K> = OnceLock<Mutex<HashMap<K, Arc<ExactPolynomial>>>>;

fn memo<K: std::hash::Hash + Eq + Copy>(cache: &'static Cache<K>, key: K, build: impl FnOnce() -> ExactPolynomial) -> Arc<ExactPolynomial> {
    let map = cache.get_or_init(Default::default);
    if let Some(p) = map.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return p.clone();
    }
    let p = Arc::new(build());
    map.lock().unwrap_or_else(|e| e.into_inner()).entry(key).or_insert(p).clone()
}

/// `P_l = (1/(2^l l!)) (d/dx)^l (x² - 1)^l`, so `P_l(1) = 1`.
pub fn legendre(l: u32) -> Arc<ExactPolynomial> {
    static CACHE: Cache<u32> = OnceLock::new();
    memo(&CACHE, l, || {
        let mut base = vec![BigRational::zero(); 2 * l as usize + 1];
        for k in 0..=l {
            let sign = if (l - k).is_multiple_of(2) { 1 } else { -1 };
            base[2 * k as usize] = BigRational::from_integer(binomial(l, k) * sign);
        }
        let norm = ratio(BigInt::one(), (BigInt::one() << l) * factorial(l));
        ExactPolynomial::new(base).nth_derivative(l as usize).scale(&norm)
    })
}

/// `L_q = (e^x/q!) (d/dx)^q (e^{-x} x^q)`, expanded by the product rule so
/// that the exponentials cancel: `(1/q!) Σ_j C(q,j) (-1)^{q-j} (d/dx)^j x^q`.
pub fn laguerre(q: u32) -> Arc<ExactPolynomial> {
    static CACHE: Cache<u32> = OnceLock::new();
    memo(&CACHE, q, || {
        let xq = ExactPolynomial::new(
            (0..=q).map(|k| if k == q { BigRational::one() } else { BigRational::zero() }).collect(),
        );
        let sum = (0..=q).fold(ExactPolynomial::new(vec![]), |acc, j| {
            let sign = if (q - j).is_multiple_of(2) { 1 } else { -1 };
            let c = BigRational::from_integer(binomial(q, j) * sign);
            &acc + &xq.nth_derivative(j as usize).scale(&c)
        });
        sum.scale(&ratio(BigInt::one(), factorial(q)))
    })
}

/// `L_q^p = (-1)^p (d/dx)^p L_{p+q}`.
pub fn assoc_laguerre(p: u32, q: u32) -> Arc<ExactPolynomial> {
    static CACHE: Cache<(u32, u32)> = OnceLock::new();
    memo(&CACHE, (p, q), || {
        let sign = BigRational::from_integer(if p.is_multiple_of(2) { 1 } else { -1 }.into());
        laguerre(p + q).nth_derivative(p as usize).scale(&sign)
    })
}

/// Coefficients `c_0 = 1, c_{j+1} = 2(j + l + 1 - n)/((j + 1)(j + 2l + 2)) c_j`
/// of the radial power series in `p = r/(na)`, up to its termination at
/// `j = n - l - 1`.
pub fn radial_series_coefficients(n: u32, l: u32) -> Vec<BigRational> {
    let mut c = vec![BigRational::one()];
    for j in 0..n.saturating_sub(l + 1) {
        let num = BigInt::from(2) * (BigInt::from(j + l + 1) - BigInt::from(n));
        let den = BigInt::from((j + 1) * (j + 2 * l + 2));
        let next = c[j as usize].clone() * ratio(num, den);
        c.push(next);
    }
    c
}
