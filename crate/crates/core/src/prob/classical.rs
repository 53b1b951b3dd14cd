use std::f64::consts::PI;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;

use super::law::{CauchyTransform, DensityPart, Law};
use crate::combinat::{catalan, central_binomial, int_to_f64, middle_binomial, semi_factorial};
use crate::error::{invalid, Error, Result};

/// The four laws whose moments are classical counting sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassicalLaw {
    /// `(1/2π)√(4 - x²)` on `[-2, 2]`; even moments are Catalan numbers.
    Semicircle,
    /// `(1/2π)√(4/x - 1)` on `[0, 4]`; moments are Catalan numbers.
    MarchenkoPastur,
    /// `1/(π√(x(4 - x)))` on `[0, 4]`; moments are central binomials.
    Arcsine,
    /// `(1/2π)√((2 + x)/(2 - x))` on `[-2, 2]`; moments are `C(k, ⌊k/2⌋)`.
    ModifiedArcsine,
}

impl ClassicalLaw {
    pub const ALL: [Self; 4] = [Self::Semicircle, Self::MarchenkoPastur, Self::Arcsine, Self::ModifiedArcsine];

    pub fn name(self) -> &'static str {
        match self {
            Self::Semicircle => "semicircle",
            Self::MarchenkoPastur => "mp",
            Self::Arcsine => "arcsine",
            Self::ModifiedArcsine => "marcsine",
        }
    }

    pub fn support(self) -> (f64, f64) {
        match self {
            Self::Semicircle | Self::ModifiedArcsine => (-2.0, 2.0),
            Self::MarchenkoPastur | Self::Arcsine => (0.0, 4.0),
        }
    }

    pub fn density(self, x: f64) -> f64 {
        let (a, b) = self.support();
        if x <= a || x >= b {
            return 0.0;
        }
        match self {
            Self::Semicircle => (4.0 - x * x).sqrt() / (2.0 * PI),
            Self::MarchenkoPastur => (4.0 / x - 1.0).sqrt() / (2.0 * PI),
            Self::Arcsine => 1.0 / (PI * (x * (4.0 - x)).sqrt()),
            Self::ModifiedArcsine => ((2.0 + x) / (2.0 - x)).sqrt() / (2.0 * PI),
        }
    }

    pub fn moment(self, k: u32) -> BigInt {
        match self {
            Self::Semicircle if k % 2 == 1 => BigInt::from(0),
            Self::Semicircle => catalan(k / 2),
            Self::MarchenkoPastur => catalan(k),
            Self::Arcsine => central_binomial(k),
            Self::ModifiedArcsine => middle_binomial(k),
        }
    }

    pub fn law(self) -> Law {
        Law::new(Vec::new(), vec![DensityPart::analytic(self.support(), move |x| self.density(x))])
            .expect("classical densities have unit mass")
    }
}

impl FromStr for ClassicalLaw {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown law `{s}` (semicircle, mp, arcsine, marcsine)")))
    }
}

impl CauchyTransform for ClassicalLaw {
    /// Closed forms built from principal square roots; each has its cut on
    /// the support and behaves like `1/ξ` at infinity.
    fn cauchy(&self, xi: Complex64) -> Result<Complex64> {
        let (a, b) = self.support();
        if xi.im == 0.0 && xi.re >= a && xi.re <= b {
            return Err(Error::Domain(format!("ξ = {} lies on the support", xi.re)));
        }
        Ok(match self {
            Self::Semicircle => (xi - (xi - 2.0).sqrt() * (xi + 2.0).sqrt()) / 2.0,
            Self::MarchenkoPastur => 0.5 - 0.5 * (xi - 4.0).sqrt() / xi.sqrt(),
            Self::Arcsine => 1.0 / (xi.sqrt() * (xi - 4.0).sqrt()),
            Self::ModifiedArcsine => 0.5 * ((xi + 2.0).sqrt() / (xi - 2.0).sqrt() - 1.0),
        })
    }
}

/// Centred Gaussian of variance `t`, with its density cut at `±12√t`.
pub fn gaussian_law(t: f64) -> Result<Law> {
    if !(t > 0.0) {
        return invalid("Gaussian variance must be positive");
    }
    let half = 12.0 * t.sqrt();
    let norm = 1.0 / (2.0 * PI * t).sqrt();
    Law::new(Vec::new(), vec![DensityPart::analytic((-half, half), move |x| norm * (-x * x / (2.0 * t)).exp())])
}

/// `E X^k` for `X ~ N(0, t)`: `t^{k/2}(k-1)!!` for even `k`, zero for odd.
pub fn gaussian_moment(t: f64, k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    t.powi(k as i32 / 2) * int_to_f64(&semi_factorial(k))
}

pub fn gaussian_fourier(t: f64, x: f64) -> f64 {
    (-t * x * x / 2.0).exp()
}

/// Atoms `{0: 1-x, 1: x}`.
pub fn bernoulli_law(x: f64) -> Result<Law> {
    if !(0.0..=1.0).contains(&x) {
        return invalid("Bernoulli parameter must lie in [0, 1]");
    }
    Law::new(vec![(0.0, 1.0 - x), (1.0, x)], Vec::new())
}

/// Atoms `C(n,k) x^k (1-x)^{n-k}` at `k = 0..=n`.
pub fn binomial_law(x: f64, n: u32) -> Result<Law> {
    if !(0.0..=1.0).contains(&x) {
        return invalid("binomial parameter must lie in [0, 1]");
    }
    if n == 0 {
        return invalid("binomial law needs n >= 1");
    }
    let atoms = (0..=n)
        .map(|k| {
            let c = int_to_f64(&crate::combinat::binomial(n, k));
            (k as f64, c * x.powi(k as i32) * (1.0 - x).powi((n - k) as i32))
        })
        .collect();
    Law::new(atoms, Vec::new())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialStats {
    pub mean: f64,
    pub variance: f64,
    /// Mean and variance recomputed from the atoms.
    pub atom_mean: f64,
    pub atom_variance: f64,
}

pub fn binomial_stats(x: f64, n: u32) -> Result<BinomialStats> {
    let law = binomial_law(x, n)?;
    let nf = n as f64;
    Ok(BinomialStats { mean: nf * x, variance: nf * x * (1.0 - x), atom_mean: law.mean(), atom_variance: law.variance() })
}

/// Uniform density on `[a, b]`.
pub fn uniform_law(a: f64, b: f64) -> Result<Law> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return invalid("uniform law needs a finite interval a < b");
    }
    let h = 1.0 / (b - a);
    Law::new(Vec::new(), vec![DensityPart::analytic((a, b), move |_| h)])
}

/// Atoms at `-1` and `+1` with mass 1/2 each.
pub fn coin_law() -> Law {
    Law::new(vec![(-1.0, 0.5), (1.0, 0.5)], Vec::new()).expect("fair coin")
}

const POISSON_TAIL: f64 = 1e-12;

/// Poisson law of parameter `t`, keeping atoms until the remaining mass is
/// below 1e-12.
pub fn poisson_law(t: f64) -> Result<Law> {
    if !(t > 0.0) || !t.is_finite() {
        return invalid("Poisson parameter must be positive");
    }
    let mut atoms = Vec::new();
    let mut p = (-t).exp();
    let mut total = 0.0;
    let mut k = 0u32;
    loop {
        atoms.push((k as f64, p));
        total += p;
        k += 1;
        if 1.0 - total < POISSON_TAIL && k as f64 > t {
            break;
        }
        p *= t / k as f64;
        if k > 100_000 {
            return Err(Error::NonConvergence { what: "Poisson atom sum", iterations: k as usize });
        }
    }
    Law::new(atoms, Vec::new())
}

pub fn poisson_fourier(t: f64, y: f64) -> Complex64 {
    ((Complex64::from_polar(1.0, y) - 1.0) * t).exp()
}

/// `E X^k` for `X ~ Poisson(t)`, computed two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonMoment {
    /// `sum over set partitions π of {1..k} of t^{|π|}`; present for `k <= 10`.
    pub partitions: Option<f64>,
    /// `sum_j j^k e^{-t} t^j / j!`, summed until the terms are negligible.
    pub atoms: f64,
}

pub const PARTITION_ENUMERATION_LIMIT: usize = 10;

pub fn poisson_moment(t: f64, k: usize) -> Result<PoissonMoment> {
    if !(t > 0.0) || !t.is_finite() {
        return invalid("Poisson parameter must be positive");
    }
    let mut p = (-t).exp();
    let mut atoms = 0.0;
    for j in 0u32.. {
        let term = (j as f64).powi(k as i32) * p;
        atoms += term;
        if j as f64 > t + k as f64 && term <= 1e-17 * atoms {
            break;
        }
        p *= t / (j + 1) as f64;
    }
    let partitions = (k <= PARTITION_ENUMERATION_LIMIT).then(|| {
        block_counts(k).iter().enumerate().map(|(b, &n)| n as f64 * t.powi(b as i32)).sum()
    });
    Ok(PoissonMoment { partitions, atoms })
}

/// `counts[b]` is the number of set partitions of `{1..k}` with `b` blocks,
/// found by walking restricted growth strings.
fn block_counts(k: usize) -> Vec<u64> {
    let mut counts = vec![0u64; k + 1];
    if k == 0 {
        counts[0] = 1;
        return counts;
    }
    fn walk(i: usize, blocks: usize, k: usize, counts: &mut [u64]) {
        if i == k {
            counts[blocks] += 1;
            return;
        }
        for b in 0..=blocks {
            walk(i + 1, blocks.max(b + 1), k, counts);
        }
    }
    walk(1, 1, k, &mut counts);
    counts
}
