use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::classical::{bernoulli_law, gaussian_moment, poisson_moment};
use super::law::{convolve, Law, MomentSequence};
use crate::combinat::{
    binomial, count_perfect_matchings, factorial, rational_to_f64, Color, ColoredWord, Permutation,
};
use crate::error::{invalid, Error, Result};
use crate::linalg::{determinant, RealMatrix, RealPolynomial};
use crate::quad::{sphere_moment_exact, RandomSource, SphereMomentKey};

/// Leading principal minors `det(M_{i+j})_{i,j<d}` for `d = 1..=depth`.
///
/// Needs `M_0 .. M_{2·depth-2}`. A moment sequence of a law has all of these
/// non-negative; this only computes them.
pub fn hankel_check(m: &MomentSequence, depth: usize) -> Result<Vec<f64>> {
    if depth == 0 {
        return invalid("Hankel depth must be at least 1");
    }
    if m.len() < 2 * depth - 1 {
        return invalid(format!("depth {depth} needs {} moments, got {}", 2 * depth - 1, m.len()));
    }
    (1..=depth).map(|d| determinant(&hankel(m, d))).collect()
}

/// Whether every minor from [`hankel_check`] is at least `-1e-9` times the
/// natural scale `max(1, max|M_k|)^d`.
pub fn hankel_admissible(m: &MomentSequence, depth: usize) -> Result<bool> {
    let dets = hankel_check(m, depth)?;
    let scale = m.as_slice()[..2 * depth - 1].iter().fold(1.0_f64, |s, v| s.max(v.abs()));
    Ok(dets.iter().enumerate().all(|(i, d)| *d >= -1e-9 * scale.powi(i as i32 + 1)))
}

fn hankel(m: &MomentSequence, d: usize) -> RealMatrix {
    RealMatrix::from_fn(d, d, |i, j| m[i + j])
}

/// Monic `P_k` orthogonal to `1, x, ..., x^{k-1}` under the moment functional,
/// as the determinant with rows `(M_i .. M_{i+k})` for `i < k` and last row
/// `(1, x, .., x^k)`, expanded along that last row.
pub fn orthopoly_from_moments(m: &MomentSequence, k: usize) -> Result<RealPolynomial> {
    if m.len() < 2 * k {
        return invalid(format!("degree {k} needs {} moments, got {}", 2 * k, m.len()));
    }
    if k == 0 {
        return Ok(RealPolynomial::new(vec![1.0]));
    }
    let rows = RealMatrix::from_fn(k, k + 1, |i, j| m[i + j]);
    let cofactor = |j: usize| -> Result<f64> {
        let minor = RealMatrix::from_fn(k, k, |r, c| rows[(r, if c < j { c } else { c + 1 })]);
        let sign = if (k + j).is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(sign * determinant(&minor)?)
    };
    let lead = cofactor(k)?;
    let scale = m.as_slice().iter().fold(1.0_f64, |s, v| s.max(v.abs())).powi(k as i32);
    if lead.abs() <= 1e-12 * scale {
        return Err(Error::Degenerate(format!("Hankel determinant of order {k} vanishes")));
    }
    let coeffs = (0..=k).map(|j| cofactor(j).map(|c| c / lead)).collect::<Result<Vec<_>>>()?;
    Ok(RealPolynomial::new(coeffs))
}

/// Moment discrepancy between an n-fold rescaled convolution and its limit.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentGap {
    /// `(limit, computed)` for `k = 0..=upto`.
    pub orders: Vec<(f64, f64)>,
}

impl MomentGap {
    pub fn max_abs(&self) -> f64 {
        self.orders.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn max_rel(&self) -> f64 {
        self.orders.iter().map(|(a, b)| (a - b).abs() / a.abs().max(1.0)).fold(0.0, f64::max)
    }
}

/// n-fold self-convolution by repeated squaring on the atoms.
pub fn convolution_power(base: &Law, n: usize) -> Result<Law> {
    if n == 0 {
        return Ok(Law::dirac(0.0));
    }
    let mut acc: Option<Law> = None;
    let mut square = base.clone();
    let mut k = n;
    loop {
        if k & 1 == 1 {
            acc = Some(match acc {
                None => square.clone(),
                Some(a) => convolve(&a, &square)?,
            });
        }
        k >>= 1;
        if k == 0 {
            break;
        }
        square = convolve(&square, &square)?;
    }
    Ok(acc.expect("n > 0"))
}

/// `Bernoulli(t/n)^{*n}` against `Poisson(t)`, for moments up to `upto`.
pub fn plt_distance(t: f64, n: usize, upto: usize) -> Result<MomentGap> {
    if n == 0 || !(t > 0.0) || t > n as f64 {
        return invalid("Poisson limit needs n >= 1 and 0 < t <= n");
    }
    let law = convolution_power(&bernoulli_law(t / n as f64)?, n)?;
    let computed = law.moments(upto)?;
    let orders = (0..=upto)
        .map(|k| {
            let p = poisson_moment(t, k)?;
            Ok((p.partitions.unwrap_or(p.atoms), computed[k]))
        })
        .collect::<Result<_>>()?;
    Ok(MomentGap { orders })
}

/// `(X_1 + .. + X_n)/√n` for a centred atomic base, against the Gaussian of
/// the base variance.
pub fn clt_moment_gap(base: &Law, n: usize, upto: usize) -> Result<MomentGap> {
    if !base.is_atomic() {
        return invalid("clt_moment_gap works on atomic laws");
    }
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let m = base.moments(2)?;
    if m[1].abs() > 1e-12 * m[2].sqrt().max(1.0) {
        return invalid(format!("base law has mean {}, expected 0", m[1]));
    }
    let law = convolution_power(base, n)?.dilate(1.0 / (n as f64).sqrt())?;
    let computed = law.moments(upto)?;
    let orders = (0..=upto).map(|k| (gaussian_moment(m[2], k as u32), computed[k])).collect();
    Ok(MomentGap { orders })
}

/// Law of the number of fixed points of a uniform permutation of `1..=N`
/// among its first `⌊tN⌋` points.
#[derive(Debug, Clone)]
pub struct FixedPointLaw {
    pub law: Law,
    /// Exact masses of `0, 1, ..`, present when `N <= 9`.
    pub exact: Option<Vec<BigRational>>,
    pub samples: Option<usize>,
}

pub const SN_EXACT_LIMIT: usize = 9;
pub const SN_DEFAULT_SAMPLES: usize = 1_000_000;

/// Enumerates `S_N` for `N <= 9`; larger `N` uses seeded Fisher–Yates draws.
pub fn sn_fixed_point_law(n: usize, t: f64, rng: Option<&mut RandomSource>) -> Result<FixedPointLaw> {
    sn_fixed_point_law_sampled(n, t, SN_DEFAULT_SAMPLES, rng)
}

pub fn sn_fixed_point_law_sampled(
    n: usize,
    t: f64,
    samples: usize,
    rng: Option<&mut RandomSource>,
) -> Result<FixedPointLaw> {
    if n == 0 || !(0.0..=1.0).contains(&t) {
        return invalid("need N >= 1 and t in [0, 1]");
    }
    let m = (t * n as f64).floor() as usize;
    if n <= SN_EXACT_LIMIT {
        let mut counts = vec![0u64; m + 1];
        for p in Permutation::all(n) {
            counts[(0..m).filter(|&i| p.apply(i) == i).count()] += 1;
        }
        let total = factorial(n as u32);
        let exact: Vec<BigRational> =
            counts.iter().map(|&c| BigRational::new(BigInt::from(c), total.clone())).collect();
        let atoms = exact.iter().enumerate().map(|(k, p)| (k as f64, rational_to_f64(p))).collect();
        return Ok(FixedPointLaw { law: Law::new(atoms, Vec::new())?, exact: Some(exact), samples: None });
    }
    let rng = rng.ok_or_else(|| Error::Invalid(format!("N = {n} > {SN_EXACT_LIMIT} needs a seed")))?;
    if samples == 0 {
        return invalid("sample count must be positive");
    }
    let mut counts = vec![0u64; m + 1];
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..samples {
        for i in (1..n).rev() {
            perm.swap(i, rng.below(i + 1));
        }
        counts[(0..m).filter(|&i| perm[i] == i).count()] += 1;
    }
    let atoms = counts.iter().enumerate().map(|(k, &c)| (k as f64, c as f64 / samples as f64)).collect();
    Ok(FixedPointLaw { law: Law::new(atoms, Vec::new())?, exact: None, samples: Some(samples) })
}

/// `P(no fixed point among the first m)` by inclusion–exclusion:
/// `sum_r (-1)^r C(m, r) (N-r)!/N!`.
pub fn sn_no_fixed_point_probability(n: usize, m: usize) -> Result<BigRational> {
    if m > n {
        return invalid("m exceeds N");
    }
    let total = factorial(n as u32);
    let mut sum = BigInt::zero();
    for r in 0..=m {
        let term = binomial(m as u32, r as u32) * factorial((n - r) as u32);
        if r % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(BigRational::new(sum, total))
}

/// Number of closed walks of length `k` from `base` in a simple graph, by
/// exact integer matrix-vector products.
pub fn graph_loop_moment(adjacency: &RealMatrix, base: usize, k: usize) -> Result<BigInt> {
    let n = adjacency.rows();
    if !adjacency.is_square() || base >= n {
        return invalid("adjacency must be square and contain the base vertex");
    }
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            let a = adjacency[(i, j)];
            if a != 0.0 && a != 1.0 {
                return invalid("adjacency entries must be 0 or 1");
            }
            if a != adjacency[(j, i)] {
                return invalid("adjacency must be symmetric");
            }
            if a == 1.0 {
                adj[i].push(j);
            }
        }
    }
    let mut v = vec![BigInt::zero(); n];
    v[base] = BigInt::one();
    for _ in 0..k {
        v = adj.iter().map(|nbrs| nbrs.iter().map(|&j| &v[j]).sum()).collect();
    }
    Ok(v[base].clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Su2Moment {
    /// `E (Re a)^{2k}` on the unit sphere of `C²`, which is `C_k/4^k`.
    pub raw: BigRational,
    /// The same moment for `2·Re a`, an integer.
    pub rescaled: BigRational,
}

pub fn su2_character_moment(k: u32) -> Result<Su2Moment> {
    let raw = sphere_moment_exact(&SphereMomentKey::Real(vec![2 * k, 0, 0, 0]))?.expect("real keys are rational");
    let rescaled = &raw * BigRational::from_integer(BigInt::from(4).pow(k));
    Ok(Su2Moment { raw, rescaled })
}

/// `E` of a product of centred complex Gaussians of variance `t`, each
/// letter naming a variable and whether it is conjugated: `t^{s/2}` times the
/// number of pairings joining a plain and a conjugate copy of one variable.
pub fn wick(t: f64, letters: &[(usize, Color)]) -> f64 {
    if letters.len() % 2 == 1 {
        return 0.0;
    }
    let count =
        count_perfect_matchings(letters.len(), |i, j| letters[i].0 == letters[j].0 && letters[i].1 != letters[j].1);
    crate::combinat::int_to_f64(&count) * t.powi(letters.len() as i32 / 2)
}

/// `E z^{w}` for one complex Gaussian of variance `t`: `t^p p!` when the word
/// has `p` letters of each color, zero otherwise.
pub fn complex_gaussian_moment(t: f64, word: &ColoredWord) -> f64 {
    let p = word.count(Color::Plain);
    if p != word.count(Color::Conjugate) {
        return 0.0;
    }
    crate::combinat::int_to_f64(&factorial(p as u32)) * t.powi(p as i32)
}
