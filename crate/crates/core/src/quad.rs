//! Numerical integration, change-of-variable Jacobians, and the closed-form
//! integrals built from Gaussians, Wallis products and sphere moments.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::combinat::{factorial, rational_to_f64, semi_factorial};
use crate::error::{domain, invalid, Result};
use crate::Estimate;

/// Seeded, reproducible random stream.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    pub fn uniform_in(&mut self, a: f64, b: f64) -> f64 {
        a + (b - a) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// An independent stream derived from this one; used to hand fixed
    /// chunks of work to threads without losing reproducibility.
    pub fn split(&mut self) -> RandomSource {
        RandomSource::new(self.next_u64())
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return domain(format!("need a finite interval a < b, got [{a}, {b}]"));
    }
    Ok(())
}

fn finite(x: f64, at: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        domain(format!("integrand is not finite at x = {at}"))
    }
}

/// Right-endpoint Riemann sum over `n` equal pieces.
pub fn riemann(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Result<f64> {
    check_interval(a, b)?;
    if n == 0 {
        return invalid("riemann needs n >= 1");
    }
    let h = (b - a) / n as f64;
    let mut sum = 0.0;
    for k in 1..=n {
        let x = a + (b - a) * k as f64 / n as f64;
        sum += finite(f(x), x)?;
    }
    Ok(h * sum)
}

pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Result<f64> {
    check_interval(a, b)?;
    if n == 0 {
        return invalid("trapezoid needs n >= 1");
    }
    let h = (b - a) / n as f64;
    let mut sum = 0.5 * (finite(f(a), a)? + finite(f(b), b)?);
    for k in 1..n {
        let x = a + h * k as f64;
        sum += finite(f(x), x)?;
    }
    Ok(h * sum)
}

/// Composite Simpson rule; an odd `n` is bumped to the next even number.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = (n.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * k as f64);
    }
    sum * h / 3.0
}

/// `(b-a)` times the sample mean at uniform points, with its standard error.
pub fn monte_carlo(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize, rng: &mut RandomSource) -> Result<Estimate> {
    check_interval(a, b)?;
    if n < 2 {
        return invalid("monte_carlo needs at least two samples");
    }
    let (mut s1, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let x = rng.uniform_in(a, b);
        let y = finite(f(x), x)?;
        s1 += y;
        s2 += y * y;
    }
    let nn = n as f64;
    let mean = s1 / nn;
    let var = ((s2 - nn * mean * mean) / (nn - 1.0)).max(0.0);
    Ok(Estimate { value: (b - a) * mean, error: (b - a) * (var / nn).sqrt() })
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

pub fn gauss_integral() -> f64 {
    PI.sqrt()
}

/// `|simpson(e^{-x²}, [-L, L], nodes) - √π|`; the omitted tail is below `e^{-L²}/L`.
pub fn verify_gauss(half_width: f64, nodes: usize) -> Result<f64> {
    if half_width < 6.0 {
        return invalid("verify_gauss needs L >= 6");
    }
    Ok((simpson(|x| (-x * x).exp(), -half_width, half_width, nodes) - gauss_integral()).abs())
}

pub fn fresnel() -> f64 {
    (PI / 8.0).sqrt()
}

/// `∫_0^T sin(t²) dt` by composite Simpson.
pub fn fresnel_truncated(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    simpson(|s| (s * s).sin(), 0.0, t, (t * t * 40.0).ceil() as usize + 200)
}

/// Averaged estimate of `∫_0^∞ sin(t²) dt` from the truncated integrals at
/// the `half_periods + 1` zeros `√(jπ)` of the integrand at or beyond `T`.
///
/// The truncated values alternate about the limit; repeatedly replacing the
/// list by the means of its neighbours collapses it to one value.
pub fn fresnel_averaged(t: f64, half_periods: usize) -> Result<f64> {
    if t < 5.0 {
        return invalid("fresnel averaging needs T >= 5");
    }
    if half_periods == 0 {
        return invalid("fresnel averaging needs at least one half period");
    }
    let j0 = (t * t / PI).ceil() as usize;
    let zero = |j: usize| (j as f64 * PI).sqrt();
    let mut values = Vec::with_capacity(half_periods + 1);
    let mut acc = fresnel_truncated(zero(j0));
    values.push(acc);
    for j in j0..j0 + half_periods {
        acc += simpson(|s| (s * s).sin(), zero(j), zero(j + 1), 400);
        values.push(acc);
    }
    while values.len() > 1 {
        values = values.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    }
    Ok(values[0])
}

pub fn verify_fresnel(t: f64, half_periods: usize) -> Result<f64> {
    Ok((fresnel_averaged(t, half_periods)? - fresnel()).abs())
}

fn ln_semi_factorial(m: u32) -> f64 {
    let mut s = 0.0;
    let mut j = m as i64 - 1;
    while j >= 1 {
        s += (j as f64).ln();
        j -= 2;
    }
    s
}

/// `p!! / q!!` in the shifted convention, in log domain once the arguments are large.
fn semi_factorial_ratio(num: &[u32], den: &[u32]) -> f64 {
    if num.iter().chain(den).all(|&m| m <= 150) {
        let n: BigInt = num.iter().map(|&m| semi_factorial(m)).product();
        let d: BigInt = den.iter().map(|&m| semi_factorial(m)).product();
        return rational_to_f64(&BigRational::new(n, d));
    }
    let ln: f64 = num.iter().map(|&m| ln_semi_factorial(m)).sum::<f64>() - den.iter().map(|&m| ln_semi_factorial(m)).sum::<f64>();
    ln.exp()
}

/// `∫_0^{π/2} cos^p t dt`.
pub fn wallis(p: u32) -> f64 {
    let e = if p.is_multiple_of(2) { PI / 2.0 } else { 1.0 };
    e * semi_factorial_ratio(&[p], &[p + 1])
}

/// `∫_0^{π/2} cos^p t sin^q t dt`.
pub fn wallis2(p: u32, q: u32) -> f64 {
    let e = if p.is_multiple_of(2) && q.is_multiple_of(2) { PI / 2.0 } else { 1.0 };
    e * semi_factorial_ratio(&[p, q], &[p + q + 1])
}

/// Volume of the unit ball in `R^N`.
pub fn sphere_volume(n: u32) -> Result<f64> {
    if n == 0 {
        return invalid("dimension must be at least 1");
    }
    Ok((PI / 2.0).powi((n / 2) as i32) * 2f64.powi(n as i32) * semi_factorial_ratio(&[], &[n + 1]))
}

/// Area of the unit sphere in `R^N`.
pub fn sphere_area(n: u32) -> Result<f64> {
    if n == 0 {
        return invalid("dimension must be at least 1");
    }
    Ok((PI / 2.0).powi((n / 2) as i32) * 2f64.powi(n as i32) * semi_factorial_ratio(&[], &[n - 1]))
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `(N/e)^N √(2πN)`; overflows to `inf` past `N ≈ 170`.
pub fn stirling(n: u32) -> Result<f64> {
    if n == 0 {
        return invalid("stirling needs N >= 1");
    }
    let n = n as f64;
    Ok((n / std::f64::consts::E).powf(n) * (2.0 * PI * n).sqrt())
}

/// `N! / stirling(N)`, computed in log domain.
pub fn stirling_ratio(n: u32) -> Result<f64> {
    if n == 0 {
        return invalid("stirling needs N >= 1");
    }
    let nf = n as f64;
    let ln_approx = nf * (nf.ln() - 1.0) + 0.5 * (2.0 * PI * nf).ln();
    Ok((ln_factorial(n) - ln_approx).exp())
}

/// `(2πe/N)^{N/2} / √(πN)`.
pub fn sphere_volume_estimate(n: u32) -> Result<f64> {
    if n == 0 {
        return invalid("dimension must be at least 1");
    }
    let nf = n as f64;
    Ok((2.0 * PI * std::f64::consts::E / nf).powf(nf / 2.0) / (PI * nf).sqrt())
}

/// A monomial to be averaged over a unit sphere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SphereMomentKey {
    /// `x_1^{k_1} ... x_N^{k_N}` on the real sphere in `R^N`.
    Real(Vec<u32>),
    /// `|x_1|^{k_1} ... |x_N|^{k_N}` on the real sphere.
    RealAbs(Vec<u32>),
    /// `z_1^{a_1} conj(z_1)^{b_1} ...` on the complex sphere in `C^N`.
    Complex { plain: Vec<u32>, conj: Vec<u32> },
}

impl SphereMomentKey {
    pub fn dimension(&self) -> usize {
        match self {
            Self::Real(k) | Self::RealAbs(k) => k.len(),
            Self::Complex { plain, .. } => plain.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.dimension() == 0 {
            return invalid("sphere moment key needs N >= 1");
        }
        if let Self::Complex { plain, conj } = self {
            if plain.len() != conj.len() {
                return invalid("plain and conjugate exponent lists differ in length");
            }
        }
        Ok(())
    }
}

/// Exact value of the sphere average when it is rational: real keys and
/// complex keys. Absolute-value keys carry powers of `2/π` and give `None`.
pub fn sphere_moment_exact(key: &SphereMomentKey) -> Result<Option<BigRational>> {
    key.validate()?;
    let n = key.dimension() as u32;
    Ok(match key {
        SphereMomentKey::RealAbs(_) => None,
        SphereMomentKey::Real(k) => {
            if k.iter().any(|e| e % 2 == 1) {
                Some(BigRational::from_integer(0.into()))
            } else {
                let total: u32 = k.iter().sum();
                let num: BigInt = k.iter().map(|&e| semi_factorial(e)).product::<BigInt>() * semi_factorial(n - 1);
                Some(BigRational::new(num, semi_factorial(n + total - 1)))
            }
        }
        SphereMomentKey::Complex { plain, conj } => {
            if plain != conj {
                Some(BigRational::from_integer(0.into()))
            } else {
                let total: u32 = plain.iter().sum();
                let num: BigInt = plain.iter().map(|&e| factorial(e)).product::<BigInt>() * factorial(n - 1);
                Some(BigRational::new(num, factorial(n + total - 1)))
            }
        }
    })
}

/// Average of the key's monomial over the unit sphere (normalized measure).
pub fn sphere_moment(key: &SphereMomentKey) -> Result<f64> {
    if let Some(exact) = sphere_moment_exact(key)? {
        return Ok(rational_to_f64(&exact));
    }
    let SphereMomentKey::RealAbs(k) = key else { unreachable!() };
    let n = k.len() as u32;
    let total: u32 = k.iter().sum();
    let odds = k.iter().filter(|e| *e % 2 == 1).count() as i32;
    let sigma = if n % 2 == 1 { odds / 2 } else { (odds + 1) / 2 };
    let mut num: Vec<u32> = k.clone();
    num.push(n - 1);
    Ok((2.0 / PI).powi(sigma) * semi_factorial_ratio(&num, &[n + total - 1]))
}

/// Monte Carlo estimate of a sphere average; the imaginary part is zero for
/// real keys.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub value: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
}

pub fn sphere_moment_mc(key: &SphereMomentKey, samples: usize, rng: &mut RandomSource) -> Result<MomentEstimate> {
    Ok(sphere_moment_mc_batch(std::slice::from_ref(key), samples, rng)?[0])
}

const MC_CHUNKS: usize = 16;

/// Estimates several keys of one dimension and field from shared samples.
///
/// Samples are normalized standard Gaussian vectors. Work is split into a
/// fixed number of chunks with their own derived streams, so the result
/// depends only on the seed, not on the thread count.
pub fn sphere_moment_mc_batch(
    keys: &[SphereMomentKey],
    samples: usize,
    rng: &mut RandomSource,
) -> Result<Vec<MomentEstimate>> {
    if samples < 1000 {
        return invalid("sphere_moment_mc needs at least 1000 samples");
    }
    let Some(first) = keys.first() else { return Ok(Vec::new()) };
    for k in keys {
        k.validate()?;
        if k.dimension() != first.dimension()
            || matches!(k, SphereMomentKey::Complex { .. }) != matches!(first, SphereMomentKey::Complex { .. })
        {
            return invalid("batched keys must share dimension and field");
        }
    }
    let n = first.dimension();
    let complex = matches!(first, SphereMomentKey::Complex { .. });
    let streams: Vec<RandomSource> = (0..MC_CHUNKS).map(|_| rng.split()).collect();
    let sizes: Vec<usize> = (0..MC_CHUNKS).map(|c| samples / MC_CHUNKS + usize::from(c < samples % MC_CHUNKS)).collect();
    let partials: Vec<Vec<[f64; 4]>> = std::thread::scope(|scope| {
        let handles: Vec<_> = streams
            .into_iter()
            .zip(&sizes)
            .map(|(mut stream, &size)| {
                scope.spawn(move || {
                    if complex {
                        complex_chunk(keys, n, size, &mut stream)
                    } else {
                        real_chunk(keys, n, size, &mut stream)
                    }
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sampling thread panicked")).collect()
    });
    let total = samples as f64;
    Ok((0..keys.len())
        .map(|i| {
            let mut s = [0.0; 4];
            for p in &partials {
                for (acc, v) in s.iter_mut().zip(p[i]) {
                    *acc += v;
                }
            }
            let (mre, mim) = (s[0] / total, s[2] / total);
            let se = |sum2: f64, m: f64| (((sum2 / total - m * m) * total / (total - 1.0)).max(0.0) / total).sqrt();
            MomentEstimate { value: Complex64::new(mre, mim), stderr_re: se(s[1], mre), stderr_im: se(s[3], mim) }
        })
        .collect())
}

fn real_chunk(keys: &[SphereMomentKey], n: usize, size: usize, rng: &mut RandomSource) -> Vec<[f64; 4]> {
    let max_pow = keys
        .iter()
        .flat_map(|k| match k {
            SphereMomentKey::Real(e) | SphereMomentKey::RealAbs(e) => e.clone(),
            SphereMomentKey::Complex { .. } => unreachable!(),
        })
        .max()
        .unwrap_or(0) as usize;
    let mut acc = vec![[0.0; 4]; keys.len()];
    let mut pows = vec![vec![1.0; max_pow + 1]; n];
    let mut abs_pows = vec![vec![1.0; max_pow + 1]; n];
    let mut x = vec![0.0; n];
    for _ in 0..size {
        let mut norm = 0.0;
        for xi in x.iter_mut() {
            *xi = rng.normal();
            norm += *xi * *xi;
        }
        let norm = norm.sqrt();
        for i in 0..n {
            let xi = x[i] / norm;
            for p in 1..=max_pow {
                pows[i][p] = pows[i][p - 1] * xi;
                abs_pows[i][p] = abs_pows[i][p - 1] * xi.abs();
            }
        }
        for (key, a) in keys.iter().zip(acc.iter_mut()) {
            let (e, table) = match key {
                SphereMomentKey::Real(e) => (e, &pows),
                SphereMomentKey::RealAbs(e) => (e, &abs_pows),
                SphereMomentKey::Complex { .. } => unreachable!(),
            };
            let v: f64 = e.iter().enumerate().map(|(i, &p)| table[i][p as usize]).product();
            a[0] += v;
            a[1] += v * v;
        }
    }
    acc
}

fn complex_chunk(keys: &[SphereMomentKey], n: usize, size: usize, rng: &mut RandomSource) -> Vec<[f64; 4]> {
    let max_pow = keys
        .iter()
        .flat_map(|k| match k {
            SphereMomentKey::Complex { plain, conj } => plain.iter().chain(conj).copied().collect::<Vec<_>>(),
            _ => unreachable!(),
        })
        .max()
        .unwrap_or(0) as usize;
    let w = max_pow + 1;
    let one = Complex64::new(1.0, 0.0);
    let mut acc = vec![[0.0; 4]; keys.len()];
    // table[i][a * w + b] = z_i^a conj(z_i)^b
    let mut table = vec![vec![one; w * w]; n];
    let mut z = vec![one; n];
    for _ in 0..size {
        let mut norm = 0.0;
        for zi in z.iter_mut() {
            *zi = Complex64::new(rng.normal(), rng.normal());
            norm += zi.norm_sqr();
        }
        let norm = norm.sqrt();
        for i in 0..n {
            let zi = z[i] / norm;
            let zc = zi.conj();
            for a in 0..w {
                if a > 0 {
                    table[i][a * w] = table[i][(a - 1) * w] * zi;
                }
                for b in 1..w {
                    table[i][a * w + b] = table[i][a * w + b - 1] * zc;
                }
            }
        }
        for (key, s) in keys.iter().zip(acc.iter_mut()) {
            let SphereMomentKey::Complex { plain, conj } = key else { unreachable!() };
            let mut v = one;
            for i in 0..n {
                v *= table[i][plain[i] as usize * w + conj[i] as usize];
            }
            s[0] += v.re;
            s[1] += v.re * v.re;
            s[2] += v.im;
            s[3] += v.im * v.im;
        }
    }
    acc
}

pub fn jacobian_polar(r: f64) -> f64 {
    r
}

/// `r^{N-1} sin^{N-2} t_1 ... sin t_{N-2}`; only the first `N-2` angles matter.
pub fn jacobian_spherical(n: usize, r: f64, angles: &[f64]) -> Result<f64> {
    if n < 2 {
        return invalid("spherical coordinates need N >= 2");
    }
    if angles.len() < n - 2 {
        return invalid(format!("{} angles supplied, at least {} needed", angles.len(), n - 2));
    }
    let trig: f64 = angles[..n - 2]
        .iter()
        .enumerate()
        .map(|(i, t)| t.sin().powi((n - 2 - i) as i32))
        .product();
    Ok(r.powi(n as i32 - 1) * trig)
}

/// `x_1 = r cos t_1, x_2 = r sin t_1 cos t_2, ..., x_N = r sin t_1 ... sin t_{N-1}`.
pub fn spherical_to_cartesian(r: f64, angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len() + 1);
    let mut s = r;
    for t in angles {
        out.push(s * t.cos());
        s *= t.sin();
    }
    out.push(s);
    out
}

/// Integrates `f(x)` over the ball of radius `radius` in `R^N` in spherical
/// coordinates: Gauss–Legendre in `r` and each angle, `t_1..t_{N-2}` over
/// `[0, π]` and `t_{N-1}` over `[0, 2π]`.
pub fn integrate_ball(n: usize, radius: f64, nodes: usize, f: impl Fn(&[f64]) -> f64) -> Result<f64> {
    if n < 2 {
        return invalid("integrate_ball needs N >= 2");
    }
    let gl = gauss_legendre(nodes);
    let scaled = |lo: f64, hi: f64| -> Vec<(f64, f64)> {
        gl.iter().map(|&(x, w)| (lo + (hi - lo) * (x + 1.0) / 2.0, w * (hi - lo) / 2.0)).collect()
    };
    let radial = scaled(0.0, radius);
    let polar = scaled(0.0, PI);
    let azimuth = scaled(0.0, 2.0 * PI);
    let mut idx = vec![0usize; n];
    let mut total = 0.0;
    let mut angles = vec![0.0; n - 1];
    loop {
        let (r, wr) = radial[idx[0]];
        let mut w = wr;
        for a in 0..n - 1 {
            let (t, wt) = if a == n - 2 { azimuth[idx[a + 1]] } else { polar[idx[a + 1]] };
            angles[a] = t;
            w *= wt;
        }
        let x = spherical_to_cartesian(r, &angles);
        total += w * jacobian_spherical(n, r, &angles)? * f(&x);
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < nodes {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == n {
                return Ok(total);
            }
        }
    }
}
