use std::f64::consts::PI;

use num_complex::Complex64;

use super::matrix::{determinant, Matrix, Scalar};
use crate::error::{invalid, Error, Result};

/// Dense polynomial, coefficients in ascending degree, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

pub type ComplexPolynomial = Polynomial<Complex64>;
pub type RealPolynomial = Polynomial<f64>;

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| *c == T::zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn monomial(degree: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `c (x - r_1) ... (x - r_n)`.
    pub fn from_roots(c: T, roots: &[T]) -> Self {
        roots.iter().fold(Self::new(vec![c]), |p, &r| &p * &Self::new(vec![-r, T::one()]))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().copied().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * T::from_f64(k as f64))
                .collect(),
        )
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(|&c| f(c)).collect())
    }

    /// `sum |c_k| |x|^k`, the natural size against which `|P(x)|` is judged.
    pub fn eval_scale(&self, x: T) -> f64 {
        let r = x.modulus();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.modulus())
    }
}

impl<T: Scalar> std::ops::Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> std::ops::Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |p: &Polynomial<T>, k: usize| p.coeffs.get(k).copied().unwrap_or_else(T::zero);
        Polynomial::new((0..n).map(|k| get(self, k) + get(rhs, k)).collect())
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Both roots of `ax² + bx + c`, using the cancellation-free form.
pub fn solve_quadratic(a: Complex64, b: Complex64, c0: Complex64) -> Result<(Complex64, Complex64)> {
    if a == Complex64::new(0.0, 0.0) {
        return Err(Error::Degenerate("leading coefficient of the quadratic is zero".into()));
    }
    let sq = (b * b - 4.0 * a * c0).sqrt();
    // pick the sign that avoids cancellation in b ± sqrt
    let s = if (b.conj() * sq).re >= 0.0 { sq } else { -sq };
    let q = -(b + s) / 2.0;
    if q == Complex64::new(0.0, 0.0) {
        return Ok((q, q));
    }
    Ok((q / a, c0 / q))
}

/// Roots of `x³ + 3px + 2q`: one real root, then the remaining pair.
///
/// When `p³ + q² < 0` the principal complex cube root is used for the first
/// radicand and its partner is `-p/u`, i.e. the conjugate.
pub fn cardano(p: f64, q: f64) -> (f64, Complex64, Complex64) {
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let w2 = w * w;
    let d = p * p * p + q * q;
    let (u, v) = if d >= 0.0 {
        let sd = d.sqrt();
        let (ra, rb) = (-q + sd, -q - sd);
        // the larger radicand in modulus is the better conditioned one
        let (big, _) = if ra.abs() >= rb.abs() { (ra, rb) } else { (rb, ra) };
        let u = big.cbrt();
        let v = if u == 0.0 { 0.0 } else { -p / u };
        (c(u), c(v))
    } else {
        let u = Complex64::new(-q, (-d).sqrt()).powf(1.0 / 3.0);
        (u, -p / u)
    };
    let real = (u + v).re;
    let z2 = w * u + w2 * v;
    let z3 = w2 * u + w * v;
    if d < 0.0 {
        (real, c(z2.re), c(z3.re))
    } else {
        (real, z2, z3)
    }
}

/// Sylvester matrix of `P` (degree k) and `Q` (degree l): l shifted rows of
/// P's coefficients, then k shifted rows of Q's, highest degree first.
pub fn sylvester_matrix(p: &ComplexPolynomial, q: &ComplexPolynomial) -> Result<Option<Matrix<Complex64>>> {
    let (Some(k), Some(l)) = (p.degree(), q.degree()) else {
        return invalid("resultant of the zero polynomial");
    };
    let n = k + l;
    if n == 0 {
        return Ok(None);
    }
    let mut m = Matrix::zeros(n, n);
    let pd: Vec<_> = p.coeffs().iter().rev().copied().collect();
    let qd: Vec<_> = q.coeffs().iter().rev().copied().collect();
    for r in 0..l {
        for (j, &x) in pd.iter().enumerate() {
            m[(r, r + j)] = x;
        }
    }
    for r in 0..k {
        for (j, &x) in qd.iter().enumerate() {
            m[(l + r, r + j)] = x;
        }
    }
    Ok(Some(m))
}

pub fn resultant(p: &ComplexPolynomial, q: &ComplexPolynomial) -> Result<Complex64> {
    match sylvester_matrix(p, q)? {
        Some(m) => determinant(&m),
        None => Ok(c(1.0)),
    }
}

pub fn discriminant(p: &ComplexPolynomial) -> Result<Complex64> {
    let n = match p.degree() {
        Some(n) if n >= 2 => n,
        _ => return invalid("discriminant needs degree at least 2"),
    };
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(resultant(p, &p.derivative())? * sign / p.leading())
}

/// A root together with how many Durand–Kerner iterates collapsed onto it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub root: Complex64,
    pub multiplicity: usize,
}

const DK_MAX_ITER: usize = 5000;

/// All `deg P` roots, repeated according to multiplicity.
pub fn all_roots(p: &ComplexPolynomial, tol: f64) -> Result<Vec<Complex64>> {
    Ok(all_roots_clustered(p, tol)?
        .into_iter()
        .flat_map(|c| std::iter::repeat_n(c.root, c.multiplicity))
        .collect())
}

/// Durand–Kerner iteration; iterates within `1e3·tol` of each other are merged.
///
/// A root of multiplicity `m` is only resolved to about `ε^{1/m}`, so
/// neighbouring clusters are also merged when, at their mean, the `k`-th
/// derivative of `P` vanishes to `tol^{(m-k)/m}` relative accuracy for every
/// `k < m`.
pub fn all_roots_clustered(p: &ComplexPolynomial, tol: f64) -> Result<Vec<RootCluster>> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => return invalid("all_roots needs degree at least 1"),
    };
    let lead = p.leading();
    let monic: Vec<Complex64> = p.coeffs().iter().map(|&c| c / lead).collect();
    let monic = Polynomial::new(monic);
    let radius = 1.0 + monic.coeffs()[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..DK_MAX_ITER {
        let mut step = 0.0f64;
        for k in 0..n {
            let denom = (0..n).filter(|&j| j != k).fold(c(1.0), |acc, j| acc * (z[k] - z[j]));
            if denom == c(0.0) {
                z[k] += Complex64::from_polar(1e-8 * radius, k as f64);
                step = f64::INFINITY;
                continue;
            }
            let delta = monic.eval(z[k]) / denom;
            z[k] -= delta;
            step = step.max(delta.norm() / (1.0 + z[k].norm()));
        }
        if step <= 4.0 * f64::EPSILON {
            break;
        }
    }
    for &r in &z {
        let res = monic.eval(r).norm();
        if !res.is_finite() || res > tol * monic.eval_scale(r).max(1.0) {
            return Err(Error::NonConvergence { what: "Durand-Kerner root iteration", iterations: DK_MAX_ITER });
        }
    }
    Ok(merge_multiple(&monic, cluster(&z, 1e3 * tol), tol))
}

fn merge_multiple(p: &ComplexPolynomial, mut clusters: Vec<RootCluster>, tol: f64) -> Vec<RootCluster> {
    let vanishes = |z: Complex64, m: usize| {
        let mut d = p.clone();
        for k in 0..m {
            let rel = tol.powf((m - k) as f64 / m as f64);
            if d.eval(z).norm() > rel * d.eval_scale(z).max(f64::MIN_POSITIVE) {
                return false;
            }
            d = d.derivative();
        }
        true
    };
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let d = (clusters[i].root - clusters[j].root).norm();
                if best.is_none_or(|b| d < b.2) {
                    best = Some((i, j, d));
                }
            }
        }
        let Some((i, j, _)) = best else { return clusters };
        let (a, b) = (clusters[i], clusters[j]);
        let m = a.multiplicity + b.multiplicity;
        let mean = (a.root * a.multiplicity as f64 + b.root * b.multiplicity as f64) / m as f64;
        if !vanishes(mean, m) {
            return clusters;
        }
        clusters[i] = RootCluster { root: mean, multiplicity: m };
        clusters.remove(j);
    }
}

fn cluster(z: &[Complex64], radius: f64) -> Vec<RootCluster> {
    let mut used = vec![false; z.len()];
    let mut out = Vec::new();
    for i in 0..z.len() {
        if used[i] {
            continue;
        }
        let members: Vec<usize> = (i..z.len()).filter(|&j| !used[j] && (z[j] - z[i]).norm() <= radius).collect();
        for &j in &members {
            used[j] = true;
        }
        let mean = members.iter().map(|&j| z[j]).sum::<Complex64>() / members.len() as f64;
        out.push(RootCluster { root: mean, multiplicity: members.len() });
    }
    out
}

/// `e^{2πik/N}` for `k = 0..N`.
pub fn roots_of_unity(n: usize) -> Result<Vec<Complex64>> {
    if n == 0 {
        return invalid("roots of unity of order 0");
    }
    Ok((0..n).map(|k| unit_root(k, n)).collect())
}

/// `e^{2πik/n}`, exact on the axes.
pub(crate) fn unit_root(k: usize, n: usize) -> Complex64 {
    let k = k % n;
    if (4 * k).is_multiple_of(n) {
        return match 4 * k / n {
            0 => c(1.0),
            1 => Complex64::new(0.0, 1.0),
            2 => c(-1.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

/// `sum_k (w^k)^s` over the roots of unity of order `n`.
pub fn unity_power_sum(n: usize, s: usize) -> Result<Complex64> {
    if n == 0 {
        return invalid("roots of unity of order 0");
    }
    Ok((0..n).map(|k| unit_root(k * s, n)).sum())
}

/// Whether `I, J, K` (counterclockwise) form an equilateral triangle.
pub fn equilateral_test(i: Complex64, j: Complex64, k: Complex64, tol: f64) -> bool {
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let scale = [i, j, k]
        .iter()
        .flat_map(|a| [i, j, k].map(|b| (a - b).norm()))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return true;
    }
    (i + w * j + w * w * k).norm() <= tol * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(coeffs: &[f64]) -> ComplexPolynomial {
        Polynomial::new(coeffs.iter().map(|&x| c(x)).collect())
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn quadratics() {
        let i = Complex64::new(0.0, 1.0);
        let (r1, r2) = solve_quadratic(c(1.0), c(0.0), c(1.0)).unwrap();
        assert!(close(r1, i, 1e-15) && close(r2, -i, 1e-15) || close(r1, -i, 1e-15) && close(r2, i, 1e-15));
        let (r1, r2) = solve_quadratic(c(1.0), c(-2.0), c(1.0)).unwrap();
        assert!(close(r1, c(1.0), 1e-12) && close(r2, c(1.0), 1e-12));
        let (r1, r2) = solve_quadratic(c(2.0), c(-3.0), c(1.0)).unwrap();
        let mut rs = [r1.re, r2.re];
        rs.sort_by(f64::total_cmp);
        assert_eq!(rs, [0.5, 1.0]);
        assert!(solve_quadratic(c(0.0), c(1.0), c(1.0)).is_err());
        // tiny root survives cancellation
        let (r1, r2) = solve_quadratic(c(1.0), c(1e8), c(1.0)).unwrap();
        let small = if r1.norm() < r2.norm() { r1 } else { r2 };
        assert!((small.re + 1e-8).abs() < 1e-20);
    }

    #[test]
    fn cardano_cases() {
        let (a, b, d) = cardano(0.0, 0.0);
        assert_eq!((a, b.norm(), d.norm()), (0.0, 0.0, 0.0));
        let (a, b, d) = cardano(-1.0, 1.0);
        assert!((a + 2.0).abs() < 1e-12);
        assert!(close(b, c(1.0), 1e-7) && close(d, c(1.0), 1e-7));
        let (a, b, d) = cardano(1.0, 1.0);
        assert!((a + 0.596071637983).abs() < 1e-9, "{a}");
        for z in [c(a), b, d] {
            let r = z * z * z + 3.0 * z + 2.0;
            assert!(r.norm() < 1e-9);
        }
        // three distinct real roots: (x-1)(x-2)(x+3) = x³ - 7x + 6
        let (a, b, d) = cardano(-7.0 / 3.0, 3.0);
        let mut rs = [a, b.re, d.re];
        rs.sort_by(f64::total_cmp);
        for (r, e) in rs.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((r - e).abs() < 1e-12);
        }
    }

    #[test]
    fn resultant_examples() {
        let (a, b, cc, d, e) = (2.0, -3.0, 5.0, 1.5, 4.0);
        let r = resultant(&cp(&[cc, b, a]), &cp(&[e, d])).unwrap();
        let expected = cc * d * d - b * d * e + a * e * e;
        assert!((r - c(expected)).norm() < 1e-12);
        let shared = resultant(&cp(&[-2.0, 1.0, 1.0]), &cp(&[-1.0, 1.0])).unwrap();
        assert!(shared.norm() < 1e-12);
        let p = cp(&[2.0, -3.0, 0.0, 1.0]);
        assert!(resultant(&p, &p.derivative()).unwrap().norm() < 1e-10);
        assert!(resultant(&ComplexPolynomial::zero(), &p).is_err());
        assert_eq!(resultant(&cp(&[3.0]), &cp(&[-1.0, 1.0])).unwrap(), c(3.0));
    }

    #[test]
    fn discriminants() {
        let (a, b, cc) = (2.0, 3.0, -4.0);
        let d = discriminant(&cp(&[cc, b, a])).unwrap();
        assert!((d - c(b * b - 4.0 * a * cc)).norm() < 1e-12);
        assert!((discriminant(&cp(&[1.0, 0.0, 1.0])).unwrap() - c(-4.0)).norm() < 1e-12);
        let (a, b, cc, d3): (f64, f64, f64, f64) = (1.0, -2.0, 0.5, 3.0);
        let closed = b * b * cc * cc - 4.0 * a * cc.powi(3) - 4.0 * b.powi(3) * d3 - 27.0 * a * a * d3 * d3
            + 18.0 * a * b * cc * d3;
        let got = discriminant(&cp(&[d3, cc, b, a])).unwrap();
        assert!((got - c(closed)).norm() <= 1e-9 * closed.abs());
        assert!(discriminant(&cp(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn durand_kerner() {
        let mut r: Vec<f64> = all_roots(&cp(&[-1.0, 0.0, 1.0]), 1e-12).unwrap().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] + 1.0).abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-12);
        let p = Polynomial::from_roots(c(1.0), &[c(1.0), c(2.0), c(3.0)]);
        let mut r: Vec<f64> = all_roots(&p, 1e-12).unwrap().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        for (x, e) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-10);
        }
        let double = all_roots_clustered(&cp(&[1.0, -2.0, 1.0]), 1e-10).unwrap();
        assert_eq!(double.len(), 1);
        assert_eq!(double[0].multiplicity, 2);
        assert!((double[0].root - c(1.0)).norm() < 1e-7);
        let p = cp(&[1.0, -2.0, 2.0, -2.0, 1.0]);
        let mut found = all_roots_clustered(&p, 1e-12).unwrap();
        found.sort_by_key(|c| std::cmp::Reverse(c.multiplicity));
        assert_eq!(found.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), [2, 1, 1]);
        assert!((found[0].root - c(1.0)).norm() < 1e-9);
        let triple = Polynomial::from_roots(c(1.0), &[c(0.5), c(0.5), c(0.5), c(-2.0)]);
        let found = all_roots_clustered(&triple, 1e-12).unwrap();
        assert_eq!(found.len(), 2, "{found:?}");
        for gap in [1e-3, 1e-5] {
            let close = Polynomial::from_roots(c(1.0), &[c(1.0), c(1.0 + gap)]);
            assert_eq!(all_roots_clustered(&close, 1e-12).unwrap().len(), 2, "gap {gap}");
        }
        let deg7 = Polynomial::from_roots(
            c(2.5),
            &[c(-1.0), c(0.5), Complex64::new(0.0, 2.0), Complex64::new(1.0, -1.0), c(3.0), c(-2.5), c(0.1)],
        );
        assert_eq!(all_roots(&deg7, 1e-10).unwrap().len(), 7);
    }

    #[test]
    fn unity() {
        let r4 = roots_of_unity(4).unwrap();
        assert_eq!(r4, vec![c(1.0), Complex64::new(0.0, 1.0), c(-1.0), Complex64::new(0.0, -1.0)]);
        assert_eq!(roots_of_unity(1).unwrap(), vec![c(1.0)]);
        assert!(roots_of_unity(0).is_err());
        assert!(unity_power_sum(3, 2).unwrap().norm() < 1e-15);
        assert!((unity_power_sum(3, 3).unwrap() - c(3.0)).norm() < 1e-15);
    }

    #[test]
    fn equilateral() {
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!(equilateral_test(c(1.0), w, w * w, 1e-12));
        assert!(!equilateral_test(c(0.0), c(1.0), c(2.0), 1e-6));
        // the clockwise labeling is not accepted
        assert!(!equilateral_test(c(1.0), w * w, w, 1e-6));
    }
}
