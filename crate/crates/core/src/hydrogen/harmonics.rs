use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::polys::{legendre, ExactPolynomial};
use crate::combinat::{factorial, rational_to_f64};
use crate::error::{invalid, Result};
use num_rational::BigRational;

/// `P_l^m(x) = (-1)^m (1 - x²)^{m/2} (d/dx)^m P_l(x)` for `|m| <= l`.
///
/// Negative `m` evaluates the `|m|` function; the harmonic carries the phase.
#[derive(Debug, Clone)]
pub struct LegendreFunction {
    l: u32,
    m: u32,
    derivative: Arc<ExactPolynomial>,
}

pub fn assoc_legendre(l: u32, m: i32) -> Result<LegendreFunction> {
    let am = m.unsigned_abs();
    if am > l {
        return invalid(format!("|m| = {am} exceeds l = {l}"));
    }
    let derivative = Arc::new(legendre(l).nth_derivative(am as usize));
    Ok(LegendreFunction { l, m: am, derivative })
}

impl LegendreFunction {
    pub fn degree(&self) -> u32 {
        self.l
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn eval(&self, x: f64) -> f64 {
        let m = self.m as i32;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let w = (1.0 - x * x).max(0.0);
        let factor = if m % 2 == 0 { w.powi(m / 2) } else { w.powi(m / 2) * w.sqrt() };
        sign * factor * self.derivative.eval(x)
    }
}

/// `Y_l^m(s, t) = N P_l^{|m|}(cos s) e^{imt}` with
/// `N = √((2l+1)/(4π) · (l-|m|)!/(l+|m|)!)`, times `(-1)^m` when `m < 0`,
/// so that `Y_l^{-m} = (-1)^m conj(Y_l^m)`.
#[derive(Debug, Clone)]
pub struct SphericalHarmonic {
    m: i32,
    norm: f64,
    legendre: LegendreFunction,
}

pub fn spherical_harmonic(l: u32, m: i32) -> Result<SphericalHarmonic> {
    let legendre = assoc_legendre(l, m)?;
    let am = m.unsigned_abs();
    let ratio = BigRational::new(factorial(l - am), factorial(l + am));
    let mut norm = ((2 * l + 1) as f64 / (4.0 * PI) * rational_to_f64(&ratio)).sqrt();
    if m < 0 && am % 2 == 1 {
        norm = -norm;
    }
    Ok(SphericalHarmonic { m, norm, legendre })
}

impl SphericalHarmonic {
    pub fn eval(&self, s: f64, t: f64) -> Complex64 {
        Complex64::from_polar(self.norm * self.legendre.eval(s.cos()), self.m as f64 * t)
    }

    pub fn l(&self) -> u32 {
        self.legendre.l
    }

    pub fn m(&self) -> i32 {
        self.m
    }
}

/// `(n, l, m)` with `0 <= l < n` and `|m| <= l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct QuantumNumbers {
    n: u32,
    l: u32,
    m: i32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        if n == 0 {
            return invalid("n must be at least 1");
        }
        if l >= n {
            return invalid(format!("l = {l} must be below n = {n}"));
        }
        if m.unsigned_abs() > l {
            return invalid(format!("|m| = {} exceeds l = {l}", m.unsigned_abs()));
        }
        Ok(Self { n, l, m })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn l(self) -> u32 {
        self.l
    }

    pub fn m(self) -> i32 {
        self.m
    }

    /// Every triple with principal number up to `n_max`.
    pub fn upto(n_max: u32) -> impl Iterator<Item = Self> {
        (1..=n_max).flat_map(|n| (0..n).flat_map(move |l| (-(l as i32)..=l as i32).map(move |m| Self { n, l, m })))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gauss_legendre;

    fn sphere_inner(a: &SphericalHarmonic, b: &SphericalHarmonic) -> Complex64 {
        let rule = gauss_legendre(24);
        let nt = 32;
        let mut acc = Complex64::new(0.0, 0.0);
        for &(u, w) in &rule {
            let s = u.acos();
            for k in 0..nt {
                let t = 2.0 * PI * k as f64 / nt as f64;
                acc += a.eval(s, t) * b.eval(s, t).conj() * w * 2.0 * PI / nt as f64;
            }
        }
        acc
    }

    #[test]
    fn legendre_functions() {
        let p11 = assoc_legendre(1, 1).unwrap();
        for x in [-0.7, 0.0, 0.3, 0.95] {
            assert!((p11.eval(x) + (1.0 - x * x).sqrt()).abs() < 1e-15);
            assert_eq!(assoc_legendre(3, 0).unwrap().eval(x), legendre(3).eval(x));
        }
        assert!(assoc_legendre(2, 3).is_err());
        // (1-x²)y'' - 2xy' + (l(l+1) - m²/(1-x²))y = 0
        let h = 1e-4;
        for l in 0..=5u32 {
            for m in 0..=l as i32 {
                let f = assoc_legendre(l, m).unwrap();
                for i in 1..20 {
                    let x = -0.9 + 0.09 * i as f64;
                    let (fm, f0, fp) = (f.eval(x - h), f.eval(x), f.eval(x + h));
                    let d1 = (fp - fm) / (2.0 * h);
                    let d2 = (fp - 2.0 * f0 + fm) / (h * h);
                    let k = (l * (l + 1)) as f64 - (m * m) as f64 / (1.0 - x * x);
                    let res = (1.0 - x * x) * d2 - 2.0 * x * d1 + k * f0;
                    assert!(res.abs() < 1e-6 * (1.0 + f0.abs() * 100.0), "l={l} m={m} x={x} res={res}");
                }
            }
        }
    }

    #[test]
    fn harmonic_normalization() {
        let y00 = spherical_harmonic(0, 0).unwrap();
        assert!((y00.eval(0.4, 1.0).re - 1.0 / (2.0 * PI.sqrt())).abs() < 1e-15);
        let all: Vec<_> = (0..=4u32).flat_map(|l| (-(l as i32)..=l as i32).map(move |m| (l, m))).collect();
        for &(l, m) in &all {
            let y = spherical_harmonic(l, m).unwrap();
            assert!((sphere_inner(&y, &y) - 1.0).norm() < 1e-6, "l={l} m={m}");
        }
        for &(l1, m1) in all.iter().filter(|p| p.0 <= 3) {
            for &(l2, m2) in all.iter().filter(|p| p.0 <= 3 && **p != (l1, m1)) {
                let ip = sphere_inner(&spherical_harmonic(l1, m1).unwrap(), &spherical_harmonic(l2, m2).unwrap());
                assert!(ip.norm() < 1e-6);
            }
        }
        let (a, b) = (spherical_harmonic(3, 2).unwrap(), spherical_harmonic(3, -2).unwrap());
        assert!((a.eval(0.7, 0.3).conj() - b.eval(0.7, 0.3)).norm() < 1e-15);
        let (a, b) = (spherical_harmonic(2, 1).unwrap(), spherical_harmonic(2, -1).unwrap());
        assert!((a.eval(0.7, 0.3).conj() + b.eval(0.7, 0.3)).norm() < 1e-15);
    }

    #[test]
    fn angular_equation() {
        // sin s ∂_s(sin s ∂_s Y) + ∂_t² Y + l(l+1) sin² s Y = 0
        let h = 1e-4;
        for (l, m) in [(0u32, 0i32), (1, 1), (2, -1), (3, 2), (4, 0), (4, -3)] {
            let y = spherical_harmonic(l, m).unwrap();
            for (s, t) in [(0.4f64, 0.2), (1.1, 2.0), (2.5, -1.0)] {
                let ds = |s: f64| s.sin() * (y.eval(s + h, t) - y.eval(s - h, t)) / (2.0 * h);
                let outer = s.sin() * (ds(s + h) - ds(s - h)) / (2.0 * h);
                let tt = (y.eval(s, t + h) - 2.0 * y.eval(s, t) + y.eval(s, t - h)) / (h * h);
                let res = outer + tt + y.eval(s, t) * ((l * (l + 1)) as f64 * s.sin().powi(2));
                assert!(res.norm() < 1e-5, "l={l} m={m} res={res}");
            }
        }
    }

    #[test]
    fn quantum_numbers() {
        assert!(QuantumNumbers::new(0, 0, 0).is_err());
        assert!(QuantumNumbers::new(2, 2, 0).is_err());
        assert!(QuantumNumbers::new(3, 1, -2).is_err());
        assert_eq!(QuantumNumbers::upto(3).count(), 1 + 4 + 9);
    }
}
