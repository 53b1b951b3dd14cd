//! Finite-difference calculus on `R^N`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{domain, invalid, Error, Result};
use crate::linalg::{classify_eigenvalues, solve, symmetric_eigen, unit_root, Definiteness, RealMatrix};
use crate::quad::gauss_legendre;

type FieldFn = dyn Fn(&[f64]) -> f64 + Send + Sync;

/// A real function on `R^N` (or an open subset of it).
#[derive(Clone)]
pub struct ScalarField {
    f: Arc<FieldFn>,
    dim: usize,
    domain: &'static str,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField").field("dim", &self.dim).field("domain", &self.domain).finish()
    }
}

impl ScalarField {
    pub fn new(dim: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), dim, domain: "R^N" }
    }

    pub fn with_domain(mut self, domain: &'static str) -> Self {
        self.domain = domain;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &'static str {
        self.domain
    }

    /// Fails on a wrong dimension or a non-finite value.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return invalid(format!("field on R^{} evaluated at a point of R^{}", self.dim, x.len()));
        }
        let v = (self.f)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            domain(format!("field is not finite at {x:?}"))
        }
    }

    /// Named test fields used by the command line.
    ///
    /// `bowl` (sum of squares), `saddle` (x² - y²), `cubic` (x³), `xy`,
    /// `re_z3` (x³ - 3xy²), `inv_r` (1/‖x‖ in R³), `log_r` (log ‖x‖ in R²).
    pub fn builtin(name: &str, dim: usize) -> Result<Self> {
        let need = |n: usize| if dim == n { Ok(()) } else { invalid(format!("`{name}` lives on R^{n}")) };
        Ok(match name {
            "bowl" => Self::new(dim, |x| x.iter().map(|v| v * v).sum()),
            "saddle" => {
                need(2)?;
                Self::new(2, |x| x[0] * x[0] - x[1] * x[1])
            }
            "cubic" => {
                need(1)?;
                Self::new(1, |x| x[0].powi(3))
            }
            "xy" => {
                need(2)?;
                Self::new(2, |x| x[0] * x[1])
            }
            "re_z3" => {
                need(2)?;
                Self::new(2, |x| x[0].powi(3) - 3.0 * x[0] * x[1] * x[1])
            }
            "inv_r" => {
                need(3)?;
                Self::new(3, |x| 1.0 / norm(x)).with_domain("R^3 minus the origin")
            }
            "log_r" => {
                need(2)?;
                Self::new(2, |x| norm(x).ln()).with_domain("R^2 minus the origin")
            }
            _ => return invalid(format!("unknown field `{name}`")),
        })
    }
}

pub const BUILTIN_FIELDS: [&str; 7] = ["bowl", "saddle", "cubic", "xy", "re_z3", "inv_r", "log_r"];

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn scale_of(x: &[f64]) -> f64 {
    1.0 + x.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// `ε^{1/3}(1 + ‖x‖_∞)`.
pub fn first_step(x: &[f64]) -> f64 {
    f64::EPSILON.cbrt() * scale_of(x)
}

/// `ε^{1/4}(1 + ‖x‖_∞)`.
pub fn second_step(x: &[f64]) -> f64 {
    f64::EPSILON.powf(0.25) * scale_of(x)
}

fn check_step(h: f64) -> Result<f64> {
    if h > 0.0 && h.is_finite() {
        Ok(h)
    } else {
        invalid("step must be positive")
    }
}

fn offset(x: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(i, d) in moves {
        y[i] += d;
    }
    y
}

/// Central differences; `h = None` picks [`first_step`].
pub fn gradient(f: &ScalarField, x: &[f64], h: Option<f64>) -> Result<Vec<f64>> {
    let h = check_step(h.unwrap_or_else(|| first_step(x)))?;
    f.eval(x)?;
    (0..x.len())
        .map(|i| Ok((f.eval(&offset(x, &[(i, h)]))? - f.eval(&offset(x, &[(i, -h)]))?) / (2.0 * h)))
        .collect()
}

/// `J_ij = ∂F_i/∂x_j` by central differences.
pub fn jacobian(f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], h: Option<f64>) -> Result<RealMatrix> {
    let h = check_step(h.unwrap_or_else(|| first_step(x)))?;
    let m = f(x).len();
    let mut cols = Vec::with_capacity(x.len());
    for j in 0..x.len() {
        let (up, down) = (f(&offset(x, &[(j, h)])), f(&offset(x, &[(j, -h)])));
        if up.len() != m || down.len() != m {
            return invalid("vector field changed its output dimension");
        }
        let col: Vec<f64> = up.iter().zip(&down).map(|(a, b)| (a - b) / (2.0 * h)).collect();
        if col.iter().any(|v| !v.is_finite()) {
            return domain(format!("vector field is not finite near {x:?}"));
        }
        cols.push(col);
    }
    Ok(RealMatrix::from_fn(m, x.len(), |i, j| cols[j][i]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hessian {
    /// `(H + Hᵗ)/2`.
    pub matrix: RealMatrix,
    /// `max |H_ij - H_ji|` of the raw estimate.
    pub raw_asymmetry: f64,
}

/// Diagonal entries from second differences; `H_ij` differentiates the
/// `h/2`-step derivative along `i` with step `h` along `j`, so the raw
/// estimate is only approximately symmetric.
pub fn hessian(f: &ScalarField, x: &[f64], h: Option<f64>) -> Result<Hessian> {
    let h = check_step(h.unwrap_or_else(|| second_step(x)))?;
    let n = x.len();
    let fx = f.eval(x)?;
    let k = h / 2.0;
    let mut raw = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            raw[(i, j)] = if i == j {
                (f.eval(&offset(x, &[(i, h)]))? - 2.0 * fx + f.eval(&offset(x, &[(i, -h)]))?) / (h * h)
            } else {
                let inner = |dj: f64| -> Result<f64> {
                    Ok((f.eval(&offset(x, &[(j, dj), (i, k)]))? - f.eval(&offset(x, &[(j, dj), (i, -k)]))?)
                        / (2.0 * k))
                };
                (inner(h)? - inner(-h)?) / (2.0 * h)
            };
        }
    }
    let raw_asymmetry = (&raw - &raw.transpose()).max_abs();
    let matrix = (&raw + &raw.transpose()).scale(0.5);
    Ok(Hessian { matrix, raw_asymmetry })
}

/// `sum_{k<=order} f^{(k)}(x) t^k / k!`, with the derivatives read off the
/// polynomial interpolating `f` at `x + j·s`, `|j| <= ⌈order/2⌉`.
pub fn taylor1d(f: impl Fn(f64) -> f64, x: f64, order: usize, t: f64) -> Result<f64> {
    let fx = f(x);
    if !fx.is_finite() {
        return domain(format!("f is not finite at {x}"));
    }
    if order == 0 {
        return Ok(fx);
    }
    let m = order.div_ceil(2);
    let pts = 2 * m + 1;
    let s = f64::EPSILON.powf(1.0 / (2 * m + 2) as f64) * (1.0 + x.abs());
    let v = RealMatrix::from_fn(pts, pts, |r, c| (r as f64 - m as f64).powi(c as i32));
    let samples: Vec<f64> = (0..pts).map(|r| f(x + s * (r as f64 - m as f64))).collect();
    if samples.iter().any(|v| !v.is_finite()) {
        return domain(format!("f is not finite near {x}"));
    }
    let a = solve(&v, &samples)?;
    let u = t / s;
    Ok((0..=order).rev().fold(0.0, |acc, k| acc * u + a[k]))
}

/// `f(x) + <∇f(x), t> + <H t, t>/2`.
pub fn taylor2_multi(f: &ScalarField, x: &[f64], t: &[f64]) -> Result<f64> {
    if t.len() != x.len() {
        return invalid("displacement and point differ in dimension");
    }
    let g = gradient(f, x, None)?;
    let h = hessian(f, x, None)?.matrix;
    let ht = h.mul_vec(t);
    let lin: f64 = g.iter().zip(t).map(|(a, b)| a * b).sum();
    let quad: f64 = ht.iter().zip(t).map(|(a, b)| a * b).sum();
    Ok(f.eval(x)? + lin + quad / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    Minimum,
    Maximum,
    Saddle,
    Degenerate,
    NotCritical,
}

impl CriticalKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Minimum => "minimum",
            Self::Maximum => "maximum",
            Self::Saddle => "saddle",
            Self::Degenerate => "degenerate",
            Self::NotCritical => "not_critical",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriticalReport {
    pub point: Vec<f64>,
    pub gradient_norm: f64,
    /// Eigenvalues of the symmetrized Hessian, largest first.
    pub eigenvalues: Vec<f64>,
    pub raw_asymmetry: f64,
    pub kind: CriticalKind,
}

pub const DEGENERATE_BAND: f64 = 1e-4;

/// Second-derivative test. Eigenvalues within `1e-4·‖H‖` of zero count as
/// zero, and any zero eigenvalue makes the point degenerate.
pub fn classify_critical(f: &ScalarField, x: &[f64], h: Option<f64>, tol: f64) -> Result<CriticalReport> {
    let g = gradient(f, x, None)?;
    let gradient_norm = norm(&g);
    let hess = hessian(f, x, h)?;
    let eig = symmetric_eigen(&hess.matrix, 1e-13)?;
    let hnorm = eig.values.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let kind = if gradient_norm > tol {
        CriticalKind::NotCritical
    } else {
        match classify_eigenvalues(&eig.values, hnorm, DEGENERATE_BAND) {
            Definiteness::PositiveDefinite => CriticalKind::Minimum,
            Definiteness::NegativeDefinite => CriticalKind::Maximum,
            Definiteness::Indefinite if eig.values.iter().all(|l| l.abs() > DEGENERATE_BAND * hnorm) => {
                CriticalKind::Saddle
            }
            _ => CriticalKind::Degenerate,
        }
    };
    Ok(CriticalReport { point: x.to_vec(), gradient_norm, eigenvalues: eig.values, raw_asymmetry: hess.raw_asymmetry, kind })
}

/// Sum of the second central differences.
pub fn laplacian(f: &ScalarField, x: &[f64], h: Option<f64>) -> Result<f64> {
    let h = check_step(h.unwrap_or_else(|| second_step(x)))?;
    let fx = f.eval(x)?;
    (0..x.len()).try_fold(0.0, |acc, i| {
        Ok(acc + (f.eval(&offset(x, &[(i, h)]))? - 2.0 * fx + f.eval(&offset(x, &[(i, -h)]))?) / (h * h))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicCheck {
    pub residuals: Vec<f64>,
    pub harmonic: bool,
}

pub fn is_harmonic(f: &ScalarField, samples: &[Vec<f64>], tol: f64) -> Result<HarmonicCheck> {
    let residuals = samples.iter().map(|x| laplacian(f, x, None)).collect::<Result<Vec<_>>>()?;
    let harmonic = residuals.iter().all(|r| r.abs() <= tol);
    Ok(HarmonicCheck { residuals, harmonic })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Sphere,
    Ball,
}

/// `|average of f over the sphere or ball - f(center)|` by product
/// quadrature: trapezoid in angles, Gauss–Legendre in `cos θ` and radius.
/// `samples` is the number of nodes per variable; `N` must be 2 or 3.
pub fn mean_value_gap(f: &ScalarField, center: &[f64], radius: f64, region: Region, samples: usize) -> Result<f64> {
    if !(radius > 0.0) {
        return invalid("radius must be positive");
    }
    if samples < 4 {
        return invalid("need at least 4 nodes per variable");
    }
    let n = center.len();
    let at = |dir: &[f64], r: f64| -> Result<f64> {
        let p: Vec<f64> = center.iter().zip(dir).map(|(c, d)| c + r * d).collect();
        f.eval(&p)
    };
    let sphere_avg = |r: f64| -> Result<f64> {
        match n {
            2 => {
                let mut s = 0.0;
                for k in 0..samples {
                    let a = 2.0 * PI * k as f64 / samples as f64;
                    s += at(&[a.cos(), a.sin()], r)?;
                }
                Ok(s / samples as f64)
            }
            3 => {
                let mut s = 0.0;
                for (u, w) in gauss_legendre(samples) {
                    let sin = (1.0 - u * u).sqrt();
                    for k in 0..samples {
                        let a = 2.0 * PI * k as f64 / samples as f64;
                        s += w * at(&[sin * a.cos(), sin * a.sin(), u], r)?;
                    }
                }
                Ok(s / (2.0 * samples as f64))
            }
            _ => invalid(format!("mean_value_gap supports N = 2 or 3, got {n}")),
        }
    };
    let avg = match region {
        Region::Sphere => sphere_avg(radius)?,
        Region::Ball => {
            // shells weighted by r^{N-1}, normalized by the ball volume R^N / N
            let mut s = 0.0;
            for (u, w) in gauss_legendre(samples) {
                let r = radius * (u + 1.0) / 2.0;
                s += w * radius / 2.0 * r.powi(n as i32 - 1) * sphere_avg(r)?;
            }
            s * n as f64 / radius.powi(n as i32)
        }
    };
    Ok((avg - f.eval(center)?).abs())
}

/// The Laplacian of `f(r, s, t)` in spherical coordinates, `s` polar and
/// `t` azimuthal:
/// `f_rr + 2f_r/r + (f_ss + cot(s) f_s)/r² + f_tt/(r² sin² s)`.
pub fn spherical_laplacian(f: impl Fn(f64, f64, f64) -> f64, r: f64, s: f64, t: f64, h: Option<f64>) -> Result<f64> {
    if !(r > 0.0) {
        return domain("spherical Laplacian needs r > 0");
    }
    if s.sin().abs() < 1e-8 {
        return domain("spherical Laplacian is singular on the polar axis");
    }
    let h = check_step(h.unwrap_or_else(|| f64::EPSILON.powf(0.25) * (1.0 + r.abs())))?;
    let hr = h.min(r / 2.0);
    let ha = f64::EPSILON.powf(0.25) * (1.0 + s.abs());
    let f0 = f(r, s, t);
    let d2 = |g: &dyn Fn(f64) -> f64, x: f64, k: f64| (g(x + k) - 2.0 * g(x) + g(x - k)) / (k * k);
    let d1 = |g: &dyn Fn(f64) -> f64, x: f64, k: f64| (g(x + k) - g(x - k)) / (2.0 * k);
    let fr = |v: f64| f(v, s, t);
    let fs = |v: f64| f(r, v, t);
    let ft = |v: f64| f(r, s, v);
    let value = d2(&fr, r, hr)
        + 2.0 / r * d1(&fr, r, hr)
        + (d2(&fs, s, ha) + s.cos() / s.sin() * d1(&fs, s, ha)) / (r * r)
        + d2(&ft, t, ha) / (r * r * s.sin() * s.sin());
    if !value.is_finite() || !f0.is_finite() {
        return domain(format!("field is not finite near (r, s, t) = ({r}, {s}, {t})"));
    }
    Ok(value)
}

/// `(1/n) sum_s f(x + t w^s)` with `w = e^{2πi/n}`.
pub fn unity_root_average(f: impl Fn(Complex64) -> Complex64, x: f64, t: f64, n: usize) -> Result<Complex64> {
    if n == 0 {
        return invalid("need n >= 1");
    }
    let sum: Complex64 = (0..n).map(|s| f(x + t * unit_root(s, n))).sum();
    Ok(sum / n as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolderCheck {
    /// The maximizer of `<x, y>` on the unit sphere of the p-norm.
    pub maximizer: Vec<f64>,
    /// `<maximizer, y>`.
    pub value: f64,
    /// `‖y‖_q` with `1/p + 1/q = 1`.
    pub dual_norm: f64,
    /// Norm of the part of `y` tangent to the p-sphere at the maximizer.
    pub tangential_gradient: f64,
    pub p_norm_of_maximizer: f64,
}

/// The Lagrange critical point `x_i = λ y_i^{1/(p-1)}`, `λ = (Σ y_i^q)^{-1/p}`.
pub fn holder_critical_check(y: &[f64], p: f64) -> Result<HolderCheck> {
    if !(p > 1.0) || !p.is_finite() {
        return invalid("Hölder exponent must satisfy 1 < p < ∞");
    }
    if y.is_empty() || y.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return invalid("entries of y must be positive");
    }
    let q = p / (p - 1.0);
    let sum_q: f64 = y.iter().map(|v| v.powf(q)).sum();
    let lambda = sum_q.powf(-1.0 / p);
    let x: Vec<f64> = y.iter().map(|v| lambda * v.powf(1.0 / (p - 1.0))).collect();
    let value = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let normal: Vec<f64> = x.iter().map(|v| p * v.powf(p - 1.0)).collect();
    let nn: f64 = normal.iter().map(|v| v * v).sum();
    let yn: f64 = y.iter().zip(&normal).map(|(a, b)| a * b).sum();
    let tangential_gradient = y.iter().zip(&normal).map(|(a, b)| (a - yn / nn * b).powi(2)).sum::<f64>().sqrt();
    let p_norm_of_maximizer = x.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p);
    Ok(HolderCheck { maximizer: x, value, dual_norm: sum_q.powf(1.0 / q), tangential_gradient, p_norm_of_maximizer })
}

/// Whether `U` is a critical point of `U ↦ Σ|U_ij|` on the orthogonal
/// group: `S Uᵗ` symmetric, with `S_ij = sgn U_ij` and `sgn 0 = 0`.
/// Nonzero entries within `tol` of zero have no reliable sign and are an error.
pub fn onorm_criticality(u: &RealMatrix, tol: f64) -> Result<bool> {
    check_orthogonal(u, tol)?;
    if let Some(v) = u.entries().iter().find(|v| **v != 0.0 && v.abs() <= tol) {
        return Err(Error::Degenerate(format!("entry {v:e} is within tol of 0, so its sign is ambiguous")));
    }
    let s = u.map(|v| if v == 0.0 { 0.0 } else { v.signum() });
    let sut = &s * &u.transpose();
    Ok((&sut - &sut.transpose()).max_abs() <= tol)
}

fn check_orthogonal(u: &RealMatrix, tol: f64) -> Result<()> {
    if !u.is_square() {
        return invalid("orthogonal matrix must be square");
    }
    let defect = (&(&u.transpose() * u) - &RealMatrix::identity(u.rows())).max_abs();
    if defect > tol {
        return invalid(format!("‖UᵗU - I‖ = {defect:e} exceeds tol"));
    }
    Ok(())
}

/// `d/dθ Σ|(U R_ij(θ))_kl|` at `θ = 0`, for each plane rotation `R_ij`,
/// by central differences with step `h`.
pub fn onorm_directional_derivatives(u: &RealMatrix, h: f64) -> Result<Vec<f64>> {
    check_orthogonal(u, 1e-8)?;
    let n = u.rows();
    let one_norm = |m: &RealMatrix| m.entries().iter().map(|v| v.abs()).sum::<f64>();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let rot = |th: f64| {
                let mut r = RealMatrix::identity(n);
                r[(i, i)] = th.cos();
                r[(j, j)] = th.cos();
                r[(i, j)] = -th.sin();
                r[(j, i)] = th.sin();
                r
            };
            out.push((one_norm(&(u * &rot(h))) - one_norm(&(u * &rot(-h)))) / (2.0 * h));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation(a: f64) -> RealMatrix {
        RealMatrix::from_rows(&[vec![a.cos(), -a.sin()], vec![a.sin(), a.cos()]]).unwrap()
    }

    #[test]
    fn gradient_and_hessian() {
        let f = ScalarField::builtin("bowl", 2).unwrap();
        let g = gradient(&f, &[1.0, 2.0], None).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-8 && (g[1] - 4.0).abs() < 1e-8);
        let c = ScalarField::new(3, |_| 5.0);
        assert!(gradient(&c, &[0.1, 0.2, 0.3], None).unwrap().iter().all(|v| *v == 0.0));
        let h = hessian(&ScalarField::builtin("xy", 2).unwrap(), &[0.3, -0.7], None).unwrap();
        let want = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((&h.matrix - &want).max_abs() < 1e-6);
    }

    #[test]
    fn jacobian_of_polar_map() {
        let j = jacobian(|p| vec![p[0] * p[1].cos(), p[0] * p[1].sin()], &[2.0, 0.5], None).unwrap();
        let det = j[(0, 0)] * j[(1, 1)] - j[(0, 1)] * j[(1, 0)];
        assert!((det - 2.0).abs() < 1e-8);
    }

    #[test]
    fn taylor() {
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(3);
        assert!((taylor1d(f, 0.3, 3, 0.8).unwrap() - f(1.1)).abs() < 1e-8);
        assert_eq!(taylor1d(f64::sin, 0.4, 0, 1.0).unwrap(), 0.4f64.sin());
        let e = (taylor1d(f64::sin, 0.0, 2, 0.1).unwrap() - 0.1f64.sin()).abs();
        assert!(e <= 0.1f64.powi(3) / 6.0);
        let q = ScalarField::new(2, |x| 1.0 + x[0] - 2.0 * x[1] + x[0] * x[1] + 3.0 * x[1] * x[1]);
        let v = taylor2_multi(&q, &[0.5, 0.5], &[0.2, -0.1]).unwrap();
        assert!((v - q.eval(&[0.7, 0.4]).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn critical_points() {
        let cls = |name, dim| classify_critical(&ScalarField::builtin(name, dim).unwrap(), &vec![0.0; dim], None, 1e-6).unwrap().kind;
        assert_eq!(cls("bowl", 2), CriticalKind::Minimum);
        assert_eq!(cls("saddle", 2), CriticalKind::Saddle);
        assert_eq!(cls("cubic", 1), CriticalKind::Degenerate);
        let r = classify_critical(&ScalarField::builtin("bowl", 2).unwrap(), &[1.0, 0.0], None, 1e-6).unwrap();
        assert_eq!(r.kind, CriticalKind::NotCritical);
        let m = ScalarField::new(2, |x| -(x[0] * x[0]) - 3.0 * x[1] * x[1]);
        assert_eq!(classify_critical(&m, &[0.0, 0.0], None, 1e-6).unwrap().kind, CriticalKind::Maximum);
    }

    #[test]
    fn harmonic_fields() {
        let pts: Vec<Vec<f64>> = vec![vec![0.5, 0.3], vec![-1.2, 0.7], vec![2.0, -1.0]];
        assert!(is_harmonic(&ScalarField::builtin("re_z3", 2).unwrap(), &pts, 1e-5).unwrap().harmonic);
        assert!(!is_harmonic(&ScalarField::builtin("bowl", 2).unwrap(), &pts, 1e-5).unwrap().harmonic);
        let inv = ScalarField::builtin("inv_r", 3).unwrap();
        assert!(laplacian(&inv, &[1.0, 0.5, -0.3], None).unwrap().abs() <= 1e-4);
        assert_eq!(laplacian(&ScalarField::new(2, |_| 1.0), &[0.0, 0.0], None).unwrap(), 0.0);
    }

    #[test]
    fn mean_values() {
        let log = ScalarField::builtin("log_r", 2).unwrap();
        assert!(mean_value_gap(&log, &[2.0, 1.0], 0.8, Region::Sphere, 64).unwrap() <= 1e-4);
        assert!(mean_value_gap(&log, &[2.0, 1.0], 0.8, Region::Ball, 32).unwrap() <= 1e-4);
        let x2 = ScalarField::new(2, |x| x[0] * x[0]);
        assert!((mean_value_gap(&x2, &[0.0, 0.0], 1.0, Region::Sphere, 32).unwrap() - 0.5).abs() < 1e-14);
        let inv = ScalarField::builtin("inv_r", 3).unwrap();
        assert!(mean_value_gap(&inv, &[2.0, 0.0, 1.0], 1.0, Region::Ball, 24).unwrap() < 1e-8);
        let c = ScalarField::new(3, |_| 2.5);
        assert!(mean_value_gap(&c, &[0.0; 3], 1.0, Region::Sphere, 8).unwrap() < 1e-14);
    }

    #[test]
    fn spherical_coordinates() {
        let r2 = spherical_laplacian(|r, _, _| r * r, 1.3, 0.9, 0.4, None).unwrap();
        assert!((r2 - 6.0).abs() < 1e-3);
        assert!(spherical_laplacian(|r, _, _| 1.0 / r, 1.3, 0.9, 0.4, None).unwrap().abs() < 1e-3);
        assert!(spherical_laplacian(|r, s, _| r * s.cos(), 1.3, 0.9, 0.4, None).unwrap().abs() < 1e-3);
        let xy = |r: f64, s: f64, t: f64| (r * s.sin()).powi(2) * t.cos() * t.sin();
        assert!(spherical_laplacian(xy, 1.1, 1.2, 0.3, None).unwrap().abs() < 1e-3);
        assert!(spherical_laplacian(|r, _, _| r, 1.0, 0.0, 0.0, None).is_err());
    }

    #[test]
    fn unity_roots() {
        let cube = |z: Complex64| z * z * z - 2.0 * z + 1.0;
        let avg = unity_root_average(cube, 0.7, 0.3, 4).unwrap();
        assert!((avg - cube(Complex64::new(0.7, 0.0))).norm() < 1e-14);
        let gap = unity_root_average(|z: Complex64| z.exp(), 0.0, 0.1, 3).unwrap() - 1.0;
        assert!((gap.re - 1e-3 / 6.0).abs() < 1e-8 && gap.im.abs() < 1e-15);
        let flat = unity_root_average(|z: Complex64| z.exp(), 0.5, 0.0, 5).unwrap();
        assert!((flat - 0.5f64.exp()).norm() < 1e-15);
    }

    #[test]
    fn holder() {
        let r = holder_critical_check(&[1.0, 1e-12, 1e-12], 3.0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
        let y = [0.3, 1.2, 0.7];
        let r = holder_critical_check(&y, 2.0).unwrap();
        let n2 = norm(&y);
        assert!((r.value - n2).abs() < 1e-12);
        assert!(r.maximizer.iter().zip(&y).all(|(a, b)| (a - b / n2).abs() < 1e-12));
        let r = holder_critical_check(&y, 3.0).unwrap();
        assert!((r.value - r.dual_norm).abs() < 1e-8 && r.tangential_gradient < 1e-10);
        assert!((r.p_norm_of_maximizer - 1.0).abs() < 1e-12);
        assert!(holder_critical_check(&[1.0, -1.0], 2.0).is_err());
    }

    #[test]
    fn one_norm_on_orthogonal_group() {
        assert!(onorm_criticality(&rotation(PI / 4.0), 1e-9).unwrap());
        assert!(!onorm_criticality(&rotation(PI / 6.0), 1e-9).unwrap());
        let d = onorm_directional_derivatives(&rotation(PI / 4.0), 1e-4).unwrap();
        assert!(d.iter().all(|v| v.abs() < 1e-6));
        assert!(onorm_criticality(&RealMatrix::identity(3), 1e-9).unwrap());
        let mut near = rotation(1e-12);
        near[(0, 1)] = -1e-12;
        assert!(matches!(onorm_criticality(&near, 1e-9), Err(Error::Degenerate(_))));
    }
}
