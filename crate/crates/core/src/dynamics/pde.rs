use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{matrix_exp, RealMatrix};
use crate::quad::simpson;

/// `(g(x - vt) + g(x + vt))/2 + (1/2v)∫_{x-vt}^{x+vt} h`, the integral by
/// Simpson's rule.
pub fn dalembert(g: impl Fn(f64) -> f64, h: impl Fn(f64) -> f64, v: f64, x: f64, t: f64) -> Result<f64> {
    if !(v > 0.0) {
        return invalid("wave speed must be positive");
    }
    if t == 0.0 {
        return Ok(g(x));
    }
    let (lo, hi) = (x - v * t, x + v * t);
    Ok((g(lo) + g(hi)) / 2.0 + simpson(h, lo, hi, 2000) / (2.0 * v))
}

/// Samples on a uniform grid of `[a, b]` at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    a: f64,
    b: f64,
    values: Vec<f64>,
    pub time: f64,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() < 3 {
            return invalid("grid needs at least 3 samples");
        }
        if !(a < b) {
            return invalid("grid interval must have a < b");
        }
        Ok(Self { a, b, values, time })
    }

    pub fn from_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = (b - a) / (n.max(2) - 1) as f64;
        Self::new(a, b, (0..n).map(|i| f(a + h * i as f64)).collect(), 0.0)
    }

    pub fn dx(&self) -> f64 {
        (self.b - self.a) / (self.values.len() - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.a + self.dx() * i as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.x(i), v))
    }

    fn second_difference(&self, i: usize) -> f64 {
        self.values[i + 1] - 2.0 * self.values[i] + self.values[i - 1]
    }

    fn same_shape(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && self.values.len() == o.values.len()
    }
}

const STABILITY_SLACK: f64 = 1e-12;

fn courant(v: f64, dt: f64, dx: f64) -> Result<f64> {
    if !(v > 0.0) || !(dt > 0.0) {
        return invalid("need v > 0 and dt > 0");
    }
    let r = v * dt / dx;
    if r > 1.0 + STABILITY_SLACK {
        return Err(Error::Unstable(format!("Courant number {r} exceeds 1")));
    }
    Ok(r)
}

/// Leapfrog `u⁺ = 2u - u⁻ + r²(u_{i+1} - 2u_i + u_{i-1})`, `r = v dt/dx`,
/// with the end values held fixed.
pub fn wave_lattice_step(prev: &Grid1D, curr: &Grid1D, v: f64, dt: f64) -> Result<Grid1D> {
    if !prev.same_shape(curr) {
        return invalid("wave states live on different grids");
    }
    let r2 = courant(v, dt, curr.dx())?.powi(2);
    let n = curr.len();
    let mut next = curr.values.clone();
    for (i, slot) in next.iter_mut().enumerate().take(n - 1).skip(1) {
        *slot = 2.0 * curr.values[i] - prev.values[i] + r2 * curr.second_difference(i);
    }
    Ok(Grid1D { values: next, time: curr.time + dt, ..*curr })
}

/// First step from position `u0` and velocity samples, by the Taylor
/// expansion `u0 + dt·u̇ + (dt²/2) v² u''`.
pub fn wave_first_step(u0: &Grid1D, velocity: &[f64], v: f64, dt: f64) -> Result<Grid1D> {
    if velocity.len() != u0.len() {
        return invalid("velocity samples do not match the grid");
    }
    let r2 = courant(v, dt, u0.dx())?.powi(2);
    let n = u0.len();
    let mut next = u0.values.clone();
    for i in 1..n - 1 {
        next[i] = u0.values[i] + dt * velocity[i] + 0.5 * r2 * u0.second_difference(i);
    }
    Ok(Grid1D { values: next, time: u0.time + dt, ..*u0 })
}

/// Runs the wave lattice from `g` and `h` on `[a, b]` with `n` samples up to
/// time `t_final` (rounded to whole steps).
pub fn wave_simulate(
    g: impl Fn(f64) -> f64,
    h: impl Fn(f64) -> f64,
    (a, b, n): (f64, f64, usize),
    v: f64,
    dt: f64,
    t_final: f64,
) -> Result<Vec<Grid1D>> {
    let u0 = Grid1D::from_fn(a, b, n, g)?;
    let vel: Vec<f64> = (0..n).map(|i| h(u0.x(i))).collect();
    let steps = (t_final / dt).round() as usize;
    let mut frames = vec![u0.clone()];
    if steps == 0 {
        return Ok(frames);
    }
    frames.push(wave_first_step(&u0, &vel, v, dt)?);
    for _ in 1..steps {
        let k = frames.len();
        let next = wave_lattice_step(&frames[k - 2], &frames[k - 1], v, dt)?;
        frames.push(next);
    }
    Ok(frames)
}

/// Forward Euler `u⁺ = u + (α dt/dx²)(u_{i+1} - 2u_i + u_{i-1})` with fixed ends.
pub fn heat_lattice_step(u: &Grid1D, alpha: f64, dt: f64) -> Result<Grid1D> {
    if !(alpha > 0.0) || !(dt > 0.0) {
        return invalid("need alpha > 0 and dt > 0");
    }
    let r = alpha * dt / (u.dx() * u.dx());
    if r > 0.5 + STABILITY_SLACK {
        return Err(Error::Unstable(format!("α dt/dx² = {r} exceeds 1/2")));
    }
    let n = u.len();
    let mut next = u.values.clone();
    for (i, slot) in next.iter_mut().enumerate().take(n - 1).skip(1) {
        *slot += r * u.second_difference(i);
    }
    Ok(Grid1D { values: next, time: u.time + dt, ..*u })
}

/// `(4παt)^{-N/2} e^{-‖x‖²/4αt}`.
pub fn heat_kernel(alpha: f64, t: f64, x: &[f64]) -> Result<f64> {
    if !(t > 0.0) || !(alpha > 0.0) {
        return invalid("heat kernel needs t > 0 and alpha > 0");
    }
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let s = 4.0 * alpha * t;
    Ok((PI * s).powf(-(x.len() as f64) / 2.0) * (-r2 / s).exp())
}

/// `(K_t ∗ g)(x)` on the line, integrating over `x ± 12√(2αt)`.
pub fn heat_solve(g: impl Fn(f64) -> f64, alpha: f64, t: f64, x: f64) -> Result<f64> {
    heat_kernel(alpha, t, &[0.0])?;
    let w = 12.0 * (2.0 * alpha * t).sqrt();
    let s = 4.0 * alpha * t;
    let norm = 1.0 / (PI * s).sqrt();
    Ok(simpson(|y| norm * (-(x - y) * (x - y) / s).exp() * g(y), x - w, x + w, 4000))
}

/// Solution of `f'' = a f + b f'` with `f(0) = f0`, `f'(0) = f0p`.
///
/// With `r, s` the roots of `x² = a + bx` this is `γe^{rx} + δe^{sx}`, or
/// `(λx + μ)e^{rx}` for a double root; both are evaluated as
/// `e^{rx}(f0 + (f0p - r f0)·x·φ((s - r)x))` with `φ(z) = (e^z - 1)/z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ode2Solution {
    pub roots: (Complex64, Complex64),
    f0: f64,
    f0p: f64,
}

pub fn ode2_solve(a: f64, b: f64, f0: f64, f0p: f64) -> Ode2Solution {
    let disc = Complex64::new(b * b + 4.0 * a, 0.0).sqrt();
    let r = (b + disc) / 2.0;
    let s = (b - disc) / 2.0;
    Ode2Solution { roots: (r, s), f0, f0p }
}

fn phi(z: Complex64) -> Complex64 {
    if z.norm() > 1e-3 {
        (z.exp() - 1.0) / z
    } else {
        // 1 + z/2 + z²/6 + ...
        (1..10).rev().fold(Complex64::new(1.0, 0.0), |acc, k| 1.0 + acc * z / (k + 1) as f64)
    }
}

impl Ode2Solution {
    pub fn eval(&self, x: f64) -> f64 {
        let (r, s) = self.roots;
        let lead = (r * x).exp();
        (lead * (self.f0 + (self.f0p - r * self.f0) * x * phi((s - r) * x))).re
    }

    pub fn is_double_root(&self) -> bool {
        self.roots.0 == self.roots.1
    }
}

/// `f(x)` from `e^{Ax}(f0, f0p)` with `A = [[0, 1], [a, b]]`.
pub fn ode2_companion(a: f64, b: f64, f0: f64, f0p: f64, x: f64) -> Result<f64> {
    let m = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![a, b]])?;
    Ok(matrix_exp(&m, x)?.mul_vec(&[f0, f0p])[0])
}
