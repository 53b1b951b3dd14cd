use std::f64::consts::PI;

use super::vector::Vec3;
use crate::error::{domain, invalid, Error, Result};
use crate::linalg::{determinant, solve, RealMatrix};
use crate::quad::gauss_legendre;

/// Closed form for the time to fall from rest at `x0` to `x` under
/// `ẍ = -k/x²`.
pub fn gravity1d_time(x: f64, x0: f64, k: f64) -> Result<f64> {
    if !(x0 > 0.0) || !(k > 0.0) {
        return invalid("need x0 > 0 and k > 0");
    }
    if !(0.0..=x0).contains(&x) {
        return domain(format!("x = {x} is outside [0, {x0}]"));
    }
    let s = x / x0;
    Ok((x0.powi(3) / (2.0 * k)).sqrt() * ((s * (1.0 - s)).sqrt() + s.sqrt().acos()))
}

/// `π√(x0³/8k)`, the time to reach the origin.
pub fn gravity1d_stop_time(x0: f64, k: f64) -> Result<f64> {
    gravity1d_time(0.0, x0, k)
}

/// A planar state for `z̈ = -K z/‖z‖³`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitState {
    pub position: Vec3,
    pub velocity: Vec3,
    pub k: f64,
    pub time: f64,
}

const COLLISION_RADIUS: f64 = 1e-9;

impl OrbitState {
    pub fn new(position: Vec3, velocity: Vec3, k: f64) -> Result<Self> {
        if position.z != 0.0 || velocity.z != 0.0 {
            return invalid("orbit state must be planar (z = 0)");
        }
        if !(k > 0.0) {
            return invalid("gravitational parameter must be positive");
        }
        if !(position.norm() > COLLISION_RADIUS) {
            return domain("orbit starts at the centre");
        }
        Ok(Self { position, velocity, k, time: 0.0 })
    }

    pub fn radius(&self) -> f64 {
        self.position.norm()
    }

    /// `|v|²/2 - K/r`.
    pub fn energy(&self) -> f64 {
        self.velocity.dot(self.velocity) / 2.0 - self.k / self.radius()
    }

    /// `x v_y - y v_x`.
    pub fn angular_momentum(&self) -> f64 {
        self.position.x * self.velocity.y - self.position.y * self.velocity.x
    }
}

fn accel(p: [f64; 2], k: f64) -> Result<[f64; 2]> {
    let r = p[0].hypot(p[1]);
    if r < COLLISION_RADIUS {
        return Err(Error::Divergence("orbit collided with the centre".into()));
    }
    let s = -k / (r * r * r);
    Ok([s * p[0], s * p[1]])
}

/// One classical fourth-order Runge–Kutta step.
pub fn kepler_step(s: &OrbitState, dt: f64) -> Result<OrbitState> {
    if !(dt > 0.0) {
        return invalid("time step must be positive");
    }
    let (p, v) = ([s.position.x, s.position.y], [s.velocity.x, s.velocity.y]);
    let add = |a: [f64; 2], b: [f64; 2], h: f64| [a[0] + h * b[0], a[1] + h * b[1]];
    let k1v = accel(p, s.k)?;
    let k1p = v;
    let k2v = accel(add(p, k1p, dt / 2.0), s.k)?;
    let k2p = add(v, k1v, dt / 2.0);
    let k3v = accel(add(p, k2p, dt / 2.0), s.k)?;
    let k3p = add(v, k2v, dt / 2.0);
    let k4v = accel(add(p, k3p, dt), s.k)?;
    let k4p = add(v, k3v, dt);
    let comb = |y: [f64; 2], a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]| {
        [
            y[0] + dt / 6.0 * (a[0] + 2.0 * b[0] + 2.0 * c[0] + d[0]),
            y[1] + dt / 6.0 * (a[1] + 2.0 * b[1] + 2.0 * c[1] + d[1]),
        ]
    };
    let np = comb(p, k1p, k2p, k3p, k4p);
    let nv = comb(v, k1v, k2v, k3v, k4v);
    accel(np, s.k)?;
    Ok(OrbitState {
        position: Vec3::new(np[0], np[1], 0.0),
        velocity: Vec3::new(nv[0], nv[1], 0.0),
        k: s.k,
        time: s.time + dt,
    })
}

/// States at `0, dt, 2dt, ..`, with a shortened last step landing on `total`.
pub fn kepler_integrate(s: &OrbitState, total: f64, dt: f64) -> Result<Vec<OrbitState>> {
    if !(dt > 0.0) || !(total >= 0.0) {
        return invalid("need dt > 0 and a non-negative duration");
    }
    let steps = (total / dt).ceil() as usize;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(*s);
    let end = s.time + total;
    let mut cur = *s;
    for _ in 0..steps {
        let h = dt.min(end - cur.time);
        if h <= 0.0 {
            break;
        }
        cur = kepler_step(&cur, h)?;
        out.push(cur);
    }
    Ok(out)
}

/// Orbit `r = c - εx - δy`, in the frame rotated so the start lies on the
/// positive x-axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitParams {
    pub c: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// `r² θ̇`, equal to `±√(Kc)`.
    pub lambda: f64,
    /// Angle of the starting position; the conic lives in coordinates
    /// rotated by `-rotation`.
    pub rotation: f64,
}

impl OrbitParams {
    /// `x, y` of a point in the frame of the parameters.
    pub fn to_frame(&self, p: Vec3) -> (f64, f64) {
        let (s, c) = (-self.rotation).sin_cos();
        (c * p.x - s * p.y, s * p.x + c * p.y)
    }

    /// `|x² + y² - (εx + δy - c)²|` at `p`.
    pub fn conic_residual(&self, p: Vec3) -> f64 {
        let (x, y) = self.to_frame(p);
        (x * x + y * y - (self.epsilon * x + self.delta * y - self.c).powi(2)).abs()
    }

    /// `c/(1 - ε² - δ²)` for bound orbits.
    pub fn semi_major_axis(&self) -> Option<f64> {
        let e2 = self.epsilon * self.epsilon + self.delta * self.delta;
        (e2 < 1.0).then(|| self.c / (1.0 - e2))
    }

    pub fn period(&self, k: f64) -> Option<f64> {
        self.semi_major_axis().map(|a| 2.0 * PI * (a.powi(3) / k).sqrt())
    }
}

/// `λ = R²θ̇`, `c = λ²/K`, `ε = c/R - 1`, `δ = -ṙ c/λ` (which is `-ṙ√(c/K)`
/// for counterclockwise motion), after rotating the start onto the x-axis.
pub fn orbit_params(s: &OrbitState) -> Result<OrbitParams> {
    let r = s.radius();
    let rotation = s.position.y.atan2(s.position.x);
    let (sin, cos) = rotation.sin_cos();
    let v_r = s.velocity.x * cos + s.velocity.y * sin;
    let v_t = -s.velocity.x * sin + s.velocity.y * cos;
    let lambda = r * v_t;
    if lambda.abs() <= 1e-14 * r * s.velocity.norm().max(1.0) {
        return Err(Error::Degenerate("radial motion has no conic orbit".into()));
    }
    let c = lambda * lambda / s.k;
    Ok(OrbitParams { c, epsilon: c / r - 1.0, delta: -v_r * c / lambda, lambda, rotation })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicFit {
    pub c: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// `sup |x² + y² - (εx + δy - c)²|` over the points.
    pub residual: f64,
}

impl ConicFit {
    /// True when the fitted `ε` and the predicted one are both clearly
    /// nonzero and have opposite signs.
    pub fn epsilon_sign_disagrees(&self, predicted: &OrbitParams) -> bool {
        let band = 1e-9;
        self.epsilon.abs() > band && predicted.epsilon.abs() > band && self.epsilon.signum() != predicted.epsilon.signum()
    }
}

/// Least squares for `‖p‖ = c - εx - δy` over planar points given in the
/// frame where they should satisfy it.
pub fn fit_conic(points: &[(f64, f64)]) -> Result<ConicFit> {
    if points.len() < 3 {
        return invalid("conic fit needs at least 3 points");
    }
    let mut ata = RealMatrix::zeros(3, 3);
    let mut atb = vec![0.0; 3];
    for &(x, y) in points {
        let row = [1.0, -x, -y];
        let r = x.hypot(y);
        for i in 0..3 {
            atb[i] += row[i] * r;
            for j in 0..3 {
                ata[(i, j)] += row[i] * row[j];
            }
        }
    }
    let sol = solve(&ata, &atb)?;
    let (c, epsilon, delta) = (sol[0], sol[1], sol[2]);
    let residual = points
        .iter()
        .map(|&(x, y)| (x * x + y * y - (epsilon * x + delta * y - c).powi(2)).abs())
        .fold(0.0, f64::max);
    Ok(ConicFit { c, epsilon, delta, residual })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicKind {
    Ellipse,
    /// No real points: `x² + y² + 1 = 0`.
    ImaginaryEllipse,
    Parabola,
    Hyperbola,
    Point,
    IntersectingLines,
    ParallelLines,
    CoincidentLines,
    /// Degenerate with no real points.
    Empty,
    Line,
    /// All coefficients zero.
    Plane,
}

impl ConicKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ellipse => "ellipse",
            Self::ImaginaryEllipse => "imaginary_ellipse",
            Self::Parabola => "parabola",
            Self::Hyperbola => "hyperbola",
            Self::Point => "point",
            Self::IntersectingLines => "intersecting_lines",
            Self::ParallelLines => "parallel_lines",
            Self::CoincidentLines => "coincident_lines",
            Self::Empty => "empty",
            Self::Line => "line",
            Self::Plane => "plane",
        }
    }
}

const CONIC_BAND: f64 = 1e-12;

/// `ax² + bxy + cy² + dx + ey + f = 0`, by the sign of `b² - 4ac` and the
/// determinant of the 3×3 symmetric matrix of the form.
pub fn classify_conic(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> ConicKind {
    let scale = [a, b, c, d, e, f].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return ConicKind::Plane;
    }
    let [a, b, c, d, e, f] = [a, b, c, d, e, f].map(|v| v / scale);
    if a.abs().max(b.abs()).max(c.abs()) <= CONIC_BAND {
        return if d.abs().max(e.abs()) <= CONIC_BAND { ConicKind::Empty } else { ConicKind::Line };
    }
    let m = RealMatrix::from_rows(&[vec![a, b / 2.0, d / 2.0], vec![b / 2.0, c, e / 2.0], vec![d / 2.0, e / 2.0, f]])
        .expect("3x3");
    let det = determinant(&m).expect("square");
    let disc = b * b - 4.0 * a * c;
    let zero = |v: f64| v.abs() <= CONIC_BAND;
    if !zero(det) {
        if zero(disc) {
            ConicKind::Parabola
        } else if disc > 0.0 {
            ConicKind::Hyperbola
        } else if (a + c) * det < 0.0 {
            ConicKind::Ellipse
        } else {
            ConicKind::ImaginaryEllipse
        }
    } else if zero(disc) {
        // sum of the 2×2 principal minors that involve f
        let k = (a * f - d * d / 4.0) + (c * f - e * e / 4.0);
        if zero(k) {
            ConicKind::CoincidentLines
        } else if k < 0.0 {
            ConicKind::ParallelLines
        } else {
            ConicKind::Empty
        }
    } else if disc > 0.0 {
        ConicKind::IntersectingLines
    } else {
        ConicKind::Point
    }
}

/// `πab`.
pub fn ellipse_area(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return invalid("semi-axes must be positive");
    }
    Ok(PI * a * b)
}

/// `4∫_0^{π/2} √(a² sin² t + b² cos² t) dt` by Gauss–Legendre.
pub fn ellipse_length(a: f64, b: f64, nodes: usize) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return invalid("semi-axes must be positive");
    }
    if nodes == 0 {
        return invalid("need at least one node");
    }
    let half = PI / 4.0;
    let s: f64 = gauss_legendre(nodes)
        .into_iter()
        .map(|(u, w)| {
            let t = half * (u + 1.0);
            w * (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt()
        })
        .sum();
    Ok(4.0 * half * s)
}

/// `v ↦ ((‖v‖² - 1)/(‖v‖² + 1), 2v/(1 + ‖v‖²))`, onto the unit sphere minus
/// the point `(1, 0, .., 0)`.
pub fn stereographic_to_sphere(v: &[f64]) -> Vec<f64> {
    let n2: f64 = v.iter().map(|x| x * x).sum();
    let mut out = Vec::with_capacity(v.len() + 1);
    out.push((n2 - 1.0) / (n2 + 1.0));
    out.extend(v.iter().map(|x| 2.0 * x / (1.0 + n2)));
    out
}

/// `(c, x) ↦ x/(1 - c)`.
pub fn stereographic_to_plane(p: &[f64]) -> Result<Vec<f64>> {
    let (&c, x) = p.split_first().ok_or_else(|| Error::Invalid("empty point".into()))?;
    let d = 1.0 - c;
    if d.abs() <= f64::EPSILON {
        return domain("the pole (1, 0, .., 0) has no image");
    }
    Ok(x.iter().map(|v| v / d).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_body() {
        assert_eq!(gravity1d_time(2.0, 2.0, 1.5).unwrap(), 0.0);
        let stop = gravity1d_stop_time(2.0, 1.5).unwrap();
        assert!((stop - PI * (8.0f64 / (8.0 * 1.5)).sqrt()).abs() < 1e-14);
        assert!(gravity1d_time(3.0, 2.0, 1.0).is_err());
        // RK4 on (x, v) from rest at x0
        let (x0, k, target) = (2.0, 1.5, 0.7);
        let t = gravity1d_time(target, x0, k).unwrap();
        let n = 20_000;
        let h = t / n as f64;
        let f = |s: [f64; 2]| [s[1], -k / (s[0] * s[0])];
        let mut s = [x0, 0.0];
        for _ in 0..n {
            let a = f(s);
            let b = f([s[0] + h / 2.0 * a[0], s[1] + h / 2.0 * a[1]]);
            let c = f([s[0] + h / 2.0 * b[0], s[1] + h / 2.0 * b[1]]);
            let d = f([s[0] + h * c[0], s[1] + h * c[1]]);
            s = [
                s[0] + h / 6.0 * (a[0] + 2.0 * b[0] + 2.0 * c[0] + d[0]),
                s[1] + h / 6.0 * (a[1] + 2.0 * b[1] + 2.0 * c[1] + d[1]),
            ];
        }
        assert!((s[0] - target).abs() < 1e-4 * target);
    }

    #[test]
    fn circular_orbit() {
        let s = OrbitState::new(Vec3::new(2.0, 0.0, 0.0), Vec3::new(0.0, 0.5f64.sqrt(), 0.0), 1.0).unwrap();
        let p = orbit_params(&s).unwrap();
        assert!((p.c - 2.0).abs() < 1e-14 && p.epsilon.abs() < 1e-14 && p.delta == 0.0);
        let period = p.period(1.0).unwrap();
        let traj = kepler_integrate(&s, period, period / 2000.0).unwrap();
        let drift = traj.iter().map(|t| (t.radius() - 2.0).abs()).fold(0.0, f64::max);
        assert!(drift < 1e-6);
        assert!((traj.last().unwrap().time - period).abs() < 1e-12);
    }

    #[test]
    fn eccentric_orbit_round_trip() {
        // c = 1, ε = 0.5 starting at perihelion R = 2/3 with v = 3/2
        let s = OrbitState::new(Vec3::new(2.0 / 3.0, 0.0, 0.0), Vec3::new(0.0, 1.5, 0.0), 1.0).unwrap();
        let p = orbit_params(&s).unwrap();
        assert!((p.c - 1.0).abs() < 1e-14 && (p.epsilon - 0.5).abs() < 1e-14);
        let period = p.period(1.0).unwrap();
        assert!((period - 2.0 * PI * (4.0f64 / 3.0).powf(1.5)).abs() < 1e-12);
        let traj = kepler_integrate(&s, period, period / 1e4).unwrap();
        let e0 = s.energy();
        let j0 = s.angular_momentum();
        for t in &traj {
            assert!((t.energy() - e0).abs() <= 1e-6 * e0.abs());
            assert!((t.angular_momentum() - j0).abs() <= 1e-6 * j0.abs());
            assert!(p.conic_residual(t.position) < 1e-6);
        }
        let pts: Vec<_> = traj.iter().map(|t| p.to_frame(t.position)).collect();
        let fit = fit_conic(&pts).unwrap();
        assert!((fit.c - p.c).abs() < 1e-4 && (fit.epsilon - p.epsilon).abs() < 1e-4 && fit.delta.abs() < 1e-4);
        assert!(!fit.epsilon_sign_disagrees(&p));
        let flipped = ConicFit { epsilon: -fit.epsilon, ..fit };
        assert!(flipped.epsilon_sign_disagrees(&p));
    }

    #[test]
    fn radial_velocity_gives_delta() {
        let s = OrbitState::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.2, 1.1, 0.0), 1.0).unwrap();
        let p = orbit_params(&s).unwrap();
        assert!((0.2 - (-p.delta * (1.0 / p.c).sqrt())).abs() < 1e-14);
        let rotated = OrbitState::new(Vec3::new(0.0, 1.0, 0.0), Vec3::new(-1.1, 0.2, 0.0), 1.0).unwrap();
        let q = orbit_params(&rotated).unwrap();
        assert!((q.c - p.c).abs() < 1e-14 && (q.delta - p.delta).abs() < 1e-14);
        assert!((q.rotation - PI / 2.0).abs() < 1e-15);
        assert!(OrbitState::new(Vec3::new(1.0, 0.0, 0.1), Vec3::ZERO, 1.0).is_err());
        let radial = OrbitState::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(-0.5, 0.0, 0.0), 1.0).unwrap();
        assert!(orbit_params(&radial).is_err());
    }

    #[test]
    fn conics() {
        assert_eq!(classify_conic(1.0, 0.0, 1.0, 0.0, 0.0, -1.0), ConicKind::Ellipse);
        assert_eq!(classify_conic(0.0, 1.0, 0.0, 0.0, 0.0, -1.0), ConicKind::Hyperbola);
        assert_eq!(classify_conic(1.0, 0.0, 0.0, 0.0, -1.0, 0.0), ConicKind::Parabola);
        assert_eq!(classify_conic(1.0, 0.0, 1.0, 0.0, 0.0, 1.0), ConicKind::ImaginaryEllipse);
        assert_eq!(classify_conic(1.0, 0.0, -1.0, 0.0, 0.0, 0.0), ConicKind::IntersectingLines);
        assert_eq!(classify_conic(1.0, 0.0, 0.0, 0.0, 0.0, -1.0), ConicKind::ParallelLines);
        assert_eq!(classify_conic(1.0, 0.0, 0.0, 0.0, 0.0, 0.0), ConicKind::CoincidentLines);
        assert_eq!(classify_conic(1.0, 0.0, 0.0, 0.0, 0.0, 1.0), ConicKind::Empty);
        assert_eq!(classify_conic(1.0, 0.0, 1.0, 0.0, 0.0, 0.0), ConicKind::Point);
        assert_eq!(classify_conic(0.0, 0.0, 0.0, 1.0, 1.0, 0.0), ConicKind::Line);
        assert_eq!(classify_conic(0.0, 0.0, 0.0, 0.0, 0.0, 0.0), ConicKind::Plane);
    }

    #[test]
    fn ellipses() {
        assert!((ellipse_area(3.0, 2.0).unwrap() - 6.0 * PI).abs() < 1e-14);
        assert!((ellipse_length(1.0, 1.0, 8).unwrap() - 2.0 * PI).abs() < 1e-13);
        assert!((ellipse_length(2.0, 1.0, 64).unwrap() - 9.688448220547675).abs() < 1e-12);
    }

    #[test]
    fn stereographic() {
        assert_eq!(stereographic_to_sphere(&[0.0, 0.0]), vec![-1.0, 0.0, 0.0]);
        let v = [0.3, -1.7, 2.2];
        let p = stereographic_to_sphere(&v);
        assert!((p.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
        let back = stereographic_to_plane(&p).unwrap();
        assert!(back.iter().zip(v).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!(stereographic_to_plane(&[1.0, 0.0]).is_err());
    }
}
