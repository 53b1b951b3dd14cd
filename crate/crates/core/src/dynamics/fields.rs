use std::f64::consts::PI;
use std::sync::Arc;

use super::vector::{cross, Vec3};
use crate::error::{domain, invalid, Result};
use crate::quad::gauss_legendre;

/// Point charges with Coulomb constant `k`; `ε₀ = 1/(4πk)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeConfig {
    charges: Vec<(f64, Vec3)>,
    pub k: f64,
}

impl ChargeConfig {
    pub fn new(charges: Vec<(f64, Vec3)>, k: f64) -> Result<Self> {
        if !(k > 0.0) {
            return invalid("Coulomb constant must be positive");
        }
        for (i, (_, p)) in charges.iter().enumerate() {
            if charges[..i].iter().any(|(_, q)| q == p) {
                return invalid(format!("two charges sit at {p:?}"));
            }
        }
        Ok(Self { charges, k })
    }

    /// Dimensionless units, `k = 1`.
    pub fn unit(charges: Vec<(f64, Vec3)>) -> Result<Self> {
        Self::new(charges, 1.0)
    }

    pub fn charges(&self) -> &[(f64, Vec3)] {
        &self.charges
    }

    pub fn epsilon0(&self) -> f64 {
        1.0 / (4.0 * PI * self.k)
    }

    /// `k Σ q (x - p)/‖x - p‖³`.
    pub fn field_at(&self, x: Vec3) -> Vec3 {
        self.charges.iter().fold(Vec3::ZERO, |acc, &(q, p)| {
            let d = x - p;
            let r = d.norm();
            acc + d * (self.k * q / (r * r * r))
        })
    }

    pub fn enclosed(&self, center: Vec3, radius: f64) -> f64 {
        self.charges.iter().filter(|(_, p)| (*p - center).norm() < radius).map(|(q, _)| q).sum()
    }
}

/// Nodes `(point on the unit sphere, weight)` with weights summing to `4π`:
/// Gauss–Legendre in `cos θ` times `2·order` equally spaced azimuths.
fn sphere_rule(order: usize) -> Vec<(Vec3, f64)> {
    let az = 2 * order;
    let mut out = Vec::with_capacity(order * az);
    for (u, w) in gauss_legendre(order) {
        let s = (1.0 - u * u).sqrt();
        for k in 0..az {
            let phi = 2.0 * PI * k as f64 / az as f64;
            out.push((Vec3::new(s * phi.cos(), s * phi.sin(), u), w * 2.0 * PI / az as f64));
        }
    }
    out
}

pub const DEFAULT_SPHERE_ORDER: usize = 64;

/// `∫_S <E, n>` over the sphere.
pub fn flux_through_sphere(cfg: &ChargeConfig, center: Vec3, radius: f64, order: usize) -> Result<f64> {
    if !(radius > 0.0) || order == 0 {
        return invalid("need radius > 0 and order >= 1");
    }
    if let Some((_, p)) = cfg.charges.iter().find(|(_, p)| ((*p - center).norm() - radius).abs() <= 1e-9 * radius) {
        return domain(format!("charge at {p:?} lies on the sphere"));
    }
    if cfg.charges.is_empty() {
        return Ok(0.0);
    }
    Ok(sphere_rule(order)
        .into_iter()
        .map(|(n, w)| w * radius * radius * cfg.field_at(center + n * radius).dot(n))
        .sum())
}

/// Both sides of an integral identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl IdentityCheck {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

type Radial = dyn Fn(f64) -> f64 + Send + Sync;

/// `{center + ρ r(θ)(cos θ, sin θ) : 0 <= ρ <= 1}` with a smooth positive
/// `2π`-periodic `r`, its boundary run counterclockwise.
#[derive(Clone)]
pub struct StarDomain {
    pub center: (f64, f64),
    radius: Arc<Radial>,
}

impl std::fmt::Debug for StarDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StarDomain").field("center", &self.center).finish_non_exhaustive()
    }
}

impl StarDomain {
    pub fn new(center: (f64, f64), radius: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { center, radius: Arc::new(radius) }
    }

    pub fn disk(center: (f64, f64), r: f64) -> Self {
        Self::new(center, move |_| r)
    }

    fn point(&self, rho: f64, th: f64) -> (f64, f64) {
        let r = (self.radius)(th) * rho;
        (self.center.0 + r * th.cos(), self.center.1 + r * th.sin())
    }
}

const DIFF_STEP: f64 = 1e-5;

/// `∮ P dx + Q dy` against `∬ (Q_x - P_y)`, with the partial derivatives
/// by central differences, the trapezoid rule in `θ` and Gauss–Legendre in `ρ`.
pub fn green_check(
    p: impl Fn(f64, f64) -> f64,
    q: impl Fn(f64, f64) -> f64,
    region: &StarDomain,
    nodes: usize,
) -> Result<IdentityCheck> {
    if nodes < 4 {
        return invalid("need at least 4 nodes");
    }
    let m = 4 * nodes;
    let dth = 2.0 * PI / m as f64;
    let h = DIFF_STEP;
    let mut line = 0.0;
    let mut area = 0.0;
    let radial = gauss_legendre(nodes);
    for k in 0..m {
        let th = k as f64 * dth;
        let (x, y) = region.point(1.0, th);
        let (xa, ya) = region.point(1.0, th + h);
        let (xb, yb) = region.point(1.0, th - h);
        line += (p(x, y) * (xa - xb) + q(x, y) * (ya - yb)) / (2.0 * h) * dth;
        let r = (region.radius)(th);
        for &(u, w) in &radial {
            let rho = (u + 1.0) / 2.0;
            let (x, y) = region.point(rho, th);
            let curl = (q(x + h, y) - q(x - h, y) - p(x, y + h) + p(x, y - h)) / (2.0 * h);
            area += curl * rho * r * r * w / 2.0 * dth;
        }
    }
    Ok(IdentityCheck { lhs: line, rhs: area })
}

/// `∫_0^1 <F(γ(s)), γ'(s)> ds` by Gauss–Legendre, `γ'` by central differences.
pub fn line_integral(f: impl Fn(Vec3) -> Vec3, curve: impl Fn(f64) -> Vec3, nodes: usize) -> f64 {
    let h = DIFF_STEP;
    gauss_legendre(nodes)
        .into_iter()
        .map(|(u, w)| {
            let s = (u + 1.0) / 2.0;
            let tangent = (curve(s + h) - curve(s - h)) * (1.0 / (2.0 * h));
            w / 2.0 * f(curve(s)).dot(tangent)
        })
        .sum()
}

pub fn curl(f: &impl Fn(Vec3) -> Vec3, x: Vec3) -> Vec3 {
    let h = DIFF_STEP;
    let d = |e: Vec3| (f(x + e * h) - f(x - e * h)) * (1.0 / (2.0 * h));
    let (dx, dy, dz) = (d(Vec3::E1), d(Vec3::E2), d(Vec3::E3));
    Vec3::new(dy.z - dz.y, dz.x - dx.z, dx.y - dy.x)
}

pub fn divergence(f: &impl Fn(Vec3) -> Vec3, x: Vec3) -> f64 {
    let h = DIFF_STEP;
    let d = |e: Vec3| (f(x + e * h) - f(x - e * h)) * (1.0 / (2.0 * h));
    d(Vec3::E1).x + d(Vec3::E2).y + d(Vec3::E3).z
}

/// `∬ <curl F, Φ_u × Φ_v> du dv` over `[0,1]²` against the line integral
/// around the image of the square's boundary, `(0,0) → (1,0) → (1,1) → (0,1)`.
pub fn stokes_check(f: impl Fn(Vec3) -> Vec3, patch: impl Fn(f64, f64) -> Vec3, nodes: usize) -> Result<IdentityCheck> {
    if nodes < 2 {
        return invalid("need at least 2 nodes");
    }
    let h = DIFF_STEP;
    let rule = gauss_legendre(nodes);
    let mut surface = 0.0;
    for &(a, wa) in &rule {
        for &(b, wb) in &rule {
            let (u, v) = ((a + 1.0) / 2.0, (b + 1.0) / 2.0);
            let pu = (patch(u + h, v) - patch(u - h, v)) * (1.0 / (2.0 * h));
            let pv = (patch(u, v + h) - patch(u, v - h)) * (1.0 / (2.0 * h));
            surface += wa * wb / 4.0 * curl(&f, patch(u, v)).dot(cross(pu, pv));
        }
    }
    let boundary = line_integral(&f, |s| patch(s, 0.0), nodes)
        + line_integral(&f, |s| patch(1.0, s), nodes)
        + line_integral(&f, |s| patch(1.0 - s, 1.0), nodes)
        + line_integral(&f, |s| patch(0.0, 1.0 - s), nodes);
    Ok(IdentityCheck { lhs: surface, rhs: boundary })
}

/// `∭_B div F` against `∬_{∂B} <F, n>` for a ball.
pub fn divergence_check(f: impl Fn(Vec3) -> Vec3, center: Vec3, radius: f64, order: usize) -> Result<IdentityCheck> {
    if !(radius > 0.0) || order == 0 {
        return invalid("need radius > 0 and order >= 1");
    }
    let sphere = sphere_rule(order);
    let mut volume = 0.0;
    for (u, w) in gauss_legendre(order) {
        let r = radius * (u + 1.0) / 2.0;
        let shell: f64 = sphere.iter().map(|&(n, wn)| wn * divergence(&f, center + n * r)).sum();
        volume += w * radius / 2.0 * r * r * shell;
    }
    let flux = sphere.iter().map(|&(n, w)| w * radius * radius * f(center + n * radius).dot(n)).sum();
    Ok(IdentityCheck { lhs: volume, rhs: flux })
}
