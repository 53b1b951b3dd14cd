use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);
    pub const E1: Self = Self::new(1.0, 0.0, 0.0);
    pub const E2: Self = Self::new(0.0, 1.0, 0.0);
    pub const E3: Self = Self::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        cross(self, o)
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

/// The 2×2-determinant rule.
pub fn cross(u: Vec3, v: Vec3) -> Vec3 {
    Vec3::new(u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x)
}

/// A velocity in units where `c = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Velocity3(Vec3);

const LIGHT_SLACK: f64 = 1e-12;

impl Velocity3 {
    pub fn new(v: Vec3) -> Result<Self> {
        if !(v.norm() <= 1.0 + LIGHT_SLACK) {
            return invalid(format!("speed {} exceeds c = 1", v.norm()));
        }
        Ok(Self(v))
    }

    pub fn vec(self) -> Vec3 {
        self.0
    }
}

/// `(u + v)/(1 + uv)`.
pub fn einstein_add_1d(u: f64, v: f64) -> Result<f64> {
    if u.abs() > 1.0 + LIGHT_SLACK || v.abs() > 1.0 + LIGHT_SLACK {
        return invalid("speeds must lie in [-1, 1]");
    }
    let d = 1.0 + u * v;
    if d == 0.0 {
        return Err(Error::Degenerate("opposite light-speed inputs".into()));
    }
    Ok((u + v) / d)
}

/// `(u + v + u×(u×v)/(1 + √(1 - ‖u‖²)))/(1 + <u, v>)`. Not commutative.
pub fn einstein_add_3d(u: Velocity3, v: Velocity3) -> Result<Velocity3> {
    let (u, v) = (u.0, v.0);
    let d = 1.0 + u.dot(v);
    if d <= f64::EPSILON {
        return Err(Error::Degenerate("antipodal light-speed inputs".into()));
    }
    // Within rounding of c the square root would amplify ε to √ε.
    let slack = 1.0 - u.dot(u);
    let gamma_term = 1.0 + if slack <= 4.0 * f64::EPSILON { 0.0 } else { slack.sqrt() };
    let w = (u + v + cross(u, cross(u, v)) * (1.0 / gamma_term)) * (1.0 / d);
    Ok(Velocity3(w))
}

/// `a + 2ω×v + ω×(ω×x)`: inertial acceleration of a point with position `x`,
/// velocity `v` and acceleration `a` measured in a frame rotating at `ω`.
pub fn rotating_acceleration(a: Vec3, omega: Vec3, v: Vec3, x: Vec3) -> Vec3 {
    a + cross(omega, v) * 2.0 + cross(omega, cross(omega, x))
}
