use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;

use super::harmonics::{spherical_harmonic, QuantumNumbers, SphericalHarmonic};
use super::polys::{assoc_laguerre, ExactPolynomial};
use crate::combinat::{factorial, rational_to_f64};
use crate::error::{invalid, Error, Result};
use crate::quad::gauss_legendre;
use crate::Estimate;

/// SI constants: Coulomb constant, electron charge, reduced Planck constant,
/// (reduced) electron mass, speed of light, Planck constant.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PhysicalConstants {
    pub coulomb: f64,
    pub charge: f64,
    pub hbar: f64,
    pub mass: f64,
    pub light_speed: f64,
    pub planck: f64,
}

const PLANCK_TOLERANCE: f64 = 1e-12;

impl PhysicalConstants {
    pub fn new(coulomb: f64, charge: f64, hbar: f64, mass: f64, light_speed: f64, planck: f64) -> Result<Self> {
        let c = Self { coulomb, charge, hbar, mass, light_speed, planck };
        if [coulomb, charge, hbar, mass, light_speed, planck].iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return invalid("physical constants must be positive and finite");
        }
        if !c.is_consistent() {
            return invalid(format!("hbar = {hbar:e} differs from h/2π = {:e}", planck / (2.0 * PI)));
        }
        Ok(c)
    }

    /// Four-digit textbook values. `ħ = 1.055e-34` is off from `h/2π` by
    /// about 4e-4, so this preset fails [`is_consistent`](Self::is_consistent).
    pub fn textbook() -> Self {
        Self {
            coulomb: 8.988e9,
            charge: 1.602e-19,
            hbar: 1.055e-34,
            mass: 9.109e-31,
            light_speed: 2.998e8,
            planck: 6.626e-34,
        }
    }

    /// CODATA 2018 with the electron–proton reduced mass, for line positions.
    pub fn codata_hydrogen() -> Self {
        let (me, mp) = (9.109_383_701_5e-31, 1.672_621_923_69e-27);
        let planck = 6.626_070_15e-34;
        Self {
            coulomb: 8.987_551_792_3e9,
            charge: 1.602_176_634e-19,
            hbar: planck / (2.0 * PI),
            mass: me * mp / (me + mp),
            light_speed: 299_792_458.0,
            planck,
        }
    }

    /// `K = e = ħ = m = c = 1`, `h = 2π`; then `a = 1` and `E_n = -1/(2n²)`.
    pub fn dimensionless() -> Self {
        Self { coulomb: 1.0, charge: 1.0, hbar: 1.0, mass: 1.0, light_speed: 1.0, planck: 2.0 * PI }
    }

    pub fn is_consistent(&self) -> bool {
        let h = self.planck / (2.0 * PI);
        ((self.hbar - h) / h).abs() <= PLANCK_TOLERANCE
    }

    fn ke2(&self) -> f64 {
        self.coulomb * self.charge * self.charge
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Energy {
    pub joules: f64,
    /// Joules divided by the preset's electron charge.
    pub ev: f64,
}

/// `E_n = -(m/2)(Ke²/ħ)²/n²`.
pub fn bohr_energy(n: u32, c: &PhysicalConstants) -> Result<Energy> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let joules = -0.5 * c.mass * (c.ke2() / c.hbar).powi(2) / (n as f64).powi(2);
    Ok(Energy { joules, ev: joules / c.charge })
}

/// `R = -E_1/(hc)`, per meter.
pub fn rydberg_constant(c: &PhysicalConstants) -> f64 {
    0.5 * c.mass * (c.ke2() / c.hbar).powi(2) / (c.planck * c.light_speed)
}

/// `a = ħ²/(mKe²)`, the mode of `r²ρ_10(r)²`.
pub fn bohr_radius(c: &PhysicalConstants) -> f64 {
    c.hbar * c.hbar / (c.mass * c.ke2())
}

/// `R(1/n1² - 1/n2²)` for `n1 <= n2`; zero when they coincide.
pub fn wavenumber(n1: u32, n2: u32, c: &PhysicalConstants) -> Result<f64> {
    if n1 == 0 || n1 > n2 {
        return invalid(format!("need 1 <= n1 <= n2, got {n1}, {n2}"));
    }
    let (a, b) = (n1 as f64, n2 as f64);
    Ok(rydberg_constant(c) * (1.0 / (a * a) - 1.0 / (b * b)))
}

/// Vacuum wavelength in meters of the `n2 -> n1` line.
pub fn line_wavelength(n1: u32, n2: u32, c: &PhysicalConstants) -> Result<f64> {
    if n1 >= n2 {
        return invalid(format!("need n1 < n2, got {n1}, {n2}"));
    }
    Ok(1.0 / wavenumber(n1, n2, c)?)
}

/// `n1²/R`, the `n2 -> ∞` end of the series.
pub fn series_limit(n1: u32, c: &PhysicalConstants) -> Result<f64> {
    if n1 == 0 {
        return invalid("n1 must be at least 1");
    }
    Ok((n1 as f64).powi(2) / rydberg_constant(c))
}

/// `|1/λ12 + 1/λ23 - 1/λ13|` for `n1 <= n2 <= n3`.
pub fn ritz_combination_gap(n1: u32, n2: u32, n3: u32, c: &PhysicalConstants) -> Result<f64> {
    if n2 > n3 {
        return invalid(format!("need n2 <= n3, got {n2}, {n3}"));
    }
    Ok((wavenumber(n1, n2, c)? + wavenumber(n2, n3, c)? - wavenumber(n1, n3, c)?).abs())
}

/// Standard-air index (Edlén) applied above 200 nm; shorter wavelengths are
/// returned unchanged, following the usual tabulation convention.
pub fn air_wavelength(vacuum: f64) -> f64 {
    let nm = vacuum * 1e9;
    if nm <= 200.0 {
        return vacuum;
    }
    let s2 = (1e3 / nm).powi(2);
    let n = 1.0 + 8.342_54e-5 + 2.406_147e-2 / (130.0 - s2) + 1.5998e-4 / (38.9 - s2);
    vacuum / n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpectralSeries {
    Lyman,
    Balmer,
    Paschen,
    Brackett,
    Pfund,
    Humphreys,
}

impl SpectralSeries {
    pub const ALL: [Self; 6] = [Self::Lyman, Self::Balmer, Self::Paschen, Self::Brackett, Self::Pfund, Self::Humphreys];

    pub fn lower_level(self) -> u32 {
        self as u32 + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Lyman => "lyman",
            Self::Balmer => "balmer",
            Self::Paschen => "paschen",
            Self::Brackett => "brackett",
            Self::Pfund => "pfund",
            Self::Humphreys => "humphreys",
        }
    }
}

impl fmt::Display for SpectralSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpectralSeries {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown series `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Medium {
    Vacuum,
    Air,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SpectralLine {
    pub n1: u32,
    /// `None` for the series limit.
    pub n2: Option<u32>,
    pub wavelength_nm: f64,
}

/// Lines `n2 = n1+1 ..= upto` followed by the series limit.
pub fn spectral_series(series: SpectralSeries, upto: u32, c: &PhysicalConstants, medium: Medium) -> Result<Vec<SpectralLine>> {
    let n1 = series.lower_level();
    let convert = |vac: f64| match medium {
        Medium::Vacuum => vac * 1e9,
        Medium::Air => air_wavelength(vac) * 1e9,
    };
    let mut out = Vec::new();
    for n2 in n1 + 1..=upto {
        out.push(SpectralLine { n1, n2: Some(n2), wavelength_nm: convert(line_wavelength(n1, n2, c)?) });
    }
    out.push(SpectralLine { n1, n2: None, wavelength_nm: convert(series_limit(n1, c)?) });
    Ok(out)
}

/// `ρ_nl(r) = √((2/na)³ (n-l-1)!/(2n(n+l)!)) e^{-r/na} (2r/na)^l L_{n-l-1}^{2l+1}(2r/na)`.
#[derive(Debug, Clone)]
pub struct RadialWavefunction {
    n: u32,
    l: u32,
    scale: f64,
    norm: f64,
    laguerre: Arc<ExactPolynomial>,
}

pub fn radial_wavefunction(n: u32, l: u32, c: &PhysicalConstants) -> Result<RadialWavefunction> {
    QuantumNumbers::new(n, l, 0)?;
    let scale = n as f64 * bohr_radius(c);
    let ratio = BigRational::new(factorial(n - l - 1), factorial(n + l) * (2 * n));
    let norm = ((2.0 / scale).powi(3) * rational_to_f64(&ratio)).sqrt();
    Ok(RadialWavefunction { n, l, scale, norm, laguerre: assoc_laguerre(2 * l + 1, n - l - 1) })
}

/// Radial integrals stop at `r = 40na`.
pub const RADIAL_CUTOFF: f64 = 40.0;

impl RadialWavefunction {
    pub fn eval(&self, r: f64) -> f64 {
        let x = 2.0 * r / self.scale;
        self.norm * (-x / 2.0).exp() * x.powi(self.l as i32) * self.laguerre.eval(x)
    }

    /// `r² ρ(r)²`.
    pub fn density(&self, r: f64) -> f64 {
        (r * self.eval(r)).powi(2)
    }

    /// `na`, with `a` the Bohr radius.
    pub fn length_scale(&self) -> f64 {
        self.scale
    }

    /// `∫_0^{40na} r²ρ² dr`, with `error` an upper bound on the omitted tail.
    pub fn normalization(&self) -> Estimate {
        let x_max = 2.0 * RADIAL_CUTOFF;
        let c = (self.norm * self.scale / 2.0).powi(2) * self.scale / 2.0;
        let f = |x: f64| x.powi(2 * self.l as i32 + 2) * (-x).exp() * self.laguerre.eval(x).powi(2);
        let value = c * composite_gauss(f, 0.0, x_max, 40);
        Estimate { value, error: c * self.tail_bound(x_max) }
    }

    /// `∫_X^∞ x^{2l+2} L̄(x)² e^{-x} dx` with `L̄` the polynomial of absolute
    /// coefficients, using `∫_X^∞ x^k e^{-x} = e^{-X} Σ_{i<=k} k!/i! X^i`.
    fn tail_bound(&self, x: f64) -> f64 {
        let abs: Vec<f64> = self.laguerre.coeffs().iter().map(|q| rational_to_f64(q).abs()).collect();
        let shift = 2 * self.l as usize + 2;
        let mut total = 0.0;
        for (i, a) in abs.iter().enumerate() {
            for (j, b) in abs.iter().enumerate() {
                let k = i + j + shift;
                let mut term = 1.0;
                let mut sum = 1.0;
                for t in (1..=k).rev() {
                    term *= t as f64 / x;
                    sum += term;
                }
                total += a * b * x.powi(k as i32) * sum;
            }
        }
        total * (-x).exp()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }
}

pub(crate) fn composite_gauss(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre(16);
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = a + h * (p as f64 + 0.5);
            rule.iter().map(|&(u, w)| w * f(mid + u * h / 2.0)).sum::<f64>() * h / 2.0
        })
        .sum()
}

/// `φ_nlm(r, s, t) = ρ_nl(r) Y_l^m(s, t)`.
#[derive(Debug, Clone)]
pub struct Wavefunction {
    pub qn: QuantumNumbers,
    radial: RadialWavefunction,
    angular: SphericalHarmonic,
}

pub fn wavefunction(qn: QuantumNumbers, c: &PhysicalConstants) -> Result<Wavefunction> {
    Ok(Wavefunction { qn, radial: radial_wavefunction(qn.n(), qn.l(), c)?, angular: spherical_harmonic(qn.l(), qn.m())? })
}

impl Wavefunction {
    pub fn eval(&self, r: f64, s: f64, t: f64) -> Complex64 {
        self.angular.eval(s, t) * self.radial.eval(r)
    }

    pub fn radial(&self) -> &RadialWavefunction {
        &self.radial
    }

    /// `∫ |φ|² r² sin s dr ds dt` over `r <= 40na`, by a tensor rule:
    /// composite Gauss–Legendre in `r`, Gauss–Legendre in `cos s`, uniform in `t`.
    pub fn total_probability(&self) -> f64 {
        let r_max = RADIAL_CUTOFF * self.radial.scale;
        let r_rule: Vec<(f64, f64)> = {
            let panels = 40;
            let h = r_max / panels as f64;
            let base = gauss_legendre(8);
            (0..panels)
                .flat_map(|p| {
                    let mid = h * (p as f64 + 0.5);
                    base.iter().map(move |&(u, w)| (mid + u * h / 2.0, w * h / 2.0)).collect::<Vec<_>>()
                })
                .collect()
        };
        let s_rule = gauss_legendre(2 * self.qn.l() as usize + 8);
        let nt = 2 * self.qn.m().unsigned_abs() as usize + 4;
        let dt = 2.0 * PI / nt as f64;
        let mut total = 0.0;
        for &(u, ws) in &s_rule {
            let s = u.acos();
            for k in 0..nt {
                let t = dt * k as f64;
                for &(r, wr) in &r_rule {
                    total += wr * ws * dt * r * r * self.eval(r, s, t).norm_sqr();
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_numbers() {
        let c = PhysicalConstants::textbook();
        assert!(!c.is_consistent());
        let e1 = bohr_energy(1, &c).unwrap();
        assert!((e1.joules + 2.177e-18).abs() < 0.001e-18);
        assert!((e1.ev + 13.591).abs() < 0.0005, "{}", e1.ev);
        assert!((bohr_energy(2, &c).unwrap().ev + 3.398).abs() < 0.0005);
        for n in 1..10 {
            assert!((bohr_energy(n, &c).unwrap().joules / e1.joules - 1.0 / (n * n) as f64).abs() < 1e-15);
        }
        assert!(bohr_energy(0, &c).is_err());
        assert!((rydberg_constant(&c) / 1.096e7 - 1.0).abs() < 5e-4);
        assert!((bohr_radius(&c) / 5.297e-11 - 1.0).abs() < 1e-4);
        let gamma = (-2.0 * c.mass * e1.joules).sqrt() / c.hbar;
        assert!((bohr_radius(&c) * gamma - 1.0).abs() < 1e-12);
    }

    #[test]
    fn presets() {
        let d = PhysicalConstants::dimensionless();
        assert!(d.is_consistent());
        assert_eq!(bohr_radius(&d), 1.0);
        assert_eq!(bohr_energy(1, &d).unwrap().joules, -0.5);
        let h = PhysicalConstants::codata_hydrogen();
        assert!(h.is_consistent());
        assert!((rydberg_constant(&h) / 1.096_775_83e7 - 1.0).abs() < 1e-8);
        assert!(PhysicalConstants::new(1.0, 1.0, 1.0, 1.0, 1.0, 6.0).is_err());
        assert!(PhysicalConstants::new(1.0, -1.0, 1.0, 1.0, 1.0, 2.0 * PI).is_err());
    }

    #[test]
    fn lines() {
        let h = PhysicalConstants::codata_hydrogen();
        let balmer = spectral_series(SpectralSeries::Balmer, 6, &h, Medium::Air).unwrap();
        for (line, want) in balmer.iter().zip([656.279, 486.135, 434.047, 410.173]) {
            assert!((line.wavelength_nm - want).abs() < 0.1, "{line:?}");
        }
        assert_eq!(balmer.last().unwrap().n2, None);
        let lyman = spectral_series(SpectralSeries::Lyman, 2, &h, Medium::Air).unwrap();
        assert!((lyman[0].wavelength_nm - 121.567).abs() < 0.01);
        assert!((lyman[1].wavelength_nm - 91.2).abs() < 0.05);
        assert!((series_limit(3, &h).unwrap() - 9.0 / rydberg_constant(&h)).abs() < 1e-20);
        assert!(line_wavelength(2, 2, &h).is_err());
        assert!("Pfund".parse::<SpectralSeries>().unwrap().lower_level() == 5);
        assert!("lymann".parse::<SpectralSeries>().is_err());
        for (n1, n2) in [(1, 2), (2, 5), (3, 7)] {
            let planck = (bohr_energy(n2, &h).unwrap().joules - bohr_energy(n1, &h).unwrap().joules) / (h.planck * h.light_speed);
            let inv = 1.0 / line_wavelength(n1, n2, &h).unwrap();
            assert!((planck / inv - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn ritz() {
        let c = PhysicalConstants::textbook();
        let r = rydberg_constant(&c);
        assert!(ritz_combination_gap(1, 2, 3, &c).unwrap() <= 1e-6 * r);
        assert_eq!(ritz_combination_gap(2, 2, 5, &c).unwrap(), 0.0);
        assert!(ritz_combination_gap(3, 11, 40, &c).unwrap() <= 1e-6 * r);
        assert!(ritz_combination_gap(1, 4, 3, &c).is_err());
    }

    #[test]
    fn radial_functions() {
        let c = PhysicalConstants::textbook();
        let a = bohr_radius(&c);
        let r10 = radial_wavefunction(1, 0, &c).unwrap();
        for r in [0.0, 0.5 * a, 3.0 * a] {
            let want = 2.0 * (-r / a).exp() / a.powf(1.5);
            assert!((r10.eval(r) / want - 1.0).abs() < 1e-13);
        }
        for n in 1..=5 {
            for l in 0..n {
                let est = radial_wavefunction(n, l, &c).unwrap().normalization();
                assert!((est.value - 1.0).abs() < 1e-10 && est.error < 1e-15, "{n} {l} {est:?}");
            }
        }
        assert!(radial_wavefunction(2, 2, &c).is_err());
        // the density r²ρ_10² peaks at r = a; its mean is 3a/2
        let d = PhysicalConstants::dimensionless();
        let r10 = radial_wavefunction(1, 0, &d).unwrap();
        let h = 1e-5;
        assert!((r10.density(1.0 + h) - r10.density(1.0 - h)).abs() < 1e-14);
        assert!(r10.density(1.0) > r10.density(0.99) && r10.density(1.0) > r10.density(1.01));
        let mean = composite_gauss(|r| r * r10.density(r), 0.0, 40.0, 40);
        assert!((mean - 1.5).abs() < 1e-12);
    }

    #[test]
    fn modified_radial_equation() {
        // E u = -(ħ²/2m) u'' + (-Ke²/r + ħ²l(l+1)/(2mr²)) u with u = rρ
        let c = PhysicalConstants::dimensionless();
        for (n, l) in [(1, 0), (2, 0), (2, 1), (3, 1), (3, 2), (4, 1)] {
            let rho = radial_wavefunction(n, l, &c).unwrap();
            let e = bohr_energy(n, &c).unwrap().joules;
            let u = |r: f64| r * rho.eval(r);
            let h = 1e-4;
            for i in 0..50 {
                let r = 0.1 + (20.0 - 0.1) * i as f64 / 49.0;
                let u2 = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
                let pot = -1.0 / r + (l * (l + 1)) as f64 / (2.0 * r * r);
                let terms = [e * u(r), 0.5 * u2, pot * u(r)];
                let res = terms[0] + terms[1] - terms[2];
                let size: f64 = terms.iter().map(|t| t.abs()).sum();
                assert!(res.abs() <= 1e-4 * size.max(1e-300), "n={n} l={l} r={r} res={res} size={size}");
            }
        }
    }

    #[test]
    fn full_wavefunctions() {
        let c = PhysicalConstants::textbook();
        let a = bohr_radius(&c);
        let phi = wavefunction(QuantumNumbers::new(1, 0, 0).unwrap(), &c).unwrap();
        let want = (-0.7f64).exp() / (PI * a.powi(3)).sqrt();
        assert!((phi.eval(0.7 * a, 1.0, 2.0).re / want - 1.0).abs() < 1e-13);
        let p = wavefunction(QuantumNumbers::new(2, 1, 0).unwrap(), &c).unwrap().total_probability();
        assert!((p - 1.0).abs() < 1e-4, "{p}");
        // Schrödinger in spherical coordinates with the separated solution
        let d = PhysicalConstants::dimensionless();
        let phi = wavefunction(QuantumNumbers::new(3, 2, -1).unwrap(), &d).unwrap();
        let e = bohr_energy(3, &d).unwrap().joules;
        let h = 1e-3;
        for (r, s, t) in [(1.5, 0.7, 0.3), (6.0, 2.0, -1.0), (12.0, 1.2, 2.5)] {
            let f = |r: f64, s: f64, t: f64| phi.eval(r, s, t);
            let v = f(r, s, t);
            let radial = ((r + h).powi(2) * (f(r + 2.0 * h, s, t) - v) - (r - h).powi(2) * (v - f(r - 2.0 * h, s, t)))
                / (4.0 * h * h * r * r);
            let ds = |s: f64| s.sin() * (f(r, s + h, t) - f(r, s - h, t)) / (2.0 * h);
            let polar = (ds(s + h) - ds(s - h)) / (2.0 * h * r * r * s.sin());
            let az = (f(r, s, t + h) - 2.0 * v + f(r, s, t - h)) / (h * h * r * r * s.sin().powi(2));
            let lap = radial + polar + az;
            let res = -0.5 * lap - v / r - v * e;
            assert!(res.norm() <= 1e-4 * (0.5 * lap.norm() + v.norm() / r + e.abs() * v.norm()), "r={r} res={res}");
        }
    }
}
