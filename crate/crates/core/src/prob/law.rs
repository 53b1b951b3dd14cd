use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

type DensityFn = dyn Fn(f64) -> f64 + Send + Sync;

/// One absolutely continuous piece of a law.
#[derive(Clone)]
pub enum DensityPart {
    /// A density given by a formula on `[a, b]`, possibly with integrable
    /// inverse-square-root blow-ups at the ends.
    Analytic { f: Arc<DensityFn>, support: (f64, f64) },
    /// Cell masses `h·values[i]` centred at `x0 + i·h`.
    Tabulated { x0: f64, h: f64, values: Vec<f64> },
}

impl fmt::Debug for DensityPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Analytic { support, .. } => f.debug_struct("Analytic").field("support", support).finish(),
            Self::Tabulated { x0, h, values } => f
                .debug_struct("Tabulated")
                .field("x0", x0)
                .field("h", h)
                .field("cells", &values.len())
                .finish(),
        }
    }
}

const ANALYTIC_PANELS: usize = 250;
const PANEL_NODES: usize = 16;

/// Composite Gauss–Legendre nodes and weights on `[0, π]`.
fn theta_rule(panels: usize) -> impl Iterator<Item = (f64, f64)> {
    let rule = crate::quad::gauss_legendre(PANEL_NODES);
    let half = PI / panels as f64 / 2.0;
    (0..panels).flat_map(move |p| {
        let mid = (2 * p + 1) as f64 * half;
        rule.clone().into_iter().map(move |(u, w)| (mid + half * u, w * half))
    })
}

impl DensityPart {
    pub fn analytic(support: (f64, f64), f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::Analytic { f: Arc::new(f), support }
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            Self::Analytic { support, .. } => *support,
            Self::Tabulated { x0, h, values } => (x0 - h / 2.0, x0 + h * (values.len() as f64 - 0.5)),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Analytic { f, support: (a, b) } => {
                if x > *a && x < *b {
                    f(x)
                } else {
                    0.0
                }
            }
            Self::Tabulated { x0, h, values } => {
                let n = values.len();
                let u = (x - x0) / h;
                if u < -0.5 || u > n as f64 - 0.5 {
                    return 0.0;
                }
                if n == 1 {
                    return values[0];
                }
                let u = u.clamp(0.0, (n - 1) as f64);
                let i = (u.floor() as usize).min(n - 2);
                let s = u - i as f64;
                values[i] + s * (values[i + 1] - values[i])
            }
        }
    }

    /// `∫ g(x) f(x) dx` for a smooth `g`.
    ///
    /// Analytic parts use `x = a + (b-a)(1 - cos θ)/2`, which turns square-root
    /// edge behaviour into smooth integrands in `θ`, then composite
    /// Gauss–Legendre; tabulated parts sum nodes.
    pub fn integrate<T>(&self, g: impl Fn(f64) -> T) -> T
    where
        T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    {
        match self {
            Self::Analytic { f, support: (a, b) } => {
                theta_rule(ANALYTIC_PANELS).fold(T::default(), |acc, (th, w)| {
                    let x = a + (b - a) * (1.0 - th.cos()) / 2.0;
                    acc + g(x) * (w * f(x) * (b - a) / 2.0 * th.sin())
                })
            }
            Self::Tabulated { x0, h, values } => values
                .iter()
                .enumerate()
                .fold(T::default(), |acc, (i, &v)| acc + g(x0 + h * i as f64) * (v * h)),
        }
    }

    pub fn mass(&self) -> f64 {
        self.integrate(|_| 1.0)
    }

    fn shifted(&self, by: f64, weight: f64) -> Self {
        match self {
            Self::Analytic { f, support: (a, b) } => {
                let f = f.clone();
                Self::analytic((a + by, b + by), move |x| weight * f(x - by))
            }
            Self::Tabulated { x0, h, values } => {
                Self::Tabulated { x0: x0 + by, h: *h, values: values.iter().map(|v| v * weight).collect() }
            }
        }
    }

    fn dilated(&self, c: f64) -> Self {
        match self {
            Self::Analytic { f, support: (a, b) } => {
                let f = f.clone();
                Self::analytic((a * c, b * c), move |x| f(x / c) / c)
            }
            Self::Tabulated { x0, h, values } => {
                Self::Tabulated { x0: x0 * c, h: h * c, values: values.iter().map(|v| v / c).collect() }
            }
        }
    }

    /// Node values (mass divided by `h`) on the nodes `lo + (i - 1/2)·h`,
    /// `i < cells + 2`. Each cell's mass is split over its centre and the two
    /// neighbouring nodes so that its mass, mean and second moment are kept;
    /// the outer weights can dip slightly below zero next to steep edges.
    fn tabulate(&self, lo: f64, h: f64, cells: usize) -> Vec<f64> {
        let mut nodes = vec![0.0; cells + 2];
        let mut deposit = |k: usize, m: f64, m1: f64, m2: f64| {
            let (q1, q2) = (m1 / h, m2 / (h * h));
            nodes[k] += (q2 - q1) / 2.0 / h;
            nodes[k + 1] += (m - q2) / h;
            nodes[k + 2] += (q2 + q1) / 2.0 / h;
        };
        match self {
            Self::Analytic { f, support: (a, b) } => {
                let theta = |x: f64| (1.0 - 2.0 * (x - a) / (b - a)).clamp(-1.0, 1.0).acos();
                let rule = crate::quad::gauss_legendre(8);
                for i in 0..cells {
                    let (x_lo, x_hi) = (lo + h * i as f64, lo + h * (i + 1) as f64);
                    if x_hi <= *a || x_lo >= *b {
                        continue;
                    }
                    let c = lo + h * (i as f64 + 0.5);
                    let (t0, t1) = (theta(x_lo.max(*a)), theta(x_hi.min(*b)));
                    let (mid, half) = ((t0 + t1) / 2.0, (t1 - t0) / 2.0);
                    let (mut m, mut m1, mut m2) = (0.0, 0.0, 0.0);
                    for (u, w) in &rule {
                        let th = mid + half * u;
                        let x = a + (b - a) * (1.0 - th.cos()) / 2.0;
                        let g = w * half * f(x) * (b - a) / 2.0 * th.sin();
                        m += g;
                        m1 += g * (x - c);
                        m2 += g * (x - c) * (x - c);
                    }
                    deposit(i, m, m1, m2);
                }
            }
            Self::Tabulated { x0, h: own_h, values } => {
                for (j, &v) in values.iter().enumerate() {
                    let x = x0 + own_h * j as f64;
                    let i = (((x - lo) / h - 0.5).round().max(0.0) as usize).min(cells - 1);
                    let u = x - (lo + h * (i as f64 + 0.5));
                    let m = v * own_h;
                    deposit(i, m, m * u, m * u * u);
                }
            }
        }
        nodes
    }
}

/// A probability law: finitely many atoms plus an absolutely continuous part.
#[derive(Debug, Clone)]
pub struct Law {
    atoms: Vec<(f64, f64)>,
    density: Vec<DensityPart>,
}

const MASS_TOL: f64 = 1e-9;

impl Law {
    pub fn new(atoms: Vec<(f64, f64)>, density: Vec<DensityPart>) -> Result<Self> {
        if let Some(&(x, p)) = atoms.iter().find(|(x, p)| !(x.is_finite() && *p >= 0.0 && *p <= 1.0)) {
            return invalid(format!("bad atom: mass {p} at {x}"));
        }
        let law = Self { atoms: merge_atoms(atoms), density };
        let mass = law.mass();
        if (mass - 1.0).abs() > MASS_TOL {
            return invalid(format!("total mass {mass} differs from 1"));
        }
        Ok(law)
    }

    pub fn dirac(a: f64) -> Self {
        Self { atoms: vec![(a, 1.0)], density: Vec::new() }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn density_parts(&self) -> &[DensityPart] {
        &self.density
    }

    pub fn is_atomic(&self) -> bool {
        self.density.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum::<f64>() + self.density.iter().map(DensityPart::mass).sum::<f64>()
    }

    /// Density of the continuous part at `x`.
    pub fn density_at(&self, x: f64) -> f64 {
        self.density.iter().map(|d| d.eval(x)).sum()
    }

    pub fn expect(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.atoms.iter().map(|&(x, p)| p * g(x)).sum::<f64>()
            + self.density.iter().map(|d| d.integrate(&g)).sum::<f64>()
    }

    pub fn moments(&self, upto: usize) -> Result<MomentSequence> {
        let mut m = vec![0.0; upto + 1];
        for &(x, p) in &self.atoms {
            let mut xp = p;
            for mk in m.iter_mut() {
                *mk += xp;
                xp *= x;
            }
        }
        for part in &self.density {
            let parts: Vec<f64> = (0..=upto).map(|k| part.integrate(|x| x.powi(k as i32))).collect();
            for (mk, v) in m.iter_mut().zip(parts) {
                *mk += v;
            }
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence("moment integral is not finite".into()));
        }
        MomentSequence::new(m)
    }

    pub fn mean(&self) -> f64 {
        self.expect(|x| x)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.expect(|x| (x - m) * (x - m))
    }

    /// `E e^{iyX}`.
    pub fn fourier(&self, y: f64) -> Complex64 {
        let atoms: Complex64 = self.atoms.iter().map(|&(x, p)| Complex64::from_polar(p, y * x)).sum();
        let dens: Complex64 = self.density.iter().map(|d| d.integrate(|x| Complex64::from_polar(1.0, y * x))).sum();
        atoms + dens
    }

    /// Law of `X + a`.
    pub fn shift(&self, a: f64) -> Self {
        Self {
            atoms: self.atoms.iter().map(|&(x, p)| (x + a, p)).collect(),
            density: self.density.iter().map(|d| d.shifted(a, 1.0)).collect(),
        }
    }

    /// Law of `cX` for `c > 0`.
    pub fn dilate(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return invalid("dilation factor must be positive");
        }
        Ok(Self {
            atoms: self.atoms.iter().map(|&(x, p)| (c * x, p)).collect(),
            density: self.density.iter().map(|d| d.dilated(c)).collect(),
        })
    }
}

fn merge_atoms(mut atoms: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    atoms.retain(|a| a.1 > 0.0);
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
    for (x, p) in atoms {
        match out.last_mut() {
            Some(last) if last.0 == x => last.1 += p,
            _ => out.push((x, p)),
        }
    }
    out
}

/// `M_0, ..., M_n` with `M_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence(Vec<f64>);

impl MomentSequence {
    pub fn new(m: Vec<f64>) -> Result<Self> {
        match m.first() {
            None => invalid("empty moment sequence"),
            Some(m0) if (m0 - 1.0).abs() > 1e-8 => invalid(format!("M_0 = {m0}, expected 1")),
            _ if m.iter().any(|v| !v.is_finite()) => invalid("moment sequence has non-finite entries"),
            _ => Ok(Self(m)),
        }
    }

    pub fn get(&self, k: usize) -> Option<f64> {
        self.0.get(k).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl std::ops::Index<usize> for MomentSequence {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

const GRID_CELLS: usize = 8000;

/// Law of `X + Y` for independent `X ~ a`, `Y ~ b`.
///
/// Atom pairs are combined exactly; an atom against a density shifts it;
/// two densities are put on a common grid and convolved cell by cell.
pub fn convolve(a: &Law, b: &Law) -> Result<Law> {
    let mut atoms = Vec::with_capacity(a.atoms.len() * b.atoms.len());
    for &(x, p) in &a.atoms {
        for &(y, q) in &b.atoms {
            atoms.push((x + y, p * q));
        }
    }
    let mut density = Vec::new();
    for &(x, p) in &a.atoms {
        density.extend(b.density.iter().map(|d| d.shifted(x, p)));
    }
    for &(y, q) in &b.atoms {
        density.extend(a.density.iter().map(|d| d.shifted(y, q)));
    }
    for da in &a.density {
        for db in &b.density {
            density.push(grid_convolve(da, db));
        }
    }
    Law::new(atoms, density)
}

fn grid_convolve(a: &DensityPart, b: &DensityPart) -> DensityPart {
    let (a_lo, a_hi) = a.support();
    let (b_lo, b_hi) = b.support();
    let h = (a_hi - a_lo).max(b_hi - b_lo) / GRID_CELLS as f64;
    let cells = |lo: f64, hi: f64| (((hi - lo) / h).ceil() as usize).max(1);
    let (na, nb) = (cells(a_lo, a_hi), cells(b_lo, b_hi));
    let fa = a.tabulate(a_lo, h, na);
    let fb = b.tabulate(b_lo, h, nb);
    let mut out = vec![0.0; na + nb + 3];
    for (i, &u) in fa.iter().enumerate() {
        if u == 0.0 {
            continue;
        }
        for (j, &v) in fb.iter().enumerate() {
            out[i + j] += u * v * h;
        }
    }
    DensityPart::Tabulated { x0: a_lo + b_lo - h, h, values: out }
}

/// Maps `z` to `G(z) = E 1/(z - X)`.
pub trait CauchyTransform {
    fn cauchy(&self, xi: Complex64) -> Result<Complex64>;
}

impl CauchyTransform for MomentSequence {
    /// The series `sum M_k ξ^{-k-1}`, truncated at the length of the sequence.
    /// Fails when the last terms are not shrinking.
    fn cauchy(&self, xi: Complex64) -> Result<Complex64> {
        if xi.norm() == 0.0 {
            return Err(Error::Divergence("Cauchy series at 0".into()));
        }
        let inv = 1.0 / xi;
        let mut p = inv;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut mags = Vec::with_capacity(self.len());
        for &m in &self.0 {
            let term = p * m;
            mags.push(term.norm());
            sum += term;
            p *= inv;
        }
        let tail: Vec<f64> = mags.iter().rev().copied().filter(|v| *v > 0.0).take(3).collect();
        if tail.len() >= 2 && tail[0] >= tail[1] && tail[0] > 1e-12 * sum.norm() {
            return Err(Error::Divergence(format!("moment series not converging at |ξ| = {}", xi.norm())));
        }
        Ok(sum)
    }
}

impl CauchyTransform for Law {
    fn cauchy(&self, xi: Complex64) -> Result<Complex64> {
        let mut g: Complex64 = Complex64::new(0.0, 0.0);
        for &(x, p) in &self.atoms {
            let d = xi - x;
            if d.norm() == 0.0 {
                return Err(Error::Divergence(format!("Cauchy transform at the atom {x}")));
            }
            g += p / d;
        }
        for part in &self.density {
            g += density_cauchy(part, xi);
        }
        Ok(g)
    }
}

/// `∫ f(x)/(ξ - x) dx` with the value of `f` at `Re ξ` subtracted, so that
/// the near-singular part is carried by an exact logarithm.
fn density_cauchy(part: &DensityPart, xi: Complex64) -> Complex64 {
    let (a, b) = part.support();
    let x0 = xi.re;
    let f0 = if x0 > a && x0 < b { part.eval(x0) } else { 0.0 };
    let log_term = if f0 == 0.0 { Complex64::new(0.0, 0.0) } else { f0 * ((xi - a).ln() - (xi - b).ln()) };
    let smooth: Complex64 = match part {
        DensityPart::Analytic { f, support: (a, b) } => {
            let t = xi.im.abs().max(1e-12);
            let panels = ((2.5 * (b - a) / t).ceil() as usize).clamp(ANALYTIC_PANELS, 25_000);
            theta_rule(panels)
                .map(|(th, w)| {
                    let x = a + (b - a) * (1.0 - th.cos()) / 2.0;
                    w * (f(x) - f0) * (b - a) / 2.0 * th.sin() / (xi - x)
                })
                .sum()
        }
        DensityPart::Tabulated { x0: c0, h, values } => values
            .iter()
            .enumerate()
            .map(|(i, &v)| (v - f0) * h / (xi - (c0 + h * i as f64)))
            .sum(),
    };
    smooth + log_term
}

/// `-Im G(x + it)/π`, the Stieltjes inversion estimate at finite `t`.
pub fn stieltjes_density(g: &impl CauchyTransform, x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return invalid("Stieltjes inversion needs t > 0");
    }
    Ok(-g.cauchy(Complex64::new(x, t))?.im / PI)
}

pub fn cauchy_transform(g: &impl CauchyTransform, xi: Complex64) -> Result<Complex64> {
    g.cauchy(xi)
}
