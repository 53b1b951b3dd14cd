use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use super::table::{Cell, ColumnKind as K, ResultTable};
use super::RunConfig;
use crate::combinat::{bell, bernoulli, catalan, central_binomial, factorial, middle_binomial};
use crate::diff::{classify_critical, is_harmonic, ScalarField};
use crate::dynamics::{
    dalembert, flux_through_sphere, heat_lattice_step, heat_solve, kepler_integrate, orbit_params, wave_simulate,
    ChargeConfig, Grid1D, OrbitState, Vec3,
};
use crate::error::{invalid, Error, Result};
use crate::hydrogen::{
    bohr_energy, bohr_radius, spectral_series, wavefunction, Medium, PhysicalConstants, QuantumNumbers, SpectralSeries,
};
use crate::linalg::{all_roots_clustered, eigenvalues, symmetric_eigen, ComplexMatrix, ComplexPolynomial, RealMatrix};
use crate::prob::{
    bernoulli_law, binomial_law, gaussian_moment, poisson_moment, sn_fixed_point_law_sampled, stieltjes_density,
    ClassicalLaw, SN_EXACT_LIMIT,
};
use crate::quad::{
    monte_carlo, riemann, simpson, sphere_area, sphere_moment, sphere_moment_mc, sphere_volume, trapezoid,
    RandomSource, SphereMomentKey,
};
use crate::series::{basel_corrected, e_series, pi_leibnitz};

/// Dispatches a validated configuration to the library.
pub fn run(cfg: &RunConfig) -> Result<ResultTable> {
    match cfg.subcommand.as_str() {
        "sequence" => sequence(cfg),
        "constants" => constants(cfg),
        "roots" => roots(cfg),
        "eig" => eig(cfg),
        "integrate" => integrate(cfg),
        "sphere" => sphere(cfg),
        "law" => law(cfg),
        "stieltjes" => stieltjes(cfg),
        "snchi" => snchi(cfg),
        "critical" => critical(cfg),
        "harmonic" => harmonic(cfg),
        "orbit" => orbit(cfg),
        "wave" => wave(cfg),
        "heat" => heat(cfg),
        "flux" => flux(cfg),
        "hydrogen lines" => hydrogen_lines(cfg),
        "hydrogen wavefunction" => hydrogen_wavefunction(cfg),
        "hydrogen energy" => hydrogen_energy(cfg),
        other => invalid(format!("unknown subcommand `{other}`")),
    }
}

fn rng(cfg: &RunConfig) -> Result<RandomSource> {
    cfg.seed.map(RandomSource::new).ok_or_else(|| Error::Invalid("this computation needs --seed".into()))
}

fn sequence(cfg: &RunConfig) -> Result<ResultTable> {
    let kind = cfg.str("kind")?;
    let n = cfg.u32("n")?;
    let mut t = ResultTable::new(&[("index", K::Int), ("value", K::Exact)], format!("{kind}: exact big-integer arithmetic"));
    for k in 0..=n {
        let value = match kind {
            "factorial" => factorial(k).to_string(),
            "catalan" => catalan(k).to_string(),
            "central" => central_binomial(k).to_string(),
            "middle" => middle_binomial(k).to_string(),
            "bell" => bell(k).to_string(),
            "bernoulli" => bernoulli(k).to_string(),
            _ => return invalid(format!("unknown sequence `{kind}`")),
        };
        t.push(vec![k.into(), Cell::Exact(value)])?;
    }
    Ok(t)
}

fn constants(cfg: &RunConfig) -> Result<ResultTable> {
    let which = cfg.str("which")?;
    let terms = cfg.usize("terms")?;
    let (est, note) = match which {
        "e" => (e_series(terms)?, "partial sum of 1/k! with geometric tail bound"),
        "pi" => (pi_leibnitz(terms)?, "alternating arctan series at 1 with alternating-series bound"),
        "basel" => (basel_corrected(terms)?, "partial sum of 1/k^2 plus tail-bracket midpoint"),
        _ => return invalid(format!("unknown constant `{which}`")),
    };
    let mut t = ResultTable::new(
        &[("which", K::Text), ("terms", K::Int), ("value", K::Float), ("error_bound", K::Float)],
        note,
    );
    t.push(vec![Cell::text(which), terms.into(), est.value.into(), est.error.into()])?;
    Ok(t)
}

/// Parses `3`, `-2.5i`, `1+2i`, `1e-3-4i`, `i`.
pub(crate) fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("cannot parse complex number `{s}`"));
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re.parse::<f64>().map_err(|_| bad())?, im))
}

fn roots(cfg: &RunConfig) -> Result<ResultTable> {
    let coeffs = cfg.str("coeffs")?.split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
    let clusters = all_roots_clustered(&ComplexPolynomial::new(coeffs), cfg.f64("tol")?)?;
    let mut t = ResultTable::new(
        &[("index", K::Int), ("re", K::Float), ("im", K::Float), ("multiplicity", K::Int)],
        "simultaneous Weierstrass iteration with Newton polish and clustering",
    );
    for (i, c) in clusters.iter().enumerate() {
        t.push(vec![i.into(), c.root.re.into(), c.root.im.into(), c.multiplicity.into()])?;
    }
    Ok(t)
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| Error::Invalid(format!("{path}: {e}")))
}

fn eig(cfg: &RunConfig) -> Result<ResultTable> {
    let text = read_file(cfg.str("matrix")?)?;
    let rows: Vec<Vec<Complex64>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(parse_complex).collect())
        .collect::<Result<_>>()?;
    let a = ComplexMatrix::from_rows(&rows)?;
    if !a.is_square() {
        return invalid(format!("matrix is {}x{}, not square", a.rows(), a.cols()));
    }
    let real = a.entries().iter().all(|z| z.im == 0.0);
    let re = a.map(|z| z.re);
    let symmetric = real && (&re - &re.transpose()).max_abs() <= 1e-12 * re.max_abs().max(1.0);
    let mut t = ResultTable::new(
        &[("index", K::Int), ("re", K::Float), ("im", K::Float)],
        if symmetric { "cyclic Jacobi rotations" } else { "roots of the characteristic polynomial" },
    );
    let values: Vec<Complex64> = if symmetric {
        symmetric_eigen(&sym(&re), 1e-13)?.values.into_iter().map(|v| Complex64::new(v, 0.0)).collect()
    } else {
        eigenvalues(&a)?
    };
    for (i, v) in values.iter().enumerate() {
        t.push(vec![i.into(), v.re.into(), v.im.into()])?;
    }
    Ok(t)
}

fn sym(a: &RealMatrix) -> RealMatrix {
    RealMatrix::from_fn(a.rows(), a.cols(), |i, j| 0.5 * (a.row(i)[j] + a.row(j)[i]))
}

pub(crate) fn integrand(name: &str) -> Result<fn(f64) -> f64> {
    Ok(match name {
        "gauss" => |x: f64| (-x * x).exp(),
        "sin" => f64::sin,
        "cos" => f64::cos,
        "exp" => f64::exp,
        "inv" => |x: f64| 1.0 / x,
        "sqrt" => f64::sqrt,
        "square" => |x: f64| x * x,
        "fresnel" => |x: f64| (x * x).sin(),
        _ => return invalid(format!("unknown integrand `{name}`")),
    })
}

fn integrate(cfg: &RunConfig) -> Result<ResultTable> {
    let method = cfg.str("method")?;
    let f = integrand(cfg.str("fn")?)?;
    let (a, b, n) = (cfg.f64("a")?, cfg.f64("b")?, cfg.usize("n")?);
    let (value, error, note) = match method {
        "mc" => {
            let est = monte_carlo(f, a, b, n, &mut rng(cfg)?)?;
            (est.value, est.error, "uniform Monte Carlo; error is the standard error")
        }
        "riemann" | "trapezoid" | "simpson" => {
            let rule = |n: usize| match method {
                "riemann" => riemann(f, a, b, n),
                "trapezoid" => trapezoid(f, a, b, n),
                _ => Ok(simpson(f, a, b, n)),
            };
            let fine = rule(n)?;
            let coarse = rule((n / 2).max(1))?;
            (fine, (fine - coarse).abs(), "composite rule; error is the change from n/2 pieces")
        }
        _ => return invalid(format!("unknown method `{method}`")),
    };
    let mut t = ResultTable::new(&[("quantity", K::Text), ("value", K::Float), ("error", K::Float)], note);
    t.push(vec![Cell::text("integral"), value.into(), error.into()])?;
    Ok(t)
}

fn u32_list(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|v| v.trim().parse().map_err(|_| Error::Invalid(format!("bad exponent `{v}`"))))
        .collect()
}

fn sphere(cfg: &RunConfig) -> Result<ResultTable> {
    let dim = cfg.u32("dim")?;
    let what = cfg.str("what")?;
    let mut t = ResultTable::new(
        &[("quantity", K::Text), ("value", K::Float), ("error", K::Float)],
        "closed form from half-integer factorials; Monte Carlo rows from normalized Gaussian vectors",
    );
    match what {
        "volume" => t.push(vec![Cell::text("volume"), sphere_volume(dim)?.into(), 0.0.into()])?,
        "area" => t.push(vec![Cell::text("area"), sphere_area(dim)?.into(), 0.0.into()])?,
        "moment" => {
            let plain = u32_list(cfg.str("key")?)?;
            if plain.len() != dim as usize {
                return invalid(format!("--key has {} exponents for dimension {dim}", plain.len()));
            }
            let key = if cfg.flag("complex") {
                let conj = cfg.get("conj").map_or_else(|| Ok(plain.clone()), u32_list)?;
                SphereMomentKey::Complex { plain, conj }
            } else if cfg.flag("abs") {
                SphereMomentKey::RealAbs(plain)
            } else {
                SphereMomentKey::Real(plain)
            };
            t.push(vec![Cell::text("closed_form"), sphere_moment(&key)?.into(), 0.0.into()])?;
            if cfg.seed.is_some() {
                let est = sphere_moment_mc(&key, cfg.usize("samples")?, &mut rng(cfg)?)?;
                t.push(vec![Cell::text("monte_carlo_re"), est.value.re.into(), est.stderr_re.into()])?;
                if matches!(key, SphereMomentKey::Complex { .. }) {
                    t.push(vec![Cell::text("monte_carlo_im"), est.value.im.into(), est.stderr_im.into()])?;
                }
            }
        }
        _ => return invalid(format!("unknown sphere quantity `{what}`")),
    }
    Ok(t)
}

fn law(cfg: &RunConfig) -> Result<ResultTable> {
    let name = cfg.str("name")?;
    let upto = cfg.usize("moments")?;
    if let Ok(classical) = name.parse::<ClassicalLaw>() {
        let mut t = ResultTable::new(&[("k", K::Int), ("moment", K::Exact)], "exact counting sequence");
        for k in 0..=upto {
            t.push(vec![k.into(), Cell::exact(classical.moment(k as u32))])?;
        }
        return Ok(t);
    }
    let p = cfg.f64("p")?;
    let s = cfg.f64("t")?;
    let (values, note): (Vec<f64>, &str) = match name {
        "bernoulli" => (bernoulli_law(p)?.moments(upto)?.as_slice().to_vec(), "sum over the two atoms"),
        "binomial" => (binomial_law(p, cfg.u32("trials")?)?.moments(upto)?.as_slice().to_vec(), "sum over the atoms"),
        "poisson" => (
            (0..=upto)
                .map(|k| poisson_moment(s, k).map(|m| m.partitions.unwrap_or(m.atoms)))
                .collect::<Result<_>>()?,
            "set-partition sum for k <= 10, atom sum beyond",
        ),
        "gauss" => ((0..=upto).map(|k| gaussian_moment(s, k as u32)).collect(), "t^(k/2) (k-1)!! for even k"),
        "cgauss" => (
            (0..=upto).map(|k| crate::combinat::int_to_f64(&factorial(k as u32)) * s.powi(k as i32)).collect(),
            "E|z|^(2k) = k! t^k for a complex Gaussian of variance t",
        ),
        _ => return invalid(format!("unknown law `{name}`")),
    };
    let mut t = ResultTable::new(&[("k", K::Int), ("moment", K::Float)], note);
    for (k, v) in values.into_iter().enumerate() {
        t.push(vec![k.into(), v.into()])?;
    }
    Ok(t)
}

fn grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::Invalid(format!("bad grid `{spec}` (want x1,x2,... or lo:hi:count)"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() == 3 {
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        if n == 1 {
            return Ok(vec![lo]);
        }
        return Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect());
    }
    spec.split(',').map(|v| v.trim().parse().map_err(|_| bad())).collect()
}

fn stieltjes(cfg: &RunConfig) -> Result<ResultTable> {
    let law: ClassicalLaw = cfg.str("law")?.parse()?;
    let t = cfg.f64("t")?;
    let mut out = ResultTable::new(
        &[("x", K::Float), ("density", K::Float), ("exact", K::Float)],
        "-Im G(x + it)/pi from the closed-form Cauchy transform",
    );
    for x in grid(cfg.str("x")?)? {
        out.push(vec![x.into(), stieltjes_density(&law, x, t)?.into(), law.density(x).into()])?;
    }
    Ok(out)
}

fn snchi(cfg: &RunConfig) -> Result<ResultTable> {
    let n = cfg.usize("n")?;
    let t = cfg.f64("t")?;
    let samples = cfg.usize("samples")?;
    if n <= SN_EXACT_LIMIT {
        let fp = sn_fixed_point_law_sampled(n, t, samples, None)?;
        let mut out = ResultTable::new(
            &[("k", K::Int), ("probability", K::Float), ("exact", K::Exact)],
            "enumeration of all permutations",
        );
        for ((k, p), q) in fp.law.atoms().iter().zip(fp.exact.unwrap_or_default()) {
            out.push(vec![(*k as usize).into(), (*p).into(), Cell::exact(q)])?;
        }
        return Ok(out);
    }
    let mut r = rng(cfg)?;
    let fp = sn_fixed_point_law_sampled(n, t, samples, Some(&mut r))?;
    let mut out = ResultTable::new(
        &[("k", K::Int), ("probability", K::Float), ("stderr", K::Float)],
        "Fisher-Yates sampling",
    );
    for &(k, p) in fp.law.atoms() {
        out.push(vec![(k as usize).into(), p.into(), (p * (1.0 - p) / samples as f64).sqrt().into()])?;
    }
    Ok(out)
}

fn critical(cfg: &RunConfig) -> Result<ResultTable> {
    let x = cfg.f64_list("x")?;
    let f = ScalarField::builtin(cfg.str("fn")?, x.len())?;
    let rep = classify_critical(&f, &x, None, 1e-6)?;
    let mut cols = vec![
        ("kind".to_string(), K::Text),
        ("gradient_norm".to_string(), K::Float),
        ("raw_asymmetry".to_string(), K::Float),
    ];
    cols.extend((0..rep.eigenvalues.len()).map(|i| (format!("eig_{i}"), K::Float)));
    let cols: Vec<(&str, K)> = cols.iter().map(|(n, k)| (n.as_str(), *k)).collect();
    let mut t = ResultTable::new(&cols, "central-difference gradient and Hessian, Jacobi eigenvalues");
    let mut row = vec![Cell::text(rep.kind.as_str()), rep.gradient_norm.into(), rep.raw_asymmetry.into()];
    row.extend(rep.eigenvalues.iter().map(|&v| Cell::from(v)));
    t.push(row)?;
    Ok(t)
}

fn field_dim(name: &str, dim: Option<usize>) -> usize {
    match name {
        "cubic" => 1,
        "inv_r" => 3,
        "bowl" => dim.unwrap_or(2),
        _ => 2,
    }
}

/// Points of the additive recurrence `frac(i·α_j)` with `α_j = φ_N^{-j}`
/// mapped into `[0.3, 1]^N`.
fn sample_points(dim: usize, count: usize) -> Vec<Vec<f64>> {
    let mut phi = 2.0f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=dim).map(|j| phi.powi(-(j as i32))).collect();
    (1..=count)
        .map(|i| alpha.iter().map(|a| 0.3 + 0.7 * (0.5 + a * i as f64).fract()).collect())
        .collect()
}

fn harmonic(cfg: &RunConfig) -> Result<ResultTable> {
    let name = cfg.str("fn")?;
    let dim = field_dim(name, cfg.get("dim").map(|_| cfg.usize("dim")).transpose()?);
    let f = ScalarField::builtin(name, dim)?;
    let points = sample_points(dim, cfg.usize("samples")?);
    let check = is_harmonic(&f, &points, cfg.f64("tol")?)?;
    let tol = cfg.f64("tol")?;
    let mut t = ResultTable::new(
        &[("point", K::Text), ("residual", K::Float), ("harmonic", K::Text)],
        "five-point central-difference Laplacian at quasi-random points of [0.3, 1]^N",
    );
    for (p, r) in points.iter().zip(&check.residuals) {
        let label = p.iter().map(|v| super::format_float(*v, cfg.digits)).collect::<Vec<_>>().join(" ");
        t.push(vec![Cell::Text(label), (*r).into(), Cell::text((r.abs() <= tol).to_string())])?;
    }
    Ok(t)
}

fn orbit(cfg: &RunConfig) -> Result<ResultTable> {
    let start = OrbitState::new(Vec3::new(cfg.f64("r0")?, 0.0, 0.0), Vec3::new(0.0, cfg.f64("vt0")?, 0.0), cfg.f64("K")?)?;
    let params = orbit_params(&start)?;
    let every = cfg.usize("every")?.max(1);
    let states = kepler_integrate(&start, cfg.f64("T")?, cfg.f64("dt")?)?;
    let mut t = ResultTable::new(
        &[("t", K::Float), ("x", K::Float), ("y", K::Float), ("Jz", K::Float), ("conic_residual", K::Float)],
        "RK4 integration; residual against the conic predicted from the initial state",
    );
    let last = states.len() - 1;
    for (_, s) in states.iter().enumerate().filter(|(i, _)| i % every == 0 || *i == last) {
        t.push(vec![
            s.time.into(),
            s.position.x.into(),
            s.position.y.into(),
            s.angular_momentum().into(),
            params.conic_residual(s.position).into(),
        ])?;
    }
    Ok(t)
}

struct Profile {
    kind: String,
    length: f64,
    center: f64,
    width: f64,
}

impl Profile {
    fn from(cfg: &RunConfig) -> Result<Self> {
        let length = cfg.f64("length")?;
        if !(length > 0.0) {
            return invalid("--length must be positive");
        }
        Ok(Self {
            kind: cfg.str("profile")?.to_string(),
            length,
            center: cfg.get("center").map_or(Ok(length / 2.0), |_| cfg.f64("center"))?,
            width: cfg.f64("width")?,
        })
    }

    fn eval(&self, x: f64) -> f64 {
        match self.kind.as_str() {
            "sine" => (PI * x / self.length).sin(),
            "step" => f64::from(u8::from((x - self.center).abs() <= self.width)),
            _ => (-((x - self.center) / self.width).powi(2)).exp(),
        }
    }
}

fn lattice_size(length: f64, dx: f64) -> Result<usize> {
    if !(dx > 0.0) || dx > length / 2.0 {
        return invalid("--dx must be positive and at most length/2");
    }
    Ok((length / dx).round() as usize + 1)
}

fn frame_indices(steps: usize, frames: usize) -> Vec<usize> {
    let frames = frames.max(1);
    let mut idx: Vec<usize> = (0..=frames).map(|j| j * steps / frames).collect();
    idx.dedup();
    idx
}

fn wave(cfg: &RunConfig) -> Result<ResultTable> {
    let profile = Profile::from(cfg)?;
    let v = cfg.f64("v")?;
    let n = lattice_size(profile.length, cfg.f64("dx")?)?;
    let dx = profile.length / (n - 1) as f64;
    let dt = cfg.f64("cfl")? * dx / v;
    let g = |x: f64| profile.eval(x);
    let frames = wave_simulate(g, |_| 0.0, (0.0, profile.length, n), v, dt, cfg.f64("time")?)?;
    let mut t = ResultTable::new(
        &[("t", K::Float), ("x", K::Float), ("u", K::Float), ("dalembert", K::Float)],
        "leapfrog lattice with fixed ends against d'Alembert's formula on the line",
    );
    for i in frame_indices(frames.len() - 1, cfg.usize("frames")?) {
        let f = &frames[i];
        for (x, u) in f.points() {
            t.push(vec![f.time.into(), x.into(), u.into(), dalembert(g, |_| 0.0, v, x, f.time)?.into()])?;
        }
    }
    Ok(t)
}

fn heat(cfg: &RunConfig) -> Result<ResultTable> {
    let profile = Profile::from(cfg)?;
    let alpha = cfg.f64("alpha")?;
    let n = lattice_size(profile.length, cfg.f64("dx")?)?;
    let dx = profile.length / (n - 1) as f64;
    let dt = cfg.f64("ratio")? * dx * dx / alpha;
    let steps = (cfg.f64("time")? / dt).round() as usize;
    let g = |x: f64| profile.eval(x);
    let mut u = Grid1D::from_fn(0.0, profile.length, n, g)?;
    let wanted = frame_indices(steps, cfg.usize("frames")?);
    let mut t = ResultTable::new(
        &[("t", K::Float), ("x", K::Float), ("u", K::Float), ("kernel", K::Float)],
        "explicit lattice with fixed ends against convolution with the heat kernel on the line",
    );
    let mut next = wanted.iter().peekable();
    for step in 0..=steps {
        if next.peek() == Some(&&step) {
            next.next();
            for (x, v) in u.points() {
                let exact = if step == 0 { g(x) } else { heat_solve(g, alpha, u.time, x)? };
                t.push(vec![u.time.into(), x.into(), v.into(), exact.into()])?;
            }
        }
        if step < steps {
            u = heat_lattice_step(&u, alpha, dt)?;
        }
    }
    Ok(t)
}

fn read_charges(path: &str) -> Result<Vec<(f64, Vec3)>> {
    let text = read_file(path)?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Invalid(format!("{path}: {e}")))?;
        if rec.len() != 4 {
            return invalid(format!("{path}: line {} needs q,x,y,z", i + 1));
        }
        let vals: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match vals {
            Ok(v) => out.push((v[0], Vec3::new(v[1], v[2], v[3]))),
            Err(_) if i == 0 => continue,
            Err(_) => return invalid(format!("{path}: line {} is not numeric", i + 1)),
        }
    }
    Ok(out)
}

fn flux(cfg: &RunConfig) -> Result<ResultTable> {
    let cfg_charges = ChargeConfig::new(read_charges(cfg.str("charges")?)?, cfg.f64("coulomb")?)?;
    let c = cfg.f64_list("center")?;
    let [cx, cy, cz] = c[..] else {
        return invalid("--center needs x,y,z");
    };
    let center = Vec3::new(cx, cy, cz);
    let radius = cfg.f64("radius")?;
    let flux = flux_through_sphere(&cfg_charges, center, radius, cfg.usize("order")?)?;
    let enclosed = cfg_charges.enclosed(center, radius);
    let gauss = enclosed / cfg_charges.epsilon0();
    let gap = (flux - gauss).abs() / gauss.abs().max(f64::MIN_POSITIVE);
    let mut t = ResultTable::new(&[("quantity", K::Text), ("value", K::Float)], "Gauss-Legendre by trapezoid sphere rule");
    for (name, v) in [("flux", flux), ("enclosed_charge", enclosed), ("gauss_law", gauss), ("relative_gap", gap)] {
        t.push(vec![Cell::text(name), v.into()])?;
    }
    Ok(t)
}

fn preset(cfg: &RunConfig) -> Result<PhysicalConstants> {
    Ok(match cfg.str("constants")? {
        "textbook" => PhysicalConstants::textbook(),
        "codata" => PhysicalConstants::codata_hydrogen(),
        "dimensionless" => PhysicalConstants::dimensionless(),
        other => return invalid(format!("unknown constants preset `{other}`")),
    })
}

fn hydrogen_lines(cfg: &RunConfig) -> Result<ResultTable> {
    let series: SpectralSeries = cfg.str("series")?.parse()?;
    let medium = if cfg.str("medium")? == "vacuum" { Medium::Vacuum } else { Medium::Air };
    let lines = spectral_series(series, cfg.u32("upto")?, &preset(cfg)?, medium)?;
    let mut t = ResultTable::new(
        &[("n1", K::Int), ("n2", K::Text), ("lambda_nm", K::Float)],
        "Rydberg formula; air wavelengths by the Edlen dispersion formula above 200 nm",
    );
    for l in lines {
        let n2 = l.n2.map_or_else(|| "inf".to_string(), |n| n.to_string());
        t.push(vec![l.n1.into(), Cell::Text(n2), l.wavelength_nm.into()])?;
    }
    Ok(t)
}

fn hydrogen_wavefunction(cfg: &RunConfig) -> Result<ResultTable> {
    let c = preset(cfg)?;
    let psi = wavefunction(QuantumNumbers::new(cfg.u32("n")?, cfg.u32("l")?, cfg.i32("m")?)?, &c)?;
    let g = cfg.f64_list("grid")?;
    let [rmax, steps] = g[..] else {
        return invalid("--grid needs rmax,steps");
    };
    if !(rmax > 0.0) || steps < 1.0 || steps.fract() != 0.0 {
        return invalid("--grid needs rmax > 0 and a whole number of steps >= 1");
    }
    let steps = steps as usize;
    let a = bohr_radius(&c);
    let azimuth = cfg.f64("t")?;
    let mut t = ResultTable::new(
        &[("r", K::Float), ("s", K::Float), ("t", K::Float), ("re", K::Float), ("im", K::Float), ("density", K::Float)],
        "associated Laguerre radial part times spherical harmonic; r in meters",
    );
    for i in 0..=steps {
        let r = rmax * a * i as f64 / steps as f64;
        for j in 0..=steps {
            let s = PI * j as f64 / steps as f64;
            let v = psi.eval(r, s, azimuth);
            t.push(vec![r.into(), s.into(), azimuth.into(), v.re.into(), v.im.into(), v.norm_sqr().into()])?;
        }
    }
    Ok(t)
}

fn hydrogen_energy(cfg: &RunConfig) -> Result<ResultTable> {
    let n = cfg.u32("n")?;
    let e = bohr_energy(n, &preset(cfg)?)?;
    let mut t = ResultTable::new(&[("n", K::Int), ("joules", K::Float), ("ev", K::Float)], "Bohr levels -E1/n^2");
    t.push(vec![n.into(), e.joules.into(), e.ev.into()])?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        let c = |re, im| Complex64::new(re, im);
        for (s, want) in [
            ("3", c(3.0, 0.0)),
            ("-2.5i", c(0.0, -2.5)),
            ("1+2i", c(1.0, 2.0)),
            ("1e-3-4i", c(1e-3, -4.0)),
            ("-1.5e+2+1e-2i", c(-150.0, 0.01)),
            ("i", c(0.0, 1.0)),
            ("-i", c(0.0, -1.0)),
            (" 2-i ", c(2.0, -1.0)),
        ] {
            assert_eq!(parse_complex(s).unwrap(), want, "{s}");
        }
        assert!(parse_complex("1+").is_err());
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn grids_and_points() {
        assert_eq!(grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(grid("0.5, -1").unwrap(), vec![0.5, -1.0]);
        assert!(grid("0:1").is_err());
        let pts = sample_points(3, 50);
        assert!(pts.iter().flatten().all(|v| (0.3..=1.0).contains(v)));
        assert_eq!(pts, sample_points(3, 50));
        assert_eq!(frame_indices(10, 5), vec![0, 2, 4, 6, 8, 10]);
        assert_eq!(frame_indices(2, 5), vec![0, 1, 2]);
    }
}
