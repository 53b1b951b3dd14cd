//! Acceptance gate: one numbered check per criterion, one line each.
//!
//! Runs without the libtest harness so the report is always printed. The
//! process fails if any criterion fails, except those listed in
//! `KNOWN_UNATTAINABLE`; those are still evaluated and reported as FAIL, and
//! an unexpected pass of one of them also fails the run.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use calclab::combinat::{bernoulli, catalan};
use calclab::dynamics::{
    dalembert, divergence_check, einstein_add_1d, einstein_add_3d, fit_conic, flux_through_sphere, green_check,
    kepler_integrate, orbit_params, stokes_check, wave_simulate, ChargeConfig, OrbitState, StarDomain, Vec3,
    Velocity3,
};
use calclab::hydrogen::{
    bohr_energy, bohr_radius, rydberg_constant, spectral_series, wavefunction, Medium, PhysicalConstants,
    QuantumNumbers, SpectralSeries,
};
use calclab::prob::{clt_moment_gap, coin_law, plt_distance, sn_fixed_point_law, stieltjes_density, su2_character_moment, ClassicalLaw};
use calclab::quad::{
    fresnel_averaged, simpson, sphere_moment, sphere_moment_mc, sphere_moment_mc_batch, stirling_ratio, RandomSource,
    SphereMomentKey,
};
use calclab::series::basel_corrected;

/// Criteria that cannot be met as stated; see the ledger entry for each.
const KNOWN_UNATTAINABLE: &[u32] = &[11];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    out.detail = format!("{}; {:.2}s (limit {}s)", out.detail, elapsed.as_secs_f64(), limit.as_secs());
    out.pass &= elapsed <= limit;
    out
}

fn c01_gauss() -> Outcome {
    timed(Duration::from_secs(1), || {
        let err = (simpson(|x| (-x * x).exp(), -8.0, 8.0, 10_000) - PI.sqrt()).abs();
        outcome(err <= 1e-8, format!("|simpson - sqrt(pi)| = {err:.3e} (tol 1e-8)"))
    })
}

fn c02_fresnel() -> Outcome {
    let err = (fresnel_averaged(20.0, 8).unwrap() - 0.626_657_1).abs();
    outcome(err <= 1e-3, format!("|averaged - 0.6266571| = {err:.3e} (tol 1e-3)"))
}

fn c03_basel() -> Outcome {
    let est = basel_corrected(1_000_000).unwrap();
    let err = (est.value - PI * PI / 6.0).abs();
    outcome(err <= 1e-6, format!("|corrected sum - pi^2/6| = {err:.3e} (tol 1e-6)"))
}

/// Akiyama–Tanigawa, which yields `B_1 = +1/2`.
fn bernoulli_oracle(n: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut a: Vec<BigRational> = Vec::new();
    for m in 0..=n {
        a.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            a[j - 1] = BigRational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
        }
        out.push(a[0].clone());
    }
    out[1] = -out[1].clone();
    out
}

fn c04_bernoulli() -> Outcome {
    let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
    let table = [r(1, 1), r(-1, 2), r(1, 6), r(0, 1), r(-1, 30), r(0, 1), r(1, 42)];
    let oracle = bernoulli_oracle(12);
    let table_ok = table.iter().enumerate().all(|(n, b)| bernoulli(n as u32) == *b);
    let oracle_ok = (0..=12).all(|n| bernoulli(n as u32) == oracle[n]);
    let b12 = bernoulli(12);
    outcome(table_ok && oracle_ok && b12 == r(-691, 2730), format!("B0..B6 table {table_ok}, B0..B12 oracle {oracle_ok}, B12 = {b12}"))
}

fn c05_stieltjes() -> Outcome {
    let t = 1e-3;
    let mut worst: f64 = 0.0;
    let cases = [
        (ClassicalLaw::Semicircle, vec![0.0, 1.0, -1.0]),
        (ClassicalLaw::MarchenkoPastur, vec![1.0, 2.5]),
        (ClassicalLaw::Arcsine, vec![1.0, 3.0]),
    ];
    for (law, xs) in &cases {
        for &x in xs {
            worst = worst.max((stieltjes_density(law, x, t).unwrap() - law.density(x)).abs());
        }
    }
    outcome(worst <= 1e-2, format!("max density error at t = 1e-3: {worst:.3e} (tol 1e-2)"))
}

fn exponent_vectors(n: usize, max_total: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                let used: u32 = v.iter().sum();
                (0..=max_total - used).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

/// Keys compared at 4 standard errors, with an absolute floor of 1e-12 for
/// keys whose sample variance is zero (constant monomials on the sphere).
fn within_4_sigma(exact: f64, est: f64, stderr: f64) -> bool {
    (exact - est).abs() <= 4.0 * stderr + 1e-12
}

fn c06_sphere_moments() -> Outcome {
    timed(Duration::from_secs(30), || {
        let mut rng = RandomSource::new(20_240_601);
        let (mut checked, mut bad, mut worst) = (0usize, 0usize, 0.0f64);
        let mut tally = |exact: f64, est: f64, se: f64| {
            checked += 1;
            if !within_4_sigma(exact, est, se) {
                bad += 1;
            }
            if se > 0.0 {
                worst = worst.max((exact - est).abs() / se);
            }
        };
        for n in 1..=5 {
            let keys: Vec<SphereMomentKey> = exponent_vectors(n, 6).into_iter().map(SphereMomentKey::Real).collect();
            let est = sphere_moment_mc_batch(&keys, 1_000_000, &mut rng).unwrap();
            for (k, e) in keys.iter().zip(&est) {
                tally(sphere_moment(k).unwrap(), e.value.re, e.stderr_re);
            }
        }
        for n in 1..=4 {
            let vecs = exponent_vectors(2 * n, 3);
            let keys: Vec<SphereMomentKey> = vecs
                .into_iter()
                .map(|v| SphereMomentKey::Complex { plain: v[..n].to_vec(), conj: v[n..].to_vec() })
                .collect();
            let est = sphere_moment_mc_batch(&keys, 1_000_000, &mut rng).unwrap();
            for (k, e) in keys.iter().zip(&est) {
                let exact = sphere_moment(k).unwrap();
                tally(exact, e.value.re, e.stderr_re);
                tally(0.0, e.value.im, e.stderr_im);
            }
        }
        outcome(bad == 0, format!("{checked} comparisons, {bad} outside 4 sigma, worst {worst:.2} sigma"))
    })
}

fn c07_stirling() -> Outcome {
    let gap = (stirling_ratio(100).unwrap() - 1.0).abs();
    outcome(gap <= 1e-3, format!("|ratio(100) - 1| = {gap:.3e} (tol 1e-3)"))
}

fn c08_hydrogen() -> Outcome {
    let c = PhysicalConstants::textbook();
    let e1 = bohr_energy(1, &c).unwrap().ev;
    let r = rydberg_constant(&c);
    let a = bohr_radius(&c);
    let lines = spectral_series(SpectralSeries::Balmer, 6, &PhysicalConstants::codata_hydrogen(), Medium::Air).unwrap();
    let table = [656.279, 486.135, 434.047, 410.173];
    let line_gap = lines.iter().zip(table).map(|(l, t)| (l.wavelength_nm - t).abs()).fold(0.0, f64::max);
    let ok_e = (e1 + 13.591).abs() <= 0.005;
    let ok_r = ((r - 1.0968e7) / 1.0968e7).abs() <= 1e-3;
    let ok_a = ((a - 5.29e-11) / 5.29e-11).abs() <= 5e-3;
    let ok_l = line_gap <= 0.1;
    outcome(
        ok_e && ok_r && ok_a && ok_l,
        format!("E1 = {e1:.4} eV, R = {r:.5e}, a = {a:.4e}, max Balmer gap {line_gap:.4} nm"),
    )
}

fn c09_normalization() -> Outcome {
    timed(Duration::from_secs(10), || {
        let c = PhysicalConstants::textbook();
        let worst = QuantumNumbers::upto(3)
            .map(|qn| (wavefunction(qn, &c).unwrap().total_probability() - 1.0).abs())
            .fold(0.0, f64::max);
        outcome(worst <= 1e-4, format!("max |P - 1| over 14 states: {worst:.3e} (tol 1e-4)"))
    })
}

fn c10_derangements() -> Outcome {
    let mut ok = true;
    let mut worst_bound: f64 = 0.0;
    for n in 1..=9usize {
        let law = sn_fixed_point_law(n, 1.0, None).unwrap();
        let p0 = law.exact.as_ref().unwrap()[0].clone();
        let mut sum = BigRational::zero();
        let mut fact = BigInt::one();
        for r in 0..=n {
            if r > 0 {
                fact *= r;
            }
            let term = BigRational::new(BigInt::one(), fact.clone());
            sum += if r % 2 == 0 { term } else { -term };
        }
        let bound = 1.0 / (fact * (n + 1)).to_f64().unwrap();
        let gap = (p0.to_f64().unwrap() - (-1.0f64).exp()).abs();
        worst_bound = worst_bound.max(gap / bound);
        ok &= p0 == sum && gap <= bound;
    }
    outcome(ok, format!("exact match for N <= 9; max |P - 1/e|·(N+1)! = {worst_bound:.3}"))
}

fn c11_plt() -> Outcome {
    let gap = plt_distance(1.0, 500, 4).unwrap();
    let per_order: Vec<String> = gap.orders.iter().map(|(a, b)| format!("{:.4}", (a - b).abs())).collect();
    let worst = gap.max_abs();
    outcome(worst <= 0.02, format!("max |M_k - Poisson M_k|, k <= 4: {worst:.4} (tol 0.02); per order [{}]", per_order.join(", ")))
}

fn c12_clt() -> Outcome {
    let n = 100i64;
    // E S^4 for n fair ±1 coins: n diagonal terms plus 3n(n-1) pairings.
    let oracle = BigRational::new(BigInt::from(n + 3 * n * (n - 1)), BigInt::from(n * n));
    let closed = BigRational::from_integer(3.into()) - BigRational::new(2.into(), n.into());
    let gap = clt_moment_gap(&coin_law(), n as usize, 4).unwrap();
    let computed = gap.orders[4].1;
    let diff = (computed - oracle.to_f64().unwrap()).abs();
    outcome(oracle == closed && diff <= 1e-12, format!("oracle = {oracle}, convolution M4 = {computed}, gap {diff:.2e} (tol 1e-12)"))
}

fn c13_wave() -> Outcome {
    let g = |x: f64| (-(x - 10.0) * (x - 10.0)).exp();
    let (dx, v) = (0.01, 1.0);
    let n = (20.0 / dx) as usize + 1;
    let frames = wave_simulate(g, |_| 0.0, (0.0, 20.0, n), v, 0.5 * dx / v, 5.0).unwrap();
    let last = frames.last().unwrap();
    let gap = last.points().map(|(x, u)| (u - dalembert(g, |_| 0.0, v, x, last.time).unwrap()).abs()).fold(0.0, f64::max);
    outcome(gap <= 1e-2 && (last.time - 5.0).abs() < 1e-9, format!("sup gap at t = {:.3}: {gap:.3e} (tol 1e-2)", last.time))
}

fn c14_kepler() -> Outcome {
    // c = 1, ε = 0.5 at perihelion: r0 = c/(1 + ε), λ = √(Kc).
    let (k, c, eps) = (1.0, 1.0, 0.5);
    let r0 = c / (1.0 + eps);
    let start = OrbitState::new(Vec3::new(r0, 0.0, 0.0), Vec3::new(0.0, (k * c).sqrt() / r0, 0.0), k).unwrap();
    let params = orbit_params(&start).unwrap();
    let period = params.period(k).unwrap();
    let states = kepler_integrate(&start, period, period / 1e4).unwrap();
    let j0 = start.angular_momentum();
    let drift = states.iter().map(|s| ((s.angular_momentum() - j0) / j0).abs()).fold(0.0, f64::max);
    let pts: Vec<(f64, f64)> = states.iter().map(|s| params.to_frame(s.position)).collect();
    let fit = fit_conic(&pts).unwrap();
    let ok_params = (params.epsilon - eps).abs() < 1e-12 && (params.c - c).abs() < 1e-12;
    outcome(
        drift <= 1e-6 && fit.residual <= 1e-5 && ok_params,
        format!("|Jz| drift {drift:.2e} (tol 1e-6), conic residual {:.2e} (tol 1e-5), fit eps {:.6}", fit.residual, fit.epsilon),
    )
}

fn c15_flux() -> Outcome {
    let cfg = ChargeConfig::unit(vec![
        (1.0, Vec3::new(0.2, 0.1, -0.3)),
        (-0.5, Vec3::new(-0.4, 0.3, 0.2)),
        (2.0, Vec3::new(1.7, 0.5, 0.0)),
    ])
    .unwrap();
    let flux = flux_through_sphere(&cfg, Vec3::new(0.0, 0.0, 0.0), 1.0, 64).unwrap();
    let expected = 0.5 / cfg.epsilon0();
    let rel = ((flux - expected) / expected).abs();
    outcome(rel <= 1e-3, format!("flux {flux:.6} vs Q/eps0 {expected:.6}, relative gap {rel:.2e} (tol 1e-3)"))
}

fn c16_integral_theorems() -> Outcome {
    let mut gaps = Vec::new();
    let disk = StarDomain::disk((0.0, 0.0), 1.0);
    let circ = green_check(|_, y| -y, |x, _| x, &disk, 32).unwrap();
    gaps.push(("green rotation", circ.gap().max((circ.lhs - 2.0 * PI).abs())));
    let blob = StarDomain::new((0.3, -0.2), |t| 1.0 + 0.3 * (3.0 * t).cos());
    let poly = green_check(|x, y| x * x * y - y.powi(3), |x, y| 2.0 * x * y * y + x.powi(3) - y, &blob, 48).unwrap();
    gaps.push(("green polynomial", poly.gap()));
    let rot = |p: Vec3| Vec3::new(-p.y, p.x, 0.0);
    let flat = stokes_check(rot, |u, v| Vec3::new(u * (2.0 * PI * v).cos(), u * (2.0 * PI * v).sin(), 0.0), 32).unwrap();
    gaps.push(("stokes disk", flat.gap().max((flat.lhs - 2.0 * PI).abs())));
    let field = |p: Vec3| Vec3::new(p.y * p.z, p.x * p.x - p.z, p.x + p.y * p.y);
    let dome = stokes_check(field, |u, v| {
        let (s, t) = (0.5 * PI * u, 2.0 * PI * v);
        Vec3::new(s.sin() * t.cos(), s.sin() * t.sin(), s.cos())
    }, 32)
    .unwrap();
    gaps.push(("stokes hemisphere", dome.gap()));
    let ball = divergence_check(|p| p, Vec3::new(0.0, 0.0, 0.0), 1.0, 32).unwrap();
    gaps.push(("divergence ball", ball.gap().max((ball.lhs - 4.0 * PI).abs())));
    let cubic = divergence_check(|p| Vec3::new(p.x.powi(3), p.x * p.y, p.z * p.y), Vec3::new(0.2, 0.0, -0.1), 0.8, 32).unwrap();
    gaps.push(("divergence cubic", cubic.gap()));
    let worst = gaps.iter().map(|g| g.1).fold(0.0, f64::max);
    let list: Vec<String> = gaps.iter().map(|(n, g)| format!("{n} {g:.1e}")).collect();
    outcome(worst <= 1e-4, format!("{} (tol 1e-4)", list.join(", ")))
}

fn c17_su2() -> Outcome {
    let mut rng = RandomSource::new(7);
    let mut exact_ok = true;
    let mut worst: f64 = 0.0;
    for k in 0..=5u32 {
        let m = su2_character_moment(k).unwrap();
        exact_ok &= m.rescaled == BigRational::from_integer(catalan(k));
        let est = sphere_moment_mc(&SphereMomentKey::Real(vec![2 * k, 0, 0, 0]), 1_000_000, &mut rng).unwrap();
        let scale = 4f64.powi(k as i32);
        let target = catalan(k).to_f64().unwrap();
        if !within_4_sigma(target, est.value.re * scale, est.stderr_re * scale) {
            exact_ok = false;
        }
        if est.stderr_re > 0.0 {
            worst = worst.max((est.value.re * scale - target).abs() / (est.stderr_re * scale));
        }
    }
    outcome(exact_ok, format!("rescaled moments equal C_k for k <= 5; Monte Carlo worst {worst:.2} sigma (tol 4)"))
}

fn ball_point(rng: &mut RandomSource) -> Vec3 {
    loop {
        let p = Vec3::new(rng.uniform_in(-1.0, 1.0), rng.uniform_in(-1.0, 1.0), rng.uniform_in(-1.0, 1.0));
        if p.norm() < 1.0 {
            return p;
        }
    }
}

fn c18_einstein() -> Outcome {
    let mut rng = RandomSource::new(15_021);
    let vel = |v: Vec3| Velocity3::new(v).unwrap();
    let (mut contraction, mut absorb, mut cone, mut collinear, mut identity) = (0, 0, 0, 0, 0.0f64);
    for _ in 0..10_000 {
        let (u, v) = (ball_point(&mut rng), ball_point(&mut rng));
        let w = einstein_add_3d(vel(u), vel(v)).unwrap().vec();
        if w.norm() >= 1.0 {
            contraction += 1;
        }
        let d = 1.0 + u.dot(v);
        let rhs = ((u + v).dot(u + v) - u.dot(u) * v.dot(v) + u.dot(v).powi(2)) / (d * d);
        identity = identity.max((w.dot(w) - rhs).abs());
        let lu = u * (1.0 / u.norm());
        if (einstein_add_3d(vel(lu), vel(v)).unwrap().vec() - lu).norm() > 1e-12 {
            absorb += 1;
        }
        let lv = v * (1.0 / v.norm());
        if (einstein_add_3d(vel(u), vel(lv)).unwrap().vec().norm() - 1.0).abs() > 1e-12 {
            cone += 1;
        }
        let dir = u * (1.0 / u.norm());
        let (a, b) = (u.norm(), rng.uniform_in(-1.0, 1.0) * 0.999);
        let sum = einstein_add_3d(vel(dir * a), vel(dir * b)).unwrap().vec();
        if (sum - dir * einstein_add_1d(a, b).unwrap()).norm() > 1e-12 {
            collinear += 1;
        }
    }
    let ok = contraction == 0 && absorb == 0 && cone == 0 && collinear == 0 && identity <= 1e-12;
    outcome(
        ok,
        format!(
            "10^4 pairs: {contraction} norm violations, {absorb} absorption, {cone} light-cone, {collinear} collinear failures; identity gap {identity:.1e}"
        ),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 18] = [
        (1, "Gauss integral by Simpson", c01_gauss),
        (2, "Fresnel integral with averaging", c02_fresnel),
        (3, "Basel sum with tail correction", c03_basel),
        (4, "Bernoulli numbers B0..B12", c04_bernoulli),
        (5, "Stieltjes inversion densities", c05_stieltjes),
        (6, "sphere moments vs Monte Carlo", c06_sphere_moments),
        (7, "Stirling ratio at 100", c07_stirling),
        (8, "hydrogen constants and Balmer lines", c08_hydrogen),
        (9, "wavefunction normalization n <= 3", c09_normalization),
        (10, "derangement probabilities", c10_derangements),
        (11, "Poisson limit moments", c11_plt),
        (12, "CLT fourth moment", c12_clt),
        (13, "wave lattice vs d'Alembert", c13_wave),
        (14, "Kepler period conservation", c14_kepler),
        (15, "Gauss flux law", c15_flux),
        (16, "Green, Stokes, divergence", c16_integral_theorems),
        (17, "SU(2) character moments", c17_su2),
        (18, "Einstein addition properties", c18_einstein),
    ];
    let mut unexpected = 0;
    let mut passed = 0;
    for (id, name, check) in criteria {
        let out = check();
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let tag = match (out.pass, known) {
            (true, false) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (known unattainable)",
            (true, true) => "PASS (unexpected: listed as unattainable)",
        };
        passed += usize::from(out.pass);
        unexpected += usize::from(out.pass == known);
        println!("[{tag}] {id:02} {name}: {}", out.detail);
    }
    println!("acceptance: {passed}/18 criteria pass; {unexpected} unexpected result(s)");
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
