//! Deterministic rules against seeded Monte Carlo on the same integrals.

use std::error::Error;

use calclab::quad::{gauss_integral, monte_carlo, riemann, simpson, stirling_ratio, trapezoid, verify_gauss, RandomSource};

fn main() -> Result<(), Box<dyn Error>> {
    let f = |x: f64| (-x * x).exp();
    let (a, b) = (-4.0, 4.0);
    println!("riemann   {:.12}", riemann(f, a, b, 1000)?);
    println!("trapezoid {:.12}", trapezoid(f, a, b, 1000)?);
    println!("simpson   {:.12}", simpson(f, a, b, 1000));
    let mut rng = RandomSource::new(2024);
    for n in [1_000, 100_000] {
        let mc = monte_carlo(f, a, b, n, &mut rng)?;
        println!("mc n={n:<7} {:.6} +- {:.1e}", mc.value, mc.error);
    }
    println!("sqrt(pi)  {:.12}  (quadrature gap {:.1e})", gauss_integral(), verify_gauss(8.0, 2000)?);
    for n in [5, 50, 500] {
        println!("n!/stirling({n}) = {:.8}", stirling_ratio(n)?);
    }
    Ok(())
}
