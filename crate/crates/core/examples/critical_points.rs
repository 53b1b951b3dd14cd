//! Finite-difference gradients and Hessians, critical points and harmonicity.

use std::error::Error;

use calclab::diff::{classify_critical, gradient, is_harmonic, ScalarField};

fn main() -> Result<(), Box<dyn Error>> {
    let monkey = ScalarField::new(2, |x| x[0].powi(3) - 3.0 * x[0] * x[1] * x[1]);
    let peak = ScalarField::new(2, |x| -(x[0] * x[0] + 2.0 * x[1] * x[1]) + x[0] * x[1]);
    for (name, f) in [("bowl", ScalarField::builtin("bowl", 3)?), ("saddle", ScalarField::builtin("saddle", 2)?), ("peak", peak), ("monkey", monkey)] {
        let x = vec![0.0; f.dim()];
        let r = classify_critical(&f, &x, None, 1e-6)?;
        println!("{name:<7} {:<10} eigenvalues {:?}", r.kind.as_str(), r.eigenvalues.iter().map(|v| (v * 1e6).round() / 1e6).collect::<Vec<_>>());
    }

    let f = ScalarField::new(2, |x| (x[0] * x[1]).sin());
    println!("grad sin(xy) at (1, 2): {:?}", gradient(&f, &[1.0, 2.0], None)?);

    let samples = vec![vec![0.5, 0.7, 0.9], vec![1.2, -0.3, 0.4]];
    for name in ["inv_r", "bowl"] {
        let check = is_harmonic(&ScalarField::builtin(name, 3)?, &samples, 1e-5)?;
        println!("{name}: harmonic {} residuals {:?}", check.harmonic, check.residuals);
    }
    Ok(())
}
