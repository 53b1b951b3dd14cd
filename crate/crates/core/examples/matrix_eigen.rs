//! Jacobi eigenvalues of a symmetric matrix next to the characteristic-polynomial route.

use std::error::Error;

use calclab::linalg::{determinant, eigenvalues, matrix_exp, symmetric_eigen, Complex, RealMatrix};

fn main() -> Result<(), Box<dyn Error>> {
    let a = RealMatrix::from_fn(5, 5, |i, j| 1.0 / (i + j + 1) as f64);
    let eig = symmetric_eigen(&a, 1e-14)?;
    println!("Hilbert(5) eigenvalues (Jacobi):");
    for v in &eig.values {
        println!("  {v:.15e}");
    }
    println!("product {:.6e} vs det {:.6e}", eig.values.iter().product::<f64>(), determinant(&a)?);

    let rotation = RealMatrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]])?;
    for z in eigenvalues(&rotation.map(|x| Complex::new(x, 0.0)))? {
        println!("rotation eigenvalue {:+.3} {:+.3}i", z.re, z.im);
    }
    let quarter = matrix_exp(&rotation, std::f64::consts::FRAC_PI_2)?;
    println!("exp(pi/2 J) = {:?}", quarter.entries().iter().map(|v| (v * 1e12).round() / 1e12).collect::<Vec<_>>());
    Ok(())
}
