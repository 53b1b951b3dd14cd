//! Complex roots, multiplicities, resultants and discriminants.

use std::error::Error;

use calclab::linalg::{all_roots_clustered, discriminant, resultant, roots_of_unity, Complex, ComplexPolynomial};

fn real(coeffs: &[f64]) -> ComplexPolynomial {
    ComplexPolynomial::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
}

fn main() -> Result<(), Box<dyn Error>> {
    // (x - 1)^2 (x^2 + 1) = x^4 - 2x^3 + 2x^2 - 2x + 1
    let p = real(&[1.0, -2.0, 2.0, -2.0, 1.0]);
    for c in all_roots_clustered(&p, 1e-12)? {
        println!("root {:+.10} {:+.10}i  multiplicity {}", c.root.re, c.root.im, c.multiplicity);
    }
    println!("disc(p) = {:.3e}", discriminant(&p)?.norm());

    let q = real(&[-2.0, 0.0, 1.0]);
    let r = real(&[-1.0, 1.0]);
    println!("res(x^2 - 2, x - 1) = {}", resultant(&q, &r)?.re);
    println!("res(p, x - 1) = {}", resultant(&p, &r)?.re);

    for z in roots_of_unity(6)? {
        println!("6th root of unity {:+.6} {:+.6}i", z.re, z.im);
    }
    Ok(())
}
