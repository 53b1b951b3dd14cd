//! Dense complex/real linear algebra and polynomial roots.

mod eigen;
mod matrix;
mod poly;

pub use eigen::{
    characteristic_polynomial, circulant, circulant_diag, eigenvalues, classify_definiteness, classify_eigenvalues, fourier_matrix, symmetric_eigen,
    CirculantDiag, Definiteness, SymmetricEigen,
};
pub use matrix::{
    determinant, determinant_elimination, determinant_leibniz, inverse, matrix_exp, solve, ComplexMatrix, Matrix,
    RealMatrix, Scalar,
};
pub use num_complex::Complex64 as Complex;
pub use poly::{
    all_roots, all_roots_clustered, cardano, discriminant, equilateral_test, resultant, roots_of_unity,
    solve_quadratic, sylvester_matrix, unity_power_sum, ComplexPolynomial, Polynomial, RealPolynomial, RootCluster,
};
pub(crate) use poly::unit_root;
