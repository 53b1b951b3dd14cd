use num_complex::Complex64;

use super::matrix::{ComplexMatrix, Matrix, RealMatrix};
use super::poly::{all_roots, unit_root, ComplexPolynomial, Polynomial};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    /// Eigenvalues, largest first.
    pub values: Vec<f64>,
    /// Orthogonal matrix whose columns are the matching eigenvectors.
    pub vectors: RealMatrix,
    pub sweeps: usize,
}

impl SymmetricEigen {
    /// `U D Uᵗ`.
    pub fn reconstruct(&self) -> RealMatrix {
        let d = RealMatrix::diagonal(&self.values);
        &(&self.vectors * &d) * &self.vectors.transpose()
    }
}

const MAX_SWEEPS: usize = 100;

fn off_diagonal(a: &RealMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic-by-rows Jacobi rotations until the off-diagonal Frobenius norm
/// falls to `tol·‖A‖_F`.
pub fn symmetric_eigen(a: &RealMatrix, tol: f64) -> Result<SymmetricEigen> {
    if !a.is_square() {
        return invalid("symmetric_eigen needs a square matrix");
    }
    let asym = (a - &a.transpose()).max_abs();
    if asym > tol * a.max_abs().max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut u = RealMatrix::identity(n);
    let target = tol * a.frobenius();
    let mut sweeps = 0;
    while off_diagonal(&m) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NonConvergence { what: "Jacobi eigenvalue sweeps", iterations: MAX_SWEEPS });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut u, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok(SymmetricEigen { values, vectors, sweeps })
}

fn rotate(m: &mut RealMatrix, u: &mut RealMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = m.rows();
    for k in 0..n {
        let (mkp, mkq) = (m[(k, p)], m[(k, q)]);
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let (mpk, mqk) = (m[(p, k)], m[(q, k)]);
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    m[(p, q)] = 0.0;
    m[(q, p)] = 0.0;
    for k in 0..n {
        let (ukp, ukq) = (u[(k, p)], u[(k, q)]);
        u[(k, p)] = c * ukp - s * ukq;
        u[(k, q)] = s * ukp + c * ukq;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,
    NegativeDefinite,
    NegativeSemidefinite,
    Indefinite,
    Zero,
}

impl Definiteness {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::PositiveDefinite => "pos_def",
            Self::PositiveSemidefinite => "pos_semi",
            Self::NegativeDefinite => "neg_def",
            Self::NegativeSemidefinite => "neg_semi",
            Self::Indefinite => "indefinite",
            Self::Zero => "zero",
        }
    }
}

/// Sign pattern of the eigenvalues, treating `|λ| <= band·‖A‖` as zero.
pub fn classify_eigenvalues(values: &[f64], norm: f64, band: f64) -> Definiteness {
    let zero = band * norm;
    let pos = values.iter().filter(|&&l| l > zero).count();
    let neg = values.iter().filter(|&&l| l < -zero).count();
    let n = values.len();
    match (pos, neg) {
        (0, 0) => Definiteness::Zero,
        (p, 0) if p == n => Definiteness::PositiveDefinite,
        (_, 0) => Definiteness::PositiveSemidefinite,
        (0, q) if q == n => Definiteness::NegativeDefinite,
        (0, _) => Definiteness::NegativeSemidefinite,
        _ => Definiteness::Indefinite,
    }
}

pub fn classify_definiteness(a: &RealMatrix, tol: f64) -> Result<Definiteness> {
    let eig = symmetric_eigen(a, tol.max(1e-14))?;
    let norm = eig.values.iter().map(|l| l.abs()).fold(0.0, f64::max);
    Ok(classify_eigenvalues(&eig.values, norm, tol))
}

/// `F_ij = w^{ij}` with `w = e^{2πi/N}`.
pub fn fourier_matrix(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return invalid("Fourier matrix of order 0");
    }
    Ok(Matrix::from_fn(n, n, |i, j| unit_root(i * j, n)))
}

/// The circulant with `A_ij = ξ_{(j-i) mod N}`.
pub fn circulant(xi: &[Complex64]) -> Result<ComplexMatrix> {
    if xi.is_empty() {
        return invalid("empty circulant generator");
    }
    let n = xi.len();
    Ok(Matrix::from_fn(n, n, |i, j| xi[(j + n - i) % n]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CirculantDiag {
    /// `q = F ξ`; the k-th entry belongs to the eigenvector `(w^{jk})_j`.
    pub eigenvalues: Vec<Complex64>,
    /// `F diag(q) F* / N`, which should equal the circulant.
    pub reconstruction: ComplexMatrix,
}

pub fn circulant_diag(xi: &[Complex64]) -> Result<CirculantDiag> {
    let n = xi.len();
    let f = fourier_matrix(n)?;
    let q = f.mul_vec(xi);
    let qd = Matrix::diagonal(&q);
    let reconstruction = (&(&f * &qd) * &f.adjoint()).scale(Complex64::new(1.0 / n as f64, 0.0));
    Ok(CirculantDiag { eigenvalues: q, reconstruction })
}

/// `det(λI - A)` by the Faddeev–LeVerrier recursion, ascending coefficients.
pub fn characteristic_polynomial(a: &ComplexMatrix) -> Result<ComplexPolynomial> {
    if !a.is_square() || a.rows() == 0 {
        return invalid("characteristic polynomial needs a nonempty square matrix");
    }
    let n = a.rows();
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[n] = Complex64::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        m = &(a * &m) + &Matrix::identity(n).scale(c[n + 1 - k]);
        c[n - k] = -(a * &m).trace() / k as f64;
    }
    Ok(Polynomial::new(c))
}

/// Eigenvalues of a general square matrix as roots of its characteristic
/// polynomial. Fine for small, well-scaled matrices.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let p = characteristic_polynomial(a)?;
    all_roots(&p, 1e-13 * (1.0 + a.max_abs()))
}
