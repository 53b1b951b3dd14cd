use std::fmt::Debug;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{Num, NumAssign};

use crate::combinat::{signature, Permutation};
use crate::error::{invalid, Error, Result};

/// Field elements the dense routines work over: `f64` and `Complex64`.
pub trait Scalar: Copy + Num + NumAssign + Neg<Output = Self> + Debug + PartialEq + Send + Sync + 'static {
    fn modulus(self) -> f64;
    fn from_f64(x: f64) -> Self;
    fn conj(self) -> Self;
}

impl Scalar for f64 {
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
}

impl Scalar for Complex64 {
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RealMatrix = Matrix<f64>;
pub type ComplexMatrix = Matrix<Complex64>;

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return invalid("matrix dimensions must be positive");
        }
        if data.len() != rows * cols {
            return invalid(format!("{} entries for a {rows}x{cols} matrix", data.len()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return invalid("ragged rows");
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(d: &[T]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| x * c).collect() }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.modulus()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x.modulus().powi(2)).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].modulus()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (&a, &b)| acc + a * b))
            .collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    /// The matrix with row `i` and column `j` removed.
    pub fn minor(&self, i: usize, j: usize) -> Self {
        let keep_r: Vec<_> = (0..self.rows).filter(|&r| r != i).collect();
        let keep_c: Vec<_> = (0..self.cols).filter(|&c| c != j).collect();
        Self::from_fn(keep_r.len(), keep_c.len(), |a, b| self[(keep_r[a], keep_c[b])])
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            invalid(format!("{}x{} matrix is not square", self.rows, self.cols))
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

/// Permutation sum for `N <= 6`, elimination beyond.
pub fn determinant<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    a.require_square()?;
    if a.rows <= 6 {
        determinant_leibniz(a)
    } else {
        determinant_elimination(a)
    }
}

pub fn determinant_leibniz<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    a.require_square()?;
    let n = a.rows;
    Ok(Permutation::all(n).fold(T::zero(), |acc, sigma| {
        let term = (0..n).fold(T::one(), |p, i| p * a[(i, sigma.apply(i))]);
        if signature(&sigma) > 0 {
            acc + term
        } else {
            acc - term
        }
    }))
}

/// Gaussian elimination with partial pivoting.
pub fn determinant_elimination<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    a.require_square()?;
    let n = a.rows;
    let mut m = a.clone();
    let mut det = T::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| m[(r, col)].modulus().total_cmp(&m[(s, col)].modulus()))
            .unwrap();
        if m[(pivot, col)] == T::zero() {
            return Ok(T::zero());
        }
        if pivot != col {
            for j in 0..n {
                m.data.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        let p = m[(col, col)];
        det *= p;
        for r in col + 1..n {
            let factor = m[(r, col)] / p;
            if factor == T::zero() {
                continue;
            }
            for j in col..n {
                let v = m[(col, j)];
                m[(r, j)] -= factor * v;
            }
        }
    }
    Ok(det)
}

/// Adjugate formula for `N <= 3`, Gauss–Jordan beyond.
pub fn inverse<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    a.require_square()?;
    let n = a.rows;
    let det = determinant(a)?;
    let scale = a.max_abs().max(f64::MIN_POSITIVE).powi(n as i32);
    if det.modulus() <= 1e-13 * scale {
        return Err(Error::Singular(det.modulus()));
    }
    if n <= 3 {
        let adj = Matrix::from_fn(n, n, |i, j| {
            if n == 1 {
                return T::one();
            }
            let c = determinant_leibniz(&a.minor(j, i)).expect("minor is square");
            if (i + j) % 2 == 0 {
                c
            } else {
                -c
            }
        });
        return Ok(adj.scale(T::one() / det));
    }
    gauss_jordan(a)
}

fn gauss_jordan<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let n = a.rows;
    let mut m = a.clone();
    let mut inv = Matrix::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| m[(r, col)].modulus().total_cmp(&m[(s, col)].modulus()))
            .unwrap();
        if m[(pivot, col)] == T::zero() {
            return Err(Error::Singular(0.0));
        }
        for j in 0..n {
            m.data.swap(pivot * n + j, col * n + j);
            inv.data.swap(pivot * n + j, col * n + j);
        }
        let p = m[(col, col)];
        for j in 0..n {
            m[(col, j)] /= p;
            inv[(col, j)] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = m[(r, col)];
            if factor == T::zero() {
                continue;
            }
            for j in 0..n {
                let (mv, iv) = (m[(col, j)], inv[(col, j)]);
                m[(r, j)] -= factor * mv;
                inv[(r, j)] -= factor * iv;
            }
        }
    }
    Ok(inv)
}

/// Solves `A x = b` by elimination with partial pivoting.
pub fn solve<T: Scalar>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    a.require_square()?;
    let n = a.rows;
    if b.len() != n {
        return invalid("right-hand side has the wrong length");
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| m[(r, col)].modulus().total_cmp(&m[(s, col)].modulus()))
            .unwrap();
        if m[(pivot, col)] == T::zero() {
            return Err(Error::Singular(0.0));
        }
        for j in 0..n {
            m.data.swap(pivot * n + j, col * n + j);
        }
        x.swap(pivot, col);
        for r in col + 1..n {
            let factor = m[(r, col)] / m[(col, col)];
            for j in col..n {
                let v = m[(col, j)];
                m[(r, j)] -= factor * v;
            }
            let v = x[col];
            x[r] -= factor * v;
        }
    }
    for col in (0..n).rev() {
        let s = (col + 1..n).fold(x[col], |acc, j| acc - m[(col, j)] * x[j]);
        x[col] = s / m[(col, col)];
    }
    Ok(x)
}

/// `exp(tA)` by scaling and squaring a truncated Taylor series.
pub fn matrix_exp<T: Scalar>(a: &Matrix<T>, t: f64) -> Result<Matrix<T>> {
    a.require_square()?;
    let at = a.scale(T::from_f64(t));
    let norm = at.norm_one();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let b = at.scale(T::from_f64(0.5f64.powi(squarings as i32)));
    let n = a.rows;
    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=30 {
        term = (&term * &b).scale(T::from_f64(1.0 / k as f64));
        sum = &sum + &term;
        if term.max_abs() <= 1e-18 * sum.max_abs() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> RealMatrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&RealMatrix::identity(4)).unwrap(), 1.0);
        let (a, b, c, d) = (3.0, -2.0, 5.0, 7.0);
        assert_eq!(determinant(&m(&[&[a, b], &[c, d]])).unwrap(), a * d - b * c);
        let s = m(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0], &[7.0, 8.0, 10.0]]);
        let sarrus = |x: &RealMatrix| {
            let g = |i, j| x[(i, j)];
            g(0, 0) * g(1, 1) * g(2, 2) + g(0, 1) * g(1, 2) * g(2, 0) + g(0, 2) * g(1, 0) * g(2, 1)
                - g(0, 2) * g(1, 1) * g(2, 0)
                - g(0, 1) * g(1, 0) * g(2, 2)
                - g(0, 0) * g(1, 2) * g(2, 1)
        };
        assert_eq!(sarrus(&s), -3.0);
        assert!((determinant(&s).unwrap() + 3.0).abs() < 1e-12);
        assert!((determinant_elimination(&s).unwrap() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn paths_agree() {
        let a = RealMatrix::from_fn(6, 6, |i, j| ((i * 7 + j * 3) % 5) as f64 - 1.5 + if i == j { 2.0 } else { 0.0 });
        let l = determinant_leibniz(&a).unwrap();
        let e = determinant_elimination(&a).unwrap();
        assert!((l - e).abs() <= 1e-9 * l.abs().max(1.0));
    }

    #[test]
    fn inverses() {
        assert_eq!(inverse(&RealMatrix::identity(3)).unwrap(), RealMatrix::identity(3));
        let (a, b, c, d) = (2.0, 1.0, 5.0, 3.0);
        let inv = inverse(&m(&[&[a, b], &[c, d]])).unwrap();
        let det = a * d - b * c;
        let expected = m(&[&[d / det, -b / det], &[-c / det, a / det]]);
        assert!((&inv - &expected).max_abs() < 1e-15);
        let a3 = m(&[&[2.0, -1.0, 0.5], &[1.0, 3.0, -2.0], &[0.0, 4.0, 1.0]]);
        let p = &a3 * &inverse(&a3).unwrap();
        assert!((&p - &RealMatrix::identity(3)).max_abs() < 1e-12);
        let a5 = RealMatrix::from_fn(5, 5, |i, j| 1.0 / (i + j + 1) as f64 + if i == j { 1.0 } else { 0.0 });
        let p = &a5 * &inverse(&a5).unwrap();
        assert!((&p - &RealMatrix::identity(5)).max_abs() < 1e-12);
        assert!(matches!(inverse(&m(&[&[1.0, 2.0], &[2.0, 4.0]])), Err(Error::Singular(_))));
    }

    #[test]
    fn solves() {
        let a = m(&[&[4.0, 1.0, 0.0], &[1.0, 3.0, 1.0], &[0.0, 1.0, 2.0]]);
        let x = solve(&a, &[1.0, 2.0, 3.0]).unwrap();
        let back = a.mul_vec(&x);
        for (u, v) in back.iter().zip([1.0, 2.0, 3.0]) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn exponentials() {
        let z = matrix_exp(&RealMatrix::zeros(3, 3), 2.0).unwrap();
        assert_eq!(z, RealMatrix::identity(3));
        let d = matrix_exp(&RealMatrix::diagonal(&[0.5, -1.5]), 2.0).unwrap();
        assert!((d[(0, 0)] - 1f64.exp()).abs() < 1e-14);
        assert!((d[(1, 1)] - (-3f64).exp()).abs() < 1e-16);
        assert_eq!(d[(0, 1)], 0.0);
        // f'' = f as a first-order system
        let companion = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        for t in [0.3, 1.0, 4.0, 10.0] {
            let e = matrix_exp(&companion, t).unwrap();
            let v = e.mul_vec(&[1.0, 0.0]);
            assert!((v[0] - t.cosh()).abs() <= 1e-12 * t.cosh());
            assert!((v[1] - t.sinh()).abs() <= 1e-12 * t.cosh());
        }
        let rot = m(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let e = matrix_exp(&rot, std::f64::consts::PI).unwrap();
        assert!((&e - &RealMatrix::identity(2).scale(-1.0)).max_abs() < 1e-12);
    }
}
