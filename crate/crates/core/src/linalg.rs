//! Dense exact matrices and Cayley-transform orthogonal/unitary generation.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, GaussianRational, Rational, Ring};
use crate::sphere::random_rational;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
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

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(alloc::format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(alloc::format!(
                "{}x{} times {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += &a.mul_ref(b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("matrix shapes do not match")
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &a.mul_ref(b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub_ref(b)).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul_ref(c)).collect() }
    }

    pub fn neg(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().cloned().map(|a| -a).collect() }
    }

    pub fn trace(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.rows.min(self.cols) {
            acc += &self[(i, i)];
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Block-diagonal `diag(self, self, ..., self)` with `copies` blocks.
    pub fn block_repeat(&self, copies: usize) -> Self {
        let (r, c) = (self.rows, self.cols);
        let mut out = Self::zeros(r * copies, c * copies);
        for b in 0..copies {
            for i in 0..r {
                for j in 0..c {
                    out[(b * r + i, b * c + j)] = self[(i, j)].clone();
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| self[(i / r2, j / c2)].mul_ref(&other[(i % r2, j % c2)]))
    }
}

impl<C: Coeff> Matrix<C> {
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// `A* A = I` (orthogonal for real fields, unitary for complex ones).
    pub fn is_unitary(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        // clear denominators once so the Gram sums run in plain integers
        let den = self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.re().denom()).lcm(x.im().denom()));
        let scaled = |r: Rational| (r * Rational::from_integer(den.clone())).to_integer();
        let re: Vec<BigInt> = self.data.iter().map(|x| scaled(x.re())).collect();
        let im: Vec<BigInt> = self.data.iter().map(|x| scaled(x.im())).collect();
        let n = self.rows;
        let target = &den * &den;
        for i in 0..n {
            for j in i..n {
                let (mut sr, mut si) = (BigInt::zero(), BigInt::zero());
                for k in 0..n {
                    let (a, b) = (k * n + i, k * n + j);
                    sr += &re[a] * &re[b] + &im[a] * &im[b];
                    if C::COMPLEX {
                        si += &re[a] * &im[b] - &im[a] * &re[b];
                    }
                }
                if !si.is_zero() || (i == j && sr != target) || (i != j && !sr.is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> C {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = C::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[(r, col)].is_zero()) else {
                return C::zero();
            };
            if p != col {
                for j in 0..n {
                    a.data.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let pivot = a[(col, col)].clone();
            det *= &pivot;
            let inv = pivot.inv();
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].mul_ref(&inv);
                for j in col..n {
                    let t = a[(col, j)].mul_ref(&f);
                    a[(r, j)] -= &t;
                }
            }
        }
        det
    }

    /// Inverse via Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if p != col {
                for j in 0..n {
                    a.data.swap(p * n + j, col * n + j);
                    inv.data.swap(p * n + j, col * n + j);
                }
            }
            let pivot_inv = a[(col, col)].inv();
            for j in 0..n {
                a[(col, j)] *= &pivot_inv;
                inv[(col, j)] *= &pivot_inv;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let t = a[(col, j)].mul_ref(&f);
                    a[(r, j)] -= &t;
                    let t = inv[(col, j)].mul_ref(&f);
                    inv[(r, j)] -= &t;
                }
            }
        }
        Some(inv)
    }
}

/// Rank of a list of vectors over an exact field.
pub fn rank<C: Coeff>(vectors: &[Vec<C>]) -> usize {
    let mut rows: Vec<Vec<C>> = vectors.to_vec();
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv();
        let (top, bottom) = rows.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in bottom {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].mul_ref(&inv);
            for j in col..ncols {
                let t = pivot[j].mul_ref(&f);
                row[j] -= &t;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Cayley transform `(I - S)(I + S)^{-1}`.
///
/// For real skew-symmetric or complex skew-Hermitian `S` the factor `I + S` is
/// always invertible and the result is orthogonal (resp. unitary).
pub fn cayley<C: Coeff>(s: &Matrix<C>) -> Option<Matrix<C>> {
    let id = Matrix::identity(s.rows());
    let inv = id.add(s).inverse()?;
    Some(id.sub(s).mul(&inv))
}

/// Random rational skew-symmetric matrix with small entries.
pub fn random_skew(dim: usize, rng: &mut impl Rng) -> Matrix<Rational> {
    let mut s = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i + 1..dim {
            let x = random_rational(rng, 5, 4);
            s[(j, i)] = -x.clone();
            s[(i, j)] = x;
        }
    }
    s
}

/// Random Gaussian-rational skew-Hermitian matrix with small entries.
pub fn random_skew_hermitian(dim: usize, rng: &mut impl Rng) -> Matrix<GaussianRational> {
    let mut s = Matrix::zeros(dim, dim);
    for i in 0..dim {
        s[(i, i)] = GaussianRational::new(Rational::zero(), random_rational(rng, 5, 4));
        for j in i + 1..dim {
            let x = GaussianRational::new(random_rational(rng, 5, 4), random_rational(rng, 5, 4));
            s[(j, i)] = -x.conj();
            s[(i, j)] = x;
        }
    }
    s
}

/// Exact rotation in `SO(dim)` from the Cayley transform of a seeded random skew matrix.
pub fn rational_rotation(dim: usize, seed: u64) -> Result<Matrix<Rational>> {
    if dim < 2 {
        return Err(Error::OutOfRange(alloc::format!("rotation dimension {dim} < 2")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        // I + S is never singular for real skew S; the loop only guards the contract
        if let Some(r) = cayley(&random_skew(dim, &mut rng)) {
            return Ok(r);
        }
    }
}

/// Exact unitary matrix from the Cayley transform of a seeded random skew-Hermitian matrix.
pub fn rational_unitary(dim: usize, seed: u64) -> Matrix<GaussianRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        if let Some(u) = cayley(&random_skew_hermitian(dim, &mut rng)) {
            return u;
        }
    }
}

/// Dot product without conjugation.
pub fn dot<T: Ring>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc += &x.mul_ref(y);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn zero_skew_gives_identity() {
        let s = Matrix::<Rational>::zeros(3, 3);
        assert!(cayley(&s).unwrap().is_identity());
    }

    #[test]
    fn planar_cayley_image() {
        let s = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(-1), int(0)]]).unwrap();
        let r = cayley(&s).unwrap();
        // (I - S)(I + S)^{-1} = [[0, -1], [1, 0]]
        assert_eq!(r, Matrix::from_rows(vec![vec![int(0), int(-1)], vec![int(1), int(0)]]).unwrap());
        assert!(r.is_unitary());
        assert_eq!(r.det(), int(1));
    }

    #[test]
    fn rotations_are_special_orthogonal() {
        for seed in 0..10 {
            let r = rational_rotation(5, seed).unwrap();
            assert!(r.is_unitary());
            assert_eq!(r.det(), int(1));
        }
        assert!(rational_rotation(1, 0).is_err());
    }

    #[test]
    fn unitaries_are_unitary() {
        for seed in 0..5 {
            let u = rational_unitary(3, seed);
            assert!(u.is_unitary());
            assert_eq!(u.det().norm_sqr(), int(1));
        }
    }

    #[test]
    fn inverse_and_rank() {
        let m = Matrix::from_rows(vec![vec![int(2), int(1)], vec![rat(1, 3), int(4)]]).unwrap();
        assert!(m.mul(&m.inverse().unwrap()).is_identity());
        let singular = Matrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]).unwrap();
        assert!(singular.inverse().is_none());
        assert_eq!(singular.det(), int(0));
        assert_eq!(rank(&[vec![int(1), int(2)], vec![int(2), int(4)]]), 1);
    }
}
