//! Dense matrices and exact subspace arithmetic.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::Field;

/// Commutative ring with identity: enough structure for products and sums.
pub trait Ring:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + fmt::Debug
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Matrix { rows, cols, data }
    }

    /// Builds from row vectors; `cols` is needed for the 0-row case.
    pub fn from_rows(rows: &[Vec<T>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().cloned());
        }
        Matrix { rows: rows.len(), cols, data }
    }

    /// Builds from column vectors of length `rows`.
    pub fn from_cols(cols: &[Vec<T>], rows: usize) -> Self
    where
        T: Zero,
    {
        let mut m = Matrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c1]);
        }
        Matrix { rows: r1 - r0, cols: c1 - c0, data }
    }

    /// Principal submatrix on the given index set.
    pub fn principal(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: idx.len(), cols: idx.len(), data }
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Matrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Direct sum of square blocks.
    pub fn block_diag(blocks: &[Matrix<T>]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(r, c);
        let (mut i0, mut j0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(i0 + i, j0 + j)] = b[(i, j)].clone();
                }
            }
            i0 += b.rows;
            j0 += b.cols;
        }
        m
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Matrix unit `e_{ij}` of size `n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        m[(i, j)] = T::one();
        m
    }

    pub fn diag(entries: &[T]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }
}

impl<T: Ring> Matrix<T> {
    pub fn mul_mat(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let mut m = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b.clone();
                    let cell: &mut T = &mut m.data[i * o.cols + j];
                    *cell = cell.clone() + prod;
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn add_mat(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub_mat(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    /// `self·o − o·self`
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul_mat(o).sub_mat(&o.mul_mat(self))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = Matrix::identity(self.rows);
        for _ in 0..e {
            r = r.mul_mat(self);
        }
        r
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> Matrix<F> {
    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().map(Field::conj)
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_negligible()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = F::one() / m[(r, c)].clone();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_negligible() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = m[(r, j)].clone() * f.clone();
                    m[(i, j)] = m[(i, j)].clone() - v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x | self·x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(k, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0, n, n, 2 * n))
    }

    /// Fraction-free determinant by elimination.
    pub fn determinant(&self) -> F {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_negligible()) else {
                return F::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..n {
                if m[(i, c)].is_negligible() {
                    continue;
                }
                let f = m[(i, c)].clone() / piv.clone();
                for j in c..n {
                    let v = m[(c, j)].clone() * f.clone();
                    m[(i, j)] = m[(i, j)].clone() - v;
                }
            }
        }
        det
    }

    /// Some `x` with `self·x = b`, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_cols(&[b.to_vec()], self.rows));
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (k, &p) in pivots.iter().enumerate() {
            x[p] = r[(k, self.cols)].clone();
        }
        Some(x)
    }

    pub fn column_space(&self) -> Subspace<F> {
        Subspace::span(self.rows, &(0..self.cols).map(|j| self.col(j)).collect::<Vec<_>>())
    }

    pub fn row_space(&self) -> Subspace<F> {
        Subspace::span(self.cols, &self.rows_vec())
    }
}

/// Hermitian inner product `⟨u, v⟩ = Σ conj(u_i)·v_i`.
pub fn inner<F: Field>(u: &[F], v: &[F]) -> F {
    u.iter().zip(v).fold(F::zero(), |acc, (a, b)| acc + a.conj() * b.clone())
}

pub fn is_zero_vec<F: Field>(v: &[F]) -> bool {
    v.iter().all(Field::is_negligible)
}

/// A linear subspace of `F^n`, stored by its reduced row echelon basis so
/// equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vec<F>>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient: n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
            .collect();
        Subspace { ambient: n, basis }
    }

    pub fn span(n: usize, vectors: &[Vec<F>]) -> Self {
        if vectors.is_empty() {
            return Subspace::zero(n);
        }
        let (r, pivots) = Matrix::from_rows(vectors, n).rref();
        Subspace { ambient: n, basis: r.rows_vec().into_iter().take(pivots.len()).collect() }
    }

    pub fn line(v: Vec<F>) -> Self {
        let n = v.len();
        Subspace::span(n, &[v])
    }

    /// Span of standard basis vectors.
    pub fn coordinate(n: usize, idx: &[usize]) -> Self {
        let vs: Vec<Vec<F>> = idx
            .iter()
            .map(|&i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
            .collect();
        Subspace::span(n, &vs)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn contains(&self, v: &[F]) -> bool {
        if is_zero_vec(v) {
            return true;
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Matrix::from_rows(&rows, self.ambient).rank() == self.dim()
    }

    pub fn is_subspace_of(&self, o: &Self) -> bool {
        self.ambient == o.ambient && self.basis.iter().all(|v| o.contains(v))
    }

    pub fn sum(&self, o: &Self) -> Self {
        let mut rows = self.basis.clone();
        rows.extend(o.basis.iter().cloned());
        Subspace::span(self.ambient, &rows)
    }

    /// Orthogonal complement for the standard Hermitian form.
    pub fn complement(&self) -> Self {
        if self.is_zero() {
            return Subspace::full(self.ambient);
        }
        let conj_rows: Vec<Vec<F>> =
            self.basis.iter().map(|v| v.iter().map(Field::conj).collect()).collect();
        Subspace::span(self.ambient, &Matrix::from_rows(&conj_rows, self.ambient).kernel())
    }

    /// `V ∩ W = (V^⊥ + W^⊥)^⊥`, computed by an exact kernel.
    pub fn intersect(&self, o: &Self) -> Self {
        self.complement().sum(&o.complement()).complement()
    }

    /// Orthogonal projector onto the subspace, `M (M*M)^{-1} M*`.
    pub fn projector(&self) -> Matrix<F> {
        let n = self.ambient;
        if self.is_zero() {
            return Matrix::zeros(n, n);
        }
        let m = Matrix::from_cols(&self.basis, n);
        let gram = m.adjoint().mul_mat(&m);
        let inv = gram.inverse().expect("Gram matrix of a basis is invertible");
        m.mul_mat(&inv).mul_mat(&m.adjoint())
    }

    /// Image of the subspace under a linear map.
    pub fn image(&self, m: &Matrix<F>) -> Self {
        let vs: Vec<Vec<F>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(m.nrows(), &vs)
    }
}

impl<T: serde::Serialize> serde::Serialize for Matrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            seq.serialize_element(&self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        seq.end()
    }
}

impl<'de, T: serde::Deserialize<'de>> serde::Deserialize<'de> for Matrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<T>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom("matrix rows have different lengths"));
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gi, q, qi, GaussRational, Rational};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| qi(x)).collect()
    }

    #[test]
    fn kernel_and_rank() {
        let m = Matrix::from_rows(&[v(&[1, 2, 3]), v(&[2, 4, 6])], 3);
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(is_zero_vec(&m.mul_vec(x)));
        }
    }

    #[test]
    fn intersection_of_planes_in_three_space() {
        let a = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Subspace::span(3, &[v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(a.intersect(&b), Subspace::span(3, &[v(&[0, 1, 0])]));
    }

    #[test]
    fn projector_is_idempotent_and_hermitian() {
        let s: Subspace<GaussRational> = Subspace::line(vec![gi(1), crate::scalar::gq(qi(0), qi(1))]);
        let p = s.projector();
        assert_eq!(p.mul_mat(&p), p);
        assert!(p.is_hermitian());
        assert_eq!(p.trace(), gi(1));
    }

    #[test]
    fn inverse_and_determinant() {
        let m = Matrix::from_rows(&[v(&[2, 1]), v(&[1, 1])], 2);
        assert_eq!(m.determinant(), qi(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul_mat(&inv), Matrix::identity(2));
        let s = Matrix::from_rows(&[v(&[1, 2]), v(&[2, 4])], 2);
        assert!(s.inverse().is_none());
        assert_eq!(Matrix::from_rows(&[vec![q(1, 2)]], 1).determinant(), q(1, 2));
    }

    #[test]
    fn complement_is_involutive() {
        let s = Subspace::span(3, &[v(&[1, 1, 0])]);
        assert_eq!(s.complement().dim(), 2);
        assert_eq!(s.complement().complement(), s);
    }

    #[test]
    fn float_kernel_shares_code_path() {
        let m: Matrix<f64> = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]], 2);
        assert_eq!(m.rank(), 1);
    }
}
