//! Smith normal form over Euclidean integer types, with the unimodular
//! transforms and their inverses tracked, plus the lattice helpers built on it.

use num_integer::Integer;
use num_traits::Signed;

use crate::linalg::{Matrix, Ring};

/// Integer scalar usable by the SNF kernels (`i64`, `i128`, `BigInt`, ...).
pub trait IntScalar: Ring + Integer + Signed {}
impl<T: Ring + Integer + Signed> IntScalar for T {}

/// `u · m · v = s`, with `u_inv`, `v_inv` the exact inverses.
#[derive(Clone, Debug, PartialEq)]
pub struct Snf<T> {
    pub s: Matrix<T>,
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub v: Matrix<T>,
    pub v_inv: Matrix<T>,
    pub rank: usize,
}

impl<T: IntScalar> Snf<T> {
    /// Nonzero invariant factors `d_1 | d_2 | ...`.
    pub fn invariants(&self) -> Vec<T> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

struct Work<T> {
    m: Matrix<T>,
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
    v_inv: Matrix<T>,
}

impl<T: IntScalar> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.m.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.m.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row_i += c·row_j
    fn add_row(&mut self, i: usize, j: usize, c: &T) {
        add_row(&mut self.m, i, j, c);
        add_row(&mut self.u, i, j, c);
        add_col(&mut self.u_inv, j, i, &-c.clone());
    }

    /// col_i += c·col_j
    fn add_col(&mut self, i: usize, j: usize, c: &T) {
        add_col(&mut self.m, i, j, c);
        add_col(&mut self.v, i, j, c);
        add_row(&mut self.v_inv, j, i, &-c.clone());
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.m.ncols() {
            self.m[(i, j)] = -self.m[(i, j)].clone();
        }
        for j in 0..self.u.ncols() {
            self.u[(i, j)] = -self.u[(i, j)].clone();
        }
        for r in 0..self.u_inv.nrows() {
            self.u_inv[(r, i)] = -self.u_inv[(r, i)].clone();
        }
    }
}

fn add_row<T: IntScalar>(m: &mut Matrix<T>, i: usize, j: usize, c: &T) {
    if c.is_zero() {
        return;
    }
    for k in 0..m.ncols() {
        let d = m[(j, k)].clone() * c.clone();
        m[(i, k)] = m[(i, k)].clone() + d;
    }
}

fn add_col<T: IntScalar>(m: &mut Matrix<T>, i: usize, j: usize, c: &T) {
    if c.is_zero() {
        return;
    }
    for k in 0..m.nrows() {
        let d = m[(k, j)].clone() * c.clone();
        m[(k, i)] = m[(k, i)].clone() + d;
    }
}

pub fn smith_normal_form<T: IntScalar>(m: &Matrix<T>) -> Snf<T> {
    let (r, c) = (m.nrows(), m.ncols());
    let mut w = Work {
        m: m.clone(),
        u: Matrix::identity(r),
        u_inv: Matrix::identity(r),
        v: Matrix::identity(c),
        v_inv: Matrix::identity(c),
    };
    let mut t = 0;
    while t < r.min(c) {
        // smallest nonzero entry in the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = &w.m[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.m[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        let mut clean = true;
        for i in t + 1..r {
            if !w.m[(i, t)].is_zero() {
                let q = w.m[(i, t)].div_floor(&w.m[(t, t)]);
                w.add_row(i, t, &-q);
                if !w.m[(i, t)].is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..c {
            if !w.m[(t, j)].is_zero() {
                let q = w.m[(t, j)].div_floor(&w.m[(t, t)]);
                w.add_col(j, t, &-q);
                if !w.m[(t, j)].is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            // a smaller remainder exists; pick it up as the next pivot
            continue;
        }
        let bad = (t + 1..r)
            .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
            .find(|&(i, j)| !w.m[(i, j)].is_multiple_of(&w.m[(t, t)]));
        if let Some((i, _)) = bad {
            w.add_row(t, i, &T::one());
            continue;
        }
        if w.m[(t, t)].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    Snf { s: w.m, u: w.u, u_inv: w.u_inv, v: w.v, v_inv: w.v_inv, rank: t }
}

/// Basis (as columns) of the lattice spanned by the columns of `m`.
pub fn lattice_basis<T: IntScalar>(m: &Matrix<T>) -> Matrix<T> {
    let f = smith_normal_form(m);
    let cols: Vec<Vec<T>> = (0..f.rank)
        .map(|i| f.u_inv.col(i).into_iter().map(|x| x * f.s[(i, i)].clone()).collect())
        .collect();
    Matrix::from_cols(&cols, m.nrows())
}

/// Basis (as columns) of `{x ∈ Z^n | m·x = 0}`.
pub fn integer_kernel<T: IntScalar>(m: &Matrix<T>) -> Matrix<T> {
    let f = smith_normal_form(m);
    let n = m.ncols();
    f.v.submatrix(0, n, f.rank, n)
}

/// Some integer `x` with `m·x = b`, if one exists.
pub fn integer_solve<T: IntScalar>(m: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    integer_solve_with(&smith_normal_form(m), b)
}

/// Same as [`integer_solve`] for a precomputed factorisation.
pub fn integer_solve_with<T: IntScalar>(f: &Snf<T>, b: &[T]) -> Option<Vec<T>> {
    let c = f.u.mul_vec(b);
    let n = f.v.nrows();
    let mut y = vec![T::zero(); n];
    for (i, ci) in c.iter().enumerate() {
        if i < f.rank {
            let d = &f.s[(i, i)];
            if !ci.is_multiple_of(d) {
                return None;
            }
            y[i] = ci.div_floor(d);
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(f.v.mul_vec(&y))
}
