//! Dense exact linear algebra over the fields used in this crate
//! (rationals, Gaussian rationals, surd scalars).

use crate::exact::{ExactScalar, Gq, Rat};
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Field operations needed by the elimination routines.
pub trait FieldScalar:
    Clone
    + PartialEq
    + Zero
    + One
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + Neg<Output = Self>
{
}

impl FieldScalar for Rat {}
impl FieldScalar for Gq {}

impl<'a> Add<&'a ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &'a ExactScalar) -> ExactScalar {
        &self + rhs
    }
}
impl<'a> Sub<&'a ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &'a ExactScalar) -> ExactScalar {
        &self - rhs
    }
}
impl<'a> Mul<&'a ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &'a ExactScalar) -> ExactScalar {
        &self * rhs
    }
}
impl<'a> Div<&'a ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &'a ExactScalar) -> ExactScalar {
        &self / rhs
    }
}
impl FieldScalar for ExactScalar {}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: FieldScalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_cols(cols: Vec<Vec<T>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc = acc + &(self[(i, j)].clone() * &v[j]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows);
        let mut out: Mat<T> = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other[(k, j)].is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + &(self[(i, k)].clone() * &other[(k, j)]);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat<T> {
        let mut out: Mat<T> = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// In-place reduction to row echelon form; returns pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = T::one() / &self[(r, c)].clone();
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].clone() * &inv;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let sub = self[(r, j)].clone() * &f;
                        self[(i, j)] = self[(i, j)].clone() - &sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Solves self · x = b; None when inconsistent. Free variables are 0.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.row_reduce();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    /// Basis of the (right) null space.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let mut free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.sort_unstable();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = vec![T::zero(); self.cols];
            v[fc] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -(m[(r, fc)].clone());
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Mat<T>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = T::one();
        }
        let pivots = aug.row_reduce();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Some(out)
    }

    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return T::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det = det * &m[(c, c)].clone();
            let inv = T::one() / &m[(c, c)].clone();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * &inv;
                for j in c..n {
                    let sub = m[(c, j)].clone() * &f;
                    m[(i, j)] = m[(i, j)].clone() - &sub;
                }
            }
        }
        det
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Span tracker: incremental echelon basis used for closure computations.
pub struct Span<T> {
    dim: usize,
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: FieldScalar> Span<T> {
    pub fn new(dim: usize) -> Self {
        Span { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces v against the span; inserts the residue when independent.
    /// Returns true if the vector enlarged the span.
    pub fn insert(&mut self, v: &[T]) -> bool {
        let mut w = v.to_vec();
        assert_eq!(w.len(), self.dim);
        for (pivot, row) in &self.rows {
            if !w[*pivot].is_zero() {
                let f = w[*pivot].clone() / &row[*pivot];
                for j in 0..self.dim {
                    if !row[j].is_zero() {
                        let sub = f.clone() * &row[j];
                        w[j] = w[j].clone() - &sub;
                    }
                }
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                self.rows.push((pivot, w));
                self.rows.sort_by_key(|(p, _)| *p);
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &[T]) -> bool {
        let mut w = v.to_vec();
        for (pivot, row) in &self.rows {
            if !w[*pivot].is_zero() {
                let f = w[*pivot].clone() / &row[*pivot];
                for j in 0..self.dim {
                    if !row[j].is_zero() {
                        let sub = f.clone() * &row[j];
                        w[j] = w[j].clone() - &sub;
                    }
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn basis(&self) -> Vec<Vec<T>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

/// Signature (positive, negative, zero) of a symmetric rational matrix,
/// by exact congruence diagonalization.
pub fn symmetric_signature(m: &Mat<Rat>) -> (usize, usize, usize) {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    let mut live: Vec<usize> = (0..n).collect();
    while !live.is_empty() {
        // Prefer a nonzero diagonal pivot.
        if let Some(&d) = live.iter().find(|&&i| !a[(i, i)].is_zero()) {
            if a[(d, d)].is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let pivot = a[(d, d)].clone();
            let others: Vec<usize> = live.iter().copied().filter(|&i| i != d).collect();
            for &i in &others {
                if a[(i, d)].is_zero() {
                    continue;
                }
                let f = &a[(i, d)] / &pivot;
                for &j in &others {
                    let sub = &f * &a[(d, j)];
                    a[(i, j)] = &a[(i, j)] - &sub;
                }
            }
            live.retain(|&i| i != d);
            continue;
        }
        // All-diagonal zero: look for an off-diagonal entry.
        let mut found = None;
        'outer: for (ii, &i) in live.iter().enumerate() {
            for &j in &live[ii + 1..] {
                if !a[(i, j)].is_zero() {
                    found = Some((i, j));
                    break 'outer;
                }
            }
        }
        match found {
            None => {
                zero += live.len();
                break;
            }
            Some((i, j)) => {
                // Congruence with x_i ± x_j gives one positive and one
                // negative direction from a hyperbolic pair.
                pos += 1;
                neg += 1;
                let others: Vec<usize> = live.iter().copied().filter(|&k| k != i && k != j).collect();
                let b = a[(i, j)].clone();
                // Rows/cols for the replacement basis e_i' = e_i + e_j, e_j' = e_i − e_j
                // only matter through their interaction with the rest.
                let mut ai: Vec<Rat> = Vec::new();
                let mut aj: Vec<Rat> = Vec::new();
                for &k in &others {
                    ai.push(&a[(i, k)] + &a[(j, k)]);
                    aj.push(&a[(i, k)] - &a[(j, k)]);
                }
                let two = Rat::from_integer(2.into());
                let dplus = &b * &two; // (e_i+e_j)·(e_i+e_j) = 2b, (e_i−e_j)·(e_i−e_j) = −2b
                let dminus = -(&b * &two);
                for (ki, &k) in others.iter().enumerate() {
                    let f = &ai[ki] / &dplus;
                    for (kj, &l) in others.iter().enumerate() {
                        let sub = &f * &ai[kj];
                        a[(k, l)] = &a[(k, l)] - &sub;
                    }
                }
                for (ki, &k) in others.iter().enumerate() {
                    let f = &aj[ki] / &dminus;
                    for (kj, &l) in others.iter().enumerate() {
                        let sub = &f * &aj[kj];
                        a[(k, l)] = &a[(k, l)] - &sub;
                    }
                }
                live.retain(|&k| k != i && k != j);
            }
        }
    }
    (pos, neg, zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_int;

    fn rmat(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat_int(x)).collect()).collect())
    }

    #[test]
    fn solve_and_kernel() {
        let m = rmat(&[&[2, -1], &[-1, 2]]);
        let x = m.solve(&[rat_int(2), rat_int(2)]).unwrap();
        assert_eq!(x, vec![rat_int(2), rat_int(2)]);
        let k = rmat(&[&[1, 1, 0], &[0, 0, 1]]).kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![rat_int(-1), rat_int(1), rat_int(0)]);
    }

    #[test]
    fn inverse_and_det() {
        let m = rmat(&[&[2, -1], &[-3, 2]]);
        assert_eq!(m.det(), rat_int(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Mat::identity(2));
    }

    #[test]
    fn signature_cases() {
        let m = rmat(&[&[2, 0], &[0, -3]]);
        assert_eq!(symmetric_signature(&m), (1, 1, 0));
        let hyper = rmat(&[&[0, 1], &[1, 0]]);
        assert_eq!(symmetric_signature(&hyper), (1, 1, 0));
        let deg = rmat(&[&[1, 1], &[1, 1]]);
        assert_eq!(symmetric_signature(&deg), (1, 0, 1));
        let mixed = rmat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 5]]);
        assert_eq!(symmetric_signature(&mixed), (2, 1, 0));
    }

    #[test]
    fn span_tracker() {
        let mut s = Span::new(3);
        assert!(s.insert(&[rat_int(1), rat_int(1), rat_int(0)]));
        assert!(s.insert(&[rat_int(0), rat_int(1), rat_int(1)]));
        assert!(!s.insert(&[rat_int(1), rat_int(2), rat_int(1)]));
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&[rat_int(2), rat_int(3), rat_int(1)]));
        assert!(!s.contains(&[rat_int(0), rat_int(0), rat_int(1)]));
    }
}
