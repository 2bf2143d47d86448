//! Small dense complex matrices.
//!
//! Everything in this crate lives at desk scale (dimensions up to a few
//! dozen), so a plain row-major `Vec<Complex<T>>` with naive kernels is all
//! that is needed.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::{cone, cr, czero, Real};

#[derive(Clone, PartialEq)]
pub struct CMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> fmt::Debug for CMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![czero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from row vectors; panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.iter().flatten().copied().collect() }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        Self::from_fn(rows.len(), rows.first().map_or(0, |r| r.len()), |i, j| cr(T::lit(rows[i][j])))
    }

    pub fn scalar(z: Complex<T>) -> Self {
        Self { rows: 1, cols: 1, data: vec![z] }
    }

    /// Column vector.
    pub fn column(v: &[Complex<T>]) -> Self {
        Self { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// Elementary matrix `E_{r,c}`.
    pub fn unit(rows: usize, cols: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(r, c)] = cone();
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_col(&mut self, c: usize, v: &[Complex<T>]) {
        assert_eq!(v.len(), self.rows);
        for (r, z) in v.iter().enumerate() {
            self[(r, c)] = *z;
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).fold(czero(), |a, b| a + b)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// `max |self - other|` entrywise; panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max)
    }

    /// `Σ_{ij} a_ij conj(b_ij)`: the unnormalized Hilbert–Schmidt product tr(B* A).
    pub fn hs_dot(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data.iter().zip(&other.data).fold(czero(), |acc, (a, b)| acc + a * b.conj())
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(czero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// Copies the block starting at `(r0, c0)` of the given shape.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |r, c| self[(r0 + r, c0 + c)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self[(r0 + r, c0 + c)] = b[(r, c)];
            }
        }
    }

    /// Block-diagonal matrix with `copies` copies of `self`.
    pub fn block_diag_repeat(&self, copies: usize) -> Self {
        let mut m = Self::zeros(self.rows * copies, self.cols * copies);
        for i in 0..copies {
            m.set_block(i * self.rows, i * self.cols, self);
        }
        m
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(T::min_positive_value());
        for col in 0..n {
            let pivot = (col..n).max_by(|&i, &j| a[(i, col)].norm().partial_cmp(&a[(j, col)].norm()).unwrap())?;
            if a[(pivot, col)].norm() <= scale * T::epsilon() * T::of_usize(n) {
                return None;
            }
            if pivot != col {
                for k in 0..n {
                    a.data.swap(pivot * n + k, col * n + k);
                    inv.data.swap(pivot * n + k, col * n + k);
                }
            }
            let p = a[(col, col)].inv();
            for k in 0..n {
                a[(col, k)] = a[(col, k)] * p;
                inv[(col, k)] = inv[(col, k)] * p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[(r, col)];
                if factor == czero() {
                    continue;
                }
                for k in 0..n {
                    let ak = a[(col, k)];
                    let ik = inv[(col, k)];
                    a[(r, k)] = a[(r, k)] - factor * ak;
                    inv[(r, k)] = inv[(r, k)] - factor * ik;
                }
            }
        }
        Some(inv)
    }

    /// Principal square root of a Hermitian positive-definite matrix
    /// (Denman–Beavers iteration). `None` if an iterate becomes singular or
    /// the iteration fails to settle.
    pub fn sqrt_hpd(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut y = self.clone();
        let mut z = Self::identity(n);
        let half = T::lit(0.5);
        for _ in 0..100 {
            let y_inv = y.inverse()?;
            let z_inv = z.inverse()?;
            let y_next = (&y + &z_inv).scale(half);
            let z_next = (&z + &y_inv).scale(half);
            let delta = y_next.max_abs_diff(&y);
            y = y_next;
            z = z_next;
            if delta <= T::epsilon() * T::lit(16.0) * y.max_abs().max(T::one()) {
                // symmetrize away rounding drift
                return Some((&y + &y.adjoint()).scale(half));
            }
        }
        None
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) < tol
    }
}

impl<T: Real> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch {:?} x {:?}", self.shape(), rhs.shape());
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == czero() {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, b) in out_row.iter_mut().zip(rhs_row) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn neg(self) -> CMatrix<T> {
        self.map(|z| -z)
    }
}

/// `⟨a, b⟩ = Σ a_i conj(b_i)` (linear in the first slot).
pub fn inner<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(czero(), |acc, (x, y)| acc + x * y.conj())
}

pub fn norm<T: Real>(a: &[Complex<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

pub fn basis_vector<T: Real>(n: usize, i: usize) -> Vec<Complex<T>> {
    let mut v = vec![czero(); n];
    v[i] = cone();
    v
}

/// Multiplies `v` by the unit phase that makes its first entry of largest
/// modulus real and positive. Entries within a relative window of the
/// maximum count as ties, and the first of them wins.
pub fn canonical_phase<T: Real>(entries: &[Complex<T>]) -> Complex<T> {
    let max = entries.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    if max == T::zero() {
        return cone();
    }
    let window = max * T::rank_keep();
    let pivot = entries.iter().find(|z| z.norm() >= max - window).copied().unwrap_or_else(cone);
    pivot.conj() / pivot.norm()
}

/// Orthonormal basis (as columns) of the column span of `m`, by twice-iterated
/// modified Gram–Schmidt under the Euclidean product; columns with residual
/// norm below `drop` are discarded.
pub fn orthonormal_columns<T: Real>(m: &CMatrix<T>, drop: T) -> CMatrix<T> {
    let mut basis: Vec<Vec<Complex<T>>> = Vec::new();
    for c in 0..m.cols() {
        let mut v = m.col(c);
        for _ in 0..2 {
            for b in &basis {
                let p = inner(&v, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x = *x - p * y;
                }
            }
        }
        let n = norm(&v);
        if n > drop {
            basis.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    let mut out = CMatrix::zeros(m.rows(), basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_col(j, b);
    }
    out
}

/// Orthogonal projector onto the column span of `m`.
pub fn range_projector<T: Real>(m: &CMatrix<T>, drop: T) -> CMatrix<T> {
    let q = orthonormal_columns(m, drop);
    &q * &q.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn inverse_round_trip() {
        let m = CMatrix::<f64>::from_rows(&[
            vec![c(2.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)],
            vec![c(0.5, 0.0), c(3.0, 0.0), c(0.0, 2.0)],
            vec![c(1.0, 1.0), c(0.0, 0.0), c(4.0, -1.0)],
        ]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).max_abs_diff(&CMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = CMatrix::<f64>::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(m.inverse().is_none());
    }

    #[test]
    fn sqrt_of_hpd() {
        let b = CMatrix::<f64>::from_rows(&[vec![c(1.0, 0.0), c(0.3, 0.2)], vec![c(-0.1, 0.4), c(2.0, 0.0)]]);
        let a = &b.adjoint() * &b;
        let s = a.sqrt_hpd().unwrap();
        assert!((&s * &s).max_abs_diff(&a) < 1e-12);
        assert!(s.is_hermitian(1e-12));
    }

    #[test]
    fn phase_picks_first_largest() {
        let v: Vec<Complex<f64>> = vec![c(0.0, 0.5), c(0.0, -1.0), c(1.0, 0.0)];
        let p = canonical_phase(&v);
        let w = v[1] * p;
        assert!((w.re - 1.0).abs() < 1e-15 && w.im.abs() < 1e-15);
    }

    #[test]
    fn projector_of_span() {
        let m = CMatrix::<f64>::from_real_rows(&[&[1.0, 2.0], &[1.0, 2.0], &[0.0, 0.0]]);
        let p = range_projector(&m, 1e-10);
        assert!((p.trace().re - 1.0).abs() < 1e-12);
        assert!((&p * &p).max_abs_diff(&p) < 1e-12);
    }
}
