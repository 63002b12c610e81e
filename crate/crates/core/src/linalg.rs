//! Dense complex linear algebra for the small operators used throughout the crate.
//!
//! Everything here works on square matrices of dimension at most [`MAX_DIM`]. The
//! Hermitian eigensolver is a cyclic complex Jacobi method: each rotation first removes
//! the phase of the pivot element and then applies an ordinary real Jacobi rotation.
//! Eigenpairs come back sorted by non-increasing eigenvalue with a fixed phase
//! convention, so eigenvector matrices are reproducible from run to run.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 64;

/// Default tolerance on `max |A - A^H|` accepted as Hermitian.
pub const DEFAULT_HERMITIAN_TOL: f64 = 1e-10;

/// Default relative cutoff (against the largest eigenvalue) below which an
/// eigenvalue is treated as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        Err(Error::DimensionOutOfRange(dim))
    } else {
        Ok(())
    }
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: vec![Complex::zero(); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |k, l| if k == l { Complex::one() } else { Complex::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Result<Self> {
        check_dim(dim)?;
        let mut data = Vec::with_capacity(dim * dim);
        for k in 0..dim {
            for l in 0..dim {
                data.push(f(k, l));
            }
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from row-major complex entries.
    pub fn from_entries(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, data: entries })
    }

    /// Builds a matrix from row-major real entries.
    pub fn from_real(dim: usize, entries: &[T]) -> Result<Self> {
        Self::from_entries(dim, entries.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        Self::from_fn(diag.len(), |k, l| {
            if k == l {
                Complex::new(diag[k], T::zero())
            } else {
                Complex::zero()
            }
        })
    }

    /// `|a><b|`
    pub fn outer(a: &[Complex<T>], b: &[Complex<T>]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        Self::from_fn(a.len(), |k, l| a[k] * b[l].conj())
    }

    /// `|a><a|`
    pub fn projector(a: &[Complex<T>]) -> Result<Self> {
        Self::outer(a, a)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = self.clone();
        for k in 0..self.dim {
            for l in 0..self.dim {
                out[(k, l)] = self[(l, k)].conj();
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|k| self[(k, k)]).fold(Complex::zero(), |acc, z| acc + z)
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// `max |A - B|` over all entries.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    /// `max |A - A^H|`
    pub fn hermiticity_residual(&self) -> T {
        let mut r = T::zero();
        for k in 0..self.dim {
            for l in k..self.dim {
                r = r.max((self[(k, l)] - self[(l, k)].conj()).norm());
            }
        }
        r
    }

    /// `(A + A^H) / 2`
    pub fn hermitian_part(&self) -> Self {
        let half = lit::<T>(0.5);
        Self::from_fn(self.dim, |k, l| (self[(k, l)] + self[(l, k)].conj()) * half)
            .expect("dimension already validated")
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()
    }

    fn off_diagonal_norm(&self) -> T {
        let mut s = T::zero();
        for k in 0..self.dim {
            for l in 0..self.dim {
                if k != l {
                    s = s + self[(k, l)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        (0..self.dim)
            .map(|k| {
                (0..self.dim).fold(Complex::zero(), |acc, l| acc + self[(k, l)] * v[l])
            })
            .collect()
    }

    /// `U A U^H`
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// `AB - BA`
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.dim).map(|k| self[(k, j)]).collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (k, l): (usize, usize)) -> &Complex<T> {
        assert!(k < self.dim && l < self.dim, "index ({k}, {l}) out of range");
        &self.data[k * self.dim + l]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (k, l): (usize, usize)) -> &mut Complex<T> {
        assert!(k < self.dim && l < self.dim, "index ({k}, {l}) out of range");
        &mut self.data[k * self.dim + l]
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut data = vec![Complex::zero(); n * n];
        for k in 0..n {
            for j in 0..n {
                let a = self.data[k * n + j];
                if a.is_zero() {
                    continue;
                }
                for l in 0..n {
                    data[k * n + l] = data[k * n + l] + a * rhs.data[j * n + l];
                }
            }
        }
        Matrix { dim: n, data }
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{}) [", self.dim, self.dim)?;
        for k in 0..self.dim {
            write!(f, "  ")?;
            for l in 0..self.dim {
                let z = &self.data[k * self.dim + l];
                write!(f, "({:?}, {:?})  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigenpairs of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct EigenDecomposition<T> {
    /// Sorted non-increasing.
    pub eigenvalues: Vec<T>,
    /// Column `j` is the unit eigenvector for `eigenvalues[j]`.
    pub eigenvectors: Matrix<T>,
    pub source_dim: usize,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn eigenvector(&self, j: usize) -> Vec<Complex<T>> {
        self.eigenvectors.column(j)
    }

    pub fn min_eigenvalue(&self) -> T {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues[0]
    }

    /// `sum_j f(lambda_j) |v_j><v_j|`
    pub fn map_spectrum(&self, mut f: impl FnMut(usize, T) -> T) -> Matrix<T> {
        let n = self.source_dim;
        let mut out = Matrix::zeros(n).expect("valid dimension");
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(j, lam);
            if w.is_zero() {
                continue;
            }
            for k in 0..n {
                let vk = self.eigenvectors[(k, j)] * w;
                for l in 0..n {
                    out[(k, l)] = out[(k, l)] + vk * self.eigenvectors[(l, j)].conj();
                }
            }
        }
        out
    }

    /// `V diag(lambda) V^H`
    pub fn reconstruct(&self) -> Matrix<T> {
        self.map_spectrum(|_, lam| lam)
    }

    /// Projector onto the span of the eigenvectors with the given indices.
    pub fn projector_onto(&self, indices: impl IntoIterator<Item = usize>) -> Matrix<T> {
        let mut keep = vec![false; self.source_dim];
        for j in indices {
            keep[j] = true;
        }
        self.map_spectrum(|j, _| if keep[j] { T::one() } else { T::zero() })
    }
}

/// First index whose modulus is (within rounding) the largest in `v`.
fn pivot_index<T: Real>(v: &[Complex<T>]) -> usize {
    let max = v.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let rel = lit::<T>(1e-10).max(T::epsilon() * lit(100.0));
    let floor = max * (T::one() - rel);
    v.iter().position(|z| z.norm() >= floor).unwrap_or(0)
}

/// Diagonalizes a Hermitian matrix.
///
/// Eigenvalues are sorted non-increasing. Eigenvalues that agree to
/// `1e-12 * max(1, |lambda|_max)` are treated as tied and ordered by the smallest basis
/// index of each eigenvector's largest component. Every eigenvector is rotated so that
/// this largest component is real and positive.
pub fn eig_hermitian<T: Real>(a: &Matrix<T>, tol: T) -> Result<EigenDecomposition<T>> {
    let residual = a.hermiticity_residual();
    if residual.is_nan() || residual > tol {
        return Err(Error::NotHermitian {
            residual: to_f64(residual),
        });
    }
    let n = a.dim();
    let mut w = a.hermitian_part();
    let mut v = Matrix::identity(n)?;

    let scale = w.frobenius_norm().max(T::one());
    let threshold = lit::<T>(1e-13).max(T::epsilon() * lit(64.0)) * scale;
    let negligible = T::epsilon() * lit(1e-3) * scale;
    let two = lit::<T>(2.0);

    let mut sweeps = 0;
    loop {
        let off = w.off_diagonal_norm();
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: to_f64(off),
            });
        }
        sweeps += 1;

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[(p, q)];
                let mag = apq.norm();
                if mag <= negligible {
                    w[(p, q)] = Complex::zero();
                    w[(q, p)] = Complex::zero();
                    continue;
                }
                // Strip the phase of a_pq, then rotate in the real (p, q) plane.
                let ph = apq / mag;
                let phc = ph.conj();
                let app = w[(p, p)].re;
                let aqq = w[(q, q)].re;
                let theta = (aqq - app) / (two * mag);
                let t = if theta >= T::zero() {
                    T::one() / (theta + theta.hypot(T::one()))
                } else {
                    -T::one() / (-theta + theta.hypot(T::one()))
                };
                let c = T::one() / t.hypot(T::one());
                let s = t * c;

                for k in 0..n {
                    let akp = w[(k, p)];
                    let akq = w[(k, q)];
                    w[(k, p)] = akp * c - akq * phc * s;
                    w[(k, q)] = akp * s + akq * phc * c;
                }
                for j in 0..n {
                    let bpj = w[(p, j)];
                    let bqj = w[(q, j)];
                    w[(p, j)] = bpj * c - bqj * ph * s;
                    w[(q, j)] = bpj * s + bqj * ph * c;
                }
                w[(p, q)] = Complex::zero();
                w[(q, p)] = Complex::zero();
                w[(p, p)] = Complex::new(app - t * mag, T::zero());
                w[(q, q)] = Complex::new(aqq + t * mag, T::zero());

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * phc * s;
                    v[(k, q)] = vkp * s + vkq * phc * c;
                }
            }
        }
    }

    let raw: Vec<T> = (0..n).map(|k| w[(k, k)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).expect("finite eigenvalues"));

    let lam_scale = raw.iter().fold(T::one(), |m, x| m.max(x.abs()));
    let tie = lit::<T>(1e-12) * lam_scale;
    let pivots: Vec<usize> = (0..n).map(|j| pivot_index(&v.column(j))).collect();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && raw[order[start]] - raw[order[end]] <= tie {
            end += 1;
        }
        order[start..end].sort_by_key(|&j| pivots[j]);
        start = end;
    }

    let mut vectors = Matrix::zeros(n)?;
    for (dst, &src) in order.iter().enumerate() {
        let pz = v[(pivots[src], src)];
        let fix = pz.conj() / pz.norm();
        for k in 0..n {
            vectors[(k, dst)] = v[(k, src)] * fix;
        }
        vectors[(pivots[src], dst)] = Complex::new(vectors[(pivots[src], dst)].norm(), T::zero());
    }

    Ok(EigenDecomposition {
        eigenvalues: order.iter().map(|&j| raw[j]).collect(),
        eigenvectors: vectors,
        source_dim: n,
    })
}

fn hermitian_tol_for<T: Real>(a: &Matrix<T>) -> T {
    lit::<T>(DEFAULT_HERMITIAN_TOL).max(T::epsilon() * lit(1e3)) * a.max_abs().max(T::one())
}

/// Inverse square root of a PSD matrix on its support (zero on the kernel).
///
/// Eigenvalues below `rank_tol * lambda_max` count as zero.
pub fn inv_sqrt_psd<T: Real>(a: &Matrix<T>, rank_tol: T) -> Result<Matrix<T>> {
    let eig = eig_hermitian(a, hermitian_tol_for(a))?;
    let lam_max = eig.max_eigenvalue().max(T::zero());
    let cutoff = rank_tol * lam_max;
    let lam_min = eig.min_eigenvalue();
    if lam_min < -cutoff {
        return Err(Error::NegativeEigenvalue {
            value: to_f64(lam_min),
        });
    }
    Ok(eig.map_spectrum(|_, lam| {
        if lam > cutoff && lam > T::zero() {
            T::one() / lam.sqrt()
        } else {
            T::zero()
        }
    }))
}

/// Projector onto the support of a PSD matrix, using the same cutoff as [`inv_sqrt_psd`].
pub fn support_projector<T: Real>(a: &Matrix<T>, rank_tol: T) -> Result<Matrix<T>> {
    let eig = eig_hermitian(a, hermitian_tol_for(a))?;
    let cutoff = rank_tol * eig.max_eigenvalue().max(T::zero());
    Ok(eig.map_spectrum(|_, lam| {
        if lam > cutoff && lam > T::zero() {
            T::one()
        } else {
            T::zero()
        }
    }))
}

/// Positive-semidefiniteness test. Returns whether the smallest eigenvalue is at
/// least `-tol`, together with that eigenvalue.
pub fn is_psd<T: Real>(a: &Matrix<T>, tol: T) -> Result<(bool, T)> {
    let eig = eig_hermitian(a, tol)?;
    let min = eig.min_eigenvalue();
    Ok((min >= -tol, min))
}
