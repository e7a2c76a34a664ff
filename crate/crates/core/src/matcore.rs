//! Dense complex kernel for 2×2 and 4×4 Hermitian matrices.
//!
//! Two-qubit matrices use the basis order `|00⟩, |01⟩, |10⟩, |11⟩` with
//! subsystem A as the slow index, so `A ⊗ B` places `A[i][j] * B[k][l]`
//! at row `2i + k`, column `2j + l`.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 64;

/// Row-major dense complex matrix of dimension 2 or 4.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(Error::InvalidDimension {
            expected: "2 or 4",
            found: dim,
        })
    }
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self::zeros_unchecked(dim))
    }

    pub(crate) fn zeros_unchecked(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        Ok(m)
    }

    /// Builds a matrix from `dim²` row-major entries.
    pub fn from_rows(dim: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::InvalidDimension {
                expected: "dim² entries",
                found: entries.len(),
            });
        }
        Ok(Self { dim, data: entries })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, entries: &[T]) -> Result<Self> {
        Self::from_rows(dim, entries.iter().map(|&v| Complex::new(v, T::zero())).collect())
    }

    pub fn diag(values: &[T]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex::new(v, T::zero());
        }
        Ok(m)
    }

    /// Rank-one outer product `|v⟩⟨v|`.
    pub fn outer(v: &[Complex<T>]) -> Result<Self> {
        let mut m = Self::zeros(v.len())?;
        for i in 0..v.len() {
            for j in 0..v.len() {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros_unchecked(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Max-abs entry of `m - m†`.
    pub fn hermitian_deviation(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(m + m†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let half = T::lit(0.5);
        let mut out = Self::zeros_unchecked(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * half;
            }
        }
        out
    }

    /// `tr(self · other)`, computed without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            for k in 0..n {
                acc = acc + self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }
}

impl<T> std::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros_unchecked(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = &self.data[i * self.dim + j];
                    format!("{:+.6?}{:+.6?}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// The two halves of a two-qubit system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

/// Pauli matrix `σ_i` for `i ∈ {0, 1, 2, 3}` with `σ_0 = I`.
pub fn pauli<T: Real>(i: usize) -> ComplexMatrix<T> {
    let z = T::zero();
    let o = T::one();
    let c = Complex::new;
    let data = match i {
        0 => vec![c(o, z), c(z, z), c(z, z), c(o, z)],
        1 => vec![c(z, z), c(o, z), c(o, z), c(z, z)],
        2 => vec![c(z, z), c(z, -o), c(z, o), c(z, z)],
        3 => vec![c(o, z), c(z, z), c(z, z), c(-o, z)],
        _ => panic!("pauli index {i} out of range"),
    };
    ComplexMatrix { dim: 2, data }
}

/// Kronecker product `a ⊗ b` of two 2×2 matrices.
pub fn tensor_product<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    for m in [a, b] {
        if m.dim != 2 {
            return Err(Error::InvalidDimension {
                expected: "2",
                found: m.dim,
            });
        }
    }
    let mut out = ComplexMatrix::zeros_unchecked(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Traces out one qubit of a 4×4 matrix, keeping `keep`.
pub fn partial_trace<T: Real>(rho: &ComplexMatrix<T>, keep: Subsystem) -> Result<ComplexMatrix<T>> {
    if rho.dim != 4 {
        return Err(Error::InvalidDimension {
            expected: "4",
            found: rho.dim,
        });
    }
    let mut out = ComplexMatrix::zeros_unchecked(2);
    for r in 0..2 {
        for c in 0..2 {
            out[(r, c)] = match keep {
                Subsystem::A => rho[(2 * r, 2 * c)] + rho[(2 * r + 1, 2 * c + 1)],
                Subsystem::B => rho[(r, c)] + rho[(2 + r, 2 + c)],
            };
        }
    }
    Ok(out)
}

/// Spectral decomposition `m = V diag(λ) V†` of a Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianEigen<T> {
    /// Ascending.
    pub eigenvalues: Vec<T>,
    /// Unitary; column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V diag(f(λ)) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let v = &self.eigenvectors;
        let n = v.dim;
        let mapped: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros_unchecked(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (k, &l) in mapped.iter().enumerate() {
                    acc = acc + v[(i, k)] * v[(j, k)].conj() * l;
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.reconstruct_with(|l| l)
    }
}

/// Cyclic complex Jacobi eigendecomposition.
///
/// Fixed sweep order and no pivoting randomness: identical inputs give
/// bit-identical outputs.
pub fn hermitian_eigen<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    let deviation = m.hermitian_deviation();
    if !(deviation <= T::hermitian_tol()) {
        return Err(Error::NotHermitian {
            deviation: deviation.as_f64(),
        });
    }
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n)?;
    let zero = T::zero();
    let one = T::one();
    let two = T::lit(2.0);

    let frob: T = a.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let floor = T::epsilon() * frob.max(T::min_positive_value());

    for _ in 0..MAX_SWEEPS {
        let mut off = zero;
        for p in 0..n {
            for q in p + 1..n {
                off = off + a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= floor {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == zero {
                    continue;
                }
                let phase = apq / mag;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (two * mag);
                let t = if theta == zero {
                    one
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + one).sqrt())
                };
                let c = one / (t * t + one).sqrt();
                let s = t * c;
                let ph_conj = phase.conj();

                // A <- A G, with G = diag-phase · real rotation on (p, q).
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)] * ph_conj;
                    a[(k, p)] = akp * c - akq * s;
                    a[(k, q)] = akp * s + akq * c;
                }
                // A <- G† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)] * phase;
                    a[(p, k)] = apk * c - aqk * s;
                    a[(q, k)] = apk * s + aqk * c;
                }
                a[(p, q)] = Complex::new(zero, zero);
                a[(q, p)] = Complex::new(zero, zero);
                a[(p, p)].im = zero;
                a[(q, q)].im = zero;
                // V <- V G
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)] * ph_conj;
                    v[(k, p)] = vkp * c - vkq * s;
                    v[(k, q)] = vkp * s + vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros_unchecked(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[(row, col)] = v[(row, src)];
        }
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Scalar functions applicable to PSD matrices through their spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFunction {
    Sqrt,
    /// Eigenvalues at or below the clamp threshold map to 0 (the `0·log 0 = 0`
    /// convention of entropies).
    Log2,
}

/// Eigenvalues of a PSD matrix with roundoff negatives and values under the
/// clamp threshold set to zero.
pub fn psd_spectrum<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    let mut eig = hermitian_eigen(m)?;
    if let Some(&lowest) = eig.eigenvalues.first() {
        if lowest < -T::psd_tol() {
            return Err(Error::NotPsd {
                eigenvalue: lowest.as_f64(),
            });
        }
    }
    for l in &mut eig.eigenvalues {
        if *l <= T::clamp_threshold() {
            *l = T::zero();
        }
    }
    Ok(eig)
}

/// Applies `f` to a Hermitian PSD matrix through its clamped spectrum.
pub fn psd_matrix_function<T: Real>(m: &ComplexMatrix<T>, f: MatrixFunction) -> Result<ComplexMatrix<T>> {
    let eig = psd_spectrum(m)?;
    Ok(match f {
        MatrixFunction::Sqrt => eig.reconstruct_with(|l| l.sqrt()),
        MatrixFunction::Log2 => eig.reconstruct_with(|l| if l > T::zero() { l.log2() } else { T::zero() }),
    })
}
