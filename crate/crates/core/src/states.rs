//! Two-qubit state families and density-matrix validation.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{self, hermitian_eigen, partial_trace, pauli, tensor_product, ComplexMatrix, Subsystem};
use crate::scalar::Real;

/// Hermitian, unit-trace, positive semidefinite matrix of dimension 2 or 4.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Checks Hermiticity, then trace, then positivity.
    pub fn validate(matrix: ComplexMatrix<T>) -> Result<Self> {
        let deviation = matrix.hermitian_deviation();
        if !(deviation <= T::hermitian_tol()) {
            return Err(Error::NotHermitian {
                deviation: deviation.as_f64(),
            });
        }
        let trace = matrix.trace().re;
        if !((trace - T::one()).abs() <= T::trace_tol()) {
            return Err(Error::Trace { trace: trace.as_f64() });
        }
        let eig = hermitian_eigen(&matrix)?;
        let lowest = eig.eigenvalues[0];
        if lowest < -T::psd_tol() {
            return Err(Error::NotPsd {
                eigenvalue: lowest.as_f64(),
            });
        }
        Ok(Self { matrix })
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// Clamped eigenvalues, ascending.
    pub fn spectrum(&self) -> Vec<T> {
        matcore::psd_spectrum(&self.matrix)
            .map(|e| e.eigenvalues)
            .expect("validated state has a PSD spectrum")
    }

    /// Reduced state of one qubit of a two-qubit state.
    pub fn reduced(&self, keep: Subsystem) -> Result<Self> {
        Ok(Self {
            matrix: partial_trace(&self.matrix, keep)?,
        })
    }

    pub fn tensor(a: &Self, b: &Self) -> Result<Self> {
        Ok(Self {
            matrix: tensor_product(&a.matrix, &b.matrix)?,
        })
    }

    pub(crate) fn require_two_qubit(&self) -> Result<()> {
        if self.dim() == 4 {
            Ok(())
        } else {
            Err(Error::InvalidDimension {
                expected: "4",
                found: self.dim(),
            })
        }
    }

    pub(crate) fn from_trusted(matrix: ComplexMatrix<T>) -> Self {
        Self { matrix }
    }
}

/// Wraps `rho` as a state iff it is Hermitian, unit-trace and PSD.
pub fn validate<T: Real>(rho: ComplexMatrix<T>) -> Result<DensityMatrix<T>> {
    DensityMatrix::validate(rho)
}

fn check_unit_interval<T: Real>(name: &'static str, value: T) -> Result<()> {
    if value >= T::zero() && value <= T::one() {
        Ok(())
    } else {
        Err(Error::ParameterRange {
            name,
            value: value.as_f64(),
            min: 0.0,
            max: 1.0,
        })
    }
}

/// `√λ0 |00⟩ + √(1−λ0) |11⟩`.
pub fn make_pure_schmidt<T: Real>(lambda0: T) -> Result<DensityMatrix<T>> {
    check_unit_interval("lambda0", lambda0)?;
    let zero = Complex::new(T::zero(), T::zero());
    let psi = [
        Complex::new(lambda0.sqrt(), T::zero()),
        zero,
        zero,
        Complex::new((T::one() - lambda0).sqrt(), T::zero()),
    ];
    DensityMatrix::validate(ComplexMatrix::outer(&psi)?)
}

/// Mixture `z |ψ⁻⟩⟨ψ⁻| + (1−z) I/4` of the singlet and the maximally mixed state.
pub fn make_werner<T: Real>(z: T) -> Result<DensityMatrix<T>> {
    check_unit_interval("z", z)?;
    let zero = Complex::new(T::zero(), T::zero());
    let h = T::FRAC_1_SQRT_2();
    let singlet = ComplexMatrix::outer(&[zero, Complex::new(h, T::zero()), Complex::new(-h, T::zero()), zero])?;
    let mixed = ComplexMatrix::identity(4)?.scale((T::one() - z) / T::lit(4.0));
    DensityMatrix::validate(&singlet.scale(z) + &mixed)
}

/// `[I + a·σ ⊗ I + I ⊗ b·σ + Σ c_i σ_i ⊗ σ_i] / 4`.
///
/// Rejects parameters that do not give a positive semidefinite matrix.
pub fn make_general<T: Real>(a: [T; 3], b: [T; 3], c: [T; 3]) -> Result<DensityMatrix<T>> {
    if a.iter().chain(&b).chain(&c).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite state parameter".into()));
    }
    let id = pauli::<T>(0);
    let mut m = ComplexMatrix::identity(4)?;
    for i in 0..3 {
        let s = pauli::<T>(i + 1);
        let terms = [
            (a[i], tensor_product(&s, &id)?),
            (b[i], tensor_product(&id, &s)?),
            (c[i], tensor_product(&s, &s)?),
        ];
        for (coef, op) in terms {
            m = &m + &op.scale(coef);
        }
    }
    DensityMatrix::validate(m.scale(T::lit(0.25))).map_err(|e| Error::UnphysicalState(Box::new(e)))
}

/// `(tr ρσ_x, tr ρσ_y, tr ρσ_z)` of a single-qubit state.
pub fn bloch_vector<T: Real>(rho: &DensityMatrix<T>) -> Result<[T; 3]> {
    if rho.dim() != 2 {
        return Err(Error::InvalidDimension {
            expected: "2",
            found: rho.dim(),
        });
    }
    Ok([1, 2, 3].map(|i| rho.matrix().trace_product(&pauli(i)).re))
}

/// The three parameterised two-qubit families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum StateFamily<T> {
    PureSchmidt { lambda0: T },
    Werner { z: T },
    General { a: [T; 3], b: [T; 3], c: [T; 3] },
}

impl<T: Real> StateFamily<T> {
    pub fn build(&self) -> Result<DensityMatrix<T>> {
        match *self {
            StateFamily::PureSchmidt { lambda0 } => make_pure_schmidt(lambda0),
            StateFamily::Werner { z } => make_werner(z),
            StateFamily::General { a, b, c } => make_general(a, b, c),
        }
    }
}

impl<T: Real> fmt::Display for StateFamily<T> {
    /// Same grammar the command line accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let triple = |v: &[T; 3]| format!("{},{},{}", v[0], v[1], v[2]);
        match self {
            StateFamily::PureSchmidt { lambda0 } => write!(f, "pure:lambda0={lambda0}"),
            StateFamily::Werner { z } => write!(f, "werner:z={z}"),
            StateFamily::General { a, b, c } => {
                write!(f, "general:a={};b={};c={}", triple(a), triple(b), triple(c))
            }
        }
    }
}
