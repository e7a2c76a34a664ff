//! Measurements on qubit B: projective bases, the two-outcome weak POVM,
//! conditional states of A, and the non-selective post-measurement channel.
//!
//! The weak elements are
//!
//! ```text
//! P_{+x} = √((1 − tanh x)/2) Π0 + √((1 + tanh x)/2) Π1
//! P_{−x} = √((1 + tanh x)/2) Π0 + √((1 − tanh x)/2) Π1
//! ```
//!
//! so `P_{+x}² + P_{−x}² = I` and `x → ∞` recovers the projectors
//! (`P_{+x} → Π1`, `P_{−x} → Π0`). Under `x → −x` the two elements swap,
//! which leaves the outcome set and the non-selective channel unchanged.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matcore::{partial_trace, ComplexMatrix, Subsystem};
use crate::scalar::Real;
use crate::states::DensityMatrix;

/// Orthogonal projectors `Π0 = |ψ(θ,φ)⟩⟨ψ(θ,φ)|`, `Π1 = I − Π0` with
/// `|ψ⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementBasis<T> {
    theta: T,
    phi: T,
}

impl<T: Real> MeasurementBasis<T> {
    /// Wraps the angles into `θ ∈ [0, π]`, `φ ∈ [0, 2π)` without changing
    /// the Bloch direction.
    pub fn new(theta: T, phi: T) -> Self {
        let two_pi = T::TAU();
        let pi = T::PI();
        let mut theta = theta % two_pi;
        if theta < T::zero() {
            theta = theta + two_pi;
        }
        let mut phi = phi;
        if theta > pi {
            theta = two_pi - theta;
            phi = phi + pi;
        }
        let mut phi = phi % two_pi;
        if phi < T::zero() {
            phi = phi + two_pi;
        }
        if phi >= two_pi {
            phi = phi - two_pi;
        }
        Self { theta, phi }
    }

    /// The computational basis, `Π0 = |0⟩⟨0|`.
    pub fn computational() -> Self {
        Self::new(T::zero(), T::zero())
    }

    #[inline]
    pub fn theta(&self) -> T {
        self.theta
    }

    #[inline]
    pub fn phi(&self) -> T {
        self.phi
    }

    /// Unit Bloch vector of `Π0`.
    pub fn direction(&self) -> [T; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// `(Π0, Π1)`.
    pub fn projectors(&self) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
        let half = self.theta / T::lit(2.0);
        let (s, c) = half.sin_cos();
        let psi = [Complex::new(c, T::zero()), Complex::from_polar(s, self.phi)];
        let p0 = ComplexMatrix::outer(&psi).expect("2-vector");
        let p1 = &ComplexMatrix::identity(2).expect("dim 2") - &p0;
        (p0, p1)
    }
}

/// Outcome label of the two-element POVM; `Plus` goes with `P_{+x}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];
}

/// Weak measurement of strength `x` in a given basis.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakPovm<T> {
    x: T,
    basis: MeasurementBasis<T>,
    plus: ComplexMatrix<T>,
    minus: ComplexMatrix<T>,
}

/// `(√((1 − tanh x)/2), √((1 + tanh x)/2))` without cancellation at large `|x|`.
pub(crate) fn weak_amplitudes<T: Real>(x: T) -> (T, T) {
    let two_x = x + x;
    let low = (T::one() / (T::one() + two_x.exp())).sqrt();
    let high = (T::one() / (T::one() + (-two_x).exp())).sqrt();
    (low, high)
}

impl<T: Real> WeakPovm<T> {
    pub fn new(x: T, basis: MeasurementBasis<T>) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "measurement strength must be finite, got {x}"
            )));
        }
        let (p0, p1) = basis.projectors();
        let (low, high) = weak_amplitudes(x);
        let plus = &p0.scale(low) + &p1.scale(high);
        let minus = &p0.scale(high) + &p1.scale(low);
        Ok(Self { x, basis, plus, minus })
    }

    #[inline]
    pub fn strength(&self) -> T {
        self.x
    }

    #[inline]
    pub fn basis(&self) -> &MeasurementBasis<T> {
        &self.basis
    }

    pub fn element(&self, outcome: Outcome) -> &ComplexMatrix<T> {
        match outcome {
            Outcome::Plus => &self.plus,
            Outcome::Minus => &self.minus,
        }
    }
}

/// Convenience constructor matching the operation name used in the docs.
pub fn weak_elements<T: Real>(x: T, basis: MeasurementBasis<T>) -> Result<WeakPovm<T>> {
    WeakPovm::new(x, basis)
}

/// `(I ⊗ K) ρ (I ⊗ K)†` for a 2×2 operator `K` acting on B.
pub(crate) fn sandwich_b<T: Real>(rho: &ComplexMatrix<T>, k: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    // (I⊗K)ρ: row (i,a) = Σ_b K[a][b] ρ[(i,b), ·]
    let mut left = ComplexMatrix::zeros_unchecked(4);
    for i in 0..2 {
        for a in 0..2 {
            for col in 0..4 {
                left[(2 * i + a, col)] = k[(a, 0)] * rho[(2 * i, col)] + k[(a, 1)] * rho[(2 * i + 1, col)];
            }
        }
    }
    // ·(I⊗K)†: col (j,c) = Σ_d ·[·, (j,d)] conj(K[c][d])
    let mut out = ComplexMatrix::zeros_unchecked(4);
    for row in 0..4 {
        for j in 0..2 {
            for c in 0..2 {
                out[(row, 2 * j + c)] =
                    left[(row, 2 * j)] * k[(c, 0)].conj() + left[(row, 2 * j + 1)] * k[(c, 1)].conj();
            }
        }
    }
    out
}

/// Unnormalised result of one Kraus branch acting on B.
pub(crate) struct Branch<T> {
    pub probability: T,
    /// `Tr_B[(I⊗K)ρ(I⊗K)†]`, trace equal to `probability`.
    pub reduced_a: ComplexMatrix<T>,
}

pub(crate) fn branch<T: Real>(rho: &ComplexMatrix<T>, kraus_b: &ComplexMatrix<T>) -> Branch<T> {
    let s = sandwich_b(rho, kraus_b);
    let reduced_a = partial_trace(&s, Subsystem::A).expect("4x4");
    Branch {
        probability: reduced_a.trace().re,
        reduced_a,
    }
}

fn normalise<T: Real>(b: Branch<T>) -> Result<DensityMatrix<T>> {
    if !(b.probability >= T::probability_floor()) {
        return Err(Error::DegenerateOutcome {
            probability: b.probability.as_f64(),
        });
    }
    DensityMatrix::validate(b.reduced_a.scale(T::one() / b.probability).hermitian_part())
}

/// `p_w(±x) = Tr[(I⊗P_{±x}) ρ (I⊗P_{±x})]`.
pub fn outcome_probability<T: Real>(rho: &DensityMatrix<T>, povm: &WeakPovm<T>, outcome: Outcome) -> Result<T> {
    rho.require_two_qubit()?;
    Ok(branch(rho.matrix(), povm.element(outcome)).probability)
}

/// Normalised state of A after obtaining `outcome` on B.
pub fn conditional_state<T: Real>(
    rho: &DensityMatrix<T>,
    povm: &WeakPovm<T>,
    outcome: Outcome,
) -> Result<DensityMatrix<T>> {
    rho.require_two_qubit()?;
    normalise(branch(rho.matrix(), povm.element(outcome)))
}

/// Normalised state of A after projecting B onto `Π_j` (`j = 0` or `1`).
pub fn projective_conditional_state<T: Real>(
    rho: &DensityMatrix<T>,
    basis: &MeasurementBasis<T>,
    j: usize,
) -> Result<DensityMatrix<T>> {
    rho.require_two_qubit()?;
    let (p0, p1) = basis.projectors();
    let proj = match j {
        0 => p0,
        1 => p1,
        _ => return Err(Error::InvalidArgument(format!("projector index {j} not in {{0, 1}}"))),
    };
    normalise(branch(rho.matrix(), &proj))
}

/// Non-selective update `Σ_± (I⊗P_{±x}) ρ (I⊗P_{±x})`; trace preserving.
pub fn post_measurement_state<T: Real>(rho: &DensityMatrix<T>, povm: &WeakPovm<T>) -> Result<DensityMatrix<T>> {
    rho.require_two_qubit()?;
    let sum = &sandwich_b(rho.matrix(), &povm.plus) + &sandwich_b(rho.matrix(), &povm.minus);
    Ok(DensityMatrix::from_trusted(sum.hermitian_part()))
}

/// Post-measurement operator with each branch additionally weighted by its
/// outcome probability, `Σ_± p_w(±x) (I⊗P_{±x}) ρ (I⊗P_{±x})`.
///
/// Not trace preserving (trace `p₊² + p₋²`, `1/2` at `x = 0`); kept for
/// comparison with the trace-preserving update.
#[derive(Clone, Debug, PartialEq)]
pub struct LiteralPostMeasurement<T> {
    pub matrix: ComplexMatrix<T>,
    pub trace: T,
}

pub fn literal_post_measurement<T: Real>(
    rho: &DensityMatrix<T>,
    povm: &WeakPovm<T>,
) -> Result<LiteralPostMeasurement<T>> {
    rho.require_two_qubit()?;
    let mut matrix = ComplexMatrix::zeros(4)?;
    for outcome in Outcome::BOTH {
        let s = sandwich_b(rho.matrix(), povm.element(outcome));
        let p = s.trace().re;
        matrix = &matrix + &s.scale(p);
    }
    let matrix = matrix.hermitian_part();
    let trace = matrix.trace().re;
    Ok(LiteralPostMeasurement { matrix, trace })
}
