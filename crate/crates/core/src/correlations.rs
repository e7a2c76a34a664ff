//! Entropic correlation measures for two-qubit states, all in bits.
//!
//! Measurements are always made on qubit B. Discord and weak discord
//! maximise the classical correlation over projective bases `(θ, φ)` only;
//! the weak-measurement strength is a fixed input, never optimised here.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eigen, ComplexMatrix, Subsystem};
use crate::measure::{branch, MeasurementBasis, Outcome, WeakPovm};
use crate::optimize::NelderMead;
use crate::scalar::Real;
use crate::states::DensityMatrix;

/// `−Σ p log2 p`, with `p` at or below the clamp threshold contributing 0.
pub fn shannon_bits<T: Real>(probabilities: impl IntoIterator<Item = T>) -> T {
    probabilities
        .into_iter()
        .filter(|&p| p > T::clamp_threshold())
        .fold(T::zero(), |acc, p| acc - p * p.log2())
}

/// Von Neumann entropy `−tr ρ log2 ρ`.
pub fn vn_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    shannon_bits(rho.spectrum())
}

/// `I(A:B) = S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    rho.require_two_qubit()?;
    let sa = vn_entropy(&rho.reduced(Subsystem::A)?);
    let sb = vn_entropy(&rho.reduced(Subsystem::B)?);
    Ok(sa + sb - vn_entropy(rho))
}

/// `p · S(ρ_{A|K})` for one Kraus operator on B; vanishing outcomes give 0.
fn weighted_branch_entropy<T: Real>(rho: &ComplexMatrix<T>, kraus_b: &ComplexMatrix<T>) -> T {
    let b = branch(rho, kraus_b);
    let p = b.probability;
    if !(p >= T::probability_floor()) {
        return T::zero();
    }
    let eig = hermitian_eigen(&b.reduced_a.hermitian_part()).expect("Hermitian by construction");
    p * shannon_bits(eig.eigenvalues.into_iter().map(|mu| mu / p))
}

/// `S(A|B) = Σ_j p_j S(ρ_{A|Π_j})` for a projective measurement on B.
pub fn strong_conditional_entropy<T: Real>(rho: &DensityMatrix<T>, basis: &MeasurementBasis<T>) -> Result<T> {
    rho.require_two_qubit()?;
    let (p0, p1) = basis.projectors();
    Ok(weighted_branch_entropy(rho.matrix(), &p0) + weighted_branch_entropy(rho.matrix(), &p1))
}

/// `S_w(A|B) = p_w(x) S(ρ_{A|P_x}) + p_w(−x) S(ρ_{A|P_{−x}})`.
pub fn weak_conditional_entropy<T: Real>(rho: &DensityMatrix<T>, povm: &WeakPovm<T>) -> Result<T> {
    rho.require_two_qubit()?;
    Ok(Outcome::BOTH
        .iter()
        .map(|&o| weighted_branch_entropy(rho.matrix(), povm.element(o)))
        .fold(T::zero(), |a, b| a + b))
}

/// `J(A:B) = S(ρ_A) − S(A|B)` for a projective measurement in `basis`.
pub fn classical_j<T: Real>(rho: &DensityMatrix<T>, basis: &MeasurementBasis<T>) -> Result<T> {
    Ok(vn_entropy(&rho.reduced(Subsystem::A)?) - strong_conditional_entropy(rho, basis)?)
}

/// `J_w(A:B) = S(ρ_A) − S_w(A|B)`.
pub fn weak_classical_j<T: Real>(rho: &DensityMatrix<T>, povm: &WeakPovm<T>) -> Result<T> {
    Ok(vn_entropy(&rho.reduced(Subsystem::A)?) - weak_conditional_entropy(rho, povm)?)
}

/// Maximiser of a classical-correlation objective over projective bases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BasisOptimum<T> {
    pub basis: MeasurementBasis<T>,
    pub value: T,
    pub evaluations: usize,
}

/// Grid-then-simplex maximisation over `(θ, φ)`.
///
/// The objective is evaluated on a `theta_points × phi_points` grid
/// (`θ ∈ [0, π]` inclusive, `φ ∈ [0, 2π)`), and the best `starts` grid
/// points are refined with Nelder–Mead. Values within `tie_tolerance`
/// resolve to the smallest `θ`, then the smallest `φ`.
#[derive(Clone, Debug)]
pub struct BasisSearch<T> {
    pub theta_points: usize,
    pub phi_points: usize,
    pub starts: usize,
    pub simplex: NelderMead<T>,
    /// Objective values closer than this count as equal.
    pub tie_tolerance: T,
}

impl<T: Real> Default for BasisSearch<T> {
    fn default() -> Self {
        Self {
            theta_points: 37,
            phi_points: 19,
            starts: 3,
            simplex: NelderMead::default(),
            tie_tolerance: T::lit(1e-12).max(T::epsilon() * T::lit(16.0)),
        }
    }
}

fn canonical_order<T: Real>(a: &MeasurementBasis<T>, b: &MeasurementBasis<T>) -> Ordering {
    a.theta()
        .partial_cmp(&b.theta())
        .unwrap_or(Ordering::Equal)
        .then(a.phi().partial_cmp(&b.phi()).unwrap_or(Ordering::Equal))
}

impl<T: Real> BasisSearch<T> {
    pub fn maximize<F>(&self, objective: F) -> Result<BasisOptimum<T>>
    where
        F: Fn(&MeasurementBasis<T>) -> T,
    {
        if self.theta_points < 2 || self.phi_points < 1 || self.starts == 0 {
            return Err(Error::InvalidArgument("basis search grid too small".into()));
        }
        let d_theta = T::PI() / T::from_usize(self.theta_points - 1).expect("grid size");
        let d_phi = T::TAU() / T::from_usize(self.phi_points).expect("grid size");

        let mut grid = Vec::with_capacity(self.theta_points * self.phi_points);
        for i in 0..self.theta_points {
            for j in 0..self.phi_points {
                let theta = d_theta * T::from_usize(i).expect("index");
                let phi = d_phi * T::from_usize(j).expect("index");
                let basis = MeasurementBasis::new(theta, phi);
                grid.push((theta, phi, objective(&basis)));
            }
        }
        let mut evaluations = grid.len();
        let tie = self.tie_tolerance;
        let top = grid.iter().map(|g| g.2).fold(T::neg_infinity(), T::max);
        // near-ties with the maximum first, in θ-major grid order; then by value
        grid.sort_by(|a, b| {
            let a_top = a.2 >= top - tie;
            let b_top = b.2 >= top - tie;
            match (a_top, b_top) {
                (true, true) => Ordering::Equal,
                (true, false) => Ordering::Less,
                (false, true) => Ordering::Greater,
                (false, false) => b.2.partial_cmp(&a.2).unwrap_or(Ordering::Equal),
            }
        });

        let steps = [d_theta / T::lit(2.0), d_phi / T::lit(2.0)];
        let mut best: Option<(BasisOptimum<T>, bool)> = None;
        for &(theta, phi, start_value) in grid.iter().take(self.starts) {
            let run = self.simplex.minimize(
                |p: &[T]| -objective(&MeasurementBasis::new(p[0], p[1])),
                &[theta, phi],
                &steps,
            );
            evaluations += run.evaluations;
            // refinement must beat its start by more than the tie tolerance
            let candidate = if -run.value > start_value + tie {
                BasisOptimum {
                    basis: MeasurementBasis::new(run.x[0], run.x[1]),
                    value: -run.value,
                    evaluations: 0,
                }
            } else {
                BasisOptimum {
                    basis: MeasurementBasis::new(theta, phi),
                    value: start_value,
                    evaluations: 0,
                }
            };
            let better = match &best {
                None => true,
                Some((cur, _)) => {
                    candidate.value > cur.value + tie
                        || ((candidate.value - cur.value).abs() <= tie
                            && canonical_order(&candidate.basis, &cur.basis) == Ordering::Less)
                }
            };
            if better {
                best = Some((candidate, run.converged));
            }
        }
        let (mut optimum, converged) = best.expect("at least one start");
        if !converged {
            return Err(Error::NoConvergence {
                best: optimum.value.as_f64(),
                evaluations,
            });
        }
        optimum.evaluations = evaluations;
        Ok(optimum)
    }
}

/// `max_Π J(A:B)` over projective bases on B.
pub fn max_classical_j<T: Real>(rho: &DensityMatrix<T>, search: &BasisSearch<T>) -> Result<BasisOptimum<T>> {
    rho.require_two_qubit()?;
    let sa = vn_entropy(&rho.reduced(Subsystem::A)?);
    let m = rho.matrix();
    search.maximize(|basis| {
        let (p0, p1) = basis.projectors();
        sa - weighted_branch_entropy(m, &p0) - weighted_branch_entropy(m, &p1)
    })
}

/// `max_Π J_w(A:B)` at fixed strength `x`.
pub fn max_weak_classical_j<T: Real>(rho: &DensityMatrix<T>, x: T, search: &BasisSearch<T>) -> Result<BasisOptimum<T>> {
    rho.require_two_qubit()?;
    // validates x once; the objective below cannot fail
    WeakPovm::new(x, MeasurementBasis::computational())?;
    let sa = vn_entropy(&rho.reduced(Subsystem::A)?);
    let m = rho.matrix();
    search.maximize(|basis| {
        let povm = WeakPovm::new(x, *basis).expect("finite strength");
        sa - weighted_branch_entropy(m, povm.element(Outcome::Plus))
            - weighted_branch_entropy(m, povm.element(Outcome::Minus))
    })
}

/// Quantum discord `D = I − max J` and the maximising basis.
pub fn discord<T: Real>(rho: &DensityMatrix<T>) -> Result<(T, BasisOptimum<T>)> {
    discord_with(rho, &BasisSearch::default())
}

pub fn discord_with<T: Real>(rho: &DensityMatrix<T>, search: &BasisSearch<T>) -> Result<(T, BasisOptimum<T>)> {
    let opt = max_classical_j(rho, search)?;
    Ok((mutual_information(rho)? - opt.value, opt))
}

/// Weak discord `D_w = I − max J_w` at strength `x`, and the maximising basis.
pub fn weak_discord<T: Real>(rho: &DensityMatrix<T>, x: T) -> Result<(T, BasisOptimum<T>)> {
    weak_discord_with(rho, x, &BasisSearch::default())
}

pub fn weak_discord_with<T: Real>(
    rho: &DensityMatrix<T>,
    x: T,
    search: &BasisSearch<T>,
) -> Result<(T, BasisOptimum<T>)> {
    let opt = max_weak_classical_j(rho, x, search)?;
    Ok((mutual_information(rho)? - opt.value, opt))
}

/// `ΔD = D_w(x) − D`.
pub fn delta_discord<T: Real>(rho: &DensityMatrix<T>, x: T) -> Result<T> {
    let (dw, _) = weak_discord(rho, x)?;
    let (d, _) = discord(rho)?;
    Ok(dw - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::ComplexMatrix;
    use crate::states::{make_general, make_pure_schmidt, make_werner, validate};
    use std::f64::consts::FRAC_PI_2;

    fn h2(p: f64) -> f64 {
        shannon_bits([p, 1.0 - p])
    }

    fn product_state() -> DensityMatrix<f64> {
        let ra = validate(ComplexMatrix::diag(&[0.7_f64, 0.3]).unwrap()).unwrap();
        let mut b = ComplexMatrix::diag(&[0.4_f64, 0.6]).unwrap();
        b[(0, 1)] = num_complex::Complex::new(0.1, 0.2);
        b[(1, 0)] = num_complex::Complex::new(0.1, -0.2);
        let rb = validate(b).unwrap();
        DensityMatrix::tensor(&ra, &rb).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!(vn_entropy(&make_pure_schmidt(0.3_f64).unwrap()).abs() < 1e-12);
        let half = validate(ComplexMatrix::diag(&[0.5_f64, 0.5]).unwrap()).unwrap();
        assert!((vn_entropy(&half) - 1.0).abs() < 1e-15);
        assert!((vn_entropy(&make_werner(0.0_f64).unwrap()) - 2.0).abs() < 1e-15);
        let s = vn_entropy(&validate(ComplexMatrix::diag(&[0.2_f64, 0.8]).unwrap()).unwrap());
        // −0.2 log2 0.2 − 0.8 log2 0.8
        assert!((s - 0.721_928_094_887_362_3).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_examples() {
        assert!(mutual_information(&product_state()).unwrap().abs() < 1e-12);
        assert!((mutual_information(&make_pure_schmidt(0.5_f64).unwrap()).unwrap() - 2.0).abs() < 1e-12);
        let z: f64 = 0.25;
        let (a, b) = ((1.0 + 3.0 * z) / 4.0, (1.0 - z) / 4.0);
        let s_ab = -(a * a.log2() + 3.0 * b * b.log2());
        let want = 2.0 - s_ab;
        assert!((mutual_information(&make_werner(z).unwrap()).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn conditional_entropy_examples() {
        let rho = product_state();
        let basis = MeasurementBasis::new(0.8, 2.2);
        let sa = vn_entropy(&rho.reduced(Subsystem::A).unwrap());
        assert!((strong_conditional_entropy(&rho, &basis).unwrap() - sa).abs() < 1e-12);

        let bell = make_pure_schmidt(0.5_f64).unwrap();
        for (t, p) in [(0.0, 0.0), (1.1, 0.4), (FRAC_PI_2, 3.0)] {
            assert!(
                strong_conditional_entropy(&bell, &MeasurementBasis::new(t, p))
                    .unwrap()
                    .abs()
                    < 1e-12
            );
        }
        let pure = make_pure_schmidt(0.2_f64).unwrap();
        let s = strong_conditional_entropy(&pure, &MeasurementBasis::new(FRAC_PI_2, 0.0)).unwrap();
        assert!(s.abs() < 1e-12);
    }

    #[test]
    fn weak_conditional_entropy_limits() {
        let rho = make_general([0.1_f64, 0.2, 0.3], [0.3, -0.2, 0.1], [0.2, 0.1, -0.1]).unwrap();
        let basis = MeasurementBasis::new(0.9, 1.3);
        let sa = vn_entropy(&rho.reduced(Subsystem::A).unwrap());
        let zero = WeakPovm::new(0.0, basis).unwrap();
        assert!((weak_conditional_entropy(&rho, &zero).unwrap() - sa).abs() < 1e-12);
        let strong = WeakPovm::new(20.0, basis).unwrap();
        let diff = weak_conditional_entropy(&rho, &strong).unwrap() - strong_conditional_entropy(&rho, &basis).unwrap();
        assert!(diff.abs() < 1e-6);
    }

    #[test]
    fn classical_j_examples() {
        let basis = MeasurementBasis::new(0.4, 0.1);
        assert!(classical_j(&product_state(), &basis).unwrap().abs() < 1e-12);
        assert!((classical_j(&make_pure_schmidt(0.5_f64).unwrap(), &basis).unwrap() - 1.0).abs() < 1e-12);
        let povm = WeakPovm::new(0.0, basis).unwrap();
        assert!(weak_classical_j(&make_werner(0.7_f64).unwrap(), &povm).unwrap().abs() < 1e-12);
    }

    #[test]
    fn discord_examples() {
        let (d, _) = discord(&product_state()).unwrap();
        assert!(d.abs() < 1e-9);
        for l0 in [0.05, 0.2, 0.5] {
            let (d, _) = discord(&make_pure_schmidt(l0).unwrap()).unwrap();
            assert!((d - h2(l0)).abs() < 1e-8);
        }
    }

    #[test]
    fn weak_discord_zero_strength_is_mutual_information() {
        let rho = make_general([0.01_f64, 0.1, 0.22], [0.1, 0.03, 0.5], [0.1, 0.02, 0.2]).unwrap();
        let (dw, _) = weak_discord(&rho, 0.0).unwrap();
        assert!((dw - mutual_information(&rho).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn optimum_value_matches_reevaluation() {
        let rho = make_general([0.01_f64, 0.1, 0.22], [0.1, 0.03, 0.5], [0.1, 0.02, 0.2]).unwrap();
        let opt = max_weak_classical_j(&rho, 1.3, &BasisSearch::default()).unwrap();
        let povm = WeakPovm::new(1.3, opt.basis).unwrap();
        assert!((weak_classical_j(&rho, &povm).unwrap() - opt.value).abs() < 1e-10);
        assert!(opt.evaluations > 37 * 19);
    }

    #[test]
    fn flat_objective_picks_smallest_angles() {
        let opt = max_weak_classical_j(&make_werner(0.4_f64).unwrap(), 0.7, &BasisSearch::default()).unwrap();
        assert_eq!((opt.basis.theta(), opt.basis.phi()), (0.0, 0.0));
    }

    #[test]
    fn non_finite_strength_is_rejected() {
        assert!(weak_discord(&make_werner(0.4_f64).unwrap(), f64::NAN).is_err());
    }

    #[test]
    fn requires_two_qubits() {
        let q = validate(ComplexMatrix::diag(&[0.5_f64, 0.5]).unwrap()).unwrap();
        assert!(mutual_information(&q).is_err());
        assert!(discord(&q).is_err());
    }
}
