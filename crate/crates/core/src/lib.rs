//! Quantum discord, weak discord and the fidelity/discord trade-off of weak
//! measurements on two-qubit states.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.
//!
//! ```
//! use weak_discord::{make_pure_schmidt, CostModel};
//!
//! let rho = make_pure_schmidt(0.2).unwrap();
//! let model = CostModel::new(rho).unwrap();
//! let r = model.report(1.0).unwrap();
//! assert!((r.cost - (r.delta_fidelity + r.delta_discord)).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlations;
pub mod costfn;
pub mod error;
pub mod matcore;
pub mod measure;
pub mod optimize;
pub mod oracles;
pub mod scalar;
pub mod states;

pub use correlations::{
    classical_j, delta_discord, discord, discord_with, max_classical_j, max_weak_classical_j, mutual_information,
    shannon_bits, strong_conditional_entropy, vn_entropy, weak_classical_j, weak_conditional_entropy, weak_discord,
    weak_discord_with, BasisSearch,
};
pub use costfn::{
    cost, delta_fidelity, derivative_scan, optimal_strength, uhlmann_fidelity, BasisSource, Boundary, ChannelBasis,
    CostOptions, Crossing, PostMeasurementRule, ZeroCrossing, DEFAULT_STEP, DEFAULT_TOL, DEFAULT_X_MAX,
};
pub use error::{Error, Result};
pub use matcore::{hermitian_eigen, partial_trace, pauli, tensor_product, MatrixFunction, Subsystem};
pub use measure::{
    conditional_state, literal_post_measurement, outcome_probability, post_measurement_state,
    projective_conditional_state, weak_elements, Outcome,
};
pub use scalar::Real;
pub use states::{bloch_vector, make_general, make_pure_schmidt, make_werner, validate};

pub type ComplexMatrix = matcore::ComplexMatrix<f64>;
pub type HermitianEigen = matcore::HermitianEigen<f64>;
pub type DensityMatrix = states::DensityMatrix<f64>;
pub type StateFamily = states::StateFamily<f64>;
pub type MeasurementBasis = measure::MeasurementBasis<f64>;
pub type WeakPovm = measure::WeakPovm<f64>;
pub type BasisOptimum = correlations::BasisOptimum<f64>;
pub type CorrelationReport = costfn::CorrelationReport<f64>;
pub type CostModel = costfn::CostModel<f64>;
pub type StrengthOptimum = costfn::StrengthOptimum<f64>;
pub type DerivativeScan = costfn::DerivativeScan<f64>;
