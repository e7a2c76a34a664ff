//! Disturbance-vs-information cost `C(x) = ΔF(x) + ΔD(x)` of a weak
//! measurement of strength `x` on qubit B.
//!
//! `ΔF = 1 − F(ρ, ρ̃)` uses the Uhlmann fidelity between the state and its
//! non-selective post-measurement state; `ΔD = D_w(x) − D`. Unless a basis
//! is supplied, the channel in `ΔF` is applied in the basis that maximises
//! `J_w` at the same `x`.
//!
//! `C` is even in `x` (the two weak elements swap under `x → −x`), so
//! searches and scans only consider `x ≥ 0`.

use rayon::prelude::*;
use serde::Serialize;

use crate::correlations::{max_classical_j, max_weak_classical_j, mutual_information, BasisSearch};
use crate::error::{Error, Result};
use crate::matcore::{psd_matrix_function, psd_spectrum, ComplexMatrix, MatrixFunction};
use crate::measure::{literal_post_measurement, post_measurement_state, MeasurementBasis, WeakPovm};
use crate::optimize::golden_section;
use crate::scalar::Real;
use crate::states::DensityMatrix;

/// `tr √(√ρ σ √ρ)`; `sigma` need not be normalised.
fn fidelity_of_matrices<T: Real>(rho: &ComplexMatrix<T>, sigma: &ComplexMatrix<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::InvalidDimension {
            expected: "matching dimensions",
            found: sigma.dim(),
        });
    }
    let root = psd_matrix_function(rho, MatrixFunction::Sqrt)?;
    let inner = (&(&root * sigma) * &root).hermitian_part();
    let f: T = psd_spectrum(&inner)?.eigenvalues.iter().map(|l| l.sqrt()).sum();
    Ok(if f > T::one() && f <= T::one() + T::hermitian_tol() {
        T::one()
    } else {
        f
    })
}

/// Uhlmann fidelity `F(ρ, σ) = tr √(√ρ σ √ρ)`.
pub fn uhlmann_fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    fidelity_of_matrices(rho.matrix(), sigma.matrix())
}

/// How the post-measurement state entering `ΔF` is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PostMeasurementRule {
    /// `Σ_± (I⊗P_{±x}) ρ (I⊗P_{±x})`.
    #[default]
    TracePreserving,
    /// Each branch additionally weighted by its probability; not trace
    /// preserving. See [`literal_post_measurement`].
    Literal,
}

/// Returns `(F, tr ρ̃)`.
fn channel_fidelity<T: Real>(rho: &DensityMatrix<T>, povm: &WeakPovm<T>, rule: PostMeasurementRule) -> Result<(T, T)> {
    match rule {
        PostMeasurementRule::TracePreserving => {
            let post = post_measurement_state(rho, povm)?;
            Ok((uhlmann_fidelity(rho, &post)?, post.matrix().trace().re))
        }
        PostMeasurementRule::Literal => {
            let post = literal_post_measurement(rho, povm)?;
            Ok((fidelity_of_matrices(rho.matrix(), &post.matrix)?, post.trace))
        }
    }
}

/// `ΔF = 1 − F(ρ, ρ̃)` for the weak measurement `(x, basis)`.
pub fn delta_fidelity<T: Real>(rho: &DensityMatrix<T>, x: T, basis: MeasurementBasis<T>) -> Result<T> {
    let povm = WeakPovm::new(x, basis)?;
    let (f, _) = channel_fidelity(rho, &povm, PostMeasurementRule::TracePreserving)?;
    Ok(T::one() - f)
}

/// Basis in which the channel for `ΔF` is applied.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum ChannelBasis<T> {
    /// The `J_w`-maximising basis at the same strength.
    #[default]
    WeakDiscordOptimum,
    Fixed(MeasurementBasis<T>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisSource {
    WeakDiscordOptimum,
    UserSupplied,
}

#[derive(Clone, Debug)]
pub struct CostOptions<T> {
    pub search: BasisSearch<T>,
    pub rule: PostMeasurementRule,
    pub channel_basis: ChannelBasis<T>,
}

impl<T: Real> Default for CostOptions<T> {
    fn default() -> Self {
        Self {
            search: BasisSearch::default(),
            rule: PostMeasurementRule::default(),
            channel_basis: ChannelBasis::default(),
        }
    }
}

/// All correlation and disturbance quantities at one strength.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport<T> {
    pub x: T,
    /// `J_w`-maximising basis.
    pub theta_opt: T,
    pub phi_opt: T,
    pub mutual_information: T,
    /// `J = I − D`, the optimised projective classical correlation.
    pub classical_correlation: T,
    pub discord: T,
    pub weak_discord: T,
    pub delta_discord: T,
    pub fidelity: T,
    pub delta_fidelity: T,
    pub cost: T,
    /// Basis the `ΔF` channel was applied in, and where it came from.
    pub channel_theta: T,
    pub channel_phi: T,
    pub channel_basis: BasisSource,
    pub post_measurement_rule: PostMeasurementRule,
    /// Trace of the post-measurement operator (1 for the trace-preserving rule).
    pub post_measurement_trace: T,
}

/// A state with its strength-independent quantities (`I`, `D`) cached.
#[derive(Clone, Debug)]
pub struct CostModel<T> {
    rho: DensityMatrix<T>,
    options: CostOptions<T>,
    mutual_information: T,
    discord: T,
}

impl<T: Real> CostModel<T> {
    pub fn new(rho: DensityMatrix<T>) -> Result<Self> {
        Self::with_options(rho, CostOptions::default())
    }

    pub fn with_options(rho: DensityMatrix<T>, options: CostOptions<T>) -> Result<Self> {
        rho.require_two_qubit()?;
        let mutual_information = mutual_information(&rho)?;
        let strong = max_classical_j(&rho, &options.search)?;
        Ok(Self {
            discord: mutual_information - strong.value,
            rho,
            options,
            mutual_information,
        })
    }

    pub fn state(&self) -> &DensityMatrix<T> {
        &self.rho
    }

    pub fn options(&self) -> &CostOptions<T> {
        &self.options
    }

    pub fn discord(&self) -> T {
        self.discord
    }

    pub fn mutual_information(&self) -> T {
        self.mutual_information
    }

    pub fn report(&self, x: T) -> Result<CorrelationReport<T>> {
        if !(x.is_finite() && x >= T::zero()) {
            return Err(Error::InvalidArgument(format!(
                "strength must be finite and non-negative, got {x}"
            )));
        }
        let weak = max_weak_classical_j(&self.rho, x, &self.options.search)?;
        let weak_discord = self.mutual_information - weak.value;
        let (channel, source) = match self.options.channel_basis {
            ChannelBasis::WeakDiscordOptimum => (weak.basis, BasisSource::WeakDiscordOptimum),
            ChannelBasis::Fixed(b) => (b, BasisSource::UserSupplied),
        };
        let povm = WeakPovm::new(x, channel)?;
        let (fidelity, trace) = channel_fidelity(&self.rho, &povm, self.options.rule)?;
        let delta_fidelity = T::one() - fidelity;
        let delta_discord = weak_discord - self.discord;
        Ok(CorrelationReport {
            x,
            theta_opt: weak.basis.theta(),
            phi_opt: weak.basis.phi(),
            mutual_information: self.mutual_information,
            classical_correlation: self.mutual_information - self.discord,
            discord: self.discord,
            weak_discord,
            delta_discord,
            fidelity,
            delta_fidelity,
            cost: delta_fidelity + delta_discord,
            channel_theta: channel.theta(),
            channel_phi: channel.phi(),
            channel_basis: source,
            post_measurement_rule: self.options.rule,
            post_measurement_trace: trace,
        })
    }

    /// `C(|x|)`; negative strengths map to their mirror image.
    pub fn cost(&self, x: T) -> Result<T> {
        Ok(self.report(x.abs())?.cost)
    }

    /// Reports at every strength in `xs`, evaluated in parallel and
    /// returned in input order.
    pub fn sweep(&self, xs: &[T]) -> Result<Vec<CorrelationReport<T>>> {
        xs.par_iter().map(|&x| self.report(x)).collect()
    }

    fn costs(&self, xs: &[T]) -> Result<Vec<T>> {
        xs.par_iter().map(|&x| self.cost(x)).collect()
    }
}

/// Full report at strength `x ≥ 0` with default options.
pub fn cost<T: Real>(rho: &DensityMatrix<T>, x: T) -> Result<CorrelationReport<T>> {
    CostModel::new(rho.clone())?.report(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Lower,
    Upper,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrengthOptimum<T> {
    pub x_star: T,
    pub report: CorrelationReport<T>,
    /// Set when the minimum sits within `tol` of `0` or `x_max`.
    pub boundary: Option<Boundary>,
    /// Central-difference `C″(x*)` with the default step; `None` on a boundary.
    pub curvature: Option<T>,
}

/// Default stencil step for finite-difference derivatives of `C`.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Default strength search interval `[0, 10]` and tolerance.
pub const DEFAULT_X_MAX: f64 = 10.0;
pub const DEFAULT_TOL: f64 = 1e-6;
const BRACKET_POINTS: usize = 33;

impl<T: Real> CostModel<T> {
    /// Minimises `C` over `[0, x_max]`: a 33-point grid brackets the
    /// smallest value, then golden-section search narrows the bracket to
    /// `tol`. Values within the search tie tolerance count as equal and
    /// resolve toward smaller `x`, so a flat `C` gives `x* = 0`.
    pub fn optimal_strength(&self, x_max: T, tol: T) -> Result<StrengthOptimum<T>> {
        if !(x_max > T::zero() && x_max.is_finite() && tol > T::zero()) {
            return Err(Error::InvalidArgument("x_max and tol must be positive".into()));
        }
        let last = BRACKET_POINTS - 1;
        let xs: Vec<T> = (0..BRACKET_POINTS)
            .map(|i| x_max * T::from_usize(i).expect("small") / T::from_usize(last).expect("small"))
            .collect();
        let cs = self.costs(&xs)?;
        let tie = self.options.search.tie_tolerance;
        let mut k = 0;
        for (i, &c) in cs.iter().enumerate() {
            if c < cs[k] - tie {
                k = i;
            }
        }
        let lo = xs[k.saturating_sub(1)];
        let hi = xs[(k + 1).min(last)];
        let (xg, cg) = golden_section(|x| self.cost(x), lo, hi, tol)?;
        let x_star = if cg < cs[k] - tie || (cg <= cs[k] + tie && xg < xs[k]) {
            xg
        } else {
            xs[k]
        };
        let boundary = if x_star <= tol {
            Some(Boundary::Lower)
        } else if x_star >= x_max - tol {
            Some(Boundary::Upper)
        } else {
            None
        };
        let curvature = match boundary {
            Some(_) => None,
            None => {
                let h = T::lit(DEFAULT_STEP);
                let stencil = self.costs(&[x_star - h, x_star, x_star + h])?;
                Some((stencil[2] - stencil[1] - stencil[1] + stencil[0]) / (h * h))
            }
        };
        Ok(StrengthOptimum {
            x_star,
            report: self.report(x_star)?,
            boundary,
            curvature,
        })
    }
}

/// `argmin_x C(x)` on `[0, x_max]` with default options.
pub fn optimal_strength<T: Real>(rho: &DensityMatrix<T>, x_max: T, tol: T) -> Result<StrengthOptimum<T>> {
    CostModel::new(rho.clone())?.optimal_strength(x_max, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Crossing {
    /// `C′` goes from negative to positive: a minimum.
    Rising,
    Falling,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZeroCrossing<T> {
    /// Linear interpolation between the bracketing grid points.
    pub x: T,
    pub direction: Crossing,
}

/// First and second derivatives of `C` on a grid, and the sign changes of
/// `C′·Θ(C″)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivativeScan<T> {
    pub x_grid: Vec<T>,
    pub step: T,
    pub c_values: Vec<T>,
    pub c_prime: Vec<T>,
    pub c_double_prime: Vec<T>,
    /// `C′` where `C″ > 0`, zero elsewhere.
    pub c_prime_masked: Vec<T>,
    /// Sign changes between consecutive non-zero entries of `c_prime_masked`.
    pub zero_crossings: Vec<ZeroCrossing<T>>,
}

impl<T: Real> CostModel<T> {
    /// Central differences `C′ = (C₊ − C₋)/2h`, `C″ = (C₊ − 2C + C₋)/h²`
    /// at every grid point, each stencil value with its own basis
    /// maximisation.
    pub fn derivative_scan(&self, x_grid: &[T], h: T) -> Result<DerivativeScan<T>> {
        if !(h > T::zero() && h.is_finite()) {
            return Err(Error::InvalidArgument("finite-difference step must be positive".into()));
        }
        if x_grid.is_empty() || x_grid.windows(2).any(|w| !(w[1] > w[0])) || x_grid[0] < T::zero() {
            return Err(Error::InvalidArgument(
                "grid must be non-empty, non-negative and strictly increasing".into(),
            ));
        }
        let stencil: Vec<T> = x_grid.iter().flat_map(|&x| [x - h, x, x + h]).collect();
        let values = self.costs(&stencil)?;
        let two = T::lit(2.0);
        let mut scan = DerivativeScan {
            x_grid: x_grid.to_vec(),
            step: h,
            c_values: Vec::with_capacity(x_grid.len()),
            c_prime: Vec::with_capacity(x_grid.len()),
            c_double_prime: Vec::with_capacity(x_grid.len()),
            c_prime_masked: Vec::with_capacity(x_grid.len()),
            zero_crossings: Vec::new(),
        };
        for v in values.chunks_exact(3) {
            let (minus, mid, plus) = (v[0], v[1], v[2]);
            let d1 = (plus - minus) / (two * h);
            let d2 = (plus - two * mid + minus) / (h * h);
            scan.c_values.push(mid);
            scan.c_prime.push(d1);
            scan.c_double_prime.push(d2);
            scan.c_prime_masked.push(if d2 > T::zero() { d1 } else { T::zero() });
        }
        let mut previous: Option<(T, T)> = None;
        for (&x, &m) in x_grid.iter().zip(&scan.c_prime_masked) {
            if m == T::zero() {
                continue;
            }
            if let Some((px, pm)) = previous {
                if (pm < T::zero()) != (m < T::zero()) {
                    let x0 = px + (x - px) * pm / (pm - m);
                    scan.zero_crossings.push(ZeroCrossing {
                        x: x0,
                        direction: if pm < T::zero() {
                            Crossing::Rising
                        } else {
                            Crossing::Falling
                        },
                    });
                }
            }
            previous = Some((x, m));
        }
        Ok(scan)
    }
}

pub fn derivative_scan<T: Real>(rho: &DensityMatrix<T>, x_grid: &[T], h: T) -> Result<DerivativeScan<T>> {
    CostModel::new(rho.clone())?.derivative_scan(x_grid, h)
}
