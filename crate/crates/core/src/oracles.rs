//! Closed-form references for the pure Schmidt family
//! `√λ0 |00⟩ + √λ1 |11⟩` and the Werner family.
//!
//! These are scalar formulas with no dependence on the matrix pipeline, so
//! comparing them against the general path is a genuine two-route check.
//! All entropies are in bits.

use crate::scalar::Real;

fn xlog2x<T: Real>(p: T) -> T {
    if p > T::zero() {
        p * p.log2()
    } else {
        T::zero()
    }
}

/// Binary entropy `−λ0 log2 λ0 − λ1 log2 λ1`: the discord of the pure
/// Schmidt state.
pub fn pure_discord<T: Real>(lambda0: T) -> T {
    -(xlog2x(lambda0) + xlog2x(T::one() - lambda0))
}

/// `p_w(y) = [1 + (λ1 − λ0) cos θ tanh y] / 2`; `y = −x` gives the other outcome.
pub fn pure_outcome_probability<T: Real>(lambda0: T, y: T, theta: T) -> T {
    let lambda1 = T::one() - lambda0;
    (T::one() + (lambda1 - lambda0) * theta.cos() * y.tanh()) / T::lit(2.0)
}

/// Eigenvalues `k_±(y) = [1 ± √(1 − λ0λ1 / (p_w(y)² cosh² y))] / 2` of the
/// conditional state of A; the square-root argument is clamped to `[0, 1]`.
pub fn pure_k<T: Real>(lambda0: T, y: T, theta: T) -> (T, T) {
    let lambda1 = T::one() - lambda0;
    let p = pure_outcome_probability(lambda0, y, theta);
    let ch = y.cosh();
    let arg = (T::one() - lambda0 * lambda1 / (p * p * ch * ch))
        .max(T::zero())
        .min(T::one());
    let r = arg.sqrt();
    let half = T::lit(0.5);
    (half * (T::one() + r), half * (T::one() - r))
}

/// `S_w(A|B) = −Σ_{y=±x} p_w(y) [k₊ log2 k₊ + k₋ log2 k₋]` at angle `θ`.
pub fn pure_weak_conditional_entropy<T: Real>(lambda0: T, x: T, theta: T) -> T {
    [x, -x].iter().fold(T::zero(), |acc, &y| {
        let p = pure_outcome_probability(lambda0, y, theta);
        let (kp, km) = pure_k(lambda0, y, theta);
        acc - p * (xlog2x(kp) + xlog2x(km))
    })
}

/// Angle at which the weak conditional entropy is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThetaChoice<T> {
    At(T),
    /// Minimise over a 1801-point grid on `[0, π]` (spacing 0.1°, contains π/2).
    Minimized,
}

const THETA_GRID: usize = 1801;

/// `min_θ S_w(A|B)` over the θ grid, with the minimising angle.
pub fn pure_min_conditional_entropy<T: Real>(lambda0: T, x: T) -> (T, T) {
    let last = T::from_usize(THETA_GRID - 1).expect("grid");
    (0..THETA_GRID)
        .map(|i| {
            let theta = T::PI() * T::from_usize(i).expect("grid") / last;
            (theta, pure_weak_conditional_entropy(lambda0, x, theta))
        })
        .fold(
            (T::zero(), T::infinity()),
            |best, cur| if cur.1 < best.1 { cur } else { best },
        )
}

/// Weak discord `D_w = h(λ0) + S_w(A|B)`, the conditional entropy taken at
/// `θ` or minimised over `θ` (the `J_w`-maximising direction).
pub fn pure_weak_discord<T: Real>(lambda0: T, x: T, theta: ThetaChoice<T>) -> T {
    let s = match theta {
        ThetaChoice::At(t) => pure_weak_conditional_entropy(lambda0, x, t),
        ThetaChoice::Minimized => pure_min_conditional_entropy(lambda0, x).1,
    };
    pure_discord(lambda0) + s
}

/// `ΔD = D_w − D = min_θ S_w(A|B)`.
pub fn pure_delta_discord<T: Real>(lambda0: T, x: T) -> T {
    pure_min_conditional_entropy(lambda0, x).1
}

/// Fidelity between the pure Schmidt state and its post-measurement state:
/// `½ [2(λ0² + λ1²) − cos 2θ (λ0 − λ1)² (sech x − 1) + (4λ0λ1 + 1) sech x + 1]^{1/2}`.
pub fn pure_fidelity<T: Real>(lambda0: T, x: T, theta: T) -> T {
    let lambda1 = T::one() - lambda0;
    let two = T::lit(2.0);
    let sech = T::one() / x.cosh();
    let diff = lambda0 - lambda1;
    let bracket = two * (lambda0 * lambda0 + lambda1 * lambda1) - (two * theta).cos() * diff * diff * (sech - T::one())
        + (T::lit(4.0) * lambda0 * lambda1 + T::one()) * sech
        + T::one();
    T::lit(0.5) * bracket.max(T::zero()).sqrt()
}

/// Werner-state weak discord at strength `x`:
///
/// `1 + 3a log2 a + b log2 b − q₋ log2 q₋ − q₊ log2 q₊` with
/// `a = (1−z)/4`, `b = (1+3z)/4`, `q_± = (1 ∓ z tanh(±x))/2`.
pub fn werner_weak_discord<T: Real>(z: T, x: T) -> T {
    let four = T::lit(4.0);
    let two = T::lit(2.0);
    let a = (T::one() - z) / four;
    let b = (T::one() + T::lit(3.0) * z) / four;
    let t = x.tanh();
    let q_minus = (T::one() - z * (-t)) / two;
    let q_plus = (T::one() - z * t) / two;
    T::one() + T::lit(3.0) * xlog2x(a) + xlog2x(b) - xlog2x(q_minus) - xlog2x(q_plus)
}

/// `x → ∞` limit of [`werner_weak_discord`] (`tanh → 1`): the Werner discord.
pub fn werner_discord_limit<T: Real>(z: T) -> T {
    let four = T::lit(4.0);
    let two = T::lit(2.0);
    let a = (T::one() - z) / four;
    let b = (T::one() + T::lit(3.0) * z) / four;
    T::one() + T::lit(3.0) * xlog2x(a) + xlog2x(b) - xlog2x((T::one() - z) / two) - xlog2x((T::one() + z) / two)
}
