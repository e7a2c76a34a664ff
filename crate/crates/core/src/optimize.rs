//! Derivative-free minimisers: Nelder–Mead simplex and golden-section search.

use crate::scalar::Real;

#[derive(Clone, Debug)]
pub struct NelderMead<T> {
    /// Stop once the spread of simplex values is below this...
    pub fatol: T,
    /// ...and every vertex lies within this of the best one.
    pub xatol: T,
    pub max_evals: usize,
}

impl<T: Real> Default for NelderMead<T> {
    fn default() -> Self {
        Self {
            fatol: T::lit(1e-9),
            xatol: T::lit(1e-7),
            max_evals: 4000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum<T> {
    pub x: Vec<T>,
    pub value: T,
    pub evaluations: usize,
    pub converged: bool,
}

impl<T: Real> NelderMead<T> {
    /// Minimises `f` from `x0` with an axis-aligned initial simplex of the
    /// given per-coordinate `steps`.
    pub fn minimize<F>(&self, f: F, x0: &[T], steps: &[T]) -> Minimum<T>
    where
        F: Fn(&[T]) -> T,
    {
        let n = x0.len();
        assert_eq!(n, steps.len(), "one step per coordinate");
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        let evaluations = std::cell::Cell::new(0usize);
        let eval = |p: &[T]| {
            evaluations.set(evaluations.get() + 1);
            f(p)
        };

        let mut simplex: Vec<(Vec<T>, T)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), eval(x0)));
        for i in 0..n {
            let mut p = x0.to_vec();
            p[i] = p[i] + steps[i];
            let v = eval(&p);
            simplex.push((p, v));
        }

        let point =
            |a: &[T], b: &[T], t: T| -> Vec<T> { a.iter().zip(b).map(|(&ai, &bi)| ai + t * (bi - ai)).collect() };

        let mut converged = false;
        while evaluations.get() < self.max_evals {
            // stable: equal values keep their order
            simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
            let best = simplex[0].1;
            let worst = simplex[n].1;
            let spread = (worst - best).abs();
            let size = simplex[1..]
                .iter()
                .flat_map(|(p, _)| p.iter().zip(&simplex[0].0).map(|(&a, &b)| (a - b).abs()))
                .fold(T::zero(), T::max);
            if spread <= self.fatol && size <= self.xatol {
                converged = true;
                break;
            }

            let mut centroid = vec![T::zero(); n];
            for (p, _) in &simplex[..n] {
                for (c, &v) in centroid.iter_mut().zip(p) {
                    *c = *c + v;
                }
            }
            let inv = T::one() / T::from_usize(n).expect("small n");
            for c in &mut centroid {
                *c = *c * inv;
            }

            let worst_p = simplex[n].0.clone();
            let reflected = point(&centroid, &worst_p, -T::one());
            let fr = eval(&reflected);
            if fr < simplex[0].1 {
                let expanded = point(&centroid, &worst_p, -two);
                let fe = eval(&expanded);
                simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (reflected, fr);
                continue;
            }
            let (contracted, fc) = if fr < worst {
                let c = point(&centroid, &reflected, half);
                let v = eval(&c);
                (c, v)
            } else {
                let c = point(&centroid, &worst_p, half);
                let v = eval(&c);
                (c, v)
            };
            if fc < fr.min(worst) {
                simplex[n] = (contracted, fc);
                continue;
            }
            // shrink toward the best vertex
            let best_p = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let p = point(&best_p, &vertex.0, half);
                let v = eval(&p);
                *vertex = (p, v);
            }
        }
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let (x, value) = simplex.swap_remove(0);
        Minimum {
            x,
            value,
            evaluations: evaluations.get(),
            converged,
        }
    }
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping when
/// the bracket is narrower than `tol`. Ties move the bracket toward `lo`.
///
/// Returns the bracket midpoint and its value; the first error from `f`
/// aborts the search.
pub fn golden_section<T, E, F>(mut f: F, lo: T, hi: T, tol: T) -> Result<(T, T), E>
where
    T: Real,
    F: FnMut(T) -> Result<T, E>,
{
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a) > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let mid = (a + b) / T::lit(2.0);
    Ok((mid, f(mid)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_rosenbrock() {
        let nm = NelderMead {
            fatol: 1e-14,
            xatol: 1e-8,
            max_evals: 10_000,
        };
        let r = nm.minimize(
            |p: &[f64]| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2),
            &[-1.2, 1.0],
            &[0.1, 0.1],
        );
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn nelder_mead_flat_returns_start() {
        let r = NelderMead::<f64>::default().minimize(|_| 3.0, &[0.5, 0.25], &[0.1, 0.1]);
        assert!(r.converged);
        assert_eq!(r.x, vec![0.5, 0.25]);
    }

    #[test]
    fn nelder_mead_budget_reports_unconverged() {
        let nm = NelderMead {
            fatol: 0.0,
            xatol: 0.0,
            max_evals: 20,
        };
        let r = nm.minimize(|p: &[f64]| p[0] * p[0] + p[1] * p[1], &[1.0, 1.0], &[0.1, 0.1]);
        assert!(!r.converged);
    }

    #[test]
    fn golden_section_quadratic() {
        // a quadratic minimum is only resolvable to about √ε in x
        let (x, fx) = golden_section(|x: f64| Ok::<_, ()>((x - 1.3).powi(2) + 2.0), 0.0, 4.0, 1e-9).unwrap();
        assert!((x - 1.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-15);
    }

    #[test]
    fn golden_section_propagates_errors() {
        let r = golden_section(|x: f64| if x > 0.5 { Err("boom") } else { Ok(x) }, 0.0, 1.0, 1e-6);
        assert_eq!(r, Err("boom"));
    }

    #[test]
    fn golden_section_boundary_minimum() {
        let (x, _) = golden_section(|x: f64| Ok::<_, ()>(x), 0.0, 1.0, 1e-8).unwrap();
        assert!(x < 1e-8);
    }
}
