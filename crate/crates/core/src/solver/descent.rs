//! Preconditioned projected gradient descent on the discrete Rayleigh
//! quotient.
//!
//! The feasible set is the unit p-norm sphere with Dirichlet nodes pinned
//! to zero. Each step solves a tridiagonal system with the frozen secant
//! pencil `K_s − σ M_s` built from `p|Du|^{p−2}` and `p|u|^{p−2}` (the latter
//! integrated like the mass), takes a
//! backtracking Armijo step along the preconditioned direction and projects
//! back onto the sphere. At `p = 2` a unit step is exactly one step of
//! shifted inverse iteration.

use std::collections::VecDeque;

use crate::error::Result;
use crate::numeric::solve_spd_tridiagonal;
use crate::scalar::Real;

use super::discrete::{gauss_points, Discretization, PowerLaw};

pub(crate) const WINDOW: usize = 50;
/// Fractions of the current quotient tried as the preconditioner shift.
const SHIFTS: [f64; 10] = [0.99, 0.95, 0.9, 0.8, 0.6, 0.4, 0.2, 0.1, 0.0, -0.05];

#[derive(Debug, Clone, Copy)]
pub(crate) struct StageOutcome<T> {
    pub lambda: T,
    pub iterations: usize,
    pub residual: T,
    pub converged: bool,
}

pub(crate) fn descend<T: Real>(
    disc: &Discretization<T>,
    u: &mut Vec<T>,
    law: PowerLaw<T>,
    tol: T,
    max_iter: usize,
) -> Result<StageOutcome<T>> {
    let p = law.p;
    disc.normalize(u, p)?;
    let n_nodes = disc.nodes();
    let free = disc.free_range();
    let inv_h = T::one() / disc.h;
    let armijo = T::lit(1e-4);
    let max_step = T::lit(64.0);
    let inv_len = T::one() / (disc.h * T::from_usize_lossy(n_nodes - 1));

    let mut g_energy = vec![T::zero(); n_nodes];
    let mut g_mass = vec![T::zero(); n_nodes];
    let mut trial = vec![T::zero(); n_nodes];
    let mut diag = vec![T::zero(); free.len()];
    let mut off = vec![T::zero(); free.len().saturating_sub(1)];
    let mut rhs = vec![T::zero(); free.len()];
    let mut mass_diag = vec![T::zero(); free.len()];
    let mut mass_off = vec![T::zero(); free.len().saturating_sub(1)];
    let mut shifted = vec![T::zero(); free.len()];
    let mut shifted_off = vec![T::zero(); free.len().saturating_sub(1)];

    let mut history: VecDeque<T> = VecDeque::with_capacity(WINDOW + 1);
    let mut step = T::one();
    let mut lambda;
    let mut residual = T::infinity();

    for iter in 0..max_iter {
        let (e, n) = disc.with_gradients(u, &law, &mut g_energy, &mut g_mass);
        lambda = e / n;
        history.push_back(lambda);
        if history.len() > WINDOW + 1 {
            history.pop_front();
        }
        if history.len() == WINDOW + 1 {
            let oldest = history[0];
            residual = ((oldest - lambda) / lambda).max(T::zero());
            if residual < tol {
                return Ok(StageOutcome {
                    lambda,
                    iterations: iter,
                    residual,
                    converged: true,
                });
            }
        }

        // gradient of the quotient on free nodes
        for (k, i) in free.clone().enumerate() {
            rhs[k] = (g_energy[i] - lambda * g_mass[i]) / n;
        }

        // preconditioner: the frozen secant pencil K_s − σ M_s. At a fixed
        // point u is its ground state with eigenvalue λ, so σ = θλ with θ
        // close to 1 acts as shifted inverse iteration. Slopes and amplitudes
        // are floored relative to the local amplitude so exponentially
        // decaying tails keep the balance between density and |u'|^{p-2}.
        diag.iter_mut().for_each(|d| *d = T::zero());
        let amp = u.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        for j in 0..n_nodes - 1 {
            let local = u[j].abs().max(u[j + 1].abs()).max(T::lit(1e-12) * amp);
            let floor = T::lit(1e-2) * local * inv_len;
            let c = disc.stiff[j] * law.curvature((u[j + 1] - u[j]) * inv_h, floor) * inv_h * inv_h;
            let (a, b) = (j, j + 1);
            if free.contains(&a) {
                diag[a - free.start] += c;
            }
            if free.contains(&b) {
                diag[b - free.start] += c;
            }
            if free.contains(&a) && free.contains(&b) {
                off[a - free.start] = -c;
            }
        }
        let xi = gauss_points::<T>();
        let (md, mo) = disc.weighted_mass(|j, g| {
            let v = u[j] + (u[j + 1] - u[j]) * xi[g];
            law.curvature(v.abs().max(T::lit(1e-12) * amp), T::zero())
        });
        for (k, i) in free.clone().enumerate() {
            mass_diag[k] = md[i];
            if k + 1 < free.len() {
                mass_off[k] = mo[i];
            }
        }
        let mut dir = None;
        for &theta in SHIFTS.iter() {
            let sigma = T::lit(theta) * lambda;
            shifted
                .iter_mut()
                .zip(diag.iter().zip(&mass_diag))
                .for_each(|(s, (d, m))| *s = *d - sigma * *m);
            shifted_off
                .iter_mut()
                .zip(off.iter().zip(&mass_off))
                .for_each(|(s, (o, m))| *s = *o - sigma * *m);
            if let Some(x) = solve_spd_tridiagonal(&shifted, &shifted_off, &rhs) {
                if x.iter().all(|v| v.is_finite()) {
                    dir = Some(x.into_iter().map(|v| -v).collect::<Vec<_>>());
                    break;
                }
            }
        }
        let mut dir = dir.unwrap_or_else(|| rhs.iter().map(|g| -*g).collect());
        let mut slope = dir.iter().zip(&rhs).map(|(d, g)| *d * *g).sum::<T>();
        if !(slope < T::zero()) {
            dir = rhs.iter().map(|g| -*g).collect();
            slope = -rhs.iter().map(|g| *g * *g).sum::<T>();
        }
        if !(slope < T::zero()) {
            // zero gradient
            residual = T::zero();
            return Ok(StageOutcome {
                lambda,
                iterations: iter,
                residual,
                converged: true,
            });
        }

        // backtracking line search
        let mut alpha = step;
        let mut accepted = None;
        for _ in 0..60 {
            trial.copy_from_slice(u);
            for (k, i) in free.clone().enumerate() {
                trial[i] += alpha * dir[k];
            }
            if disc.normalize(&mut trial, p).is_ok() {
                if let Ok(q) = disc.quotient(&trial, &law) {
                    if q <= lambda + armijo * alpha * slope {
                        accepted = Some(q);
                        break;
                    }
                }
            }
            alpha *= T::lit(0.5);
        }
        match accepted {
            Some(_) => {
                std::mem::swap(u, &mut trial);
                step = (alpha * T::lit(2.0)).min(max_step);
            }
            None => {
                // no decrease representable in floating point
                let prev = history[history.len().saturating_sub(2)];
                residual = ((prev - lambda) / lambda).max(T::zero());
                return Ok(StageOutcome {
                    lambda,
                    iterations: iter,
                    residual,
                    converged: residual < tol,
                });
            }
        }
    }
    lambda = disc.quotient(u, &law)?;
    Ok(StageOutcome {
        lambda,
        iterations: max_iter,
        residual,
        converged: false,
    })
}

/// Solves `∂E/∂w = rhs` on the free nodes: the fluxes are cumulative sums
/// of `rhs`, fixed at the left end by the natural condition or, with two
/// Dirichlet ends, by bisection on the inflow so that `w` closes to zero.
fn solve_flux<T: Real>(disc: &Discretization<T>, law: &PowerLaw<T>, rhs: &[T]) -> Option<Vec<T>> {
    let m = disc.stiff.len();
    let h = disc.h;
    let p = law.p;
    let inv = T::one() / (p - T::one());
    // dphi(s) = y ⇔ s = sign(y)(|y|/p)^{1/(p−1)}
    let slope = |flux: T, j: usize| {
        let y = flux * h / disc.stiff[j];
        y.signum() * (y.abs() / p).powf(inv)
    };
    let mut cum = vec![T::zero(); m];
    let mut acc = T::zero();
    let natural = disc.bc != super::BoundaryCondition::DirichletBoth;
    for j in 0..m {
        if natural || j > 0 {
            acc += rhs[j];
        }
        cum[j] = acc;
    }
    let inflow = if natural {
        T::zero()
    } else {
        let total = cum[m - 1];
        let closure = |f0: T| (0..m).map(|j| slope(f0 - cum[j], j)).sum::<T>();
        let (mut lo, mut hi) = (T::zero(), total);
        for _ in 0..200 {
            let mid = T::lit(0.5) * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if closure(mid) > T::zero() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        T::lit(0.5) * (lo + hi)
    };
    // with two Dirichlet ends each side is summed from its own end up to
    // the zero-flux node, so rounding does not pile up in a boundary layer
    let split = if natural {
        0
    } else {
        (0..m)
            .min_by(|&a, &b| {
                let fa = (inflow - cum[a]).abs();
                let fb = (inflow - cum[b]).abs();
                fa.partial_cmp(&fb).expect("finite fluxes")
            })
            .unwrap_or(0)
    };
    let mut w = vec![T::zero(); m + 1];
    for j in (split..m).rev() {
        w[j] = w[j + 1] - h * slope(inflow - cum[j], j);
    }
    for j in 0..split {
        w[j + 1] = w[j] + h * slope(inflow - cum[j], j);
    }
    w.iter().all(|x| x.is_finite()).then_some(w)
}

/// Nonlinear inverse iteration `∂E/∂w = ∂N/∂u`, started from a converged
/// descent iterate. Each step fixes the profile pointwise, including where
/// the density is too small to move the quotient. Stops when the quotient
/// and the profile settle, or when a step would raise the quotient.
pub(crate) fn polish<T: Real>(
    disc: &Discretization<T>,
    u: &mut Vec<T>,
    law: PowerLaw<T>,
    tol: T,
    max_iter: usize,
) -> Result<(T, usize)> {
    let p = law.p;
    disc.normalize(u, p)?;
    let mut lambda = disc.quotient(u, &law)?;
    let n_nodes = disc.nodes();
    let mut g_energy = vec![T::zero(); n_nodes];
    let mut g_mass = vec![T::zero(); n_nodes];
    for iter in 0..max_iter {
        disc.with_gradients(u, &law, &mut g_energy, &mut g_mass);
        let Some(mut w) = solve_flux(disc, &law, &g_mass) else {
            return Ok((lambda, iter));
        };
        if disc.normalize(&mut w, p).is_err() {
            return Ok((lambda, iter));
        }
        let q = disc.quotient(&w, &law)?;
        if !(q <= lambda * (T::one() + T::lit(4.0) * T::epsilon())) {
            return Ok((lambda, iter));
        }
        let amp = w.iter().fold(T::zero(), |a, x| a.max(x.abs()));
        let change = w
            .iter()
            .zip(u.iter())
            .fold(T::zero(), |a, (x, y)| a.max((*x - *y).abs()))
            / amp;
        let settled = (lambda - q) <= tol * q && change <= T::lit(1e-9).max(T::lit(64.0) * T::epsilon());
        *u = w;
        lambda = q;
        if settled {
            return Ok((lambda, iter + 1));
        }
    }
    Ok((lambda, max_iter))
}
