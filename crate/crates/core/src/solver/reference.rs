//! Exact-at-p=2 eigensolver: the discrete quotient at `p = 2` is a ratio of
//! quadratic forms `uᵀKu / uᵀMu` with `K` and `M` tridiagonal and `M`
//! positive definite, so its minimum is the smallest eigenvalue of the
//! pencil `K − λM`.

use crate::error::{Error, Result};
use crate::numeric::solve_tridiagonal;
use crate::scalar::Real;

use super::discrete::{Discretization, PowerLaw};

pub(crate) struct ReferencePair<T> {
    pub lambda: T,
    pub vector: Vec<T>,
    pub residual: T,
}

/// Number of eigenvalues of the pencil below `x`: the number of negative
/// pivots of the LDLᵀ factorization of `K − xM` (Sylvester's law of inertia).
fn inertia_count<T: Real>(kd: &[T], ko: &[T], md: &[T], mo: &[T], x: T) -> usize {
    let tiny = T::min_positive_value() / T::epsilon();
    let mut count = 0;
    let mut q = kd[0] - x * md[0];
    if q < T::zero() {
        count += 1;
    }
    for i in 1..kd.len() {
        let qq = if q.abs() >= tiny {
            q
        } else if q < T::zero() {
            -tiny
        } else {
            tiny
        };
        let o = ko[i - 1] - x * mo[i - 1];
        q = kd[i] - x * md[i] - o * o / qq;
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

fn tri_apply<T: Real>(d: &[T], o: &[T], x: &[T]) -> Vec<T> {
    let m = d.len();
    (0..m)
        .map(|k| {
            let mut v = d[k] * x[k];
            if k > 0 {
                v += o[k - 1] * x[k - 1];
            }
            if k + 1 < m {
                v += o[k] * x[k + 1];
            }
            v
        })
        .collect()
}

pub(crate) fn smallest_pair<T: Real>(disc: &Discretization<T>) -> Result<ReferencePair<T>> {
    let free = disc.free_range();
    let m = free.len();
    if m < 2 {
        return Err(Error::domain("grid has too few free nodes"));
    }
    let h2 = disc.h * disc.h;
    let (md_all, mo_all) = disc.weighted_mass(|_, _| T::one());
    let mut kd = Vec::with_capacity(m);
    let mut ko = Vec::with_capacity(m - 1);
    let mut md = Vec::with_capacity(m);
    let mut mo = Vec::with_capacity(m - 1);
    for (k, i) in free.clone().enumerate() {
        let mut d = disc.stiff[i];
        if i > 0 {
            d += disc.stiff[i - 1];
        }
        kd.push(d / h2);
        md.push(md_all[i]);
        if !(md_all[i] > T::zero()) {
            return Err(Error::domain(format!("node {i} has zero mass")));
        }
        if k + 1 < m {
            ko.push(-disc.stiff[i] / h2);
            mo.push(mo_all[i]);
        }
    }

    // bracket the smallest eigenvalue, then bisect on the inertia
    let mut lo = T::zero();
    let mut hi = kd.iter().zip(&md).map(|(k, m)| *k / *m).fold(T::zero(), T::max);
    let mut guard = 0;
    while inertia_count(&kd, &ko, &md, &mo, hi) == 0 {
        lo = hi;
        hi *= T::lit(2.0);
        guard += 1;
        if guard > 200 || !hi.is_finite() {
            return Err(Error::NoConvergence {
                iterations: guard,
                residual: f64::INFINITY,
            });
        }
    }
    for _ in 0..300 {
        let mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inertia_count(&kd, &ko, &md, &mo, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= T::lit(4.0) * T::epsilon() * hi.abs() {
            break;
        }
    }
    let lambda0 = T::lit(0.5) * (lo + hi);

    // inverse iteration slightly below the eigenvalue
    let sigma = lambda0 - T::lit(1e-10) * lambda0.abs().max(T::epsilon());
    let sd: Vec<T> = kd.iter().zip(&md).map(|(k, m)| *k - sigma * *m).collect();
    let so: Vec<T> = ko.iter().zip(&mo).map(|(k, m)| *k - sigma * *m).collect();
    let mut x = vec![T::one(); m];
    for _ in 0..6 {
        let rhs = tri_apply(&md, &mo, &x);
        let y = solve_tridiagonal(&so, &sd, &so, &rhs).ok_or(Error::NoConvergence {
            iterations: 0,
            residual: f64::INFINITY,
        })?;
        let nrm = y.iter().map(|v| *v * *v).sum::<T>().sqrt();
        if !(nrm > T::zero()) || !nrm.is_finite() {
            return Err(Error::NoConvergence {
                iterations: 0,
                residual: f64::INFINITY,
            });
        }
        x = y.into_iter().map(|v| v / nrm).collect();
    }
    let kx = tri_apply(&kd, &ko, &x);
    let mx = tri_apply(&md, &mo, &x);
    let rq = x.iter().zip(&kx).map(|(a, b)| *a * *b).sum::<T>() / x.iter().zip(&mx).map(|(a, b)| *a * *b).sum::<T>();
    let num = kx
        .iter()
        .zip(&mx)
        .map(|(k, m)| (*k - rq * *m) * (*k - rq * *m))
        .sum::<T>()
        .sqrt();
    let den = mx.iter().map(|m| *m * *m).sum::<T>().sqrt() * rq.abs();
    let res = num / den;

    let mut u = vec![T::zero(); disc.nodes()];
    for (k, i) in free.enumerate() {
        u[i] = x[k];
    }
    if u.iter().copied().sum::<T>() < T::zero() {
        u.iter_mut().for_each(|v| *v = -*v);
    }
    disc.normalize(&mut u, T::lit(2.0))?;
    let lambda = disc.quotient(&u, &PowerLaw::new(T::lit(2.0), T::zero()))?;
    // the residual cannot resolve below the pencil's conditioning
    let gate = T::lit(1e-6).max(T::lit(8.0) * T::epsilon() * T::from_usize_lossy(m * m));
    if !(res < gate) {
        return Err(Error::NoConvergence {
            iterations: 6,
            residual: res.as_f64(),
        });
    }
    Ok(ReferencePair {
        lambda,
        vector: u,
        residual: res,
    })
}
