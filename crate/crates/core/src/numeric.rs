//! Small numerical kernels shared by the other modules: compensated
//! summation, a symmetric tridiagonal solver and composite Simpson
//! quadrature with step doubling.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Neumaier (improved Kahan) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

pub fn compensated_sum<T: Real, I: IntoIterator<Item = T>>(terms: I) -> T {
    let mut acc = CompensatedSum::new();
    for x in terms {
        acc.add(x);
    }
    acc.value()
}

/// Solves `A x = rhs` for a symmetric tridiagonal `A` with diagonal `diag`
/// and off-diagonal `off` (`off[i]` couples `i` and `i + 1`) by LDLᵀ
/// elimination without pivoting. Returns `None` if a pivot is not positive.
pub fn solve_spd_tridiagonal<T: Real>(diag: &[T], off: &[T], rhs: &[T]) -> Option<Vec<T>> {
    let n = diag.len();
    debug_assert_eq!(rhs.len(), n);
    debug_assert!(n == 0 || off.len() + 1 >= n);
    if n == 0 {
        return Some(Vec::new());
    }
    let mut pivot = vec![T::zero(); n];
    let mut y = vec![T::zero(); n];
    pivot[0] = diag[0];
    y[0] = rhs[0];
    for i in 1..n {
        if !(pivot[i - 1] > T::zero()) {
            return None;
        }
        let l = off[i - 1] / pivot[i - 1];
        pivot[i] = diag[i] - l * off[i - 1];
        y[i] = rhs[i] - l * y[i - 1];
    }
    if !(pivot[n - 1] > T::zero()) {
        return None;
    }
    let mut x = vec![T::zero(); n];
    x[n - 1] = y[n - 1] / pivot[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (y[i] - off[i] * x[i + 1]) / pivot[i];
    }
    Some(x)
}

/// Solves a general tridiagonal system (Thomas algorithm). `lower[i]` is the
/// entry at `(i + 1, i)`, `upper[i]` the entry at `(i, i + 1)`.
pub fn solve_tridiagonal<T: Real>(lower: &[T], diag: &[T], upper: &[T], rhs: &[T]) -> Option<Vec<T>> {
    let n = diag.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    let mut denom = diag[0];
    if denom == T::zero() {
        return None;
    }
    if n > 1 {
        c[0] = upper[0] / denom;
    }
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - lower[i - 1] * c[i - 1];
        if denom == T::zero() || !denom.is_finite() {
            return None;
        }
        if i + 1 < n {
            c[i] = upper[i] / denom;
        }
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        let next = d[i + 1];
        d[i] -= c[i] * next;
    }
    Some(d)
}

/// Settings for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions<T> {
    /// Panels of the first composite pass, spread over all segments.
    pub points: usize,
    pub rel_tol: T,
    pub abs_tol: T,
    /// Maximum number of step doublings per segment.
    pub max_doublings: u32,
}

impl<T: Real> QuadratureOptions<T> {
    pub fn with_points(points: usize) -> Self {
        Self {
            points,
            rel_tol: T::lit(1e-9),
            abs_tol: T::lit(1e-10),
            max_doublings: 12,
        }
    }
}

fn simpson_panels<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, panels: usize) -> T {
    // panels is even
    let h = (b - a) / T::from_usize_lossy(panels);
    let mut acc = CompensatedSum::new();
    acc.add(f(a));
    acc.add(f(b));
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    for i in 1..panels {
        let x = a + h * T::from_usize_lossy(i);
        let w = if i % 2 == 1 { four } else { two };
        acc.add(w * f(x));
    }
    acc.value() * h / T::lit(3.0)
}

/// Composite Simpson quadrature of `f` over `[breaks[0], breaks.last()]`.
///
/// Every entry of `breaks` is a mandatory panel boundary (kinks and
/// boundary layers go there). Each segment is refined by step doubling
/// until two successive passes agree; the result carries the Richardson
/// correction `(S₂ − S₁)/15`.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, breaks: &[T], opts: QuadratureOptions<T>) -> Result<T> {
    if breaks.len() < 2 {
        return Err(Error::QuadratureFailure("need at least two breakpoints".into()));
    }
    let total = *breaks.last().unwrap() - breaks[0];
    if !(total > T::zero()) {
        return Err(Error::QuadratureFailure("empty integration range".into()));
    }
    let mut acc = CompensatedSum::new();
    let segments = breaks.len() - 1;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            if b == a {
                continue;
            }
            return Err(Error::QuadratureFailure("breakpoints not increasing".into()));
        }
        let share = ((b - a) / total * T::from_usize_lossy(opts.points))
            .to_usize()
            .unwrap_or(0);
        let mut panels = share.max(8);
        panels += panels % 2;
        let mut coarse = simpson_panels(&f, a, b, panels);
        let seg_abs = opts.abs_tol / T::from_usize_lossy(segments);
        let mut converged = false;
        for _ in 0..opts.max_doublings {
            panels *= 2;
            let fine = simpson_panels(&f, a, b, panels);
            let diff = fine - coarse;
            if !fine.is_finite() {
                return Err(Error::QuadratureFailure(format!("non-finite integrand on [{a}, {b}]")));
            }
            coarse = fine;
            if diff.abs() <= opts.rel_tol * fine.abs() || diff.abs() <= seg_abs {
                acc.add(fine + diff / T::lit(15.0));
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::QuadratureFailure(format!(
                "segment [{a}, {b}] not converged after {} doublings",
                opts.max_doublings
            )));
        }
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let terms = std::iter::once(1.0f64).chain(std::iter::repeat_n(1e-16, 10_000));
        assert_relative_eq!(compensated_sum(terms), 1.0 + 1e-12, max_relative = 1e-15);
    }

    #[test]
    fn spd_tridiagonal_matches_dense_solution() {
        // 1D Dirichlet Laplacian, solution of -u'' = 1 on a 5-node interior
        let n = 5;
        let diag = vec![2.0f64; n];
        let off = vec![-1.0f64; n - 1];
        let rhs = vec![1.0f64; n];
        let x = solve_spd_tridiagonal(&diag, &off, &rhs).unwrap();
        // exact discrete solution: x_i = i (n + 1 - i) / 2
        for (i, xi) in x.iter().enumerate() {
            let k = (i + 1) as f64;
            assert_relative_eq!(*xi, k * (6.0 - k) / 2.0, max_relative = 1e-14);
        }
        assert!(solve_spd_tridiagonal(&[-1.0f64, 2.0], &[0.5], &[1.0, 1.0]).is_none());
    }

    #[test]
    fn general_tridiagonal_agrees_with_spd_path() {
        let diag = vec![4.0f64, 5.0, 6.0, 7.0];
        let off = vec![1.0f64, -2.0, 0.5];
        let rhs = vec![1.0f64, 2.0, 3.0, 4.0];
        let a = solve_spd_tridiagonal(&diag, &off, &rhs).unwrap();
        let b = solve_tridiagonal(&off, &diag, &off, &rhs).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_relative_eq!(x, y, max_relative = 1e-14);
        }
    }

    #[test]
    fn simpson_integrates_kinked_power() {
        let opts = QuadratureOptions::with_points(512);
        let alpha = 0.3f64;
        let v = integrate(|x: f64| (x - alpha).abs().powf(1.5), &[0.0, alpha, 1.0], opts).unwrap();
        let exact = (alpha.powf(2.5) + (1.0 - alpha).powf(2.5)) / 2.5;
        assert_relative_eq!(v, exact, max_relative = 1e-9);
    }

    #[test]
    fn simpson_rejects_bad_ranges() {
        let opts = QuadratureOptions::<f64>::with_points(64);
        assert!(integrate(|x| x, &[1.0], opts).is_err());
        assert!(integrate(|x| x, &[1.0, 0.0], opts).is_err());
        assert!(integrate(|_| f64::NAN, &[0.0, 1.0], opts).is_err());
    }
}
