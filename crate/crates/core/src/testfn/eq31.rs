use crate::error::{ensure, Error, Result};
use crate::scalar::Real;

use super::{InequalityReport, TestFunctionSpec, TestFunctionTag};

/// Default angle cutoff `ε`.
pub const DEFAULT_EPS: f64 = 1e-2;
/// Default number of uniform sample points for pointwise checks.
pub const DEFAULT_GRID: usize = 10_000;
/// Margin tolerance of the pointwise checks.
const MARGIN_TOL: f64 = 1e-9;

/// `(f, ḟ, f̈)` at `r` for the logarithmic sub-solution.
pub fn eval_f_eq31<T: Real>(spec: &TestFunctionSpec<T>, r: T) -> Result<(T, T, T)> {
    ensure(spec.tag == TestFunctionTag::Eq31, || {
        format!("expected an Eq31 spec, got {:?}", spec.tag)
    })?;
    let slack = T::lit(1e-12) * spec.radius.max(T::one());
    ensure(r >= -slack && r <= spec.radius + slack, || {
        format!("r = {r} outside [0, {}]", spec.radius)
    })?;
    let c = spec.p / spec.k;
    let a = spec.a();
    let theta = a * (r + c);
    let s = theta.sin();
    ensure(s > T::zero(), || {
        format!("sin a(r + p/k) = {s} is not positive at r = {r}")
    })?;
    let f = r - c * s.ln();
    let f_dot = T::one() - c * a * theta.cos() / s;
    let f_ddot = c * a * a / (s * s);
    Ok((f, f_dot, f_ddot))
}

fn check_c<T: Real>(c: T) -> Result<()> {
    ensure(c > T::zero() && c.is_finite(), || {
        format!("C must be positive, got {c}")
    })
}

/// `1 + p²a²/k²`.
fn bracket<T: Real>(spec: &TestFunctionSpec<T>) -> T {
    let pa_k = spec.p * spec.a() / spec.k;
    T::one() + pa_k * pa_k
}

/// Uniform grid on `[0, R]` plus the radii where `ḟ` equals `target`.
fn sample_points<T: Real>(spec: &TestFunctionSpec<T>, grid_size: usize, target: T) -> Vec<T> {
    let m = grid_size.max(2);
    let mut pts: Vec<T> = (0..m)
        .map(|i| spec.radius * T::from_usize_lossy(i) / T::from_usize_lossy(m - 1))
        .collect();
    // ḟ(r) = target ⇔ cot θ = (1 − target) k/(p a), θ ∈ (0, π)
    let a = spec.a();
    let c = spec.p / spec.k;
    let cot = (T::one() - target) / (c * a);
    let theta = T::FRAC_PI_2() - cot.atan();
    let r = theta / a - c;
    if r >= T::zero() && r <= spec.radius {
        pts.push(r);
    }
    pts
}

/// Case `1 < p ≤ 2`: checks `Δ_p f − C ḟ^p ≥ D` pointwise with `Δr = k`,
/// `Δ_p f = k ḟ^{p−1} + (p − 1) ḟ^{p−2} f̈` and
/// `D = (k/p)(1 + p²a²/k²)^{p−1}`. The scalar minimization behind the
/// constant is checked too (see [`scalar_check_case1`]); the report passes
/// only if both hold.
pub fn verify_case1_inequality<T: Real>(
    spec: &TestFunctionSpec<T>,
    c: T,
    grid_size: usize,
) -> Result<InequalityReport<T>> {
    ensure(spec.tag == TestFunctionTag::Eq31, || "case 1 needs an Eq31 spec".into())?;
    ensure(spec.p <= T::lit(2.0), || format!("case 1 needs p ≤ 2, got {}", spec.p))?;
    check_c(c)?;
    let (p, k) = (spec.p, spec.k);
    let pm1 = p - T::one();
    let d = k / p * bracket(spec).powf(pm1);
    let m = pm1 * bracket(spec);
    let mut margins = Vec::new();
    for r in sample_points(spec, grid_size, m / pm1) {
        let (_, fd, fdd) = eval_f_eq31(spec, r)?;
        let lap = k * fd.powf(pm1) + pm1 * fd.powf(p - T::lit(2.0)) * fdd;
        margins.push((r, lap - c * fd.powf(p) - d));
    }
    let mut report = InequalityReport::from_margins(margins, grid_size, T::lit(MARGIN_TOL));
    report.passed &= scalar_check_case1(p, m, grid_size)?.passed;
    Ok(report)
}

/// Case `p ≥ 2`: checks `Δf − C ḟ^{p₂} ≥ (k/p)(1 + p²a²/k²)` pointwise with
/// `Δf = k ḟ + f̈` and `p₂ = 1/(p − 1) + 1`, together with the scalar
/// inequality of [`scalar_check_case2`].
pub fn verify_case2_inequality<T: Real>(
    spec: &TestFunctionSpec<T>,
    c: T,
    grid_size: usize,
) -> Result<InequalityReport<T>> {
    ensure(spec.tag == TestFunctionTag::Eq31, || "case 2 needs an Eq31 spec".into())?;
    ensure(spec.p >= T::lit(2.0), || format!("case 2 needs p ≥ 2, got {}", spec.p))?;
    check_c(c)?;
    let (p, k) = (spec.p, spec.k);
    let p2 = T::one() / (p - T::one()) + T::one();
    let rhs = k / p * bracket(spec);
    let mut margins = Vec::new();
    for r in sample_points(spec, grid_size, T::one()) {
        let (_, fd, fdd) = eval_f_eq31(spec, r)?;
        margins.push((r, k * fd + fdd - c * fd.powf(p2) - rhs));
    }
    let mut report = InequalityReport::from_margins(margins, grid_size, T::lit(MARGIN_TOL));
    report.passed &= scalar_check_case2(p, k, grid_size)?.passed;
    Ok(report)
}

/// Checks that `h(x) = x^{p−2}((2 − p)x + m)` has its minimum over `x > 0`
/// at `x* = m/(p − 1)`: the margin is `h(x) − h(x*)` on a log grid
/// spanning `x*·[1e-6, 1e6]`.
pub fn scalar_check_case1<T: Real>(p: T, m: T, grid_size: usize) -> Result<InequalityReport<T>> {
    ensure(p > T::one() && p <= T::lit(2.0), || {
        format!("case 1 needs p in (1, 2], got {p}")
    })?;
    ensure(m > T::zero(), || format!("m must be positive, got {m}"))?;
    let h = |x: T| x.powf(p - T::lit(2.0)) * ((T::lit(2.0) - p) * x + m);
    let star = m / (p - T::one());
    let h_star = h(star);
    let tol = T::lit(1e-12) * h_star.abs().max(T::one());
    let pts = log_grid(star * T::lit(1e-6), star * T::lit(1e6), grid_size)
        .into_iter()
        .chain(std::iter::once(star));
    Ok(InequalityReport::from_margins(
        pts.map(|x| (x, h(x) - h_star)),
        grid_size,
        tol,
    ))
}

/// Checks `x² + (p − 2)x − (p − 1)x^{1/(p−1)+1} ≥ 0` on a log grid over
/// `(0, 1 + p/k]` including the equality point `x = 1`.
pub fn scalar_check_case2<T: Real>(p: T, k: T, grid_size: usize) -> Result<InequalityReport<T>> {
    ensure(p >= T::lit(2.0), || format!("case 2 needs p ≥ 2, got {p}"))?;
    ensure(k > T::zero(), || format!("k must be positive, got {k}"))?;
    let q = T::one() / (p - T::one()) + T::one();
    let h = |x: T| x * x + (p - T::lit(2.0)) * x - (p - T::one()) * x.powf(q);
    let hi = T::one() + p / k;
    let pts = log_grid(hi * T::lit(1e-8), hi, grid_size)
        .into_iter()
        .chain(std::iter::once(T::one()));
    Ok(InequalityReport::from_margins(
        pts.map(|x| (x, h(x))),
        grid_size,
        T::lit(1e-12) * hi * hi,
    ))
}

fn log_grid<T: Real>(lo: T, hi: T, size: usize) -> Vec<T> {
    let m = size.max(2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..m)
        .map(|i| (a + (b - a) * T::from_usize_lossy(i) / T::from_usize_lossy(m - 1)).exp())
        .collect()
}

/// Lower bound implied by the certificate at finite `ε`:
/// `(C/(p−1))^{p−1}·D` with `C = (p − 1)k/p`, i.e.
/// `(k/p)^p (1 + p²a²/k²)^{p−1}` for `p ≤ 2` and `(k/p)^p (1 + p²a²/k²)`
/// for `p ≥ 2`.
pub fn implied_lower_bound<T: Real>(spec: &TestFunctionSpec<T>) -> Result<T> {
    ensure(spec.tag == TestFunctionTag::Eq31, || {
        "implied bound needs an Eq31 spec".into()
    })?;
    let (p, k) = (spec.p, spec.k);
    let pm1 = p - T::one();
    let c = pm1 * k / p;
    let d = if p <= T::lit(2.0) {
        k / p * bracket(spec).powf(pm1)
    } else {
        k / p * bracket(spec)
    };
    Ok((c / pm1).powf(pm1) * d)
}

/// Implied bounds along a decreasing sequence of cutoffs and their
/// polynomial extrapolation to `ε = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSweep<T> {
    pub eps: Vec<T>,
    pub values: Vec<T>,
    /// Certificate reports, one per cutoff.
    pub reports: Vec<InequalityReport<T>>,
    pub extrapolated: T,
}

/// Runs the certificate for every cutoff in `eps` and extrapolates the
/// implied bound to `ε → 0` (Neville's scheme at 0).
pub fn epsilon_sweep<T: Real>(p: T, k: T, radius: T, eps: &[T], grid_size: usize) -> Result<EpsilonSweep<T>> {
    ensure(eps.len() >= 2, || "need at least two cutoffs".into())?;
    let mut values = Vec::with_capacity(eps.len());
    let mut reports = Vec::with_capacity(eps.len());
    for &e in eps {
        let spec = TestFunctionSpec::eq31(p, k, radius, e)?;
        let c = (p - T::one()) * k / p;
        let report = if p <= T::lit(2.0) {
            verify_case1_inequality(&spec, c, grid_size)?
        } else {
            verify_case2_inequality(&spec, c, grid_size)?
        };
        reports.push(report);
        values.push(implied_lower_bound(&spec)?);
    }
    let mut table = values.clone();
    let n = eps.len();
    for level in 1..n {
        for i in 0..n - level {
            let (x0, x1) = (eps[i], eps[i + level]);
            if x0 == x1 {
                return Err(Error::domain("cutoffs must be distinct"));
            }
            table[i] = (x0 * table[i + 1] - x1 * table[i]) / (x0 - x1);
        }
    }
    Ok(EpsilonSweep {
        eps: eps.to_vec(),
        values,
        reports,
        extrapolated: table[0],
    })
}
