use crate::error::{ensure, Result};
use crate::numeric::{integrate, QuadratureOptions};
use crate::scalar::Real;

use super::special::{beta, gamma};

pub const DEFAULT_QUAD_POINTS: usize = 8192;
pub const MIN_QUAD_POINTS: usize = 4096;

/// Upper-bound quotient of `e^{−nr/p} sin(πr/R)` on a hyperbolic ball,
/// after the substitution `θ = πr/R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicQuotient<T> {
    /// `∫₀^π (1 − e^{−2Rθ/π})^n |sin(θ − α)|^p dθ`
    pub f: T,
    /// `∫₀^π (1 − e^{−2Rθ/π})^n sin^p θ dθ`
    pub g: T,
    /// `(n²/p² + π²/R²)^{p/2} F/G`
    pub value: T,
    /// `sin α = (π/R)(n²/p² + π²/R²)^{−½}`
    pub alpha: T,
    /// `∫₀^π sin^p θ dθ = B((p + 1)/2, ½)`, the common limit of `F` and `G`.
    pub sine_integral: T,
    /// `G` deficit `∫₀^π (1 − (1 − e^{−2Rθ/π})^n) sin^p θ dθ`.
    pub deficit: T,
    /// `C(n, p) = n Γ(p + 1) (π/2)^{1+p}`, so that `deficit ≤ C/R^{1+p}`.
    pub deficit_constant: T,
    /// `F ≤ ∫₀^π |sin(θ − α)|^p dθ`
    pub f_bound_holds: bool,
    /// `G ≥ ∫₀^π sin^p θ dθ − C/R^{1+p}`
    pub g_bound_holds: bool,
}

fn check_inputs<T: Real>(n: u32, p: T, radius: T, quad_points: usize) -> Result<()> {
    ensure(n >= 1, || "n must be at least 1".into())?;
    ensure(p > T::one() && p.is_finite(), || format!("p must exceed 1, got {p}"))?;
    ensure(radius >= T::one() && radius.is_finite(), || {
        format!("R must be at least 1, got {radius}")
    })?;
    ensure(quad_points >= MIN_QUAD_POINTS, || {
        format!("quad_points must be at least {MIN_QUAD_POINTS}, got {quad_points}")
    })
}

/// Breakpoints on `[0, π]`: the boundary layer of `e^{−2Rθ/π}` at
/// multiples of `π/(2R)`, and any extra kinks.
fn hyperbolic_breaks<T: Real>(radius: T, extra: &[T]) -> Vec<T> {
    let scale = T::FRAC_PI_2() / radius;
    let mut b = vec![T::zero(), T::PI()];
    for j in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        let x = scale * T::lit(j);
        if x < T::PI() {
            b.push(x);
        }
    }
    b.extend(extra.iter().copied().filter(|x| *x > T::zero() && *x < T::PI()));
    b.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
    b.dedup();
    b
}

/// `(1 − e^{−2Rθ/π})^n` and `1 −` that, both without cancellation.
fn weight_and_complement<T: Real>(n: T, radius: T, theta: T) -> (T, T) {
    let x = (-T::lit(2.0) * radius * theta / T::PI()).exp();
    let log_w = n * (-x).ln_1p();
    (log_w.exp(), -log_w.exp_m1())
}

pub fn quotient_hyperbolic_ball<T: Real>(n: u32, p: T, radius: T, quad_points: usize) -> Result<HyperbolicQuotient<T>> {
    check_inputs(n, p, radius, quad_points)?;
    let nf = T::lit(f64::from(n));
    let np = nf / p;
    let pr = T::PI() / radius;
    let amp2 = np * np + pr * pr;
    let alpha = (pr / amp2.sqrt()).asin();
    let opts = QuadratureOptions::with_points(quad_points);
    let breaks = hyperbolic_breaks(radius, &[alpha]);
    let f = integrate(
        |t| weight_and_complement(nf, radius, t).0 * (t - alpha).sin().abs().powf(p),
        &breaks,
        opts,
    )?;
    let g = integrate(
        |t| weight_and_complement(nf, radius, t).0 * t.sin().abs().powf(p),
        &breaks,
        opts,
    )?;
    let deficit = g_deficit(n, p, radius, quad_points)?;
    let half = T::lit(0.5);
    let sine_integral = beta(half * (p + T::one()), half)?;
    let deficit_constant = nf * gamma(p + T::one())? * T::FRAC_PI_2().powf(T::one() + p);
    let slack = T::lit(1e-10) * sine_integral;
    Ok(HyperbolicQuotient {
        f,
        g,
        value: amp2.powf(half * p) * f / g,
        alpha,
        sine_integral,
        deficit,
        deficit_constant,
        f_bound_holds: f <= sine_integral + slack,
        g_bound_holds: g >= sine_integral - deficit_constant / radius.powf(T::one() + p) - slack,
    })
}

/// `∫₀^π (1 − (1 − e^{−2Rθ/π})^n) sin^p θ dθ`, computed directly so that
/// it stays accurate when it is far below `G`'s rounding error.
pub fn g_deficit<T: Real>(n: u32, p: T, radius: T, quad_points: usize) -> Result<T> {
    check_inputs(n, p, radius, quad_points)?;
    let nf = T::lit(f64::from(n));
    let mut opts = QuadratureOptions::with_points(quad_points);
    opts.abs_tol = T::zero();
    opts.rel_tol = T::lit(1e-10);
    // the integrand is negligible beyond ~40 boundary-layer widths
    let cut = (T::lit(40.0) * T::FRAC_PI_2() / radius).min(T::PI());
    let mut breaks: Vec<T> = hyperbolic_breaks(radius, &[])
        .into_iter()
        .filter(|x| *x <= cut)
        .collect();
    if *breaks.last().expect("nonempty") < cut {
        breaks.push(cut);
    }
    let head = integrate(
        |t| weight_and_complement(nf, radius, t).1 * t.sin().abs().powf(p),
        &breaks,
        opts,
    )?;
    if cut >= T::PI() {
        return Ok(head);
    }
    opts.rel_tol = T::lit(1e-6);
    let tail = integrate(
        |t| weight_and_complement(nf, radius, t).1 * t.sin().abs().powf(p),
        &[cut, T::PI()],
        opts,
    )?;
    Ok(head + tail)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CylinderKind {
    /// Metric `dt² + e^{2t} g_N`, weight `e^{nt}`.
    Exp,
    /// Metric `dt² + cosh²(t) g_N`, weight `cosh^n t`.
    Cosh,
}

/// Quotient of the cylinder test function on `[−R, R]`.
///
/// `Exp`: `f = e^{−nt/p} cos(πt/2R)`, whose quotient is exactly
/// `(n²/p² + π²/(4R²))^{p/2}`. `Cosh`: `f = cosh^{−n/p}(t) cos(πt/2R)`.
/// In both cases the weight cancels against `|f|^p` and the quotient is
/// `∫|(n/p)τ(t) cos x + (π/2R) sin x|^p dt / ∫cos^p x dt` with `x = πt/2R`
/// and `τ = 1` or `tanh t`.
pub fn quotient_cylinder<T: Real>(kind: CylinderKind, n: u32, p: T, radius: T, quad_points: usize) -> Result<T> {
    check_inputs(n, p, radius, quad_points)?;
    let np = T::lit(f64::from(n)) / p;
    let b = T::FRAC_PI_2() / radius;
    let opts = QuadratureOptions::with_points(quad_points);
    let den = integrate(|t| (b * t).cos().max(T::zero()).powf(p), &[-radius, radius], opts)?;
    let num = match kind {
        CylinderKind::Exp => {
            // zero of (n/p) cos x + b sin x
            let kink = -(np / b).atan() / b;
            integrate(
                |t| (np * (b * t).cos() + b * (b * t).sin()).abs().powf(p),
                &[-radius, kink, radius],
                opts,
            )?
        }
        CylinderKind::Cosh => {
            let mut breaks = vec![-radius, T::zero(), radius];
            for x in [1.0, 4.0] {
                let x = T::lit(x);
                if x < radius {
                    breaks.push(x);
                    breaks.push(-x);
                }
            }
            breaks.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
            integrate(
                |t| (np * t.tanh() * (b * t).cos() + b * (b * t).sin()).abs().powf(p),
                &breaks,
                opts,
            )?
        }
    };
    Ok(num / den)
}
