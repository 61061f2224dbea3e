//! Closed-form lower and upper bounds for `λ_{1,p}`.
//!
//! Lower bounds come from a sub-solution `f` with `Δ_{p₁} f − C|∇f|^{p₂} ≥ D`
//! ([`lower_bound_t11`]) and its specializations to domains whose distance
//! function has `Δr ≥ k` ([`lower_bound_t12`], [`lower_bound_c13`],
//! [`lower_bound_c31`]) or to manifolds with a gradient-controlled
//! eigenfunction ([`lower_bound_t22`], [`lower_bound_c23`]). Upper bounds
//! are Rayleigh quotients of explicit test functions
//! ([`upper_bound_l42`], [`upper_bound_ex52`], [`upper_bound_ex53`]).
//! [`bracket_t14`] gives the two-term large-radius expansions.

use crate::error::{ensure, Error, Result};
use crate::geometry::max_inscribed_radius;
use crate::numeric::compensated_sum;
use crate::scalar::Real;
use crate::testfn::{quotient_cylinder, quotient_hyperbolic_ball, CylinderKind, DEFAULT_QUAD_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

/// Which estimate produced a [`BoundValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremTag {
    T11,
    T12,
    T22,
    C13,
    C23,
    C31Lower,
    L42Upper,
    T14Lower,
    T14Upper,
    Ex52Upper,
    Ex53Upper,
}

impl TheoremTag {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremTag::T11 => "T11",
            TheoremTag::T12 => "T12",
            TheoremTag::T22 => "T22",
            TheoremTag::C13 => "C13",
            TheoremTag::C23 => "C23",
            TheoremTag::C31Lower => "C31_lower",
            TheoremTag::L42Upper => "L42_upper",
            TheoremTag::T14Lower => "T14_lower",
            TheoremTag::T14Upper => "T14_upper",
            TheoremTag::Ex52Upper => "EX52_upper",
            TheoremTag::Ex53Upper => "EX53_upper",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue<T> {
    pub value: T,
    pub kind: BoundKind,
    pub theorem_tag: TheoremTag,
}

impl<T: Real> BoundValue<T> {
    fn new(value: T, kind: BoundKind, theorem_tag: TheoremTag) -> Result<Self> {
        if !(value >= T::zero()) || !value.is_finite() {
            return Err(Error::domain(format!(
                "{} evaluates to {value}, outside [0, ∞)",
                theorem_tag.as_str()
            )));
        }
        Ok(Self {
            value,
            kind,
            theorem_tag,
        })
    }
}

/// An exponent `p` and its conjugate `q = p/(p − 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PParams<T> {
    pub p: T,
    pub q_conj: T,
}

impl<T: Real> PParams<T> {
    pub fn new(p: T) -> Result<Self> {
        check_p(p)?;
        Ok(Self {
            p,
            q_conj: p / (p - T::one()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm11Params<T> {
    pub p1: T,
    pub p2: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> Thm11Params<T> {
    pub fn new(p1: T, p2: T, c: T, d: T) -> Result<Self> {
        let params = Self { p1, p2, c, d };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<()> {
        ensure(self.p1 > T::one() && self.p1.is_finite(), || {
            format!("p1 must exceed 1, got {}", self.p1)
        })?;
        ensure(self.p2 > self.p1 - T::one() && self.p2.is_finite(), || {
            format!("p2 must exceed p1 − 1, got p1 = {}, p2 = {}", self.p1, self.p2)
        })?;
        ensure(self.c > T::zero() && self.c.is_finite(), || {
            format!("C must be positive, got {}", self.c)
        })?;
        ensure(self.d > T::zero() && self.d.is_finite(), || {
            format!("D must be positive, got {}", self.d)
        })
    }

    /// `p = p₂/(p₂ − p₁ + 1)`.
    pub fn p(&self) -> T {
        self.p2 / (self.p2 - self.p1 + T::one())
    }
}

/// Dimension `n` (the manifold has dimension `n + 1`), divergence or
/// mean-curvature bound `k`, radius `R` and curvature scale `κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainParams<T> {
    pub n: u32,
    pub k: T,
    pub radius: T,
    pub kappa: T,
}

impl<T: Real> DomainParams<T> {
    pub fn new(n: u32, k: T, radius: T, kappa: T) -> Result<Self> {
        let d = Self { n, k, radius, kappa };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        ensure(self.n >= 1, || "n must be at least 1".into())?;
        ensure(self.k > T::zero() && self.k.is_finite(), || {
            format!("k must be positive, got {}", self.k)
        })?;
        ensure(self.radius > T::zero(), || {
            format!("R must be positive, got {}", self.radius)
        })?;
        ensure(self.kappa > T::zero() && self.kappa.is_finite(), || {
            format!("kappa must be positive, got {}", self.kappa)
        })
    }
}

fn check_p<T: Real>(p: T) -> Result<()> {
    ensure(p > T::one() && p.is_finite(), || format!("p must exceed 1, got {p}"))
}

fn check_radius<T: Real>(radius: T) -> Result<()> {
    ensure(radius > T::zero(), || format!("R must be positive, got {radius}"))
}

fn nf<T: Real>(n: u32) -> T {
    T::lit(f64::from(n))
}

fn min_exponent<T: Real>(p: T) -> T {
    (p - T::one()).min(T::one())
}

/// `(C/(p − 1))^{p−1}·D` with `p = p₂/(p₂ − p₁ + 1)`.
pub fn lower_bound_t11<T: Real>(params: Thm11Params<T>) -> Result<BoundValue<T>> {
    params.validate()?;
    let p = params.p();
    let pm1 = p - T::one();
    BoundValue::new((params.c / pm1).powf(pm1) * params.d, BoundKind::Lower, TheoremTag::T11)
}

/// `b^p / (p^p a^{p(q−1)})`.
pub fn lower_bound_t22<T: Real>(a: T, b: T, q: T, p: T) -> Result<BoundValue<T>> {
    ensure(a > T::zero() && a.is_finite(), || {
        format!("a must be positive, got {a}")
    })?;
    ensure(b > T::zero() && b.is_finite(), || {
        format!("b must be positive, got {b}")
    })?;
    ensure(q > T::one() && q.is_finite(), || format!("q must exceed 1, got {q}"))?;
    check_p(p)?;
    let value = (b / p).powf(p) / a.powf(p * (q - T::one()));
    BoundValue::new(value, BoundKind::Lower, TheoremTag::T22)
}

/// `(k/p)^p (1 + π²/(1 + kR/p)²)^{min(p−1,1)}`.
pub fn lower_bound_t12<T: Real>(d: DomainParams<T>, p: T) -> Result<BoundValue<T>> {
    d.validate()?;
    check_p(p)?;
    BoundValue::new(t12_value(d.k, p, d.radius), BoundKind::Lower, TheoremTag::T12)
}

fn t12_value<T: Real>(k: T, p: T, radius: T) -> T {
    let kp = k / p;
    let denom = T::one() + kp * radius;
    let tail = if denom.is_finite() {
        T::PI() * T::PI() / (denom * denom)
    } else {
        T::zero()
    };
    kp.powf(p) * (T::one() + tail).powf(min_exponent(p))
}

/// Domain with `Ric ≥ −n` and boundary mean curvature `≥ k ≥ n`: the
/// [`lower_bound_t12`] value with `R` the inscribed radius, which must stay
/// below `arccoth(k/n)`.
pub fn lower_bound_c13<T: Real>(d: DomainParams<T>, p: T) -> Result<BoundValue<T>> {
    d.validate()?;
    check_p(p)?;
    let cap = max_inscribed_radius(d.n, d.k)?;
    ensure(d.radius < cap, || {
        format!("inscribed radius {} must be below arccoth(k/n) = {cap}", d.radius)
    })?;
    BoundValue::new(t12_value(d.k, p, d.radius), BoundKind::Lower, TheoremTag::C13)
}

/// Balls under sectional curvature `≤ −κ²`:
/// `(nκ/p)^p coth^p(κR) [1 + π²/(1 + (nκ/p) R coth κR)²]^{min(p−1,1)}`.
pub fn lower_bound_c31<T: Real>(d: DomainParams<T>, p: T) -> Result<BoundValue<T>> {
    d.validate()?;
    check_p(p)?;
    let k = nf::<T>(d.n) * d.kappa / (d.kappa * d.radius).tanh();
    BoundValue::new(t12_value(k, p, d.radius), BoundKind::Lower, TheoremTag::C31Lower)
}

/// Largest positive root of `g(y) = (p − 1)y^p − n y^{p−1} + λ_q`.
///
/// `g` decreases on `(0, n/p]` and increases on `[n/p, ∞)` with
/// `g(n/p) = λ_q − (n/p)^p`, so the root is bracketed by bisection on
/// `[n/p, y_hi]` with `y_hi` doubled until `g(y_hi) > 0`.
pub fn largest_root_c23<T: Real>(n: u32, p: T, lambda_q: T) -> Result<T> {
    ensure(n >= 1, || "n must be at least 1".into())?;
    check_p(p)?;
    ensure(lambda_q >= T::zero() && lambda_q.is_finite(), || {
        format!("lambda_q must be nonnegative, got {lambda_q}")
    })?;
    let n_t = nf::<T>(n);
    let pm1 = p - T::one();
    let g = |y: T| y.powf(pm1) * (pm1 * y - n_t) + lambda_q;
    let y0 = n_t / p;
    let threshold = y0.powf(p);
    let slack = T::lit(64.0) * T::epsilon() * threshold.max(lambda_q);
    let g0 = lambda_q - threshold;
    if g0 > slack {
        return Err(Error::NoRealRoot {
            lambda_q: lambda_q.as_f64(),
            threshold: threshold.as_f64(),
        });
    }
    if g0 >= -slack {
        // double root at the minimum
        return Ok(y0);
    }
    let mut lo = y0;
    let mut hi = y0 * T::lit(2.0);
    while g(hi) <= T::zero() {
        lo = hi;
        hi *= T::lit(2.0);
        if !hi.is_finite() {
            return Err(Error::domain("root bracket overflowed"));
        }
    }
    let width = T::lit(1e-13) * hi;
    for _ in 0..400 {
        if hi - lo <= width {
            break;
        }
        let mid = T::lit(0.5) * (lo + hi);
        if g(mid) > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(T::lit(0.5) * (lo + hi))
}

/// `(λ_q / (y^{q−1} p))^p` with `y` from [`largest_root_c23`].
pub fn lower_bound_c23<T: Real>(n: u32, p: T, q: T, lambda_q: T) -> Result<BoundValue<T>> {
    ensure(q > T::one() && q.is_finite(), || format!("q must exceed 1, got {q}"))?;
    ensure(lambda_q > T::zero(), || {
        format!("lambda_q must be positive, got {lambda_q}")
    })?;
    let y = largest_root_c23(n, p, lambda_q)?;
    BoundValue::new(
        (lambda_q / (y.powf(q - T::one()) * p)).powf(p),
        BoundKind::Lower,
        TheoremTag::C23,
    )
}

/// Rayleigh quotient of `e^{−nr/p} sin(πr/R)` on the hyperbolic ball of
/// radius `R ≥ 1`, by quadrature.
pub fn upper_bound_l42<T: Real>(n: u32, p: T, radius: T) -> Result<BoundValue<T>> {
    upper_bound_l42_with(n, p, radius, DEFAULT_QUAD_POINTS)
}

pub fn upper_bound_l42_with<T: Real>(n: u32, p: T, radius: T, quad_points: usize) -> Result<BoundValue<T>> {
    let q = quotient_hyperbolic_ball(n, p, radius, quad_points)?;
    BoundValue::new(q.value, BoundKind::Upper, TheoremTag::L42Upper)
}

/// Two-term expansions `(n/p)^p + (n/p)^{p−2} c π²/R²` with
/// `c = min(p − 1, 1)` (lower) and `c = p/2` (upper).
pub fn bracket_t14<T: Real>(n: u32, p: T, radius: T) -> Result<(BoundValue<T>, BoundValue<T>)> {
    ensure(n >= 2, || format!("n must be at least 2, got {n}"))?;
    check_p(p)?;
    check_radius(radius)?;
    let lower = two_term(n, p, radius, min_exponent(p));
    let upper = two_term(n, p, radius, T::lit(0.5) * p);
    Ok((
        BoundValue::new(lower, BoundKind::Lower, TheoremTag::T14Lower)?,
        BoundValue::new(upper, BoundKind::Upper, TheoremTag::T14Upper)?,
    ))
}

fn two_term<T: Real>(n: u32, p: T, radius: T, coefficient: T) -> T {
    let np = nf::<T>(n) / p;
    let lead = np.powf(p);
    let second = np.powf(p - T::lit(2.0)) * coefficient * T::PI() * T::PI() / (radius * radius);
    compensated_sum([lead, second])
}

/// Exact quotient of `e^{−nt/p} cos(πt/2R)` on `[−R, R] × N` with metric
/// `dt² + e^{2t} g_N`: `(n²/p² + π²/(4R²))^{p/2}`.
pub fn upper_bound_ex52<T: Real>(n: u32, p: T, radius: T) -> Result<BoundValue<T>> {
    ensure(n >= 2, || format!("n must be at least 2, got {n}"))?;
    check_p(p)?;
    check_radius(radius)?;
    let np = nf::<T>(n) / p;
    let b = T::FRAC_PI_2() / radius;
    BoundValue::new(
        (np * np + b * b).powf(T::lit(0.5) * p),
        BoundKind::Upper,
        TheoremTag::Ex52Upper,
    )
}

/// Quotient of `cosh^{−2/p}(t) cos(πt/2R)` on `[−R, R] × N` with metric
/// `dt² + cosh²(t) g_N`, `dim N = 2`, by quadrature (`R ≥ 1`).
pub fn upper_bound_ex53<T: Real>(p: T, radius: T) -> Result<BoundValue<T>> {
    let value = quotient_cylinder(CylinderKind::Cosh, 2, p, radius, DEFAULT_QUAD_POINTS)?;
    BoundValue::new(value, BoundKind::Upper, TheoremTag::Ex53Upper)
}

/// True iff `min(p − 1, 1) > p/8`, i.e. `p ∈ (8/7, 8)`.
pub fn ends_criterion_p15<T: Real>(p: T) -> bool {
    p > T::one() && min_exponent(p) > p / T::lit(8.0)
}

/// `p λ^{1/p}`, nondecreasing in `p` on a fixed domain.
pub fn cheeger_monotone_value<T: Real>(p: T, lambda_p: T) -> Result<T> {
    check_p(p)?;
    ensure(lambda_p > T::zero() && lambda_p.is_finite(), || {
        format!("lambda must be positive, got {lambda_p}")
    })?;
    Ok(p * lambda_p.powf(T::one() / p))
}
