use crate::error::{ensure, Result};
use crate::scalar::Real;

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma<T: Real>(x: T) -> Result<T> {
    ensure(x > T::zero() && x.is_finite(), || {
        format!("ln_gamma needs x > 0, got {x}")
    })?;
    Ok(ln_gamma_pos(x))
}

fn ln_gamma_pos<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // reflection: Γ(x)Γ(1 − x) = π / sin(πx)
        return (T::PI() / (T::PI() * x).sin()).ln() - ln_gamma_pos(T::one() - x);
    }
    let z = x - T::one();
    let mut acc = T::lit(LANCZOS[0]);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += T::lit(*c) / (z + T::from_usize_lossy(i));
    }
    let t = z + T::lit(LANCZOS_G) + half;
    half * (T::lit(2.0) * T::PI()).ln() + (z + half) * t.ln() - t + acc.ln()
}

/// `Γ(x)` for `x > 0`.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    ensure(x > T::zero() && x.is_finite(), || format!("gamma needs x > 0, got {x}"))?;
    if x == x.round() && x <= T::lit(20.0) {
        // exact factorial
        let mut acc = T::one();
        let mut k = T::lit(2.0);
        while k < x {
            acc *= k;
            k += T::one();
        }
        return Ok(acc);
    }
    Ok(ln_gamma_pos(x).exp())
}

/// `B(x, y) = Γ(x)Γ(y)/Γ(x + y)`.
pub fn beta<T: Real>(x: T, y: T) -> Result<T> {
    ensure(x > T::zero() && y > T::zero() && x.is_finite() && y.is_finite(), || {
        format!("beta needs x, y > 0, got ({x}, {y})")
    })?;
    Ok((ln_gamma_pos(x) + ln_gamma_pos(y) - ln_gamma_pos(x + y)).exp())
}

/// `(Γ(x), B(x, y))`.
pub fn special_functions<T: Real>(x: T, y: T) -> Result<(T, T)> {
    Ok((gamma(x)?, beta(x, y)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn factorials_and_half_integers() {
        assert_eq!(gamma(1.0f64).unwrap(), 1.0);
        assert_eq!(gamma(5.0f64).unwrap(), 24.0);
        assert_relative_eq!(gamma(0.5f64).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(2.5f64).unwrap(), 0.75 * PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(30.0f64).unwrap(), 8.841_761_993_739_701e30, max_relative = 1e-13);
    }

    #[test]
    fn beta_at_half_integers() {
        assert_relative_eq!(beta(1.5f64, 0.5).unwrap(), PI / 2.0, max_relative = 1e-14);
        assert_relative_eq!(beta(1.0f64, 1.0).unwrap(), 1.0, max_relative = 1e-14);
        let (g, b) = special_functions(3.0f64, 2.0).unwrap();
        assert_eq!(g, 2.0);
        assert_relative_eq!(b, 1.0 / 12.0, max_relative = 1e-14);
    }

    #[test]
    fn rejects_nonpositive_arguments() {
        assert!(gamma(0.0f64).is_err());
        assert!(beta(1.0f64, -1.0).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn single_precision() {
        assert_relative_eq!(gamma(4.5f32).unwrap(), 11.631_728, max_relative = 1e-5);
    }
}
