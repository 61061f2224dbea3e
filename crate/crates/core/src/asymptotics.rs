//! Large-radius expansions `λ(R) ≈ A + B/R² + C/R³`: least-squares fits of
//! sampled eigenvalues and the coefficients predicted by the bounds.

use crate::error::{ensure, Error, Result};
use crate::scalar::Real;

/// Default fitting window `[R_min, R_max]`.
pub const DEFAULT_WINDOW: (f64, f64) = (10.0, 30.0);

const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// `A + B/R²`
    AB,
    /// `A + B/R² + C/R³`
    ABC,
}

impl FitModel {
    pub fn coefficients(self) -> usize {
        match self {
            FitModel::AB => 2,
            FitModel::ABC => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticFit<T> {
    pub a: T,
    pub b: T,
    /// Zero for [`FitModel::AB`].
    pub c: T,
    /// Unweighted root-mean-square residual.
    pub residual_rms: T,
    pub r_range: (T, T),
    pub model: FitModel,
}

impl<T: Real> AsymptoticFit<T> {
    pub fn predict(&self, radius: T) -> T {
        let r2 = T::one() / (radius * radius);
        self.a + self.b * r2 + self.c * r2 / radius
    }
}

/// Which expansion supplies the expected `(A, B)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExpansionSource<T> {
    T14Lower,
    T14Upper,
    Ex52,
    /// Always in dimension `n = 2`; the `n` argument is ignored.
    Ex53,
    C31Lower {
        kappa: T,
    },
}

/// Weighted least squares (weights `R²`) in the basis `{1, R⁻², R⁻³}` by
/// normal equations with column equilibration.
pub fn fit_expansion<T: Real>(samples: &[(T, T)], model: FitModel) -> Result<AsymptoticFit<T>> {
    let m = model.coefficients();
    ensure(samples.len() >= 4 && samples.len() > m, || {
        format!("need at least 4 samples, got {}", samples.len())
    })?;
    for (i, &(r, l)) in samples.iter().enumerate() {
        ensure(r >= T::lit(5.0) && r.is_finite(), || {
            format!("R must be at least 5, got {r}")
        })?;
        ensure(l.is_finite(), || format!("lambda at R = {r} is not finite"))?;
        ensure(samples[..i].iter().all(|&(s, _)| s != r), || {
            format!("R = {r} is repeated")
        })?;
    }
    let basis = |r: T| {
        let r2 = T::one() / (r * r);
        [T::one(), r2, r2 / r]
    };
    let mut ata = [[T::zero(); 3]; 3];
    let mut atb = [T::zero(); 3];
    for &(r, l) in samples {
        let w = r * r;
        let phi = basis(r);
        for i in 0..m {
            atb[i] += w * phi[i] * l;
            for j in 0..m {
                ata[i][j] += w * phi[i] * phi[j];
            }
        }
    }
    let scale: Vec<T> = (0..m).map(|i| T::one() / ata[i][i].sqrt()).collect();
    let mut eq = [[T::zero(); 3]; 3];
    for i in 0..m {
        for j in 0..m {
            eq[i][j] = ata[i][j] * scale[i] * scale[j];
        }
    }
    let eig = jacobi_eigenvalues(eq, m);
    let hi = eig.iter().copied().fold(T::zero(), T::max);
    let lo = eig.iter().copied().fold(T::infinity(), T::min);
    let condition = if lo > T::zero() { hi / lo } else { T::infinity() };
    if !(condition <= T::lit(MAX_CONDITION)) {
        return Err(Error::SingularFit {
            condition: condition.as_f64(),
        });
    }
    let rhs: Vec<T> = (0..m).map(|i| atb[i] * scale[i]).collect();
    let y = solve_dense(eq, &rhs, m).ok_or(Error::SingularFit {
        condition: f64::INFINITY,
    })?;
    let mut coef = [T::zero(); 3];
    for i in 0..m {
        coef[i] = y[i] * scale[i];
    }
    let mut sq = T::zero();
    for &(r, l) in samples {
        let phi = basis(r);
        let res = l - (coef[0] * phi[0] + coef[1] * phi[1] + coef[2] * phi[2]);
        sq += res * res;
    }
    let (rmin, rmax) = samples
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(a, b), &(r, _)| {
            (a.min(r), b.max(r))
        });
    Ok(AsymptoticFit {
        a: coef[0],
        b: coef[1],
        c: coef[2],
        residual_rms: (sq / T::from_usize_lossy(samples.len())).sqrt(),
        r_range: (rmin, rmax),
        model,
    })
}

/// Cyclic Jacobi on the leading `m × m` block of a symmetric matrix.
#[allow(clippy::needless_range_loop)]
fn jacobi_eigenvalues<T: Real>(mut a: [[T; 3]; 3], m: usize) -> Vec<T> {
    for _ in 0..64 {
        let mut off = T::zero();
        for i in 0..m {
            for j in i + 1..m {
                off += a[i][j] * a[i][j];
            }
        }
        if off <= T::epsilon() * T::epsilon() {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::lit(2.0) * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..m).map(|i| a[i][i]).collect()
}

/// Gaussian elimination with partial pivoting on the leading `m × m` block.
#[allow(clippy::needless_range_loop)]
fn solve_dense<T: Real>(mut a: [[T; 3]; 3], rhs: &[T], m: usize) -> Option<Vec<T>> {
    let mut b = rhs.to_vec();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))?;
        if a[piv][col] == T::zero() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            for k in col..m {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![T::zero(); m];
    for i in (0..m).rev() {
        let mut acc = b[i];
        for k in i + 1..m {
            acc -= a[i][k] * x[k];
        }
        x[i] = acc / a[i][i];
    }
    Some(x)
}

/// Leading pair `(A, B)` of `A + B/R²` predicted by each expansion.
pub fn expected_coefficients<T: Real>(n: u32, p: T, source: ExpansionSource<T>) -> Result<(T, T)> {
    ensure(n >= 2, || format!("n must be at least 2, got {n}"))?;
    ensure(p > T::one() && p.is_finite(), || format!("p must exceed 1, got {p}"))?;
    let nf = T::lit(f64::from(n));
    let pi2 = T::PI() * T::PI();
    let pair = |base: T, c: T| (base.powf(p), base.powf(p - T::lit(2.0)) * c * pi2);
    let gap = (p - T::one()).min(T::one());
    let eighth = p / T::lit(8.0);
    Ok(match source {
        ExpansionSource::T14Lower => pair(nf / p, gap),
        ExpansionSource::T14Upper => pair(nf / p, T::lit(0.5) * p),
        ExpansionSource::Ex52 => pair(nf / p, eighth),
        ExpansionSource::Ex53 => pair(T::lit(2.0) / p, eighth),
        ExpansionSource::C31Lower { kappa } => {
            ensure(kappa > T::zero() && kappa.is_finite(), || {
                format!("kappa must be positive, got {kappa}")
            })?;
            pair(nf * kappa / p, gap)
        }
    })
}
