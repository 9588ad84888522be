//! The binary caterpillar `C_n`: its characteristic polynomial by recursion,
//! the Chebyshev closed form, the trigonometric equation for its spectral
//! radius, and the leading asymptotics.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::IntPolynomial;
use crate::families::Family;
use crate::spectral::{spectral_radius, SpectralError};

/// Lower end of the bisection bracket, away from the pole of `cot` at 0.
pub const BRACKET_EPS: f64 = 1e-12;
pub const MAX_BISECTIONS: usize = 200;
/// Acceptance constant for `|ρ(C_n) − (4n² − 4n)/π²|` at `n ≥ 10`.
pub const ASYMPTOTIC_SLACK: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CaterpillarError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("the closed form has a pole at x = {0}")]
    PoleArgument(BigRational),
    #[error("no sign change of the trigonometric equation for n = {0}")]
    NoSignChange(usize),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// `P_n = (2x−3)P_{n−1} − (x−1)²P_{n−2}` with `P_1 = x`, `P_2 = (x−1)²`.
pub fn caterpillar_charpoly(n: usize) -> Result<IntPolynomial, CaterpillarError> {
    if n == 0 {
        return Err(CaterpillarError::InvalidParameter("n must be at least 1".into()));
    }
    let x = IntPolynomial::linear(0);
    let sq = IntPolynomial::linear(1).pow(2);
    let a = IntPolynomial::from_i64(&[-3, 2]);
    let (mut prev, mut cur) = (x, sq.clone());
    if n == 1 {
        return Ok(prev);
    }
    for _ in 2..n {
        let next = &(&a * &cur) - &(&sq * &prev);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// `T_k(y)` and `U_k(y)` by their three-term recurrences.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevPair<V> {
    pub degree: usize,
    pub t: V,
    pub u: V,
}

pub fn chebyshev_exact(k: usize, y: &BigRational) -> ChebyshevPair<BigRational> {
    let two_y = y * BigRational::from_integer(BigInt::from(2));
    let (mut t0, mut t1) = (BigRational::one(), y.clone());
    let (mut u0, mut u1) = (BigRational::one(), two_y.clone());
    for _ in 0..k {
        let t2 = &two_y * &t1 - &t0;
        let u2 = &two_y * &u1 - &u0;
        t0 = std::mem::replace(&mut t1, t2);
        u0 = std::mem::replace(&mut u1, u2);
    }
    ChebyshevPair { degree: k, t: t0, u: u0 }
}

pub fn chebyshev_f64(k: usize, y: f64) -> ChebyshevPair<f64> {
    let (mut t0, mut t1) = (1.0, y);
    let (mut u0, mut u1) = (1.0, 2.0 * y);
    for _ in 0..k {
        let t2 = 2.0 * y * t1 - t0;
        let u2 = 2.0 * y * u1 - u0;
        t0 = std::mem::replace(&mut t1, t2);
        u0 = std::mem::replace(&mut u1, u2);
    }
    ChebyshevPair { degree: k, t: t0, u: u0 }
}

/// `(x−1)^n [ (2x/(2x−3)) T_{n−2}(y) − (3/(2x−3)) U_{n−2}(y) ]` with
/// `y = (2x−3)/(2x−2)`, evaluated exactly.
pub fn chebyshev_closed_form(n: usize, x: &BigRational) -> Result<BigRational, CaterpillarError> {
    if n < 2 {
        return Err(CaterpillarError::InvalidParameter("closed form needs n >= 2".into()));
    }
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let a = int(2) * x - int(3);
    let b = int(2) * x - int(2);
    if a.is_zero() || b.is_zero() {
        return Err(CaterpillarError::PoleArgument(x.clone()));
    }
    let ch = chebyshev_exact(n - 2, &(&a / &b));
    let bracket = (int(2) * x / &a) * ch.t - (int(3) / &a) * ch.u;
    let mut scale = BigRational::one();
    for _ in 0..n {
        scale *= x - int(1);
    }
    Ok(scale * bracket)
}

/// Exact comparison of the closed form with the recursion at a rational point.
pub fn chebyshev_form_check(n: usize, x: &BigRational) -> Result<bool, CaterpillarError> {
    let closed = chebyshev_closed_form(n, x)?;
    Ok(closed == caterpillar_charpoly(n)?.eval_rational(x))
}

/// Float comparison, relative to the size of the polynomial's terms at `x`.
pub fn chebyshev_form_check_f64(n: usize, x: f64, tol: f64) -> Result<bool, CaterpillarError> {
    if n < 2 {
        return Err(CaterpillarError::InvalidParameter("closed form needs n >= 2".into()));
    }
    let (a, b) = (2.0 * x - 3.0, 2.0 * x - 2.0);
    if a == 0.0 || b == 0.0 {
        let r = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        return Err(CaterpillarError::PoleArgument(r));
    }
    let ch = chebyshev_f64(n - 2, a / b);
    let closed = (x - 1.0).powi(n as i32) * (2.0 * x / a * ch.t - 3.0 / a * ch.u);
    let p = caterpillar_charpoly(n)?;
    let scale = p.abs_scale(x).max(1.0);
    Ok((closed - p.eval_f64(x)).abs() <= tol * scale)
}

/// Smallest positive root `t0` of `cot((n−2)t) = 3 tan(t/2)` and the
/// spectral radius `1 + 1/(4 sin²(t0/2))` it encodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigRoot {
    pub n: usize,
    pub t0: f64,
    pub rho: f64,
}

pub fn trig_spectral_radius(n: usize, tol: f64) -> Result<TrigRoot, CaterpillarError> {
    if n < 3 {
        return Err(CaterpillarError::InvalidParameter("trigonometric root needs n >= 3".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(CaterpillarError::InvalidParameter("tolerance must be positive".into()));
    }
    let m = (n - 2) as f64;
    // decreasing on the bracket: +inf near 0, negative at the right end
    let f = |t: f64| 1.0 / (m * t).tan() - 3.0 * (t / 2.0).tan();
    let (mut lo, mut hi) = (BRACKET_EPS, PI / (2.0 * m));
    if !(f(lo) > 0.0 && f(hi) < 0.0) {
        return Err(CaterpillarError::NoSignChange(n));
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        // rho scales like 1/t², so a relative bracket keeps rho within tol
        if hi - lo <= 0.25 * tol * lo {
            break;
        }
    }
    let t0 = 0.5 * (lo + hi);
    let s = (t0 / 2.0).sin();
    Ok(TrigRoot { n, t0, rho: 1.0 + 1.0 / (4.0 * s * s) })
}

/// Leading terms `(4n² − 4n)/π²` of `ρ(C_n)`.
pub fn asymptotic_radius(n: usize) -> f64 {
    let n = n as f64;
    (4.0 * n * n - 4.0 * n) / (PI * PI)
}

/// Everything the CLI prints for one caterpillar.
#[derive(Debug, Clone)]
pub struct CaterpillarReport {
    pub n: usize,
    pub poly: IntPolynomial,
    pub trig_rho: Option<f64>,
    pub numeric_rho: f64,
    pub asymptotic: f64,
}

pub fn caterpillar_report(n: usize, tol: f64) -> Result<CaterpillarReport, CaterpillarError> {
    let poly = caterpillar_charpoly(n)?;
    let tree = Family::BinaryCaterpillar(n)
        .generate()
        .map_err(|e| CaterpillarError::InvalidParameter(e.to_string()))?;
    let numeric_rho = spectral_radius(&tree, tol)?.rho;
    // bisection to full precision; tol only governs the eigensolver
    let trig_rho = if n >= 3 { Some(trig_spectral_radius(n, f64::EPSILON)?.rho) } else { None };
    Ok(CaterpillarReport { n, poly, trig_rho, numeric_rho, asymptotic: asymptotic_radius(n) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::char_poly;
    use crate::spectral::DEFAULT_TOL;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn small_polynomials() {
        assert_eq!(caterpillar_charpoly(1).unwrap().to_text(), "1 0");
        assert_eq!(caterpillar_charpoly(2).unwrap().to_text(), "1 -2 1");
        assert_eq!(caterpillar_charpoly(3).unwrap().to_text(), "1 -5 7 -3");
        assert!(caterpillar_charpoly(0).is_err());
    }

    #[test]
    fn recursion_matches_determinant() {
        for n in 1..=12 {
            let p = caterpillar_charpoly(n).unwrap();
            assert_eq!(p, char_poly(&Family::BinaryCaterpillar(n).generate().unwrap()), "n = {n}");
            assert_eq!(p.degree(), n);
            assert!(p.is_monic());
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(chebyshev_closed_form(2, &q(5, 1)).unwrap(), q(16, 1));
        assert_eq!(chebyshev_closed_form(3, &q(0, 1)).unwrap(), q(-3, 1));
        assert!(chebyshev_form_check(5, &q(7, 2)).unwrap());
        assert!(matches!(chebyshev_form_check(4, &q(1, 1)), Err(CaterpillarError::PoleArgument(_))));
        assert!(matches!(chebyshev_form_check(4, &q(3, 2)), Err(CaterpillarError::PoleArgument(_))));
    }

    #[test]
    fn closed_form_on_a_grid() {
        for n in 2..=15 {
            for (a, b) in [(-7, 3), (0, 1), (1, 2), (2, 1), (5, 4), (11, 3), (40, 7)] {
                assert!(chebyshev_form_check(n, &q(a, b)).unwrap(), "n = {n}, x = {a}/{b}");
            }
            assert!(chebyshev_form_check_f64(n, 2.75, 1e-10).unwrap());
        }
    }

    #[test]
    fn chebyshev_trig_identities() {
        for k in 0..20 {
            for i in 1..12 {
                let theta = i as f64 * 0.27;
                let p = chebyshev_f64(k, theta.cos());
                assert!((p.t - (k as f64 * theta).cos()).abs() < 1e-10);
                let u = ((k + 1) as f64 * theta).sin() / theta.sin();
                assert!((p.u - u).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn trig_root_examples() {
        let r = trig_spectral_radius(3, 1e-12).unwrap();
        assert!((r.rho - 3.0).abs() < 1e-9);
        for n in [4, 10, 25, 60] {
            let r = trig_spectral_radius(n, 1e-12).unwrap();
            assert!(r.t0 > 0.0 && r.t0 < PI / (2.0 * (n - 2) as f64));
            let tree = Family::BinaryCaterpillar(n).generate().unwrap();
            let numeric = spectral_radius(&tree, DEFAULT_TOL).unwrap().rho;
            assert!((r.rho - numeric).abs() <= 1e-6 * numeric, "n = {n}");
        }
        assert!(trig_spectral_radius(2, 1e-9).is_err());
    }

    #[test]
    fn asymptotic_gap_stays_bounded() {
        for n in [10, 20, 50, 100, 200] {
            let r = trig_spectral_radius(n, 1e-13).unwrap();
            assert!((r.rho - asymptotic_radius(n)).abs() <= ASYMPTOTIC_SLACK, "n = {n}");
        }
        let r = trig_spectral_radius(50, 1e-13).unwrap();
        assert!((r.rho - (4.0 * 2500.0 - 200.0) / (PI * PI)).abs() <= 3.0);
    }
}
