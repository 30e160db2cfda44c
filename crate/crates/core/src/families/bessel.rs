//! Bessel functions of the first kind and their positive zeros.
//!
//! Used as an independent oracle for the Lommel spectrum, which consists of
//! the reciprocals of zeros of `J_{nu-1}`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const MAX_ORDER: f64 = 10.0;
pub const MAX_ARGUMENT: f64 = 500.0;

/// Below this argument the ascending series is used; above it Miller's
/// backward recurrence.
const SERIES_LIMIT: f64 = 12.0;

fn check_range(nu: f64, x: f64) -> Result<()> {
    if !(0.0..=MAX_ORDER).contains(&nu) {
        return Err(Error::UnsupportedRange(format!("Bessel order {nu} outside [0, {MAX_ORDER}]")));
    }
    if !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(Error::UnsupportedRange(format!("Bessel argument {x} outside [0, {MAX_ARGUMENT}]")));
    }
    Ok(())
}

/// `J_nu(x)` for `0 <= nu <= 10`, `0 <= x <= 500`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    check_range(nu, x)?;
    Ok(bessel_j_unchecked(nu, x))
}

fn bessel_j_unchecked(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        series(nu, x)
    } else {
        miller(nu, x)
    }
}

fn leading_factor(nu: f64, x: f64) -> f64 {
    // (x/2)^nu / Gamma(nu + 1)
    (nu * (0.5 * x).ln() - libm::lgamma(nu + 1.0)).exp()
}

fn series(nu: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = leading_factor(nu, x);
    let mut sum = term;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && k > 0.5 * x {
            return sum;
        }
        if k > 500.0 {
            return sum;
        }
    }
}

fn miller(nu: f64, x: f64) -> f64 {
    let start = (x + 30.0 * x.cbrt() + 30.0).ceil() as usize;
    let start = start + start % 2;
    let mut above = 0.0f64; // f_{m+1}
    let mut cur = 1e-30f64; // f_m
    let mut norm = 0.0f64;
    let mut h = weights(nu, start / 2);
    for m in (0..=start).rev() {
        if m % 2 == 0 {
            let k = m / 2;
            let c = if k == 0 { 1.0 } else { (nu + 2.0 * k as f64) * h };
            norm += c * cur;
            if k >= 1 {
                // h_{k-1} = h_k * k / (nu + k - 1)
                h = if k == 1 { 1.0 } else { h * k as f64 / (nu + k as f64 - 1.0) };
            }
        }
        if m == 0 {
            break;
        }
        let below = 2.0 * (nu + m as f64) / x * cur - above;
        above = cur;
        cur = below;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            norm *= 1e-250;
        }
    }
    leading_factor(nu, x) * cur / norm
}

/// `Gamma(nu + k) / (k! Gamma(nu + 1))` for `k >= 1`.
fn weights(nu: f64, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    (libm::lgamma(nu + k as f64) - libm::lgamma(k as f64 + 1.0) - libm::lgamma(nu + 1.0)).exp()
}

fn mcmahon(nu: f64, k: usize) -> f64 {
    let mu = 4.0 * nu * nu;
    let beta = (k as f64 + 0.5 * nu - 0.25) * PI;
    let e = 8.0 * beta;
    beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e.powi(3))
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * e.powi(5))
}

/// `k`-th positive zero `j_{k,nu}` of `J_nu`, `k >= 1`.
///
/// McMahon's expansion seeds a Newton iteration on `J_nu`, with
/// `J_nu' = (nu/x) J_nu - J_{nu+1}`.
pub fn bessel_zero(nu: f64, k: usize) -> Result<f64> {
    check_range(nu, 0.0)?;
    if k == 0 {
        return Err(Error::InvalidInput("Bessel zeros are indexed from k = 1".into()));
    }
    let mut x = mcmahon(nu, k);
    if x > MAX_ARGUMENT - 2.0 {
        return Err(Error::UnsupportedRange(format!("zero j_({k},{nu}) lies beyond x = {MAX_ARGUMENT}")));
    }
    let seed = x;
    for _ in 0..60 {
        let f = bessel_j_unchecked(nu, x);
        let df = nu / x * f - bessel_j_unchecked(nu + 1.0, x);
        let dx = f / df;
        x -= dx;
        if dx.abs() <= 4.0 * f64::EPSILON * x {
            break;
        }
    }
    // Zeros are spaced by roughly pi; a jump of more than half that means
    // Newton escaped to a neighbouring zero.
    if !x.is_finite() || (x - seed).abs() > 0.5 * PI {
        return Err(Error::NumericalFailure(format!("Newton iteration for j_({k},{nu}) left its bracket")));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with 30-digit arithmetic.
    const VALUES: &[(f64, f64, f64)] = &[
        (0.0, 1.0, 0.76519768655796655145),
        (0.0, 12.5, 0.14688405470042110231),
        (1.0, 0.5, 0.24226845767487388638),
        (2.5, 7.3, -0.30084943158749980838),
        (5.0, 3.0, 0.043028434877047583925),
        (5.0, 40.0, 0.12257346597711778699),
        (0.0, 100.0, 0.019985850304223122424),
        (3.7, 64.1, 0.048860722863084137414),
        (1.0, 150.0, -0.065145163657727360305),
        (10.0, 20.0, 0.18648255802394508321),
        (0.3, 11.9, -0.081220674389241633645),
        (2.0, 12.1, -0.10532776094183620682),
    ];

    const ZEROS: &[(f64, [f64; 5])] = &[
        (0.0, [2.4048255576957727686, 5.5200781102863106496, 8.653727912911012217, 30.634606468431975118, 156.29503426853352382]),
        (1.0, [3.8317059702075123156, 7.0155866698156187535, 10.173468135062722077, 32.189679910974403627, 157.86265540193029781]),
        (2.5, [5.7634591968945497914, 9.0950113304763551563, 12.322940970566582052, 34.470488331284988666, 160.20249903349048703]),
        (5.0, [8.7714838159599540191, 12.338604197466943986, 15.700174079711671038, 38.159868561967132097, 164.07278793052757144]),
        (10.0, [14.475500686554541238, 18.433463666966582642, 22.046985364697801872, 45.231574103535044854, 171.71166291472090386]),
    ];

    #[test]
    fn reference_values() {
        for &(nu, x, want) in VALUES {
            let got = bessel_j(nu, x).unwrap();
            assert!((got - want).abs() <= 1e-12 * want.abs(), "J_{nu}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn origin_and_half_order() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(2.0, 0.0).unwrap(), 0.0);
        let x = PI / 2.0;
        let got = bessel_j(0.5, x).unwrap();
        assert!((got - 2.0 / PI).abs() < 1e-14);
        for x in [0.3, 5.0, 13.0, 77.7] {
            let closed = (2.0 / (PI * x)).sqrt() * f64::sin(x);
            assert!((bessel_j(0.5, x).unwrap() - closed).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn branches_agree_at_the_switch() {
        for nu in [0.0, 1.0, 3.3, 7.0] {
            let s = series(nu, SERIES_LIMIT);
            let m = miller(nu, SERIES_LIMIT);
            assert!((s - m).abs() < 1e-12, "nu = {nu}: {s} vs {m}");
        }
    }

    #[test]
    fn reference_zeros() {
        let ks = [1, 2, 3, 10, 50];
        for (nu, zs) in ZEROS {
            for (k, want) in ks.iter().zip(zs) {
                let got = bessel_zero(*nu, *k).unwrap();
                assert!((got - want).abs() <= 1e-12 * want, "j_({k},{nu}) = {got}, want {want}");
            }
        }
    }

    #[test]
    fn half_order_zero_is_pi() {
        assert!((bessel_zero(0.5, 1).unwrap() - PI).abs() < 1e-13);
    }

    #[test]
    fn zero_consistency_and_asymptotics() {
        let j = bessel_zero(0.0, 1).unwrap();
        assert!((j - 2.404825557695773).abs() < 1e-12);
        assert!(bessel_j(0.0, j).unwrap().abs() < 1e-12);
        let j50 = bessel_zero(0.0, 50).unwrap();
        assert!((j50 / (50.0 * PI) - 1.0).abs() < 1e-2);
    }

    #[test]
    fn zeros_increase() {
        for nu in [0.0, 0.7, 4.0, 9.5] {
            let zs: Vec<f64> = (1..=60).map(|k| bessel_zero(nu, k).unwrap()).collect();
            assert!(zs.windows(2).all(|w| w[1] > w[0] + 1.0));
        }
    }

    #[test]
    fn range_errors() {
        assert!(matches!(bessel_j(-0.5, 1.0), Err(Error::UnsupportedRange(_))));
        assert!(matches!(bessel_j(1.0, 600.0), Err(Error::UnsupportedRange(_))));
        assert!(matches!(bessel_zero(11.0, 1), Err(Error::UnsupportedRange(_))));
        assert!(matches!(bessel_zero(0.0, 400), Err(Error::UnsupportedRange(_))));
        assert!(bessel_zero(0.0, 0).is_err());
    }
}
