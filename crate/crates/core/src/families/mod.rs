//! Reference coefficient sequences with known spectral behaviour.

mod bessel;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use bessel::{bessel_j, bessel_zero, MAX_ARGUMENT as BESSEL_MAX_ARGUMENT, MAX_ORDER as BESSEL_MAX_ORDER};

use crate::coeffs::{CoefficientSequence, Limits, RealRule};
use crate::error::{invalid, Error, Result};

/// A named family and its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum FamilySpec {
    /// Constant coefficients `a_n = a/2`, `b_n = b`; `U_n((x - b)/a)`.
    Chebyshev { a: f64, b: f64 },
    /// Orthonormal Lommel polynomials.
    Lommel { nu: f64 },
    /// Orthonormal Tricomi-Carlitz polynomials.
    TricomiCarlitz { alpha: f64 },
    /// Birth-death chain with `lambda_n = lambda/(n+1)`, `mu_0 = 0`, `mu_n = mu`.
    Natvig { lambda: f64, mu: f64 },
    /// Birth-death chain with `lambda_n = lambda/(n+a)`, `mu_{n+1} = mu (n+1)/(n+a)`.
    ChiharaIsmail { lambda: f64, mu: f64, a: f64 },
    /// Symmetrized Rogers-Ramanujan recurrence
    /// `U_{n+1} = x (1 + a q^n) U_n - b q^{n-1} U_{n-1}`.
    RogersRamanujan { a: f64, b: f64, q: f64 },
}

pub const FAMILY_NAMES: [&str; 6] = ["chebyshev", "lommel", "tricomi_carlitz", "natvig", "chihara_ismail", "rogers_ramanujan"];

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name())?;
        for (i, (k, v)) in self.params().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, ")")
    }
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Chebyshev { .. } => "chebyshev",
            FamilySpec::Lommel { .. } => "lommel",
            FamilySpec::TricomiCarlitz { .. } => "tricomi_carlitz",
            FamilySpec::Natvig { .. } => "natvig",
            FamilySpec::ChiharaIsmail { .. } => "chihara_ismail",
            FamilySpec::RogersRamanujan { .. } => "rogers_ramanujan",
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let pairs: Vec<(&str, f64)> = match *self {
            FamilySpec::Chebyshev { a, b } => vec![("a", a), ("b", b)],
            FamilySpec::Lommel { nu } => vec![("nu", nu)],
            FamilySpec::TricomiCarlitz { alpha } => vec![("alpha", alpha)],
            FamilySpec::Natvig { lambda, mu } => vec![("lambda", lambda), ("mu", mu)],
            FamilySpec::ChiharaIsmail { lambda, mu, a } => vec![("a", a), ("lambda", lambda), ("mu", mu)],
            FamilySpec::RogersRamanujan { a, b, q } => vec![("a", a), ("b", b), ("q", q)],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// Where the family comes from and what is known about its spectrum.
    pub fn provenance(&self) -> &'static str {
        match self {
            FamilySpec::Chebyshev { .. } => {
                "Chebyshev polynomials of the second kind; absolutely continuous spectrum [b-a, b+a]"
            }
            FamilySpec::Lommel { .. } => {
                "Lommel polynomials (Dickinson, Pollak-Wannier, Goldberg); spectrum {1/j_(k,nu-1) : k in Z} and its limit 0; not trace class"
            }
            FamilySpec::TricomiCarlitz { .. } => {
                "Tricomi-Carlitz (Carlitz-Karlin-McGregor) polynomials; mass points {+-1/sqrt(k+alpha)}; not trace class"
            }
            FamilySpec::Natvig { .. } => {
                "Natvig queue with discouraged arrivals (van Doorn; Chihara-Ismail); mass points accumulate at mu, which carries no mass"
            }
            FamilySpec::ChiharaIsmail { .. } => {
                "Chihara-Ismail birth-death queue; J = mu I + compact, spectrum accumulates at mu"
            }
            FamilySpec::RogersRamanujan { .. } => {
                "Al-Salam-Ismail polynomials of the Rogers-Ramanujan continued fraction; compact and trace class"
            }
        }
    }

    /// Default parameters for a family name.
    pub fn default_for(name: &str) -> Result<Self> {
        Ok(match name {
            "chebyshev" => FamilySpec::Chebyshev { a: 1.0, b: 0.0 },
            "lommel" => FamilySpec::Lommel { nu: 1.0 },
            "tricomi_carlitz" => FamilySpec::TricomiCarlitz { alpha: 2.0 },
            "natvig" => FamilySpec::Natvig { lambda: 1.0, mu: 2.0 },
            "chihara_ismail" => FamilySpec::ChiharaIsmail { lambda: 1.0, mu: 2.0, a: 1.0 },
            "rogers_ramanujan" => FamilySpec::RogersRamanujan { a: 0.0, b: 1.0, q: 0.5 },
            other => {
                return Err(invalid(format!("unknown family '{other}', expected one of {}", FAMILY_NAMES.join(", "))))
            }
        })
    }

    /// Family `name` with defaults overridden by `params`. Unknown parameter
    /// names are rejected.
    pub fn from_name_params(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let mut spec = Self::default_for(name)?;
        let known = spec.params();
        for (k, v) in params {
            if !known.contains_key(k) {
                return Err(invalid(format!(
                    "family '{name}' has no parameter '{k}' (parameters: {})",
                    known.keys().cloned().collect::<Vec<_>>().join(", ")
                )));
            }
            spec.set(k, *v);
        }
        spec.validate()?;
        Ok(spec)
    }

    fn set(&mut self, key: &str, v: f64) {
        match (self, key) {
            (FamilySpec::Chebyshev { a, .. }, "a") => *a = v,
            (FamilySpec::Chebyshev { b, .. }, "b") => *b = v,
            (FamilySpec::Lommel { nu }, "nu") => *nu = v,
            (FamilySpec::TricomiCarlitz { alpha }, "alpha") => *alpha = v,
            (FamilySpec::Natvig { lambda, .. }, "lambda") => *lambda = v,
            (FamilySpec::Natvig { mu, .. }, "mu") => *mu = v,
            (FamilySpec::ChiharaIsmail { lambda, .. }, "lambda") => *lambda = v,
            (FamilySpec::ChiharaIsmail { mu, .. }, "mu") => *mu = v,
            (FamilySpec::ChiharaIsmail { a, .. }, "a") => *a = v,
            (FamilySpec::RogersRamanujan { a, .. }, "a") => *a = v,
            (FamilySpec::RogersRamanujan { b, .. }, "b") => *b = v,
            (FamilySpec::RogersRamanujan { q, .. }, "q") => *q = v,
            _ => unreachable!("parameter names are checked before assignment"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::InvalidInput(format!("{}: parameter constraint violated: {what}", self.name())));
        if self.params().values().any(|v| !v.is_finite()) {
            return fail("parameters must be finite");
        }
        match *self {
            FamilySpec::Chebyshev { a, .. } if !(a > 0.0) => fail("a > 0"),
            FamilySpec::Lommel { nu } if !(nu > 0.0) => fail("nu > 0"),
            FamilySpec::TricomiCarlitz { alpha } if !(alpha > 0.0) => fail("alpha > 0"),
            FamilySpec::Natvig { lambda, .. } if !(lambda > 0.0) => fail("lambda > 0"),
            FamilySpec::Natvig { mu, .. } if !(mu > 0.0) => fail("mu > 0"),
            FamilySpec::ChiharaIsmail { lambda, .. } if !(lambda > 0.0) => fail("lambda > 0"),
            FamilySpec::ChiharaIsmail { mu, .. } if !(mu > 0.0) => fail("mu > 0"),
            FamilySpec::ChiharaIsmail { a, .. } if !(a > 0.0) => fail("a > 0"),
            FamilySpec::RogersRamanujan { q, .. } if !(q > 0.0 && q < 1.0) => fail("0 < q < 1"),
            FamilySpec::RogersRamanujan { b, .. } if !(b > 0.0) => fail("b > 0"),
            FamilySpec::RogersRamanujan { a, .. } if !(a > -1.0) => fail("a > -1"),
            _ => Ok(()),
        }
    }

    /// Declared limits `(a_limit, b_limit)` of the family.
    pub fn limits(&self) -> Limits {
        match *self {
            FamilySpec::Chebyshev { a, b } => Limits { a_limit: 0.5 * a, b_limit: b },
            FamilySpec::Natvig { mu, .. } | FamilySpec::ChiharaIsmail { mu, .. } => Limits { a_limit: 0.0, b_limit: mu },
            _ => Limits { a_limit: 0.0, b_limit: 0.0 },
        }
    }

    /// The coefficient sequence, with declared limits.
    pub fn build(&self) -> Result<CoefficientSequence> {
        self.validate()?;
        let (diag, offdiag): (RealRule, RealRule) = match *self {
            FamilySpec::Chebyshev { a, b } => (Arc::new(move |_| b), Arc::new(move |_| 0.5 * a)),
            FamilySpec::Lommel { nu } => (
                Arc::new(|_| 0.0),
                Arc::new(move |n| {
                    let n = n as f64;
                    0.5 / ((n + nu) * (n + nu - 1.0)).sqrt()
                }),
            ),
            FamilySpec::TricomiCarlitz { alpha } => (
                Arc::new(|_| 0.0),
                Arc::new(move |n| {
                    let n = n as f64;
                    (n / ((n + alpha) * (n + alpha - 1.0))).sqrt()
                }),
            ),
            FamilySpec::Natvig { lambda, mu } => birth_death(move |n| lambda / (n as f64 + 1.0), move |n| if n == 0 { 0.0 } else { mu }),
            FamilySpec::ChiharaIsmail { lambda, mu, a } => birth_death(
                move |n| lambda / (n as f64 + a),
                move |n| if n == 0 { 0.0 } else { mu * n as f64 / (n as f64 - 1.0 + a) },
            ),
            FamilySpec::RogersRamanujan { a, b, q } => (
                Arc::new(|_| 0.0),
                Arc::new(move |n| {
                    let n = n as i32;
                    let v = (b * q.powi(n - 1) / ((1.0 + a * q.powi(n - 1)) * (1.0 + a * q.powi(n)))).sqrt();
                    // q^{n/2} underflows near n = 2000 for q = 1/2; keep the entry positive.
                    v.max(f64::MIN_POSITIVE)
                }),
            ),
        };
        Ok(CoefficientSequence::from_family(*self, diag, offdiag, self.limits()))
    }
}

/// Symmetrized birth-death recurrence: `b_n = lambda_n + mu_n`,
/// `a_n = sqrt(lambda_{n-1} mu_n)`.
fn birth_death<L, M>(birth: L, death: M) -> (RealRule, RealRule)
where
    L: Fn(usize) -> f64 + Send + Sync + Clone + 'static,
    M: Fn(usize) -> f64 + Send + Sync + Clone + 'static,
{
    let (b2, d2) = (birth.clone(), death.clone());
    (Arc::new(move |n| birth(n) + death(n)), Arc::new(move |n| (b2(n - 1) * d2(n)).sqrt()))
}

/// Shorthand for `spec.build()`.
pub fn make_family(spec: &FamilySpec) -> Result<CoefficientSequence> {
    spec.build()
}

/// Positive eigenvalues `1/j_{k,nu-1}` of the Lommel operator, `k = 1..=count`,
/// in decreasing order. Needs `nu >= 1` so the Bessel order is nonnegative.
pub fn lommel_eigenvalues(nu: f64, count: usize) -> Result<Vec<f64>> {
    if nu < 1.0 {
        return Err(Error::UnsupportedRange(format!("Lommel oracle needs nu >= 1, got {nu}")));
    }
    (1..=count).map(|k| bessel_zero(nu - 1.0, k).map(|j| 1.0 / j)).collect()
}

/// Mass points `1/sqrt(k + alpha)`, `k = 0..count`, of the Tricomi-Carlitz measure
/// (the measure is symmetric).
pub fn tricomi_carlitz_mass_points(alpha: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| 1.0 / (k as f64 + alpha).sqrt()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lommel_coefficients() {
        let c = FamilySpec::Lommel { nu: 1.0 }.build().unwrap();
        assert!((c.offdiag(1) - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-16);
        assert!((c.offdiag(2) - 1.0 / (2.0 * 6f64.sqrt())).abs() < 1e-16);
        assert_eq!(c.diag(7), 0.0);
        let small = FamilySpec::Lommel { nu: 0.25 }.build().unwrap();
        assert!(small.offdiag(1) > 0.0);
    }

    #[test]
    fn tricomi_carlitz_coefficients() {
        let c = FamilySpec::TricomiCarlitz { alpha: 2.0 }.build().unwrap();
        assert!((c.offdiag(1) * c.offdiag(1) - 1.0 / 6.0).abs() < 1e-16);
    }

    #[test]
    fn natvig_coefficients() {
        let c = FamilySpec::Natvig { lambda: 1.0, mu: 2.0 }.build().unwrap();
        assert_eq!(c.diag(0), 1.0);
        assert!((c.offdiag(1) - 2f64.sqrt()).abs() < 1e-16);
        assert!((c.diag(3) - 2.25).abs() < 1e-16);
        assert_eq!(c.limits().unwrap().b_limit, 2.0);
    }

    #[test]
    fn chihara_ismail_reduces_to_natvig() {
        let ci = FamilySpec::ChiharaIsmail { lambda: 1.3, mu: 0.7, a: 1.0 }.build().unwrap();
        let nv = FamilySpec::Natvig { lambda: 1.3, mu: 0.7 }.build().unwrap();
        for n in 1..50 {
            assert!((ci.diag(n) - nv.diag(n)).abs() < 1e-15);
            assert!((ci.offdiag(n) - nv.offdiag(n)).abs() < 1e-15);
        }
        assert_eq!(ci.diag(0), nv.diag(0));
    }

    #[test]
    fn rogers_ramanujan_coefficients() {
        let c = FamilySpec::RogersRamanujan { a: 0.0, b: 1.0, q: 0.5 }.build().unwrap();
        for n in 1..20 {
            assert!((c.offdiag(n) - 0.5f64.powf((n as f64 - 1.0) / 2.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn rogers_ramanujan_matches_original_recurrence() {
        // p_n = U_n / (prod_{j<n} (1 + a q^j) * prod_{j<=n} a_j)
        let (a, b, q) = (0.3, 0.8, 0.6);
        let c = FamilySpec::RogersRamanujan { a, b, q }.build().unwrap();
        let x = 0.37;
        let t = crate::recurrence::eval_polys(&c, x, 12).unwrap();
        let (mut prev, mut cur) = (0.0, 1.0);
        let mut scale = 1.0;
        for n in 0..11 {
            let next = x * (1.0 + a * q.powi(n)) * cur - b * q.powi(n - 1) * prev;
            (prev, cur) = (cur, next);
            scale *= (1.0 + a * q.powi(n)) * c.offdiag(n as usize + 1);
            let p = t.values[n as usize + 1];
            assert!((cur / scale - p).abs() < 1e-12 * p.abs().max(1.0), "n = {}", n + 1);
        }
    }

    #[test]
    fn parameter_domains() {
        assert!(FamilySpec::Lommel { nu: 0.0 }.build().is_err());
        assert!(FamilySpec::TricomiCarlitz { alpha: -1.0 }.build().is_err());
        assert!(FamilySpec::RogersRamanujan { a: 0.0, b: 1.0, q: 1.0 }.build().is_err());
        assert!(FamilySpec::Chebyshev { a: 0.0, b: 0.0 }.build().is_err());
        let err = FamilySpec::Natvig { lambda: 1.0, mu: -2.0 }.build().unwrap_err().to_string();
        assert!(err.contains("mu > 0"), "{err}");
        let mut p = BTreeMap::new();
        p.insert("zeta".to_string(), 1.0);
        assert!(FamilySpec::from_name_params("lommel", &p).is_err());
        assert!(FamilySpec::default_for("laguerre").is_err());
    }

    #[test]
    fn declared_limits() {
        assert_eq!(FamilySpec::Chebyshev { a: 1.0, b: 0.5 }.limits(), Limits { a_limit: 0.5, b_limit: 0.5 });
        assert!(FamilySpec::Lommel { nu: 2.0 }.limits().is_compact());
        assert_eq!(FamilySpec::ChiharaIsmail { lambda: 1.0, mu: 3.0, a: 2.0 }.limits().b_limit, 3.0);
    }

    #[test]
    fn offdiag_positive_up_to_ten_thousand() {
        for name in FAMILY_NAMES {
            let c = FamilySpec::default_for(name).unwrap().build().unwrap();
            for n in 1..=10_000 {
                let a = c.offdiag(n);
                assert!(a > 0.0 && a.is_finite(), "{name}: a_{n} = {a}");
                assert!(c.diag(n - 1).is_finite());
            }
        }
    }

    #[test]
    fn lommel_oracle() {
        let ev = lommel_eigenvalues(1.0, 1).unwrap();
        assert!((ev[0] - 0.41583057731562373).abs() < 1e-14);
        assert!(lommel_eigenvalues(0.5, 1).is_err());
    }
}
