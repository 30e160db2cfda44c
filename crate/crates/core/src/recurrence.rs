//! Three-term recurrence evaluation.
//!
//! For a sequence `(b_n, a_n)` the orthonormal polynomials satisfy
//! `a_{n+1} p_{n+1} = (x - b_n) p_n - a_n p_{n-1}` with `p_{-1} = 0`,
//! `p_0 = 1`. The second solution `u` uses the same recurrence with
//! `u_0 = 0`, `u_1 = 1`; it is the numerator of the J-fraction convergents.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeffs::CoefficientSequence;
use crate::error::{invalid, Result};
use crate::scalar::{overflow_exponent, Scalar};

/// Carried values are rescaled once their magnitude exceeds this.
pub const RESCALE_THRESHOLD: f64 = 1e150;

/// Consecutive stable ratios required before convergence is declared.
pub const RATIO_STREAK: usize = 5;

/// `p_0(x)..p_N(x)` and the numerator solution, sharing a rescaling factor.
///
/// True values are `values[k] * exp(scale_log)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialTrace<T> {
    pub x: T,
    pub values: Vec<T>,
    pub numerators: Vec<T>,
    pub scale_log: f64,
}

/// One CSV export row of a trace, for real evaluation points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub k: usize,
    pub p_k: f64,
    pub numerator_k: f64,
    pub scale_log: f64,
}

impl PolynomialTrace<f64> {
    pub fn rows(&self) -> Vec<TraceRow> {
        self.values
            .iter()
            .zip(&self.numerators)
            .enumerate()
            .map(|(k, (&p, &u))| TraceRow { k, p_k: p, numerator_k: u, scale_log: self.scale_log })
            .collect()
    }
}

/// Forward recurrence with exact power-of-two rescaling.
struct Stepper<'a, T> {
    c: &'a CoefficientSequence,
    x: T,
    p: [T; 2],
    u: [T; 2],
    k: usize,
}

impl<'a, T: Scalar> Stepper<'a, T> {
    fn new(c: &'a CoefficientSequence, x: T) -> Self {
        Self { c, x, p: [T::zero(), T::one()], u: [T::zero(), T::zero()], k: 0 }
    }

    /// Advances from index `k` to `k + 1` and returns the binary rescale
    /// exponent applied, if any.
    fn step(&mut self) -> Option<i32> {
        let n = self.k;
        let a_next = self.c.offdiag(n + 1);
        let shift = self.x - T::from_real(self.c.diag(n));
        let a_n = if n == 0 { 0.0 } else { self.c.offdiag(n) };
        let p_next = (shift * self.p[1] - self.p[0].scale(a_n)).scale(1.0 / a_next);
        let u_next = if n == 0 {
            // u_0 = 0, u_1 = 1 is an initial condition, not a recurrence step.
            T::one()
        } else {
            (shift * self.u[1] - self.u[0].scale(a_n)).scale(1.0 / a_next)
        };
        self.p = [self.p[1], p_next];
        self.u = [self.u[1], u_next];
        self.k += 1;

        let m = self.p.iter().chain(&self.u).map(|v| v.modulus()).fold(0.0, f64::max);
        let e = overflow_exponent(m, RESCALE_THRESHOLD)?;
        let f = libm::ldexp(1.0, -e);
        for v in self.p.iter_mut().chain(self.u.iter_mut()) {
            *v = v.scale(f);
        }
        Some(e)
    }
}

/// Evaluates `p_0..p_n` and the numerator solution at `x`.
pub fn eval_polys<T: Scalar>(c: &CoefficientSequence, x: T, n: usize) -> Result<PolynomialTrace<T>> {
    if n == 0 {
        return Err(invalid("polynomial trace needs n >= 1"));
    }
    let mut st = Stepper::new(c, x);
    let mut values = vec![T::one()];
    let mut numerators = vec![T::zero()];
    let mut exp2: i64 = 0;
    for _ in 0..n {
        if let Some(e) = st.step() {
            let f = libm::ldexp(1.0, -e);
            for v in values.iter_mut().chain(numerators.iter_mut()) {
                *v = v.scale(f);
            }
            exp2 += e as i64;
        }
        values.push(st.p[1]);
        numerators.push(st.u[1]);
    }
    Ok(PolynomialTrace { x, values, numerators, scale_log: exp2 as f64 * std::f64::consts::LN_2 })
}

/// How the roots of `a xi^2 + 2 (b - x) xi + a = 0` compare in modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootRegime {
    Distinct,
    /// `x` strictly inside `(b - a, b + a)`.
    EqualModulus,
    /// `x = b +- a`: a double root.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareRoots {
    /// Root of larger modulus.
    pub dominant: Complex64,
    pub subdominant: Complex64,
    pub regime: RootRegime,
}

/// Characteristic roots `(x - b +- sqrt((x - b)^2 - a^2)) / a` of the limiting
/// recurrence for a sequence in M(a, b).
pub fn poincare_roots(a: f64, b: f64, x: Complex64) -> Result<PoincareRoots> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(invalid(format!("characteristic roots need a > 0, got {a}")));
    }
    let s = x - b;
    let disc = (s * s - a * a).sqrt();
    let r1 = (s + disc) / a;
    let r2 = (s - disc) / a;
    let (dominant, subdominant) = if r1.norm() >= r2.norm() { (r1, r2) } else { (r2, r1) };
    let regime = if disc.norm() <= 1e-7 * a {
        RootRegime::Boundary
    } else if dominant.norm() - subdominant.norm() <= 1e-12 * dominant.norm() {
        RootRegime::EqualModulus
    } else {
        RootRegime::Distinct
    };
    Ok(PoincareRoots { dominant, subdominant, regime })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RatioStatus<T> {
    /// `RATIO_STREAK` consecutive ratios agreed within `tol`, first at `index`.
    Converged { limit: T, index: usize },
    NotConverged,
    /// Declared limits put `x` on `b +- a`; no limit is asserted.
    Boundary,
    /// Declared limits put `x` inside `(b - a, b + a)`; no limit is asserted.
    EqualModulus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport<T> {
    /// `p_{k+1}(x) / p_k(x)` for `k = 1..n-1`; `None` where `p_k(x) = 0`.
    pub ratios: Vec<Option<T>>,
    pub status: RatioStatus<T>,
    /// Last ratio compared with the dominant characteristic root, when the
    /// sequence declares limits with `a > 0`.
    pub residual_vs_root: Option<f64>,
}

/// Ratio asymptotics `p_{k+1}(x) / p_k(x)`.
pub fn ratio_sequence<T: Scalar>(c: &CoefficientSequence, x: T, n: usize, tol: f64) -> Result<RatioReport<T>> {
    if n < 2 {
        return Err(invalid("ratio sequence needs n >= 2"));
    }
    if !(tol > 0.0) {
        return Err(invalid("tolerance must be > 0"));
    }
    let trace = eval_polys(c, x, n)?;
    let ratios: Vec<Option<T>> = (1..n)
        .map(|k| {
            let d = trace.values[k];
            (d.modulus() != 0.0).then(|| trace.values[k + 1] / d)
        })
        .collect();

    let mut status = RatioStatus::NotConverged;
    let mut streak = 0;
    for k in 1..ratios.len() {
        match (ratios[k - 1], ratios[k]) {
            (Some(r0), Some(r1)) if (r1 - r0).modulus() < tol => streak += 1,
            _ => streak = 0,
        }
        if streak >= RATIO_STREAK {
            status = RatioStatus::Converged { limit: ratios[ratios.len() - 1].unwrap_or(ratios[k].unwrap()), index: k + 1 };
            break;
        }
    }

    let mut residual_vs_root = None;
    if let Some(l) = c.limits().filter(|l| l.a_limit > 0.0) {
        let (a, b) = l.mab();
        let roots = poincare_roots(a, b, x.to_complex())?;
        match roots.regime {
            RootRegime::Boundary => status = RatioStatus::Boundary,
            RootRegime::EqualModulus => status = RatioStatus::EqualModulus,
            RootRegime::Distinct => {}
        }
        if let Some(Some(last)) = ratios.last() {
            residual_vs_root = Some((last.to_complex() - roots.dominant).norm());
        }
    }
    Ok(RatioReport { ratios, status, residual_vs_root })
}

/// Partial Christoffel sums `S_k = sum_{j<=k} p_j(x)^2`, stored as logarithms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChristoffelSums {
    pub x: f64,
    pub log_sums: Vec<f64>,
}

impl ChristoffelSums {
    pub fn sum(&self, k: usize) -> f64 {
        self.log_sums[k].exp()
    }

    /// `1 / S_k`, the mass estimate at `x`.
    pub fn mass(&self, k: usize) -> f64 {
        (-self.log_sums[k]).exp()
    }

    /// `S_k2 / S_k1`, finite even when the sums themselves overflow.
    pub fn ratio(&self, k1: usize, k2: usize) -> f64 {
        (self.log_sums[k2] - self.log_sums[k1]).exp()
    }
}

/// Christoffel sums `S_0..S_n` at a real point.
pub fn christoffel_mass(c: &CoefficientSequence, x: f64, n: usize) -> Result<ChristoffelSums> {
    if !x.is_finite() {
        return Err(invalid("evaluation point must be finite"));
    }
    let mut st = Stepper::new(c, x);
    let mut sum = 1.0f64;
    let mut exp2: i64 = 0;
    let mut log_sums = Vec::with_capacity(n + 1);
    log_sums.push(0.0);
    for _ in 0..n {
        if let Some(e) = st.step() {
            sum *= libm::ldexp(1.0, -2 * e);
            exp2 += e as i64;
        }
        sum += st.p[1] * st.p[1];
        let log = sum.ln() + 2.0 * exp2 as f64 * std::f64::consts::LN_2;
        let prev = *log_sums.last().unwrap();
        // rounding in the rescaled logarithm must not break monotonicity
        log_sums.push(log.max(prev));
    }
    Ok(ChristoffelSums { x, log_sums })
}
