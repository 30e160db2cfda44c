//! Convergents of S-fractions and J-fractions.
//!
//! Both forms are evaluated forward with the Wallis recurrences
//! `A_k = beta_k A_{k-1} + alpha_k A_{k-2}` (same for `B`), so numerator and
//! denominator stay visible separately. They share one binary rescaling
//! exponent; rescaling is by exact powers of two and never changes a
//! convergent's value.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coeffs::{s_to_j, CoefficientSequence, ComplexRule, SFraction};
use crate::error::{invalid, Error, Result};
use crate::scalar::{overflow_exponent, underflow_exponent};

/// Denominators below this magnitude (after rescaling) are poles.
pub const POLE_THRESHOLD: f64 = 1e-300;
const RESCALE_LIMIT: f64 = 1e150;

/// `lambda_0 / (z + a_1 - lambda_1 / (z + a_2 - lambda_2 / (z + ...)))`.
#[derive(Clone)]
pub struct JFraction {
    lambda0: Complex64,
    shift: ComplexRule,
    weight: ComplexRule,
}

impl fmt::Debug for JFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JFraction").field("lambda0", &self.lambda0).finish_non_exhaustive()
    }
}

impl JFraction {
    /// `shift(n)` is `a_n` and `weight(n)` is `lambda_n`, both for `n >= 1`.
    pub fn new<A, L>(lambda0: Complex64, shift: A, weight: L) -> Self
    where
        A: Fn(usize) -> Complex64 + Send + Sync + 'static,
        L: Fn(usize) -> Complex64 + Send + Sync + 'static,
    {
        Self { lambda0, shift: Arc::new(shift), weight: Arc::new(weight) }
    }

    /// The J-fraction of a Jacobi operator: `a_n = -b_{n-1}`, `lambda_n = a_n^2`.
    pub fn from_sequence(lambda0: f64, c: &CoefficientSequence) -> Self {
        let (d, o) = (c.clone(), c.clone());
        Self::new(
            Complex64::new(lambda0, 0.0),
            move |n| Complex64::new(-d.diag(n - 1), 0.0),
            move |n| {
                let a = o.offdiag(n);
                Complex64::new(a * a, 0.0)
            },
        )
    }

    pub fn lambda0(&self) -> Complex64 {
        self.lambda0
    }

    pub fn shift(&self, n: usize) -> Complex64 {
        (self.shift)(n)
    }

    pub fn weight(&self, n: usize) -> Complex64 {
        (self.weight)(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvergentStatus {
    Finite,
    Pole,
    Overflow,
}

/// The `order`-th convergent with its separately tracked parts.
///
/// The true numerator and denominator are `numerator * exp(scale_log)` and
/// `denominator * exp(scale_log)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergentValue {
    pub order: usize,
    pub value: Option<Complex64>,
    pub numerator: Complex64,
    pub denominator: Complex64,
    pub scale_log: f64,
    pub status: ConvergentStatus,
}

impl ConvergentValue {
    pub fn true_numerator(&self) -> Complex64 {
        self.numerator * self.scale_log.exp()
    }

    pub fn true_denominator(&self) -> Complex64 {
        self.denominator * self.scale_log.exp()
    }
}

/// Forward Wallis state.
#[derive(Debug, Clone)]
struct Wallis {
    num: [Complex64; 2],
    den: [Complex64; 2],
    exp2: i64,
    order: usize,
}

impl Wallis {
    fn new() -> Self {
        // A_{-1} = 1, A_0 = 0, B_{-1} = 0, B_0 = 1
        Self { num: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], den: [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], exp2: 0, order: 0 }
    }

    fn step(&mut self, partial_num: Complex64, partial_den: Complex64) {
        let a = partial_den * self.num[1] + partial_num * self.num[0];
        let b = partial_den * self.den[1] + partial_num * self.den[0];
        self.num = [self.num[1], a];
        self.den = [self.den[1], b];
        self.order += 1;

        let m = self.num.iter().chain(&self.den).map(|v| v.norm()).fold(0.0, f64::max);
        if let Some(e) = overflow_exponent(m, RESCALE_LIMIT).or_else(|| underflow_exponent(m, RESCALE_LIMIT)) {
            let f = libm::ldexp(1.0, -e);
            for v in self.num.iter_mut().chain(self.den.iter_mut()) {
                *v *= f;
            }
            self.exp2 += e as i64;
        }
    }

    fn current(&self) -> ConvergentValue {
        let (numerator, denominator) = (self.num[1], self.den[1]);
        let status = if !numerator.is_finite() || !denominator.is_finite() {
            ConvergentStatus::Overflow
        } else if denominator.norm() < POLE_THRESHOLD {
            ConvergentStatus::Pole
        } else {
            ConvergentStatus::Finite
        };
        let value = (status == ConvergentStatus::Finite).then(|| numerator / denominator);
        ConvergentValue {
            order: self.order,
            value,
            numerator,
            denominator,
            scale_log: self.exp2 as f64 * std::f64::consts::LN_2,
            status,
        }
    }
}

/// A continued fraction in either supported form.
#[derive(Debug, Clone, Copy)]
pub enum Fraction<'a> {
    /// Evaluated at `t`.
    S(&'a SFraction),
    /// Evaluated at `z`.
    J(&'a JFraction),
}

impl Fraction<'_> {
    /// Partial numerator and denominator of level `k >= 1` at `point`.
    fn level(&self, k: usize, point: Complex64) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        match self {
            Fraction::S(s) if k == 1 => (s.term(0), one),
            Fraction::S(s) => (s.term(k - 1) * point, one),
            Fraction::J(j) if k == 1 => (j.lambda0(), point + j.shift(1)),
            Fraction::J(j) => (-j.weight(k - 1), point + j.shift(k)),
        }
    }

    /// Convergents of orders `1..=n` at `point`.
    pub fn convergents(&self, point: Complex64, n: usize) -> Vec<ConvergentValue> {
        let mut w = Wallis::new();
        (1..=n)
            .map(|k| {
                let (p, q) = self.level(k, point);
                w.step(p, q);
                w.current()
            })
            .collect()
    }

    pub fn convergent(&self, point: Complex64, n: usize) -> ConvergentValue {
        let mut w = Wallis::new();
        for k in 1..=n {
            let (p, q) = self.level(k, point);
            w.step(p, q);
        }
        w.current()
    }
}

/// `n`-th convergent of `b_0 / (1 + b_1 t / (1 + b_2 t / (1 + ...)))`.
///
/// Order 1 is `b_0`, order 2 is `b_0 / (1 + b_1 t)`; order 0 is the empty
/// fraction `0/1`.
pub fn s_convergent(s: &SFraction, t: Complex64, n: usize) -> ConvergentValue {
    Fraction::S(s).convergent(t, n)
}

/// `n`-th convergent of `lambda_0 / (z + a_1 - lambda_1 / (z + a_2 - ...))`.
pub fn j_convergent(j: &JFraction, z: Complex64, n: usize) -> ConvergentValue {
    Fraction::J(j).convergent(z, n)
}

/// Relative gap between the `n`-th J-convergent of the contraction at `z`
/// and `t` times the `2n`-th S-convergent at `t = 1/z`.
pub fn check_contraction(s: &SFraction, z: Complex64, n: usize) -> Result<f64> {
    if z.norm() == 0.0 {
        return Err(invalid("contraction check needs z != 0"));
    }
    let contraction = s_to_j(s)?;
    let t = z.inv();
    let sv = s_convergent(s, t, 2 * n);
    let jv = j_convergent(&contraction.jfraction, z, n);
    let (Some(sv), Some(jv)) = (sv.value, jv.value) else {
        return Err(Error::NumericalFailure(format!(
            "convergent hit a pole or overflow (S order {}: {:?}, J order {}: {:?})",
            2 * n,
            sv.status,
            n,
            jv.status
        )));
    };
    let lhs = t * sv;
    Ok((lhs - jv).norm() / jv.norm().max(f64::MIN_POSITIVE))
}

/// Settings for [`estimate_limit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitOptions {
    pub tol: f64,
    /// Consecutive orders that must agree within `tol`.
    pub window: usize,
    pub max_n: usize,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self { tol: 1e-12, window: 5, max_n: 100_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LimitEstimate {
    Converged { value: Complex64, order: usize },
    Pole { order: usize },
    Undetermined { order: usize, last: Option<Complex64> },
}

/// Runs the convergents until `window` consecutive differences fall below
/// `tol`. A pole or overflow along the way stops the search.
pub fn estimate_limit(fraction: Fraction<'_>, point: Complex64, opts: LimitOptions) -> Result<LimitEstimate> {
    if !(opts.tol > 0.0) {
        return Err(invalid("tolerance must be > 0"));
    }
    if opts.window == 0 {
        return Err(invalid("convergence window must be >= 1"));
    }
    let mut w = Wallis::new();
    let mut prev: Option<Complex64> = None;
    let mut streak = 0;
    for k in 1..=opts.max_n {
        let (p, q) = fraction.level(k, point);
        w.step(p, q);
        let c = w.current();
        let Some(v) = c.value else {
            return Ok(LimitEstimate::Pole { order: k });
        };
        match prev {
            Some(p) if (v - p).norm() < opts.tol => streak += 1,
            _ => streak = 0,
        }
        if streak >= opts.window {
            return Ok(LimitEstimate::Converged { value: v, order: k });
        }
        prev = Some(v);
    }
    Ok(LimitEstimate::Undetermined { order: opts.max_n, last: prev })
}

/// One row of a grid evaluation export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub re_point: f64,
    pub im_point: f64,
    pub order: usize,
    /// `None` at a pole or on overflow.
    pub re_value: Option<f64>,
    pub im_value: Option<f64>,
    pub status: ConvergentStatus,
}

/// Evaluates the `n`-th convergent at each point; intended for plotting feeds.
pub fn grid_rows(fraction: Fraction<'_>, points: &[Complex64], n: usize) -> Vec<GridRow> {
    use rayon::prelude::*;
    points
        .par_iter()
        .map(|&p| {
            let c = fraction.convergent(p, n);
            GridRow {
                re_point: p.re,
                im_point: p.im,
                order: n,
                re_value: c.value.map(|v| v.re),
                im_value: c.value.map(|v| v.im),
                status: c.status,
            }
        })
        .collect()
}
