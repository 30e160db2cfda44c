//! Coefficient sequences of S-fractions and Jacobi operators.
//!
//! A [`CoefficientSequence`] holds the entries of the infinite symmetric
//! tridiagonal matrix
//!
//! ```text
//! x p_n(x) = a_{n+1} p_{n+1}(x) + b_n p_n(x) + a_n p_{n-1}(x)
//! ```
//!
//! with diagonal `b_0, b_1, ...` and positive off-diagonal `a_1, a_2, ...`.
//! Sequences are index-to-value rules; tables are a stored prefix plus a tail
//! rule, so every index is defined.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cfrac::JFraction;
use crate::error::{invalid, Error, Result};
use crate::families::FamilySpec;

/// Tail window used by classification front ends.
pub const DEFAULT_WINDOW: Range<usize> = 1024..131_072;

pub type RealRule = Arc<dyn Fn(usize) -> f64 + Send + Sync>;
pub type ComplexRule = Arc<dyn Fn(usize) -> Complex64 + Send + Sync>;

/// Limits `a_n -> a_limit`, `b_n -> b_limit` of a sequence in M(a, b), where
/// `a = 2 a_limit`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub a_limit: f64,
    pub b_limit: f64,
}

impl Limits {
    pub fn new(a_limit: f64, b_limit: f64) -> Result<Self> {
        if !a_limit.is_finite() || !b_limit.is_finite() {
            return Err(invalid("declared limits must be finite"));
        }
        if a_limit < 0.0 {
            return Err(invalid(format!("declared a_limit must be >= 0, got {a_limit}")));
        }
        Ok(Self { a_limit, b_limit })
    }

    /// The `(a, b)` label of the class M(a, b).
    pub fn mab(&self) -> (f64, f64) {
        (2.0 * self.a_limit, self.b_limit)
    }

    /// `[b - a, b + a]`, the essential spectrum of the operator.
    pub fn essential_interval(&self) -> (f64, f64) {
        let (a, b) = self.mab();
        (b - a, b + a)
    }

    pub fn is_compact(&self) -> bool {
        self.a_limit == 0.0 && self.b_limit == 0.0
    }
}

#[derive(Clone, Debug)]
enum Source {
    Table { diag: Arc<[f64]>, offdiag: Arc<[f64]> },
    Family(FamilySpec),
    Custom(String),
}

/// Diagonal and off-diagonal entries of a Jacobi operator.
#[derive(Clone)]
pub struct CoefficientSequence {
    diag: RealRule,
    offdiag: RealRule,
    limits: Option<Limits>,
    source: Source,
}

impl fmt::Debug for CoefficientSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoefficientSequence")
            .field("source", &self.source)
            .field("limits", &self.limits)
            .finish_non_exhaustive()
    }
}

impl CoefficientSequence {
    /// Builds a sequence from index rules. `offdiag` is only queried for `n >= 1`
    /// and must return positive values there.
    pub fn from_rules<D, O>(label: impl Into<String>, diag: D, offdiag: O) -> Self
    where
        D: Fn(usize) -> f64 + Send + Sync + 'static,
        O: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        Self {
            diag: Arc::new(diag),
            offdiag: Arc::new(offdiag),
            limits: None,
            source: Source::Custom(label.into()),
        }
    }

    pub(crate) fn from_family(spec: FamilySpec, diag: RealRule, offdiag: RealRule, limits: Limits) -> Self {
        Self { diag, offdiag, limits: Some(limits), source: Source::Family(spec) }
    }

    /// A stored prefix `b_0..b_{D-1}`, `a_1..a_O`.
    ///
    /// Past the prefix the diagonal continues with the declared `b_limit` (or
    /// the last stored entry) and the off-diagonal with a positive `a_limit`
    /// (or the last stored entry).
    pub fn table(diag: Vec<f64>, offdiag: Vec<f64>, limits: Option<Limits>) -> Result<Self> {
        if diag.is_empty() || offdiag.is_empty() {
            return Err(invalid("table needs at least one diagonal and one off-diagonal entry"));
        }
        if let Some(i) = diag.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("diag[{i}] is not finite")));
        }
        if let Some(i) = offdiag.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(invalid(format!("offdiag entry a_{} = {} must be finite and > 0", i + 1, offdiag[i])));
        }
        let diag: Arc<[f64]> = diag.into();
        let offdiag: Arc<[f64]> = offdiag.into();

        let d = diag.clone();
        let diag_tail = limits.map_or(d[d.len() - 1], |l| l.b_limit);
        let diag_rule: RealRule = Arc::new(move |n| d.get(n).copied().unwrap_or(diag_tail));

        let o = offdiag.clone();
        let off_tail = match limits {
            Some(l) if l.a_limit > 0.0 => l.a_limit,
            _ => o[o.len() - 1],
        };
        let off_rule: RealRule = Arc::new(move |n| o.get(n.wrapping_sub(1)).copied().unwrap_or(off_tail));

        Ok(Self { diag: diag_rule, offdiag: off_rule, limits, source: Source::Table { diag, offdiag } })
    }

    /// Attaches declared limits. Tables are rebuilt so their tail follows the limits.
    pub fn with_limits(self, limits: Limits) -> Self {
        match &self.source {
            Source::Table { diag, offdiag } => Self::table(diag.to_vec(), offdiag.to_vec(), Some(limits))
                .expect("table entries were validated on construction"),
            _ => Self { limits: Some(limits), ..self },
        }
    }

    pub fn limits(&self) -> Option<Limits> {
        self.limits
    }

    pub fn family(&self) -> Option<&FamilySpec> {
        match &self.source {
            Source::Family(f) => Some(f),
            _ => None,
        }
    }

    /// Short human-readable description of where the sequence came from.
    pub fn label(&self) -> String {
        match &self.source {
            Source::Table { diag, .. } => format!("table[{}]", diag.len()),
            Source::Family(f) => f.to_string(),
            Source::Custom(s) => s.clone(),
        }
    }

    /// Diagonal entry `b_n`, `n >= 0`.
    #[inline]
    pub fn diag(&self, n: usize) -> f64 {
        (self.diag)(n)
    }

    /// Off-diagonal entry `a_n`, `n >= 1`.
    #[inline]
    pub fn offdiag(&self, n: usize) -> f64 {
        debug_assert!(n >= 1, "off-diagonal entries start at a_1");
        (self.offdiag)(n)
    }

    /// Leading `n x n` block of the operator.
    pub fn truncate(&self, n: usize) -> Result<TruncatedJacobi> {
        if n == 0 {
            return Err(invalid("truncation size must be >= 1"));
        }
        let diag = (0..n).map(|i| self.diag(i)).collect();
        let offdiag = (1..n).map(|i| self.offdiag(i)).collect();
        TruncatedJacobi::new(diag, offdiag)
    }

    /// Classifies the operator from its declared limits or a tail window.
    ///
    /// With declared limits, the compactness and M(a, b) verdicts are exact.
    /// Otherwise both limits are estimated as window means and accepted only if
    /// every window entry lies within `tol` of them; anything else is
    /// [`Verdict::Undetermined`].
    ///
    /// Trace class is judged for the centered operator `J - b I` by the banded
    /// criterion: the window sum of `|b_n - b| + a_n` must be below `tol`.
    /// Divergence is reported (`No`) only when dyadic block sums inside the
    /// window fail to decay, which is the Cauchy condensation signature of
    /// a `1/n`-type tail.
    pub fn classify(&self, window: Range<usize>, tol: f64) -> Result<ClassificationReport> {
        if window.is_empty() {
            return Err(invalid("classification window is empty"));
        }
        if !(tol > 0.0) {
            return Err(invalid("tolerance must be > 0"));
        }
        let start = window.start.max(1);
        let end = window.end.max(start + 1);
        let diag: Vec<f64> = (start..end).map(|n| self.diag(n)).collect();
        let off: Vec<f64> = (start..end).map(|n| self.offdiag(n)).collect();

        let (a_lim, b_lim) = match self.limits {
            Some(l) => (l.a_limit, l.b_limit),
            None => (mean(&off), mean(&diag)),
        };
        let residual = diag
            .iter()
            .map(|b| (b - b_lim).abs())
            .chain(off.iter().map(|a| (a - a_lim).abs()))
            .fold(0.0, f64::max);

        let mut evidence = TailEvidence {
            window: (start, end),
            limits_declared: self.limits.is_some(),
            diag_limit: b_lim,
            offdiag_limit: a_lim,
            max_residual: residual,
            centered_sum: None,
            block_sums: Vec::new(),
        };

        let limits = match self.limits {
            Some(l) => Some(l),
            None if residual < tol => {
                let snap = |v: f64| if v.abs() < tol { 0.0 } else { v };
                Some(Limits { a_limit: snap(a_lim), b_limit: snap(b_lim) })
            }
            None => None,
        };

        let Some(limits) = limits else {
            return Ok(ClassificationReport {
                is_compact: Verdict::Undetermined,
                is_trace_class: Verdict::Undetermined,
                mab: None,
                evidence,
            });
        };

        let is_compact = Verdict::from(limits.is_compact());
        let is_trace_class = if limits.a_limit > 0.0 {
            // J - bI still has off-diagonal entries tending to a/2 > 0.
            Verdict::No
        } else {
            let terms: Vec<f64> = diag
                .iter()
                .zip(&off)
                .map(|(b, a)| (b - limits.b_limit).abs() + a.abs())
                .collect();
            let total: f64 = terms.iter().sum();
            let blocks = dyadic_block_sums(&terms, start);
            evidence.centered_sum = Some(total);
            let verdict = if total < tol {
                Verdict::Yes
            } else if blocks.len() >= 3 {
                let first = blocks[0];
                let last = blocks[blocks.len() - 1];
                if last >= tol && last >= 0.5 * first {
                    Verdict::No
                } else {
                    Verdict::Undetermined
                }
            } else {
                Verdict::Undetermined
            };
            evidence.block_sums = blocks;
            verdict
        };

        Ok(ClassificationReport { is_compact, is_trace_class, mab: Some(limits.mab()), evidence })
    }

    /// Serializable description, available for tables and built-in families.
    pub fn to_document(&self) -> Result<SequenceDocument> {
        let limits = self.limits.map(|l| [l.a_limit, l.b_limit]);
        match &self.source {
            Source::Table { diag, offdiag } => {
                Ok(SequenceDocument::Table { diag: diag.to_vec(), offdiag: offdiag.to_vec(), limits })
            }
            Source::Family(f) => Ok(SequenceDocument::Rule { family: f.name().to_string(), params: f.params(), limits }),
            Source::Custom(label) => Err(invalid(format!("sequence '{label}' is defined by code and has no document form"))),
        }
    }

    pub fn from_document(doc: &SequenceDocument) -> Result<Self> {
        match doc {
            SequenceDocument::Table { diag, offdiag, limits } => {
                let limits = limits.map(|[a, b]| Limits::new(a, b)).transpose()?;
                Self::table(diag.clone(), offdiag.clone(), limits)
            }
            SequenceDocument::Rule { family, params, limits } => {
                let spec = FamilySpec::from_name_params(family, params)?;
                let seq = spec.build()?;
                if let (Some([a, b]), Some(declared)) = (limits, seq.limits) {
                    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + y.abs());
                    if !close(*a, declared.a_limit) || !close(*b, declared.b_limit) {
                        return Err(invalid(format!(
                            "limits [{a}, {b}] disagree with family '{family}' limits [{}, {}]",
                            declared.a_limit, declared.b_limit
                        )));
                    }
                }
                Ok(seq)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SequenceDocument = serde_json::from_str(text)?;
        Self::from_document(&doc)
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Sums over `[s, 2s), [2s, 4s), ...` for the dyadic blocks fully inside the window.
fn dyadic_block_sums(terms: &[f64], start: usize) -> Vec<f64> {
    let end = start + terms.len();
    let mut lo = start.next_power_of_two();
    let mut out = Vec::new();
    while 2 * lo <= end {
        out.push(terms[lo - start..2 * lo - start].iter().sum());
        lo *= 2;
    }
    out
}

/// JSON form of a coefficient sequence.
///
/// ```json
/// {"kind": "table", "diag": [0, 0], "offdiag": [0.5], "limits": [0.5, 0]}
/// {"kind": "rule", "family": "lommel", "params": {"nu": 1}}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SequenceDocument {
    Table {
        diag: Vec<f64>,
        offdiag: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limits: Option<[f64; 2]>,
    },
    Rule {
        family: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limits: Option<[f64; 2]>,
    },
}

/// Leading `N x N` section of a Jacobi operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncatedJacobi {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TruncatedJacobi {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(invalid("truncation size must be >= 1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(invalid(format!(
                "{} diagonal entries need {} off-diagonal entries, got {}",
                diag.len(),
                diag.len() - 1,
                offdiag.len()
            )));
        }
        if let Some(i) = diag.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("diagonal entry {i} is not finite")));
        }
        if let Some(i) = offdiag.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(invalid(format!("off-diagonal entry a_{} = {} must be finite and > 0", i + 1, offdiag[i])));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// `a_1 .. a_{N-1}`.
    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Undetermined,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

/// Tail statistics backing a classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailEvidence {
    /// Half-open index range `[start, end)` that was inspected.
    pub window: (usize, usize),
    pub limits_declared: bool,
    pub diag_limit: f64,
    pub offdiag_limit: f64,
    /// Largest deviation of a window entry from its limit.
    pub max_residual: f64,
    /// Window sum of `|b_n - b| + a_n`, when the centered operator could be compact.
    pub centered_sum: Option<f64>,
    pub block_sums: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub is_compact: Verdict,
    pub is_trace_class: Verdict,
    pub mab: Option<(f64, f64)>,
    pub evidence: TailEvidence,
}

/// Limits and essential interval for an S-fraction whose even and odd
/// coefficients converge to `l` and `l1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlumenthalLimits {
    pub a: f64,
    pub b: f64,
    pub essential_interval: (f64, f64),
}

pub fn blumenthal_limits(l: f64, l1: f64) -> Result<BlumenthalLimits> {
    if !(l >= 0.0 && l1 >= 0.0) || !l.is_finite() || !l1.is_finite() {
        return Err(invalid(format!("limits must be finite and >= 0, got ({l}, {l1})")));
    }
    let root = (l * l1).sqrt();
    let a = 2.0 * root;
    let b = -l - l1;
    Ok(BlumenthalLimits { a, b, essential_interval: (-(2.0 * root + l + l1), 2.0 * root - l - l1) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SFractionKind {
    PositiveReal,
    Complex,
}

/// Coefficients `b_0, b_1, ...` of `b_0 / (1 + b_1 t / (1 + b_2 t / (1 + ...)))`.
#[derive(Clone)]
pub struct SFraction {
    terms: ComplexRule,
    kind: SFractionKind,
    doc: Option<SFractionDocument>,
}

impl fmt::Debug for SFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SFraction").field("kind", &self.kind).field("doc", &self.doc).finish_non_exhaustive()
    }
}

/// One S-fraction coefficient in a JSON table: a number or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Term {
    Real(f64),
    Complex([f64; 2]),
}

impl Term {
    fn value(self) -> Complex64 {
        match self {
            Term::Real(x) => Complex64::new(x, 0.0),
            Term::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

/// JSON form of an S-fraction.
///
/// Tables repeat their last term. Rules: `constant` (`b_k = value`),
/// `linear` (`b_k = offset + slope k`), `geometric` (`b_k = scale ratio^k`),
/// `harmonic` (`b_k = 1/(k+1)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SFractionDocument {
    Table { terms: Vec<Term> },
    Rule(SRule),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum SRule {
    Constant { value: f64 },
    Linear { offset: f64, slope: f64 },
    Geometric { scale: f64, ratio: f64 },
    Harmonic,
}

impl SFraction {
    pub fn from_document(doc: SFractionDocument) -> Result<Self> {
        let (terms, kind): (ComplexRule, SFractionKind) = match &doc {
            SFractionDocument::Table { terms } => {
                if terms.is_empty() {
                    return Err(invalid("S-fraction table is empty"));
                }
                let values: Arc<[Complex64]> = terms.iter().map(|t| t.value()).collect();
                if let Some(i) = values.iter().position(|v| !v.is_finite()) {
                    return Err(invalid(format!("S-fraction term b_{i} is not finite")));
                }
                let kind = if values.iter().all(|v| v.im == 0.0 && v.re > 0.0) {
                    SFractionKind::PositiveReal
                } else {
                    SFractionKind::Complex
                };
                let last = values[values.len() - 1];
                (Arc::new(move |k| values.get(k).copied().unwrap_or(last)), kind)
            }
            SFractionDocument::Rule(rule) => {
                let rule = *rule;
                let finite = match rule {
                    SRule::Constant { value } => value.is_finite(),
                    SRule::Linear { offset, slope } => offset.is_finite() && slope.is_finite(),
                    SRule::Geometric { scale, ratio } => scale.is_finite() && ratio.is_finite(),
                    SRule::Harmonic => true,
                };
                if !finite {
                    return Err(invalid("S-fraction rule parameters must be finite"));
                }
                let positive = match rule {
                    SRule::Constant { value } => value > 0.0,
                    SRule::Linear { offset, slope } => offset > 0.0 && slope >= 0.0,
                    SRule::Geometric { scale, ratio } => scale > 0.0 && ratio > 0.0,
                    SRule::Harmonic => true,
                };
                let f = move |k: usize| {
                    let k = k as f64;
                    let v = match rule {
                        SRule::Constant { value } => value,
                        SRule::Linear { offset, slope } => offset + slope * k,
                        SRule::Geometric { scale, ratio } => scale * ratio.powf(k),
                        SRule::Harmonic => 1.0 / (k + 1.0),
                    };
                    Complex64::new(v, 0.0)
                };
                let kind = if positive { SFractionKind::PositiveReal } else { SFractionKind::Complex };
                (Arc::new(f), kind)
            }
        };
        Ok(Self { terms, kind, doc: Some(doc) })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(serde_json::from_str(text)?)
    }

    pub fn positive_table(terms: Vec<f64>) -> Result<Self> {
        let s = Self::from_document(SFractionDocument::Table { terms: terms.into_iter().map(Term::Real).collect() })?;
        if s.kind != SFractionKind::PositiveReal {
            return Err(invalid("positive S-fraction needs every b_k > 0"));
        }
        Ok(s)
    }

    pub fn complex_table(terms: Vec<Complex64>) -> Result<Self> {
        Self::from_document(SFractionDocument::Table { terms: terms.into_iter().map(|z| Term::Complex([z.re, z.im])).collect() })
    }

    pub fn rule(rule: SRule) -> Result<Self> {
        Self::from_document(SFractionDocument::Rule(rule))
    }

    /// Coefficients given by code. A `PositiveReal` claim is spot-checked on
    /// the first 1024 terms.
    pub fn from_fn<F>(kind: SFractionKind, f: F) -> Result<Self>
    where
        F: Fn(usize) -> Complex64 + Send + Sync + 'static,
    {
        if kind == SFractionKind::PositiveReal {
            if let Some(k) = (0..1024).find(|&k| {
                let v = f(k);
                !(v.im == 0.0 && v.re > 0.0 && v.re.is_finite())
            }) {
                return Err(invalid(format!("b_{k} = {} is not positive", f(k))));
            }
        }
        Ok(Self { terms: Arc::new(f), kind, doc: None })
    }

    #[inline]
    pub fn term(&self, k: usize) -> Complex64 {
        (self.terms)(k)
    }

    pub fn kind(&self) -> SFractionKind {
        self.kind
    }

    pub fn document(&self) -> Option<&SFractionDocument> {
        self.doc.as_ref()
    }
}

/// Result of contracting an S-fraction into a J-fraction.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub lambda0: f64,
    /// `lambda_0 / (z + a_1 - lambda_1 / (z + a_2 - ...))`.
    pub jfraction: JFraction,
    /// Same operator in `(b_n, a_n) = (-a_{n+1}, sqrt(lambda_n))` form.
    pub sequence: CoefficientSequence,
}

impl Contraction {
    /// Shift `a_n` of the J-fraction, `n >= 1`.
    pub fn shift(&self, n: usize) -> f64 {
        self.jfraction.shift(n).re
    }

    /// Weight `lambda_n` of the J-fraction, `n >= 1`.
    pub fn weight(&self, n: usize) -> f64 {
        self.jfraction.weight(n).re
    }
}

/// Contracts a positive S-fraction into the equivalent J-fraction.
///
/// The shifts and weights are `a_1 = b_1`, `a_n = b_{2n-2} + b_{2n-1}` for
/// `n >= 2`, `lambda_n = b_{2n-1} b_{2n}` and `lambda_0 = b_0`, so that the
/// `n`-th J-convergent at `z` equals `t` times the `2n`-th S-convergent at
/// `t = 1/z`.
pub fn s_to_j(s: &SFraction) -> Result<Contraction> {
    if s.kind != SFractionKind::PositiveReal {
        return Err(Error::InvalidInput("contraction needs a positive-real S-fraction".into()));
    }
    let b = s.terms.clone();
    let re = move |k: usize| b(k).re;
    let shift = {
        let re = re.clone();
        move |n: usize| if n == 1 { re(1) } else { re(2 * n - 2) + re(2 * n - 1) }
    };
    let weight = {
        let re = re.clone();
        move |n: usize| re(2 * n - 1) * re(2 * n)
    };
    let lambda0 = re(0);

    let jfraction = {
        let (shift, weight) = (shift.clone(), weight.clone());
        JFraction::new(
            Complex64::new(lambda0, 0.0),
            move |n| Complex64::new(shift(n), 0.0),
            move |n| Complex64::new(weight(n), 0.0),
        )
    };
    let sequence = CoefficientSequence::from_rules("contracted S-fraction", move |n| -shift(n + 1), move |n| weight(n).sqrt());
    Ok(Contraction { lambda0, jfraction, sequence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;

    fn positive_rule(f: impl Fn(usize) -> f64 + Send + Sync + 'static) -> SFraction {
        SFraction::from_fn(SFractionKind::PositiveReal, move |k| Complex64::new(f(k), 0.0)).unwrap()
    }

    #[test]
    fn constant_s_fraction_contracts_to_constant_tail() {
        let c = 0.7;
        let j = s_to_j(&SFraction::rule(SRule::Constant { value: c }).unwrap()).unwrap();
        assert_eq!(j.lambda0, c);
        assert_eq!(j.shift(1), c);
        for n in 2..20 {
            assert_eq!(j.shift(n), 2.0 * c);
            assert_eq!(j.weight(n), c * c);
        }
    }

    #[test]
    fn linear_s_fraction_contraction_values() {
        let j = s_to_j(&SFraction::rule(SRule::Linear { offset: 1.0, slope: 1.0 }).unwrap()).unwrap();
        // b = (1, 2, 3, 4, 5, ...)
        assert_eq!(j.lambda0, 1.0);
        assert_eq!(j.shift(1), 2.0);
        assert_eq!(j.weight(1), 6.0);
        assert_eq!(j.shift(2), 7.0);
        assert_eq!(j.weight(2), 20.0);
        assert_eq!(j.sequence.diag(1), -7.0);
        assert_eq!(j.sequence.offdiag(2), 20f64.sqrt());
    }

    #[test]
    fn vanishing_s_coefficients_give_vanishing_j_coefficients() {
        let j = s_to_j(&positive_rule(|k| 1.0 / (k as f64 + 1.0))).unwrap();
        assert!(j.shift(5000).abs() < 1e-3);
        assert!(j.weight(5000) < 1e-6);
    }

    #[test]
    fn contraction_rejects_complex_and_nonpositive() {
        assert!(SFraction::positive_table(vec![1.0, 0.0, 2.0]).is_err());
        let s = SFraction::complex_table(vec![Complex64::new(1.0, 1.0)]).unwrap();
        assert_eq!(s.kind(), SFractionKind::Complex);
        assert!(s_to_j(&s).is_err());
        let s = SFraction::rule(SRule::Constant { value: -1.0 }).unwrap();
        assert!(s_to_j(&s).is_err());
    }

    #[test]
    fn blumenthal_intervals() {
        let z = blumenthal_limits(0.0, 0.0).unwrap();
        assert_eq!(z.essential_interval, (0.0, 0.0));
        let one = blumenthal_limits(1.0, 1.0).unwrap();
        assert_eq!(one.essential_interval, (-4.0, 0.0));
        let r = blumenthal_limits(1.0, 4.0).unwrap();
        assert_eq!((r.a, r.b), (4.0, -5.0));
        assert_eq!(r.essential_interval, (-9.0, -1.0));
        assert!(blumenthal_limits(-1.0, 1.0).is_err());
    }

    #[test]
    fn truncation_shapes() {
        let cheb = FamilySpec::Chebyshev { a: 1.0, b: 0.0 }.build().unwrap();
        let t = cheb.truncate(2).unwrap();
        assert_eq!(t.diag(), &[0.0, 0.0]);
        assert_eq!(t.offdiag(), &[0.5]);

        let lommel = FamilySpec::Lommel { nu: 1.0 }.build().unwrap();
        let t = lommel.truncate(2).unwrap();
        assert!((t.offdiag()[0] - (1.0f64 / 8.0).sqrt()).abs() < 1e-16);

        let t = lommel.truncate(1).unwrap();
        assert_eq!(t.n(), 1);
        assert_eq!(t.diag(), &[0.0]);
        assert!(t.offdiag().is_empty());

        assert!(lommel.truncate(0).is_err());
    }

    #[test]
    fn truncate_rejects_nonpositive_offdiag() {
        let c = CoefficientSequence::from_rules("bad", |_| 0.0, |n| if n == 3 { 0.0 } else { 1.0 });
        assert!(c.truncate(3).is_ok());
        assert!(matches!(c.truncate(4), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn classification_of_families() {
        let w = 1 << 10..1 << 17;
        let lommel = FamilySpec::Lommel { nu: 1.0 }.build().unwrap().classify(w.clone(), 1e-12).unwrap();
        assert_eq!(lommel.is_compact, Verdict::Yes);
        assert_eq!(lommel.is_trace_class, Verdict::No);

        let rr = FamilySpec::RogersRamanujan { a: 0.0, b: 1.0, q: 0.5 }.build().unwrap();
        let rr = rr.classify(w.clone(), 1e-12).unwrap();
        assert_eq!(rr.is_compact, Verdict::Yes);
        assert_eq!(rr.is_trace_class, Verdict::Yes);

        let cheb = FamilySpec::Chebyshev { a: 1.0, b: 0.0 }.build().unwrap().classify(w, 1e-12).unwrap();
        assert_eq!(cheb.mab, Some((1.0, 0.0)));
        assert_eq!(cheb.is_compact, Verdict::No);
        assert_eq!(cheb.is_trace_class, Verdict::No);
    }

    #[test]
    fn declared_limits_give_mab() {
        let c = CoefficientSequence::from_rules("mab", |n| 1.0 / (n as f64 + 2.0), |n| 0.5 + 1.0 / (n as f64 + 1.0))
            .with_limits(Limits::new(0.5, 0.0).unwrap());
        let r = c.classify(100..1000, 1e-6).unwrap();
        assert_eq!(r.mab, Some((1.0, 0.0)));
        assert_eq!(r.is_compact, Verdict::No);
    }

    #[test]
    fn heuristic_classification_never_says_no_to_slow_decay() {
        let c = CoefficientSequence::from_rules("slow", |n| 1.0 / (n as f64 + 1.0), |n| 1.0 / (n as f64 + 1.0));
        let r = c.classify(1000..2000, 1e-6).unwrap();
        assert_eq!(r.is_compact, Verdict::Undetermined);
        assert_eq!(r.is_trace_class, Verdict::Undetermined);
        assert_eq!(r.mab, None);

        let fast = CoefficientSequence::from_rules("fast", |n| 0.5f64.powi(n as i32), |n| 0.5f64.powi(n as i32));
        let r = fast.classify(100..200, 1e-6).unwrap();
        assert_eq!(r.is_compact, Verdict::Yes);
        assert_eq!(r.is_trace_class, Verdict::Yes);
        assert_eq!(r.mab, Some((0.0, 0.0)));
    }

    #[test]
    fn classification_preconditions() {
        let c = FamilySpec::Lommel { nu: 1.0 }.build().unwrap();
        assert!(c.classify(5..5, 1e-6).is_err());
        assert!(c.classify(5..10, 0.0).is_err());
    }

    #[test]
    fn table_tail_follows_limits() {
        let c = CoefficientSequence::table(vec![0.1, 0.2], vec![0.7], None).unwrap();
        assert_eq!(c.diag(10), 0.2);
        assert_eq!(c.offdiag(10), 0.7);
        let c = c.with_limits(Limits::new(0.5, 0.0).unwrap());
        assert_eq!(c.diag(1), 0.2);
        assert_eq!(c.diag(10), 0.0);
        assert_eq!(c.offdiag(1), 0.7);
        assert_eq!(c.offdiag(10), 0.5);
        assert!(CoefficientSequence::table(vec![0.0], vec![-1.0], None).is_err());
        assert!(Limits::new(-0.1, 0.0).is_err());
    }

    #[test]
    fn document_round_trip() {
        let json = r#"{"kind":"rule","family":"lommel","params":{"nu":1.0}}"#;
        let c = CoefficientSequence::from_json(json).unwrap();
        let doc = c.to_document().unwrap();
        let again = CoefficientSequence::from_document(&doc).unwrap();
        assert_eq!(again.to_document().unwrap(), doc);
        assert_eq!(again.offdiag(1), c.offdiag(1));

        let bad = r#"{"kind":"rule","family":"lommel","params":{"nu":1.0},"limits":[1.0,0.0]}"#;
        assert!(CoefficientSequence::from_json(bad).is_err());

        let table = r#"{"kind":"table","diag":[0,0,0],"offdiag":[0.5,0.5],"limits":[0.5,0]}"#;
        let c = CoefficientSequence::from_json(table).unwrap();
        assert_eq!(c.limits(), Some(Limits { a_limit: 0.5, b_limit: 0.0 }));
        assert!(CoefficientSequence::from_rules("code", |_| 0.0, |_| 1.0).to_document().is_err());
    }

    #[test]
    fn s_fraction_documents() {
        let s = SFraction::from_json(r#"{"kind":"table","terms":[1, 2, [0.5, -1]]}"#).unwrap();
        assert_eq!(s.kind(), SFractionKind::Complex);
        assert_eq!(s.term(2), Complex64::new(0.5, -1.0));
        assert_eq!(s.term(9), Complex64::new(0.5, -1.0));
        let s = SFraction::from_json(r#"{"kind":"rule","rule":"geometric","scale":1,"ratio":0.5}"#).unwrap();
        assert_eq!(s.kind(), SFractionKind::PositiveReal);
        assert_eq!(s.term(3).re, 0.125);
        assert!(SFraction::from_json(r#"{"kind":"table","terms":[]}"#).is_err());
    }

    proptest::proptest! {
        #[test]
        fn truncation_prefix_is_stable(nu in 0.05f64..4.0, n in 1usize..60) {
            let c = FamilySpec::Lommel { nu }.build().unwrap();
            let small = c.truncate(n).unwrap();
            let big = c.truncate(n + 1).unwrap();
            proptest::prop_assert_eq!(small.diag(), &big.diag()[..n]);
            proptest::prop_assert_eq!(small.offdiag(), &big.offdiag()[..n - 1]);
        }

        #[test]
        fn blumenthal_width_is_twice_a(l in 0.0f64..10.0, l1 in 0.0f64..10.0) {
            let r = blumenthal_limits(l, l1).unwrap();
            let (lo, hi) = r.essential_interval;
            proptest::prop_assert!(hi - lo >= 0.0);
            proptest::prop_assert!((hi - lo - 2.0 * r.a).abs() <= 1e-12 * (1.0 + r.a));
            proptest::prop_assert!((r.a - 4.0 * (l * l1).sqrt() / 2.0).abs() <= 1e-12 * (1.0 + r.a));
        }

        #[test]
        fn trace_class_implies_compact(decay in 0.05f64..0.95, shift in 0usize..3) {
            let c = CoefficientSequence::from_rules("geo", move |n| decay.powi(n as i32 + shift as i32), move |n| decay.powi(n as i32));
            let r = c.classify(512..4096, 1e-9).unwrap();
            if r.is_trace_class == Verdict::Yes {
                proptest::prop_assert_eq!(r.is_compact, Verdict::Yes);
            }
        }
    }
}
