use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tridiag::{eigen_tridiag, EigenDecomposition};
use crate::coeffs::CoefficientSequence;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    /// Persistence tolerance on eigenvalues between the two largest sizes.
    pub tol: f64,
    /// Single-linkage distance for clustering; defaults to `10 * tol`.
    pub linkage: Option<f64>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { tol: 1e-12, linkage: None }
    }
}

impl SweepOptions {
    pub fn with_tol(tol: f64) -> Self {
        SweepOptions { tol, linkage: None }
    }

    fn epsilon(&self) -> f64 {
        self.linkage.unwrap_or(10.0 * self.tol)
    }
}

/// An eigenvalue of the largest section that was already present, with the
/// same weight, in the next largest one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergedPoint {
    pub value: f64,
    pub weight: f64,
    pub residual: f64,
}

/// A cluster of non-persistent eigenvalues whose population grows with size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccumulationEstimate {
    pub center: f64,
    /// Members of the cluster at the largest size.
    pub members: usize,
    /// Eigenvalues inside the cluster span at the two largest sizes.
    pub count_previous: usize,
    pub count_last: usize,
    pub span: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub sizes: Vec<usize>,
    pub eigenvalues: Vec<Vec<f64>>,
    pub weights: Vec<Vec<f64>>,
    /// Ascending by value.
    pub converged_points: Vec<ConvergedPoint>,
    pub accumulation_estimates: Vec<AccumulationEstimate>,
    pub essential_interval: Option<(f64, f64)>,
    pub tol: f64,
    pub linkage: f64,
}

impl SpectrumReport {
    pub fn accumulation_centers(&self) -> Vec<f64> {
        self.accumulation_estimates.iter().map(|a| a.center).collect()
    }

    /// Converged points sorted by decreasing value.
    pub fn top_points(&self, k: usize) -> Vec<ConvergedPoint> {
        self.converged_points.iter().rev().take(k).copied().collect()
    }

    /// Converged points sorted by increasing value.
    pub fn bottom_points(&self, k: usize) -> Vec<ConvergedPoint> {
        self.converged_points.iter().take(k).copied().collect()
    }
}

/// Spectra of several finite sections, with converged mass points and
/// accumulation points read off the two largest sizes.
///
/// A point of the largest section persists if the nearest eigenvalue of the
/// previous section lies within `tol` and their weights agree to
/// `sqrt(tol) * max(w)`. The remaining eigenvalues are grouped by single
/// linkage at distance `eps`; a group of at least two is reported when more
/// eigenvalues of the largest section than of the previous one fall within
/// `eps` of its span. Groups inside a declared non-degenerate essential
/// interval are not reported, since every point there is an accumulation point.
pub fn spectrum_sweep(c: &CoefficientSequence, sizes: &[usize], opts: SweepOptions) -> Result<SpectrumReport> {
    if sizes.len() < 2 {
        return Err(invalid("spectrum sweep needs at least two sizes"));
    }
    if sizes[0] == 0 || sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("sizes must be positive and strictly increasing"));
    }
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(invalid("tol must be positive"));
    }
    let eps = opts.epsilon();
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid("linkage distance must be positive"));
    }

    let decomps: Vec<EigenDecomposition> = sizes
        .par_iter()
        .map(|&n| c.truncate(n).and_then(|t| eigen_tridiag(&t)))
        .collect::<Result<_>>()?;

    let last = &decomps[decomps.len() - 1];
    let prev = &decomps[decomps.len() - 2];
    let (converged_points, loose) = persistent(prev, last, opts.tol);

    let essential_interval = c.limits().map(|l| l.essential_interval());
    let open_interval = c.limits().filter(|l| l.a_limit > 0.0).map(|l| l.essential_interval());
    let accumulation_estimates = clusters(&loose, eps)
        .into_iter()
        .filter(|m| m.len() >= 2)
        .filter_map(|m| {
            let span = (m[0] - eps, m[m.len() - 1] + eps);
            let count_last = count_in(&last.eigenvalues, span);
            let count_previous = count_in(&prev.eigenvalues, span);
            (count_last > count_previous).then(|| AccumulationEstimate {
                center: median(&m),
                members: m.len(),
                count_previous,
                count_last,
                span: (m[0], m[m.len() - 1]),
            })
        })
        .filter(|a| match open_interval {
            Some((lo, hi)) => a.center < lo - eps || a.center > hi + eps,
            None => true,
        })
        .collect();

    let (eigenvalues, weights) = decomps.into_iter().map(|d| (d.eigenvalues, d.weights)).unzip();
    Ok(SpectrumReport {
        sizes: sizes.to_vec(),
        eigenvalues,
        weights,
        converged_points,
        accumulation_estimates,
        essential_interval,
        tol: opts.tol,
        linkage: eps,
    })
}

fn persistent(prev: &EigenDecomposition, last: &EigenDecomposition, tol: f64) -> (Vec<ConvergedPoint>, Vec<f64>) {
    let wtol = tol.sqrt();
    let mut points = Vec::new();
    let mut loose = Vec::new();
    let xs = &prev.eigenvalues;
    for (&x, &w) in last.eigenvalues.iter().zip(&last.weights) {
        let i = xs.partition_point(|&v| v < x);
        let nearest = [i.checked_sub(1), (i < xs.len()).then_some(i)]
            .into_iter()
            .flatten()
            .min_by(|&a, &b| (xs[a] - x).abs().total_cmp(&(xs[b] - x).abs()));
        let kept = nearest.and_then(|j| {
            let dx = (xs[j] - x).abs();
            let dw = (prev.weights[j] - w).abs();
            (dx <= tol && dw <= wtol * w.max(prev.weights[j])).then_some(dx)
        });
        match kept {
            Some(residual) => points.push(ConvergedPoint { value: x, weight: w, residual }),
            None => loose.push(x),
        }
    }
    (points, loose)
}

/// Single-linkage groups of a sorted list.
fn clusters(sorted: &[f64], eps: f64) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for &x in sorted {
        match out.last_mut() {
            Some(group) if x - group[group.len() - 1] <= eps => group.push(x),
            _ => out.push(vec![x]),
        }
    }
    out
}

fn count_in(sorted: &[f64], (lo, hi): (f64, f64)) -> usize {
    sorted.partition_point(|&v| v <= hi) - sorted.partition_point(|&v| v < lo)
}

/// Median of the cluster members. Unconverged eigenvalues of `mu + compact`
/// spread symmetrically (arcsine-like) around `mu`, so the densest part of a
/// cluster is its edges, not its centre.
fn median(members: &[f64]) -> f64 {
    let n = members.len();
    if n % 2 == 1 {
        members[n / 2]
    } else {
        0.5 * (members[n / 2 - 1] + members[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{lommel_eigenvalues, FamilySpec};

    #[test]
    fn lommel_points_and_accumulation() {
        let c = FamilySpec::Lommel { nu: 1.0 }.build().unwrap();
        let r = spectrum_sweep(&c, &[400, 800], SweepOptions::with_tol(1e-6)).unwrap();
        let oracle = lommel_eigenvalues(1.0, 5).unwrap();
        for (p, want) in r.top_points(5).iter().zip(&oracle) {
            assert!((p.value - want).abs() < 1e-6);
            assert!(p.residual <= 1e-6);
        }
        // symmetric spectrum
        assert!((r.bottom_points(1)[0].value + oracle[0]).abs() < 1e-6);
        let centers = r.accumulation_centers();
        assert_eq!(centers.len(), 1, "{centers:?}");
        assert!(centers[0].abs() < 1e-2);
    }

    #[test]
    fn small_sections_need_wider_linkage() {
        // At (200, 400) the unconverged Lommel eigenvalues sit further apart
        // than 10 * tol, so only a wider linkage joins them.
        let c = FamilySpec::Lommel { nu: 1.0 }.build().unwrap();
        let narrow = spectrum_sweep(&c, &[200, 400], SweepOptions::with_tol(1e-6)).unwrap();
        assert!(narrow.accumulation_estimates.is_empty());
        let wide = spectrum_sweep(&c, &[200, 400], SweepOptions { tol: 1e-6, linkage: Some(1e-4) }).unwrap();
        let centers = wide.accumulation_centers();
        assert_eq!(centers.len(), 1);
        assert!(centers[0].abs() < 1e-2);
        assert!((wide.top_points(1)[0].value - 0.41583057731562373).abs() < 1e-6);
    }

    #[test]
    fn chebyshev_has_no_isolated_points() {
        let c = FamilySpec::Chebyshev { a: 1.0, b: 0.0 }.build().unwrap();
        let r = spectrum_sweep(&c, &[200, 400], SweepOptions::with_tol(1e-6)).unwrap();
        assert!(r.converged_points.is_empty());
        assert!(r.accumulation_estimates.is_empty());
        assert_eq!(r.essential_interval, Some((-1.0, 1.0)));
    }

    #[test]
    fn report_invariants() {
        let c = FamilySpec::TricomiCarlitz { alpha: 2.0 }.build().unwrap();
        let r = spectrum_sweep(&c, &[50, 100, 200], SweepOptions::with_tol(1e-8)).unwrap();
        assert_eq!(r.eigenvalues.len(), 3);
        for (ev, w) in r.eigenvalues.iter().zip(&r.weights) {
            assert!(ev.windows(2).all(|p| p[1] > p[0]));
            assert!(w.iter().all(|&v| v > 0.0));
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!(r.converged_points.iter().all(|p| p.residual <= r.tol));
        assert!(r.converged_points.windows(2).all(|p| p[1].value > p[0].value));
    }

    #[test]
    fn rejects_bad_sizes() {
        let c = FamilySpec::Lommel { nu: 1.0 }.build().unwrap();
        assert!(spectrum_sweep(&c, &[100], SweepOptions::default()).is_err());
        assert!(spectrum_sweep(&c, &[100, 100], SweepOptions::default()).is_err());
        assert!(spectrum_sweep(&c, &[0, 100], SweepOptions::default()).is_err());
        assert!(spectrum_sweep(&c, &[10, 20], SweepOptions::with_tol(0.0)).is_err());
    }

    #[test]
    fn clustering_helpers() {
        let g = clusters(&[0.0, 0.05, 0.1, 1.0, 1.02, 5.0], 0.06);
        assert_eq!(g.len(), 3);
        assert_eq!(g[0].len(), 3);
        assert_eq!(count_in(&[0.0, 1.0, 2.0, 3.0], (1.0, 2.0)), 2);
        assert_eq!(median(&[1.0, 2.0, 4.0]), 2.0);
        assert_eq!(median(&[1.0, 2.0, 4.0, 8.0]), 3.0);
    }
}
