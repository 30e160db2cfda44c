//! Spectra of finite sections: eigensolver, size sweeps, Krein's `g(J)` test
//! and eigenvalue density inside the essential interval.

mod krein;
mod sweep;
mod tridiag;

use serde::{Deserialize, Serialize};

pub use krein::{krein_gj_decay, BandProfile, KreinPolynomial, KreinReport};
pub use sweep::{spectrum_sweep, AccumulationEstimate, ConvergedPoint, SpectrumReport, SweepOptions};
pub use tridiag::{eigen_tridiag, tridiag_eigenvalues, EigenDecomposition, SWEEP_CAP};

use crate::coeffs::CoefficientSequence;
use crate::error::{invalid, Error, Result};

/// Tolerance used when checking interlacing of consecutive sections.
pub const INTERLACE_TOL: f64 = 1e-12;

/// One line of the eigenvalue/weight table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub size: usize,
    pub index: usize,
    pub eigenvalue: f64,
    pub weight: f64,
}

impl SpectrumReport {
    pub fn rows(&self) -> Vec<SpectrumRow> {
        self.sizes
            .iter()
            .zip(self.eigenvalues.iter().zip(&self.weights))
            .flat_map(|(&size, (ev, w))| {
                ev.iter().zip(w).enumerate().map(move |(index, (&eigenvalue, &weight))| SpectrumRow {
                    size,
                    index,
                    eigenvalue,
                    weight,
                })
            })
            .collect()
    }
}

/// `small` (size N, ascending) strictly interlaces `large` (size N+1):
/// `large[k] < small[k] < large[k+1]`, each with slack `tol`.
pub fn interlaces(small: &[f64], large: &[f64], tol: f64) -> bool {
    large.len() == small.len() + 1
        && small.iter().enumerate().all(|(k, &x)| large[k] - tol < x && x < large[k + 1] + tol)
}

/// Largest gap between consecutive eigenvalues of the `n`-section inside
/// `[lo, hi]`.
///
/// Needs at least three eigenvalues in the interval: with fewer, the "gap" is
/// just the distance between two points and says nothing about density.
pub fn zero_gap_density(c: &CoefficientSequence, n: usize, (lo, hi): (f64, f64)) -> Result<f64> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid(format!("inner interval [{lo}, {hi}] is empty or not finite")));
    }
    if let Some(l) = c.limits() {
        let (elo, ehi) = l.essential_interval();
        if !(elo < lo && hi < ehi) {
            return Err(invalid(format!(
                "inner interval [{lo}, {hi}] is not strictly inside the essential interval [{elo}, {ehi}]"
            )));
        }
    }
    let ev = tridiag_eigenvalues(&c.truncate(n)?)?;
    let inside: Vec<f64> = ev.into_iter().filter(|&x| lo <= x && x <= hi).collect();
    if inside.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "only {} eigenvalues of the {n}-section fall in [{lo}, {hi}]; increase N",
            inside.len()
        )));
    }
    Ok(inside.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::Limits;
    use crate::families::{FamilySpec, FAMILY_NAMES};
    use crate::recurrence::christoffel_mass;
    use proptest::prelude::*;

    fn blumenthal_example() -> CoefficientSequence {
        CoefficientSequence::from_rules("blumenthal", |n| 1.0 / (n as f64 + 2.0), |n| 0.5 + 1.0 / (n as f64 + 1.0))
            .with_limits(Limits::new(0.5, 0.0).unwrap())
    }

    #[test]
    fn chebyshev_gap() {
        let c = FamilySpec::Chebyshev { a: 1.0, b: 0.0 }.build().unwrap();
        let gap = zero_gap_density(&c, 2000, (-0.9, 0.9)).unwrap();
        assert!(gap <= std::f64::consts::PI / 2001.0 + 1e-12);
        assert!(zero_gap_density(&c, 2, (-0.9, 0.9)).is_err());
        assert!(zero_gap_density(&c, 100, (-1.5, 0.9)).is_err());
        assert!(zero_gap_density(&c, 100, (0.5, 0.5)).is_err());
    }

    #[test]
    fn perturbed_chebyshev_gap_shrinks() {
        let c = blumenthal_example();
        let gaps: Vec<f64> = [500, 1000, 2000].iter().map(|&n| zero_gap_density(&c, n, (-0.9, 0.9)).unwrap()).collect();
        assert!(gaps[2] < 0.01);
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    }

    #[test]
    fn extremes_fill_the_essential_interval() {
        for c in [FamilySpec::Chebyshev { a: 1.0, b: 0.0 }.build().unwrap(), blumenthal_example()] {
            let ev = tridiag_eigenvalues(&c.truncate(2000).unwrap()).unwrap();
            let inside: Vec<f64> = ev.into_iter().filter(|x| x.abs() <= 1.0).collect();
            assert!((inside[0] + 1.0).abs() < 1e-2);
            assert!((inside[inside.len() - 1] - 1.0).abs() < 1e-2);
        }
    }

    #[test]
    fn weights_match_christoffel() {
        // Forward recurrence at an eigenvalue loses accuracy once the
        // coefficients are small against |x|; keep the section short.
        let c = CoefficientSequence::from_rules(
            "decaying",
            |n| if n % 2 == 0 { 0.3 } else { -0.2 } / (1.0 + n as f64).sqrt(),
            |n| 0.8 / (1.0 + n as f64).sqrt(),
        );
        let n = 16;
        let d = eigen_tridiag(&c.truncate(n).unwrap()).unwrap();
        for (x, w) in d.eigenvalues.iter().zip(&d.weights) {
            let mass = christoffel_mass(&c, *x, n - 1).unwrap().mass(n - 1);
            assert!((w - mass).abs() <= 1e-10 * mass, "x = {x}: {w} vs {mass}");
        }
    }

    #[test]
    fn families_interlace() {
        for name in FAMILY_NAMES {
            let c = FamilySpec::default_for(name).unwrap().build().unwrap();
            let a = tridiag_eigenvalues(&c.truncate(50).unwrap()).unwrap();
            let b = tridiag_eigenvalues(&c.truncate(51).unwrap()).unwrap();
            assert!(interlaces(&a, &b, INTERLACE_TOL), "{name}");
        }
        assert!(!interlaces(&[0.0, 1.0], &[0.5, 0.6, 2.0], 0.0));
    }

    #[test]
    fn rows_cover_all_sizes() {
        let c = FamilySpec::Lommel { nu: 1.0 }.build().unwrap();
        let r = spectrum_sweep(&c, &[3, 5], SweepOptions::with_tol(1e-6)).unwrap();
        let rows = r.rows();
        assert_eq!(rows.len(), 8);
        assert_eq!((rows[3].size, rows[3].index), (5, 0));
    }

    proptest! {
        #[test]
        fn random_sections_interlace(
            diag in proptest::collection::vec(-1.0f64..1.0, 31),
            off in proptest::collection::vec(0.05f64..1.0, 30),
        ) {
            let small = TruncatedJacobiPair::new(&diag, &off);
            prop_assert!(interlaces(&small.0, &small.1, INTERLACE_TOL));
        }
    }

    struct TruncatedJacobiPair(Vec<f64>, Vec<f64>);

    impl TruncatedJacobiPair {
        fn new(diag: &[f64], off: &[f64]) -> Self {
            use crate::coeffs::TruncatedJacobi;
            let n = diag.len() - 1;
            let s = TruncatedJacobi::new(diag[..n].to_vec(), off[..n - 1].to_vec()).unwrap();
            let l = TruncatedJacobi::new(diag.to_vec(), off.to_vec()).unwrap();
            TruncatedJacobiPair(tridiag_eigenvalues(&s).unwrap(), tridiag_eigenvalues(&l).unwrap())
        }
    }
}
