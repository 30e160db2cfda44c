use serde::{Deserialize, Serialize};

use crate::coeffs::TruncatedJacobi;
use crate::error::{Error, Result};

/// Implicit QL sweeps allowed per eigenvalue before giving up.
pub const SWEEP_CAP: usize = 50;

/// Eigenvalues (ascending) and squared first eigenvector components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Full spectrum of a finite section, with Gauss weights.
///
/// Implicit QL with Wilkinson shifts. Only the first row of the accumulated
/// rotation is carried, so the cost stays O(N^2).
pub fn eigen_tridiag(t: &TruncatedJacobi) -> Result<EigenDecomposition> {
    let (values, first) = ql(t, true)?;
    let mut pairs: Vec<(f64, f64)> = values.into_iter().zip(first.into_iter().map(|z| z * z)).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (eigenvalues, weights) = pairs.into_iter().unzip();
    Ok(EigenDecomposition { eigenvalues, weights })
}

/// Eigenvalues only, ascending.
pub fn tridiag_eigenvalues(t: &TruncatedJacobi) -> Result<Vec<f64>> {
    let (mut values, _) = ql(t, false)?;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn ql(t: &TruncatedJacobi, track: bool) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = t.n();
    let mut d = t.diag().to_vec();
    let mut e = t.offdiag().to_vec();
    e.push(0.0);
    let mut z = if track {
        let mut z = vec![0.0; n];
        z[0] = 1.0;
        z
    } else {
        Vec::new()
    };

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m] == 0.0 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > SWEEP_CAP {
                return Err(Error::NumericalFailure(format!(
                    "QL iteration did not converge for eigenvalue {l} of {n} within {SWEEP_CAP} sweeps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if track {
                    let f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    if d.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure("QL iteration produced a non-finite eigenvalue".into()));
    }
    Ok((d, z))
}
