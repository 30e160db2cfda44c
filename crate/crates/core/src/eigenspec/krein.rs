use serde::{Deserialize, Serialize};

use crate::coeffs::CoefficientSequence;
use crate::error::{invalid, Result};

/// Monic polynomial `g(x) = (x - x_1)...(x - x_m)` with distinct real roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KreinPolynomial {
    roots: Vec<f64>,
}

impl KreinPolynomial {
    pub fn new(mut roots: Vec<f64>) -> Result<Self> {
        if roots.is_empty() {
            return Err(invalid("Krein polynomial needs at least one root"));
        }
        if roots.iter().any(|r| !r.is_finite()) {
            return Err(invalid("Krein polynomial roots must be finite"));
        }
        roots.sort_by(f64::total_cmp);
        if roots.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("Krein polynomial roots must be distinct"));
        }
        Ok(KreinPolynomial { roots })
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.roots.iter().map(|r| x - r).product()
    }
}

/// Tail profile of one band `k` (entries `g(J)[i, i+k]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandProfile {
    pub band: i64,
    /// `tail_max[i] = max_{i <= r < depth} |g(J)[r, r+k]|`; rows with a
    /// negative column are skipped.
    pub tail_max: Vec<f64>,
    /// First row from which the tail stays below `tol`.
    pub settles_at: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KreinReport {
    pub roots: Vec<f64>,
    pub depth: usize,
    pub tol: f64,
    pub bands: Vec<BandProfile>,
    /// Every band settles below `tol` within the first half of the rows,
    /// leaving at least `depth / 2` rows of confirmation.
    pub compact_consistent: bool,
}

impl KreinReport {
    /// Largest band entry from `row` on, across all bands.
    pub fn tail_max_from(&self, row: usize) -> f64 {
        self.bands.iter().filter_map(|b| b.tail_max.get(row)).fold(0.0, |m, &v| m.max(v))
    }
}

/// Band entries of `g(J)` for rows `0..depth`, and their tail maxima.
///
/// `g(J)` is formed by `m` banded multiplications on the leading
/// `(depth + m)`-row section; rows below `depth` do not see the cut, so the
/// reported entries equal those of the infinite matrix.
pub fn krein_gj_decay(c: &CoefficientSequence, g: &KreinPolynomial, depth: usize, tol: f64) -> Result<KreinReport> {
    let m = g.degree();
    if depth < m.max(1) {
        return Err(invalid(format!("depth {depth} is smaller than the degree {m} of g")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid("tol must be positive"));
    }
    let rows = depth + m;
    let width = 2 * m + 1;
    let diag: Vec<f64> = (0..rows).map(|n| c.diag(n)).collect();
    // off[j] couples j-1 and j; off[0] unused
    let off: Vec<f64> = (0..=rows).map(|n| if n == 0 { 0.0 } else { c.offdiag(n) }).collect();

    // band[i][k + m] = B[i, i + k]
    let mut band = vec![vec![0.0; width]; rows];
    for row in band.iter_mut() {
        row[m] = 1.0;
    }
    let at = |b: &Vec<Vec<f64>>, i: usize, j: isize| -> f64 {
        let k = j - i as isize;
        if j < 0 || j as usize >= rows || k.unsigned_abs() > m {
            0.0
        } else {
            b[i][(k + m as isize) as usize]
        }
    };
    for (step, &root) in g.roots().iter().enumerate() {
        let reach = (step + 1) as isize;
        let mut next = vec![vec![0.0; width]; rows];
        for (i, row) in next.iter_mut().enumerate() {
            for k in -reach..=reach {
                let j = i as isize + k;
                if j < 0 || j as usize >= rows {
                    continue;
                }
                let ju = j as usize;
                // (B (J - root))[i, j]
                let mut v = at(&band, i, j) * (diag[ju] - root);
                if ju >= 1 {
                    v += at(&band, i, j - 1) * off[ju];
                }
                if ju + 1 < rows {
                    v += at(&band, i, j + 1) * off[ju + 1];
                }
                row[(k + m as isize) as usize] = v;
            }
        }
        band = next;
    }

    let bands = (-(m as i64)..=m as i64)
        .map(|k| {
            let mut tail_max = vec![0.0; depth];
            let mut running = 0.0f64;
            for i in (0..depth).rev() {
                if i as i64 + k >= 0 {
                    running = running.max(band[i][(k + m as i64) as usize].abs());
                }
                tail_max[i] = running;
            }
            let settles_at = tail_max.iter().position(|&v| v < tol);
            BandProfile { band: k, tail_max, settles_at }
        })
        .collect::<Vec<_>>();
    let compact_consistent = bands.iter().all(|b| b.settles_at.is_some_and(|r| r <= depth / 2));
    Ok(KreinReport { roots: g.roots().to_vec(), depth, tol, bands, compact_consistent })
}
