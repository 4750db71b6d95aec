//! Singular values by one-sided (Hestenes) Jacobi, plus the trace norm.

use faer::Side;

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    // Orthogonalize whichever side has fewer vectors.
    let work = if a.rows() >= a.cols() { a.clone() } else { a.adjoint() };
    let (m, n) = (work.rows(), work.cols());

    // Column-major copy so each column is contiguous.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| (0..m).map(|i| work[(i, j)]).collect()).collect();
    let mut norms: Vec<f64> = cols.iter().map(|c| sq_norm(c)).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = norms[p];
                let beta = norms[q];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma: C64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

                let (left, right) = cols.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
                    // rotate a_p against the phase-aligned a_q
                    let yq = *y * phase.conj();
                    let xp = *x;
                    *x = xp * c - yq * s;
                    *y = xp * s + yq * c;
                }
                norms[p] = sq_norm(cp);
                norms[q] = sq_norm(cq);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = norms.iter().map(|x| x.sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

fn sq_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    a.ensure_square()?;
    Ok(singular_values(a).iter().sum())
}

/// Eigenvalues of a Hermitian matrix in ascending order. Only the lower
/// triangle is read.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    a.ensure_square()?;
    a.faer_ref().self_adjoint_eigenvalues(Side::Lower).map_err(|_| Error::NoConvergence)
}

/// Trace norm of a Hermitian matrix as `Σ|λ|`, which coincides with the sum of
/// singular values but costs a tridiagonal eigensolve instead of an SVD.
pub fn hermitian_trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(a)?.iter().map(|x| x.abs()).sum())
}
