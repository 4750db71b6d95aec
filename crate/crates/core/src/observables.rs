//! Reported quantities: logarithmic negativity, spin moments and periods.

use crate::error::{Error, Result};
use crate::evolution::TrajectoryState;
use crate::fockspace::TwoModeOperators;
use crate::numerics::{hermitian_trace_norm, singular_values, ComplexMatrix, C64, ZERO};
use crate::states::PureState;

/// Raw log-negativities in `(−E_N_CLAMP, 0)` are reported as zero.
pub const E_N_CLAMP: f64 = 1e-9;
/// Allowed deviation of `Tr ρ` from one on entry to [`log_negativity`].
pub const TRACE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRecord {
    pub t: f64,
    pub n_total: f64,
    pub s2: f64,
    pub var_sx: f64,
    pub var_sy: f64,
    pub var_sz: f64,
    pub log_neg: f64,
    pub trace_raw: f64,
}

/// Normalized spin moments of one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinStats {
    pub n_total: f64,
    pub s2: f64,
    pub mean: [f64; 3],
    pub var: [f64; 3],
}

/// `ρ^{T_A}[(i,k),(j,l)] = ρ[(j,k),(i,l)]`
pub fn partial_transpose(rho: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    let n = rho.ensure_square()?;
    if dim_a * dim_b != n {
        return Err(Error::DimensionMismatch(format!("{n} is not {dim_a} x {dim_b}")));
    }
    // Block (i, j) of the result is block (j, i) of ρ.
    let mut out = ComplexMatrix::zeros(n, n);
    let src = rho.as_slice();
    let dst = out.as_mut_slice();
    for i in 0..dim_a {
        for j in 0..dim_a {
            for k in 0..dim_b {
                let to = (i * dim_b + k) * n + j * dim_b;
                let from = (j * dim_b + k) * n + i * dim_b;
                dst[to..to + dim_b].copy_from_slice(&src[from..from + dim_b]);
            }
        }
    }
    Ok(out)
}

/// Trace norm of a Hermitian matrix, diagonalizing each connected component
/// of its sparsity graph separately.
fn sparse_hermitian_trace_norm(m: &ComplexMatrix) -> Result<f64> {
    let n = m.ensure_square()?;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for (j, v) in m.row(i).iter().enumerate().skip(i + 1) {
            if *v != ZERO {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    let mut total = 0.0;
    for g in groups.iter().filter(|g| !g.is_empty()) {
        total += match g.len() {
            1 => m[(g[0], g[0])].re.abs(),
            _ => hermitian_trace_norm(&m.submatrix(g))?,
        };
    }
    Ok(total)
}

/// `E_N = log₂ ‖ρ^{T_A}‖₁` for a normalized state.
pub fn log_negativity(rho: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<f64> {
    let tr = rho.trace()?;
    let deviation = (tr - 1.0).norm();
    if deviation > TRACE_TOL {
        return Err(Error::NotNormalized { deviation });
    }
    let pt = partial_transpose(rho, dim_a, dim_b)?;
    let en = sparse_hermitian_trace_norm(&pt)?.log2();
    Ok(if en < 0.0 && en > -E_N_CLAMP { 0.0 } else { en })
}

/// `2 log₂ Σ sᵢ` over the Schmidt coefficients of a pure two-mode state.
pub fn schmidt_logneg(ket: &PureState, dim_a: usize, dim_b: usize) -> Result<f64> {
    let deviation = (ket.norm() - 1.0).abs();
    if deviation > TRACE_TOL {
        return Err(Error::NotNormalized { deviation });
    }
    let m = ComplexMatrix::from_vec(dim_a, dim_b, ket.amplitudes().to_vec())?;
    let sum: f64 = singular_values(&m).iter().sum();
    Ok(2.0 * sum.log2())
}

/// Nonzero entries of an operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    n: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl SparseOperator {
    pub fn from_dense(m: &ComplexMatrix) -> Self {
        let n = m.rows();
        let entries = (0..n)
            .flat_map(|i| m.row(i).iter().enumerate().filter(|(_, v)| **v != ZERO).map(move |(j, v)| (i, j, *v)))
            .collect();
        Self { n, entries }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `Tr(ρ Q) = Σ Q_ij ρ_ji`
    pub fn trace_with(&self, rho: &ComplexMatrix) -> Result<C64> {
        if rho.rows() != self.n || rho.cols() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "operator acts on dimension {}, state is {}x{}",
                self.n,
                rho.rows(),
                rho.cols()
            )));
        }
        Ok(self.entries.iter().map(|&(i, j, q)| q * rho[(j, i)]).sum())
    }
}

/// Sparse copies of the reported operators, built once per trajectory.
#[derive(Debug, Clone)]
pub struct Observer {
    dim: usize,
    n_total: SparseOperator,
    spin: [SparseOperator; 3],
    spin_sq: [SparseOperator; 3],
    s2: SparseOperator,
}

impl Observer {
    pub fn new(ops: &TwoModeOperators) -> Self {
        let sp = SparseOperator::from_dense;
        Self {
            dim: ops.dim(),
            n_total: sp(&ops.n_total),
            spin: [sp(&ops.sx), sp(&ops.sy), sp(&ops.sz)],
            spin_sq: [sp(&ops.sx2), sp(&ops.sy2), sp(&ops.sz2)],
            s2: sp(&ops.s2),
        }
    }

    /// Spin means and variances of `ρ_raw / Tr ρ_raw`.
    pub fn spin_stats(&self, rho_raw: &ComplexMatrix) -> Result<SpinStats> {
        let tr = rho_raw.trace()?;
        if tr.norm() == 0.0 {
            return Err(Error::NonPositiveTrace { t: f64::NAN, trace: 0.0 });
        }
        let ev = |q: &SparseOperator| -> Result<f64> { Ok((q.trace_with(rho_raw)? / tr).re) };
        let mut mean = [0.0; 3];
        let mut var = [0.0; 3];
        for a in 0..3 {
            mean[a] = ev(&self.spin[a])?;
            var[a] = ev(&self.spin_sq[a])? - mean[a] * mean[a];
        }
        Ok(SpinStats { n_total: ev(&self.n_total)?, s2: ev(&self.s2)?, mean, var })
    }

    /// Every reported quantity for one trajectory sample.
    pub fn observe(&self, state: &TrajectoryState) -> Result<ObservableRecord> {
        let stats = self.spin_stats(&state.rho_raw)?;
        let rho = crate::evolution::normalize(state)?;
        Ok(ObservableRecord {
            t: state.t,
            n_total: stats.n_total,
            s2: stats.s2,
            var_sx: stats.var[0],
            var_sy: stats.var[1],
            var_sz: stats.var[2],
            log_neg: log_negativity(&rho, self.dim, self.dim)?,
            trace_raw: state.trace_raw.re,
        })
    }
}

/// One-off form of [`Observer::spin_stats`].
pub fn spin_stats(rho_raw: &ComplexMatrix, ops: &TwoModeOperators) -> Result<SpinStats> {
    Observer::new(ops).spin_stats(rho_raw)
}

/// One-off form of [`Observer::observe`].
pub fn observe(state: &TrajectoryState, ops: &TwoModeOperators) -> Result<ObservableRecord> {
    Observer::new(ops).observe(state)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodEstimate {
    /// Mean spacing between successive maxima.
    pub period: f64,
    /// Sample standard deviation of the spacings.
    pub std: f64,
    pub peak_times: Vec<f64>,
}

/// Mean spacing of 3-point local maxima that reach 10% of the global max.
pub fn estimate_period(series: &[(f64, f64)]) -> Result<PeriodEstimate> {
    let global = series.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let threshold = 0.1 * global;
    let peak_times: Vec<f64> = series
        .windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1 && w[1].1 >= threshold)
        .map(|w| w[1].0)
        .collect();
    if peak_times.len() < 3 {
        return Err(Error::TooFewPeaks { expected: 3, found: peak_times.len() });
    }
    let gaps: Vec<f64> = peak_times.windows(2).map(|w| w[1] - w[0]).collect();
    let n = gaps.len() as f64;
    let period = gaps.iter().sum::<f64>() / n;
    let std = (gaps.iter().map(|g| (g - period).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    Ok(PeriodEstimate { period, std, peak_times })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{basis_index, build_operators, HamiltonianSpec};
    use crate::numerics::{hermitian_eigenvalues, ONE};
    use crate::states::{coherent_ket, fock_ket, product_density, two_mode_ket, vacuum, StateSpec};

    fn bell(dim: usize) -> PureState {
        let mut v = vec![ZERO; dim * dim];
        v[basis_index(1, 0, dim)] = ONE / 2f64.sqrt();
        v[basis_index(0, 1, dim)] = ONE / 2f64.sqrt();
        PureState::new(v)
    }

    #[test]
    fn partial_transpose_of_bell_projector() {
        let pt = partial_transpose(&bell(2).density(), 2, 2).unwrap();
        let mut ev = hermitian_eigenvalues(&pt).unwrap();
        ev.sort_by(f64::total_cmp);
        for (got, want) in ev.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let rho = StateSpec::Coherent { alpha: C64::new(0.4, -0.3) }.initial_density(3).unwrap();
        let twice = partial_transpose(&partial_transpose(&rho, 3, 3).unwrap(), 3, 3).unwrap();
        assert_eq!(twice, rho);
        assert!(partial_transpose(&rho, 2, 4).is_err());
    }

    #[test]
    fn partial_transpose_rectangular_factors() {
        let rho = ComplexMatrix::from_fn(6, 6, |i, j| C64::new((i * 6 + j) as f64, 0.0));
        let pt = partial_transpose(&rho, 2, 3).unwrap();
        // (i,k)=(1,2), (j,l)=(0,1) → ρ[(0,2),(1,1)]
        assert_eq!(pt[(5, 1)], rho[(2, 4)]);
    }

    #[test]
    fn log_negativity_examples() {
        assert!((log_negativity(&bell(2).density(), 2, 2).unwrap() - 1.0).abs() < 1e-14);
        assert!((log_negativity(&bell(4).density(), 4, 4).unwrap() - 1.0).abs() < 1e-14);
        let prod = product_density(&coherent_ket(C64::new(0.8, 0.1), 5).unwrap(), &fock_ket(2, 5).unwrap()).unwrap();
        assert!(log_negativity(&prod, 5, 5).unwrap().abs() < 1e-9);
        assert!(matches!(
            log_negativity(&prod.scale_real(1.1), 5, 5),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn sparse_trace_norm_matches_dense() {
        let rho = StateSpec::Coherent { alpha: ONE }.initial_density(4).unwrap();
        let pt = partial_transpose(&rho, 4, 4).unwrap();
        let dense = hermitian_trace_norm(&pt).unwrap();
        assert!((sparse_hermitian_trace_norm(&pt).unwrap() - dense).abs() < 1e-12);
        let pt = partial_transpose(&bell(4).density(), 4, 4).unwrap();
        assert!((sparse_hermitian_trace_norm(&pt).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn schmidt_examples() {
        let prod = two_mode_ket(&fock_ket(1, 3).unwrap(), &vacuum(3).unwrap());
        assert!(schmidt_logneg(&prod, 3, 3).unwrap().abs() < 1e-12);
        assert!((schmidt_logneg(&bell(3), 3, 3).unwrap() - 1.0).abs() < 1e-12);
        for theta in [0.1, 0.5, std::f64::consts::FRAC_PI_4, 1.3] {
            let mut v = vec![ZERO; 9];
            v[basis_index(1, 0, 3)] = C64::new(f64::cos(theta), 0.0);
            v[basis_index(0, 1, 3)] = C64::new(0.0, -f64::sin(theta));
            let want = 2.0 * (theta.cos().abs() + theta.sin().abs()).log2();
            let ket = PureState::new(v);
            assert!((schmidt_logneg(&ket, 3, 3).unwrap() - want).abs() < 1e-12);
            assert!((log_negativity(&ket.density(), 3, 3).unwrap() - want).abs() < 1e-12);
        }
        let unnormalized = PureState::new(vec![ONE, ONE, ZERO, ZERO]);
        assert!(schmidt_logneg(&unnormalized, 2, 2).is_err());
    }

    #[test]
    fn spin_stats_of_single_photon() {
        let ops = build_operators(&HamiltonianSpec::new(1.0, 0.1, 1.0, 3).unwrap()).unwrap();
        let rho = product_density(&fock_ket(1, 3).unwrap(), &vacuum(3).unwrap()).unwrap();
        let s = spin_stats(&rho.scale_real(3.0), &ops).unwrap();
        assert!((s.var[0] - 0.25).abs() < 1e-14);
        assert!((s.var[1] - 0.25).abs() < 1e-14);
        assert!(s.var[2].abs() < 1e-14);
        assert!((s.mean[2] - 0.5).abs() < 1e-14);
        assert!((s.n_total - 1.0).abs() < 1e-14);
        assert!((s.s2 - 0.75).abs() < 1e-14);
        assert!(spin_stats(&ComplexMatrix::zeros(9, 9), &ops).is_err());
    }

    #[test]
    fn spin_stats_coherent_and_squeezed() {
        let ops = build_operators(&HamiltonianSpec::new(1.0, 0.1, 1.0, 25).unwrap()).unwrap();
        let rho = StateSpec::Coherent { alpha: ONE }.initial_density(25).unwrap();
        // ⟨S²⟩ = (N/2)(N/2+1) averaged over Poisson(1): (E[N²] + 2E[N])/4 = 1.
        assert!((spin_stats(&rho, &ops).unwrap().s2 - 1.0).abs() < 1e-8);
        let rho = StateSpec::Squeezed { alpha: ONE, epsilon: C64::new(0.1, 0.0) }.initial_density(25).unwrap();
        assert!((spin_stats(&rho, &ops).unwrap().n_total - 1.0100334).abs() < 1e-6);
    }

    #[test]
    fn sparse_expectations_match_dense() {
        let ops = build_operators(&HamiltonianSpec::new(1.0, 0.1, 2.0, 8).unwrap()).unwrap();
        let rho = StateSpec::Squeezed { alpha: C64::new(0.4, 0.2), epsilon: C64::new(0.1, 0.05) }
            .initial_density(8)
            .unwrap();
        for q in [&ops.sx, &ops.sy2, &ops.s2, &ops.h] {
            let sparse = SparseOperator::from_dense(q);
            assert!(sparse.nnz() < 64 * 64 / 8);
            assert!((sparse.trace_with(&rho).unwrap() - rho.trace_product(q).unwrap()).norm() < 1e-14);
        }
        assert!(SparseOperator::from_dense(&ops.sx).trace_with(&ComplexMatrix::identity(4)).is_err());
    }

    #[test]
    fn period_of_synthetic_signal() {
        let t0 = 7.0;
        let dt = t0 / 200.0;
        let series: Vec<(f64, f64)> = (0..=2000)
            .map(|i| {
                let t = i as f64 * dt;
                (t, (std::f64::consts::PI * t / t0).sin().powi(2))
            })
            .collect();
        let est = estimate_period(&series).unwrap();
        assert!((est.period - t0).abs() / t0 < 0.01);
        assert!(est.std < 1e-9);
    }

    #[test]
    fn period_ignores_small_ripples_and_needs_three_peaks() {
        let series: Vec<(f64, f64)> = (0..400)
            .map(|i| {
                let t = i as f64 * 0.05;
                (t, (t * 2.0).sin().powi(2) + 0.01 * (t * 37.0).sin())
            })
            .collect();
        let est = estimate_period(&series).unwrap();
        assert!((est.period - std::f64::consts::FRAC_PI_2).abs() < 0.05);
        // sin(0.2 t) peaks at t ≈ 7.9 and 39.3 only.
        let short: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, (i as f64 * 0.2).sin())).collect();
        assert!(matches!(estimate_period(&short), Err(Error::TooFewPeaks { found: 2, .. })));
    }
}
