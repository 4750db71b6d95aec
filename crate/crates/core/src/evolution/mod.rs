//! Non-Hermitian density-matrix evolution
//! `ρ̇ = −i[H₊, ρ] − i{H₋, ρ} = −i(Hρ − ρH†)`,
//! with the trace restored only when observables are read out.

mod dense;
mod sector;

use log::debug;

use crate::error::{Error, Result};
use crate::fockspace::{build_operators, HamiltonianSpec, TwoModeOperators};
use crate::numerics::{hermitian_eigenvalues, mat_exp, ComplexMatrix, C64, I};

pub use sector::{SectorLayout, SectorPropagator, Unsupported};

/// Raw traces beyond this are treated as a numerical blow-up.
pub const TRACE_BLOWUP: f64 = 1e12;

/// Which RK4 implementation steps the density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Sector blocks when the Hamiltonian allows it, dense otherwise.
    #[default]
    Auto,
    /// Per-sector block RK4; fails if `H` mixes excitation sectors.
    Sector,
    /// Full dense RK4 on the composite space.
    Dense,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionConfig {
    pub spec: HamiltonianSpec,
    /// Step size in units of `1/ω₀`.
    pub dt: f64,
    pub t_max: f64,
    /// Emit a sample every this many steps.
    pub sample_every: usize,
    pub backend: Backend,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self { spec: HamiltonianSpec::default(), dt: 1e-3, t_max: 100.0, sample_every: 100, backend: Backend::Auto }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_max >= self.dt && self.t_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_max = {} must be at least dt = {}", self.t_max, self.dt)));
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidParameter("sample_every must be at least 1".into()));
        }
        Ok(())
    }

    pub fn total_steps(&self) -> usize {
        (self.t_max / self.dt).round() as usize
    }

    /// Times at which samples are emitted.
    pub fn sample_times(&self) -> Vec<f64> {
        (0..=self.total_steps()).step_by(self.sample_every).map(|s| s as f64 * self.dt).collect()
    }
}

/// One sample of the unnormalized trajectory.
#[derive(Debug, Clone)]
pub struct TrajectoryState {
    pub t: f64,
    pub step: usize,
    pub rho_raw: ComplexMatrix,
    pub trace_raw: C64,
}

impl TrajectoryState {
    fn new(step: usize, t: f64, rho_raw: ComplexMatrix) -> Result<Self> {
        if !rho_raw.is_finite() {
            return Err(Error::NonFinite { t });
        }
        let trace_raw = rho_raw.trace()?;
        if !(trace_raw.re > 0.0) {
            return Err(Error::NonPositiveTrace { t, trace: trace_raw.re });
        }
        if trace_raw.re > TRACE_BLOWUP {
            return Err(Error::TraceBlowup { t, trace: trace_raw.re });
        }
        Ok(Self { t, step, rho_raw, trace_raw })
    }
}

/// `−i(H₊ρ − ρH₊) − i(H₋ρ + ρH₋)`
pub fn rhs(rho: &ComplexMatrix, ops: &TwoModeOperators) -> Result<ComplexMatrix> {
    if rho.rows() != ops.h.rows() || rho.cols() != ops.h.cols() {
        return Err(Error::DimensionMismatch(format!(
            "density matrix is {}x{}, operators act on dimension {}",
            rho.rows(),
            rho.cols(),
            ops.h.rows()
        )));
    }
    let comm = ops.h_plus.commutator(rho)?;
    let anti = ops.h_minus.anticommutator(rho)?;
    Ok((&comm + &anti).scale(-I))
}

/// `e^{−iHt} ρ₀ e^{iH†t}`, the exact solution of the master equation.
pub fn closed_form_propagate(rho0: &ComplexMatrix, t: f64, ops: &TwoModeOperators) -> Result<ComplexMatrix> {
    let u = mat_exp(&ops.h.scale(-I * t))?;
    u.matmul(rho0)?.matmul(&u.adjoint())
}

/// Applies the exact propagator over a fixed interval repeatedly.
pub struct ExactStepper {
    u: ComplexMatrix,
    u_dag: ComplexMatrix,
}

impl ExactStepper {
    pub fn new(ops: &TwoModeOperators, interval: f64) -> Result<Self> {
        let u = mat_exp(&ops.h.scale(-I * interval))?;
        let u_dag = u.adjoint();
        Ok(Self { u, u_dag })
    }

    pub fn step(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.u.matmul(rho)?.matmul(&self.u_dag)
    }
}

/// `ρ / Tr ρ`
pub fn normalize(state: &TrajectoryState) -> Result<ComplexMatrix> {
    let tr = state.rho_raw.trace()?;
    if !(tr.re > 0.0) {
        return Err(Error::NonPositiveTrace { t: state.t, trace: tr.re });
    }
    Ok(state.rho_raw.scale_real(1.0 / tr.re))
}

/// `Tr(ρQ) / Tr(ρ)`
pub fn expectation(rho_raw: &ComplexMatrix, q: &ComplexMatrix) -> Result<C64> {
    let tr = rho_raw.trace()?;
    if tr.norm() == 0.0 {
        return Err(Error::NonPositiveTrace { t: f64::NAN, trace: 0.0 });
    }
    Ok(rho_raw.trace_product(q)? / tr)
}

/// Checks that `rho0` is a density matrix: unit trace, Hermitian, PSD.
pub fn check_density(rho0: &ComplexMatrix, tol: f64) -> Result<()> {
    let tr = rho0.trace()?;
    if (tr - C64::new(1.0, 0.0)).norm() > tol {
        return Err(Error::NotNormalized { deviation: (tr - 1.0).norm() });
    }
    let defect = rho0.hermiticity_defect();
    if defect > tol {
        return Err(Error::InvalidParameter(format!("initial state is not Hermitian (defect {defect:.3e})")));
    }
    let min_ev = hermitian_eigenvalues(rho0)?.into_iter().fold(f64::INFINITY, f64::min);
    if min_ev < -tol {
        return Err(Error::InvalidParameter(format!("initial state has negative eigenvalue {min_ev:.3e}")));
    }
    Ok(())
}

enum Stepper {
    Sector(SectorPropagator),
    Dense(dense::DenseRk4),
}

impl Stepper {
    fn new(ops: &TwoModeOperators, cfg: &EvolutionConfig, rho0: &ComplexMatrix) -> Result<Self> {
        let sector = || SectorPropagator::new(&ops.h, ops.dim(), cfg.dt);
        let stepper = match cfg.backend {
            Backend::Dense => Stepper::Dense(dense::DenseRk4::new(ops, cfg.dt, rho0.clone())),
            Backend::Sector => {
                let mut p = sector().map_err(|why| {
                    Error::InvalidParameter(format!("Hamiltonian unsuitable for the sector integrator: {why:?}"))
                })?;
                p.load(rho0);
                Stepper::Sector(p)
            }
            Backend::Auto => match sector() {
                Ok(mut p) => {
                    p.load(rho0);
                    Stepper::Sector(p)
                }
                Err(why) => {
                    debug!("falling back to dense RK4: {why:?}");
                    Stepper::Dense(dense::DenseRk4::new(ops, cfg.dt, rho0.clone()))
                }
            },
        };
        Ok(stepper)
    }

    fn advance(&mut self, steps: usize) -> Result<()> {
        match self {
            Stepper::Sector(p) => {
                p.advance(steps);
                Ok(())
            }
            Stepper::Dense(d) => d.advance(steps),
        }
    }

    fn current(&self) -> ComplexMatrix {
        match self {
            Stepper::Sector(p) => p.assemble(),
            Stepper::Dense(d) => d.current().clone(),
        }
    }
}

/// Integrates with fixed-step RK4 and hands every sample to `observer`.
///
/// Samples are emitted at step 0 and then every `cfg.sample_every` steps.
/// Integration stops at the first error from the observer or at the first
/// sample whose trace is non-positive, above [`TRACE_BLOWUP`] or non-finite.
pub fn integrate_observed<F>(
    rho0: &ComplexMatrix,
    ops: &TwoModeOperators,
    cfg: &EvolutionConfig,
    mut observer: F,
) -> Result<()>
where
    F: FnMut(&TrajectoryState) -> Result<()>,
{
    cfg.validate()?;
    if rho0.rows() != ops.composite_dim() || !rho0.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "initial state is {}x{}, expected {n}x{n}",
            rho0.rows(),
            rho0.cols(),
            n = ops.composite_dim()
        )));
    }
    check_density(rho0, 1e-10)?;

    let total = cfg.total_steps();
    let mut stepper = Stepper::new(ops, cfg, rho0)?;
    let mut step = 0;
    observer(&TrajectoryState::new(0, 0.0, rho0.clone())?)?;
    while step + cfg.sample_every <= total {
        stepper.advance(cfg.sample_every)?;
        step += cfg.sample_every;
        let t = step as f64 * cfg.dt;
        observer(&TrajectoryState::new(step, t, stepper.current())?)?;
    }
    Ok(())
}

/// Integrates and collects every sample. Memory grows with the number of
/// samples times the size of `ρ`; prefer [`integrate_observed`] for large
/// truncations.
pub fn integrate(rho0: &ComplexMatrix, cfg: &EvolutionConfig) -> Result<Vec<TrajectoryState>> {
    let ops = build_operators(&cfg.spec)?;
    let mut out = Vec::new();
    integrate_observed(rho0, &ops, cfg, |s| {
        out.push(s.clone());
        Ok(())
    })?;
    Ok(out)
}
