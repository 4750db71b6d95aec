//! Cross-checks a scenario against the exact propagator and the pure-state
//! entanglement formula.

use chiralcav::evolution::{integrate_observed, normalize};
use chiralcav::numerics::mat_exp;
use chiralcav::{build_operators, log_negativity, schmidt_logneg, PureState, C64};

use crate::config::ScenarioConfig;
use crate::error::Result;

pub const PROPAGATOR_TOL: f64 = 1e-7;
pub const ENTANGLEMENT_TOL: f64 = 1e-7;
pub const PURITY_TOL: f64 = 1e-7;
pub const HERMITICITY_TOL: f64 = 1e-9;
pub const TRACE_DRIFT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual < self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub checks: Vec<Check>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            s += &format!("{verdict} {:<24} residual {:.3e} (tol {:.0e})\n", c.name, c.residual, c.tolerance);
        }
        s
    }
}

/// Integrates the scenario once and, at every sample, compares against the
/// exact propagator and an independently propagated state vector.
pub fn oracle_check(cfg: &ScenarioConfig) -> Result<OracleReport> {
    cfg.validate()?;
    let evo = cfg.evolution()?;
    let ops = build_operators(&evo.spec)?;
    let dim = cfg.dim;
    let interval = evo.dt * evo.sample_every as f64;
    // Every initial state is a pure ket, so e^{−iHt}ρ₀e^{iH†t} = (e^{−iHt}ψ)(e^{−iHt}ψ)†.
    let u = mat_exp(&ops.h.scale(C64::new(0.0, -interval)))?;

    let ket0 = cfg.state().initial_ket(dim)?;
    let rho0 = ket0.density();
    let mut ket = ket0;
    let (mut propagator, mut entanglement, mut purity, mut hermiticity, mut trace_drift) = (0f64, 0f64, 0f64, 0f64, 0f64);

    integrate_observed(&rho0, &ops, &evo, |s| {
        if s.step > 0 {
            ket = PureState::new(u.mat_vec(ket.amplitudes())?);
        }
        propagator = propagator.max(s.rho_raw.frobenius_distance(&ket.density()));
        hermiticity = hermiticity.max(s.rho_raw.hermiticity_defect());
        trace_drift = trace_drift.max((s.trace_raw.re - 1.0).abs());
        let rho = normalize(s)?;
        purity = purity.max((rho.trace_product(&rho)?.re - 1.0).abs());
        let mixed = log_negativity(&rho, dim, dim)?;
        let pure = schmidt_logneg(&ket.normalized(), dim, dim)?;
        entanglement = entanglement.max((mixed - pure).abs());
        Ok(())
    })?;

    let mut checks = vec![
        Check { name: "integrator-vs-matexp", residual: propagator, tolerance: PROPAGATOR_TOL },
        Check { name: "mixed-vs-schmidt-E_N", residual: entanglement, tolerance: ENTANGLEMENT_TOL },
        Check { name: "purity", residual: purity, tolerance: PURITY_TOL },
        Check { name: "hermiticity", residual: hermiticity, tolerance: HERMITICITY_TOL },
    ];
    // Only Hermitian evolution preserves the trace.
    if cfg.r == 1.0 {
        checks.push(Check { name: "trace-drift", residual: trace_drift, tolerance: TRACE_DRIFT_TOL });
    }
    Ok(OracleReport { checks })
}
