use chiralcav::ObservableRecord;
use log::info;

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::run::simulate;

/// Largest log-negativity change tolerated between the two largest truncations.
pub const CONVERGENCE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceStep {
    pub from_dim: usize,
    pub to_dim: usize,
    /// Sup-norm of the log-negativity difference over the shared samples.
    pub sup_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub steps: Vec<ConvergenceStep>,
}

impl ConvergenceReport {
    /// Builds the report from log-negativity series computed at ascending dims.
    pub fn from_series(runs: &[(usize, &[ObservableRecord])]) -> Result<Self> {
        let steps = runs
            .windows(2)
            .map(|w| {
                let ((d0, a), (d1, b)) = (w[0], w[1]);
                if a.len() != b.len() {
                    return Err(CliError::Config(format!("dims {d0} and {d1} produced different sample grids")));
                }
                let sup_diff = a.iter().zip(b.iter()).map(|(x, y)| (x.log_neg - y.log_neg).abs()).fold(0.0, f64::max);
                Ok(ConvergenceStep { from_dim: d0, to_dim: d1, sup_diff })
            })
            .collect::<Result<_>>()?;
        Ok(Self { steps })
    }

    /// Passes when the last consecutive pair differs by less than [`CONVERGENCE_TOL`].
    pub fn passed(&self) -> bool {
        self.steps.last().is_some_and(|s| s.sup_diff < CONVERGENCE_TOL)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for st in &self.steps {
            s += &format!("dim {:>3} -> {:>3}: sup |dE_N| = {:.3e}\n", st.from_dim, st.to_dim, st.sup_diff);
        }
        s += if self.passed() { "PASS\n" } else { "FAIL\n" };
        s
    }
}

/// Runs `cfg` at each truncation in `dims`, which must be strictly ascending.
pub fn convergence_sweep(cfg: &ScenarioConfig, dims: &[usize]) -> Result<ConvergenceReport> {
    if dims.len() < 2 || dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config(format!("need at least two ascending dims, got {dims:?}")));
    }
    let mut series = Vec::with_capacity(dims.len());
    for &dim in dims {
        info!("convergence run at dim {dim}");
        series.push((dim, simulate(&ScenarioConfig { dim, ..cfg.clone() })?));
    }
    let borrowed: Vec<(usize, &[ObservableRecord])> = series.iter().map(|(d, r)| (*d, r.as_slice())).collect();
    ConvergenceReport::from_series(&borrowed)
}
