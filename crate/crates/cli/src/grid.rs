use std::path::{Path, PathBuf};

use log::info;
use rayon::prelude::*;

use crate::config::{Scenario, ScenarioConfig};
use crate::error::{CliError, Result};
use crate::run::{simulate, write_csv_file};

pub const GRID_R: [f64; 3] = [0.5, 1.0, 2.0];

/// The nine scenario and non-reciprocity combinations, built on `base`.
pub fn grid_configs(base: &ScenarioConfig, out_dir: &Path) -> Vec<ScenarioConfig> {
    Scenario::ALL
        .iter()
        .flat_map(|&scenario| {
            GRID_R.iter().map(move |&r| ScenarioConfig {
                scenario,
                r,
                out_path: Some(out_dir.join(format!("{scenario}_r{r}.csv"))),
                ..base.clone()
            })
        })
        .collect()
}

/// Runs the grid in parallel, one CSV per configuration.
pub fn run_grid(base: &ScenarioConfig, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io { path: out_dir.into(), source })?;
    grid_configs(base, out_dir)
        .into_par_iter()
        .map(|cfg| {
            let records = simulate(&cfg)?;
            let path = cfg.out_path.clone().expect("grid configs carry an output path");
            write_csv_file(&path, &cfg, &records)?;
            info!("{} r={} done", cfg.scenario, cfg.r);
            Ok(path)
        })
        .collect()
}
