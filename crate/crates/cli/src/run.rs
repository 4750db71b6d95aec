use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use chiralcav::evolution::integrate_observed;
use chiralcav::{build_operators, ObservableRecord, Observer};
use log::info;

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};

pub const CSV_HEADER: &str = "t,n_total,s2,var_sx,var_sy,var_sz,log_neg,trace_raw";

/// Integrates the configured scenario and returns one record per sample.
pub fn simulate(cfg: &ScenarioConfig) -> Result<Vec<ObservableRecord>> {
    cfg.validate()?;
    let evo = cfg.evolution()?;
    let ops = build_operators(&evo.spec)?;
    let rho0 = cfg.state().initial_density(cfg.dim)?;
    let observer = Observer::new(&ops);
    let mut out = Vec::with_capacity(evo.sample_times().len());
    integrate_observed(&rho0, &ops, &evo, |s| {
        out.push(observer.observe(s)?);
        Ok(())
    })?;
    Ok(out)
}

/// Metadata line written above the CSV header.
pub fn metadata_line(cfg: &ScenarioConfig) -> String {
    format!("# omega0={} g={} r={} dim={}", cfg.omega0, cfg.g, cfg.r, cfg.dim)
}

pub fn write_csv<W: Write>(mut w: W, cfg: &ScenarioConfig, records: &[ObservableRecord]) -> std::io::Result<()> {
    writeln!(w, "{}", metadata_line(cfg))?;
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        let row = [r.t, r.n_total, r.s2, r.var_sx, r.var_sy, r.var_sz, r.log_neg, r.trace_raw];
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.11e}")).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}

/// Runs the scenario and writes its CSV to `cfg.out_path`, or to `out` when
/// no path is configured.
pub fn run_scenario<W: Write>(cfg: &ScenarioConfig, out: W) -> Result<Vec<ObservableRecord>> {
    let records = simulate(cfg)?;
    match &cfg.out_path {
        Some(path) => {
            write_csv_file(path, cfg, &records)?;
            info!("wrote {} samples to {}", records.len(), path.display());
        }
        None => write_csv(out, cfg, &records).map_err(|source| CliError::Io { path: "<stdout>".into(), source })?,
    }
    Ok(records)
}

pub fn write_csv_file(path: &Path, cfg: &ScenarioConfig, records: &[ObservableRecord]) -> Result<()> {
    let io = |source| CliError::Io { path: path.into(), source };
    let file = File::create(path).map_err(io)?;
    write_csv(BufWriter::new(file), cfg, records).map_err(io)
}
