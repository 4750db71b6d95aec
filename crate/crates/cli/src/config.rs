//! Scenario configuration: defaults, an optional flat JSON file, and
//! command-line flags, in increasing order of precedence.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chiralcav::{EvolutionConfig, HamiltonianSpec, StateSpec, C64};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Fock,
    Coherent,
    Squeezed,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::Fock, Scenario::Coherent, Scenario::Squeezed];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fock => "fock",
            Scenario::Coherent => "coherent",
            Scenario::Squeezed => "squeezed",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Complex number accepted as `1`, `-0.5i`, `0.3+0.2i` or `1e-1-2i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub C64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("cannot parse {s:?} as a complex number");
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix('i') else {
            return t.parse().map(|re| ComplexArg(C64::new(re, 0.0))).map_err(|_| bad());
        };
        // Split at the last sign that is not the leading one or part of an exponent.
        let split = body
            .char_indices()
            .filter(|&(i, c)| (c == '+' || c == '-') && i > 0 && !matches!(body.as_bytes()[i - 1], b'e' | b'E'))
            .map(|(i, _)| i)
            .last();
        let parse_im = |x: &str| match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        };
        match split {
            Some(i) => {
                let re = body[..i].parse::<f64>().map_err(|_| bad())?;
                Ok(ComplexArg(C64::new(re, parse_im(&body[i..])?)))
            }
            None => Ok(ComplexArg(C64::new(0.0, parse_im(body)?))),
        }
    }
}

impl<'de> Deserialize<'de> for ComplexArg {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Real(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Real(x) => Ok(ComplexArg(C64::new(x, 0.0))),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Flags shared by every subcommand. Unset flags fall back to the config
/// file, then to the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct ScenarioArgs {
    /// Flat JSON object whose keys are the flag names
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub scenario: Option<Scenario>,
    /// Coherent amplitude of cavity A
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<ComplexArg>,
    /// Squeezing parameter of cavity A
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<ComplexArg>,
    /// Photon number of the Fock state
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    /// Non-reciprocity, g_AB / g_BA
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    /// Fock levels kept per cavity
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub sample_every: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ScenarioArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            scenario: self.scenario,
            alpha: self.alpha,
            epsilon: self.epsilon,
            n: self.n,
            omega0: self.omega0,
            g: self.g,
            r: self.r,
            dim: self.dim,
            dt: self.dt,
            tmax: self.tmax,
            sample_every: self.sample_every,
            out: self.out.clone(),
        }
    }
}

/// Values set by a config file or by flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct Overrides {
    scenario: Option<Scenario>,
    alpha: Option<ComplexArg>,
    epsilon: Option<ComplexArg>,
    n: Option<usize>,
    omega0: Option<f64>,
    g: Option<f64>,
    r: Option<f64>,
    dim: Option<usize>,
    dt: Option<f64>,
    tmax: Option<f64>,
    sample_every: Option<usize>,
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub alpha: C64,
    pub epsilon: C64,
    pub n: usize,
    pub omega0: f64,
    pub g: f64,
    pub r: f64,
    pub dim: usize,
    pub dt: f64,
    pub t_max: f64,
    pub sample_every: usize,
    pub out_path: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::Fock,
            alpha: C64::new(1.0, 0.0),
            epsilon: C64::new(0.1, 0.0),
            n: 1,
            omega0: 1.0,
            g: 0.1,
            r: 1.0,
            dim: 25,
            dt: 1e-3,
            t_max: 100.0,
            sample_every: 100,
            out_path: None,
        }
    }
}

impl ScenarioConfig {
    pub fn hamiltonian(&self) -> Result<HamiltonianSpec> {
        HamiltonianSpec::new(self.omega0, self.g, self.r, self.dim).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn state(&self) -> StateSpec {
        match self.scenario {
            Scenario::Fock => StateSpec::Fock { n: self.n },
            Scenario::Coherent => StateSpec::Coherent { alpha: self.alpha },
            Scenario::Squeezed => StateSpec::Squeezed { alpha: self.alpha, epsilon: self.epsilon },
        }
    }

    pub fn evolution(&self) -> Result<EvolutionConfig> {
        let cfg = EvolutionConfig {
            spec: self.hamiltonian()?,
            dt: self.dt,
            t_max: self.t_max,
            sample_every: self.sample_every,
            ..Default::default()
        };
        cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.evolution()?;
        if self.scenario == Scenario::Fock && self.n >= self.dim {
            return Err(CliError::Config(format!("Fock level {} needs dim > {}", self.n, self.n)));
        }
        let finite = |z: C64| z.re.is_finite() && z.im.is_finite();
        if !finite(self.alpha) || !finite(self.epsilon) {
            return Err(CliError::Config("alpha and epsilon must be finite".into()));
        }
        Ok(())
    }

    fn apply(&mut self, o: Overrides) {
        let Overrides { scenario, alpha, epsilon, n, omega0, g, r, dim, dt, tmax, sample_every, out } = o;
        self.scenario = scenario.unwrap_or(self.scenario);
        self.alpha = alpha.map_or(self.alpha, |z| z.0);
        self.epsilon = epsilon.map_or(self.epsilon, |z| z.0);
        self.n = n.unwrap_or(self.n);
        self.omega0 = omega0.unwrap_or(self.omega0);
        self.g = g.unwrap_or(self.g);
        self.r = r.unwrap_or(self.r);
        self.dim = dim.unwrap_or(self.dim);
        self.dt = dt.unwrap_or(self.dt);
        self.t_max = tmax.unwrap_or(self.t_max);
        self.sample_every = sample_every.unwrap_or(self.sample_every);
        if out.is_some() {
            self.out_path = out;
        }
    }
}

fn read_file(path: &Path) -> Result<Overrides> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigFile { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::ConfigParse { path: path.into(), source })
}

/// Flags override the file, which overrides the defaults.
pub fn parse_config(args: &ScenarioArgs) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig::default();
    if let Some(path) = &args.config {
        cfg.apply(read_file(path)?);
    }
    cfg.apply(args.overrides());
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> C64 {
        s.parse::<ComplexArg>().unwrap().0
    }

    #[test]
    fn complex_forms() {
        assert_eq!(c("1"), C64::new(1.0, 0.0));
        assert_eq!(c("-2.5"), C64::new(-2.5, 0.0));
        assert_eq!(c("0.3+0.2i"), C64::new(0.3, 0.2));
        assert_eq!(c("0.3 - 0.2i"), C64::new(0.3, -0.2));
        assert_eq!(c("-i"), C64::new(0.0, -1.0));
        assert_eq!(c("2i"), C64::new(0.0, 2.0));
        assert_eq!(c("1e-1-2e-2i"), C64::new(0.1, -0.02));
        assert_eq!(c("1+i"), C64::new(1.0, 1.0));
        assert!("1+2j".parse::<ComplexArg>().is_err());
        assert!("".parse::<ComplexArg>().is_err());
    }

    #[test]
    fn defaults() {
        let cfg = parse_config(&ScenarioArgs::default()).unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        assert_eq!(cfg.dim, 25);
        assert_eq!(cfg.g, 0.1);
        assert_eq!(cfg.epsilon, C64::new(0.1, 0.0));
    }

    #[test]
    fn flags_override_defaults() {
        let args = ScenarioArgs { scenario: Some(Scenario::Fock), r: Some(2.0), ..Default::default() };
        let cfg = parse_config(&args).unwrap();
        assert_eq!(cfg, ScenarioConfig { r: 2.0, ..Default::default() });
    }

    #[test]
    fn invalid_values_rejected() {
        for args in [
            ScenarioArgs { r: Some(0.0), ..Default::default() },
            ScenarioArgs { dim: Some(1), ..Default::default() },
            ScenarioArgs { dt: Some(-1e-3), ..Default::default() },
            ScenarioArgs { n: Some(25), ..Default::default() },
        ] {
            assert_eq!(parse_config(&args).unwrap_err().exit_code(), 1);
        }
    }
}
