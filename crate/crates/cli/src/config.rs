use std::path::{Path, PathBuf};

use clap::Args;
use powerbeam::curve::{validate_params, Cutoff, CurveParams, Sampling};
use powerbeam::harness::{HarnessConstants, DEFAULT_ALPHA, DEFAULT_C0, DEFAULT_P};
use powerbeam::Error;
use serde::{Deserialize, Serialize};

pub const OUT_DIR_ENV: &str = "POWERBEAM_OUT_DIR";

/// Every numeric setting of a run. Reports embed it verbatim so a run can be
/// replayed with `--config report.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub beta: f64,
    pub eta: f64,
    pub theta: f64,
    pub delta: f64,
    pub n: usize,
    pub nodes: usize,
    pub plateau: f64,
    pub c_prime: f64,
    pub p: f64,
    pub alpha: f64,
    pub c0: f64,
    pub rho: Option<f64>,
    pub tau: Option<f64>,
    pub seed: u64,
    pub min_per_octave: usize,
    pub subsample: Option<usize>,
    pub blocks: Option<usize>,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            beta: 2.0,
            eta: 0.5,
            theta: 0.9,
            delta: 0.4,
            n: 512,
            nodes: powerbeam::curve::DEFAULT_NODES,
            plateau: powerbeam::curve::DEFAULT_PLATEAU,
            c_prime: 1.0,
            p: DEFAULT_P,
            alpha: DEFAULT_ALPHA,
            c0: DEFAULT_C0,
            rho: None,
            tau: None,
            seed: 0,
            min_per_octave: powerbeam::curve::DEFAULT_MIN_PER_OCTAVE,
            subsample: None,
            blocks: None,
            out_dir: None,
        }
    }
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Args, Clone, Debug, Default)]
pub struct ConfigArgs {
    /// JSON config, or a report whose `config` field is replayed.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Grid resolution (cells per side).
    #[arg(long)]
    pub n: Option<usize>,
    /// Quadrature nodes of the arc cutoff.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Plateau fraction of the cutoff bump.
    #[arg(long)]
    pub plateau: Option<f64>,
    #[arg(long)]
    pub c_prime: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub c0: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Minimum scale samples per octave.
    #[arg(long)]
    pub per_octave: Option<usize>,
    /// Scan only this many seeded points of the set.
    #[arg(long)]
    pub subsample: Option<usize>,
    /// Number of ladder blocks (default: the density bound, trimmed to the grid).
    #[arg(long)]
    pub blocks: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn load_file(path: &Path) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Argument(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let value = match value.get("config") {
        Some(inner) => inner.clone(),
        None => value,
    };
    Ok(serde_json::from_value(value)?)
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<RunConfig, Error> {
        let mut c = match &self.config {
            Some(path) => load_file(path)?,
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($field:ident => $target:ident),* $(,)?) => {
                $(if let Some(v) = self.$field.clone() { c.$target = v; })*
            };
        }
        take!(beta => beta, eta => eta, theta => theta, delta => delta, n => n, nodes => nodes,
              plateau => plateau, c_prime => c_prime, p => p, alpha => alpha, c0 => c0, seed => seed,
              per_octave => min_per_octave);
        macro_rules! take_opt {
            ($($field:ident),*) => { $(if self.$field.is_some() { c.$field = self.$field.clone(); })* };
        }
        take_opt!(rho, tau, subsample, blocks, out_dir);
        Ok(c)
    }
}

impl RunConfig {
    /// Output directory: the flag or config value, else the environment
    /// override, else the working directory.
    pub fn output_dir(&self) -> PathBuf {
        self.out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn params(&self) -> Result<CurveParams, Error> {
        validate_params(self.beta, self.eta, self.theta)?;
        CurveParams::new(self.beta, self.eta, self.theta)
    }

    pub fn cutoff(&self) -> Result<Cutoff, Error> {
        Cutoff::new(self.params()?, self.nodes, self.plateau)
    }

    pub fn sampling(&self) -> Sampling {
        Sampling {
            min_per_octave: self.min_per_octave,
            coarse: false,
        }
    }

    pub fn constants(&self) -> Result<HarnessConstants, Error> {
        let base = HarnessConstants::from_density(self.delta.min(1.0), self.alpha, self.c0)?;
        let base = HarnessConstants::new(self.p, base.alpha, base.c0, base.tau, base.rho)?;
        let base = match self.tau {
            Some(t) => base.with_tau(t)?,
            None => base,
        };
        match self.rho {
            Some(r) => base.with_rho(r),
            None => Ok(base),
        }
    }
}
