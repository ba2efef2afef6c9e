use super::Policy;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Resilience,
    Inheritance,
    Load,
}

/// Which edge probability feeds the degree threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PHat {
    Nominal,
    Empirical,
}

/// Host family for the inheritance experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HostKind {
    Complete,
    SpaceBarrier,
    Random,
}

/// One experiment, stored as flat `key = value` lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub kind: ExperimentKind,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub p: f64,
    pub gamma: f64,
    /// Subset size for the inheritance experiment.
    pub q: usize,
    pub rho: f64,
    pub lambda: f64,
    pub eta: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub output: PathBuf,
    pub policy: Policy,
    pub p_hat: PHat,
    pub host: HostKind,
    /// Enumerate every q-subset instead of sampling (inheritance only).
    pub exhaustive: bool,
    /// Fill the `seconds` column; off by default so reruns are byte-identical.
    pub timing: bool,
    pub budget: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            name: "experiment".into(),
            kind: ExperimentKind::Resilience,
            n: 12,
            k: 3,
            d: 2,
            p: 0.8,
            gamma: 0.15,
            q: 6,
            rho: 0.2,
            lambda: 0.2,
            eta: 0.1,
            trials: 200,
            master_seed: 0,
            output: PathBuf::from("experiment.csv"),
            policy: Policy::Random,
            p_hat: PHat::Nominal,
            host: HostKind::Complete,
            exhaustive: false,
            timing: false,
            budget: 2_000_000,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("rho", self.rho), ("lambda", self.lambda)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Precondition(format!(
                    "{name} = {v} is not a probability"
                )));
            }
        }
        if self.gamma < 0.0 || self.eta < 0.0 {
            return Err(Error::Precondition(
                "gamma and eta must be non-negative".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::Precondition("trials must be at least 1".into()));
        }
        if self.k == 0 || self.k > self.n || self.d == 0 || self.d >= self.k {
            return Err(Error::Size(format!(
                "need 1 <= d < k <= n, got n = {}, k = {}, d = {}",
                self.n, self.k, self.d
            )));
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            Error::parse(e.span().map_or(0, |s| line_of(text, s.start)), e.message())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Precondition(e.to_string()))
    }

    pub fn read_path(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn write_path(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_toml()?)?)
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}
