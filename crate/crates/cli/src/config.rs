//! Experiment configuration files.

use std::fs;
use std::path::{Path, PathBuf};

use mixclust_core::{KMeansConfig, Seeding};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// Where the mixture comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelSource {
    /// A model file, resolved relative to the config file.
    File(PathBuf),
    /// Equal weights and means drawn uniformly from `[0, 1]^F`.
    Hypercube { k: usize, f: usize, seed: u64 },
}

/// How component variances are set before sampling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeparationCase {
    /// `σ² = λ_min ζ(w_min − ε) / (4(K−1))`, so `δ₀ / ζ(w_min) ≈ 1/4`.
    Well,
    /// `σ² = λ_min ζ(w_min − ε) / (K−1)`, so `δ₀ / ζ(w_min) ≈ 1`.
    Moderate,
    /// `σ² = m · λ_min ζ(w_min − ε) / (K−1)`.
    Custom(f64),
    /// Keep the components of the model as given.
    AsModel,
}

impl SeparationCase {
    /// Multiplier on `λ_min ζ(w_min − ε) / (K−1)`.
    pub fn multiplier(self) -> Option<f64> {
        match self {
            Self::Well => Some(0.25),
            Self::Moderate => Some(1.0),
            Self::Custom(m) => Some(m),
            Self::AsModel => None,
        }
    }

    pub fn label(self) -> String {
        match self {
            Self::Well => "well".into(),
            Self::Moderate => "moderate".into(),
            Self::Custom(m) => format!("custom:{m}"),
            Self::AsModel => "as_model".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reducer {
    Pca,
    Svd,
    RandomProjection,
    RandomizedSvd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SeedingSpec {
    #[default]
    KmeansPlusPlus,
    UniformRandom,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KMeansSpec {
    pub restarts: usize,
    pub max_iter: usize,
    pub rel_tol: f64,
    pub seeding: SeedingSpec,
}

impl Default for KMeansSpec {
    fn default() -> Self {
        let d = KMeansConfig::default();
        Self {
            restarts: d.restarts,
            max_iter: d.max_iter,
            rel_tol: d.rel_tol,
            seeding: SeedingSpec::KmeansPlusPlus,
        }
    }
}

impl KMeansSpec {
    pub fn to_config(&self, seed: u64) -> KMeansConfig {
        KMeansConfig {
            restarts: self.restarts,
            max_iter: self.max_iter,
            rel_tol: self.rel_tol,
            seeding: match self.seeding {
                SeedingSpec::KmeansPlusPlus => Seeding::KMeansPlusPlus,
                SeedingSpec::UniformRandom => Seeding::UniformRandom,
            },
            seed,
        }
    }
}

fn default_eps_sep() -> f64 {
    1e-6
}

fn default_trials() -> usize {
    10
}

fn default_reducers() -> Vec<Reducer> {
    vec![
        Reducer::Pca,
        Reducer::Svd,
        Reducer::RandomProjection,
        Reducer::RandomizedSvd,
    ]
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSource,
    pub case: SeparationCase,
    #[serde(default = "default_eps_sep")]
    pub eps_sep: f64,
    pub n_grid: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub kmeans: KMeansSpec,
    #[serde(default = "default_reducers")]
    pub reducers: Vec<Reducer>,
    /// Target dimension of the random projection; `min(F, 10K)` if absent.
    #[serde(default)]
    pub rp_dim: Option<usize>,
    /// Draw fresh hypercube means for every trial instead of once per sweep.
    #[serde(default)]
    pub redraw_means: bool,
    /// Also run the cost-ratio premise check (an extra k-means at `K−1`).
    #[serde(default)]
    pub opt_ratio: bool,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

impl ExperimentConfig {
    pub fn new(model: ModelSource, case: SeparationCase, n_grid: Vec<usize>) -> Self {
        Self {
            model,
            case,
            eps_sep: default_eps_sep(),
            n_grid,
            trials: default_trials(),
            seed: 0,
            kmeans: KMeansSpec::default(),
            reducers: default_reducers(),
            rp_dim: None,
            redraw_means: false,
            opt_ratio: false,
            output: default_output(),
        }
    }

    /// Loads a config; a relative model-file path is resolved against the
    /// config's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut cfg: Self = serde_json::from_str(&text).map_err(|e| HarnessError::json(path, e))?;
        if let ModelSource::File(p) = &mut cfg.model {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return Err(HarnessError::Config("N grid is empty".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HarnessError::Config("N grid must be strictly increasing".into()));
        }
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be >= 1".into()));
        }
        if !(self.eps_sep >= 0.0) {
            return Err(HarnessError::Config("eps_sep must be >= 0".into()));
        }
        if let SeparationCase::Custom(m) = self.case {
            if !(m > 0.0) || !m.is_finite() {
                return Err(HarnessError::Config("custom multiplier must be positive".into()));
            }
        }
        if self.kmeans.restarts == 0 || self.kmeans.max_iter == 0 {
            return Err(HarnessError::Config(
                "k-means restarts and max_iter must be >= 1".into(),
            ));
        }
        if self.redraw_means && !matches!(self.model, ModelSource::Hypercube { .. }) {
            return Err(HarnessError::Config("redraw_means needs hypercube means".into()));
        }
        if self.rp_dim == Some(0) {
            return Err(HarnessError::Config("rp_dim must be >= 1".into()));
        }
        Ok(())
    }
}
