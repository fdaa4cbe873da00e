//! JSON model files.
//!
//! ```json
//! {
//!   "K": 2, "F": 3,
//!   "weights": [0.5, 0.5],
//!   "means": [[0, 0, 0], [1, 2, 3]],
//!   "components": [
//!     {"family": "spherical_gaussian", "params": {"variance": 1.0}},
//!     {"family": "laplace", "params": {"scales": [0.5, 0.5, 1.0]}}
//!   ]
//! }
//! ```
//!
//! `means` may instead be `{"hypercube_uniform": {"seed": 7}}`, drawing
//! each mean uniformly from `[0, 1]^F`.

use std::fs;
use std::path::Path;

use mixclust_core::mixture::hypercube_means;
use mixclust_core::{ComponentDistribution, MixtureModel};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "F")]
    pub f: usize,
    pub weights: Vec<f64>,
    pub means: MeansSpec,
    pub components: Vec<ComponentSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeansSpec {
    Explicit(Vec<Vec<f64>>),
    Hypercube { hypercube_uniform: HypercubeSpec },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypercubeSpec {
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case")]
pub enum ComponentSpec {
    SphericalGaussian { variance: f64 },
    DiagonalGaussian { variances: Vec<f64> },
    Laplace { scales: Vec<f64> },
    UniformBox { half_widths: Vec<f64> },
}

impl From<ComponentSpec> for ComponentDistribution {
    fn from(c: ComponentSpec) -> Self {
        match c {
            ComponentSpec::SphericalGaussian { variance } => Self::SphericalGaussian { variance },
            ComponentSpec::DiagonalGaussian { variances } => Self::DiagonalGaussian { variances },
            ComponentSpec::Laplace { scales } => Self::Laplace { scales },
            ComponentSpec::UniformBox { half_widths } => Self::UniformBox { half_widths },
        }
    }
}

impl From<&ComponentDistribution> for ComponentSpec {
    fn from(c: &ComponentDistribution) -> Self {
        match c.clone() {
            ComponentDistribution::SphericalGaussian { variance } => Self::SphericalGaussian { variance },
            ComponentDistribution::DiagonalGaussian { variances } => Self::DiagonalGaussian { variances },
            ComponentDistribution::Laplace { scales } => Self::Laplace { scales },
            ComponentDistribution::UniformBox { half_widths } => Self::UniformBox { half_widths },
        }
    }
}

impl ModelFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| HarnessError::json(path, e))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| HarnessError::json(path, e))?;
        fs::write(path, text).map_err(|e| HarnessError::io(path, e))
    }

    pub fn from_model(model: &MixtureModel) -> Self {
        Self {
            k: model.k(),
            f: model.dim(),
            weights: model.weights().to_vec(),
            means: MeansSpec::Explicit(model.means().to_vec()),
            components: model.components().iter().map(ComponentSpec::from).collect(),
        }
    }

    /// Validates the declared sizes and builds the model.
    pub fn to_model(&self) -> Result<MixtureModel> {
        let means = match &self.means {
            MeansSpec::Explicit(m) => m.clone(),
            MeansSpec::Hypercube { hypercube_uniform } => hypercube_means(self.k, self.f, hypercube_uniform.seed),
        };
        if self.weights.len() != self.k || means.len() != self.k || self.components.len() != self.k {
            return Err(HarnessError::Config(format!(
                "K = {} but got {} weights, {} means, {} components",
                self.k,
                self.weights.len(),
                means.len(),
                self.components.len()
            )));
        }
        if let Some(bad) = means.iter().find(|m| m.len() != self.f) {
            return Err(HarnessError::Config(format!(
                "F = {} but a mean has {} coordinates",
                self.f,
                bad.len()
            )));
        }
        let components = self.components.iter().cloned().map(Into::into).collect();
        Ok(MixtureModel::new(self.weights.clone(), means, components)?)
    }
}
