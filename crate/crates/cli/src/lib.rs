//! Experiment harness for k-means on mixture-model samples: model and
//! config files, trials and sweeps, CSV/JSON/SVG output, and the
//! verification suite.

// `!(x > 0.0)` style checks are meant to reject NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiment;
pub mod model_file;
pub mod output;
pub mod verify;

pub use config::{ExperimentConfig, ModelSource, Reducer, SeparationCase};
pub use error::{HarnessError, Result};
pub use experiment::{run_trial, set_case_variances, sweep, SweepResult, TrialRecord};
pub use model_file::ModelFile;

/// Separability indices, non-degeneracy, and population bounds of a model.
pub fn mixture_report(model: &mixclust_core::MixtureModel) -> Result<serde_json::Value> {
    use mixclust_core::mixture::{check_non_degeneracy, separability_report, DEFAULT_RANK_TOL};
    let nd = check_non_degeneracy(model, DEFAULT_RANK_TOL)?;
    let mut report = serde_json::json!({
        "non_degenerate": nd.holds,
        "rank": nd.rank,
        "diagnostic": nd.diagnostic,
    });
    if model.k() >= 2 {
        let (t_org, t_pca) = experiment::theorems_for(model);
        let src = mixclust_core::BoundSource::Population(model);
        report["separability"] = output::separability_json(&separability_report(model)?);
        report["population_bounds"] = serde_json::json!({
            "org": output::bound_json(&mixclust_core::metrics::theorem_bound(t_org, src)?),
            "pca": output::bound_json(&mixclust_core::metrics::theorem_bound(t_pca, src)?),
        });
    }
    Ok(report)
}
