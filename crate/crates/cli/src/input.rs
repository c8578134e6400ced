//! Bartnik data files.

use std::path::Path;
use std::sync::Arc;

use ahext_core::geometry::{AxisymmetricSurfaceMetric, BartnikData};
use ahext_core::spectral::LegendreGrid;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub metric: MetricSpec,
    #[serde(rename = "H0")]
    pub h0: f64,
}

/// `φ = Σ c_ℓ P_ℓ(cos θ)` on top of the round metric of area radius `r0`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MetricSpec {
    Round {
        r0: f64,
    },
    Legendre {
        r0: f64,
        #[serde(default)]
        coefficients: Vec<f64>,
    },
}

impl InputFile {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
    }

    pub fn bartnik_data(&self, nodes: usize) -> Result<BartnikData<f64>, CliError> {
        let grid = Arc::new(LegendreGrid::new(nodes));
        let metric = match &self.metric {
            MetricSpec::Round { r0 } => AxisymmetricSurfaceMetric::round(grid, *r0)?,
            MetricSpec::Legendre { r0, coefficients } => {
                AxisymmetricSurfaceMetric::from_legendre(grid, *r0, coefficients)?
            }
        };
        Ok(BartnikData::new(metric, self.h0)?)
    }
}
