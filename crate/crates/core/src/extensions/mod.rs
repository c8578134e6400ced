//! The three extension constructions and the mass bounds they certify.
//!
//! Each builder returns a collar over a metric path from the boundary metric
//! to a round sphere, the round part of the collar rewritten as a profile
//! curve, and grid diagnostics. [`build_extension`] glues that profile to an
//! AdS-Schwarzschild end of the requested mass and assembles an
//! [`ExtensionReport`](crate::report::ExtensionReport).

mod cmc;
mod minimal;
mod pipeline;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{hawking_mass_level, mean_curvature_level, collar_curvature_sweep, BartnikData, CollarMetric};
use crate::path::{compute_alpha_beta, first_eigenpair, MetricPath};
use crate::scalar::{max_abs, min_of, Real};

pub use cmc::{
    build_cmc_collar_b0, build_cmc_collar_bpos, default_coupling, limiting_lapse_threshold,
    positive_cosmological_bound, positive_lapse_threshold, profile_rate_sq,
    zero_cosmological_bound, CmcCollar, CmcCollarParams, CmcVariant,
};
pub use minimal::{build_minimal_collar, MinimalCollar, MinimalCollarParams, MinimalHypothesis};
pub use pipeline::{
    build_collar, build_extension, build_extension_on_path, build_extension_with, CollarKind, Extension,
    ExtensionOptions,
};

/// Factor applied to the smallest admissible lapse scale.
pub const LAPSE_SAFETY: f64 = 1.05;
/// Lapse scale (in units of `r0`) used when the admissible threshold is zero.
pub const LAPSE_FLOOR: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionVariant {
    Minimal,
    CmcB0,
    CmcBpos,
    /// Minimal for `H0 = 0`; otherwise `b = 0` when its hypotheses hold, else `b > 0`.
    Auto,
}

impl ExtensionVariant {
    pub fn name(self) -> &'static str {
        match self {
            ExtensionVariant::Minimal => "minimal",
            ExtensionVariant::CmcB0 => "cmc-b0",
            ExtensionVariant::CmcBpos => "cmc-bpos",
            ExtensionVariant::Auto => "auto",
        }
    }
}

impl fmt::Display for ExtensionVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExtensionVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimal" => Ok(ExtensionVariant::Minimal),
            "cmc-b0" => Ok(ExtensionVariant::CmcB0),
            "cmc-bpos" => Ok(ExtensionVariant::CmcBpos),
            "auto" => Ok(ExtensionVariant::Auto),
            other => Err(Error::Domain(format!(
                "unknown variant {other:?} (minimal, cmc-b0, cmc-bpos, auto)"
            ))),
        }
    }
}

/// Grid diagnostics of a collar.
#[derive(Debug, Clone, PartialEq)]
pub struct CollarDiagnostics<T> {
    pub min_r_plus_6: T,
    pub boundary_mass: T,
    pub end_mass: T,
    /// `(t_i, m(Σ_{t_i}))`.
    pub level_masses: Vec<(T, T)>,
    /// `max |H(0) − H0|`.
    pub boundary_mean_curvature_residual: T,
    /// Smallest mean curvature over the levels `t > 0`.
    pub min_interior_mean_curvature: T,
}

pub(crate) fn diagnose<T: Real>(c: &CollarMetric<T>, h0: T) -> Result<CollarDiagnostics<T>> {
    let sweep = collar_curvature_sweep(c)?;
    let level_masses = (0..c.len())
        .map(|i| Ok((c.t_grid()[i], hawking_mass_level(c, i)?)))
        .collect::<Result<Vec<_>>>()?;
    let h_start: Vec<T> = mean_curvature_level(c, 0)?.iter().map(|h| *h - h0).collect();
    let mut min_h = T::infinity();
    for i in 1..c.len() {
        min_h = min_h.min(min_of(&mean_curvature_level(c, i)?));
    }
    Ok(CollarDiagnostics {
        min_r_plus_6: sweep.min_r_plus_6,
        boundary_mass: level_masses[0].1,
        end_mass: level_masses[level_masses.len() - 1].1,
        level_masses,
        boundary_mean_curvature_residual: max_abs(&h_start),
        min_interior_mean_curvature: min_h,
    })
}

/// `½(r0 + r0³)`, the bound for minimal data.
pub fn minimal_bound<T: Real>(r0: T) -> T {
    (r0 + r0 * r0 * r0) / T::lit(2.0)
}

/// Upper bound for the hyperbolic Bartnik mass of `data` obtained from the
/// constructions over `path`. `Auto` returns the minimal bound for `H0 = 0`
/// and otherwise the smaller of the applicable CMC bounds.
pub fn bartnik_mass_upper_bound<T: Real>(
    data: &BartnikData<T>,
    path: &MetricPath<T>,
    variant: ExtensionVariant,
) -> Result<T> {
    match variant {
        ExtensionVariant::Minimal => {
            if data.mean_curvature() != T::zero() {
                return Err(Error::hypothesis(
                    "H0 = 0",
                    format!("got H0 = {}", data.mean_curvature()),
                ));
            }
            let lambda = first_eigenpair(data.metric())?.lambda;
            let kmin = min_of(&data.metric().gauss_curvature()?);
            if !(lambda > T::zero() || kmin > T::lit(-3.0)) {
                return Err(Error::hypothesis(
                    "λ₁(−Δ + K) > 0 or K > −3",
                    format!("λ₁ = {lambda}, min K = {kmin}"),
                ));
            }
            Ok(minimal_bound(data.r0()))
        }
        ExtensionVariant::CmcB0 => {
            cmc::check_cmc_data(data)?;
            let (alpha, beta) = compute_alpha_beta(path)?;
            Ok(cmc::zero_variant_limit(data, alpha, beta)?.1)
        }
        ExtensionVariant::CmcBpos => {
            cmc::check_cmc_data(data)?;
            let (alpha, beta) = compute_alpha_beta(path)?;
            Ok(cmc::positive_variant_limit(data, alpha, beta)?.1)
        }
        ExtensionVariant::Auto => {
            if data.mean_curvature() == T::zero() {
                return bartnik_mass_upper_bound(data, path, ExtensionVariant::Minimal);
            }
            let zero = bartnik_mass_upper_bound(data, path, ExtensionVariant::CmcB0);
            let positive = bartnik_mass_upper_bound(data, path, ExtensionVariant::CmcBpos);
            match (zero, positive) {
                (Ok(a), Ok(b)) => Ok(a.min(b)),
                (Ok(a), Err(_)) | (Err(_), Ok(a)) => Ok(a),
                (Err(e), Err(_)) => Err(e),
            }
        }
    }
}
