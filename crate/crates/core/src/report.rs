//! Certification records. Values are stored as `f64` whatever scalar the
//! construction ran in.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{profile_level_mass, warped_scalar_curvature, ProfileCurve};
use crate::scalar::Real;

/// Tolerance on the boundary metric and mean curvature residuals.
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;
/// Tolerance on `|R + 6|` and on the level mass along the untouched tail.
pub const TAIL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// `value ≤ threshold`.
    AtMost,
    /// `value > threshold`.
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub check: Check,
    pub pass: bool,
}

impl Certificate {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Certificate {
            name: name.to_string(),
            value,
            threshold,
            check: Check::AtMost,
            pass: value <= threshold,
        }
    }

    pub fn above(name: &str, value: f64, threshold: f64) -> Self {
        Certificate {
            name: name.to_string(),
            value,
            threshold,
            check: Check::Above,
            pass: value > threshold,
        }
    }

    /// How far past its threshold a failing certificate is (0 when passing).
    pub fn violation(&self) -> f64 {
        if self.pass {
            0.0
        } else {
            (self.value - self.threshold).abs()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelMass {
    pub t: f64,
    pub mass: f64,
}

/// Every parameter of the run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ReportParameters {
    pub variant: String,
    pub r0: f64,
    pub h0: f64,
    pub alpha: f64,
    pub beta: f64,
    pub target_mass: f64,
    pub lapse_scale: f64,
    pub lapse_threshold: f64,
    pub model_mass: Option<f64>,
    pub cosmological: Option<f64>,
    pub profile_rate: Option<f64>,
    pub coupling: Option<f64>,
    pub epsilon: Option<f64>,
    pub epsilon_budget: Option<f64>,
    pub mass_constant: Option<f64>,
    pub growth: Option<f64>,
    pub theta_param: f64,
    pub path_samples: usize,
    pub profile_samples: usize,
}

/// Where the exterior was attached.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GluingRecord {
    pub branch: String,
    pub s0: f64,
    pub bend_width: f64,
    /// Length scale `ℓ` of the bending bump `exp(−ℓ²/x²)`.
    pub bump_scale: f64,
    pub tail_start: usize,
    pub glue_end: usize,
    pub refinement: usize,
    pub epsilon: f64,
    pub bridge_length: f64,
    pub min_glue_margin: f64,
    pub min_bend_log_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub status: Status,
    pub min_r_plus_6: f64,
    pub collar_min_r_plus_6: f64,
    /// Over the glued region of the profile.
    pub profile_min_r_plus_6: f64,
    pub tail_max_abs_r_plus_6: f64,
    pub boundary_metric_residual: f64,
    pub boundary_h_residual: f64,
    pub end_collar_mass: f64,
    pub exterior_mass: f64,
    pub level_masses: Vec<LevelMass>,
    pub bound_values: BTreeMap<String, f64>,
    pub parameters: ReportParameters,
    pub gluing: GluingRecord,
    pub certificates: Vec<Certificate>,
}

impl ExtensionReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn certificate(&self, name: &str) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.name == name)
    }

    /// The failing certificate furthest from its threshold.
    pub fn worst_failure(&self) -> Option<&Certificate> {
        self.certificates
            .iter()
            .filter(|c| !c.pass)
            .max_by(|a, b| a.violation().total_cmp(&b.violation()))
    }

    /// Recomputes the status from the certificates.
    pub fn refresh_status(&mut self) {
        self.status = if self.certificates.iter().all(|c| c.pass) {
            Status::Pass
        } else {
            Status::Fail
        };
    }
}

/// Curvature and mass statistics of an extension profile, split into the
/// glued region `[0, glue_end]`, the bent exterior and the untouched tail
/// from `tail_start` on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSummary {
    pub min_r_plus_6_glued: f64,
    /// Over the bent exterior, where `R + 6` is certified positive by the
    /// bending bound but may round to zero.
    pub min_r_plus_6_bent: f64,
    pub min_r_plus_6: f64,
    pub tail_max_abs_r_plus_6: f64,
    pub tail_mass_error: f64,
    pub min_slope: f64,
}

pub fn summarize_profile<T: Real>(
    p: &ProfileCurve<T>,
    glue_end: usize,
    tail_start: usize,
    exterior_mass: T,
) -> Result<ProfileSummary> {
    let mut s = ProfileSummary {
        min_r_plus_6_glued: f64::INFINITY,
        min_r_plus_6_bent: f64::INFINITY,
        min_r_plus_6: f64::INFINITY,
        tail_max_abs_r_plus_6: 0.0,
        tail_mass_error: 0.0,
        min_slope: f64::INFINITY,
    };
    for i in 0..p.len() {
        let (f, fp, fpp) = p.sample(i)?;
        let r6 = (warped_scalar_curvature(f, fp, fpp, p.dim())? + T::lit(6.0)).as_f64();
        s.min_r_plus_6 = s.min_r_plus_6.min(r6);
        s.min_slope = s.min_slope.min(fp.as_f64());
        if i <= glue_end {
            s.min_r_plus_6_glued = s.min_r_plus_6_glued.min(r6);
        } else if i < tail_start {
            s.min_r_plus_6_bent = s.min_r_plus_6_bent.min(r6);
        } else {
            s.tail_max_abs_r_plus_6 = s.tail_max_abs_r_plus_6.max(r6.abs());
            let dm = (profile_level_mass(f, fp) - exterior_mass).as_f64().abs();
            s.tail_mass_error = s.tail_mass_error.max(dm);
        }
    }
    Ok(s)
}

/// Certificates that depend on the profile alone.
pub fn profile_certificates(summary: &ProfileSummary, exterior_mass: f64) -> Vec<Certificate> {
    vec![
        Certificate::above("profile.min_r_plus_6_glued", summary.min_r_plus_6_glued, 0.0),
        Certificate::above("profile.min_r_plus_6_bent", summary.min_r_plus_6_bent, -TAIL_TOLERANCE),
        Certificate::at_most("profile.tail_abs_r_plus_6", summary.tail_max_abs_r_plus_6, TAIL_TOLERANCE),
        Certificate::at_most(
            "profile.tail_mass_error",
            summary.tail_mass_error,
            TAIL_TOLERANCE * exterior_mass.abs().max(1.0),
        ),
        Certificate::above("profile.min_slope", summary.min_slope, 0.0),
    ]
}
