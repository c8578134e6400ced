//! Collar, change of variables and exterior gluing, end to end.

use std::collections::BTreeMap;

use crate::error::{Error, ErrorKind, Result};
use crate::geometry::{BartnikData, CollarMetric, ProfileCurve};
use crate::gluing::{glue_to_ads_schwarzschild_with, AttachBranch, AttachOptions, Attachment};
use crate::path::{eigenpath, ricci_flow_path, MetricPath};
use crate::report::{
    profile_certificates, summarize_profile, Certificate, ExtensionReport, GluingRecord,
    LevelMass, ReportParameters, Status, BOUNDARY_TOLERANCE,
};
use crate::scalar::Real;

use super::{
    bartnik_mass_upper_bound, build_cmc_collar_b0, build_cmc_collar_bpos, build_minimal_collar,
    CmcCollar, CollarDiagnostics, ExtensionVariant, MinimalCollar,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionOptions<T> {
    /// Path parameter after which `g(t)` is round.
    pub theta_param: T,
    pub path_samples: usize,
    /// Bulge parameter of the minimal collar.
    pub epsilon: T,
    /// Model mass of the CMC collars.
    pub cmc_mass: T,
    /// `δ` of the `b > 0` collar; `None` for the default.
    pub coupling: Option<T>,
    pub epsilon_budget: T,
    /// Samples of the round part of the collar handed to the gluing.
    pub profile_samples: usize,
    pub attach: AttachOptions<T>,
}

impl<T: Real> Default for ExtensionOptions<T> {
    fn default() -> Self {
        ExtensionOptions {
            theta_param: T::lit(0.5),
            path_samples: 161,
            epsilon: T::lit(1e-2),
            cmc_mass: T::lit(-1e3),
            coupling: None,
            epsilon_budget: T::lit(0.1),
            profile_samples: 257,
            attach: AttachOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CollarKind<T> {
    Minimal(MinimalCollar<T>),
    Cmc(CmcCollar<T>),
}

impl<T: Real> CollarKind<T> {
    pub fn metric(&self) -> &CollarMetric<T> {
        match self {
            CollarKind::Minimal(c) => &c.metric,
            CollarKind::Cmc(c) => &c.metric,
        }
    }

    pub fn diagnostics(&self) -> &CollarDiagnostics<T> {
        match self {
            CollarKind::Minimal(c) => &c.diagnostics,
            CollarKind::Cmc(c) => &c.diagnostics,
        }
    }

    pub fn outer_profile(&self, n: usize) -> Result<ProfileCurve<T>> {
        match self {
            CollarKind::Minimal(c) => c.outer_profile(n),
            CollarKind::Cmc(c) => c.outer_profile(n),
        }
    }

    /// The a priori bound on the end mass that the construction guarantees.
    pub fn end_mass_bound(&self) -> T {
        match self {
            CollarKind::Minimal(c) => c.end_mass_estimate(),
            CollarKind::Cmc(c) => c.params.finite_mass_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Extension<T> {
    pub report: ExtensionReport,
    /// Round part of the collar followed by the glued exterior.
    pub profile: ProfileCurve<T>,
    pub attachment: Attachment<T>,
    pub collar: CollarKind<T>,
}

pub fn build_extension<T: Real>(
    data: &BartnikData<T>,
    target_mass: T,
    variant: ExtensionVariant,
) -> Result<Extension<T>> {
    build_extension_with(data, target_mass, variant, &ExtensionOptions::default())
}

/// Flows the boundary metric to a round one, builds the collar of `variant`
/// over that path and glues an AdS-Schwarzschild end of mass `target_mass`.
pub fn build_extension_with<T: Real>(
    data: &BartnikData<T>,
    target_mass: T,
    variant: ExtensionVariant,
    opts: &ExtensionOptions<T>,
) -> Result<Extension<T>> {
    let path = ricci_flow_path(data.metric(), opts.theta_param, opts.path_samples)?;
    build_extension_on_path(data, path, target_mass, variant, opts)
}

/// [`build_extension_with`] over a given path starting at the boundary metric.
pub fn build_extension_on_path<T: Real>(
    data: &BartnikData<T>,
    path: MetricPath<T>,
    target_mass: T,
    variant: ExtensionVariant,
    opts: &ExtensionOptions<T>,
) -> Result<Extension<T>> {
    let (collar, resolved) = build_collar(data, path, variant, opts)?;
    let diag = collar.diagnostics();
    let end_mass = diag.end_mass;
    if !(target_mass > end_mass) {
        return Err(Error::Admissibility(format!(
            "target mass {target_mass} must exceed the collar-end Hawking mass {end_mass}"
        )));
    }
    let outer = collar.outer_profile(opts.profile_samples)?;
    let (profile, attachment) = glue_to_ads_schwarzschild_with(&outer, target_mass, &opts.attach)?;
    let report = assemble_report(data, &collar, resolved, &profile, &attachment, target_mass, opts)?;
    Ok(Extension {
        report,
        profile,
        attachment,
        collar,
    })
}

/// The collar of `variant` over `path`, with `Auto` resolved.
pub fn build_collar<T: Real>(
    data: &BartnikData<T>,
    path: MetricPath<T>,
    variant: ExtensionVariant,
    opts: &ExtensionOptions<T>,
) -> Result<(CollarKind<T>, ExtensionVariant)> {
    match variant {
        ExtensionVariant::Minimal => {
            let eigen = eigenpath(&path)?;
            let c = build_minimal_collar(data, path, eigen, opts.epsilon)?;
            Ok((CollarKind::Minimal(c), variant))
        }
        ExtensionVariant::CmcB0 => {
            let c = build_cmc_collar_b0(data, path, opts.cmc_mass)?;
            Ok((CollarKind::Cmc(c), variant))
        }
        ExtensionVariant::CmcBpos => {
            let c = build_cmc_collar_bpos(data, path, opts.cmc_mass, opts.coupling, opts.epsilon_budget)?;
            Ok((CollarKind::Cmc(c), variant))
        }
        ExtensionVariant::Auto => {
            if data.mean_curvature() == T::zero() {
                return build_collar(data, path, ExtensionVariant::Minimal, opts);
            }
            match build_collar(data, path.clone(), ExtensionVariant::CmcB0, opts) {
                Err(e) if e.kind() == ErrorKind::Hypothesis => {
                    build_collar(data, path, ExtensionVariant::CmcBpos, opts)
                }
                other => other,
            }
        }
    }
}

fn assemble_report<T: Real>(
    data: &BartnikData<T>,
    collar: &CollarKind<T>,
    variant: ExtensionVariant,
    profile: &ProfileCurve<T>,
    att: &Attachment<T>,
    target_mass: T,
    opts: &ExtensionOptions<T>,
) -> Result<ExtensionReport> {
    let metric = collar.metric();
    let path = metric.path();
    let diag = collar.diagnostics();
    let (e0, _, _) = metric.warp_at(0);
    let log_e0 = e0.ln();
    let boundary_metric_residual = path
        .metric(0)
        .phi()
        .iter()
        .zip(data.metric().phi())
        .map(|(a, b)| (*a + log_e0 - *b).abs().as_f64())
        .fold(0.0, f64::max);
    let boundary_h_residual = diag.boundary_mean_curvature_residual.as_f64();
    let summary = summarize_profile(profile, att.glue_end, att.tail_start, target_mass)?;

    let mut bound_values = BTreeMap::new();
    for v in [ExtensionVariant::Minimal, ExtensionVariant::CmcB0, ExtensionVariant::CmcBpos] {
        if let Ok(b) = bartnik_mass_upper_bound(data, path, v) {
            bound_values.insert(v.name().to_string(), b.as_f64());
        }
    }
    bound_values.insert("collar-end-estimate".into(), collar.end_mass_bound().as_f64());

    let mut parameters = ReportParameters {
        variant: variant.name().into(),
        r0: data.r0().as_f64(),
        h0: data.mean_curvature().as_f64(),
        target_mass: target_mass.as_f64(),
        theta_param: path.theta_param().as_f64(),
        path_samples: path.len(),
        profile_samples: opts.profile_samples,
        ..Default::default()
    };
    match collar {
        CollarKind::Minimal(c) => {
            let p = &c.params;
            parameters.alpha = p.alpha.as_f64();
            parameters.beta = p.beta.as_f64();
            parameters.lapse_scale = p.lapse_scale.as_f64();
            parameters.lapse_threshold = p.lapse_threshold.as_f64();
            parameters.epsilon = Some(p.epsilon.as_f64());
            parameters.mass_constant = Some(p.mass_constant.as_f64());
        }
        CollarKind::Cmc(c) => {
            let p = &c.params;
            parameters.alpha = p.alpha.as_f64();
            parameters.beta = p.beta.as_f64();
            parameters.lapse_scale = p.lapse_scale.as_f64();
            parameters.lapse_threshold = p.lapse_threshold.as_f64();
            parameters.model_mass = Some(p.mass.as_f64());
            parameters.cosmological = Some(p.cosmological.as_f64());
            parameters.profile_rate = Some(p.profile_rate.as_f64());
            parameters.coupling = p.coupling.map(|x| x.as_f64());
            parameters.epsilon_budget = p.epsilon_budget.map(|x| x.as_f64());
            parameters.growth = Some(p.growth.as_f64());
        }
    }
    let gluing = GluingRecord {
        branch: match att.branch {
            AttachBranch::PositiveMass { .. } => "positive-mass".into(),
            AttachBranch::NonPositiveMass { .. } => "non-positive-mass".into(),
        },
        s0: att.s0.as_f64(),
        bend_width: att.bend_width.as_f64(),
        bump_scale: att.bump_scale.as_f64(),
        tail_start: att.tail_start,
        glue_end: att.glue_end,
        refinement: att.refinement,
        epsilon: att.epsilon.as_f64(),
        bridge_length: att.bridge_length.as_f64(),
        min_glue_margin: att.min_glue_margin.as_f64(),
        min_bend_log_margin: att.min_bend_log_margin.as_f64(),
    };

    let collar_min = diag.min_r_plus_6.as_f64();
    let end_mass = diag.end_mass.as_f64();
    let end_bound = collar.end_mass_bound().as_f64();
    let mut certificates = vec![
        Certificate::at_most("boundary.metric_residual", boundary_metric_residual, BOUNDARY_TOLERANCE),
        Certificate::at_most("boundary.mean_curvature_residual", boundary_h_residual, BOUNDARY_TOLERANCE),
        Certificate::above("collar.min_r_plus_6", collar_min, 0.0),
        Certificate::above(
            "collar.min_interior_mean_curvature",
            diag.min_interior_mean_curvature.as_f64(),
            0.0,
        ),
        Certificate::at_most(
            "collar.end_mass_minus_estimate",
            end_mass - end_bound,
            BOUNDARY_TOLERANCE * end_bound.abs().max(1.0),
        ),
        Certificate::above("exterior.mass_minus_end_mass", target_mass.as_f64() - end_mass, 0.0),
    ];
    certificates.extend(profile_certificates(&summary, target_mass.as_f64()));

    let mut report = ExtensionReport {
        status: Status::Fail,
        min_r_plus_6: collar_min.min(summary.min_r_plus_6),
        collar_min_r_plus_6: collar_min,
        profile_min_r_plus_6: summary.min_r_plus_6_glued,
        tail_max_abs_r_plus_6: summary.tail_max_abs_r_plus_6,
        boundary_metric_residual,
        boundary_h_residual,
        end_collar_mass: end_mass,
        exterior_mass: target_mass.as_f64(),
        level_masses: diag
            .level_masses
            .iter()
            .map(|(t, m)| LevelMass {
                t: t.as_f64(),
                mass: m.as_f64(),
            })
            .collect(),
        bound_values,
        parameters,
        gluing,
        certificates,
    };
    report.refresh_status();
    Ok(report)
}
