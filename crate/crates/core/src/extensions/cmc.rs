//! Collars over constant mean curvature data, modelled on the static family:
//! `A² dt² + r0^{-2} u_{m,b}(A k t)² g(t)` with `m < 0`.

use serde::{Deserialize, Serialize};

use crate::ads::{AdSSchwParams, StaticProfile};
use crate::error::{Error, Result};
use crate::geometry::{BartnikData, CollarMetric, ProfileCurve, Warp};
use crate::path::{compute_alpha_beta, MetricPath};
use crate::scalar::{min_of, Real};

use super::minimal::check_path_start;
use super::{diagnose, CollarDiagnostics, LAPSE_FLOOR, LAPSE_SAFETY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CmcVariant {
    /// `b = 0`.
    ZeroCosmological,
    /// `b > 0` coupled to `δ` through `k² b = δ`.
    PositiveCosmological,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmcCollarParams<T> {
    pub variant: CmcVariant,
    /// Model mass `m < 0`.
    pub mass: T,
    /// Model parameter `b ≥ 0`.
    pub cosmological: T,
    /// `k`, fixed by `H(0) = H0`.
    pub profile_rate: T,
    /// Lapse `A`.
    pub lapse_scale: T,
    /// `A0`; the construction needs `A > A0`.
    pub lapse_threshold: T,
    /// Coupling `δ = k² b` (positive variant only).
    pub coupling: Option<T>,
    pub epsilon_budget: Option<T>,
    pub alpha: T,
    pub beta: T,
    /// `ξ = H0 A_{−∞}/2` (zero variant) or `ζ = exp(A0 H0/2)` (positive variant).
    pub growth: T,
    /// Upper bound on `m(Σ₁)` at the chosen `m` and `A`.
    pub finite_mass_bound: T,
    /// Same estimate at `A = A0` (zero variant); equals the finite bound otherwise.
    pub threshold_mass_bound: T,
    /// The `|m| → ∞` bound.
    pub limit_mass_bound: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CmcCollar<T> {
    pub params: CmcCollarParams<T>,
    pub profile: StaticProfile<T>,
    pub metric: CollarMetric<T>,
    pub diagnostics: CollarDiagnostics<T>,
}

impl<T: Real> CmcCollar<T> {
    /// The round part as `dσ² + f(σ)² g*`, `σ = A t ∈ [Aθ, A]`, `f(σ) = u(kσ)`.
    pub fn outer_profile(&self, n: usize) -> Result<ProfileCurve<T>> {
        let a = self.params.lapse_scale;
        let rate = self.params.profile_rate;
        let start = a * self.metric.path().theta_param();
        let s = crate::geometry::uniform_grid(start, a, n)?;
        let stations: Vec<T> = s.iter().map(|x| *x * rate).collect();
        let vals = self.profile.evaluate(&stations)?;
        ProfileCurve::new(
            s,
            vals.iter().map(|v| v.0).collect(),
            vals.iter().map(|v| v.1 * rate).collect(),
            vals.iter().map(|v| v.2 * rate * rate).collect(),
            2,
        )
    }

    /// `m(Σ₁)` minus the limit bound.
    pub fn limit_slack(&self) -> T {
        self.diagnostics.end_mass - self.params.limit_mass_bound
    }
}

/// `k² = (H0² r0²/4)(1 + b r0² − 2m/r0)^{-1}`.
pub fn profile_rate_sq<T: Real>(h0: T, r0: T, mass: T, cosmological: T) -> T {
    let q = T::one() + cosmological * r0 * r0 - (mass + mass) / r0;
    h0 * h0 * r0 * r0 / T::lit(4.0) / q
}

/// `(ξ + 1) m_H + (r0³/2) ξ [H0²/4 + (ξ + 1)(ξ + 2)]`.
pub fn zero_cosmological_bound<T: Real>(hawking: T, h0: T, r0: T, xi: T) -> T {
    let one = T::one();
    hawking * (xi + one)
        + r0 * r0 * r0 / T::lit(2.0) * xi * (h0 * h0 / T::lit(4.0) + (xi + one) * (xi + T::lit(2.0)))
}

/// `ζ m_H + (ζ − 1) H0² r0³/8 + ζ(ζ² − 1) r0³/2`.
pub fn positive_cosmological_bound<T: Real>(hawking: T, h0: T, r0: T, zeta: T) -> T {
    let one = T::one();
    let r3 = r0 * r0 * r0;
    zeta * hawking + (zeta - one) * h0 * h0 * r3 / T::lit(8.0) + zeta * (zeta * zeta - one) * r3 / T::lit(2.0)
}

/// `(ξ, bound)` for the `b = 0` variant; checks `H0² r0²/4 < (β + 3r0²)/α`.
pub(crate) fn zero_variant_limit<T: Real>(data: &BartnikData<T>, alpha: T, beta: T) -> Result<(T, T)> {
    let (h0, r0) = (data.mean_curvature(), data.r0());
    let quarter_h2 = h0 * h0 * r0 * r0 / T::lit(4.0);
    let three_r2 = T::lit(3.0) * r0 * r0;
    if alpha > T::zero() && !(quarter_h2 < (beta + three_r2) / alpha) {
        return Err(Error::hypothesis(
            "H0² r0²/4 < (β + 3r0²)/α",
            format!("{quarter_h2} ≥ {}", (beta + three_r2) / alpha),
        ));
    }
    let xi = h0 * limiting_lapse_threshold(alpha, beta, h0, r0)? / T::lit(2.0);
    Ok((xi, zero_cosmological_bound(data.hawking_mass(), h0, r0, xi)))
}

/// `(ζ, bound)` for the `b > 0` variant; checks `β > −3r0²`.
pub(crate) fn positive_variant_limit<T: Real>(
    data: &BartnikData<T>,
    alpha: T,
    beta: T,
) -> Result<(T, T)> {
    let (h0, r0) = (data.mean_curvature(), data.r0());
    let zeta = (positive_lapse_threshold(alpha, beta, r0)? * h0 / T::lit(2.0)).exp();
    Ok((zeta, positive_cosmological_bound(data.hawking_mass(), h0, r0, zeta)))
}

/// `A_{−∞} = r0 (α/(β + 3r0² − α H0² r0²/4))^{1/2}`.
pub fn limiting_lapse_threshold<T: Real>(alpha: T, beta: T, h0: T, r0: T) -> Result<T> {
    let d = beta + T::lit(3.0) * r0 * r0 - alpha * h0 * h0 * r0 * r0 / T::lit(4.0);
    if alpha == T::zero() {
        return Ok(T::zero());
    }
    if !(d > T::zero()) {
        return Err(Error::hypothesis(
            "H0² r0²/4 < (β + 3r0²)/α",
            format!("β + 3r0² − α H0² r0²/4 = {d}"),
        ));
    }
    Ok(r0 * (alpha / d).sqrt())
}

/// `A0 = √(α/6)` for `β > 0`, `√(α/(3 + β/r0²))` for `−3r0² < β ≤ 0`.
pub fn positive_lapse_threshold<T: Real>(alpha: T, beta: T, r0: T) -> Result<T> {
    let three = T::lit(3.0);
    if beta > T::zero() {
        Ok((alpha / T::lit(6.0)).sqrt())
    } else if beta > -three * r0 * r0 {
        Ok((alpha / (three + beta / (r0 * r0))).sqrt())
    } else {
        Err(Error::hypothesis("β > −3r0²", format!("β = {beta}, r0 = {r0}")))
    }
}

fn check_common<T: Real>(data: &BartnikData<T>, path: &MetricPath<T>, mass: T) -> Result<()> {
    if !(mass < T::zero()) || !mass.is_finite() {
        return Err(Error::Domain(format!("model mass m = {mass} must be negative")));
    }
    check_path_start(data, path)?;
    check_cmc_data(data)
}

/// Hypotheses shared by both variants: `H0 > 0`, `K > −3` and
/// `H0² r0²/4 < 1 + 3r0²`.
pub(crate) fn check_cmc_data<T: Real>(data: &BartnikData<T>) -> Result<()> {
    let h0 = data.mean_curvature();
    if !(h0 > T::zero()) {
        return Err(Error::hypothesis("H0 > 0", format!("got H0 = {h0}")));
    }
    let kmin = min_of(&data.metric().gauss_curvature()?);
    if !(kmin > T::lit(-3.0)) {
        return Err(Error::hypothesis("K > −3", format!("min K = {kmin} on the boundary")));
    }
    let r0 = data.r0();
    let lhs = h0 * h0 * r0 * r0 / T::lit(4.0);
    let rhs = T::one() + T::lit(3.0) * r0 * r0;
    if !(lhs < rhs) {
        return Err(Error::hypothesis(
            "H0² r0²/4 < 1 + 3r0²",
            format!("{lhs} ≥ {rhs}"),
        ));
    }
    Ok(())
}

fn choose_lapse<T: Real>(threshold: T, r0: T) -> T {
    if threshold > T::zero() {
        T::lit(LAPSE_SAFETY) * threshold
    } else {
        T::lit(LAPSE_FLOOR) * r0
    }
}

fn assemble<T: Real>(
    data: &BartnikData<T>,
    path: MetricPath<T>,
    params: CmcCollarParams<T>,
) -> Result<CmcCollar<T>> {
    let r0 = data.r0();
    let model = AdSSchwParams::new(params.mass, params.cosmological)?;
    let profile = StaticProfile::new(model, r0)?;
    let a = params.lapse_scale;
    let lapse = vec![a; path.len()];
    let warp = Warp::Static {
        profile,
        speed: a * params.profile_rate,
    };
    let metric = CollarMetric::with_uniform_lapse(path, &lapse, warp)?;
    let diagnostics = diagnose(&metric, data.mean_curvature())?;
    if !(diagnostics.min_r_plus_6 > T::zero()) {
        return Err(Error::Numerical(format!(
            "collar has min(R + 6) = {:e} on the grid; try a larger |m|",
            diagnostics.min_r_plus_6
        )));
    }
    Ok(CmcCollar {
        params,
        profile,
        metric,
        diagnostics,
    })
}

/// Builds the `b = 0` collar for model mass `mass < 0`.
pub fn build_cmc_collar_b0<T: Real>(
    data: &BartnikData<T>,
    path: MetricPath<T>,
    mass: T,
) -> Result<CmcCollar<T>> {
    check_common(data, &path, mass)?;
    let (h0, r0) = (data.mean_curvature(), data.r0());
    let (alpha, beta) = compute_alpha_beta(&path)?;
    let (xi, limit) = zero_variant_limit(data, alpha, beta)?;
    let quarter_h2 = h0 * h0 * r0 * r0 / T::lit(4.0);
    let three_r2 = T::lit(3.0) * r0 * r0;
    let k2 = profile_rate_sq(h0, r0, mass, T::zero());
    let mass_term = T::one() - (mass + mass) / r0;
    let radicand = beta + three_r2 - k2 * (T::one() + alpha * mass_term);
    if !(radicand > T::zero()) {
        let d = beta + three_r2 - alpha * quarter_h2;
        let needed = -(r0 / T::lit(2.0)) * (quarter_h2 / d - T::one());
        return Err(Error::Infeasible(format!(
            "A0 undefined for m = {mass} (β + 3r0² − k²(1 + α(1 − 2m/r0)) = {radicand}); \
             choose m below {needed}"
        )));
    }
    let threshold = r0 * (alpha / radicand).sqrt();
    let a = choose_lapse(threshold, r0);
    let hawking = data.hawking_mass();
    let finite = |lapse: T| {
        let x = h0 * lapse / T::lit(2.0);
        let one = T::one();
        (x + one) * hawking - x * k2 * mass
            + r0 * r0 * r0 / T::lit(2.0) * (x + one) * ((x + one) * (x + one) - one)
    };
    let params = CmcCollarParams {
        variant: CmcVariant::ZeroCosmological,
        mass,
        cosmological: T::zero(),
        profile_rate: k2.sqrt(),
        lapse_scale: a,
        lapse_threshold: threshold,
        coupling: None,
        epsilon_budget: None,
        alpha,
        beta,
        growth: xi,
        finite_mass_bound: finite(a),
        threshold_mass_bound: finite(threshold),
        limit_mass_bound: limit,
    };
    assemble(data, path, params)
}

/// `δ = min(H0²/8, ε/2, 1/4)`.
pub fn default_coupling<T: Real>(h0: T, epsilon_budget: T) -> T {
    (h0 * h0 / T::lit(8.0))
        .min(epsilon_budget / T::lit(2.0))
        .min(T::lit(0.25))
}

/// Builds the `b > 0` collar for model mass `mass < 0`, coupling `δ`
/// (default [`default_coupling`]) and budget `ε`.
pub fn build_cmc_collar_bpos<T: Real>(
    data: &BartnikData<T>,
    path: MetricPath<T>,
    mass: T,
    coupling: Option<T>,
    epsilon_budget: T,
) -> Result<CmcCollar<T>> {
    check_common(data, &path, mass)?;
    let (h0, r0) = (data.mean_curvature(), data.r0());
    if !(epsilon_budget > T::zero()) {
        return Err(Error::Domain(format!("ε budget {epsilon_budget} must be positive")));
    }
    let delta = coupling.unwrap_or_else(|| default_coupling(h0, epsilon_budget));
    let quarter_h = h0 * h0 / T::lit(4.0);
    let cap = quarter_h.min(epsilon_budget).min(T::lit(0.5));
    if !(delta > T::zero() && delta < cap) {
        return Err(Error::Domain(format!(
            "coupling δ = {delta} not in (0, min(H0²/4, ε, 1/2)) = (0, {cap})"
        )));
    }
    let (alpha, beta) = compute_alpha_beta(&path)?;
    let threshold = positive_lapse_threshold(alpha, beta, r0)?;
    let mass_term = T::one() - (mass + mass) / r0;
    let b = delta * mass_term / ((quarter_h - delta) * r0 * r0);
    let k2 = (quarter_h - delta) * r0 * r0 / mass_term;
    let a = choose_lapse(threshold, r0);
    let finite = |lapse: T| {
        let w = (T::one() - (mass + mass) / (r0 * (T::one() + b * r0 * r0))).sqrt();
        let x = delta.sqrt() * lapse * w;
        let u = r0 * x.cosh() + (b.recip() + r0 * r0).sqrt() * x.sinh();
        u / T::lit(2.0) * (T::one() - k2 + (T::one() - delta) * u * u) + k2 * mass
    };
    let (zeta, limit) = positive_variant_limit(data, alpha, beta)?;
    let bound = finite(a);
    let params = CmcCollarParams {
        variant: CmcVariant::PositiveCosmological,
        mass,
        cosmological: b,
        profile_rate: k2.sqrt(),
        lapse_scale: a,
        lapse_threshold: threshold,
        coupling: Some(delta),
        epsilon_budget: Some(epsilon_budget),
        alpha,
        beta,
        growth: zeta,
        finite_mass_bound: bound,
        threshold_mass_bound: bound,
        limit_mass_bound: limit,
    };
    assemble(data, path, params)
}
