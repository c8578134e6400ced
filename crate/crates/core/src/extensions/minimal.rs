//! Collars over minimal boundary data: `A² u² dt² + (1 + ε t²) g(t)` with
//! `u(t, ·)` the first eigenfunction of `−Δ + K` along the path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BartnikData, CollarMetric, ProfileCurve, Warp};
use crate::path::{compute_alpha_beta, EigenPath, MetricPath};
use crate::scalar::{min_of, Real};

use super::{diagnose, CollarDiagnostics, LAPSE_SAFETY};

/// Which boundary condition admitted the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinimalHypothesis {
    /// `λ₁(−Δ + K) > 0` on the boundary metric.
    PositiveEigenvalue,
    /// `K > −3` on the boundary metric.
    CurvatureAboveMinusThree,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimalCollarParams<T> {
    /// Lapse scale `A`.
    pub lapse_scale: T,
    /// Smallest `A` for which the curvature condition holds.
    pub lapse_threshold: T,
    pub epsilon: T,
    pub alpha: T,
    pub beta: T,
    /// `inf u² (λ + 3)` over the path.
    pub eigen_infimum: T,
    /// `sup |∂_t u / u|`.
    pub eigen_rate_sup: T,
    /// `u(1)`, constant on the round end of the path.
    pub end_eigenfunction: T,
    /// `C` in `m(Σ₁) ≤ m(Σ₀) + √ε C`, equal to `(r0/2)(1 + 3 r0²)`.
    pub mass_constant: T,
    pub hypothesis: MinimalHypothesis,
    pub boundary_eigenvalue: T,
    pub boundary_min_curvature: T,
    pub eigen: EigenPath<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimalCollar<T> {
    pub params: MinimalCollarParams<T>,
    pub metric: CollarMetric<T>,
    pub diagnostics: CollarDiagnostics<T>,
}

impl<T: Real> MinimalCollar<T> {
    /// `m(Σ₀) + √ε C`.
    pub fn end_mass_estimate(&self) -> T {
        let p = &self.params;
        self.diagnostics.boundary_mass + p.epsilon.sqrt() * p.mass_constant
    }

    /// `A u(1)`, the arclength of the collar over its round part per unit `t`.
    pub fn arclength_scale(&self) -> T {
        self.params.lapse_scale * self.params.end_eigenfunction
    }

    /// The round part `t ∈ [θ, 1]` as `ds² + f(s)² g*` with `s = A u(1) t`,
    /// `f = r0 (1 + ε s²/(A u(1))²)^{1/2}`, on `n` samples.
    pub fn outer_profile(&self, n: usize) -> Result<ProfileCurve<T>> {
        let c = self.arclength_scale();
        let r0 = self.metric.path().r0();
        let eps = self.params.epsilon;
        let k = eps / (c * c);
        let start = c * self.metric.path().theta_param();
        ProfileCurve::from_fn(start, c, n, 2, |s| {
            let q = (T::one() + k * s * s).sqrt();
            (r0 * q, r0 * k * s / q, r0 * k / (q * q * q))
        })
    }
}

/// Builds the minimal collar over `path` (which must start at the boundary
/// metric) with bulge parameter `epsilon ∈ (0, 1)`.
pub fn build_minimal_collar<T: Real>(
    data: &BartnikData<T>,
    path: MetricPath<T>,
    eigen: EigenPath<T>,
    epsilon: T,
) -> Result<MinimalCollar<T>> {
    if data.mean_curvature() != T::zero() {
        return Err(Error::hypothesis(
            "H0 = 0",
            format!("minimal collar needs minimal data, got H0 = {}", data.mean_curvature()),
        ));
    }
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::Domain(format!("bulge parameter {epsilon} not in (0, 1)")));
    }
    check_path_start(data, &path)?;
    if eigen.u.len() != path.len() {
        return Err(Error::InvalidMetric("eigen data does not match the path".into()));
    }
    let boundary_eigenvalue = eigen.lambda[0];
    let boundary_min_curvature = min_of(&data.metric().gauss_curvature()?);
    let hypothesis = if boundary_eigenvalue > T::zero() {
        MinimalHypothesis::PositiveEigenvalue
    } else if boundary_min_curvature > T::lit(-3.0) {
        MinimalHypothesis::CurvatureAboveMinusThree
    } else {
        return Err(Error::hypothesis(
            "λ₁(−Δ + K) > 0 or K > −3",
            format!(
                "λ₁ = {boundary_eigenvalue} and min K = {boundary_min_curvature} on the boundary"
            ),
        ));
    };
    let (alpha, beta) = compute_alpha_beta(&path)?;
    let infimum = eigen.infimum_u2_lambda3();
    let rate = eigen.dtu_over_u_sup;
    if !(infimum > T::zero()) {
        return Err(Error::Infeasible(format!(
            "no lapse scale works: inf u²(λ + 3) = {infimum} is not positive"
        )));
    }
    let two = T::lit(2.0);
    let threshold = ((two + alpha + two * rate) / infimum).sqrt();
    let a = T::lit(LAPSE_SAFETY) * threshold;
    let u_end = eigen.u[path.len() - 1][0];
    if !(epsilon / (T::one() + epsilon) < a * a * u_end * u_end) {
        return Err(Error::Infeasible(format!(
            "ε/(1+ε) = {} not below A²u(1)² = {}",
            epsilon / (T::one() + epsilon),
            a * a * u_end * u_end
        )));
    }
    let lapse: Vec<Vec<T>> = eigen
        .u
        .iter()
        .map(|row| row.iter().map(|x| a * *x).collect())
        .collect();
    let r0 = path.r0();
    let metric = CollarMetric::new(path, lapse, Warp::Bulge { epsilon })?;
    let diagnostics = diagnose(&metric, T::zero())?;
    if !(diagnostics.min_r_plus_6 > T::zero()) {
        return Err(Error::Numerical(format!(
            "minimal collar has min(R + 6) = {:e} on the grid",
            diagnostics.min_r_plus_6
        )));
    }
    let params = MinimalCollarParams {
        lapse_scale: a,
        lapse_threshold: threshold,
        epsilon,
        alpha,
        beta,
        eigen_infimum: infimum,
        eigen_rate_sup: rate,
        end_eigenfunction: u_end,
        mass_constant: r0 / two * (T::one() + T::lit(3.0) * r0 * r0),
        hypothesis,
        boundary_eigenvalue,
        boundary_min_curvature,
        eigen,
    };
    Ok(MinimalCollar {
        params,
        metric,
        diagnostics,
    })
}

/// The path must start at the boundary metric sample for sample.
pub(crate) fn check_path_start<T: Real>(data: &BartnikData<T>, path: &MetricPath<T>) -> Result<()> {
    if path.metric(0).phi() != data.metric().phi() {
        return Err(Error::InvalidMetric(
            "path does not start at the boundary metric".into(),
        ));
    }
    Ok(())
}
