//! Paths of surface metrics from Bartnik data to the round sphere.
//!
//! A [`MetricPath`] keeps, for every `t`, the conformal representative
//! `g(t) = e^{2φ_t} g*` in its own coordinate together with the
//! rearrangement `X_t` that makes the pulled-back metric
//! `h(t) = X_t^* g(t) = P dx² + Q dϕ²` carry the fixed area form
//! `e^{2φ_0} dx dϕ`. Collar quantities are evaluated on `h(t)` at fixed
//! labels `x`.

pub mod eigen;
pub mod flow;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fd;
use crate::geometry::AxisymmetricSurfaceMetric;
use crate::roots::newton_bracketed;
use crate::scalar::{max_of, min_of, Real};
use crate::spectral::{eval_series, eval_series_with_derivative, integrate_series, LegendreGrid};

pub use eigen::{eigenpath, first_eigenpair, EigenPair, EigenPath};
pub use flow::{
    flow_to_round, normalized_ricci_flow, normalized_ricci_flow_with, stable_step, FlowGauge,
    RawFlow,
};

/// Pulled-back data of one path slice at the fixed labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelSlice<T> {
    /// `X_t(x_j)`.
    pub position: Vec<T>,
    /// `X_t'(x_j) = e^{2φ_0(x_j)} / e^{2φ_t(X)}`.
    pub stretch: Vec<T>,
    /// `ln Q = 2φ_t(X) + ln(1 − X²)`.
    pub log_q: Vec<T>,
    /// Gauss curvature of `g(t)` at `X`.
    pub curvature: Vec<T>,
    /// `(1 − X²)/X'`, the flux coefficient of the label Laplacian.
    pub flux: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricPath<T> {
    t: Vec<T>,
    metrics: Vec<AxisymmetricSurfaceMetric<T>>,
    slices: Vec<LabelSlice<T>>,
    theta_param: T,
    r0: T,
    /// flow time behind each sample (equal to `t` for paths not built from a flow)
    flow_time: Vec<T>,
}

impl<T: Real> MetricPath<T> {
    /// Path through the given conformal metrics, normalized so that its area
    /// form is constant. `theta_param` records where the path becomes round.
    pub fn from_metrics(
        t: Vec<T>,
        metrics: Vec<AxisymmetricSurfaceMetric<T>>,
        theta_param: T,
    ) -> Result<Self> {
        let flow_time = t.clone();
        Self::assemble(t, metrics, theta_param, flow_time)
    }

    /// Constant path `g(t) ≡ g` on a uniform grid of `n_t` samples.
    pub fn constant(g: &AxisymmetricSurfaceMetric<T>, n_t: usize, theta_param: T) -> Result<Self> {
        let t = unit_grid(n_t)?;
        let metrics = vec![g.clone(); n_t];
        Self::from_metrics(t, metrics, theta_param)
    }

    fn assemble(
        t: Vec<T>,
        metrics: Vec<AxisymmetricSurfaceMetric<T>>,
        theta_param: T,
        flow_time: Vec<T>,
    ) -> Result<Self> {
        if t.len() < 3 {
            return Err(Error::TooFewSamples { need: 3, got: t.len() });
        }
        if t.len() != metrics.len() {
            return Err(Error::InvalidMetric("one metric per time sample required".into()));
        }
        if !(theta_param > T::zero() && theta_param < T::one()) {
            return Err(Error::Domain(format!("path parameter {theta_param} not in (0, 1)")));
        }
        let g0 = &metrics[0];
        let grid = g0.grid().clone();
        if metrics.iter().any(|m| !Arc::ptr_eq(m.grid(), &grid) && **m.grid() != *grid) {
            return Err(Error::InvalidMetric("path metrics on different grids".into()));
        }
        let area0 = g0.area();
        for (i, m) in metrics.iter().enumerate() {
            let rel = ((m.area() - area0) / area0).abs();
            if rel > T::tol(1e-6) {
                return Err(Error::InvalidMetric(format!(
                    "area not preserved at sample {i} (relative change {rel:e})"
                )));
            }
        }
        let slices = metrics
            .par_iter()
            .map(|m| rearrange(g0, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(MetricPath {
            t,
            r0: g0.area_radius(),
            metrics,
            slices,
            theta_param,
            flow_time,
        })
    }

    pub fn t_grid(&self) -> &[T] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn metrics(&self) -> &[AxisymmetricSurfaceMetric<T>] {
        &self.metrics
    }

    pub fn metric(&self, i: usize) -> &AxisymmetricSurfaceMetric<T> {
        &self.metrics[i]
    }

    pub fn slice(&self, i: usize) -> &LabelSlice<T> {
        &self.slices[i]
    }

    pub fn theta_param(&self) -> T {
        self.theta_param
    }

    pub fn r0(&self) -> T {
        self.r0
    }

    pub fn flow_times(&self) -> &[T] {
        &self.flow_time
    }

    pub fn grid(&self) -> &Arc<LegendreGrid<T>> {
        self.metrics[0].grid()
    }

    /// Spacing of the (uniform) time grid.
    pub fn dt(&self) -> T {
        self.t[1] - self.t[0]
    }

    /// Fixed area density `e^{2φ_0}` at the labels.
    pub fn label_density(&self) -> Vec<T> {
        self.metrics[0].density()
    }

    /// `∫ f dA = 2π ∫ f e^{2φ_0} dx` over the labels.
    pub fn integrate_labels(&self, f: &[T]) -> T {
        self.metrics[0].integrate(f)
    }

    /// `Δ_{h(t)} v = e^{-2φ_0} ∂_x((1 − X²)/X' · ∂_x v)` at the labels.
    pub fn label_laplacian(&self, i: usize, v: &[T]) -> Vec<T> {
        let grid = self.grid();
        let dv = grid.differentiate(v);
        let flux: Vec<T> = dv.iter().zip(&self.slices[i].flux).map(|(a, b)| *a * *b).collect();
        grid.differentiate(&flux)
            .iter()
            .zip(self.metrics[0].phi())
            .map(|(d, p)| *d * (-(*p + *p)).exp())
            .collect()
    }

    /// `|h'(t)|²_{h(t)}` at the labels, `2 (∂_t ln Q)²` since the
    /// pulled-back path is trace-free.
    pub fn gprime_sq(&self, i: usize) -> Result<Vec<T>> {
        if self.len() < 5 {
            return Err(Error::TooFewSamples { need: 5, got: self.len() });
        }
        let h = self.dt();
        let n = self.grid().len();
        Ok((0..n)
            .map(|j| {
                let series: Vec<T> = self.slices.iter().map(|s| s.log_q[j]).collect();
                let d = fd::first_at(&series, h, i);
                (d * d) * T::lit(2.0)
            })
            .collect())
    }

    /// Discrete trace residual `max_j |∂_t ln(PQ)|` at sample `i`, with `X'`
    /// recomputed by spectral differentiation of the labels.
    pub fn trace_residual(&self, i: usize) -> Result<T> {
        if self.len() < 5 {
            return Err(Error::TooFewSamples { need: 5, got: self.len() });
        }
        let h = self.dt();
        let logs: Vec<Vec<T>> = (0..self.len()).map(|k| self.log_area_density(k)).collect();
        let n = self.grid().len();
        Ok((0..n)
            .map(|j| {
                let series: Vec<T> = logs.iter().map(|l| l[j]).collect();
                fd::first_at(&series, h, i).abs()
            })
            .fold(T::zero(), T::max))
    }

    /// `ln(PQ) = 2 ln(e^{2φ_t(X)} X')` with `X'` by spectral differentiation.
    fn log_area_density(&self, k: usize) -> Vec<T> {
        let grid = self.grid();
        let dx = grid.differentiate(&self.slices[k].position);
        let coeffs = grid.coefficients(self.metrics[k].phi());
        self.slices[k]
            .position
            .iter()
            .zip(dx)
            .map(|(x, d)| {
                let p = eval_series(&coeffs, *x);
                (p + p + d.ln()) * T::lit(2.0)
            })
            .collect()
    }

    /// Pointwise area-form residual `max_j |e^{2φ_t(X)} X'_spec − e^{2φ_0}|`
    /// relative to `max e^{2φ_0}`.
    pub fn area_form_residual(&self, k: usize) -> T {
        let dens0 = self.label_density();
        let scale = max_of(&dens0);
        self.log_area_density(k)
            .iter()
            .zip(&dens0)
            .map(|(l, d)| ((*l * T::lit(0.5)).exp() - *d).abs() / scale)
            .fold(T::zero(), T::max)
    }
}

/// `n` uniform samples of `[0, 1]`.
pub fn unit_grid<T: Real>(n: usize) -> Result<Vec<T>> {
    crate::geometry::uniform_grid(T::zero(), T::one(), n)
}

/// Monotone rearrangement of `g` onto the area form of `g0`.
fn rearrange<T: Real>(
    g0: &AxisymmetricSurfaceMetric<T>,
    g: &AxisymmetricSurfaceMetric<T>,
) -> Result<LabelSlice<T>> {
    let grid = g0.grid();
    let dens0 = g0.density();
    let dens = g.density();
    let c0 = grid.coefficients(&dens0);
    let c = grid.coefficients(&dens);
    let total = integrate_series(&c, T::one());
    let phi_c = grid.coefficients(g.phi());
    let k_c = grid.coefficients(&g.curvature_unchecked());
    let same = g.phi() == g0.phi();
    let mut slice = LabelSlice {
        position: Vec::with_capacity(grid.len()),
        stretch: Vec::with_capacity(grid.len()),
        log_q: Vec::with_capacity(grid.len()),
        curvature: Vec::with_capacity(grid.len()),
        flux: Vec::with_capacity(grid.len()),
    };
    let k_nodal = g.curvature_unchecked();
    for (j, &x) in grid.nodes().iter().enumerate() {
        let (pos, e2phi, kval) = if same {
            (x, dens0[j], k_nodal[j])
        } else {
            let target = integrate_series(&c0, x);
            if !(target > T::zero() && target < total) {
                return Err(Error::Numerical(format!(
                    "cumulative area {target} outside (0, {total}) at label {j}"
                )));
            }
            let pos = newton_bracketed(
                |y| {
                    let (p, _) = eval_series_with_derivative(&phi_c, y);
                    (integrate_series(&c, y) - target, (p + p).exp())
                },
                -T::one(),
                T::one(),
                T::epsilon() * T::lit(4.0),
            )?;
            let p = eval_series(&phi_c, pos);
            (pos, (p + p).exp(), eval_series(&k_c, pos))
        };
        let stretch = dens0[j] / e2phi;
        let one_minus = T::one() - pos * pos;
        slice.position.push(pos);
        slice.stretch.push(stretch);
        slice.log_q.push(e2phi.ln() + one_minus.ln());
        slice.curvature.push(kval);
        slice.flux.push(one_minus / stretch);
    }
    Ok(slice)
}

/// Samples the raw flow at the given flow times (no reparametrization) and
/// normalizes the area form.
pub fn area_form_normalize<T: Real>(raw: &RawFlow<T>, flow_times: &[T], theta_param: T) -> Result<MetricPath<T>> {
    let metrics = flow_times
        .iter()
        .map(|tau| AxisymmetricSurfaceMetric::new(raw.grid().clone(), raw.phi_at(*tau)?))
        .collect::<Result<Vec<_>>>()?;
    MetricPath::assemble(flow_times.to_vec(), metrics, theta_param, flow_times.to_vec())
}

/// Time warp `t ↦ τ(t)` from `[0, θ]` onto the flow interval `[0, T]`:
/// `e^{-ρτ} = 1 − (1 − e^{-ρT}) w(t/θ)` with `w(s) = 1 − (1 − s)³`, so that
/// `τ' > 0` on `[0, θ)` and the path meets the round metric with vanishing
/// first and second derivatives. For `t ≥ θ` the warp is `T`.
pub fn time_warp<T: Real>(t: T, theta_param: T, final_time: T, rate: T) -> T {
    if t >= theta_param {
        return final_time;
    }
    let s = t / theta_param;
    let w = T::one() - (T::one() - s).powi(3);
    let decay = T::one() - (-rate * final_time).exp();
    let inner = T::one() - decay * w;
    (-inner.ln() / rate).min(final_time)
}

/// Derivative of [`time_warp`] in `t`.
pub fn time_warp_rate<T: Real>(t: T, theta_param: T, final_time: T, rate: T) -> T {
    if t >= theta_param {
        return T::zero();
    }
    let s = t / theta_param;
    let w = T::one() - (T::one() - s).powi(3);
    let dw = T::lit(3.0) * (T::one() - s).powi(2) / theta_param;
    let decay = T::one() - (-rate * final_time).exp();
    decay * dw / (rate * (T::one() - decay * w))
}

/// Reparametrizes a converged flow onto `t ∈ [0, 1]` with `n_t` samples;
/// `g(t)` is snapped to `r0² g*` for `t ≥ theta_param` and `g(0) = g_0`
/// bitwise.
pub fn reparametrize_path<T: Real>(raw: &RawFlow<T>, theta_param: T, n_t: usize) -> Result<MetricPath<T>> {
    if !(theta_param > T::zero() && theta_param < T::one()) {
        return Err(Error::Domain(format!("path parameter {theta_param} not in (0, 1)")));
    }
    let roundness = raw.final_roundness();
    let r0 = raw.r0();
    if roundness > T::tol(1e-6) {
        return Err(Error::NotConverged(format!(
            "flow not round (max |K - r0^-2| = {roundness:e}); use a longer flow time"
        )));
    }
    let t = unit_grid(n_t)?;
    let rate = T::lit(4.0) / (r0 * r0);
    let final_time = raw.final_time();
    let round = AxisymmetricSurfaceMetric::round(raw.grid().clone(), r0)?;
    let mut flow_time = Vec::with_capacity(n_t);
    let mut metrics = Vec::with_capacity(n_t);
    for (i, ti) in t.iter().enumerate() {
        let tau = time_warp(*ti, theta_param, final_time, rate);
        flow_time.push(tau);
        if i == 0 {
            metrics.push(raw.metric_at_step(0)?);
        } else if *ti >= theta_param {
            metrics.push(round.clone());
        } else {
            metrics.push(AxisymmetricSurfaceMetric::new(raw.grid().clone(), raw.phi_at(tau)?)?);
        }
    }
    MetricPath::assemble(t, metrics, theta_param, flow_time)
}

/// Convenience pipeline: flow to roundness, reparametrize and normalize.
pub fn ricci_flow_path<T: Real>(
    g0: &AxisymmetricSurfaceMetric<T>,
    theta_param: T,
    n_t: usize,
) -> Result<MetricPath<T>> {
    let r0 = g0.area_radius();
    let k = g0.gauss_curvature()?;
    let target = (r0 * r0).recip();
    if k.iter().all(|v| (*v - target).abs() <= T::tol(1e-12) * target)
        && g0.phi().iter().all(|p| (*p - r0.ln()).abs() <= T::tol(1e-12))
    {
        return MetricPath::constant(g0, n_t, theta_param);
    }
    let raw = flow_to_round(g0, T::tol(1e-10), T::lit(200.0) * r0 * r0)?;
    reparametrize_path(&raw, theta_param, n_t)
}

/// `max_j |g'|²_{g}` at sample `i`.
pub fn path_norm_gprime<T: Real>(path: &MetricPath<T>, i: usize) -> Result<T> {
    if i >= path.len() {
        return Err(Error::IndexOutOfRange { index: i, len: path.len() });
    }
    Ok(max_of(&path.gprime_sq(i)?).max(T::zero()))
}

/// Spectral interpolant of nodal values sampled on a uniform `θ` grid eight
/// times finer than the nodes, poles included.
fn resampled<T: Real>(grid: &LegendreGrid<T>, f: &[T]) -> Vec<T> {
    let c = grid.coefficients(f);
    let m = 8 * grid.len();
    (0..=m)
        .map(|k| eval_series(&c, (T::PI() * T::from_usize_lossy(k) / T::from_usize_lossy(m)).cos()))
        .collect()
}

/// `α = ¼ sup |g'|²` and `β = inf r0² K` over the path, taken over the
/// interpolants rather than the nodes.
pub fn compute_alpha_beta<T: Real>(path: &MetricPath<T>) -> Result<(T, T)> {
    let grid = path.grid();
    let mut gmax = T::zero();
    let mut kmin = T::infinity();
    for i in 0..path.len() {
        gmax = gmax.max(max_of(&resampled(grid, &path.gprime_sq(i)?)));
        kmin = kmin.min(min_of(&resampled(grid, &path.metric(i).curvature_unchecked())));
    }
    let r0 = path.r0();
    Ok((gmax / T::lit(4.0), kmin * r0 * r0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_round_path() {
        let grid = Arc::new(LegendreGrid::<f64>::new(16));
        let g = AxisymmetricSurfaceMetric::round(grid, 2.0).unwrap();
        let p = MetricPath::constant(&g, 11, 0.75).unwrap();
        let (a, b) = compute_alpha_beta(&p).unwrap();
        assert_eq!(a, 0.0);
        assert!((b - 1.0).abs() < 1e-13);
        for i in 0..11 {
            assert_eq!(path_norm_gprime(&p, i).unwrap(), 0.0);
            assert!(p.trace_residual(i).unwrap() < 1e-12);
        }
    }

    #[test]
    fn warp_is_monotone() {
        let mut prev = -1.0;
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let tau = time_warp(t, 0.75, 6.0, 4.0);
            assert!(tau >= prev);
            if t < 0.75 {
                assert!(time_warp_rate(t, 0.75, 6.0, 4.0) > 0.0);
            }
            prev = tau;
        }
        assert_eq!(time_warp(0.0, 0.75, 6.0, 4.0), 0.0);
        assert_eq!(time_warp(0.8, 0.75, 6.0, 4.0), 6.0);
    }

    #[test]
    fn rearrangement_undoes_conformal_diffeomorphism() {
        // a Möbius image of the unit sphere has the same geometry
        let grid = Arc::new(LegendreGrid::<f64>::new(32));
        let a: f64 = 0.2;
        let phi: Vec<f64> = grid
            .nodes()
            .iter()
            .map(|x| -(a.cosh() - a.sinh() * x).ln())
            .collect();
        let moved = AxisymmetricSurfaceMetric::new(grid.clone(), phi).unwrap();
        let round = AxisymmetricSurfaceMetric::round(grid, 1.0).unwrap();
        let t = unit_grid(5).unwrap();
        let p = MetricPath::from_metrics(t, vec![round.clone(), moved.clone(), moved.clone(), round.clone(), round], 0.5)
            .unwrap();
        for (x, y) in p.grid().nodes().iter().zip(&p.slice(1).position) {
            assert!((x - y).abs() > 0.0 || a == 0.0);
        }
        // pulled back metric coincides with the initial one
        let s0 = p.slice(0);
        let s1 = p.slice(1);
        for j in 0..32 {
            assert!((s0.log_q[j] - s1.log_q[j]).abs() < 1e-10);
        }
    }
}
