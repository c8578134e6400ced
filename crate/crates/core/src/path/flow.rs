//! Area-normalized Ricci flow of axisymmetric conformal metrics,
//! `∂φ/∂t = −K + ⟨K⟩`, with `⟨K⟩` the area average of `K`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::AxisymmetricSurfaceMetric;
use crate::scalar::{max_abs, max_of, min_of, Real};
use crate::spectral::LegendreGrid;

/// Optional conformal-gauge term. Adding `c(t)·((1 − x²)φ' − x)` moves the
/// metric along a Möbius vector field, which changes coordinates but not
/// the geometry; `c` relaxes the `P_1` coefficient of `φ` to zero at the
/// linearized rate, so the flow settles on `φ ≡ ln r0` instead of a
/// Möbius image of the round sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowGauge {
    None,
    Centered,
}

/// Time samples of the conformal factor along the flow, with the time
/// derivatives needed for cubic Hermite interpolation in time.
#[derive(Debug, Clone)]
pub struct RawFlow<T> {
    grid: Arc<LegendreGrid<T>>,
    times: Vec<T>,
    phi: Vec<Vec<T>>,
    phi_dot: Vec<Vec<T>>,
    r0: T,
    gauge: FlowGauge,
    initial_area: T,
    max_area_drift: T,
    min_curvature: T,
}

impl<T: Real> RawFlow<T> {
    pub fn grid(&self) -> &Arc<LegendreGrid<T>> {
        &self.grid
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn final_time(&self) -> T {
        self.times[self.times.len() - 1]
    }

    pub fn phi(&self) -> &[Vec<T>] {
        &self.phi
    }

    pub fn r0(&self) -> T {
        self.r0
    }

    pub fn gauge(&self) -> FlowGauge {
        self.gauge
    }

    /// Largest relative area change over all recorded steps.
    pub fn max_area_drift(&self) -> T {
        self.max_area_drift
    }

    /// Minimum of `K` over all recorded steps and nodes.
    pub fn min_curvature(&self) -> T {
        self.min_curvature
    }

    pub fn initial_area(&self) -> T {
        self.initial_area
    }

    pub fn metric_at_step(&self, k: usize) -> Result<AxisymmetricSurfaceMetric<T>> {
        AxisymmetricSurfaceMetric::new(self.grid.clone(), self.phi[k].clone())
    }

    /// `max |K − r0^{-2}|` at the last step.
    pub fn final_roundness(&self) -> T {
        let g = AxisymmetricSurfaceMetric::new(self.grid.clone(), self.phi[self.phi.len() - 1].clone())
            .expect("flow samples are finite");
        let target = (self.r0 * self.r0).recip();
        let k = g.curvature_unchecked();
        k.iter().fold(T::zero(), |m, v| m.max((*v - target).abs()))
    }

    /// Conformal factor at flow time `tau`, by cubic Hermite interpolation
    /// between recorded steps.
    pub fn phi_at(&self, tau: T) -> Result<Vec<T>> {
        let n = self.times.len();
        let t_end = self.times[n - 1];
        if tau < T::zero() || tau > t_end * (T::one() + T::epsilon() * T::lit(8.0)) {
            return Err(Error::Domain(format!("flow time {tau} outside [0, {t_end}]")));
        }
        let k = match self.times.binary_search_by(|t| t.partial_cmp(&tau).unwrap_or(std::cmp::Ordering::Less)) {
            Ok(k) => return Ok(self.phi[k].clone()),
            Err(k) => k.clamp(1, n - 1) - 1,
        };
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let h = t1 - t0;
        let s = (tau - t0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = -two * s3 + three * s2;
        let h11 = s3 - s2;
        Ok((0..self.grid.len())
            .map(|j| {
                h00 * self.phi[k][j]
                    + h10 * h * self.phi_dot[k][j]
                    + h01 * self.phi[k + 1][j]
                    + h11 * h * self.phi_dot[k + 1][j]
            })
            .collect())
    }
}

/// Right-hand side of the flow at one state.
pub(crate) fn flow_rhs<T: Real>(
    grid: &LegendreGrid<T>,
    phi: &[T],
    gauge: FlowGauge,
    rate: T,
) -> Vec<T> {
    let lap = grid.laplacian(phi);
    let dens: Vec<T> = phi.iter().map(|p| (*p + *p).exp()).collect();
    let k: Vec<T> = lap
        .iter()
        .zip(&dens)
        .map(|(l, d)| (T::one() - *l) / *d)
        .collect();
    let area = grid.integrate(&dens);
    let weighted: Vec<T> = k.iter().zip(&dens).map(|(a, b)| *a * *b).collect();
    let avg = grid.integrate(&weighted) / area;
    let mut rhs: Vec<T> = k.iter().map(|v| avg - *v).collect();
    if gauge == FlowGauge::Centered {
        let dphi = grid.differentiate(phi);
        let field: Vec<T> = grid
            .nodes()
            .iter()
            .zip(&dphi)
            .map(|(x, d)| (T::one() - *x * *x) * *d - *x)
            .collect();
        let p1 = |f: &[T]| {
            let w: Vec<T> = f.iter().zip(grid.nodes()).map(|(a, x)| *a * *x).collect();
            grid.integrate(&w) * T::lit(1.5)
        };
        let field_p1 = p1(&field);
        if field_p1.abs() > T::epsilon() {
            let c = (-rate * p1(phi) - p1(&rhs)) / field_p1;
            for (r, v) in rhs.iter_mut().zip(&field) {
                *r = *r + c * *v;
            }
        }
    }
    rhs
}

/// Largest stable RK4 step for the current state (spectral radius of the
/// linearized operator `e^{-2φ}Δ*` against the RK4 stability interval).
pub fn stable_step<T: Real>(grid: &LegendreGrid<T>, phi: &[T]) -> T {
    let n = T::from_usize_lossy(grid.len());
    let spectral_radius = n * (n - T::one()) * (-(min_of(phi) + min_of(phi))).exp();
    T::lit(0.5) * T::lit(2.78) / spectral_radius
}

/// Runs the flow for `flow_time` with `steps` RK4 steps, no gauge term.
pub fn normalized_ricci_flow<T: Real>(
    g0: &AxisymmetricSurfaceMetric<T>,
    flow_time: T,
    steps: usize,
) -> Result<RawFlow<T>> {
    normalized_ricci_flow_with(g0, flow_time, steps, FlowGauge::None)
}

pub fn normalized_ricci_flow_with<T: Real>(
    g0: &AxisymmetricSurfaceMetric<T>,
    flow_time: T,
    steps: usize,
    gauge: FlowGauge,
) -> Result<RawFlow<T>> {
    if !(flow_time > T::zero()) || steps == 0 {
        return Err(Error::Domain("flow needs positive time and at least one step".into()));
    }
    g0.validate()?;
    let grid = g0.grid().clone();
    let r0 = g0.area_radius();
    let rate = T::lit(4.0) / (r0 * r0);
    let dt = flow_time / T::from_usize_lossy(steps);
    let limit = stable_step(&grid, g0.phi());
    if dt > limit {
        return Err(Error::Numerical(format!(
            "step {dt:e} exceeds the RK4 stability bound {limit:e}; use at least {} steps",
            (flow_time / limit).ceil()
        )));
    }
    let area0 = g0.area();
    let mut flow = RawFlow {
        grid: grid.clone(),
        times: vec![T::zero()],
        phi: vec![g0.phi().to_vec()],
        phi_dot: vec![flow_rhs(&grid, g0.phi(), gauge, rate)],
        r0,
        gauge,
        initial_area: area0,
        max_area_drift: T::zero(),
        min_curvature: min_of(&g0.curvature_unchecked()),
    };
    let half = T::lit(0.5);
    let sixth = T::lit(1.0 / 6.0);
    let mut phi = g0.phi().to_vec();
    for step in 1..=steps {
        let k1 = flow.phi_dot[step - 1].clone();
        let stage = |base: &[T], k: &[T], c: T| -> Vec<T> {
            base.iter().zip(k).map(|(p, d)| *p + c * dt * *d).collect()
        };
        let k2 = flow_rhs(&grid, &stage(&phi, &k1, half), gauge, rate);
        let k3 = flow_rhs(&grid, &stage(&phi, &k2, half), gauge, rate);
        let k4 = flow_rhs(&grid, &stage(&phi, &k3, T::one()), gauge, rate);
        for j in 0..phi.len() {
            phi[j] = phi[j] + dt * sixth * (k1[j] + (k2[j] + k3[j]) * T::lit(2.0) + k4[j]);
        }
        if phi.iter().any(|p| !p.is_finite()) || max_abs(&phi) > T::lit(50.0) {
            return Err(Error::Numerical(format!(
                "flow blew up at t = {}",
                dt * T::from_usize_lossy(step)
            )));
        }
        let g = AxisymmetricSurfaceMetric::new(grid.clone(), phi.clone())?;
        let drift = ((g.area() - area0) / area0).abs();
        flow.max_area_drift = flow.max_area_drift.max(drift);
        flow.min_curvature = flow.min_curvature.min(min_of(&g.curvature_unchecked()));
        flow.times.push(dt * T::from_usize_lossy(step));
        flow.phi_dot.push(flow_rhs(&grid, &phi, gauge, rate));
        flow.phi.push(phi.clone());
    }
    let last = flow.times.len() - 1;
    flow.times[last] = flow_time;
    Ok(flow)
}

/// Flows with the centred gauge until `max |K − r0^{-2}| < tol`, in chunks
/// of `chunk` time units, up to `max_time`.
pub fn flow_to_round<T: Real>(
    g0: &AxisymmetricSurfaceMetric<T>,
    tol: T,
    max_time: T,
) -> Result<RawFlow<T>> {
    let r0 = g0.area_radius();
    let k0 = g0.gauss_curvature()?;
    let dev = k0.iter().fold(T::zero(), |m, k| m.max((*k - (r0 * r0).recip()).abs()));
    let rate = T::lit(4.0) / (r0 * r0);
    // linearized decay ~ e^{-rate t}, padded for the nonlinear transient
    let mut time = if dev > tol {
        ((dev / tol).ln() / rate * T::lit(1.25)).max(T::lit(0.5) / rate)
    } else {
        T::lit(0.25) / rate
    };
    loop {
        let limit = stable_step(g0.grid(), g0.phi());
        let steps = (time / limit).ceil().to_usize().unwrap_or(usize::MAX).max(1);
        let flow = normalized_ricci_flow_with(g0, time, steps, FlowGauge::Centered)?;
        let round = flow.final_roundness();
        let centred = {
            let last = &flow.phi[flow.phi.len() - 1];
            last.iter().fold(T::zero(), |m, p| m.max((*p - r0.ln()).abs()))
        };
        if round < tol && centred < tol * T::lit(10.0) {
            return Ok(flow);
        }
        if time >= max_time {
            return Err(Error::NotConverged(format!(
                "flow not round after time {time}: max |K - r0^-2| = {round:e}; increase the flow time"
            )));
        }
        time = (time * T::lit(1.5)).min(max_time);
    }
}

/// Summary of a raw flow used in diagnostics.
pub fn curvature_range<T: Real>(g: &AxisymmetricSurfaceMetric<T>) -> (T, T) {
    let k = g.curvature_unchecked();
    (min_of(&k), max_of(&k))
}
