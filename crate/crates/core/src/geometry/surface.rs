//! Axisymmetric conformal metrics `e^{2φ} g*` on the two-sphere and the
//! Bartnik boundary data built from them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{max_abs, Real};
use crate::spectral::{eval_series_with_derivative, LegendreGrid};

/// `g = e^{2φ(θ)} g*`, sampled at the Gauss–Legendre nodes in `x = cos θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisymmetricSurfaceMetric<T> {
    grid: Arc<LegendreGrid<T>>,
    phi: Vec<T>,
}

impl<T: Real> AxisymmetricSurfaceMetric<T> {
    pub fn new(grid: Arc<LegendreGrid<T>>, phi: Vec<T>) -> Result<Self> {
        if phi.len() != grid.len() {
            return Err(Error::InvalidMetric(format!(
                "{} conformal samples for {} nodes",
                phi.len(),
                grid.len()
            )));
        }
        if phi.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidMetric("non-finite conformal factor".into()));
        }
        Ok(AxisymmetricSurfaceMetric { grid, phi })
    }

    /// The round metric `r0² g*`.
    pub fn round(grid: Arc<LegendreGrid<T>>, r0: T) -> Result<Self> {
        if !(r0 > T::zero()) {
            return Err(Error::Domain(format!("area radius {r0} must be positive")));
        }
        let phi = vec![r0.ln(); grid.len()];
        Self::new(grid, phi)
    }

    /// `φ = ln r0 + Σ c_l P_l(cos θ)`.
    pub fn from_legendre(grid: Arc<LegendreGrid<T>>, r0: T, coefficients: &[T]) -> Result<Self> {
        if !(r0 > T::zero()) {
            return Err(Error::Domain(format!("scale r0 = {r0} must be positive")));
        }
        if coefficients.len() > grid.len() / 2 {
            return Err(Error::InvalidMetric(format!(
                "{} coefficients exceed the resolution of a {}-node grid",
                coefficients.len(),
                grid.len()
            )));
        }
        let phi = grid
            .nodes()
            .iter()
            .map(|x| r0.ln() + crate::spectral::eval_series(coefficients, *x))
            .collect();
        Self::new(grid, phi)
    }

    pub fn grid(&self) -> &Arc<LegendreGrid<T>> {
        &self.grid
    }

    pub fn phi(&self) -> &[T] {
        &self.phi
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// Polar angles of the samples.
    pub fn theta_grid(&self) -> &[T] {
        self.grid.theta()
    }

    /// Area density `e^{2φ}` at the nodes.
    pub fn density(&self) -> Vec<T> {
        self.phi.iter().map(|p| (*p + *p).exp()).collect()
    }

    /// `∫ f dA_g = 2π ∫ f e^{2φ} dx`.
    pub fn integrate(&self, f: &[T]) -> T {
        let weighted: Vec<T> = f.iter().zip(self.density()).map(|(a, d)| *a * d).collect();
        T::TAU() * self.grid.integrate(&weighted)
    }

    pub fn area(&self) -> T {
        let ones = vec![T::one(); self.len()];
        self.integrate(&ones)
    }

    /// `√(|Σ|/4π)`.
    pub fn area_radius(&self) -> T {
        (self.area() / (T::lit(4.0) * T::PI())).sqrt()
    }

    /// Legendre coefficients of `φ` after checking that they decay; a
    /// stagnant tail signals a conformal factor that is not smooth up to
    /// the poles.
    pub fn regular_coefficients(&self) -> Result<Vec<T>> {
        let c = self.grid.coefficients(&self.phi);
        let n = c.len();
        let head = max_abs(&c[1..]).max(T::one());
        let tail = max_abs(&c[n - n / 4..]);
        let tol = T::tol(1e-9) * head;
        if tail > tol {
            return Err(Error::InvalidMetric(format!(
                "conformal factor not resolved as a pole-regular function \
                 (Legendre tail {tail:e} > {tol:e})"
            )));
        }
        Ok(c)
    }

    /// `∂φ/∂θ` at the two poles (`θ = 0, π`), from the Legendre series.
    pub fn pole_slopes(&self) -> Result<(T, T)> {
        let c = self.regular_coefficients()?;
        // dφ/dθ = -sin θ · dφ/dx, and sin θ vanishes at both poles
        let (_, north) = eval_series_with_derivative(&c, T::one());
        let (_, south) = eval_series_with_derivative(&c, -T::one());
        let zero = T::zero();
        Ok((zero * north, zero * south))
    }

    /// Round-sphere Laplacian `Δ*φ`.
    pub fn round_laplacian_phi(&self) -> Vec<T> {
        self.grid.laplacian(&self.phi)
    }

    /// Laplace–Beltrami operator of `g` applied to nodal values.
    pub fn laplacian(&self, f: &[T]) -> Vec<T> {
        self.grid
            .laplacian(f)
            .iter()
            .zip(&self.phi)
            .map(|(l, p)| *l * (-(*p + *p)).exp())
            .collect()
    }

    /// Gauss curvature `K = e^{-2φ}(1 − Δ*φ)`.
    pub fn gauss_curvature(&self) -> Result<Vec<T>> {
        self.regular_coefficients()?;
        Ok(self.curvature_unchecked())
    }

    pub(crate) fn curvature_unchecked(&self) -> Vec<T> {
        self.round_laplacian_phi()
            .iter()
            .zip(&self.phi)
            .map(|(l, p)| (T::one() - *l) * (-(*p + *p)).exp())
            .collect()
    }

    /// `|∫K dA − 4π| / 4π`.
    pub fn gauss_bonnet_residual(&self) -> Result<T> {
        let k = self.gauss_curvature()?;
        let four_pi = T::lit(4.0) * T::PI();
        Ok((self.integrate(&k) - four_pi).abs() / four_pi)
    }

    /// Checks regularity, finite positive area and Gauss–Bonnet.
    pub fn validate(&self) -> Result<()> {
        let a = self.area();
        if !(a > T::zero() && a.is_finite()) {
            return Err(Error::InvalidMetric(format!("area {a} is not finite and positive")));
        }
        let gb = self.gauss_bonnet_residual()?;
        if gb > T::tol(1e-8) {
            return Err(Error::InvalidMetric(format!("Gauss-Bonnet residual {gb:e}")));
        }
        Ok(())
    }
}

/// Boundary data `(Σ, g, H0)` with constant mean curvature `H0 ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BartnikData<T> {
    metric: AxisymmetricSurfaceMetric<T>,
    mean_curvature: T,
    r0: T,
}

impl<T: Real> BartnikData<T> {
    pub fn new(metric: AxisymmetricSurfaceMetric<T>, mean_curvature: T) -> Result<Self> {
        if !(mean_curvature >= T::zero()) || !mean_curvature.is_finite() {
            return Err(Error::Domain(format!(
                "mean curvature H0 = {mean_curvature} must be finite and non-negative"
            )));
        }
        metric.validate()?;
        let r0 = metric.area_radius();
        Ok(BartnikData {
            metric,
            mean_curvature,
            r0,
        })
    }

    pub fn metric(&self) -> &AxisymmetricSurfaceMetric<T> {
        &self.metric
    }

    pub fn mean_curvature(&self) -> T {
        self.mean_curvature
    }

    /// Area radius `√(|Σ|/4π)`.
    pub fn r0(&self) -> T {
        self.r0
    }

    /// Hyperbolic Hawking mass of the boundary, `(r0/2)(1 − H0² r0²/4 + r0²)`.
    pub fn hawking_mass(&self) -> T {
        let r = self.r0;
        let h = self.mean_curvature;
        r / T::lit(2.0) * (T::one() - h * h * r * r / T::lit(4.0) + r * r)
    }
}

/// `√(|Σ|/16π)(1 − (1/16π)∫(H² − 4) dσ)`, given the area and `∫H² dσ`.
pub fn hyperbolic_hawking_mass<T: Real>(area: T, mean_curv_sq_integral: T) -> Result<T> {
    if !(area > T::zero()) {
        return Err(Error::Domain(format!("area {area} must be positive")));
    }
    let sixteen_pi = T::lit(16.0) * T::PI();
    let integral = mean_curv_sq_integral - T::lit(4.0) * area;
    Ok((area / sixteen_pi).sqrt() * (T::one() - integral / sixteen_pi))
}
