//! First eigenpair of `−Δ_g + K(g)` and its continuation along a path.
//!
//! Multiplying by `e^{2φ}` turns the problem into
//! `−Δ* u + (1 − Δ*φ) u = λ e^{2φ} u`, which is discretized by a Galerkin
//! method in orthonormal Legendre polynomials: the round Laplacian is
//! diagonal there and the potential and mass matrices come from
//! Gauss–Legendre quadrature.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fd;
use crate::geometry::AxisymmetricSurfaceMetric;
use crate::linalg::generalized_eigen;
use crate::scalar::{min_of, Real};
use crate::spectral::legendre_values;

use super::MetricPath;

/// Smallest two axisymmetric eigenvalues with the normalized, positive
/// first eigenfunction.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<T> {
    pub lambda: T,
    pub lambda2: T,
    /// Nodal values of `u`, `∫ u² dA_g = 1`, `u > 0`.
    pub u: Vec<T>,
    /// Coefficients of `u` in the orthonormal basis `√((2l+1)/2) P_l`.
    pub coefficients: Vec<T>,
}

impl<T: Real> EigenPair<T> {
    /// `u` at an arbitrary `x = cos θ`.
    pub fn evaluate(&self, x: T) -> T {
        let p = legendre_values(x, self.coefficients.len() - 1);
        self.coefficients
            .iter()
            .zip(p)
            .enumerate()
            .map(|(l, (c, pl))| *c * pl * orthonormal_scale::<T>(l))
            .sum()
    }
}

fn orthonormal_scale<T: Real>(l: usize) -> T {
    (T::from_usize_lossy(2 * l + 1) / T::lit(2.0)).sqrt()
}

/// Galerkin basis size used for a grid with `n` nodes.
fn basis_size(n: usize) -> usize {
    (n * 2 / 3).clamp(4, 28)
}

/// First eigenpair of `−Δ_g + K(g)` on an axisymmetric metric.
pub fn first_eigenpair<T: Real>(g: &AxisymmetricSurfaceMetric<T>) -> Result<EigenPair<T>> {
    g.regular_coefficients()?;
    let grid = g.grid();
    let n = grid.len();
    let l_max = basis_size(n);
    let x = grid.nodes();
    let w = grid.weights();
    let potential: Vec<T> = grid
        .laplacian(g.phi())
        .iter()
        .map(|l| T::one() - *l)
        .collect();
    let density = g.density();
    // basis[j][l]
    let basis: Vec<Vec<T>> = x
        .iter()
        .map(|xj| {
            legendre_values(*xj, l_max - 1)
                .into_iter()
                .enumerate()
                .map(|(l, p)| p * orthonormal_scale::<T>(l))
                .collect()
        })
        .collect();
    let mut stiff = vec![T::zero(); l_max * l_max];
    let mut mass = vec![T::zero(); l_max * l_max];
    for a in 0..l_max {
        for b in a..l_max {
            let mut s = T::zero();
            let mut m = T::zero();
            for j in 0..n {
                let pp = basis[j][a] * basis[j][b] * w[j];
                s = s + potential[j] * pp;
                m = m + density[j] * pp;
            }
            if a == b {
                s = s + T::from_usize_lossy(a * (a + 1));
            }
            stiff[a * l_max + b] = s;
            stiff[b * l_max + a] = s;
            mass[a * l_max + b] = m;
            mass[b * l_max + a] = m;
        }
    }
    let (vals, vecs) = generalized_eigen(&stiff, &mass, l_max)?;
    let mut coeffs: Vec<T> = (0..l_max).map(|l| vecs[l * l_max]).collect();
    // B-orthonormal: cᵀ M c = 1 corresponds to ∫u² e^{2φ} dx = 1
    let scale = T::TAU().sqrt().recip();
    let sign = if coeffs[0] < T::zero() { -T::one() } else { T::one() };
    for c in &mut coeffs {
        *c = *c * sign * scale;
    }
    let u: Vec<T> = basis
        .iter()
        .map(|row| row.iter().zip(&coeffs).map(|(p, c)| *p * *c).sum())
        .collect();
    if u.iter().any(|v| !(*v > T::zero())) {
        return Err(Error::Numerical(
            "first eigenfunction is not positive on the grid".into(),
        ));
    }
    Ok(EigenPair {
        lambda: vals[0],
        lambda2: vals[1],
        u,
        coefficients: coeffs,
    })
}

/// Eigen-data along a path, transported to the fixed labels.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPath<T> {
    pub lambda: Vec<T>,
    pub lambda2: Vec<T>,
    /// `u(t_i, x_j)` at the labels.
    pub u: Vec<Vec<T>>,
    /// `∂_t u / u` at the labels (fourth-order differences in `t`).
    pub dtu_over_u: Vec<Vec<T>>,
    pub dtu_over_u_sup: T,
    /// Smallest `λ₂ − λ₁` along the path.
    pub min_gap: T,
    pub warnings: Vec<String>,
}

impl<T: Real> EigenPath<T> {
    /// `inf u²(λ + 3)` over the path.
    pub fn infimum_u2_lambda3(&self) -> T {
        self.u
            .iter()
            .zip(&self.lambda)
            .map(|(row, l)| min_of(row).powi(2) * (*l + T::lit(3.0)))
            .fold(T::infinity(), T::min)
    }
}

/// Solves the eigenproblem at every path sample and estimates
/// `sup |∂_t u / u|`.
pub fn eigenpath<T: Real>(path: &MetricPath<T>) -> Result<EigenPath<T>> {
    let pairs = path
        .metrics()
        .par_iter()
        .map(first_eigenpair)
        .collect::<Result<Vec<_>>>()?;
    let n_t = path.len();
    let mut u = Vec::with_capacity(n_t);
    for (i, pair) in pairs.iter().enumerate() {
        let same = path.metric(i).phi() == path.metric(0).phi();
        let row: Vec<T> = if same {
            pair.u.clone()
        } else {
            path.slice(i).position.iter().map(|x| pair.evaluate(*x)).collect()
        };
        u.push(row);
    }
    let lambda: Vec<T> = pairs.iter().map(|p| p.lambda).collect();
    let lambda2: Vec<T> = pairs.iter().map(|p| p.lambda2).collect();
    let mut warnings = Vec::new();
    let min_gap = lambda2
        .iter()
        .zip(&lambda)
        .map(|(a, b)| *a - *b)
        .fold(T::infinity(), T::min);
    if min_gap < T::lit(1e-6) {
        warnings.push(format!(
            "eigenvalue gap {min_gap:e} below 1e-6; continuation unreliable"
        ));
    }
    if let Some(l) = lambda.iter().find(|l| !(**l + T::lit(3.0) > T::zero())) {
        return Err(Error::hypothesis(
            "lambda + 3 > 0",
            format!("first eigenvalue {l} along the path"),
        ));
    }
    let h = path.dt();
    let n = path.grid().len();
    let mut dtu = vec![vec![T::zero(); n]; n_t];
    let mut sup = T::zero();
    for j in 0..n {
        let series: Vec<T> = u.iter().map(|row| row[j]).collect();
        for i in 0..n_t {
            let d = if n_t >= 5 { fd::first_at(&series, h, i) } else { T::zero() };
            let r = d / series[i];
            dtu[i][j] = r;
            sup = sup.max(r.abs());
        }
    }
    Ok(EigenPath {
        lambda,
        lambda2,
        u,
        dtu_over_u: dtu,
        dtu_over_u_sup: sup,
        min_gap,
        warnings,
    })
}
