//! Collar metrics `v(t, ·)² dt² + E(t)² g(t)` on `[0, 1] × S²`.

use rayon::prelude::*;

use crate::ads::StaticProfile;
use crate::error::{Error, Result};
use crate::fd;
use crate::path::MetricPath;
use crate::scalar::{max_of, min_of, Real};

use super::surface::hyperbolic_hawking_mass;

/// The warping factor `E(t)` of a collar, with exact derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warp<T> {
    /// `E = (1 + ε t²)^{1/2}`; `ε = 0` gives `E ≡ 1`.
    Bulge { epsilon: T },
    /// `E = u(speed · t)/u(0)` for a static profile `u`.
    Static { profile: StaticProfile<T>, speed: T },
}

impl<T: Real> Warp<T> {
    /// `(E, E', E'')` at each `t`.
    pub fn evaluate(&self, t: &[T]) -> Result<Vec<(T, T, T)>> {
        match *self {
            Warp::Bulge { epsilon } => Ok(t
                .iter()
                .map(|t| {
                    let q = T::one() + epsilon * *t * *t;
                    let e = q.sqrt();
                    (e, epsilon * *t / e, epsilon / (q * e))
                })
                .collect()),
            Warp::Static { profile, speed } => {
                let s: Vec<T> = t.iter().map(|t| *t * speed).collect();
                let r = profile.r_o;
                Ok(profile
                    .evaluate(&s)?
                    .into_iter()
                    .map(|(u, up, upp)| (u / r, up * speed / r, upp * speed * speed / r))
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollarMetric<T> {
    path: MetricPath<T>,
    lapse: Vec<Vec<T>>,
    warp: Warp<T>,
    e: Vec<T>,
    de: Vec<T>,
    dde: Vec<T>,
}

impl<T: Real> CollarMetric<T> {
    /// `lapse[i][j] = v(t_i, x_j)` at the path's labels.
    pub fn new(path: MetricPath<T>, lapse: Vec<Vec<T>>, warp: Warp<T>) -> Result<Self> {
        if lapse.len() != path.len() || lapse.iter().any(|r| r.len() != path.grid().len()) {
            return Err(Error::InvalidMetric("lapse samples do not match the path grid".into()));
        }
        if lapse.iter().flatten().any(|v| !(*v > T::zero())) {
            return Err(Error::InvalidMetric("lapse must be positive".into()));
        }
        let vals = warp.evaluate(path.t_grid())?;
        let e: Vec<T> = vals.iter().map(|v| v.0).collect();
        if e[0] != T::one() || e.iter().any(|x| !(*x > T::zero())) {
            return Err(Error::InvalidMetric("warp must be positive with E(0) = 1".into()));
        }
        Ok(CollarMetric {
            de: vals.iter().map(|v| v.1).collect(),
            dde: vals.iter().map(|v| v.2).collect(),
            e,
            path,
            lapse,
            warp,
        })
    }

    /// Lapse that is constant in space, `v(t, ·) = lapse(t)`.
    pub fn with_uniform_lapse(path: MetricPath<T>, lapse: &[T], warp: Warp<T>) -> Result<Self> {
        let n = path.grid().len();
        let rows = lapse.iter().map(|v| vec![*v; n]).collect();
        Self::new(path, rows, warp)
    }

    pub fn path(&self) -> &MetricPath<T> {
        &self.path
    }

    pub fn t_grid(&self) -> &[T] {
        self.path.t_grid()
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn lapse(&self) -> &[Vec<T>] {
        &self.lapse
    }

    pub fn warp(&self) -> Warp<T> {
        self.warp
    }

    /// `(E, E', E'')` at sample `i`.
    pub fn warp_at(&self, i: usize) -> (T, T, T) {
        (self.e[i], self.de[i], self.dde[i])
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            Err(Error::IndexOutOfRange { index: i, len: self.len() })
        } else {
            Ok(())
        }
    }

    /// True when `v(t_i, ·)` is constant to relative rounding.
    pub fn lapse_is_uniform(&self, i: usize) -> bool {
        let row = &self.lapse[i];
        let (lo, hi) = (min_of(row), max_of(row));
        hi - lo <= T::lit(64.0) * T::epsilon() * hi
    }

    /// `∂_t v` at sample `i` (fourth-order differences in `t`).
    pub fn lapse_rate(&self, i: usize) -> Vec<T> {
        let h = self.path.dt();
        let n = self.path.grid().len();
        (0..n)
            .map(|j| {
                let series: Vec<T> = self.lapse.iter().map(|r| r[j]).collect();
                fd::first_at(&series, h, i)
            })
            .collect()
    }
}

/// `H = 2E'/(vE)` on the level `Σ_{t_i}`.
pub fn mean_curvature_level<T: Real>(c: &CollarMetric<T>, i: usize) -> Result<Vec<T>> {
    c.check_index(i)?;
    let (e, de, _) = c.warp_at(i);
    Ok(c.lapse[i].iter().map(|v| (de + de) / (*v * e)).collect())
}

/// Hyperbolic Hawking mass of `Σ_{t_i}`: closed form when the lapse is
/// constant on the level, otherwise area and `∫H²` by quadrature.
pub fn hawking_mass_level<T: Real>(c: &CollarMetric<T>, i: usize) -> Result<T> {
    c.check_index(i)?;
    if c.lapse_is_uniform(i) {
        return hawking_mass_level_closed(c, i);
    }
    let (e, _, _) = c.warp_at(i);
    let h = mean_curvature_level(c, i)?;
    let h2: Vec<T> = h.iter().map(|x| *x * *x).collect();
    let scale = e * e;
    let area = scale * c.path.integrate_labels(&vec![T::one(); h.len()]);
    hyperbolic_hawking_mass(area, scale * c.path.integrate_labels(&h2))
}

/// `(E r0/2)(1 − r0² E'²/v² + r0² E²)`, valid when `v` is constant on the level.
pub fn hawking_mass_level_closed<T: Real>(c: &CollarMetric<T>, i: usize) -> Result<T> {
    c.check_index(i)?;
    if !c.lapse_is_uniform(i) {
        return Err(Error::InvalidMetric(format!(
            "closed-form level mass needs a lapse constant on level {i}"
        )));
    }
    let r0 = c.path.r0();
    let (e, de, _) = c.warp_at(i);
    let v = c.lapse[i][0];
    Ok(e * r0 / T::lit(2.0) * (T::one() - r0 * r0 * de * de / (v * v) + r0 * r0 * e * e))
}

/// Scalar curvature on one level, all labels.
fn level_curvature<T: Real>(c: &CollarMetric<T>, i: usize) -> Result<Vec<T>> {
    let v = &c.lapse[i];
    let (e, de, dde) = c.warp_at(i);
    let lap = c.path.label_laplacian(i, v);
    let k = &c.path.slice(i).curvature;
    let g2 = c.path.gprime_sq(i)?;
    let vt = c.lapse_rate(i);
    let e2 = e * e;
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    Ok((0..v.len())
        .map(|j| {
            let vj = v[j];
            let spatial = two / vj * ((-lap[j] + k[j] * vj) / e2);
            let normal = (-two * de * de - four * e * dde) / e2 - g2[j] / four
                + four * (vt[j] / vj) * (de / e);
            spatial + normal / (vj * vj)
        })
        .collect())
}

/// `R(γ)` at `(t_i, x_j)`.
pub fn collar_scalar_curvature<T: Real>(c: &CollarMetric<T>, i: usize, j: usize) -> Result<T> {
    c.check_index(i)?;
    let n = c.path.grid().len();
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, len: n });
    }
    Ok(level_curvature(c, i)?[j])
}

/// Scalar curvature at every collar sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CollarCurvature<T> {
    /// `values[i][j] = R(t_i, x_j)`.
    pub values: Vec<Vec<T>>,
    /// Levels where the `t`-derivatives used a one-sided stencil.
    pub one_sided_levels: Vec<usize>,
    pub min_r_plus_6: T,
}

pub fn collar_curvature_sweep<T: Real>(c: &CollarMetric<T>) -> Result<CollarCurvature<T>> {
    let values = (0..c.len())
        .into_par_iter()
        .map(|i| level_curvature(c, i))
        .collect::<Result<Vec<_>>>()?;
    let min_r_plus_6 = values
        .iter()
        .map(|r| min_of(r))
        .fold(T::infinity(), T::min)
        + T::lit(6.0);
    let one_sided_levels = (0..c.len()).filter(|i| fd::is_one_sided(c.len(), *i)).collect();
    Ok(CollarCurvature {
        values,
        one_sided_levels,
        min_r_plus_6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ads::AdSSchwParams;
    use crate::geometry::AxisymmetricSurfaceMetric;
    use crate::spectral::LegendreGrid;
    use std::sync::Arc;

    #[test]
    fn hyperbolic_space_as_collar() {
        let grid = Arc::new(LegendreGrid::<f64>::new(16));
        let r = 1f64.sinh();
        let g = AxisymmetricSurfaceMetric::round(grid, r).unwrap();
        let path = MetricPath::constant(&g, 21, 0.5).unwrap();
        let prof = StaticProfile::new(AdSSchwParams::new(0.0, 1.0).unwrap(), r).unwrap();
        let c = CollarMetric::with_uniform_lapse(path, &[1.0; 21], Warp::Static { profile: prof, speed: 1.0 }).unwrap();
        let sweep = collar_curvature_sweep(&c).unwrap();
        for row in &sweep.values {
            for v in row {
                assert!((v + 6.0).abs() < 1e-7, "{v}");
            }
        }
        for i in 0..21 {
            let h = mean_curvature_level(&c, i).unwrap();
            assert!(h.iter().all(|x| *x > 0.0 || i == 0));
        }
    }

    #[test]
    fn flat_warp_has_zero_mean_curvature() {
        let grid = Arc::new(LegendreGrid::<f64>::new(12));
        let g = AxisymmetricSurfaceMetric::round(grid, 0.7).unwrap();
        let path = MetricPath::constant(&g, 9, 0.5).unwrap();
        let c = CollarMetric::with_uniform_lapse(path, &[1.0; 9], Warp::Bulge { epsilon: 0.0 }).unwrap();
        for i in 0..9 {
            assert!(mean_curvature_level(&c, i).unwrap().iter().all(|h| *h == 0.0));
            let m = hawking_mass_level(&c, i).unwrap();
            assert!((m - 0.35 * (1.0 + 0.49)).abs() < 1e-14);
        }
    }

    #[test]
    fn static_collar_mass_is_constant() {
        let grid = Arc::new(LegendreGrid::<f64>::new(12));
        let r0 = 1.3;
        let g = AxisymmetricSurfaceMetric::round(grid, r0).unwrap();
        let path = MetricPath::constant(&g, 11, 0.5).unwrap();
        let (a, m) = (0.8, 0.4);
        let prof = StaticProfile::new(AdSSchwParams::new(m, 1.0).unwrap(), r0).unwrap();
        let c = CollarMetric::with_uniform_lapse(path, &[a; 11], Warp::Static { profile: prof, speed: a }).unwrap();
        for i in 0..11 {
            assert!((hawking_mass_level(&c, i).unwrap() - m).abs() < 1e-10);
        }
        let sweep = collar_curvature_sweep(&c).unwrap();
        assert!((sweep.min_r_plus_6).abs() < 1e-6);
    }
}
