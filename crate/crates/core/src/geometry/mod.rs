//! Curvature, mean curvature and hyperbolic Hawking mass on profiles,
//! surface metrics and collars.

pub mod collar;
pub mod profile;
pub mod surface;

pub use collar::{
    collar_curvature_sweep, collar_scalar_curvature, hawking_mass_level, hawking_mass_level_closed,
    mean_curvature_level, CollarCurvature, CollarMetric, Warp,
};
pub use profile::{
    omega_functional, omega_margin, scalar_curvature_warped, uniform_grid,
    warped_scalar_curvature, DerivativeCheck, DerivativeSource, ProfileCurve,
};
pub use surface::{hyperbolic_hawking_mass, AxisymmetricSurfaceMetric, BartnikData};

use crate::error::Result;
use crate::scalar::Real;

/// Hyperbolic Hawking mass of a centred sphere of `ds² + f² g*` (two-sphere
/// cross-section): `(f/2)(1 + f² − f'²)`.
pub fn profile_level_mass<T: Real>(f: T, fp: T) -> T {
    f / T::lit(2.0) * (T::one() + f * f - fp * fp)
}

/// Mean curvature `2f'/f` of a centred sphere.
pub fn profile_level_mean_curvature<T: Real>(f: T, fp: T) -> T {
    (fp + fp) / f
}

/// Hawking mass of every level of a profile via the area/`∫H²` form.
pub fn profile_level_masses<T: Real>(p: &ProfileCurve<T>) -> Result<Vec<T>> {
    let four_pi = T::lit(4.0) * T::PI();
    (0..p.len())
        .map(|i| {
            let (f, fp, _) = p.sample(i)?;
            let area = four_pi * f * f;
            let h = profile_level_mean_curvature(f, fp);
            hyperbolic_hawking_mass(area, h * h * area)
        })
        .collect()
}
