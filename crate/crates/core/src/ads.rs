//! The static family `g_{m,b} = (1 + b r² − 2m/r)^{-1} dr² + r² g*` in
//! arclength form `ds² + u(s)² g*`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{uniform_grid, DerivativeSource, ProfileCurve};
use crate::ode::{integrate_to_stations, Tolerance};
use crate::roots::newton_bracketed;
use crate::scalar::Real;

/// Parameters `(m, b)` and the derived horizon radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdSSchwParams<T> {
    pub mass: T,
    pub cosmological: T,
    pub r_plus: T,
}

impl<T: Real> AdSSchwParams<T> {
    pub fn new(mass: T, cosmological: T) -> Result<Self> {
        if !(cosmological >= T::zero()) || !mass.is_finite() || !cosmological.is_finite() {
            return Err(Error::Domain(format!(
                "need finite m and b >= 0, got m = {mass}, b = {cosmological}"
            )));
        }
        Ok(AdSSchwParams {
            mass,
            cosmological,
            r_plus: horizon_radius(mass, cosmological)?,
        })
    }

    /// `1 + b r² − 2m/r`.
    pub fn lapse_sq(&self, r: T) -> T {
        T::one() + self.cosmological * r * r - (self.mass + self.mass) / r
    }

    /// `u' = √(1 + b u² − 2m/u)`, clamped at the horizon.
    pub fn slope(&self, r: T) -> T {
        self.lapse_sq(r).max(T::zero()).sqrt()
    }

    /// `u'' = b u + m/u²`.
    pub fn curvature_term(&self, r: T) -> T {
        self.cosmological * r + self.mass / (r * r)
    }
}

/// Largest root of `1 + b r² − 2m/r` for `m > 0`; zero otherwise.
pub fn horizon_radius<T: Real>(mass: T, cosmological: T) -> Result<T> {
    if !(cosmological >= T::zero()) {
        return Err(Error::Domain(format!("b = {cosmological} must be non-negative")));
    }
    if mass <= T::zero() {
        return Ok(T::zero());
    }
    // b r³ + r − 2m has one positive root, below min(2m, (2m/b)^{1/3})
    let two_m = mass + mass;
    let mut hi = two_m;
    if cosmological > T::zero() {
        hi = hi.min((two_m / cosmological).cbrt());
    }
    let cubic = |r: T| {
        (
            cosmological * r * r * r + r - two_m,
            T::lit(3.0) * cosmological * r * r + T::one(),
        )
    };
    let lo = T::zero();
    if cubic(hi).0 == T::zero() {
        return Ok(hi);
    }
    newton_bracketed(cubic, lo, hi, T::epsilon() * hi)
}

/// A member of the family anchored at `u(0) = r_o`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StaticProfile<T> {
    pub params: AdSSchwParams<T>,
    pub r_o: T,
}

impl<T: Real> StaticProfile<T> {
    pub fn new(params: AdSSchwParams<T>, r_o: T) -> Result<Self> {
        if !(r_o > T::zero()) {
            return Err(Error::Domain(format!("r_o = {r_o} must be positive")));
        }
        let tol = T::tol(1e-12) * params.r_plus.max(T::one());
        if r_o < params.r_plus - tol {
            return Err(Error::Domain(format!(
                "r_o = {r_o} lies inside the horizon: r_o < r_+ = {}",
                params.r_plus
            )));
        }
        Ok(StaticProfile {
            params,
            r_o: r_o.max(params.r_plus),
        })
    }

    /// `(u, u', u'')` at each (sorted, either side of 0) station, from the
    /// second-order form `u'' = b u + m/u²`, which starts cleanly at the
    /// horizon where `u' = 0`.
    pub fn evaluate(&self, stations: &[T]) -> Result<Vec<(T, T, T)>> {
        let p = self.params;
        let rhs = |_s: T, y: &[T; 2]| [y[1], p.curvature_term(y[0])];
        let y0 = [self.r_o, p.slope(self.r_o)];
        let tol = Tolerance::uniform(1e-12);
        let mut out = vec![(T::zero(), T::zero(), T::zero()); stations.len()];
        let mut fwd: Vec<(usize, T)> = Vec::new();
        let mut back: Vec<(usize, T)> = Vec::new();
        for (i, s) in stations.iter().enumerate() {
            if *s >= T::zero() {
                fwd.push((i, *s));
            } else {
                back.push((i, *s));
            }
        }
        fwd.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        back.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        for group in [fwd, back] {
            if group.is_empty() {
                continue;
            }
            let st: Vec<T> = group.iter().map(|g| g.1).collect();
            let ys = integrate_to_stations(rhs, T::zero(), y0, &st, tol)?;
            for ((idx, _), y) in group.iter().zip(ys) {
                let u = y[0];
                if !(u > T::zero()) {
                    return Err(Error::Numerical(format!("profile left r > 0 (u = {u})")));
                }
                // slope from the first integral, signed by the integrated state
                let mag = p.slope(u);
                let up = if y[1] < T::zero() { -mag } else { mag };
                out[*idx] = (u, up, p.curvature_term(u));
            }
        }
        Ok(out)
    }

    /// Uniform samples of `u` on `[start, end]`.
    pub fn curve(&self, start: T, end: T, n: usize) -> Result<ProfileCurve<T>> {
        let s = uniform_grid(start, end, n)?;
        let vals = self.evaluate(&s)?;
        let source = DerivativeSource::Static {
            mass: self.params.mass,
            cosmological: self.params.cosmological,
        };
        ProfileCurve::with_source(
            s,
            vals.iter().map(|v| v.0).collect(),
            vals.iter().map(|v| v.1).collect(),
            vals.iter().map(|v| v.2).collect(),
            2,
            source,
        )
    }
}

/// Solves the profile on `[0, s_max]` with `u(0) = r_o`.
pub fn profile_solve<T: Real>(
    params: AdSSchwParams<T>,
    r_o: T,
    s_max: T,
    n_samples: usize,
) -> Result<ProfileCurve<T>> {
    StaticProfile::new(params, r_o)?.curve(T::zero(), s_max, n_samples)
}

/// `max |1 + 3 b u² − u'² − 2 u u''|` over the samples.
pub fn verify_static_identity<T: Real>(p: &ProfileCurve<T>, cosmological: T) -> T {
    let three = T::lit(3.0);
    p.f()
        .iter()
        .zip(p.f_prime())
        .zip(p.f_double_prime())
        .map(|((u, up), upp)| {
            (T::one() + three * cosmological * *u * *u - *up * *up - (*u + *u) * *upp).abs()
        })
        .fold(T::zero(), T::max)
}
