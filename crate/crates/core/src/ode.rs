//! Adaptive Dormand–Prince 5(4) integrator for small autonomous-in-form
//! systems `y' = F(s, y)` with fixed dimension.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy)]
pub struct Tolerance<T> {
    pub rel: T,
    pub abs: T,
}

impl<T: Real> Tolerance<T> {
    pub fn uniform(tol: f64) -> Self {
        Tolerance {
            rel: T::tol(tol),
            abs: T::tol(tol),
        }
    }
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<T: Real, const D: usize>(y: &[T; D], h: T, terms: &[(f64, &[T; D])]) -> [T; D] {
    let mut out = *y;
    for (c, k) in terms {
        let ch = T::lit(*c) * h;
        for i in 0..D {
            out[i] = out[i] + ch * k[i];
        }
    }
    out
}

/// Integrates from `s_start` through every point of `stations` (monotone in
/// the direction of integration), returning the state at each station.
pub fn integrate_to_stations<T, const D: usize, F>(
    rhs: F,
    s_start: T,
    y0: [T; D],
    stations: &[T],
    tol: Tolerance<T>,
) -> Result<Vec<[T; D]>>
where
    T: Real,
    F: Fn(T, &[T; D]) -> [T; D],
{
    let mut out = Vec::with_capacity(stations.len());
    let mut s = s_start;
    let mut y = y0;
    let span = stations
        .last()
        .map(|e| (*e - s_start).abs())
        .unwrap_or(T::zero());
    let mut h = (span * T::lit(1e-3)).max(T::lit(1e-6));
    for &target in stations {
        let dir = if target >= s { T::one() } else { -T::one() };
        let mut steps = 0usize;
        while (target - s).abs() > T::epsilon() * (T::one() + target.abs()) {
            steps += 1;
            if steps > 1_000_000 {
                return Err(Error::NotConverged("ODE step budget exhausted".into()));
            }
            let remaining = (target - s).abs();
            let hs = h.min(remaining);
            let (y_new, err) = dopri_step(&rhs, s, &y, hs * dir);
            let mut norm = T::zero();
            for i in 0..D {
                let sc = tol.abs + tol.rel * y[i].abs().max(y_new[i].abs());
                let r = err[i] / sc;
                norm = norm + r * r;
            }
            norm = (norm / T::from_usize_lossy(D)).sqrt();
            if !norm.is_finite() {
                h = hs * T::lit(0.25);
                if h < T::epsilon() * (T::one() + s.abs()) {
                    return Err(Error::Numerical("ODE state became non-finite".into()));
                }
                continue;
            }
            let factor = if norm == T::zero() {
                T::lit(5.0)
            } else {
                (T::lit(0.9) * norm.powf(T::lit(-0.2))).max(T::lit(0.2)).min(T::lit(5.0))
            };
            if norm <= T::one() {
                s = if hs == remaining { target } else { s + hs * dir };
                y = y_new;
                // a step clipped at a station does not shrink the next one
                h = if hs < h { h.max(hs * factor) } else { hs * factor };
            } else {
                h = hs * factor;
            }
            if h < T::epsilon() * T::lit(16.0) * (T::one() + s.abs()) {
                return Err(Error::NotConverged(format!("ODE step underflow near s = {s}")));
            }
        }
        out.push(y);
    }
    Ok(out)
}

fn dopri_step<T, const D: usize, F>(rhs: &F, s: T, y: &[T; D], h: T) -> ([T; D], [T; D])
where
    T: Real,
    F: Fn(T, &[T; D]) -> [T; D],
{
    let c = |x: f64| s + T::lit(x) * h;
    let k1 = rhs(s, y);
    let k2 = rhs(c(0.2), &axpy(y, h, &[(A21, &k1)]));
    let k3 = rhs(c(0.3), &axpy(y, h, &[(A31, &k1), (A32, &k2)]));
    let k4 = rhs(c(0.8), &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
    let k5 = rhs(
        c(8.0 / 9.0),
        &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    );
    let k6 = rhs(
        s + h,
        &axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    );
    let y5 = axpy(y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = rhs(s + h, &y5);
    let zero = [T::zero(); D];
    let err = axpy(
        &zero,
        h,
        &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)],
    );
    (y5, err)
}
