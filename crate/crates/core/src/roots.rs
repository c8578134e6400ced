//! Bracketed scalar root finding.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Brent's method on a sign-changing bracket `[a, b]`.
pub fn brent<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, xtol: T) -> Result<T> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Numerical(format!(
            "root not bracketed on [{a}, {b}] (f = {fa}, {fb})"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    let two = T::lit(2.0);
    for _ in 0..300 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + xtol / two;
        let xm = (c - b) / two;
        if xm.abs() <= tol1 || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = T::lit(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 {
            b + d
        } else {
            b + tol1 * xm.signum()
        };
        fb = f(b);
    }
    Err(Error::NotConverged("Brent iteration budget exhausted".into()))
}

/// Newton iteration safeguarded by bisection on a sign-changing bracket.
/// `fdf` returns the value and derivative.
pub fn newton_bracketed<T: Real, F: FnMut(T) -> (T, T)>(
    mut fdf: F,
    lo: T,
    hi: T,
    xtol: T,
) -> Result<T> {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, _) = fdf(lo);
    let (fhi, _) = fdf(hi);
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Numerical(format!(
            "root not bracketed on [{lo}, {hi}] (f = {flo}, {fhi})"
        )));
    }
    if flo > T::zero() {
        std::mem::swap(&mut lo, &mut hi);
    }
    // now f(lo) < 0 < f(hi), lo and hi in either order
    let mut x = (lo + hi) * T::lit(0.5);
    for _ in 0..200 {
        let (fx, dfx) = fdf(x);
        if fx == T::zero() {
            return Ok(x);
        }
        if fx < T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let inside = (newton - lo) * (newton - hi) < T::zero();
        let next = if dfx != T::zero() && newton.is_finite() && inside {
            newton
        } else {
            (lo + hi) * T::lit(0.5)
        };
        let step = (next - x).abs();
        x = next;
        if step <= xtol + T::lit(4.0) * T::epsilon() * x.abs() || (hi - lo).abs() <= xtol {
            return Ok(x);
        }
    }
    Err(Error::NotConverged("bracketed Newton iteration budget exhausted".into()))
}

/// Expands `[lo, hi]` geometrically to the right until `f` changes sign.
pub fn bracket_upward<T: Real, F: FnMut(T) -> T>(mut f: F, lo: T, mut hi: T) -> Result<T> {
    let flo = f(lo);
    for _ in 0..200 {
        let fhi = f(hi);
        if fhi.signum() != flo.signum() || fhi == T::zero() {
            return Ok(hi);
        }
        hi = lo + (hi - lo) * T::lit(2.0);
    }
    Err(Error::Numerical("could not bracket root".into()))
}
