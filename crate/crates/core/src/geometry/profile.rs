//! Warped-product profiles `ds² + f(s)² g*` and their curvature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd;
use crate::scalar::Real;

/// Where the derivative samples of a profile come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DerivativeSource<T> {
    /// Exact derivatives supplied by the caller.
    Analytic,
    /// A member of the static family `u' = √(1 + b u² − 2m/u)`, `u'' = b u + m/u²`.
    Static { mass: T, cosmological: T },
    /// Fourth-order finite differences of the `f` samples.
    FiniteDifference,
}

/// Positive warping function sampled on a uniform arclength grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve<T> {
    s: Vec<T>,
    f: Vec<T>,
    f_prime: Vec<T>,
    f_double_prime: Vec<T>,
    dim: usize,
    source: DerivativeSource<T>,
}

impl<T: Real> ProfileCurve<T> {
    /// Builds a profile from value and derivative samples; `dim` is the
    /// dimension of the sphere cross-section.
    pub fn new(
        s: Vec<T>,
        f: Vec<T>,
        f_prime: Vec<T>,
        f_double_prime: Vec<T>,
        dim: usize,
    ) -> Result<Self> {
        Self::with_source(s, f, f_prime, f_double_prime, dim, DerivativeSource::Analytic)
    }

    pub fn with_source(
        s: Vec<T>,
        f: Vec<T>,
        f_prime: Vec<T>,
        f_double_prime: Vec<T>,
        dim: usize,
        source: DerivativeSource<T>,
    ) -> Result<Self> {
        if s.len() < 2 {
            return Err(Error::TooFewSamples { need: 2, got: s.len() });
        }
        if f.len() != s.len() || f_prime.len() != s.len() || f_double_prime.len() != s.len() {
            return Err(Error::InvalidProfile("sample arrays differ in length".into()));
        }
        if dim < 2 {
            return Err(Error::InvalidProfile(format!("sphere dimension {dim} < 2")));
        }
        check_uniform(&s)?;
        if let Some((i, v)) = f.iter().enumerate().find(|(_, v)| !(**v > T::zero())) {
            return Err(Error::InvalidProfile(format!("f({}) = {v} is not positive", s[i])));
        }
        Ok(ProfileCurve {
            s,
            f,
            f_prime,
            f_double_prime,
            dim,
            source,
        })
    }

    /// Samples `(f, f', f'')` from a closure on `n` uniform points of `[start, end]`.
    pub fn from_fn<F>(start: T, end: T, n: usize, dim: usize, mut eval: F) -> Result<Self>
    where
        F: FnMut(T) -> (T, T, T),
    {
        let s = uniform_grid(start, end, n)?;
        let mut f = Vec::with_capacity(n);
        let mut fp = Vec::with_capacity(n);
        let mut fpp = Vec::with_capacity(n);
        for &si in &s {
            let (a, b, c) = eval(si);
            f.push(a);
            fp.push(b);
            fpp.push(c);
        }
        Self::new(s, f, fp, fpp, dim)
    }

    /// Derivatives from finite differences of the samples.
    pub fn from_samples(s: Vec<T>, f: Vec<T>, dim: usize) -> Result<Self> {
        if s.len() < 6 {
            return Err(Error::TooFewSamples { need: 6, got: s.len() });
        }
        check_uniform(&s)?;
        let h = s[1] - s[0];
        let fp = fd::first(&f, h)?;
        let fpp = fd::second(&f, h)?;
        Self::with_source(s, f, fp, fpp, dim, DerivativeSource::FiniteDifference)
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn s(&self) -> &[T] {
        &self.s
    }

    pub fn f(&self) -> &[T] {
        &self.f
    }

    pub fn f_prime(&self) -> &[T] {
        &self.f_prime
    }

    pub fn f_double_prime(&self) -> &[T] {
        &self.f_double_prime
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source(&self) -> DerivativeSource<T> {
        self.source
    }

    pub fn start(&self) -> T {
        self.s[0]
    }

    pub fn end(&self) -> T {
        self.s[self.s.len() - 1]
    }

    pub fn spacing(&self) -> T {
        (self.end() - self.start()) / T::from_usize_lossy(self.len() - 1)
    }

    /// `(f, f', f'')` at sample `i`.
    pub fn sample(&self, i: usize) -> Result<(T, T, T)> {
        self.check_index(i)?;
        Ok((self.f[i], self.f_prime[i], self.f_double_prime[i]))
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.s.len() {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.s.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Samples `lo..=hi` as a new profile.
    pub fn restrict(&self, lo: usize, hi: usize) -> Result<Self> {
        self.check_index(hi)?;
        if lo + 1 > hi {
            return Err(Error::TooFewSamples {
                need: 2,
                got: hi + 1 - lo.min(hi + 1),
            });
        }
        Ok(ProfileCurve {
            s: self.s[lo..=hi].to_vec(),
            f: self.f[lo..=hi].to_vec(),
            f_prime: self.f_prime[lo..=hi].to_vec(),
            f_double_prime: self.f_double_prime[lo..=hi].to_vec(),
            dim: self.dim,
            source: self.source,
        })
    }

    /// Moves the arclength origin: `s ↦ s + shift` (samples of `f` unchanged).
    pub fn translated(&self, shift: T) -> Self {
        let mut out = self.clone();
        for s in &mut out.s {
            *s = *s + shift;
        }
        out
    }

    /// Index of the sample closest to `s`.
    pub fn nearest_index(&self, s: T) -> usize {
        let h = self.spacing();
        let k = ((s - self.start()) / h).round();
        let k = k.max(T::zero()).min(T::from_usize_lossy(self.len() - 1));
        k.to_usize().unwrap_or(0)
    }

    /// Quintic Hermite interpolation of `(f, f', f'')` at an arbitrary `s`
    /// inside the grid.
    pub fn interpolate(&self, s: T) -> Result<(T, T, T)> {
        let n = self.len();
        let h = self.spacing();
        if s < self.start() - h * T::lit(1e-9) || s > self.end() + h * T::lit(1e-9) {
            return Err(Error::Domain(format!(
                "s = {s} outside [{}, {}]",
                self.start(),
                self.end()
            )));
        }
        let pos = ((s - self.start()) / h).max(T::zero());
        let k = pos.floor().to_usize().unwrap_or(0).min(n - 2);
        let x = ((s - self.s[k]) / h).max(T::zero()).min(T::one());
        Ok(quintic_hermite(
            [self.f[k], self.f_prime[k] * h, self.f_double_prime[k] * h * h],
            [
                self.f[k + 1],
                self.f_prime[k + 1] * h,
                self.f_double_prime[k + 1] * h * h,
            ],
            x,
            h,
        ))
    }

    /// Compares the stored derivatives against second-order centred
    /// differences. Returns `Ok` when the residual behaves like `C h²`, with
    /// `C` estimated from the stride-two subgrid.
    pub fn check_derivatives(&self) -> Result<DerivativeCheck<T>> {
        let n = self.len();
        if n < 9 {
            return Err(Error::TooFewSamples { need: 9, got: n });
        }
        let h = self.spacing();
        let res = |stride: usize| -> (T, T) {
            let hs = h * T::from_usize_lossy(stride);
            let mut r1 = T::zero();
            let mut r2 = T::zero();
            let mut i = stride;
            while i + stride < n {
                let d1 = (self.f[i + stride] - self.f[i - stride]) / (hs + hs);
                let d2 = (self.f[i + stride] - self.f[i] - self.f[i] + self.f[i - stride]) / (hs * hs);
                r1 = r1.max((d1 - self.f_prime[i]).abs());
                r2 = r2.max((d2 - self.f_double_prime[i]).abs());
                i += stride;
            }
            (r1, r2)
        };
        let (r1, r2) = res(1);
        let (c1, c2) = res(2);
        let scale = crate::scalar::max_abs(&self.f).max(T::one());
        let round1 = T::lit(16.0) * T::epsilon() * scale / h;
        let round2 = T::lit(16.0) * T::epsilon() * scale / (h * h);
        let check = DerivativeCheck {
            first_residual: r1,
            second_residual: r2,
            first_constant: c1 / (T::lit(4.0) * h * h),
            second_constant: c2 / (T::lit(4.0) * h * h),
            spacing: h,
        };
        let ok1 = r1 <= T::lit(1.5) * check.first_constant * h * h + round1;
        let ok2 = r2 <= T::lit(1.5) * check.second_constant * h * h + round2;
        if ok1 && ok2 {
            Ok(check)
        } else {
            Err(Error::InvalidProfile(format!(
                "derivative samples inconsistent with f: residuals {r1:e}, {r2:e} at h = {h:e}"
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeCheck<T> {
    pub first_residual: T,
    pub second_residual: T,
    pub first_constant: T,
    pub second_constant: T,
    pub spacing: T,
}

/// `n` uniform points on `[start, end]`, computed as `start + i·h`.
pub fn uniform_grid<T: Real>(start: T, end: T, n: usize) -> Result<Vec<T>> {
    if n < 2 {
        return Err(Error::TooFewSamples { need: 2, got: n });
    }
    if !(end > start) {
        return Err(Error::Domain(format!("empty interval [{start}, {end}]")));
    }
    let h = (end - start) / T::from_usize_lossy(n - 1);
    let mut s: Vec<T> = (0..n).map(|i| start + h * T::from_usize_lossy(i)).collect();
    s[n - 1] = end;
    Ok(s)
}

fn check_uniform<T: Real>(s: &[T]) -> Result<()> {
    let n = s.len();
    let h = (s[n - 1] - s[0]) / T::from_usize_lossy(n - 1);
    if !(h > T::zero()) {
        return Err(Error::InvalidProfile("s grid not increasing".into()));
    }
    let scale = s[0].abs().max(s[n - 1].abs()).max(h);
    let tol = T::tol(1e-12) * scale * T::lit(4.0);
    for (i, si) in s.iter().enumerate() {
        let expect = s[0] + h * T::from_usize_lossy(i);
        if (*si - expect).abs() > tol {
            return Err(Error::InvalidProfile(format!(
                "s grid not uniform at index {i}"
            )));
        }
    }
    Ok(())
}

/// Quintic Hermite basis on `[0, 1]` with scaled endpoint data
/// `(f, h f', h² f'')`; returns unscaled `(f, f', f'')` at `x`.
fn quintic_hermite<T: Real>(a: [T; 3], b: [T; 3], x: T, h: T) -> (T, T, T) {
    let lit = T::lit;
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x3 * x;
    let x5 = x4 * x;
    let h0 = T::one() - lit(10.0) * x3 + lit(15.0) * x4 - lit(6.0) * x5;
    let h1 = x - lit(6.0) * x3 + lit(8.0) * x4 - lit(3.0) * x5;
    let h2 = (x2 - lit(3.0) * x3 + lit(3.0) * x4 - x5) * lit(0.5);
    let h5 = lit(10.0) * x3 - lit(15.0) * x4 + lit(6.0) * x5;
    let h4 = -lit(4.0) * x3 + lit(7.0) * x4 - lit(3.0) * x5;
    let h3 = (x3 - lit(2.0) * x4 + x5) * lit(0.5);

    let d0 = -lit(30.0) * x2 + lit(60.0) * x3 - lit(30.0) * x4;
    let d1 = T::one() - lit(18.0) * x2 + lit(32.0) * x3 - lit(15.0) * x4;
    let d2 = (lit(2.0) * x - lit(9.0) * x2 + lit(12.0) * x3 - lit(5.0) * x4) * lit(0.5);
    let d5 = -d0;
    let d4 = -lit(12.0) * x2 + lit(28.0) * x3 - lit(15.0) * x4;
    let d3 = (lit(3.0) * x2 - lit(8.0) * x3 + lit(5.0) * x4) * lit(0.5);

    let e0 = -lit(60.0) * x + lit(180.0) * x2 - lit(120.0) * x3;
    let e1 = -lit(36.0) * x + lit(96.0) * x2 - lit(60.0) * x3;
    let e2 = (lit(2.0) - lit(18.0) * x + lit(36.0) * x2 - lit(20.0) * x3) * lit(0.5);
    let e5 = -e0;
    let e4 = -lit(24.0) * x + lit(84.0) * x2 - lit(60.0) * x3;
    let e3 = (lit(6.0) * x - lit(24.0) * x2 + lit(20.0) * x3) * lit(0.5);

    let v = a[0] * h0 + a[1] * h1 + a[2] * h2 + b[0] * h5 + b[1] * h4 + b[2] * h3;
    let d = (a[0] * d0 + a[1] * d1 + a[2] * d2 + b[0] * d5 + b[1] * d4 + b[2] * d3) / h;
    let e = (a[0] * e0 + a[1] * e1 + a[2] * e2 + b[0] * e5 + b[1] * e4 + b[2] * e3) / (h * h);
    (v, d, e)
}

/// Scalar curvature of `ds² + f² g*` on `S^dim` from pointwise values,
/// `R = (n/f²)((n−1)(1 − f'²) − 2 f f'')`.
pub fn warped_scalar_curvature<T: Real>(f: T, fp: T, fpp: T, dim: usize) -> Result<T> {
    if !(f > T::zero()) {
        return Err(Error::InvalidProfile(format!("f = {f} is not positive")));
    }
    let n = T::from_usize_lossy(dim);
    let n1 = n - T::one();
    Ok(n / (f * f) * (n1 * (T::one() - fp * fp) - (f + f) * fpp))
}

/// Scalar curvature of the warped product at sample `i`.
pub fn scalar_curvature_warped<T: Real>(p: &ProfileCurve<T>, i: usize) -> Result<T> {
    let (f, fp, fpp) = p.sample(i)?;
    warped_scalar_curvature(f, fp, fpp, p.dim())
}

/// `Ω[f] = ((n−1)/(2f))(1 − f'² − τ f²/(n(n−1)))`; `f'' < Ω` is equivalent
/// to `R > τ`.
pub fn omega_functional<T: Real>(f: T, fp: T, dim: usize, tau: T) -> Result<T> {
    if !(f > T::zero()) {
        return Err(Error::InvalidProfile(format!("f = {f} is not positive")));
    }
    let n = T::from_usize_lossy(dim);
    let n1 = n - T::one();
    Ok(n1 / (f + f) * (T::one() - fp * fp - tau * f * f / (n * n1)))
}

/// `Ω[f] − f''` at every sample; positive exactly where `R > τ`.
pub fn omega_margin<T: Real>(p: &ProfileCurve<T>, tau: T) -> Result<Vec<T>> {
    (0..p.len())
        .map(|i| Ok(omega_functional(p.f[i], p.f_prime[i], p.dim, tau)? - p.f_double_prime[i]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_spaces() {
        let sphere = ProfileCurve::from_fn(0.3, 2.8, 50, 2, |s: f64| (s.sin(), s.cos(), -s.sin())).unwrap();
        let hyp = ProfileCurve::from_fn(0.1, 3.0, 50, 2, |s: f64| (s.sinh(), s.cosh(), s.sinh())).unwrap();
        for i in 0..50 {
            assert!((scalar_curvature_warped(&sphere, i).unwrap() - 6.0).abs() < 1e-12);
            assert!((scalar_curvature_warped(&hyp, i).unwrap() + 6.0).abs() < 1e-10);
        }
        let cone = ProfileCurve::from_fn(0.0, 1.0, 10, 2, |s: f64| (s + 1.0, 1.0, 0.0)).unwrap();
        assert_eq!(scalar_curvature_warped(&cone, 0).unwrap(), 0.0);
        assert!(scalar_curvature_warped(&cone, 10).is_err());
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_functional(1.0, 0.0, 2, 0.0).unwrap(), 0.5);
        assert!((omega_functional(2.0f64, 1.0, 2, -6.0).unwrap() - 3.0).abs() < 1e-15);
        let w = omega_functional(1f64.sinh(), 1f64.cosh(), 2, -6.0).unwrap();
        assert!((w - 1f64.sinh()).abs() < 1e-14);
        assert!(omega_functional(0.0, 0.0, 2, 0.0).is_err());
    }

    #[test]
    fn margin_identity() {
        let p = ProfileCurve::from_fn(0.0, 1.0, 30, 3, |s: f64| (1.0 + s * s, 2.0 * s, 2.0)).unwrap();
        for i in 0..30 {
            let (f, _, _) = p.sample(i).unwrap();
            let r = scalar_curvature_warped(&p, i).unwrap();
            let m = omega_margin(&p, -1.0).unwrap()[i];
            assert!((r + 1.0 - 6.0 / f * m).abs() < 1e-12);
        }
    }

    #[test]
    fn hermite_and_derivative_check() {
        let p = ProfileCurve::from_fn(0.0, 2.0, 81, 2, |s: f64| (s.exp(), s.exp(), s.exp())).unwrap();
        let (v, d, e) = p.interpolate(0.737).unwrap();
        let x = 0.737f64.exp();
        assert!((v - x).abs() < 1e-12 && (d - x).abs() < 1e-9 && (e - x).abs() < 1e-6);
        p.check_derivatives().unwrap();
        let bad = ProfileCurve::new(
            p.s().to_vec(),
            p.f().to_vec(),
            p.f().iter().map(|x| 1.01 * x).collect(),
            p.f().to_vec(),
            2,
        )
        .unwrap();
        assert!(bad.check_derivatives().is_err());
    }

    #[test]
    fn rejects_nonpositive() {
        let s = vec![0.0, 1.0, 2.0];
        assert!(ProfileCurve::new(s.clone(), vec![1.0, 0.0, 1.0], vec![0.0; 3], vec![0.0; 3], 2).is_err());
        assert!(ProfileCurve::new(vec![0.0, 1.0, 3.0], vec![1.0; 3], vec![0.0; 3], vec![0.0; 3], 2).is_err());
    }
}
