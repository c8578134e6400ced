//! Localized mollification `f_ε(s) = ∫ f̃(s − ε η(s) t) φ(t) dt`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::gauss_legendre;

/// A `C^{1,1}` function that is `C²` away from finitely many kinks.
pub trait PiecewiseC2<T: Real>: Sync {
    /// `(f, f', f'')`; at a kink either one-sided `f''` may be returned.
    fn eval(&self, s: T) -> (T, T, T);

    /// Points where `f''` may jump.
    fn kinks(&self) -> &[T];
}

/// Smooth step `0 → 1` on `[0, 1]` built from `e^{-1/y}`, with derivatives.
pub fn smooth_step<T: Real>(y: T) -> (T, T, T) {
    let one = T::one();
    if y <= T::zero() {
        return (T::zero(), T::zero(), T::zero());
    }
    if y >= one {
        return (one, T::zero(), T::zero());
    }
    let w = one - y;
    let g = one / y - one / w;
    let g1 = -one / (y * y) - one / (w * w);
    let two = T::lit(2.0);
    let g2 = two / (y * y * y) - two / (w * w * w);
    let s = one / (one + g.exp());
    let c = (g * T::lit(0.5)).cosh();
    let ss = one / (T::lit(4.0) * c * c);
    let d1 = -ss * g1;
    let d2 = -d1 * (one - two * s) * g1 - ss * g2;
    (s, d1, d2)
}

/// Cutoff `η`: zero up to `outer_left`, one on `[inner_left, inner_right]`,
/// zero from `outer_right` on, strictly between elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff<T> {
    pub outer_left: T,
    pub inner_left: T,
    pub inner_right: T,
    pub outer_right: T,
    pub delta: T,
}

impl<T: Real> Cutoff<T> {
    /// Cutoff for pieces `[a1, b1]`, `[a2, b2]` with margin `delta` around the gap.
    pub fn new(a1: T, b1: T, a2: T, b2: T, delta: T) -> Result<Self> {
        let half = T::lit(0.5);
        let c = Cutoff {
            outer_left: (a1 + b1) * half,
            inner_left: b1 - delta,
            inner_right: a2 + delta,
            outer_right: (a2 + b2) * half,
            delta,
        };
        if !(delta > T::zero() && c.outer_left < c.inner_left && c.inner_right < c.outer_right) {
            return Err(Error::Domain(format!(
                "cutoff margin {delta} does not fit inside the half intervals"
            )));
        }
        Ok(c)
    }

    /// `(η, η', η'')`.
    pub fn eval(&self, s: T) -> (T, T, T) {
        if s <= self.outer_left || s >= self.outer_right {
            return (T::zero(), T::zero(), T::zero());
        }
        if s >= self.inner_left && s <= self.inner_right {
            return (T::one(), T::zero(), T::zero());
        }
        if s < self.inner_left {
            let w = self.inner_left - self.outer_left;
            let (v, d, dd) = smooth_step((s - self.outer_left) / w);
            (v, d / w, dd / (w * w))
        } else {
            let w = self.outer_right - self.inner_right;
            let (v, d, dd) = smooth_step((self.outer_right - s) / w);
            (v, -d / w, dd / (w * w))
        }
    }

    /// True where `η ≡ 0`.
    pub fn is_outer(&self, s: T) -> bool {
        s <= self.outer_left || s >= self.outer_right
    }
}

/// The bump `φ(t) = c e^{-1/(1−t²)}` on `(−1, 1)` normalized to `∫φ = 1`,
/// with a composite Gauss–Legendre rule for sub-intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct Mollifier<T> {
    norm: T,
    nodes: Vec<T>,
    weights: Vec<T>,
    panels: usize,
}

impl<T: Real> Mollifier<T> {
    pub fn new() -> Self {
        let (nodes, weights) = gauss_legendre::<T>(32);
        let mut m = Mollifier {
            norm: T::one(),
            nodes,
            weights,
            panels: 8,
        };
        let raw = m.integrate(-T::one(), T::one(), |_| T::one());
        m.norm = T::one() / raw;
        m
    }

    pub fn density(&self, t: T) -> T {
        let q = T::one() - t * t;
        if q <= T::zero() {
            T::zero()
        } else {
            self.norm * (-T::one() / q).exp()
        }
    }

    /// `∫_a^b g(t) φ(t) dt` by the composite rule, with panels in
    /// proportion to the length of `[a, b] ⊂ [−1, 1]`.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut g: F) -> T {
        let mut acc = T::zero();
        let share = ((b - a) * T::from_usize_lossy(self.panels) * T::lit(0.5)).ceil();
        let panels = share.to_usize().unwrap_or(1).clamp(1, self.panels);
        let p = T::from_usize_lossy(panels);
        let w = (b - a) / p;
        let half = T::lit(0.5);
        for k in 0..panels {
            let lo = a + w * T::from_usize_lossy(k);
            let mid = lo + w * half;
            for (x, wt) in self.nodes.iter().zip(&self.weights) {
                let t = mid + *x * w * half;
                acc = acc + *wt * w * half * g(t) * self.density(t);
            }
        }
        acc
    }
}

impl<T: Real> Default for Mollifier<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// `(f_ε, f_ε', f_ε'')` at each `s`. Samples where `η(s) = 0` are copied
/// from `tilde` unchanged.
pub fn mollify_profile<T: Real, P: PiecewiseC2<T>>(
    tilde: &P,
    cutoff: &Cutoff<T>,
    epsilon: T,
    s: &[T],
    mollifier: &Mollifier<T>,
) -> Result<Vec<(T, T, T)>> {
    let delta = cutoff.delta;
    if !(epsilon > T::zero()) || !(epsilon < delta / T::lit(4.0)) {
        return Err(Error::Domain(format!(
            "mollification radius {epsilon} must lie in (0, {})",
            delta / T::lit(4.0)
        )));
    }
    Ok(s.par_iter()
        .map(|&si| {
            let (eta, eta1, eta2) = cutoff.eval(si);
            if eta == T::zero() {
                return tilde.eval(si);
            }
            let spread = epsilon * eta;
            let mut cuts = vec![-T::one()];
            for k in tilde.kinks() {
                let t = (si - *k) / spread;
                if t > -T::one() && t < T::one() {
                    cuts.push(t);
                }
            }
            cuts.push(T::one());
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            let (mut f, mut fp, mut fpp) = (T::zero(), T::zero(), T::zero());
            for w in cuts.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                if hi <= lo {
                    continue;
                }
                let pf = |t: T| tilde.eval(si - spread * t);
                f = f + mollifier.integrate(lo, hi, |t| pf(t).0);
                fp = fp + mollifier.integrate(lo, hi, |t| pf(t).1 * (T::one() - epsilon * eta1 * t));
                fpp = fpp
                    + mollifier.integrate(lo, hi, |t| {
                        let (_, d1, d2) = pf(t);
                        let j = T::one() - epsilon * eta1 * t;
                        d2 * j * j - epsilon * d1 * eta2 * t
                    });
            }
            (f, fp, fpp)
        })
        .collect())
}
