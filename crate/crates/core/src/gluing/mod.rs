//! Smooth gluing of warped-product profiles under a scalar curvature bound.

mod attach;
mod bend;
mod bridge;
mod mollify;

pub use attach::{glue_to_ads_schwarzschild, glue_to_ads_schwarzschild_with, AttachBranch, AttachOptions, Attachment};
pub use bend::{
    bend_profile, bend_profile_with, bump, bump_integral, bump_integral_scaled, bump_scaled, Bend,
    BendOptions,
};
pub use bridge::{build_zeta, Bridge};
pub use mollify::{mollify_profile, smooth_step, Cutoff, Mollifier, PiecewiseC2};

use crate::error::{Error, Result};
use crate::geometry::{omega_functional, omega_margin, uniform_grid, ProfileCurve};
use crate::scalar::{min_of, Real};

/// Two profiles to be joined, with the bound `R > τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GluingProblem<T> {
    f1: ProfileCurve<T>,
    f2: ProfileCurve<T>,
    tau: T,
}

/// `√(1 − τ f²/(n(n−1)))`.
fn slope_limit<T: Real>(f: T, tau: T, dim: usize) -> T {
    let n = T::from_usize_lossy(dim);
    (T::one() - tau * f * f / (n * (n - T::one()))).sqrt()
}

impl<T: Real> GluingProblem<T> {
    /// Checks the hypotheses, naming the first clause that fails.
    pub fn new(f1: ProfileCurve<T>, f2: ProfileCurve<T>, tau: T) -> Result<Self> {
        if tau > T::zero() {
            return Err(Error::Domain(format!("τ = {tau} must be ≤ 0")));
        }
        if f1.dim() != f2.dim() {
            return Err(Error::InvalidProfile("pieces have different sphere dimensions".into()));
        }
        let (h1, h2) = (f1.spacing(), f2.spacing());
        if (h1 - h2).abs() > T::tol(1e-9) * h1 {
            return Err(Error::InvalidProfile(format!("pieces use different spacings {h1}, {h2}")));
        }
        for (piece, p) in [(1, &f1), (2, &f2)] {
            if p.len() < 8 {
                return Err(Error::TooFewSamples { need: 8, got: p.len() });
            }
            let m = omega_margin(p, tau)?;
            if let Some(i) = (0..p.len()).find(|i| !(m[*i] > T::zero())) {
                return Err(Error::hypothesis(
                    "(i)",
                    format!("R ≤ τ on piece {piece} at s = {}", p.s()[i]),
                ));
            }
        }
        let n = f1.dim();
        let last = f1.len() - 1;
        let (fb, dfb) = (f1.f()[last], f1.f_prime()[last]);
        let (fa, dfa) = (f2.f()[0], f2.f_prime()[0]);
        if !(fb < fa) {
            return Err(Error::hypothesis("(ii)", format!("f1(b1) = {fb} ≥ f2(a2) = {fa}")));
        }
        let lim1 = slope_limit(fb, tau, n);
        if !(dfb > T::zero() && dfb < lim1) {
            return Err(Error::hypothesis(
                "(iii)",
                format!("f1'(b1) = {dfb} not in (0, {lim1})"),
            ));
        }
        let lim2 = slope_limit(fa, tau, n);
        if !(dfa > -lim2 && dfa <= dfb) {
            return Err(Error::hypothesis(
                "(iv)",
                format!("f2'(a2) = {dfa} not in (−{lim2}, {dfb}]"),
            ));
        }
        Ok(GluingProblem { f1, f2, tau })
    }

    pub fn f1(&self) -> &ProfileCurve<T> {
        &self.f1
    }

    pub fn f2(&self) -> &ProfileCurve<T> {
        &self.f2
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn dim(&self) -> usize {
        self.f1.dim()
    }
}

/// `f̃`: `f1`, then the bridge, then the translated `f2`.
struct Tilde<'a, T> {
    f1: &'a ProfileCurve<T>,
    f2: &'a ProfileCurve<T>,
    bridge: Bridge<T>,
    kinks: [T; 2],
}

impl<T: Real> PiecewiseC2<T> for Tilde<'_, T> {
    fn eval(&self, s: T) -> (T, T, T) {
        let [b1, a2] = self.kinks;
        let clamp = |p: &ProfileCurve<T>, s: T| {
            p.interpolate(s.max(p.start()).min(p.end()))
                .expect("clamped inside the piece")
        };
        if s <= b1 {
            clamp(self.f1, s)
        } else if s >= a2 {
            clamp(self.f2, s)
        } else {
            let r = s - b1;
            let fb = self.f1.f()[self.f1.len() - 1];
            (fb + self.bridge.integral(r), self.bridge.value(r), self.bridge.derivative(r))
        }
    }

    fn kinks(&self) -> &[T] {
        &self.kinks
    }
}

/// Intermediate objects of the gluing construction.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeConstruction<T> {
    pub bridge: Bridge<T>,
    /// `ζ` at the grid points of `[b1, a2]`.
    pub zeta: Vec<T>,
    /// `f̂` at the grid points of `[b1, a2]`.
    pub f_hat: Vec<T>,
    /// `f̃` on the whole grid.
    pub f_tilde: Vec<T>,
    /// `η` on the whole grid.
    pub eta: Vec<T>,
    pub epsilon: T,
    pub delta: T,
    /// One third of the grid minimum of `Ω[f̃] − f̃''`.
    pub d: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GluedProfile<T> {
    pub profile: ProfileCurve<T>,
    pub construction: BridgeConstruction<T>,
    /// Translation applied to `f2`.
    pub shift: T,
    /// Grid indices of `b1` and of the translated `a2`.
    pub junctions: (usize, usize),
    pub min_margin: T,
    /// True when both pieces were increasing, and then so is the result.
    pub mean_convex: bool,
}

const EPSILON_HALVINGS: usize = 40;

/// Joins the two pieces into one profile with `R > τ` at every sample,
/// equal to the inputs on the outer half intervals.
pub fn glue_profiles<T: Real>(p: &GluingProblem<T>) -> Result<GluedProfile<T>> {
    let (f1, f2) = (&p.f1, &p.f2);
    let h = f1.spacing();
    let n1 = f1.len();
    let (fb, dfb) = (f1.f()[n1 - 1], f1.f_prime()[n1 - 1]);
    let (fa, dfa) = (f2.f()[0], f2.f_prime()[0]);
    let bridge = build_zeta(dfb, dfa, fa - fb, Some(h))?;
    let k_gap = (bridge.length / h).round().to_usize().unwrap_or(0);
    let b1 = f1.end();
    let a2 = b1 + bridge.length;
    let shift = a2 - f2.start();
    let f2t = f2.translated(shift);
    let total = n1 + k_gap - 1 + f2.len();
    let s = uniform_grid(f1.start(), f2t.end(), total)?;
    let j2 = n1 - 1 + k_gap;

    let tilde = Tilde {
        f1,
        f2: &f2t,
        bridge,
        kinks: [b1, a2],
    };
    let mut ft = (Vec::with_capacity(total), Vec::with_capacity(total), Vec::with_capacity(total));
    for i in 0..total {
        let v = if i < n1 {
            (f1.f()[i], f1.f_prime()[i], f1.f_double_prime()[i])
        } else if i >= j2 {
            let k = i - j2;
            (f2.f()[k], f2.f_prime()[k], f2.f_double_prime()[k])
        } else {
            tilde.eval(b1 + h * T::from_usize_lossy(i + 1 - n1))
        };
        ft.0.push(v.0);
        ft.1.push(v.1);
        ft.2.push(v.2);
    }
    let n = p.dim();
    let tau = p.tau;
    let margins = |f: &[T], fp: &[T], fpp: &[T]| -> Result<Vec<T>> {
        (0..f.len())
            .map(|i| Ok(omega_functional(f[i], fp[i], n, tau)? - fpp[i]))
            .collect()
    };
    let tilde_margin = margins(&ft.0, &ft.1, &ft.2)?;
    let d = min_of(&tilde_margin) / T::lit(3.0);
    if !(d > T::zero()) {
        return Err(Error::hypothesis(
            "(i)",
            format!("assembled profile has Ω − f'' = {} on the grid", d * T::lit(3.0)),
        ));
    }
    let half = T::lit(0.5);
    let delta = ((b1 - f1.start()) * half).min((f2t.end() - a2) * half) * half;
    let cutoff = Cutoff::new(f1.start(), b1, a2, f2t.end(), delta)?;
    let mollifier = Mollifier::new();
    let increasing = f1.f_prime().iter().chain(f2.f_prime()).all(|v| *v > T::zero());

    let mut epsilon = delta / T::lit(8.0);
    for _ in 0..EPSILON_HALVINGS {
        let vals = mollify_profile(&tilde, &cutoff, epsilon, &s, &mollifier)?;
        let mut f = Vec::with_capacity(total);
        let mut fp = Vec::with_capacity(total);
        let mut fpp = Vec::with_capacity(total);
        for (i, v) in vals.iter().enumerate() {
            if cutoff.is_outer(s[i]) {
                f.push(ft.0[i]);
                fp.push(ft.1[i]);
                fpp.push(ft.2[i]);
            } else {
                f.push(v.0);
                fp.push(v.1);
                fpp.push(v.2);
            }
        }
        let ok_positive = f.iter().all(|v| *v > T::zero());
        if ok_positive {
            let m = margins(&f, &fp, &fpp)?;
            let min_margin = min_of(&m);
            let monotone = !increasing || fp.iter().all(|v| *v > T::zero());
            if min_margin > T::zero() && monotone {
                let eta = s.iter().map(|x| cutoff.eval(*x).0).collect();
                let construction = BridgeConstruction {
                    bridge,
                    zeta: ft.1[n1 - 1..=j2].to_vec(),
                    f_hat: ft.0[n1 - 1..=j2].to_vec(),
                    f_tilde: ft.0,
                    eta,
                    epsilon,
                    delta,
                    d,
                };
                let profile = ProfileCurve::new(s, f, fp, fpp, n)?;
                return Ok(GluedProfile {
                    profile,
                    construction,
                    shift,
                    junctions: (n1 - 1, j2),
                    min_margin,
                    mean_convex: increasing,
                });
            }
        }
        epsilon = epsilon * half;
    }
    Err(Error::NotConverged(format!(
        "no mollification radius down to {epsilon} certified R > τ; refine the grid"
    )))
}
