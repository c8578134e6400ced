//! Attaching an AdS-Schwarzschild exterior to a profile.

use crate::ads::{AdSSchwParams, StaticProfile};
use crate::error::{Error, Result};
use crate::geometry::{omega_margin, profile_level_mass, uniform_grid, ProfileCurve};
use crate::roots::{bracket_upward, brent};
use crate::scalar::Real;

use super::bend::{bend_at_width, bump_integral_scaled, bump_scaled};
use super::{glue_profiles, GluingProblem};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttachOptions<T> {
    /// Length of untouched exterior kept after the bend.
    pub tail_length: T,
    /// Largest bend width tried.
    pub max_delta: T,
    /// Grid halvings of the input allowed when the attachment window is
    /// narrower than one step.
    pub max_refinements: usize,
}

impl<T: Real> Default for AttachOptions<T> {
    fn default() -> Self {
        AttachOptions {
            tail_length: T::lit(4.0),
            max_delta: T::lit(0.75),
            max_refinements: 7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttachBranch<T> {
    /// `m_e > 0`; `match_radius` solves `u'(r) = f'(b)` and exceeds `f(b)`.
    PositiveMass { match_radius: T },
    /// `m_e ≤ 0`; the exterior starts at `u = f(b) + ε₁`, and
    /// `μ = 2(m_e − m_*)/f(b)`.
    NonPositiveMass { epsilon1: T, mu: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attachment<T> {
    pub branch: AttachBranch<T>,
    /// Hawking mass of the end of the input.
    pub boundary_mass: T,
    pub exterior_mass: T,
    /// Global coordinate where the untouched exterior begins.
    pub s0: T,
    pub bend_width: T,
    /// Length scale of the bending bump.
    pub bump_scale: T,
    /// `u` at the start of the bent piece, above `f(b)`.
    pub bend_start_radius: T,
    /// `u(s0)`.
    pub s0_radius: T,
    /// Translation taking exterior coordinates (`s0 = 0`) to global ones.
    pub exterior_shift: T,
    /// First sample of the untouched exterior.
    pub tail_start: usize,
    /// Last sample of the glued region, which has `R > −6` strictly.
    pub glue_end: usize,
    pub epsilon: T,
    pub bridge_length: T,
    pub min_glue_margin: T,
    pub min_bend_log_margin: T,
    pub mean_convex: bool,
    /// Input spacing divided by the output spacing.
    pub refinement: usize,
}

pub fn glue_to_ads_schwarzschild<T: Real>(
    f: &ProfileCurve<T>,
    m_e: T,
) -> Result<(ProfileCurve<T>, Attachment<T>)> {
    glue_to_ads_schwarzschild_with(f, m_e, &AttachOptions::default())
}

/// Extends `f` by a bent and glued AdS-Schwarzschild exterior of mass `m_e`.
pub fn glue_to_ads_schwarzschild_with<T: Real>(
    f: &ProfileCurve<T>,
    m_e: T,
    opts: &AttachOptions<T>,
) -> Result<(ProfileCurve<T>, Attachment<T>)> {
    if f.dim() != 2 {
        return Err(Error::InvalidProfile("exterior gluing needs a 2-sphere cross-section".into()));
    }
    let tau = -T::lit(6.0);
    let last = f.len() - 1;
    let (fb, dfb) = (f.f()[last], f.f_prime()[last]);
    if let Some(i) = omega_margin(f, tau)?.iter().position(|m| !(*m > T::zero())) {
        return Err(Error::hypothesis("(i)", format!("R ≤ −6 at s = {}", f.s()[i])));
    }
    if !(dfb > T::zero()) {
        return Err(Error::hypothesis("(ii)", format!("H(Σ_b) ≤ 0 (f'(b) = {dfb})")));
    }
    let m_star = profile_level_mass(fb, dfb);
    if m_star < -fb * fb * fb {
        return Err(Error::hypothesis(
            "(iii)",
            format!("boundary Hawking mass {m_star} < −f(b)³ = {}", -fb * fb * fb),
        ));
    }
    if !(m_e > m_star) {
        return Err(Error::Admissibility(format!(
            "exterior mass {m_e} must exceed the boundary Hawking mass {m_star}"
        )));
    }
    let params = AdSSchwParams::new(m_e, T::one())?;
    let lapse = |r: T| params.lapse_sq(r);
    let positive = m_e > T::zero();
    let xtol = T::tol(1e-14);
    let root_at = |level: T| -> Result<T> {
        let lo = params.r_plus.max(T::tol(1e-12));
        let hi = bracket_upward(|r| lapse(r) - level, lo, lo + fb + T::one())?;
        brent(|r| lapse(r) - level, lo, hi, xtol * hi)
    };
    let match_radius = if positive {
        let r = root_at(dfb * dfb)?;
        if !(r > fb) {
            return Err(Error::Numerical(format!(
                "slope-matching radius {r} does not exceed f(b) = {fb}"
            )));
        }
        Some(r)
    } else {
        None
    };

    let mut grid = f.clone();
    let mut factor = 1;
    loop {
        let mut narrow = false;
        let mut certified_nothing = false;
        let h = grid.spacing();
        let k_tail = (opts.tail_length / h).ceil().to_usize().unwrap_or(1).max(1);
        let mut k = (opts.max_delta / h).floor().to_usize().unwrap_or(0);
        let mut last_err = Error::NotConverged("bend width below grid resolution".into());
        while k >= 16 {
            let delta = h * T::from_usize_lossy(k);
            for scale in bump_scales(delta) {
                match attempt(&grid, m_e, m_star, params, match_radius, k, k_tail, delta, scale, tau) {
                    Ok((p, mut a)) => {
                        a.refinement = factor;
                        return Ok((p, a));
                    }
                    Err(e) => {
                        narrow |= matches!(&e, Error::Infeasible(msg) if msg.contains("grid step"));
                        certified_nothing |= matches!(&e, Error::Infeasible(_));
                        last_err = e;
                    }
                }
            }
            let next = k * 7 / 8;
            k = if next == k { k - 1 } else { next };
        }
        if !(narrow || certified_nothing) || factor >= 1 << opts.max_refinements {
            return Err(Error::NotConverged(format!(
                "no exterior attachment certified: {last_err}"
            )));
        }
        grid = refine(&grid)?;
        factor *= 2;
    }
}

/// Bump length scales tried at bend width `δ`: the unit bump first, then
/// `ℓ = ρδ` for decreasing `ρ`, which keeps `e^{-ℓ²/x²}` resolvable when the
/// exterior slope at the bend is small.
fn bump_scales<T: Real>(delta: T) -> Vec<T> {
    let mut out = vec![T::one()];
    for ratio in [3.0, 2.0, 1.4] {
        let scale = delta * T::lit(ratio);
        if scale < T::one() {
            out.push(scale);
        }
    }
    out
}

/// Halves the spacing; old samples stay at the even indices.
fn refine<T: Real>(p: &ProfileCurve<T>) -> Result<ProfileCurve<T>> {
    let n = 2 * (p.len() - 1) + 1;
    let s = uniform_grid(p.start(), p.end(), n)?;
    let (mut f, mut fp, mut fpp) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for (i, si) in s.iter().enumerate() {
        let v = if i % 2 == 0 { p.sample(i / 2)? } else { p.interpolate(*si)? };
        f.push(v.0);
        fp.push(v.1);
        fpp.push(v.2);
    }
    ProfileCurve::new(s, f, fp, fpp, p.dim())
}

#[allow(clippy::too_many_arguments)]
fn attempt<T: Real>(
    f: &ProfileCurve<T>,
    m_e: T,
    m_star: T,
    params: AdSSchwParams<T>,
    match_radius: Option<T>,
    k: usize,
    k_tail: usize,
    delta: T,
    bump_scale: T,
    tau: T,
) -> Result<(ProfileCurve<T>, Attachment<T>)> {
    let h = f.spacing();
    let last = f.len() - 1;
    let (fb, dfb) = (f.f()[last], f.f_prime()[last]);
    let e = bump_scaled(delta, bump_scale);
    let cap = dfb / (T::one() + e);
    let cap2 = cap * cap;
    let half = T::lit(0.5);
    // the bent piece must start inside (f(b), r_cap], where u'(r_cap)(1 + e) = f'(b)
    let lo = fb.max(params.r_plus);
    if !(params.lapse_sq(lo) < cap2) {
        return Err(Error::Infeasible(format!("empty attachment window at bend width {delta}")));
    }
    let hi = bracket_upward(|r| params.lapse_sq(r) - cap2, lo, lo + fb + T::one())?;
    let r_cap = brent(|r| params.lapse_sq(r) - cap2, lo, hi, T::tol(1e-14) * hi)?;
    // bridge of j grid steps whose mean slope is the average of the end slopes
    let max_steps = T::lit(0.9) * (r_cap - fb) / (dfb * h);
    let j = max_steps.min(T::lit(0.25) / h).floor().to_usize().unwrap_or(0);
    if j == 0 {
        return Err(Error::Infeasible(
            "attachment window narrower than one grid step; refine the profile".into(),
        ));
    }
    let length = h * T::from_usize_lossy(j);
    let balance = |r: T| (r - fb) / length - (dfb + params.slope(r) * (T::one() + e)) * half;
    let r_a = if balance(lo) < T::zero() {
        brent(balance, lo, fb + length * dfb, T::tol(1e-15) * r_cap)?
    } else {
        // the horizon lies beyond f(b): slopes near it are small and the
        // bridge length is free, so any window point serves
        lo + (r_cap - lo) * T::lit(0.25)
    };
    let branch = match match_radius {
        Some(r_match) => AttachBranch::PositiveMass { match_radius: r_match },
        None => AttachBranch::NonPositiveMass {
            epsilon1: r_a - fb,
            mu: (m_e - m_star) * T::lit(2.0) / fb,
        },
    };
    let run = delta + bump_integral_scaled(delta, bump_scale);
    let r_s0 = StaticProfile::new(params, r_a)?.evaluate(&[run])?[0].0;
    let exterior = StaticProfile::new(params, r_s0)?;
    let local = exterior.curve(
        -h * T::from_usize_lossy(k),
        h * T::from_usize_lossy(k_tail),
        k + k_tail + 1,
    )?;
    let bend = bend_at_width(&local, k, k, tau, bump_scale)?
        .ok_or_else(|| Error::Infeasible(format!("bend of width {delta} not certified")))?;
    let bent = &bend.profile;
    if !(bent.f()[0] > fb && bent.f_prime()[0] <= dfb) {
        return Err(Error::Infeasible("bent exterior misses the attachment window".into()));
    }
    let margin = omega_margin(bent, tau)?;
    let floor = T::tol(1e-9);
    let healthy = margin[..k].iter().take_while(|m| **m > floor).count();
    if healthy < 8 {
        return Err(Error::Infeasible("bent piece has no resolvable margin".into()));
    }
    let f2 = bent.restrict(0, healthy - 1)?;
    let glued = glue_profiles(&GluingProblem::new(f.clone(), f2, tau)?)?;

    let gp = &glued.profile;
    let mut fv = gp.f().to_vec();
    let mut fpv = gp.f_prime().to_vec();
    let mut fppv = gp.f_double_prime().to_vec();
    fv.extend_from_slice(&bent.f()[healthy..]);
    fpv.extend_from_slice(&bent.f_prime()[healthy..]);
    fppv.extend_from_slice(&bent.f_double_prime()[healthy..]);
    let total = fv.len();
    let glue_end = gp.len() - 1;
    let tail_start = glue_end + (k - healthy) + 1;
    let end = f.start() + h * T::from_usize_lossy(total - 1);
    let s = uniform_grid(f.start(), end, total)?;
    let s0 = s[tail_start];
    let mean_convex = glued.mean_convex && fpv.iter().all(|v| *v > T::zero());
    let profile = ProfileCurve::new(s, fv, fpv, fppv, 2)?;
    Ok((
        profile,
        Attachment {
            branch,
            boundary_mass: m_star,
            exterior_mass: m_e,
            s0,
            bend_width: delta,
            bump_scale,
            bend_start_radius: bent.f()[0],
            s0_radius: r_s0,
            exterior_shift: s0,
            tail_start,
            glue_end,
            epsilon: glued.construction.epsilon,
            bridge_length: glued.construction.bridge.length,
            min_glue_margin: glued.min_margin,
            min_bend_log_margin: bend.min_log_margin(),
            mean_convex,
            refinement: 1,
        },
    ))
}
