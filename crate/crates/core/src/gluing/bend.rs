//! Bending a profile near `s0` by an arclength reparametrization `σ`.

use crate::ads::{AdSSchwParams, StaticProfile};
use crate::error::{Error, Result};
use crate::geometry::{omega_margin, DerivativeSource, ProfileCurve};
use crate::scalar::Real;
use crate::spectral::gauss_legendre;

/// `e^{-1/x²}` for `x > 0`.
pub fn bump<T: Real>(x: T) -> T {
    bump_scaled(x, T::one())
}

/// `e^{-ℓ²/x²}` for `x > 0`, with length scale `ℓ`.
pub fn bump_scaled<T: Real>(x: T, scale: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        (-(scale * scale) / (x * x)).exp()
    }
}

/// `∫₀^x e^{-ℓ²/y²} dy = ℓ J(x/ℓ)`.
pub fn bump_integral_scaled<T: Real>(x: T, scale: T) -> T {
    scale * bump_integral(x / scale)
}

/// `∫₀^x e^{-1/y²} dy`.
pub fn bump_integral<T: Real>(x: T) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    let (nodes, weights) = gauss_legendre::<T>(20);
    let panels = 6usize;
    let w = x / T::from_usize_lossy(panels);
    let half = T::lit(0.5);
    let mut acc = T::zero();
    for k in 0..panels {
        let mid = w * (T::from_usize_lossy(k) + half);
        for (y, wt) in nodes.iter().zip(&weights) {
            acc = acc + *wt * w * half * bump(mid + *y * w * half);
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BendOptions<T> {
    /// Require `ũ(s0 − δ) > floor`.
    pub floor: Option<T>,
    /// Largest bend width tried.
    pub max_delta: T,
    /// Length scale `ℓ` of the bump `e^{-ℓ²/x²}`.
    pub bump_scale: T,
}

impl<T: Real> Default for BendOptions<T> {
    fn default() -> Self {
        BendOptions {
            floor: None,
            max_delta: T::lit(0.75),
            bump_scale: T::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bend<T> {
    pub delta: T,
    pub bump_scale: T,
    /// Grid point the bend ends at.
    pub s0: T,
    /// Profile on `[s0 − δ, end]`, equal to the input from `s0` on.
    pub profile: ProfileCurve<T>,
    /// False when the input already had `R > τ` near `s0`.
    pub bent: bool,
    /// `σ(s)` at the samples before `s0`.
    pub sigma: Vec<T>,
    /// Lower bounds for `ln(R̃ − τ)` at the samples before `s0`.
    pub log_margin: Vec<T>,
}

impl<T: Real> Bend<T> {
    pub fn min_log_margin(&self) -> T {
        self.log_margin.iter().copied().fold(T::infinity(), T::min)
    }

    /// Number of samples before `s0`.
    pub fn bent_len(&self) -> usize {
        self.sigma.len()
    }
}

enum Source<'a, T> {
    Static(StaticProfile<T>, T),
    Samples(&'a ProfileCurve<T>),
}

impl<T: Real> Source<'_, T> {
    fn eval(&self, sigma: &[T]) -> Result<Vec<(T, T, T)>> {
        match self {
            Source::Static(p, origin) => {
                let local: Vec<T> = sigma.iter().map(|s| *s - *origin).collect();
                p.evaluate(&local)
            }
            Source::Samples(p) => sigma.iter().map(|s| p.interpolate(*s)).collect(),
        }
    }
}

/// Bends `p` on `[s0 − δ, s0)` so that `R > τ` there.
pub fn bend_profile<T: Real>(p: &ProfileCurve<T>, s0: T, tau: T) -> Result<Bend<T>> {
    bend_profile_with(p, s0, tau, &BendOptions::default())
}

pub fn bend_profile_with<T: Real>(
    p: &ProfileCurve<T>,
    s0: T,
    tau: T,
    opts: &BendOptions<T>,
) -> Result<Bend<T>> {
    let h = p.spacing();
    let i0 = p.nearest_index(s0);
    if i0 == 0 {
        return Err(Error::Domain(format!("s0 = {s0} must lie after the start of the profile")));
    }
    if !(p.f_prime()[i0] > T::zero()) {
        return Err(Error::hypothesis(
            "u'(s0) > 0",
            format!("u'({}) = {}", p.s()[i0], p.f_prime()[i0]),
        ));
    }
    let margin = omega_margin(p, tau)?;
    let tol = T::tol(1e-9) * (T::one() + tau.abs());
    if let Some(i) = (0..p.len()).find(|i| margin[*i] < -tol) {
        return Err(Error::hypothesis("R ≥ τ", format!("R < τ at s = {}", p.s()[i])));
    }
    let kmax = i0.min(((opts.max_delta / h).ceil().to_usize()).unwrap_or(i0).max(1));
    if margin[i0] > tol {
        return keep_unbent(p, i0, kmax, &margin, opts);
    }
    let source = source_for(p, i0)?;
    let mut k = kmax;
    while k >= 1 {
        if let Some(b) = bend_fixed(p, i0, k, tau, &source, opts)? {
            return Ok(b);
        }
        let next = k * 3 / 4;
        k = if next == k { k - 1 } else { next };
    }
    Err(Error::NotConverged(format!("no bend width certified at s0 = {}", p.s()[i0])))
}

fn source_for<T: Real>(p: &ProfileCurve<T>, i0: usize) -> Result<Source<'_, T>> {
    Ok(match p.source() {
        DerivativeSource::Static { mass, cosmological } => {
            let params = AdSSchwParams::new(mass, cosmological)?;
            Source::Static(StaticProfile::new(params, p.f()[i0])?, p.s()[i0])
        }
        _ => Source::Samples(p),
    })
}

/// Bend of exactly `k` samples ending at sample `i0`, or `None` if it
/// cannot be certified.
pub(crate) fn bend_at_width<T: Real>(
    p: &ProfileCurve<T>,
    i0: usize,
    k: usize,
    tau: T,
    bump_scale: T,
) -> Result<Option<Bend<T>>> {
    if k == 0 || k > i0 || !(p.f_prime()[i0] > T::zero()) {
        return Ok(None);
    }
    let source = source_for(p, i0)?;
    let opts = BendOptions {
        bump_scale,
        ..BendOptions::default()
    };
    bend_fixed(p, i0, k, tau, &source, &opts)
}

fn keep_unbent<T: Real>(
    p: &ProfileCurve<T>,
    i0: usize,
    kmax: usize,
    margin: &[T],
    opts: &BendOptions<T>,
) -> Result<Bend<T>> {
    let mut k = 0;
    while k < kmax && margin[i0 - k - 1] > T::zero() {
        if let Some(c) = opts.floor {
            if !(p.f()[i0 - k - 1] > c) {
                break;
            }
        }
        k += 1;
    }
    if k == 0 {
        return Err(Error::NotConverged("no room before s0 with R > τ".into()));
    }
    let lo = i0 - k;
    Ok(Bend {
        delta: p.s()[i0] - p.s()[lo],
        bump_scale: opts.bump_scale,
        s0: p.s()[i0],
        profile: p.restrict(lo, p.len() - 1)?,
        bent: false,
        sigma: p.s()[lo..i0].to_vec(),
        log_margin: margin[lo..i0].iter().map(|m| m.ln()).collect(),
    })
}

fn bend_fixed<T: Real>(
    p: &ProfileCurve<T>,
    i0: usize,
    k: usize,
    tau: T,
    source: &Source<'_, T>,
    opts: &BendOptions<T>,
) -> Result<Option<Bend<T>>> {
    let s = p.s();
    let s0 = s[i0];
    let lo = i0 - k;
    let xs: Vec<T> = (lo..i0).map(|i| s0 - s[i]).collect();
    let scale = opts.bump_scale;
    let scale2 = scale * scale;
    let sigma: Vec<T> = xs
        .iter()
        .zip(&s[lo..i0])
        .map(|(x, si)| *si - bump_integral_scaled(*x, scale))
        .collect();
    if let Source::Samples(q) = source {
        if sigma[0] < q.start() {
            return Ok(None);
        }
    }
    let vals = match source.eval(&sigma) {
        Ok(v) => v,
        Err(_) => return Ok(None),
    };
    let n = T::from_usize_lossy(p.dim());
    let nn1 = n * (n - T::one());
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let mut f = Vec::with_capacity(p.len() - lo);
    let mut fp = Vec::with_capacity(p.len() - lo);
    let mut fpp = Vec::with_capacity(p.len() - lo);
    let mut log_margin = Vec::with_capacity(k);
    for (x, (u, up, upp)) in xs.iter().zip(&vals) {
        let e = bump_scaled(*x, scale);
        let x3 = *x * *x * *x;
        let m = (*u * *u * tau - nn1) * (two + e) + four * n * scale2 * *u * *up / x3;
        if !(m > T::zero()) || !(*u > T::zero()) {
            return Ok(None);
        }
        let theta = T::one() + e;
        let dtheta = -two * scale2 * e / x3;
        let (bu, bup, bupp) = (*u, *up * theta, *upp * theta * theta + *up * dtheta);
        if !(bup > T::zero()) {
            return Ok(None);
        }
        f.push(bu);
        fp.push(bup);
        fpp.push(bupp);
        log_margin.push(-scale2 / (*x * *x) + m.ln() - two * u.ln());
    }
    if let Some(c) = opts.floor {
        if !(f[0] > c) {
            return Ok(None);
        }
    }
    if p.f_double_prime()[i0] > T::zero() && !(fp[0] < p.f_prime()[i0]) {
        return Ok(None);
    }
    f.extend_from_slice(&p.f()[i0..]);
    fp.extend_from_slice(&p.f_prime()[i0..]);
    fpp.extend_from_slice(&p.f_double_prime()[i0..]);
    let profile = ProfileCurve::new(s[lo..].to_vec(), f, fp, fpp, p.dim())?;
    Ok(Some(Bend {
        delta: s0 - s[lo],
        bump_scale: scale,
        s0,
        profile,
        bent: true,
        sigma,
        log_margin,
    }))
}
