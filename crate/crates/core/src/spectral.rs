//! Gauss–Legendre collocation in `x = cos θ`.
//!
//! Axisymmetric functions on the sphere are sampled at the Gauss–Legendre
//! nodes of `(-1, 1)`; the Legendre transform on those nodes is exact for
//! polynomials of degree `< n`, and the round Laplacian is diagonal in the
//! Legendre basis, `Δ* P_l = -l(l+1) P_l`.

use crate::scalar::Real;

/// Values `P_0(x) .. P_lmax(x)`.
pub fn legendre_values<T: Real>(x: T, lmax: usize) -> Vec<T> {
    let mut p = Vec::with_capacity(lmax + 1);
    p.push(T::one());
    if lmax == 0 {
        return p;
    }
    p.push(x);
    for l in 1..lmax {
        let lf = T::from_usize_lossy(l);
        let next = ((lf + lf + T::one()) * x * p[l] - lf * p[l - 1]) / (lf + T::one());
        p.push(next);
    }
    p
}

/// Values and first derivatives of `P_0 .. P_lmax` at `x`.
pub fn legendre_values_and_derivatives<T: Real>(x: T, lmax: usize) -> (Vec<T>, Vec<T>) {
    let p = legendre_values(x, lmax + 1);
    let mut dp = vec![T::zero(); lmax + 1];
    // P'_{l+1} = P'_{l-1} + (2l+1) P_l
    for l in 1..=lmax {
        let prev = if l >= 2 { dp[l - 2] } else { T::zero() };
        dp[l] = prev + T::from_usize_lossy(2 * l - 1) * p[l - 1];
    }
    (p[..=lmax].to_vec(), dp)
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "need at least one node");
    let mut x = vec![T::zero(); n];
    let mut w = vec![T::zero(); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton in f64 and a final polish in T.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pair_f64(z, n);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let mut zt = T::lit(z);
        for _ in 0..3 {
            let (p, dp) = legendre_pair(zt, n);
            zt = zt - p / dp;
        }
        let (_, dp) = legendre_pair(zt, n);
        let wt = T::lit(2.0) / ((T::one() - zt * zt) * dp * dp);
        x[n - 1 - i] = zt;
        x[i] = -zt;
        w[i] = wt;
        w[n - 1 - i] = wt;
    }
    if n % 2 == 1 {
        x[n / 2] = T::zero();
    }
    (x, w)
}

fn legendre_pair_f64(x: f64, n: usize) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for l in 1..n {
        let lf = l as f64;
        let p2 = ((2.0 * lf + 1.0) * x * p1 - lf * p0) / (lf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn legendre_pair<T: Real>(x: T, n: usize) -> (T, T) {
    let (mut p0, mut p1) = (T::one(), x);
    for l in 1..n {
        let lf = T::from_usize_lossy(l);
        let p2 = ((lf + lf + T::one()) * x * p1 - lf * p0) / (lf + T::one());
        p0 = p1;
        p1 = p2;
    }
    let dp = T::from_usize_lossy(n) * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}

/// Collocation grid with precomputed transform, differentiation and
/// Laplacian matrices (row-major, `n × n`).
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreGrid<T> {
    n: usize,
    x: Vec<T>,
    w: Vec<T>,
    theta: Vec<T>,
    /// `vander[j*n + l] = P_l(x_j)`
    vander: Vec<T>,
    /// `analysis[l*n + k] = (2l+1)/2 · w_k · P_l(x_k)`
    analysis: Vec<T>,
    diff: Vec<T>,
    laplacian: Vec<T>,
}

impl<T: Real> LegendreGrid<T> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 4, "Legendre grid needs at least 4 nodes");
        let (x, w) = gauss_legendre::<T>(n);
        let theta = x.iter().map(|xi| xi.acos()).collect();
        let mut vander = vec![T::zero(); n * n];
        let mut dvander = vec![T::zero(); n * n];
        for j in 0..n {
            let (p, dp) = legendre_values_and_derivatives(x[j], n - 1);
            for l in 0..n {
                vander[j * n + l] = p[l];
                dvander[j * n + l] = dp[l];
            }
        }
        let mut analysis = vec![T::zero(); n * n];
        for l in 0..n {
            let norm = T::from_usize_lossy(2 * l + 1) / T::lit(2.0);
            for k in 0..n {
                analysis[l * n + k] = norm * w[k] * vander[k * n + l];
            }
        }
        let mut diff = vec![T::zero(); n * n];
        let mut laplacian = vec![T::zero(); n * n];
        for j in 0..n {
            for k in 0..n {
                let mut d = T::zero();
                let mut lap = T::zero();
                for l in 0..n {
                    let a = analysis[l * n + k];
                    d = d + dvander[j * n + l] * a;
                    let ev = T::from_usize_lossy(l * (l + 1));
                    lap = lap - ev * vander[j * n + l] * a;
                }
                diff[j * n + k] = d;
                laplacian[j * n + k] = lap;
            }
        }
        // constants lie exactly in the kernel of both operators
        for j in 0..n {
            let dsum: T = (0..n).map(|k| diff[j * n + k]).sum();
            let lsum: T = (0..n).map(|k| laplacian[j * n + k]).sum();
            diff[j * n + j] = diff[j * n + j] - dsum;
            laplacian[j * n + j] = laplacian[j * n + j] - lsum;
        }
        LegendreGrid {
            n,
            x,
            w,
            theta,
            vander,
            analysis,
            diff,
            laplacian,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Nodes in `x = cos θ`, ascending.
    pub fn nodes(&self) -> &[T] {
        &self.x
    }

    pub fn weights(&self) -> &[T] {
        &self.w
    }

    /// Polar angles of the nodes (descending, since `x` ascends).
    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    /// `∫_{-1}^{1} f dx` by quadrature.
    pub fn integrate(&self, f: &[T]) -> T {
        f.iter().zip(&self.w).map(|(a, b)| *a * *b).sum()
    }

    /// Legendre coefficients `c_l`, `f = Σ c_l P_l`.
    pub fn coefficients(&self, f: &[T]) -> Vec<T> {
        let n = self.n;
        (0..n)
            .map(|l| (0..n).map(|k| self.analysis[l * n + k] * f[k]).sum())
            .collect()
    }

    /// Nodal values of `Σ c_l P_l`.
    pub fn synthesize(&self, c: &[T]) -> Vec<T> {
        let n = self.n;
        (0..n)
            .map(|j| {
                c.iter()
                    .take(n)
                    .enumerate()
                    .map(|(l, cl)| *cl * self.vander[j * n + l])
                    .sum()
            })
            .collect()
    }

    pub fn differentiate(&self, f: &[T]) -> Vec<T> {
        self.apply(&self.diff, f)
    }

    /// Round-sphere Laplacian `Δ*` of an axisymmetric function.
    pub fn laplacian(&self, f: &[T]) -> Vec<T> {
        self.apply(&self.laplacian, f)
    }

    fn apply(&self, m: &[T], f: &[T]) -> Vec<T> {
        let n = self.n;
        (0..n)
            .map(|j| (0..n).map(|k| m[j * n + k] * f[k]).sum())
            .collect()
    }
}

/// Evaluates `Σ c_l P_l(x)` at an arbitrary point.
pub fn eval_series<T: Real>(c: &[T], x: T) -> T {
    if c.is_empty() {
        return T::zero();
    }
    let (mut p0, mut p1) = (T::one(), x);
    let mut acc = c[0];
    if c.len() > 1 {
        acc = acc + c[1] * x;
    }
    for (l, cl) in c.iter().enumerate().skip(2) {
        let lm1 = T::from_usize_lossy(l - 1);
        let p2 = ((lm1 + lm1 + T::one()) * x * p1 - lm1 * p0) / (lm1 + T::one());
        acc = acc + *cl * p2;
        p0 = p1;
        p1 = p2;
    }
    acc
}

/// Value and derivative of `Σ c_l P_l` at `x`.
pub fn eval_series_with_derivative<T: Real>(c: &[T], x: T) -> (T, T) {
    if c.is_empty() {
        return (T::zero(), T::zero());
    }
    let (p, dp) = legendre_values_and_derivatives(x, c.len() - 1);
    let v = c.iter().zip(&p).map(|(a, b)| *a * *b).sum();
    let d = c.iter().zip(&dp).map(|(a, b)| *a * *b).sum();
    (v, d)
}

/// `∫_{-1}^{x} Σ c_l P_l(y) dy`.
pub fn integrate_series<T: Real>(c: &[T], x: T) -> T {
    if c.is_empty() {
        return T::zero();
    }
    let p = legendre_values(x, c.len());
    let mut acc = c[0] * (x + T::one());
    for l in 1..c.len() {
        acc = acc + c[l] * (p[l + 1] - p[l - 1]) / T::from_usize_lossy(2 * l + 1);
    }
    acc
}
