//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use ahext_core::ads::{profile_solve, AdSSchwParams};
use ahext_core::geometry::{
    omega_margin, scalar_curvature_warped, AxisymmetricSurfaceMetric, BartnikData, CollarMetric, ProfileCurve,
};
use ahext_core::gluing::{GluedProfile, GluingProblem};
use ahext_core::spectral::LegendreGrid;

pub const NODES: usize = 48;

pub fn grid(n: usize) -> Arc<LegendreGrid<f64>> {
    Arc::new(LegendreGrid::new(n))
}

pub fn round_metric(r0: f64) -> AxisymmetricSurfaceMetric<f64> {
    AxisymmetricSurfaceMetric::round(grid(NODES), r0).unwrap()
}

pub fn legendre_metric(r0: f64, coefficients: &[f64]) -> AxisymmetricSurfaceMetric<f64> {
    AxisymmetricSurfaceMetric::from_legendre(grid(NODES), r0, coefficients).unwrap()
}

pub fn data(r0: f64, coefficients: &[f64], h0: f64) -> BartnikData<f64> {
    BartnikData::new(legendre_metric(r0, coefficients), h0).unwrap()
}

/// `0.1 P₂ + 0.05 P₃`.
pub const P2_P3: [f64; 4] = [0.0, 0.0, 0.1, 0.05];
/// `0.1 P₂`.
pub const P2: [f64; 3] = [0.0, 0.0, 0.1];

pub fn legendre(l: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return p0;
    }
    for k in 1..l {
        let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

pub fn series(c: &[f64], x: f64) -> f64 {
    c.iter().enumerate().map(|(l, c)| c * legendre(l, x)).sum()
}

/// `1 − Δ* φ` for `φ = ln r0 + Σ c_l P_l`, using `Δ* P_l = −l(l+1) P_l`.
pub fn conformal_curvature_factor(c: &[f64], x: f64) -> f64 {
    1.0 + c
        .iter()
        .enumerate()
        .map(|(l, c)| (l * (l + 1)) as f64 * c * legendre(l, x))
        .sum::<f64>()
}

/// Gauss curvature `e^{−2φ}(1 − φ'' − cot θ φ')` by second-order central
/// differences in `θ` with step `h`.
pub fn fd_gauss_curvature(r0: f64, c: &[f64], theta: f64, h: f64) -> f64 {
    let phi = |t: f64| r0.ln() + series(c, t.cos());
    let (m, z, p) = (phi(theta - h), phi(theta), phi(theta + h));
    let d1 = (p - m) / (2.0 * h);
    let d2 = (p - 2.0 * z + m) / (h * h);
    (-2.0 * z).exp() * (1.0 - d2 - d1 / theta.tan())
}

/// Sturm count: eigenvalues of the symmetric tridiagonal `(d, e)` below `x`.
fn count_below(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let denom = if q == 0.0 { f64::EPSILON * (e[i - 1].abs() + 1.0) } else { q };
        q = d[i] - x - e[i - 1] * e[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn kth_eigenvalue(d: &[f64], e: &[f64], k: usize) -> f64 {
    let bound = d
        .iter()
        .enumerate()
        .map(|(i, di)| {
            let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
            let right = if i < e.len() { e[i].abs() } else { 0.0 };
            di.abs() + left + right
        })
        .fold(0.0, f64::max);
    let (mut lo, mut hi) = (-bound, bound);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(d, e, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * (1.0 + hi.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Two smallest eigenvalues of `−Δ_g + K` for `g = e^{2φ} g*`, in `x = cos θ`:
/// `−((1 − x²) u')' + (1 − Δ*φ) u = λ e^{2φ} u`, finite volumes on `cells` cells.
pub fn sturm_liouville_eigenvalues(r0: f64, c: &[f64], cells: usize) -> (f64, f64) {
    let n = cells + 1;
    let h = 2.0 / cells as f64;
    let x: Vec<f64> = (0..n).map(|i| -1.0 + h * i as f64).collect();
    let flux = |i: usize| {
        let xm = -1.0 + h * (i as f64 + 0.5);
        1.0 - xm * xm
    };
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    let mut mass = vec![0.0; n];
    for i in 0..n {
        let vol = if i == 0 || i == n - 1 { 0.5 * h } else { h };
        let left = if i > 0 { flux(i - 1) } else { 0.0 };
        let right = if i < n - 1 { flux(i) } else { 0.0 };
        diag[i] = (left + right) / h + vol * conformal_curvature_factor(c, x[i]);
        mass[i] = vol * (2.0 * (r0.ln() + series(c, x[i]))).exp();
        if i < n - 1 {
            off[i] = -right / h;
        }
    }
    let d: Vec<f64> = (0..n).map(|i| diag[i] / mass[i]).collect();
    let e: Vec<f64> = (0..n - 1).map(|i| off[i] / (mass[i] * mass[i + 1]).sqrt()).collect();
    (kth_eigenvalue(&d, &e, 0), kth_eigenvalue(&d, &e, 1))
}

/// Richardson-extrapolated `(λ₁, λ₂)` from the second-order scheme.
pub fn eigenvalue_oracle(r0: f64, c: &[f64]) -> (f64, f64) {
    let (a1, a2) = sturm_liouville_eigenvalues(r0, c, 4000);
    let (b1, b2) = sturm_liouville_eigenvalues(r0, c, 8000);
    ((4.0 * b1 - a1) / 3.0, (4.0 * b2 - a2) / 3.0)
}

/// Composite 16-point Gauss-Legendre quadrature on `panels` panels.
pub fn quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let (x, w) = ahext_core::spectral::gauss_legendre::<f64>(16);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = a + h * (k as f64 + 0.5);
        for (xi, wi) in x.iter().zip(&w) {
            total += wi * f(mid + 0.5 * h * xi) * 0.5 * h;
        }
    }
    total
}

pub fn ads_lapse_sq(m: f64, b: f64, r: f64) -> f64 {
    1.0 + b * r * r - 2.0 * m / r
}

/// Arclength `∫ dr / √(1 + b r² − 2m/r)` from `r_from` to `r_to`, both
/// outside the horizon.
pub fn ads_arclength(m: f64, b: f64, r_from: f64, r_to: f64) -> f64 {
    quadrature(|r| ads_lapse_sq(m, b, r).powf(-0.5), r_from, r_to, 64)
}

/// Taylor coefficients `u = Σ a_k s^k` of the profile started at the
/// horizon, from `u² u'' = b u³ + m` with `u(0) = r₊`, `u'(0) = 0`.
pub fn horizon_taylor(m: f64, b: f64, r_plus: f64, degree: usize) -> Vec<f64> {
    let mut a = vec![0.0; degree + 1];
    a[0] = r_plus;
    let mul = |p: &[f64], q: &[f64], n: usize| -> f64 { (0..=n).map(|i| p[i] * q[n - i]).sum() };
    // u² u'' − b u³ − m = 0, solved order by order for a[n+2].
    for n in 0..=degree.saturating_sub(2) {
        let mut upp = vec![0.0; degree + 1];
        for k in 0..=degree - 2 {
            upp[k] = a[k + 2] * ((k + 2) * (k + 1)) as f64;
        }
        let mut sq = vec![0.0; degree + 1];
        for k in 0..=degree {
            sq[k] = mul(&a, &a, k);
        }
        let mut cube = vec![0.0; degree + 1];
        for k in 0..=degree {
            cube[k] = mul(&sq, &a, k);
        }
        let mut residual = mul(&sq, &upp, n) - b * cube[n];
        if n == 0 {
            residual -= m;
        }
        // the a[n+2] term in (u² u'')_n is r₊² (n+2)(n+1) a[n+2]
        a[n + 2] -= residual / (r_plus * r_plus * ((n + 2) * (n + 1)) as f64);
    }
    a
}

pub fn eval_poly(a: &[f64], s: f64) -> (f64, f64, f64) {
    let mut v = (0.0, 0.0, 0.0);
    for (k, c) in a.iter().enumerate() {
        v.0 += c * s.powi(k as i32);
        if k >= 1 {
            v.1 += c * k as f64 * s.powi(k as i32 - 1);
        }
        if k >= 2 {
            v.2 += c * (k * (k - 1)) as f64 * s.powi(k as i32 - 2);
        }
    }
    v
}

/// Finite-difference weights for derivatives `0..=order` at `z` on the
/// nodes `xs`.
pub fn fornberg(z: f64, xs: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

type Sym3 = [[f64; 3]; 3];

fn inverse3(g: &Sym3) -> Sym3 {
    let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
        - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            let (c, d) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (g[a][c] * g[b][d] - g[a][d] * g[b][c]) / det;
        }
    }
    inv
}

/// Scalar curvature from a metric and its first and second coordinate
/// derivatives, through the Christoffel symbols.
pub fn ricci_scalar(g: &Sym3, dg: &[Sym3; 3], ddg: &[[Sym3; 3]; 3]) -> f64 {
    let gi = inverse3(g);
    // ∂_m g^{kl}
    let mut dgi = [[[0.0; 3]; 3]; 3];
    for m in 0..3 {
        for k in 0..3 {
            for l in 0..3 {
                let mut s = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        s -= gi[k][a] * dg[m][a][b] * gi[b][l];
                    }
                }
                dgi[m][k][l] = s;
            }
        }
    }
    // Γ^k_ij and ∂_m Γ^k_ij
    let mut gamma = [[[0.0; 3]; 3]; 3];
    let mut dgamma = [[[[0.0; 3]; 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for l in 0..3 {
                    s += 0.5 * gi[k][l] * (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
                }
                gamma[k][i][j] = s;
                for m in 0..3 {
                    let mut d = 0.0;
                    for l in 0..3 {
                        let lower = dg[i][l][j] + dg[j][l][i] - dg[l][i][j];
                        let dlower = ddg[m][i][l][j] + ddg[m][j][l][i] - ddg[m][l][i][j];
                        d += 0.5 * (dgi[m][k][l] * lower + gi[k][l] * dlower);
                    }
                    dgamma[m][k][i][j] = d;
                }
            }
        }
    }
    let mut scalar = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let mut ric = 0.0;
            for k in 0..3 {
                ric += dgamma[k][k][i][j] - dgamma[j][k][i][k];
                for l in 0..3 {
                    ric += gamma[k][k][l] * gamma[l][i][j] - gamma[k][j][l] * gamma[l][i][k];
                }
            }
            scalar += gi[i][j] * ric;
        }
    }
    scalar
}

/// Scalar curvature of `v² dt² + E²(P dx² + Q dϕ²)` at every level `2..n−2`
/// and every label, from the sampled components: fourth-order differences
/// in `t`, Fornberg stencils in `θ = arccos x` (where `P sin²θ` and `Q` are
/// smooth). `P Q = e^{4φ₀}`.
const STENCIL: usize = 13;

pub fn brute_force_collar_curvature(c: &CollarMetric<f64>) -> Vec<(usize, usize, f64)> {
    let path = c.path();
    let nodes: Vec<f64> = path.grid().nodes().iter().map(|x| x.acos()).collect();
    let nx = nodes.len();
    let nt = c.len();
    let dt = c.t_grid()[1] - c.t_grid()[0];
    let phi0 = path.metric(0).phi().to_vec();
    let comps = |i: usize, j: usize| -> [f64; 3] {
        let (e, _, _) = c.warp_at(i);
        let q = path.slice(i).log_q[j].exp();
        let v = c.lapse()[i][j];
        let sin2 = nodes[j].sin().powi(2);
        [v * v, e * e * (4.0 * phi0[j]).exp() * sin2 / q, e * e * q]
    };
    let t1 = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
    let t2 = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
    let mut out = Vec::new();
    for i in 2..nt - 2 {
        for j in 0..nx {
            // centred stencils, continued evenly across the poles
            let half = (STENCIL / 2) as isize;
            let (stencil, xs): (Vec<usize>, Vec<f64>) = (j as isize - half..=j as isize + half)
                .map(|k| {
                    if k < 0 {
                        let m = (-k - 1) as usize;
                        (m, 2.0 * PI - nodes[m])
                    } else if k >= nx as isize {
                        let m = 2 * nx - 1 - k as usize;
                        (m, -nodes[m])
                    } else {
                        (k as usize, nodes[k as usize])
                    }
                })
                .unzip();
            let w = fornberg(nodes[j], &xs, 2);
            // component-wise derivatives: index 0 = t, 1 = θ
            let mut val = [0.0; 3];
            let mut d_t = [0.0; 3];
            let mut d_x = [0.0; 3];
            let mut d_tt = [0.0; 3];
            let mut d_xx = [0.0; 3];
            let mut d_tx = [0.0; 3];
            let here = comps(i, j);
            for a in 0..3 {
                val[a] = here[a];
            }
            for (o, (w1, w2)) in t1.iter().zip(&t2).enumerate() {
                let s = comps(i + o - 2, j);
                for a in 0..3 {
                    d_t[a] += w1 * s[a] / dt;
                    d_tt[a] += w2 * s[a] / (dt * dt);
                }
            }
            for (idx, k) in stencil.iter().enumerate() {
                let s = comps(i, *k);
                for a in 0..3 {
                    d_x[a] += w[1][idx] * s[a];
                    d_xx[a] += w[2][idx] * s[a];
                }
                for (o, w1) in t1.iter().enumerate() {
                    let st = comps(i + o - 2, *k);
                    for a in 0..3 {
                        d_tx[a] += w1 / dt * w[1][idx] * st[a];
                    }
                }
            }
            let diag = |d: [f64; 3]| -> Sym3 {
                let mut m = [[0.0; 3]; 3];
                for a in 0..3 {
                    m[a][a] = d[a];
                }
                m
            };
            let zero = [[0.0; 3]; 3];
            let g = diag(val);
            let dg = [diag(d_t), diag(d_x), zero];
            let ddg = [
                [diag(d_tt), diag(d_tx), zero],
                [diag(d_tx), diag(d_xx), zero],
                [zero, zero, zero],
            ];
            out.push((i, j, ricci_scalar(&g, &dg, &ddg)));
        }
    }
    out
}

pub fn ads_piece(m: f64, b: f64, r_o: f64, length: f64, n: usize) -> ProfileCurve<f64> {
    profile_solve(AdSSchwParams::new(m, b).unwrap(), r_o, length, n).unwrap()
}

/// Two AdS-Schwarzschild pieces with `b < 1` (so `R > −6`), the second
/// starting `0.3` above the end of the first.
fn ads_problem(left: (f64, f64, f64), right: (f64, f64), n: usize) -> GluingProblem<f64> {
    let f1 = ads_piece(left.0, left.1, left.2, 1.0, n);
    let r2 = f1.f()[n - 1] + 0.3;
    let f2 = ads_piece(right.0, right.1, r2, 1.0, n).translated(3.0);
    GluingProblem::new(f1, f2, -6.0).unwrap()
}

fn cone_problem(k1: f64, k2: f64, n: usize) -> GluingProblem<f64> {
    let f1 = ProfileCurve::from_fn(1.0, 2.0, n, 3, |s| (k1 * s, k1, 0.0)).unwrap();
    let start = 2.0 * k1 + 0.2;
    let f2 = ProfileCurve::from_fn(3.0, 4.0, n, 3, |s| (start + k2 * (s - 3.0), k2, 0.0)).unwrap();
    GluingProblem::new(f1, f2, 0.0).unwrap()
}

/// Eight AdS-Schwarzschild pairs at `τ = −6` and two `n = 3` cone pairs at
/// `τ = 0`, each piece on `n` samples.
pub fn problems(n: usize) -> Vec<GluingProblem<f64>> {
    let mut v: Vec<GluingProblem<f64>> = [
        ((1.0, 0.5, 2.0), (1.0, 0.2)),
        ((0.0, 0.8, 1.0), (0.5, 0.3)),
        ((-1.0, 0.5, 0.8), (0.0, 0.1)),
        ((2.0, 0.9, 2.5), (2.0, 0.5)),
        ((0.3, 0.6, 1.0), (0.3, 0.0)),
        ((1.0, 0.95, 1.5), (1.5, 0.5)),
        ((0.0, 0.5, 0.5), (0.0, 0.0)),
        ((0.5, 0.7, 1.2), (0.5, 0.4)),
    ]
    .into_iter()
    .map(|(l, r)| ads_problem(l, r, n))
    .collect();
    v.push(cone_problem(0.99, 0.9, n));
    v.push(cone_problem(0.8, 0.5, n));
    v
}

/// Everything wrong with a glued profile: `Ω − f'' > 0`, `R > τ`, bitwise
/// outer halves, and `f' > 0` when both inputs increase.
pub fn gluing_defects(p: &GluingProblem<f64>, g: &GluedProfile<f64>) -> Vec<String> {
    let mut defects = Vec::new();
    let out = &g.profile;
    let margin = omega_margin(out, p.tau()).unwrap();
    let min = margin.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        defects.push(format!("min(Ω − f'') = {min:e}"));
    }
    if let Some(i) = (0..out.len()).find(|i| !(scalar_curvature_warped(out, *i).unwrap() > p.tau())) {
        defects.push(format!("R ≤ τ at sample {i}"));
    }
    let (f1, f2) = (p.f1(), p.f2());
    let half1 = (f1.len() - 1) / 2;
    let inner_same = (0..=half1).all(|i| {
        out.f()[i] == f1.f()[i]
            && out.f_prime()[i] == f1.f_prime()[i]
            && out.f_double_prime()[i] == f1.f_double_prime()[i]
    });
    let n2 = f2.len();
    let outer_same = (n2 - 1 - (n2 - 1) / 2..n2).all(|k| {
        let i = out.len() - n2 + k;
        out.f()[i] == f2.f()[k] && out.f_prime()[i] == f2.f_prime()[k] && out.f_double_prime()[i] == f2.f_double_prime()[k]
    });
    if !inner_same || !outer_same {
        defects.push("outer halves differ from the inputs".into());
    }
    let increasing = f1.f_prime().iter().chain(f2.f_prime()).all(|d| *d > 0.0);
    if increasing && !(g.mean_convex && out.f_prime().iter().all(|d| *d > 0.0)) {
        defects.push("f' > 0 lost".into());
    }
    defects
}
