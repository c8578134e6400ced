//! Small dense symmetric linear algebra: Cholesky, cyclic Jacobi
//! eigen-decomposition and the generalized problem `A v = λ B v`.
//!
//! Matrices are row-major `n × n` slices. Sizes stay in the tens, so the
//! cubic-cost Jacobi sweep is cheap and gives orthogonal eigenvectors to
//! working precision.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Lower Cholesky factor `L` with `B = L Lᵀ`.
pub fn cholesky<T: Real>(b: &[T], n: usize) -> Result<Vec<T>> {
    let mut l = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = b[i * n + j];
            for k in 0..j {
                s = s - l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= T::zero() {
                    return Err(Error::Numerical(format!(
                        "matrix not positive definite at pivot {i}"
                    )));
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// Eigenvalues (ascending) and eigenvectors (columns of the returned
/// row-major matrix) of a symmetric matrix.
pub fn symmetric_eigen<T: Real>(a: &[T], n: usize) -> Result<(Vec<T>, Vec<T>)> {
    let mut m = a.to_vec();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let frobenius = m.iter().map(|x| *x * *x).sum::<T>().sqrt().max(T::min_positive_value());
    let thresh = T::epsilon() * frobenius * T::from_usize_lossy(n).sqrt();
    let mut converged = false;
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |j| *j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum();
        if off.sqrt() <= thresh {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() <= T::min_positive_value() {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (apq + apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NotConverged("Jacobi eigen-sweep".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|i, j| m[i * n + i].partial_cmp(&m[j * n + j]).unwrap_or(std::cmp::Ordering::Equal));
    let vals = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vecs = vec![T::zero(); n * n];
    for (col, &src) in order.iter().enumerate() {
        for k in 0..n {
            vecs[k * n + col] = v[k * n + src];
        }
    }
    Ok((vals, vecs))
}

/// Generalized symmetric-definite problem `A v = λ B v`; eigenvectors are
/// `B`-orthonormal columns.
pub fn generalized_eigen<T: Real>(a: &[T], b: &[T], n: usize) -> Result<(Vec<T>, Vec<T>)> {
    let l = cholesky(b, n)?;
    // C = L⁻¹ A L⁻ᵀ
    let mut y = vec![T::zero(); n * n];
    for col in 0..n {
        let rhs: Vec<T> = (0..n).map(|i| a[i * n + col]).collect();
        let z = forward_solve(&l, n, &rhs);
        for i in 0..n {
            y[i * n + col] = z[i];
        }
    }
    let mut c = vec![T::zero(); n * n];
    for row in 0..n {
        let rhs: Vec<T> = (0..n).map(|j| y[row * n + j]).collect();
        let z = forward_solve(&l, n, &rhs);
        for j in 0..n {
            c[row * n + j] = z[j];
        }
    }
    for i in 0..n {
        for j in 0..i {
            let avg = (c[i * n + j] + c[j * n + i]) * T::lit(0.5);
            c[i * n + j] = avg;
            c[j * n + i] = avg;
        }
    }
    let (vals, w) = symmetric_eigen(&c, n)?;
    let mut vecs = vec![T::zero(); n * n];
    for col in 0..n {
        let rhs: Vec<T> = (0..n).map(|i| w[i * n + col]).collect();
        let z = backward_solve_transpose(&l, n, &rhs);
        for i in 0..n {
            vecs[i * n + col] = z[i];
        }
    }
    Ok((vals, vecs))
}

fn forward_solve<T: Real>(l: &[T], n: usize, b: &[T]) -> Vec<T> {
    let mut x = vec![T::zero(); n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s = s - l[i * n + k] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    x
}

fn backward_solve_transpose<T: Real>(l: &[T], n: usize, b: &[T]) -> Vec<T> {
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s = s - l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_recovers_known_spectrum() {
        let a = [2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0];
        let (vals, vecs) = symmetric_eigen(&a, 3).unwrap();
        let s2 = 2f64.sqrt();
        let expect = [2.0 - s2, 2.0, 2.0 + s2];
        for (v, e) in vals.iter().zip(expect) {
            assert!((v - e).abs() < 1e-14);
        }
        for col in 0..3 {
            for row in 0..3 {
                let av: f64 = (0..3).map(|k| a[row * 3 + k] * vecs[k * 3 + col]).sum();
                assert!((av - vals[col] * vecs[row * 3 + col]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn generalized_problem_is_b_orthonormal() {
        let a: [f64; 4] = [4.0, 1.0, 1.0, 3.0];
        let b: [f64; 4] = [2.0, 0.5, 0.5, 1.0];
        let (vals, vecs) = generalized_eigen(&a, &b, 2).unwrap();
        for col in 0..2 {
            let v = [vecs[col], vecs[2 + col]];
            let bv = [b[0] * v[0] + b[1] * v[1], b[2] * v[0] + b[3] * v[1]];
            let av = [a[0] * v[0] + a[1] * v[1], a[2] * v[0] + a[3] * v[1]];
            assert!((av[0] - vals[col] * bv[0]).abs() < 1e-13);
            assert!((av[1] - vals[col] * bv[1]).abs() < 1e-13);
            assert!((v[0] * bv[0] + v[1] * bv[1] - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        assert!(cholesky(&[1.0, 2.0, 2.0, 1.0], 2).is_err());
    }
}
