//! Fourth-order finite differences on uniform grids, with one-sided
//! stencils at the two ends of the grid.

use crate::error::{Error, Result};
use crate::scalar::Real;

// every stencil sums to zero, so differences against a reference sample
// make constants differentiate to exactly zero
fn combo<T: Real>(f: &[T], start: usize, c: &[f64]) -> T {
    let reference = f[start];
    c.iter()
        .enumerate()
        .map(|(k, ck)| T::lit(*ck) * (f[start + k] - reference))
        .sum()
}

/// First derivative at sample `i`.
pub fn first_at<T: Real>(f: &[T], h: T, i: usize) -> T {
    let n = f.len();
    let twelve_h = T::lit(12.0) * h;
    if i >= 2 && i + 2 < n {
        return combo(f, i - 2, &[1.0, -8.0, 0.0, 8.0, -1.0]) / twelve_h;
    }
    let fwd0 = [-25.0, 48.0, -36.0, 16.0, -3.0];
    let fwd1 = [-3.0, -10.0, 18.0, -6.0, 1.0];
    match i {
        0 => combo(f, 0, &fwd0) / twelve_h,
        1 => combo(f, 0, &fwd1) / twelve_h,
        _ => {
            let back = |c: &[f64; 5]| {
                let r: Vec<f64> = c.iter().rev().map(|x| -x).collect();
                combo(f, n - 5, &r) / twelve_h
            };
            if i == n - 1 {
                back(&fwd0)
            } else {
                back(&fwd1)
            }
        }
    }
}

/// Second derivative at sample `i`.
pub fn second_at<T: Real>(f: &[T], h: T, i: usize) -> T {
    let n = f.len();
    let d = T::lit(12.0) * h * h;
    if i >= 2 && i + 2 < n {
        return combo(f, i - 2, &[-1.0, 16.0, -30.0, 16.0, -1.0]) / d;
    }
    let fwd0 = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
    let fwd1 = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
    match i {
        0 => combo(f, 0, &fwd0) / d,
        1 => combo(f, 0, &fwd1) / d,
        _ => {
            let c = if i == n - 1 { fwd0 } else { fwd1 };
            let r: Vec<f64> = c.iter().rev().copied().collect();
            combo(f, n - 6, &r) / d
        }
    }
}

pub fn first<T: Real>(f: &[T], h: T) -> Result<Vec<T>> {
    require(f.len(), 5)?;
    Ok((0..f.len()).map(|i| first_at(f, h, i)).collect())
}

pub fn second<T: Real>(f: &[T], h: T) -> Result<Vec<T>> {
    require(f.len(), 6)?;
    Ok((0..f.len()).map(|i| second_at(f, h, i)).collect())
}

/// True when sample `i` is evaluated with a one-sided stencil.
pub fn is_one_sided(n: usize, i: usize) -> bool {
    i < 2 || i + 2 >= n
}

fn require(got: usize, need: usize) -> Result<()> {
    if got < need {
        Err(Error::TooFewSamples { need, got })
    } else {
        Ok(())
    }
}
