//! Monotone slope bridges `ζ` between two profile ends.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Shape of the step `S: [0, 1] → [0, 1]`: `s3(z^q)` or its mirror
/// `1 − s3((1 − z)^q)`, with `s3(y) = 3y² − 2y³` and `q ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape<T> {
    Direct(T),
    Mirrored(T),
}

fn step_integral_direct<T: Real>(q: T, z: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    three * z.powf(two * q + one) / (two * q + one) - two * z.powf(three * q + one) / (three * q + one)
}

fn step_slope_direct<T: Real>(q: T, z: T) -> T {
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    T::lit(6.0) * q * (z.powf(two * q - T::one()) - z.powf(three * q - T::one()))
}

fn s3<T: Real>(y: T) -> T {
    y * y * (T::lit(3.0) - (y + y))
}

/// Exponent `q ≥ 1` with `∫₀¹ s3(z^q) dz = c` for `c ∈ (0, 1/2]`.
fn exponent_for_mean<T: Real>(c: T) -> T {
    let one = T::one();
    let five = T::lit(5.0);
    let a = one - c;
    (five * a + (T::lit(25.0) * a * a + T::lit(24.0) * c * a).sqrt()) / (T::lit(12.0) * c)
}

impl<T: Real> Shape<T> {
    fn value(&self, z: T) -> T {
        match *self {
            Shape::Direct(q) => s3(z.powf(q)),
            Shape::Mirrored(q) => T::one() - s3((T::one() - z).powf(q)),
        }
    }

    fn slope(&self, z: T) -> T {
        match *self {
            Shape::Direct(q) => step_slope_direct(q, z),
            Shape::Mirrored(q) => step_slope_direct(q, T::one() - z),
        }
    }

    /// `∫₀^z S`.
    fn integral(&self, z: T) -> T {
        match *self {
            Shape::Direct(q) => step_integral_direct(q, z),
            Shape::Mirrored(q) => {
                z - (step_integral_direct(q, T::one()) - step_integral_direct(q, T::one() - z))
            }
        }
    }
}

/// `ζ(r) = σ_R + (σ_L − σ_R) S(1 − r/L)` on `r ∈ [0, L]`, measured from the
/// left end of the gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bridge<T> {
    pub slope_left: T,
    pub slope_right: T,
    pub gap: T,
    pub length: T,
    shape: Shape<T>,
}

impl<T: Real> Bridge<T> {
    fn z(&self, r: T) -> T {
        (T::one() - r / self.length).max(T::zero()).min(T::one())
    }

    fn drop(&self) -> T {
        self.slope_left - self.slope_right
    }

    pub fn value(&self, r: T) -> T {
        self.slope_right + self.drop() * self.shape.value(self.z(r))
    }

    /// `ζ'(r) ≤ 0`.
    pub fn derivative(&self, r: T) -> T {
        -self.drop() * self.shape.slope(self.z(r)) / self.length
    }

    /// `∫₀^r ζ`.
    pub fn integral(&self, r: T) -> T {
        let r = r.max(T::zero()).min(self.length);
        let total = self.shape.integral(T::one());
        self.slope_right * r + self.drop() * self.length * (total - self.shape.integral(self.z(r)))
    }

    /// `ζ` at `n` uniform points of `[0, L]`.
    pub fn samples(&self, n: usize) -> Vec<T> {
        let last = T::from_usize_lossy(n.max(2) - 1);
        (0..n)
            .map(|i| self.value(self.length * T::from_usize_lossy(i) / last))
            .collect()
    }
}

/// Builds the bridge with the given end slopes and `∫ζ = gap`. With
/// `spacing`, the length is rounded to a multiple of it.
pub fn build_zeta<T: Real>(
    slope_left: T,
    slope_right: T,
    gap: T,
    spacing: Option<T>,
) -> Result<Bridge<T>> {
    if !(slope_left > T::zero()) || !(slope_right <= slope_left) || !(gap > T::zero()) {
        return Err(Error::Infeasible(format!(
            "bridge needs slope_left > 0, slope_right ≤ slope_left, gap > 0 \
             (got {slope_left}, {slope_right}, {gap})"
        )));
    }
    let half = T::lit(0.5);
    let drop = slope_left - slope_right;
    if drop <= T::tol(1e-14) * slope_left {
        let length = gap / slope_left;
        if let Some(h) = spacing {
            let k = (length / h).round();
            if k < T::one() || (length - k * h).abs() > T::tol(1e-9) * h {
                return Err(Error::Infeasible(format!(
                    "equal slopes force L = {length}, not a multiple of the spacing {h}"
                )));
            }
        }
        return Ok(Bridge {
            slope_left,
            slope_right: slope_left,
            gap,
            length,
            shape: Shape::Direct(T::one()),
        });
    }
    let mean = if slope_left + slope_right > T::zero() {
        (slope_left + slope_right) * half
    } else {
        slope_left * half
    };
    let mut length = gap / mean;
    if let Some(h) = spacing {
        length = ((length / h).round().max(T::one())) * h;
    }
    let fraction = (gap / length - slope_right) / drop;
    let lo = T::tol(1e-6);
    if !(fraction > lo && fraction < T::one() - lo) {
        return Err(Error::Infeasible(format!(
            "bridge of length {length} cannot carry gap {gap} between slopes \
             {slope_left} and {slope_right}"
        )));
    }
    let shape = if fraction <= half {
        Shape::Direct(exponent_for_mean(fraction))
    } else {
        Shape::Mirrored(exponent_for_mean(T::one() - fraction))
    };
    Ok(Bridge {
        slope_left,
        slope_right,
        gap,
        length,
        shape,
    })
}
