//! Double-double scalar for the precision-bound identity checks.

use std::fmt;
use std::iter::Sum;
use std::num::FpCategory;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use ahext_core::Real;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumCast, One, ToPrimitive, Zero};
use twofloat::TwoFloat;

#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct Dd(pub TwoFloat);

impl Dd {
    pub fn hi(self) -> f64 {
        self.0.hi()
    }
}

macro_rules! binop {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Dd {
            type Output = Dd;
            #[inline]
            fn $m(self, rhs: Dd) -> Dd {
                Dd(self.0.$m(rhs.0))
            }
        }
    )*};
}
binop!(Add add, Sub sub, Mul mul, Div div, Rem rem);

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

impl Sum for Dd {
    fn sum<I: Iterator<Item = Dd>>(iter: I) -> Dd {
        iter.fold(Dd::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::LowerExp for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerExp::fmt(&self.0, f)
    }
}

impl Zero for Dd {
    fn zero() -> Dd {
        Dd(TwoFloat::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Dd {
    fn one() -> Dd {
        Dd(TwoFloat::one())
    }
}

impl Num for Dd {
    type FromStrRadixErr = <TwoFloat as Num>::FromStrRadixErr;
    fn from_str_radix(s: &str, radix: u32) -> Result<Dd, Self::FromStrRadixErr> {
        TwoFloat::from_str_radix(s, radix).map(Dd)
    }
}

impl ToPrimitive for Dd {
    fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }
    fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
    fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }
}

impl FromPrimitive for Dd {
    fn from_i64(n: i64) -> Option<Dd> {
        TwoFloat::from_i64(n).map(Dd)
    }
    fn from_u64(n: u64) -> Option<Dd> {
        TwoFloat::from_u64(n).map(Dd)
    }
    fn from_f64(x: f64) -> Option<Dd> {
        Some(Dd(<TwoFloat as From<f64>>::from(x)))
    }
}

impl NumCast for Dd {
    fn from<N: ToPrimitive>(n: N) -> Option<Dd> {
        <TwoFloat as NumCast>::from(n).map(Dd)
    }
}

macro_rules! consts {
    ($($c:ident),*) => {
        impl FloatConst for Dd {
            $(fn $c() -> Dd { Dd(TwoFloat::$c()) })*
        }
    };
}
consts!(E, FRAC_1_PI, FRAC_1_SQRT_2, FRAC_2_PI, FRAC_2_SQRT_PI, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, LN_10, LN_2, LOG10_E, LOG2_E, PI, SQRT_2);

macro_rules! nullary {
    ($($m:ident),*) => {$(
        fn $m() -> Dd { Dd(<TwoFloat as Float>::$m()) }
    )*};
}
macro_rules! unary {
    ($($m:ident),*) => {$(
        fn $m(self) -> Dd { Dd(<TwoFloat as Float>::$m(self.0)) }
    )*};
}
macro_rules! binary {
    ($($m:ident),*) => {$(
        fn $m(self, other: Dd) -> Dd { Dd(<TwoFloat as Float>::$m(self.0, other.0)) }
    )*};
}
macro_rules! predicate {
    ($($m:ident),*) => {$(
        fn $m(self) -> bool { <TwoFloat as Float>::$m(self.0) }
    )*};
}

impl Float for Dd {
    nullary!(nan, infinity, neg_infinity, neg_zero, min_value, min_positive_value, max_value, epsilon);
    unary!(
        floor, ceil, round, trunc, fract, abs, signum, recip, sqrt, exp, exp2, ln, log2, log10, cbrt, sin, cos, tan,
        asin, acos, atan, exp_m1, ln_1p, sinh, cosh, tanh, asinh, acosh, atanh, to_degrees, to_radians
    );
    binary!(powf, log, max, min, abs_sub, hypot, atan2, copysign);
    predicate!(is_nan, is_infinite, is_finite, is_normal, is_sign_positive, is_sign_negative);

    fn classify(self) -> FpCategory {
        self.0.classify()
    }
    fn mul_add(self, a: Dd, b: Dd) -> Dd {
        self * a + b
    }
    fn powi(self, n: i32) -> Dd {
        Dd(<TwoFloat as Float>::powi(self.0, n))
    }
    fn sin_cos(self) -> (Dd, Dd) {
        (self.sin(), self.cos())
    }
    fn integer_decode(self) -> (u64, i16, i8) {
        Float::integer_decode(self.0.hi())
    }
}

impl Real for Dd {}
