//! Complex scalars at double or user-chosen binary precision.
//!
//! Numerical routines are generic over [`Scalar`]. Constants are created
//! "like" an existing value so they inherit its precision, which keeps the
//! precision a property of the data rather than a global setting.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rug::{Complex, Float, Integer};
use serde::{Deserialize, Serialize};

use crate::summation;

/// Working precision of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Precision {
    Double,
    Bits(u32),
}

impl Precision {
    /// 53 bits or fewer means native doubles.
    pub fn from_bits(bits: u32) -> Self {
        if bits <= 53 {
            Precision::Double
        } else {
            Precision::Bits(bits)
        }
    }

    pub fn bits(&self) -> u32 {
        match self {
            Precision::Double => 53,
            Precision::Bits(b) => *b,
        }
    }
}

pub trait Scalar:
    Clone
    + Send
    + Sync
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn like_c64(&self, z: Complex64) -> Self;
    fn like_int(&self, v: &BigInt) -> Self;
    /// Real `ln q`.
    fn ln_of(&self, q: u64) -> Self;
    fn exp(self) -> Self;
    fn modulus(&self) -> f64;
    /// `ln |z|`, accurate even when `|z|` is outside the double range.
    fn ln_modulus(&self) -> f64;
    fn to_c64(&self) -> Complex64;
    fn is_zero(&self) -> bool;
    /// Largest `ln |z|` representable at this precision.
    fn ln_max(&self) -> f64;
    /// Sum in iteration order.
    fn sum_all<I: IntoIterator<Item = Self>>(zero: Self, items: I) -> Self;

    fn zero_like(&self) -> Self {
        self.like_c64(Complex64::new(0.0, 0.0))
    }

    fn one_like(&self) -> Self {
        self.like_c64(Complex64::new(1.0, 0.0))
    }
}

impl Scalar for Complex64 {
    fn like_c64(&self, z: Complex64) -> Self {
        z
    }

    fn like_int(&self, v: &BigInt) -> Self {
        Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn ln_of(&self, q: u64) -> Self {
        Complex64::new((q as f64).ln(), 0.0)
    }

    fn exp(self) -> Self {
        Complex64::exp(self)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn ln_modulus(&self) -> f64 {
        self.norm().ln()
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn ln_max(&self) -> f64 {
        f64::MAX.ln()
    }

    fn sum_all<I: IntoIterator<Item = Self>>(_zero: Self, items: I) -> Self {
        summation::sum_complex(items)
    }
}

/// Arbitrary-precision complex number (MPC/MPFR via `rug`).
#[derive(Clone, Debug, PartialEq)]
pub struct MpComplex(pub Complex);

impl MpComplex {
    pub fn new(z: Complex64, bits: u32) -> Self {
        MpComplex(Complex::with_val(bits, (z.re, z.im)))
    }

    pub fn bits(&self) -> u32 {
        self.0.prec().0
    }
}

macro_rules! mp_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for MpComplex {
            type Output = MpComplex;
            fn $method(self, rhs: MpComplex) -> MpComplex {
                MpComplex($tr::$method(self.0, rhs.0))
            }
        }
    };
}

mp_binop!(Add, add);
mp_binop!(Sub, sub);
mp_binop!(Mul, mul);
mp_binop!(Div, div);

impl Neg for MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex(-self.0)
    }
}

impl Scalar for MpComplex {
    fn like_c64(&self, z: Complex64) -> Self {
        MpComplex::new(z, self.bits())
    }

    fn like_int(&self, v: &BigInt) -> Self {
        let bits = self.bits();
        let re = match v.to_i64() {
            Some(x) => Float::with_val(bits, x),
            None => {
                let int = Integer::from_str_radix(&v.to_str_radix(16), 16)
                    .expect("hex digits of a BigInt");
                Float::with_val(bits, int)
            }
        };
        MpComplex(Complex::with_val(bits, (re, 0)))
    }

    fn ln_of(&self, q: u64) -> Self {
        let bits = self.bits();
        let l = Float::with_val(bits, q).ln();
        MpComplex(Complex::with_val(bits, (l, 0)))
    }

    fn exp(self) -> Self {
        MpComplex(self.0.exp())
    }

    fn modulus(&self) -> f64 {
        Float::with_val(self.bits(), self.0.abs_ref()).to_f64()
    }

    fn ln_modulus(&self) -> f64 {
        Float::with_val(self.bits(), self.0.abs_ref()).ln().to_f64()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.0.real().to_f64(), self.0.imag().to_f64())
    }

    fn is_zero(&self) -> bool {
        self.0.real().is_zero() && self.0.imag().is_zero()
    }

    fn ln_max(&self) -> f64 {
        f64::from(rug::float::exp_max()) * std::f64::consts::LN_2
    }

    fn sum_all<I: IntoIterator<Item = Self>>(zero: Self, items: I) -> Self {
        items.into_iter().fold(zero, |acc, x| acc + x)
    }
}
