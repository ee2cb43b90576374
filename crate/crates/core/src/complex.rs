//! Gaussian rationals: the exact coefficient field of every series in the crate.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a rational the way the expression language reads it back: `3`, `-1/2`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A complex number `re + i·im` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactComplex {
    pub re: Rational,
    pub im: Rational,
}

impl ExactComplex {
    pub fn new(re: Rational, im: Rational) -> Self {
        ExactComplex { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ExactComplex { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(rat(num, den))
    }

    pub fn i() -> Self {
        ExactComplex { re: Rational::zero(), im: Rational::one() }
    }

    pub fn conj(&self) -> Self {
        ExactComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, r: &Rational) -> Self {
        ExactComplex { re: &self.re * r, im: &self.im * r }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(ExactComplex { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn pow(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = ExactComplex::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }

    /// `(negative, body)` where the body never starts with a minus sign when
    /// `negative` is set. Used by every renderer so output reparses.
    pub(crate) fn signed_parts(&self) -> (bool, String) {
        let re0 = self.re.is_zero();
        let im0 = self.im.is_zero();
        if im0 {
            return (self.re.is_negative(), fmt_rational(&self.re.abs()));
        }
        if re0 {
            let a = self.im.abs();
            let body = if a.is_one() { "I".to_string() } else { format!("{}*I", fmt_rational(&a)) };
            return (self.im.is_negative(), body);
        }
        let a = self.im.abs();
        let imag = if a.is_one() { "I".to_string() } else { format!("{}*I", fmt_rational(&a)) };
        let sign = if self.im.is_negative() { "-" } else { "+" };
        (false, format!("({}{}{})", fmt_rational(&self.re), sign, imag))
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, body) = self.signed_parts();
        if neg {
            write!(f, "-{body}")
        } else {
            write!(f, "{body}")
        }
    }
}

impl From<Rational> for ExactComplex {
    fn from(r: Rational) -> Self {
        ExactComplex::real(r)
    }
}

impl From<i64> for ExactComplex {
    fn from(n: i64) -> Self {
        ExactComplex::from_int(n)
    }
}

impl Zero for ExactComplex {
    fn zero() -> Self {
        ExactComplex { re: Rational::zero(), im: Rational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for ExactComplex {
    fn one() -> Self {
        ExactComplex::from_int(1)
    }
}

impl<'a> Add<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn add(self, o: &ExactComplex) -> ExactComplex {
        ExactComplex { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn sub(self, o: &ExactComplex) -> ExactComplex {
        ExactComplex { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn mul(self, o: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex { re: -&self.re, im: -&self.im }
    }
}

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, o: ExactComplex) -> ExactComplex {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, o: &ExactComplex) -> ExactComplex {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Div for ExactComplex {
    type Output = ExactComplex;
    /// Panics on division by zero, like the rational division it wraps.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: ExactComplex) -> ExactComplex {
        let inv = o.inv().expect("division by zero");
        &self * &inv
    }
}

impl AddAssign<&ExactComplex> for ExactComplex {
    fn add_assign(&mut self, o: &ExactComplex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&ExactComplex> for ExactComplex {
    fn sub_assign(&mut self, o: &ExactComplex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&ExactComplex> for ExactComplex {
    fn mul_assign(&mut self, o: &ExactComplex) {
        *self = &*self * o;
    }
}
