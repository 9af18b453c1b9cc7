//! Exact complex rationals `re + i·im` with arbitrary-precision parts.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element of ℚ(i). Both parts are kept in lowest terms with positive
/// denominators (guaranteed by `BigRational`).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `num/den` as a real Gaussian rational. Panics on a zero denominator.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    /// `(re_num/re_den) + i·(im_num/im_den)`.
    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::new(
            BigRational::new(re.0.into(), re.1.into()),
            BigRational::new(im.0.into(), im.1.into()),
        )
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `|a|²`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    /// Canonical `p/q` string (or `p` when `q = 1`) for one rational part.
    pub fn fmt_part(r: &BigRational) -> String {
        if r.denom().is_one() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }

    /// Parse a part printed by [`GaussianRational::fmt_part`].
    pub fn parse_part(s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = || Error::Parse(format!("malformed rational `{s}`"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
        }
    }
}

/// Nearest `f64` to a rational (for advisory floating-point paths).
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division when the parts overflow f64.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    /// Panics on division by zero; use [`GaussianRational::inv`] to handle it.
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self * &rhs.inv().expect("division by zero Gaussian rational")
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for GaussianRational {
    /// Prints `a`, `b*i`, or `a + b*i` using exact rational parts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = Self::fmt_part(&self.re);
        let im_abs = Self::fmt_part(&self.im.abs());
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{re}"),
            (true, false) => {
                let sign = if self.im.is_negative() { "-" } else { "" };
                if self.im.abs().is_one() {
                    write!(f, "{sign}i")
                } else {
                    write!(f, "{sign}{im_abs}*i")
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                if self.im.abs().is_one() {
                    write!(f, "({re} {sign} i)")
                } else {
                    write!(f, "({re} {sign} {im_abs}*i)")
                }
            }
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        GaussianRational::from_parts(re, im)
    }

    #[test]
    fn parts_are_reduced() {
        let a = g((6, -4), (0, 5));
        assert_eq!(a.re().numer(), &BigInt::from(-3));
        assert_eq!(a.re().denom(), &BigInt::from(2));
        assert!(a.is_real());
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_integer(-1));
    }

    #[test]
    fn inverse_round_trip() {
        let a = g((3, 7), (-2, 5));
        let b = a.inv().unwrap();
        assert_eq!(&a * &b, GaussianRational::one());
        assert!(GaussianRational::zero().inv().is_err());
    }

    #[test]
    fn one_over_two_i() {
        // 1/(2i) = -i/2
        let two_i = g((0, 1), (2, 1));
        assert_eq!(two_i.inv().unwrap(), g((0, 1), (-1, 2)));
    }

    #[test]
    fn part_strings_round_trip() {
        for (n, d) in [(0, 1), (5, 1), (-7, 3), (12, 18)] {
            let r = BigRational::new(n.into(), d.into());
            let s = GaussianRational::fmt_part(&r);
            assert_eq!(GaussianRational::parse_part(&s).unwrap(), r);
        }
        assert!(GaussianRational::parse_part("1/0").is_err());
        assert!(GaussianRational::parse_part("x").is_err());
    }

    #[test]
    fn display() {
        assert_eq!(g((1, 2), (0, 1)).to_string(), "1/2");
        assert_eq!(g((0, 1), (-1, 1)).to_string(), "-i");
        assert_eq!(g((1, 1), (2, 3)).to_string(), "(1 + 2/3*i)");
    }
}
