//! Exact complex-rational constants.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complex number `re + i·im` with arbitrary-precision rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        CRational {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        CRational::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        CRational::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn i() -> Self {
        CRational {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn zero() -> Self {
        CRational::int(0)
    }

    pub fn one() -> Self {
        CRational::int(1)
    }

    /// Exact conversion of a finite binary64 value.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(CRational::real)
    }

    pub fn from_complex64(z: Complex64) -> Option<Self> {
        Some(CRational {
            re: BigRational::from_float(z.re)?,
            im: BigRational::from_float(z.im)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Real and strictly positive.
    pub fn is_positive_real(&self) -> bool {
        self.im.is_zero() && self.re.is_positive()
    }

    pub fn conj(&self) -> Self {
        CRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(CRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Integer power; `None` for `0^k` with `k < 0`.
    pub fn powi(&self, k: &BigInt) -> Option<Self> {
        let mut exp = k.abs().to_u64()?;
        let mut base = if k.is_negative() { self.recip()? } else { self.clone() };
        let mut acc = CRational::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        Some(acc)
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Default for CRational {
    fn default() -> Self {
        CRational::zero()
    }
}

impl Add for &CRational {
    type Output = CRational;
    fn add(self, rhs: &CRational) -> CRational {
        CRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &CRational {
    type Output = CRational;
    fn sub(self, rhs: &CRational) -> CRational {
        CRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &CRational {
    type Output = CRational;
    fn mul(self, rhs: &CRational) -> CRational {
        CRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &CRational {
    type Output = CRational;
    fn neg(self) -> CRational {
        CRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

pub(crate) fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() && !r.is_negative() {
        write!(f, "{}", r.numer())
    } else if r.is_integer() {
        write!(f, "({})", r.numer())
    } else {
        write!(f, "({}/{})", r.numer(), r.denom())
    }
}

impl fmt::Display for CRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        write!(f, "(")?;
        if !self.re.is_zero() {
            fmt_rational(&self.re, f)?;
            write!(f, " + ")?;
        }
        if self.im.is_one() {
            write!(f, "i")?;
        } else {
            fmt_rational(&self.im, f)?;
            write!(f, "*i")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_arithmetic_is_exact() {
        let a = CRational::new(
            BigRational::new(1.into(), 3.into()),
            BigRational::new(2.into(), 1.into()),
        );
        let inv = a.recip().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(CRational::i().powi(&BigInt::from(4)).unwrap(), CRational::one());
        assert_eq!(CRational::i().powi(&BigInt::from(-1)).unwrap(), -&CRational::i());
        assert!(CRational::zero().powi(&BigInt::from(-2)).is_none());
    }

    #[test]
    fn from_f64_is_exact() {
        let r = CRational::from_f64(0.1).unwrap();
        assert_eq!(r.to_complex64().re, 0.1);
        assert!(CRational::from_f64(f64::NAN).is_none());
    }
}
