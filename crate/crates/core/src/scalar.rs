//! Exact scalars: arbitrary-precision rationals and Gaussian rationals.

use alloc::format;
use alloc::string::String;
use core::fmt;
use core::ops::{Add, AddAssign, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Builds the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Commutative ring operations used by the generic matrix and polynomial code.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out *= other;
        out
    }

    fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out += other;
        out
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out -= other;
        out
    }
}

impl Ring for i64 {}
impl Ring for Rational {}

/// An exact coefficient field with a conjugation: either `Rational` or `GaussianRational`.
pub trait Coeff: Ring + Eq + core::hash::Hash + fmt::Display + FromStr + for<'a> DivAssign<&'a Self> {
    /// True for the complex field.
    const COMPLEX: bool;

    fn from_rational(r: Rational) -> Self;

    fn conj(&self) -> Self;

    /// `i`, when the field contains it.
    fn imaginary_unit() -> Option<Self>;

    fn re(&self) -> Rational;

    fn im(&self) -> Rational;

    /// `|c|^2`.
    fn norm_sqr(&self) -> Rational {
        let (re, im) = (self.re(), self.im());
        &re * &re + &im * &im
    }

    fn div_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out /= other;
        out
    }

    fn inv(&self) -> Self {
        Self::one().div_ref(self)
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }
}

impl Coeff for Rational {
    const COMPLEX: bool = false;

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn imaginary_unit() -> Option<Self> {
        None
    }

    fn re(&self) -> Rational {
        self.clone()
    }

    fn im(&self) -> Rational {
        Rational::zero()
    }

    fn norm_sqr(&self) -> Rational {
        self * self
    }
}

/// `re + im·i` with rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::zero(), Rational::one())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl From<Rational> for GaussianRational {
    fn from(re: Rational) -> Self {
        GaussianRational::new(re, Rational::zero())
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        GaussianRational::new(Rational::zero(), Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        GaussianRational::new(Rational::one(), Rational::zero())
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += &rhs;
        self
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= &rhs;
        self
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(mut self, rhs: Self) -> Self {
        self *= &rhs;
        self
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl<'a> AddAssign<&'a GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &'a GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> SubAssign<&'a GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &'a GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a> MulAssign<&'a GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &'a GaussianRational) {
        if rhs.im.is_zero() {
            self.re *= &rhs.re;
            self.im *= &rhs.re;
            return;
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        self.re = re;
        self.im = im;
    }
}

impl<'a> DivAssign<&'a GaussianRational> for GaussianRational {
    fn div_assign(&mut self, rhs: &'a GaussianRational) {
        let n = rhs.norm_sqr();
        assert!(!n.is_zero(), "division by zero Gaussian rational");
        *self *= &rhs.conj();
        self.re /= &n;
        self.im /= &n;
    }
}

impl Ring for GaussianRational {}

impl Coeff for GaussianRational {
    const COMPLEX: bool = true;

    fn from_rational(r: Rational) -> Self {
        r.into()
    }

    fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    fn imaginary_unit() -> Option<Self> {
        Some(GaussianRational::i())
    }

    fn re(&self) -> Rational {
        self.re.clone()
    }

    fn im(&self) -> Rational {
        self.im.clone()
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{} i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{} i", self.re, self.im)
        }
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let t = s.trim();
    Rational::from_str(t).map_err(|_| Error::Parse(format!("invalid rational `{s}`")))
}

impl FromStr for GaussianRational {
    type Err = Error;

    /// Accepts `"a+b i"`, `"a-b i"`, `"b i"` and plain rationals.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = t.strip_suffix('i') else {
            return Ok(parse_rational(&t)?.into());
        };
        // split at the last sign that is not the leading character
        let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
        let (re, im) = match split {
            Some(i) => (parse_rational(&body[..i])?, &body[i..]),
            None => (Rational::zero(), body),
        };
        let im = im.strip_prefix('+').unwrap_or(im);
        let im = match im {
            "" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other)?,
        };
        Ok(GaussianRational::new(re, im))
    }
}

/// Nearest `f64` of an exact rational.
pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // very large parts: scale both to a common bit length first
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Exact rational with the same value as a finite `f64`.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn gaussian_round_trip() {
        for s in ["1/2+3/4 i", "0-1 i", "5+0 i", "-2/3-7 i"] {
            let g: GaussianRational = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        let g: GaussianRational = "3".parse().unwrap();
        assert_eq!(g, GaussianRational::from(int(3)));
        let g: GaussianRational = "-i".parse().unwrap();
        assert_eq!(g, -GaussianRational::i());
    }

    #[test]
    fn gaussian_field_ops() {
        let a = GaussianRational::new(rat(1, 2), rat(-3, 4));
        let b = GaussianRational::new(rat(2, 5), int(7));
        let ab = a.mul_ref(&b);
        assert_eq!(ab.norm_sqr(), a.norm_sqr() * b.norm_sqr());
        assert_eq!(ab.div_ref(&b), a);
        assert_eq!(a.conj().conj(), a);
        assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("1/0x").is_err());
        assert!("a+b i".parse::<GaussianRational>().is_err());
    }
}
