//! Exact Gaussian-rational scalars: complex numbers with arbitrary-precision
//! rational real and imaginary parts.
//!
//! Exactness is what makes the "Wronskian identically zero?" question
//! decidable rather than a floating-point guess, so these scalars underlie
//! every exact-polynomial computation in the crate.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// A complex number with exact rational components.
///
/// `BigRational` keeps itself in lowest terms with a positive denominator,
/// so every arithmetic result is automatically normalized.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    /// Builds `re_num/re_den + (im_num/im_den) i` from machine integers.
    pub fn from_ratios(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        Self::from_ratios(re, 1, im, 1)
    }

    pub fn zero() -> Self {
        Self::from_integers(0, 0)
    }

    pub fn one() -> Self {
        Self::from_integers(1, 0)
    }

    pub fn i() -> Self {
        Self::from_integers(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |self|^2 as an exact rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero, like integer division.
    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "inverse of exact zero");
        Self {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    /// Nearest f64 complex value.
    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Conversion to f64 along with the exact rounding error
    /// `|self - float(self)|` (itself rounded, which is harmless at this
    /// magnitude).
    pub fn to_complex64_with_error(&self) -> (Complex64, f64) {
        let z = self.to_complex64();
        let dre = &self.re - f64_to_rational(z.re);
        let dim = &self.im - f64_to_rational(z.im);
        let err2 = &dre * &dre + &dim * &dim;
        (z, rational_to_f64(&err2).sqrt())
    }

    /// Parses the `"num/den"` form used by the JSON encoding; plain integers
    /// are accepted as `num/1`.
    pub fn parse_rational(s: &str) -> Option<BigRational> {
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().ok()?;
                let d: BigInt = d.trim().parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n, d))
            }
            None => {
                let n: BigInt = s.parse().ok()?;
                Some(BigRational::from_integer(n))
            }
        }
    }

    /// Formats a rational as `"num/den"` (lowest terms, positive denominator).
    pub fn format_rational(r: &BigRational) -> String {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// f64 -> exact rational, exact for finite floats.
pub fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Rational -> nearest f64, safe for numerators/denominators beyond f64 range.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Fall back to scaling by a power of two so both parts fit.
    let bits_n = r.numer().bits() as i64;
    let bits_d = r.denom().bits() as i64;
    let shift = (bits_n.max(bits_d) - 900).max(0) as u64;
    let n = r.numer() >> shift;
    let d = r.denom() >> shift;
    let nf = n.to_f64().unwrap_or(if r.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    });
    let df = d.to_f64().unwrap_or(f64::INFINITY);
    nf / df
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", self.re, self.im)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

impl Add for &ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &ExactComplex {
    type Output = ExactComplex;
    fn div(self, rhs: &ExactComplex) -> ExactComplex {
        self * &rhs.inv()
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactComplex {
            type Output = ExactComplex;
            fn $method(self, rhs: ExactComplex) -> ExactComplex {
                $trait::$method(&self, &rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        -&self
    }
}

impl AddAssign<&ExactComplex> for ExactComplex {
    fn add_assign(&mut self, rhs: &ExactComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&ExactComplex> for ExactComplex {
    fn sub_assign(&mut self, rhs: &ExactComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&ExactComplex> for ExactComplex {
    fn mul_assign(&mut self, rhs: &ExactComplex) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_exact(rng: &mut ChaCha12Rng) -> ExactComplex {
        ExactComplex::from_ratios(
            rng.gen_range(-9..=9),
            rng.gen_range(1..=7),
            rng.gen_range(-9..=9),
            rng.gen_range(1..=7),
        )
    }

    #[test]
    fn ring_axioms_randomized() {
        let mut rng = ChaCha12Rng::seed_from_u64(0xE0A1);
        for _ in 0..1000 {
            let a = random_exact(&mut rng);
            let b = random_exact(&mut rng);
            let c = random_exact(&mut rng);
            assert_eq!(&a + &b, &b + &a);
            assert_eq!(&a * &b, &b * &a);
            assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        }
    }

    #[test]
    fn normalization_invariant() {
        let x = ExactComplex::from_ratios(2, -4, 6, 9);
        assert_eq!(x.re, BigRational::new(BigInt::from(-1), BigInt::from(2)));
        assert!(x.re.denom().is_positive() && x.im.denom().is_positive());
        assert_eq!(ExactComplex::format_rational(&x.im), "2/3");
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha12Rng::seed_from_u64(0xE0A2);
        for _ in 0..100 {
            let a = random_exact(&mut rng);
            if a.is_zero() {
                continue;
            }
            assert_eq!(&a * &a.inv(), ExactComplex::one());
        }
    }

    #[test]
    fn rational_parsing() {
        let r = ExactComplex::parse_rational("-3/6").unwrap();
        assert_eq!(ExactComplex::format_rational(&r), "-1/2");
        assert_eq!(
            ExactComplex::parse_rational("5").unwrap(),
            BigRational::from_integer(BigInt::from(5))
        );
        assert!(ExactComplex::parse_rational("1/0").is_none());
        assert!(ExactComplex::parse_rational("x").is_none());
    }

    #[test]
    fn float_conversion_error_reported() {
        let third = ExactComplex::from_ratios(1, 3, 0, 1);
        let (z, err) = third.to_complex64_with_error();
        assert!((z.re - 1.0 / 3.0).abs() < 1e-18);
        assert!(err > 0.0 && err < 1e-16);
        let exact = ExactComplex::from_ratios(1, 4, -3, 8);
        let (_, err) = exact.to_complex64_with_error();
        assert_eq!(err, 0.0);
    }
}
