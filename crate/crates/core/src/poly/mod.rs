//! Polynomial arithmetic over exact Gaussian-rational scalars and floating
//! complex scalars, with a shared generic core.
//!
//! The exact kind is the substrate for Wronskian determinants computed
//! without rounding; the float kind feeds the numerical machinery
//! (root finding, contours, quadrature).

mod roots;

pub use roots::{exact_roots, float_roots, RootConfig, RootRecord};

use crate::exact::ExactComplex;
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("mixed scalar kinds: {0} vs {1}")]
    KindMismatch(&'static str, &'static str),
    #[error("W \u{2261} 0 means the f_j are linearly dependent; reject")]
    ZeroPolynomial,
    #[error("root finding did not converge: {0}")]
    RootsDiverged(String),
    #[error("invalid polynomial encoding: {0}")]
    BadEncoding(String),
}

/// Coefficient ring shared by the exact and float polynomial kinds.
pub trait Coeff: Clone + PartialEq {
    const KIND: &'static str;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Embeds a small nonnegative integer (derivative factors k·c_k).
    fn from_usize(n: usize) -> Self;
}

impl Coeff for ExactComplex {
    const KIND: &'static str = "exact";
    fn zero() -> Self {
        ExactComplex::zero()
    }
    fn one() -> Self {
        ExactComplex::one()
    }
    fn is_zero(&self) -> bool {
        ExactComplex::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_usize(n: usize) -> Self {
        ExactComplex::from_integers(n as i64, 0)
    }
}

impl Coeff for Complex64 {
    const KIND: &'static str = "float";
    fn zero() -> Self {
        Complex64::ZERO
    }
    fn one() -> Self {
        Complex64::ONE
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_usize(n: usize) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

/// Polynomial with coefficients in ascending degree order.
///
/// The zero polynomial is the empty coefficient list; otherwise the leading
/// coefficient is nonzero. `degree()` returns `None` for the zero polynomial
/// rather than a sentinel integer.
#[derive(Clone, PartialEq)]
pub struct Poly<T: Coeff> {
    coeffs: Vec<T>,
}

pub type ExactPoly = Poly<ExactComplex>;
pub type FloatPoly = Poly<Complex64>;

impl<T: Coeff> Poly<T> {
    /// Builds a polynomial and strips trailing zero coefficients.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    /// The monomial c·z^k.
    pub fn monomial(c: T, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Coefficientwise k·c_k shift; exact for the exact kind.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&T::from_usize(k)))
                .collect(),
        )
    }

    pub fn derivative_n(&self, order: usize) -> Self {
        let mut p = self.clone();
        for _ in 0..order {
            p = p.derivative();
        }
        p
    }

    /// Horner evaluation; exact when both the polynomial and the point are exact.
    pub fn eval(&self, z: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    fn add_impl(&self, rhs: &Self, negate_rhs: bool) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeff(k);
            let b = rhs.coeff(k);
            out.push(if negate_rhs { a.sub(&b) } else { a.add(&b) });
        }
        Self::new(out)
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }
}

impl ExactPoly {
    /// Exact coefficients from machine-integer rationals, ascending degree;
    /// each entry is ((re_num, re_den), (im_num, im_den)).
    pub fn from_integer_coeffs(coeffs: &[(i64, i64)]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&(re, im)| ExactComplex::from_integers(re, im))
                .collect(),
        )
    }

    /// Nearest float polynomial together with the largest coefficientwise
    /// conversion error.
    pub fn to_float_with_error(&self) -> (FloatPoly, f64) {
        let mut worst = 0.0f64;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let (z, err) = c.to_complex64_with_error();
                worst = worst.max(err);
                z
            })
            .collect();
        (FloatPoly::new(coeffs), worst)
    }

    pub fn to_float(&self) -> FloatPoly {
        self.to_float_with_error().0
    }

    pub fn eval_complex64(&self, z: Complex64) -> Complex64 {
        self.to_float().eval(&z)
    }
}

impl FloatPoly {
    pub fn from_f64_coeffs(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = FloatPoly::one();
        for &r in roots {
            p = &p * &FloatPoly::new(vec![-r, Complex64::ONE]);
        }
        p
    }

    /// p(z) and p'(z) in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut v = Complex64::ZERO;
        let mut d = Complex64::ZERO;
        for c in self.coeffs.iter().rev() {
            d = d * z + v;
            v = v * z + c;
        }
        (v, d)
    }

    /// Largest coefficient modulus, a crude size scale.
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl<T: Coeff> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        self.add_impl(rhs, false)
    }
}

impl<T: Coeff> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        self.add_impl(rhs, true)
    }
}

impl<T: Coeff> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        self.mul_impl(rhs)
    }
}

impl<T: Coeff> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }
}

impl<T: Coeff> std::fmt::Debug for Poly<T>
where
    T: std::fmt::Debug,
{
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "Poly[0]");
        }
        write!(f, "Poly[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}·z^{k}")?;
        }
        write!(f, "]")
    }
}

/// Runtime-tagged polynomial, the form used at serialization and
/// configuration boundaries where the scalar kind is dynamic.
#[derive(Clone, Debug, PartialEq)]
pub enum Polynomial {
    Exact(ExactPoly),
    Float(FloatPoly),
}

/// Arithmetic selector for [`Polynomial::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

impl Polynomial {
    pub fn kind(&self) -> &'static str {
        match self {
            Polynomial::Exact(_) => ExactComplex::KIND,
            Polynomial::Float(_) => Complex64::KIND,
        }
    }

    /// Binary arithmetic on same-kind polynomials; mixing kinds is an error
    /// rather than an implicit promotion.
    pub fn arith(&self, rhs: &Polynomial, op: PolyOp) -> Result<Polynomial, PolyError> {
        match (self, rhs) {
            (Polynomial::Exact(a), Polynomial::Exact(b)) => Ok(Polynomial::Exact(match op {
                PolyOp::Add => a + b,
                PolyOp::Sub => a - b,
                PolyOp::Mul => a * b,
            })),
            (Polynomial::Float(a), Polynomial::Float(b)) => Ok(Polynomial::Float(match op {
                PolyOp::Add => a + b,
                PolyOp::Sub => a - b,
                PolyOp::Mul => a * b,
            })),
            (a, b) => Err(PolyError::KindMismatch(a.kind(), b.kind())),
        }
    }

    pub fn derivative(&self) -> Polynomial {
        match self {
            Polynomial::Exact(p) => Polynomial::Exact(p.derivative()),
            Polynomial::Float(p) => Polynomial::Float(p.derivative()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PolyDto {
    kind: String,
    coeffs: Vec<[serde_json::Value; 2]>,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let dto = match self {
            Polynomial::Exact(p) => PolyDto {
                kind: "exact".into(),
                coeffs: p
                    .coeffs()
                    .iter()
                    .map(|c| {
                        [
                            serde_json::Value::String(ExactComplex::format_rational(&c.re)),
                            serde_json::Value::String(ExactComplex::format_rational(&c.im)),
                        ]
                    })
                    .collect(),
            },
            Polynomial::Float(p) => PolyDto {
                kind: "float".into(),
                coeffs: p
                    .coeffs()
                    .iter()
                    .map(|c| [serde_json::json!(c.re), serde_json::json!(c.im)])
                    .collect(),
            },
        };
        dto.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let dto = PolyDto::deserialize(deserializer)?;
        match dto.kind.as_str() {
            "exact" => {
                let mut coeffs = Vec::with_capacity(dto.coeffs.len());
                for pair in &dto.coeffs {
                    let part = |v: &serde_json::Value| -> Result<_, D::Error> {
                        match v {
                            serde_json::Value::String(s) => ExactComplex::parse_rational(s)
                                .ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))),
                            serde_json::Value::Number(n) if n.is_i64() => {
                                Ok(ExactComplex::parse_rational(&n.to_string()).unwrap())
                            }
                            other => Err(D::Error::custom(format!(
                                "exact coefficient parts must be \"num/den\" strings, got {other}"
                            ))),
                        }
                    };
                    coeffs.push(ExactComplex::new(part(&pair[0])?, part(&pair[1])?));
                }
                Ok(Polynomial::Exact(ExactPoly::new(coeffs)))
            }
            "float" => {
                let mut coeffs = Vec::with_capacity(dto.coeffs.len());
                for pair in &dto.coeffs {
                    let part = |v: &serde_json::Value| -> Result<f64, D::Error> {
                        v.as_f64()
                            .ok_or_else(|| D::Error::custom(format!("bad float part {v}")))
                    };
                    coeffs.push(Complex64::new(part(&pair[0])?, part(&pair[1])?));
                }
                Ok(Polynomial::Float(FloatPoly::new(coeffs)))
            }
            other => Err(D::Error::custom(format!(
                "polynomial kind must be \"exact\" or \"float\", got {other:?}"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_exact_poly(rng: &mut ChaCha12Rng, max_deg: usize) -> ExactPoly {
        let deg = rng.gen_range(0..=max_deg);
        ExactPoly::new(
            (0..=deg)
                .map(|_| {
                    ExactComplex::from_ratios(
                        rng.gen_range(-5..=5),
                        rng.gen_range(1..=4),
                        rng.gen_range(-5..=5),
                        rng.gen_range(1..=4),
                    )
                })
                .collect(),
        )
    }

    #[test]
    fn difference_of_squares() {
        let one_plus = ExactPoly::from_integer_coeffs(&[(1, 0), (1, 0)]);
        let one_minus = ExactPoly::from_integer_coeffs(&[(1, 0), (-1, 0)]);
        let expect = ExactPoly::from_integer_coeffs(&[(1, 0), (0, 0), (-1, 0)]);
        assert_eq!(&one_plus * &one_minus, expect);
    }

    #[test]
    fn additive_identity_and_degree() {
        let p = ExactPoly::from_integer_coeffs(&[(3, 1), (0, 2), (5, 0)]);
        assert_eq!(&p + &ExactPoly::zero(), p);
        let q = ExactPoly::from_integer_coeffs(&[(1, 0), (0, 0), (1, 0)]);
        let sq = &q * &q;
        // (z²+1)² = z⁴+2z²+1, degree 4 = 2+2
        assert_eq!(
            sq,
            ExactPoly::from_integer_coeffs(&[(1, 0), (0, 0), (2, 0), (0, 0), (1, 0)])
        );
        assert_eq!(sq.degree(), Some(4));
        assert_eq!(ExactPoly::zero().degree(), None);
    }

    #[test]
    fn derivative_basics() {
        let z3 = ExactPoly::from_integer_coeffs(&[(0, 0), (0, 0), (0, 0), (1, 0)]);
        assert_eq!(
            z3.derivative(),
            ExactPoly::from_integer_coeffs(&[(0, 0), (0, 0), (3, 0)])
        );
        let c = ExactPoly::from_integer_coeffs(&[(5, 0)]);
        assert!(c.derivative().is_zero());
    }

    #[test]
    fn derivative_matches_finite_differences() {
        // (1-z)^4, central difference at z = 0.3 + 0.1i, step 1e-5.
        let one_minus_z = FloatPoly::from_f64_coeffs(&[1.0, -1.0]);
        let mut p = FloatPoly::one();
        for _ in 0..4 {
            p = &p * &one_minus_z;
        }
        let dp = p.derivative();
        let z = Complex64::new(0.3, 0.1);
        let h = 1e-5;
        let fd = (p.eval(&(z + h)) - p.eval(&(z - h))) / (2.0 * h);
        let exact = dp.eval(&z);
        assert!((fd - exact).norm() / exact.norm() <= 1e-8);
    }

    #[test]
    fn eval_cases() {
        let p = FloatPoly::from_f64_coeffs(&[1.0, 0.0, 1.0]);
        assert!(p.eval(&Complex64::I).norm() < 1e-15);
        assert_eq!(FloatPoly::zero().eval(&Complex64::new(2.0, 3.0)), Complex64::ZERO);
    }

    #[test]
    fn exact_ring_axioms_randomized() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x90A7);
        for _ in 0..1000 {
            let p = random_exact_poly(&mut rng, 4);
            let q = random_exact_poly(&mut rng, 4);
            let r = random_exact_poly(&mut rng, 4);
            assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
            assert_eq!(&p * &q, &q * &p);
        }
    }

    #[test]
    fn derivative_is_linear_and_leibniz() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x90A8);
        for _ in 0..300 {
            let p = random_exact_poly(&mut rng, 5);
            let q = random_exact_poly(&mut rng, 5);
            assert_eq!((&p + &q).derivative(), &p.derivative() + &q.derivative());
            let prod_rule = &(&p.derivative() * &q) + &(&p * &q.derivative());
            assert_eq!((&p * &q).derivative(), prod_rule);
        }
    }

    #[test]
    fn degree_additivity_exact() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x90A9);
        for _ in 0..200 {
            let p = random_exact_poly(&mut rng, 6);
            let q = random_exact_poly(&mut rng, 6);
            if p.is_zero() || q.is_zero() {
                continue;
            }
            assert_eq!(
                (&p * &q).degree().unwrap(),
                p.degree().unwrap() + q.degree().unwrap()
            );
        }
    }

    #[test]
    fn kind_mismatch_rejected() {
        let e = Polynomial::Exact(ExactPoly::one());
        let f = Polynomial::Float(FloatPoly::one());
        match e.arith(&f, PolyOp::Add) {
            Err(PolyError::KindMismatch(a, b)) => {
                assert_eq!((a, b), ("exact", "float"));
            }
            other => panic!("expected kind mismatch, got {other:?}"),
        }
        assert!(e.arith(&e.clone(), PolyOp::Mul).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let p = Polynomial::Exact(ExactPoly::new(vec![
            ExactComplex::from_ratios(1, 2, -3, 4),
            ExactComplex::from_integers(0, 1),
        ]));
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"exact\"") && s.contains("1/2"));
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);

        let q = Polynomial::Float(FloatPoly::from_f64_coeffs(&[0.5, 0.0, -2.0]));
        let s = serde_json::to_string(&q).unwrap();
        let back: Polynomial = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);

        let bad: Result<Polynomial, _> = serde_json::from_str(r#"{"kind":"sym","coeffs":[]}"#);
        assert!(bad.is_err());
    }
}
