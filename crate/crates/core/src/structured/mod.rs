//! The closed function family R(z)·S_mu(z): rational functions times atomic
//! singular inner factors.
//!
//! The family is closed under linear combination, product, and
//! differentiation, so Wronskians of its members stay representable and
//! evaluable anywhere in the open disk. Atomic measures (finite lists of
//! unit-circle point masses) make singular-factor divisibility a decidable
//! comparison and keep radial-limit estimation sharp.

mod blaschke;
mod frostman;

pub use blaschke::BlaschkeProduct;
pub use frostman::FrostmanShift;

use crate::eval::{DiskFunction, DiskFunctionDerivs};
use crate::poly::{float_roots, FloatPoly, Polynomial, RootConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StructuredError {
    #[error("atom mass must be strictly positive, got {0}")]
    NonPositiveMass(f64),
    #[error("evaluation at singular point {0}")]
    EvalAtSingularity(Complex64),
    #[error("evaluation point {0} lies outside the closed unit disk")]
    OutsideDisk(Complex64),
    #[error("denominator root {0} lies inside the open disk")]
    DenominatorRootInDisk(Complex64),
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("{functions} functions but {lambdas} coefficients")]
    LengthMismatch { functions: usize, lambdas: usize },
    #[error("all coefficients vanish; the combination is trivial")]
    TrivialCombination,
    #[error("Frostman parameter must satisfy |alpha| < 1, got |{0}| = {1}")]
    ParameterOutOfRange(Complex64, f64),
    #[error("Blaschke zero {0} must lie in the open disk")]
    BlaschkeZeroOutsideDisk(Complex64),
}

/// Angular distance on the circle, in [0, pi].
pub(crate) fn arg_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// One unit-circle point mass.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Atom {
    /// Boundary argument in radians; the atom point is exp(i·arg).
    pub arg: f64,
    pub mass: f64,
}

impl Atom {
    pub fn point(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.arg)
    }
}

/// A finite positive atomic measure on the unit circle: the mu of S_mu.
///
/// Atoms are kept sorted by argument, pairwise distinct (coinciding atoms are
/// merged additively at construction), with strictly positive masses.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct AtomicSingularMeasure {
    atoms: Vec<Atom>,
}

impl AtomicSingularMeasure {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a measure from (argument, mass) pairs; atoms closer than 1e-12
    /// in argument are merged by adding masses.
    pub fn from_args(atoms: &[(f64, f64)]) -> Result<Self, StructuredError> {
        let mut list: Vec<Atom> = Vec::with_capacity(atoms.len());
        for &(arg, mass) in atoms {
            if mass <= 0.0 || !mass.is_finite() {
                return Err(StructuredError::NonPositiveMass(mass));
            }
            let arg = arg.rem_euclid(TAU);
            match list.iter_mut().find(|a| arg_distance(a.arg, arg) <= 1e-12) {
                Some(existing) => existing.mass += mass,
                None => list.push(Atom { arg, mass }),
            }
        }
        list.sort_by(|a, b| a.arg.total_cmp(&b.arg));
        Ok(Self { atoms: list })
    }

    /// Single atom at exp(i·arg) with the given mass.
    pub fn single(arg: f64, mass: f64) -> Result<Self, StructuredError> {
        Self::from_args(&[(arg, mass)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Measure addition; the law behind S_mu · S_nu = S_{mu+nu}.
    pub fn add(&self, other: &Self) -> Self {
        let mut pairs: Vec<(f64, f64)> = self.atoms.iter().map(|a| (a.arg, a.mass)).collect();
        pairs.extend(other.atoms.iter().map(|a| (a.arg, a.mass)));
        Self::from_args(&pairs).expect("masses already validated")
    }

    /// The Herglotz sum Σ m_j (ζ_j+z)/(ζ_j−z), the negated logarithm of S_mu.
    pub fn herglotz(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for atom in &self.atoms {
            let zeta = atom.point();
            acc += atom.mass * (zeta + z) / (zeta - z);
        }
        acc
    }

    /// Derivative of the Herglotz sum: Σ 2 m_j ζ_j/(ζ_j−z)².
    pub fn herglotz_derivative(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for atom in &self.atoms {
            let zeta = atom.point();
            let d = zeta - z;
            acc += 2.0 * atom.mass * zeta / (d * d);
        }
        acc
    }

    /// S_mu(z) = exp(−Σ m_j (ζ_j+z)/(ζ_j−z)), unchecked.
    pub fn inner_value(&self, z: Complex64) -> Complex64 {
        (-self.herglotz(z)).exp()
    }

    /// S_mu(z) with domain checks: the open disk, or the boundary away from
    /// every atom.
    pub fn inner_value_checked(&self, z: Complex64) -> Result<Complex64, StructuredError> {
        let r = z.norm();
        if r > 1.0 + 1e-12 {
            return Err(StructuredError::OutsideDisk(z));
        }
        for atom in &self.atoms {
            if (z - atom.point()).norm() <= 1e-12 {
                return Err(StructuredError::EvalAtSingularity(z));
            }
        }
        Ok(self.inner_value(z))
    }

    pub fn atom_args(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.arg).collect()
    }
}

/// One term (numerator/denominator)·S_mu of a structured function.
///
/// The denominator is monic with all roots of modulus >= 1 (analyticity in
/// the open disk); unit-modulus denominator roots are cached as boundary
/// pole arguments so quadrature nodes can avoid them.
#[derive(Clone, Debug)]
pub struct StructuredTerm {
    numerator: FloatPoly,
    denominator: FloatPoly,
    measure: AtomicSingularMeasure,
    boundary_poles: Vec<f64>,
}

impl StructuredTerm {
    /// Validating constructor: rejects denominators with roots inside the
    /// open disk and normalizes the denominator to be monic.
    pub fn new(
        numerator: FloatPoly,
        denominator: FloatPoly,
        measure: AtomicSingularMeasure,
    ) -> Result<Self, StructuredError> {
        let Some(lead) = denominator.leading().copied() else {
            return Err(StructuredError::ZeroDenominator);
        };
        let denominator = denominator.scale(&(1.0 / lead));
        let numerator = numerator.scale(&(1.0 / lead));
        let mut boundary_poles = Vec::new();
        if denominator.degree().is_some_and(|d| d > 0) {
            let roots = float_roots(&denominator, &RootConfig::default())
                .expect("nonzero denominator polynomial");
            for r in &roots {
                let m = r.location.norm();
                if m < 1.0 - 1e-9 {
                    return Err(StructuredError::DenominatorRootInDisk(r.location));
                }
                if m <= 1.0 + 1e-9 {
                    boundary_poles.push(r.location.arg().rem_euclid(TAU));
                }
            }
        }
        Ok(Self {
            numerator,
            denominator,
            measure,
            boundary_poles,
        })
    }

    /// Constructor for internal closed operations (derivative, product) whose
    /// outputs preserve the denominator invariant by construction.
    fn from_parts_unchecked(
        numerator: FloatPoly,
        denominator: FloatPoly,
        measure: AtomicSingularMeasure,
        boundary_poles: Vec<f64>,
    ) -> Self {
        Self {
            numerator,
            denominator,
            measure,
            boundary_poles,
        }
    }

    pub fn numerator(&self) -> &FloatPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &FloatPoly {
        &self.denominator
    }

    pub fn measure(&self) -> &AtomicSingularMeasure {
        &self.measure
    }

    fn eval_raw(&self, z: Complex64) -> Complex64 {
        self.numerator.eval(&z) / self.denominator.eval(&z) * self.measure.inner_value(z)
    }

    /// d/dz [(N/D)·S] = [(N'D − N D')/D² − (N/D)·Σ 2 m ζ/(ζ−z)²]·S,
    /// re-expressed over the common denominator D²·Π (ζ_j − z)². The new
    /// denominator roots are the old ones plus the atoms, all of modulus >= 1.
    fn derivative(&self) -> StructuredTerm {
        let n = &self.numerator;
        let d = &self.denominator;
        let rational_part = &(&n.derivative() * d) - &(n * &d.derivative());

        let atom_factors: Vec<FloatPoly> = self
            .measure
            .atoms()
            .iter()
            .map(|a| FloatPoly::new(vec![a.point(), -Complex64::ONE]))
            .collect();
        let mut a_sq = FloatPoly::one();
        for f in &atom_factors {
            a_sq = &a_sq * &(f * f);
        }

        let mut numerator = &rational_part * &a_sq;
        for (j, atom) in self.measure.atoms().iter().enumerate() {
            let mut others = FloatPoly::one();
            for (l, f) in atom_factors.iter().enumerate() {
                if l != j {
                    others = &others * &(f * f);
                }
            }
            let scale = Complex64::new(2.0 * atom.mass, 0.0) * atom.point();
            let correction = (&(n * d) * &others).scale(&scale);
            numerator = &numerator - &correction;
        }

        let denominator = &(d * d) * &a_sq;
        let mut poles = self.boundary_poles.clone();
        for a in self.measure.atoms() {
            if !poles.iter().any(|&p| arg_distance(p, a.arg) <= 1e-12) {
                poles.push(a.arg);
            }
        }
        StructuredTerm::from_parts_unchecked(numerator, denominator, self.measure.clone(), poles)
    }

    fn multiply(&self, other: &StructuredTerm) -> StructuredTerm {
        let mut poles = self.boundary_poles.clone();
        for &p in &other.boundary_poles {
            if !poles.iter().any(|&q| arg_distance(p, q) <= 1e-12) {
                poles.push(p);
            }
        }
        StructuredTerm::from_parts_unchecked(
            &self.numerator * &other.numerator,
            &self.denominator * &other.denominator,
            self.measure.add(&other.measure),
            poles,
        )
    }

    fn scaled(&self, c: Complex64) -> StructuredTerm {
        StructuredTerm::from_parts_unchecked(
            self.numerator.scale(&c),
            self.denominator.clone(),
            self.measure.clone(),
            self.boundary_poles.clone(),
        )
    }
}

/// A finite sum of (rational × atomic singular inner) terms.
#[derive(Clone, Debug, Default)]
pub struct StructuredFunction {
    terms: Vec<StructuredTerm>,
}

impl StructuredFunction {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn from_terms(terms: Vec<StructuredTerm>) -> Self {
        Self {
            terms: terms
                .into_iter()
                .filter(|t| !t.numerator.is_zero())
                .collect(),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(FloatPoly::constant(c))
    }

    pub fn polynomial(p: FloatPoly) -> Self {
        Self::from_terms(vec![StructuredTerm::from_parts_unchecked(
            p,
            FloatPoly::one(),
            AtomicSingularMeasure::empty(),
            Vec::new(),
        )])
    }

    /// The pure singular inner function S_mu.
    pub fn singular_inner(mu: AtomicSingularMeasure) -> Self {
        Self::from_terms(vec![StructuredTerm::from_parts_unchecked(
            FloatPoly::one(),
            FloatPoly::one(),
            mu,
            Vec::new(),
        )])
    }

    /// p(z)·S_mu, the workhorse smooth-times-singular fixture.
    pub fn poly_times_inner(p: FloatPoly, mu: AtomicSingularMeasure) -> Self {
        Self::from_terms(vec![StructuredTerm::from_parts_unchecked(
            p,
            FloatPoly::one(),
            mu,
            Vec::new(),
        )])
    }

    pub fn terms(&self) -> &[StructuredTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of term values in fixed term order, unchecked.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for t in &self.terms {
            acc += t.eval_raw(z);
        }
        acc
    }

    /// Evaluation with domain checks: the open disk, or the boundary off all
    /// atoms and boundary denominator roots.
    pub fn eval_checked(&self, z: Complex64) -> Result<Complex64, StructuredError> {
        let r = z.norm();
        if r > 1.0 + 1e-12 {
            return Err(StructuredError::OutsideDisk(z));
        }
        for t in &self.terms {
            for atom in t.measure.atoms() {
                if (z - atom.point()).norm() <= 1e-12 {
                    return Err(StructuredError::EvalAtSingularity(z));
                }
            }
            for &arg in &t.boundary_poles {
                if (z - Complex64::from_polar(1.0, arg)).norm() <= 1e-12 {
                    return Err(StructuredError::EvalAtSingularity(z));
                }
            }
        }
        Ok(self.eval(z))
    }

    /// In-family derivative, term by term.
    pub fn derivative(&self) -> StructuredFunction {
        StructuredFunction::from_terms(self.terms.iter().map(|t| t.derivative()).collect())
    }

    pub fn derivative_n(&self, order: usize) -> StructuredFunction {
        let mut f = self.clone();
        for _ in 0..order {
            f = f.derivative();
        }
        f
    }

    /// Nontrivial linear combination Σ λ_j f_j: term-list concatenation with
    /// scaled numerators, no algebraic simplification. All-zero coefficients
    /// are rejected, mirroring the Σ|λ_j| > 0 hypothesis.
    pub fn combine(
        fs: &[StructuredFunction],
        lambdas: &[Complex64],
    ) -> Result<StructuredFunction, StructuredError> {
        if fs.len() != lambdas.len() {
            return Err(StructuredError::LengthMismatch {
                functions: fs.len(),
                lambdas: lambdas.len(),
            });
        }
        if lambdas.iter().map(|l| l.norm()).sum::<f64>() == 0.0 {
            return Err(StructuredError::TrivialCombination);
        }
        let mut terms = Vec::new();
        for (f, &lambda) in fs.iter().zip(lambdas) {
            if lambda.norm() == 0.0 {
                continue;
            }
            terms.extend(f.terms.iter().map(|t| t.scaled(lambda)));
        }
        Ok(StructuredFunction::from_terms(terms))
    }

    /// Termwise product; measures add, rationals multiply.
    pub fn multiply(&self, other: &StructuredFunction) -> StructuredFunction {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.multiply(b));
            }
        }
        StructuredFunction::from_terms(terms)
    }

    pub fn scale(&self, c: Complex64) -> StructuredFunction {
        StructuredFunction::from_terms(self.terms.iter().map(|t| t.scaled(c)).collect())
    }

    pub fn add(&self, other: &StructuredFunction) -> StructuredFunction {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        StructuredFunction::from_terms(terms)
    }

    /// Union of atom points over all terms, the candidate singular support.
    pub fn atom_union_args(&self) -> Vec<f64> {
        let mut args: Vec<f64> = Vec::new();
        for t in &self.terms {
            for a in t.measure.atoms() {
                if !args.iter().any(|&p| arg_distance(p, a.arg) <= 1e-12) {
                    args.push(a.arg);
                }
            }
        }
        args.sort_by(f64::total_cmp);
        args
    }

    /// Total mass bookkeeping: only meaningful when every term carries the
    /// same measure (single-measure functions), else the max over terms.
    pub fn max_term_mass(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.measure.total_mass())
            .fold(0.0, f64::max)
    }
}

impl DiskFunction for StructuredFunction {
    fn eval(&self, z: Complex64) -> Complex64 {
        StructuredFunction::eval(self, z)
    }

    fn boundary_singularities(&self) -> Vec<f64> {
        let mut args = self.atom_union_args();
        for t in &self.terms {
            for &p in &t.boundary_poles {
                if !args.iter().any(|&q| arg_distance(p, q) <= 1e-12) {
                    args.push(p);
                }
            }
        }
        args.sort_by(f64::total_cmp);
        args
    }
}

/// Cache of successive structured derivatives, so contour and multiplicity
/// machinery can ask for f^{(k)}(z) repeatedly without re-differentiating.
pub struct DerivativeTower {
    levels: Vec<StructuredFunction>,
}

impl DerivativeTower {
    pub fn new(f: StructuredFunction, max_order: usize) -> Self {
        let mut levels = Vec::with_capacity(max_order + 1);
        levels.push(f);
        for k in 0..max_order {
            let next = levels[k].derivative();
            levels.push(next);
        }
        Self { levels }
    }

    pub fn function(&self) -> &StructuredFunction {
        &self.levels[0]
    }

    pub fn level(&self, order: usize) -> &StructuredFunction {
        &self.levels[order]
    }
}

impl DiskFunction for DerivativeTower {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.levels[0].eval(z)
    }
    fn boundary_singularities(&self) -> Vec<f64> {
        self.levels[0].boundary_singularities()
    }
}

impl DiskFunctionDerivs for DerivativeTower {
    fn eval_deriv(&self, z: Complex64, order: usize) -> Complex64 {
        assert!(
            order < self.levels.len(),
            "derivative tower built to order {}, asked for {}",
            self.levels.len() - 1,
            order
        );
        self.levels[order].eval(z)
    }
    fn max_derivative_order(&self) -> Option<usize> {
        Some(self.levels.len() - 1)
    }
}

impl DiskFunction for FloatPoly {
    fn eval(&self, z: Complex64) -> Complex64 {
        FloatPoly::eval(self, &z)
    }
}

impl DiskFunctionDerivs for FloatPoly {
    fn eval_deriv(&self, z: Complex64, order: usize) -> Complex64 {
        self.derivative_n(order).eval(&z)
    }
}

// ---------------------------------------------------------------------------
// Serialization: term arrays referencing the float polynomial format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct TermDto {
    num: Polynomial,
    den: Polynomial,
    measure: AtomicSingularMeasure,
}

#[derive(Serialize, Deserialize)]
struct StructuredDto {
    terms: Vec<TermDto>,
}

impl Serialize for StructuredFunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let dto = StructuredDto {
            terms: self
                .terms
                .iter()
                .map(|t| TermDto {
                    num: Polynomial::Float(t.numerator.clone()),
                    den: Polynomial::Float(t.denominator.clone()),
                    measure: t.measure.clone(),
                })
                .collect(),
        };
        dto.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StructuredFunction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let dto = StructuredDto::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(dto.terms.len());
        for (i, t) in dto.terms.into_iter().enumerate() {
            let (Polynomial::Float(num), Polynomial::Float(den)) = (t.num, t.den) else {
                return Err(D::Error::custom(format!(
                    "term {i}: structured terms require float-kind polynomials"
                )));
            };
            // Re-validate masses through the public constructor.
            let measure = AtomicSingularMeasure::from_args(
                &t.measure
                    .atoms()
                    .iter()
                    .map(|a| (a.arg, a.mass))
                    .collect::<Vec<_>>(),
            )
            .map_err(|e| D::Error::custom(format!("term {i}: {e}")))?;
            let term = StructuredTerm::new(num, den, measure)
                .map_err(|e| D::Error::custom(format!("term {i}: {e}")))?;
            terms.push(term);
        }
        Ok(StructuredFunction::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single_atom(mass: f64) -> AtomicSingularMeasure {
        AtomicSingularMeasure::single(0.0, mass).unwrap()
    }

    /// Independent straight-line re-evaluation of a structured function,
    /// kept deliberately separate from the production evaluation path.
    fn oracle_eval(f: &StructuredFunction, z: Complex64) -> Complex64 {
        let mut total = Complex64::ZERO;
        for t in f.terms() {
            let mut num = Complex64::ZERO;
            for (k, a) in t.numerator().coeffs().iter().enumerate() {
                num += a * z.powu(k as u32);
            }
            let mut den = Complex64::ZERO;
            for (k, a) in t.denominator().coeffs().iter().enumerate() {
                den += a * z.powu(k as u32);
            }
            let mut expo = Complex64::ZERO;
            for atom in t.measure().atoms() {
                let zeta = atom.point();
                expo -= atom.mass * (zeta + z) / (zeta - z);
            }
            total += num / den * expo.exp();
        }
        total
    }

    fn random_structured(rng: &mut ChaCha12Rng) -> StructuredFunction {
        let n_terms = rng.gen_range(1..=3);
        let mut terms = Vec::new();
        for _ in 0..n_terms {
            let deg = rng.gen_range(0..=3);
            let num = FloatPoly::new(
                (0..=deg)
                    .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
                    .collect(),
            );
            let n_atoms = rng.gen_range(0..=2);
            let atoms: Vec<(f64, f64)> = (0..n_atoms)
                .map(|_| (rng.gen_range(0.0..TAU), rng.gen_range(0.1..1.5)))
                .collect();
            let mu = AtomicSingularMeasure::from_args(&atoms).unwrap();
            terms.push(
                StructuredTerm::new(num, FloatPoly::one(), mu).expect("denominator one is valid"),
            );
        }
        StructuredFunction::from_terms(terms)
    }

    #[test]
    fn empty_measure_gives_one() {
        let mu = AtomicSingularMeasure::empty();
        for z in [c(0.0, 0.0), c(0.3, -0.2), c(0.0, 0.9)] {
            assert_eq!(mu.inner_value_checked(z).unwrap(), Complex64::ONE);
        }
    }

    #[test]
    fn single_atom_radial_modulus() {
        let c_mass = 0.7;
        let mu = single_atom(c_mass);
        for r in [0.0, 0.3, 0.5, 0.9, 0.99] {
            let v = mu.inner_value_checked(c(r, 0.0)).unwrap();
            let expect = (-c_mass * (1.0 + r) / (1.0 - r)).exp();
            assert!((v.norm() - expect).abs() <= 1e-14 * expect);
        }
    }

    #[test]
    fn value_at_origin_is_exp_minus_total_mass() {
        let mu = AtomicSingularMeasure::from_args(&[(0.0, 0.5), (std::f64::consts::PI, 0.5)])
            .unwrap();
        let v = mu.inner_value_checked(Complex64::ZERO).unwrap();
        assert!((v - c((-1.0f64).exp(), 0.0)).norm() <= 1e-15);
    }

    #[test]
    fn eval_at_atom_is_an_error() {
        let mu = single_atom(1.0);
        let err = mu.inner_value_checked(c(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, StructuredError::EvalAtSingularity(_)));
        assert!(matches!(
            mu.inner_value_checked(c(1.5, 0.0)).unwrap_err(),
            StructuredError::OutsideDisk(_)
        ));
    }

    #[test]
    fn constant_term_evaluates_to_one() {
        let f = StructuredFunction::constant(Complex64::ONE);
        assert_eq!(f.eval_checked(c(0.3, 0.0)).unwrap(), Complex64::ONE);
    }

    #[test]
    fn smooth_times_singular_composes() {
        let mass = 0.8;
        let one_minus_z = FloatPoly::from_f64_coeffs(&[1.0, -1.0]);
        let p4 = &(&one_minus_z * &one_minus_z) * &(&one_minus_z * &one_minus_z);
        let f = StructuredFunction::poly_times_inner(p4, single_atom(mass));
        for r in [0.2, 0.5, 0.8] {
            let v = f.eval_checked(c(r, 0.0)).unwrap();
            let expect = (1.0 - r).powi(4) * (-mass * (1.0 + r) / (1.0 - r)).exp();
            assert!((v - c(expect, 0.0)).norm() <= 1e-13);
        }
    }

    #[test]
    fn eval_matches_independent_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x57D1);
        for _ in 0..30 {
            let f = random_structured(&mut rng);
            let z = c(0.4, 0.2);
            let got = f.eval(z);
            let want = oracle_eval(&f, z);
            assert!((got - want).norm() <= 1e-12 * (1.0 + want.norm()));
        }
    }

    #[test]
    fn derivative_of_singular_inner_closed_form() {
        let mass = 0.6;
        let s = StructuredFunction::singular_inner(single_atom(mass));
        let ds = s.derivative();
        let z = c(0.0, 0.5);
        // d/dz S = (−2c/(1−z)²)·S for a unit atom at 1.
        let expect = -2.0 * mass / ((1.0 - z) * (1.0 - z)) * s.eval(z);
        let got = ds.eval(z);
        assert!((got - expect).norm() <= 1e-12 * expect.norm());

        // Central-difference cross-check, step 1e-5.
        let h = 1e-5;
        let fd = (s.eval(z + h) - s.eval(z - h)) / (2.0 * h);
        assert!((fd - got).norm() / got.norm() <= 1e-6);
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let f = StructuredFunction::constant(c(3.0, -1.0));
        assert!(f.derivative().is_zero());
    }

    #[test]
    fn derivative_of_smooth_singular_product() {
        let mass = 0.9;
        let one_minus_z = FloatPoly::from_f64_coeffs(&[1.0, -1.0]);
        let p4 = &(&one_minus_z * &one_minus_z) * &(&one_minus_z * &one_minus_z);
        let f = StructuredFunction::poly_times_inner(p4, single_atom(mass));
        let df = f.derivative();
        // Hand product rule: [−4(1−z)³ − 2c(1−z)²]·S.
        let s = StructuredFunction::singular_inner(single_atom(mass));
        for z in [c(0.3, 0.1), c(-0.5, 0.2), c(0.0, -0.7)] {
            let hand = (-4.0 * (1.0 - z).powu(3) - 2.0 * mass * (1.0 - z).powu(2)) * s.eval(z);
            let got = df.eval(z);
            assert!((got - hand).norm() <= 1e-11 * (1.0 + hand.norm()));
            let h = 1e-5;
            let fd = (f.eval(z + h) - f.eval(z - h)) / (2.0 * h);
            assert!((fd - got).norm() / (1.0 + got.norm()) <= 1e-6);
        }
    }

    #[test]
    fn combine_identity_and_cancellation() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x57D2);
        let f = random_structured(&mut rng);
        let g = random_structured(&mut rng);
        let id = StructuredFunction::combine(
            &[f.clone(), g.clone()],
            &[Complex64::ONE, Complex64::ZERO],
        )
        .unwrap();
        let cancel =
            StructuredFunction::combine(&[f.clone(), f.clone()], &[Complex64::ONE, -Complex64::ONE])
                .unwrap();
        for k in 0..20 {
            let t = TAU * k as f64 / 20.0;
            let z = Complex64::from_polar(0.55, t);
            assert!((id.eval(z) - f.eval(z)).norm() <= 1e-14 * (1.0 + f.eval(z).norm()));
            assert!(cancel.eval(z).norm() <= 1e-13 * (1.0 + f.eval(z).norm()));
        }
    }

    #[test]
    fn combine_rejects_trivial_and_mismatched() {
        let f = StructuredFunction::constant(Complex64::ONE);
        assert!(matches!(
            StructuredFunction::combine(&[f.clone()], &[Complex64::ZERO]),
            Err(StructuredError::TrivialCombination)
        ));
        assert!(matches!(
            StructuredFunction::combine(&[f], &[Complex64::ONE, Complex64::ONE]),
            Err(StructuredError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn product_adds_measures() {
        let a = StructuredFunction::singular_inner(single_atom(0.4));
        let b = StructuredFunction::singular_inner(single_atom(0.9));
        let ab = a.multiply(&b);
        assert_eq!(ab.terms().len(), 1);
        let total = ab.terms()[0].measure().total_mass();
        assert!((total - 1.3).abs() <= 1e-14);
        let z = c(0.2, 0.3);
        let direct = single_atom(1.3).inner_value(z);
        assert!((ab.eval(z) - direct).norm() <= 1e-14);

        let one = StructuredFunction::constant(Complex64::ONE);
        let same = a.multiply(&one);
        for z in [c(0.1, 0.2), c(-0.4, 0.3)] {
            assert!((same.eval(z) - a.eval(z)).norm() <= 1e-15);
        }
    }

    #[test]
    fn product_rule_pointwise() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x57D3);
        for _ in 0..10 {
            let f = random_structured(&mut rng);
            let g = random_structured(&mut rng);
            let lhs = f.multiply(&g).derivative();
            let rhs = f.derivative().multiply(&g).add(&f.multiply(&g.derivative()));
            let z = c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
            let scale = 1.0 + lhs.eval(z).norm().max(rhs.eval(z).norm());
            assert!((lhs.eval(z) - rhs.eval(z)).norm() <= 1e-9 * scale);
        }
    }

    #[test]
    fn derivative_commutes_with_combination() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x57D4);
        let fs: Vec<StructuredFunction> =
            (0..3).map(|_| random_structured(&mut rng)).collect();
        let lambdas = [c(1.0, 0.5), c(-0.3, 0.2), c(0.0, 1.1)];
        let d_of_combo = StructuredFunction::combine(&fs, &lambdas)
            .unwrap()
            .derivative();
        let combo_of_d = StructuredFunction::combine(
            &fs.iter().map(|f| f.derivative()).collect::<Vec<_>>(),
            &lambdas,
        )
        .unwrap();
        for k in 0..10 {
            let z = Complex64::from_polar(0.6, TAU * k as f64 / 10.0 + 0.1);
            let a = d_of_combo.eval(z);
            let b = combo_of_d.eval(z);
            assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn interior_max_modulus_for_inner_functions() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x57D5);
        let mu = AtomicSingularMeasure::from_args(&[(0.0, 1.0), (2.1, 0.35)]).unwrap();
        let s = StructuredFunction::singular_inner(mu);
        for _ in 0..1000 {
            let z = Complex64::from_polar(rng.gen_range(0.0..1.0f64), rng.gen_range(0.0..TAU));
            assert!(s.eval(z).norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn boundary_unimodularity_off_atoms() {
        let mu = AtomicSingularMeasure::from_args(&[(0.0, 1.0), (2.1, 0.35)]).unwrap();
        let s = StructuredFunction::singular_inner(mu.clone());
        let mut rng = ChaCha12Rng::seed_from_u64(0x57D6);
        let mut tested = 0;
        while tested < 200 {
            let t = rng.gen_range(0.0..TAU);
            if mu.atoms().iter().any(|a| arg_distance(a.arg, t) < 1e-3) {
                continue;
            }
            let v = s.eval_checked(Complex64::from_polar(1.0, t)).unwrap();
            assert!((v.norm() - 1.0).abs() <= 1e-10, "|S|={} at t={t}", v.norm());
            tested += 1;
        }
    }

    #[test]
    fn denominator_root_in_disk_rejected() {
        let den = FloatPoly::from_f64_coeffs(&[-0.5, 1.0]); // root at 0.5
        let err = StructuredTerm::new(FloatPoly::one(), den, AtomicSingularMeasure::empty())
            .unwrap_err();
        assert!(matches!(err, StructuredError::DenominatorRootInDisk(_)));

        // Root on the boundary is allowed and cached for node avoidance.
        let den = FloatPoly::from_f64_coeffs(&[-1.0, 1.0]); // root at 1
        let term =
            StructuredTerm::new(FloatPoly::one(), den, AtomicSingularMeasure::empty()).unwrap();
        assert_eq!(term.boundary_poles.len(), 1);
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha12Rng::seed_from_u64(0x57D7);
        let f = random_structured(&mut rng);
        let s = serde_json::to_string(&f).unwrap();
        let back: StructuredFunction = serde_json::from_str(&s).unwrap();
        for k in 0..10 {
            let z = Complex64::from_polar(0.5, TAU * k as f64 / 10.0);
            assert!((back.eval(z) - f.eval(z)).norm() <= 1e-12 * (1.0 + f.eval(z).norm()));
        }
    }
}
