//! Frostman shifts (θ − α)/(1 − ᾱθ) of a structured base function.
//!
//! The shift is an evaluation wrapper, not a structured function: the
//! quotient generally leaves the closed rational-times-singular family, so
//! only pointwise values and the first derivative are offered.

use super::{StructuredError, StructuredFunction};
use crate::eval::{DiskFunction, DiskFunctionDerivs};
use num_complex::Complex64;

#[derive(Clone, Debug)]
pub struct FrostmanShift {
    base: StructuredFunction,
    base_derivative: StructuredFunction,
    alpha: Complex64,
}

impl FrostmanShift {
    pub fn new(base: StructuredFunction, alpha: Complex64) -> Result<Self, StructuredError> {
        let a = alpha.norm();
        if a >= 1.0 {
            return Err(StructuredError::ParameterOutOfRange(alpha, a));
        }
        let base_derivative = base.derivative();
        Ok(Self {
            base,
            base_derivative,
            alpha,
        })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn base(&self) -> &StructuredFunction {
        &self.base
    }

    /// (θ(z) − α)/(1 − ᾱ θ(z)).
    pub fn eval_checked(&self, z: Complex64) -> Result<Complex64, StructuredError> {
        let theta = self.base.eval_checked(z)?;
        let den = Complex64::ONE - self.alpha.conj() * theta;
        if den.norm() == 0.0 {
            return Err(StructuredError::EvalAtSingularity(z));
        }
        Ok((theta - self.alpha) / den)
    }

    /// Chain rule: θ'(z)·(1 − |α|²)/(1 − ᾱθ(z))².
    pub fn derivative_eval_checked(&self, z: Complex64) -> Result<Complex64, StructuredError> {
        let theta = self.base.eval_checked(z)?;
        let dtheta = self.base_derivative.eval_checked(z)?;
        let den = Complex64::ONE - self.alpha.conj() * theta;
        if den.norm() == 0.0 {
            return Err(StructuredError::EvalAtSingularity(z));
        }
        Ok(dtheta * (1.0 - self.alpha.norm_sqr()) / (den * den))
    }
}

impl DiskFunction for FrostmanShift {
    fn eval(&self, z: Complex64) -> Complex64 {
        let theta = self.base.eval(z);
        (theta - self.alpha) / (Complex64::ONE - self.alpha.conj() * theta)
    }

    fn boundary_singularities(&self) -> Vec<f64> {
        self.base.boundary_singularities()
    }
}

impl DiskFunctionDerivs for FrostmanShift {
    fn eval_deriv(&self, z: Complex64, order: usize) -> Complex64 {
        match order {
            0 => DiskFunction::eval(self, z),
            1 => {
                let theta = self.base.eval(z);
                let den = Complex64::ONE - self.alpha.conj() * theta;
                self.base_derivative.eval(z) * (1.0 - self.alpha.norm_sqr()) / (den * den)
            }
            _ => panic!("Frostman shifts expose derivatives up to order 1 only"),
        }
    }

    fn max_derivative_order(&self) -> Option<usize> {
        Some(1)
    }
}
