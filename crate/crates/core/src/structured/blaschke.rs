//! Finite Blaschke products built from interior zeros.

use super::StructuredError;
use crate::eval::{DiskFunction, DiskFunctionDerivs};
use num_complex::Complex64;

/// c · Π b_{a_k}(z)^{m_k} with the normalized factors
/// b_a(z) = (|a|/a)·(a − z)/(1 − ā z), and b_0(z) = z.
#[derive(Clone, Debug)]
pub struct BlaschkeProduct {
    zeros: Vec<(Complex64, usize)>,
    unimodular_constant: Complex64,
}

impl BlaschkeProduct {
    pub fn new(
        zeros: Vec<(Complex64, usize)>,
        unimodular_constant: Complex64,
    ) -> Result<Self, StructuredError> {
        for &(a, _) in &zeros {
            if a.norm() >= 1.0 {
                return Err(StructuredError::BlaschkeZeroOutsideDisk(a));
            }
        }
        let norm = unimodular_constant.norm();
        let constant = if norm == 0.0 {
            Complex64::ONE
        } else {
            unimodular_constant / norm
        };
        Ok(Self {
            zeros,
            unimodular_constant: constant,
        })
    }

    /// A single factor (z − a)/(1 − ā z), normalized so the product form
    /// matches the classical convention.
    pub fn single_factor(a: Complex64) -> Result<Self, StructuredError> {
        Self::new(vec![(a, 1)], -Complex64::ONE)
    }

    pub fn zeros(&self) -> &[(Complex64, usize)] {
        &self.zeros
    }

    /// Σ m_k (1 − |a_k|): finite for any finite product, reported so callers
    /// can echo the Blaschke condition.
    pub fn blaschke_sum(&self) -> f64 {
        self.zeros
            .iter()
            .map(|&(a, m)| m as f64 * (1.0 - a.norm()))
            .sum()
    }

    fn factor(a: Complex64, z: Complex64) -> Complex64 {
        if a.norm() == 0.0 {
            return z;
        }
        (a.norm() / a) * (a - z) / (Complex64::ONE - a.conj() * z)
    }

    fn factor_derivative(a: Complex64, z: Complex64) -> Complex64 {
        if a.norm() == 0.0 {
            return Complex64::ONE;
        }
        let den = Complex64::ONE - a.conj() * z;
        (a.norm() / a) * (a.norm_sqr() - 1.0) / (den * den)
    }
}

impl DiskFunction for BlaschkeProduct {
    fn eval(&self, z: Complex64) -> Complex64 {
        let mut v = self.unimodular_constant;
        for &(a, m) in &self.zeros {
            v *= Self::factor(a, z).powu(m as u32);
        }
        v
    }
}

impl DiskFunctionDerivs for BlaschkeProduct {
    fn eval_deriv(&self, z: Complex64, order: usize) -> Complex64 {
        match order {
            0 => self.eval(z),
            1 => {
                // Product rule, stable at the zeros themselves.
                let mut total = Complex64::ZERO;
                for (j, &(aj, mj)) in self.zeros.iter().enumerate() {
                    let mut part = self.unimodular_constant
                        * mj as f64
                        * Self::factor(aj, z).powu(mj as u32 - 1)
                        * Self::factor_derivative(aj, z);
                    for (k, &(ak, mk)) in self.zeros.iter().enumerate() {
                        if k != j {
                            part *= Self::factor(ak, z).powu(mk as u32);
                        }
                    }
                    total += part;
                }
                total
            }
            _ => panic!("Blaschke products expose derivatives up to order 1 only"),
        }
    }

    fn max_derivative_order(&self) -> Option<usize> {
        Some(1)
    }
}
