//! Evaluation traits shared by the contour, quadrature, and radial-limit
//! machinery.
//!
//! Implementors are analytic on the open unit disk and evaluable at boundary
//! points away from their singular set. The checked per-type APIs
//! (e.g. [`crate::structured::StructuredFunction::eval_checked`]) report
//! singular evaluation points as errors; these traits assume the caller keeps
//! nodes off the singular set, which every algorithm in this crate does by
//! construction.

use num_complex::Complex64;

/// A function analytic on the open unit disk.
pub trait DiskFunction: Sync {
    fn eval(&self, z: Complex64) -> Complex64;

    /// Boundary arguments (radians) where evaluation degenerates: measure
    /// atoms and unit-modulus denominator roots. Quadrature and contour nodes
    /// steer around these.
    fn boundary_singularities(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// A disk function whose derivatives up to some order are available in
/// closed form (no numeric differentiation anywhere in this crate).
pub trait DiskFunctionDerivs: DiskFunction {
    /// `order = 0` is the function itself.
    fn eval_deriv(&self, z: Complex64, order: usize) -> Complex64;

    /// Largest derivative order this value can produce, if bounded.
    fn max_derivative_order(&self) -> Option<usize> {
        None
    }
}

impl<F: DiskFunction + ?Sized> DiskFunction for &F {
    fn eval(&self, z: Complex64) -> Complex64 {
        (**self).eval(z)
    }
    fn boundary_singularities(&self) -> Vec<f64> {
        (**self).boundary_singularities()
    }
}

impl<F: DiskFunctionDerivs + ?Sized> DiskFunctionDerivs for &F {
    fn eval_deriv(&self, z: Complex64, order: usize) -> Complex64 {
        (**self).eval_deriv(z, order)
    }
    fn max_derivative_order(&self) -> Option<usize> {
        (**self).max_derivative_order()
    }
}

/// Closure adapter for ad-hoc functions (oracles in tests, wrappers).
pub struct FnDisk<F: Fn(Complex64) -> Complex64 + Sync> {
    f: F,
    singular_args: Vec<f64>,
}

impl<F: Fn(Complex64) -> Complex64 + Sync> FnDisk<F> {
    pub fn new(f: F) -> Self {
        Self {
            f,
            singular_args: Vec::new(),
        }
    }

    pub fn with_boundary_singularities(f: F, singular_args: Vec<f64>) -> Self {
        Self { f, singular_args }
    }
}

impl<F: Fn(Complex64) -> Complex64 + Sync> DiskFunction for FnDisk<F> {
    fn eval(&self, z: Complex64) -> Complex64 {
        (self.f)(z)
    }
    fn boundary_singularities(&self) -> Vec<f64> {
        self.singular_args.clone()
    }
}

/// Pointwise division of `f` by z^m: the origin-normalization wrapper used
/// before Jensen-type functionals when f(0) = 0. The division happens at
/// evaluation time; nothing is simplified symbolically.
pub struct OriginNormalized<F: DiskFunction> {
    inner: F,
    order: usize,
    /// Value at the origin, supplied by the caller as f^{(m)}(0)/m!.
    origin_value: Complex64,
}

impl<F: DiskFunction> OriginNormalized<F> {
    pub fn new(inner: F, order: usize, origin_value: Complex64) -> Self {
        Self {
            inner,
            order,
            origin_value,
        }
    }
}

impl<F: DiskFunction> DiskFunction for OriginNormalized<F> {
    fn eval(&self, z: Complex64) -> Complex64 {
        if z.norm() < 1e-150 {
            return self.origin_value;
        }
        self.inner.eval(z) / z.powu(self.order as u32)
    }
    fn boundary_singularities(&self) -> Vec<f64> {
        self.inner.boundary_singularities()
    }
}

/// Pointwise product of two disk functions.
pub struct ProductFn<A: DiskFunction, B: DiskFunction>(pub A, pub B);

impl<A: DiskFunction, B: DiskFunction> DiskFunction for ProductFn<A, B> {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.0.eval(z) * self.1.eval(z)
    }
    fn boundary_singularities(&self) -> Vec<f64> {
        let mut s = self.0.boundary_singularities();
        s.extend(self.1.boundary_singularities());
        s
    }
}
