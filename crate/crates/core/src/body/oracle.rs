//! Ambient support-function oracles and the operations that build new
//! oracles from old ones.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::sphere::calculus::OneHomogeneous;
use crate::sphere::{AmbientFunction, AmbientPolynomial};

use super::profile::ZonalProfile;

/// Shared, thread-safe support oracle.
pub type Oracle = Arc<dyn AmbientFunction + Send>;

impl<T: AmbientFunction + Send + ?Sized> AmbientFunction for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        (**self).gradient(x)
    }
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        (**self).hessian(x)
    }
    fn homogeneity(&self) -> Option<u32> {
        (**self).homogeneity()
    }
}

/// `r |x|`.
#[derive(Debug, Clone)]
pub struct EuclideanNorm {
    pub n: usize,
    pub radius: f64,
}

impl AmbientFunction for EuclideanNorm {
    fn dim(&self) -> usize {
        self.n
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        self.radius * x.norm()
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        x * (self.radius / x.norm())
    }
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let r = x.norm();
        let u = x / r;
        (DMatrix::identity(self.n, self.n) - &u * u.transpose()) * (self.radius / r)
    }
    fn homogeneity(&self) -> Option<u32> {
        Some(1)
    }
}

/// `sqrt(sum a_i^2 x_i^2)`, the support function of an axis-aligned ellipsoid.
#[derive(Debug, Clone)]
pub struct EllipsoidSupport {
    pub axes_sq: DVector<f64>,
}

impl AmbientFunction for EllipsoidSupport {
    fn dim(&self) -> usize {
        self.axes_sq.len()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        x.component_mul(&self.axes_sq).dot(x).sqrt()
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let ax = x.component_mul(&self.axes_sq);
        let h = ax.dot(x).sqrt();
        ax / h
    }
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let ax = x.component_mul(&self.axes_sq);
        let h = ax.dot(x).sqrt();
        (DMatrix::from_diagonal(&self.axes_sq) - &ax * ax.transpose() / (h * h)) / h
    }
    fn homogeneity(&self) -> Option<u32> {
        Some(1)
    }
}

/// `psi(<axis, x>)`; agrees with the support function on the sphere.
#[derive(Debug, Clone)]
pub struct ZonalSupport {
    pub axis: DVector<f64>,
    pub profile: ZonalProfile,
}

impl AmbientFunction for ZonalSupport {
    fn dim(&self) -> usize {
        self.axis.len()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        self.profile.value(self.axis.dot(x))
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.axis * self.profile.d1(self.axis.dot(x))
    }
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        &self.axis * self.axis.transpose() * self.profile.d2(self.axis.dot(x))
    }
}

/// `1 + t P(x)`.
#[derive(Debug, Clone)]
pub struct PolynomialPerturbation {
    pub poly: AmbientPolynomial,
    pub t: f64,
}

impl AmbientFunction for PolynomialPerturbation {
    fn dim(&self) -> usize {
        self.poly.dim()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        1.0 + self.t * self.poly.value(x)
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        self.poly.gradient(x) * self.t
    }
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.poly.hessian(x) * self.t
    }
}

/// `h(x) + <a, x>`, the support function of `K + a`.
pub struct Translated {
    pub inner: Oracle,
    pub shift: DVector<f64>,
}

impl AmbientFunction for Translated {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        self.inner.value(x) + self.shift.dot(x)
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        self.inner.gradient(x) + &self.shift
    }
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.inner.hessian(x)
    }
}

/// `h_K(T^T x)`, the support function of `T K`.
pub struct LinearImage {
    pub inner: OneHomogeneous<Oracle>,
    pub map: DMatrix<f64>,
}

impl AmbientFunction for LinearImage {
    fn dim(&self) -> usize {
        self.map.nrows()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        self.inner.value(&(self.map.transpose() * x))
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.map * self.inner.gradient(&(self.map.transpose() * x))
    }
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        &self.map * self.inner.hessian(&(self.map.transpose() * x)) * self.map.transpose()
    }
    fn homogeneity(&self) -> Option<u32> {
        Some(1)
    }
}

/// `(h(x) + h(-x)) / 2`, the support function of `DK / 2`.
pub struct Symmetrized {
    pub inner: Oracle,
}

impl AmbientFunction for Symmetrized {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        0.5 * (self.inner.value(x) + self.inner.value(&-x))
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        (self.inner.gradient(x) - self.inner.gradient(&-x)) * 0.5
    }
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        (self.inner.hessian(x) + self.inner.hessian(&-x)) * 0.5
    }
    fn homogeneity(&self) -> Option<u32> {
        self.inner.homogeneity()
    }
}

/// `lambda h(x)`.
pub struct Dilated {
    pub inner: Oracle,
    pub factor: f64,
}

impl AmbientFunction for Dilated {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        self.factor * self.inner.value(x)
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        self.inner.gradient(x) * self.factor
    }
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.inner.hessian(x) * self.factor
    }
    fn homogeneity(&self) -> Option<u32> {
        self.inner.homogeneity()
    }
}

/// `y -> h(B y)` on the coordinates of a subspace with orthonormal basis `B`.
pub struct Restricted {
    pub inner: Oracle,
    pub basis: DMatrix<f64>,
}

impl AmbientFunction for Restricted {
    fn dim(&self) -> usize {
        self.basis.ncols()
    }
    fn value(&self, y: &DVector<f64>) -> f64 {
        self.inner.value(&(&self.basis * y))
    }
    fn gradient(&self, y: &DVector<f64>) -> DVector<f64> {
        self.basis.transpose() * self.inner.gradient(&(&self.basis * y))
    }
    fn hessian(&self, y: &DVector<f64>) -> DMatrix<f64> {
        self.basis.transpose() * self.inner.hessian(&(&self.basis * y)) * &self.basis
    }
    fn homogeneity(&self) -> Option<u32> {
        self.inner.homogeneity()
    }
}

/// Support function given by a closure in the polar angle, for planar
/// bodies: `theta -> [h, h', h'']`. The ambient extension is 1-homogeneous.
pub struct PlanarAngular<F> {
    pub f: F,
}

impl<F: Fn(f64) -> [f64; 3] + Sync> AmbientFunction for PlanarAngular<F> {
    fn dim(&self) -> usize {
        2
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        x.norm() * (self.f)(x[1].atan2(x[0]))[0]
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let th = x[1].atan2(x[0]);
        let [h, hp, _] = (self.f)(th);
        let (s, c) = th.sin_cos();
        DVector::from_column_slice(&[h * c - hp * s, h * s + hp * c])
    }
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let r = x.norm();
        let th = x[1].atan2(x[0]);
        let [h, _, hpp] = (self.f)(th);
        let (s, c) = th.sin_cos();
        let tau = DVector::from_column_slice(&[-s, c]);
        &tau * tau.transpose() * ((h + hpp) / r)
    }
    fn homogeneity(&self) -> Option<u32> {
        Some(1)
    }
}
