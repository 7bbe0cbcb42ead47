//! Points, measures and quadrature on `S^{n-1}`, plus the intrinsic
//! calculus used by the second-variation checks.

pub mod bochner;
pub mod calculus;
pub mod poly;

use std::f64::consts::PI;
use std::ops::Deref;

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, trapezoid_angles};
use crate::stats::{self, Estimate};

pub use bochner::{bochner_residual, bochner_residual_exact, BochnerTerms, ExactBochner};
pub use calculus::{
    eval_y, intrinsic_grad, intrinsic_hessian, laplacian, tangent_frame, AmbientFunction,
};
pub use poly::AmbientPolynomial;

/// Volume of the Euclidean unit ball in `R^n`.
pub fn kappa(n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * kappa(n - 2),
    }
}

/// Surface area of `S^{n-1}`, i.e. `n kappa_n`.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * kappa(n)
}

/// A point of the unit sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(DVector<f64>);

impl UnitVector {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(v: DVector<f64>) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() > Self::TOLERANCE {
            return Err(Error::Argument(format!("vector has norm {norm}, expected 1")));
        }
        Ok(Self(v))
    }

    /// Normalize a non-zero vector.
    pub fn normalize(v: DVector<f64>) -> Result<Self> {
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Argument("cannot normalize a zero or non-finite vector".into()));
        }
        Ok(Self(v / norm))
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        Self(v)
    }

    pub fn from_slice(xs: &[f64]) -> Result<Self> {
        Self::normalize(DVector::from_column_slice(xs))
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl Deref for UnitVector {
    type Target = DVector<f64>;
    fn deref(&self) -> &DVector<f64> {
        &self.0
    }
}

/// Uniform point on `S^{n-1}` from a normalized Gaussian vector.
pub fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-300 {
            return v / norm;
        }
    }
}

/// `count` i.i.d. uniform points on `S^{n-1}`, reproducible for a fixed seed
/// regardless of thread count.
pub fn sample_sphere(n: usize, count: usize, seed: u64) -> Result<Vec<UnitVector>> {
    if n < 1 || count < 1 {
        return Err(Error::Argument(format!("need n >= 1 and count >= 1, got n = {n}, count = {count}")));
    }
    let chunks: Vec<usize> = (0..count.div_ceil(stats::CHUNK)).collect();
    let parts = stats::par_map(&chunks, |&c| {
        let mut rng = stats::stream_rng(seed, c as u64);
        let todo = stats::CHUNK.min(count - c * stats::CHUNK);
        (0..todo).map(|_| UnitVector(random_unit(n, &mut rng))).collect::<Vec<_>>()
    });
    Ok(parts.into_iter().flatten().collect())
}

/// Integration rule for the normalized measure on a sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SphereQuadrature {
    /// i.i.d. uniform points; results carry standard errors.
    MonteCarlo { seed: u64, count: usize },
    /// Deterministic tensor rule on `S^1` (trapezoid with `order` points) or
    /// `S^2` (Gauss–Legendre in `cos theta` with `order` points times a
    /// trapezoid with `2 order` azimuths).
    ProductRule { order: usize },
}

impl SphereQuadrature {
    /// Explicit nodes and normalized weights on `S^{n-1}`.
    pub fn nodes(&self, n: usize) -> Result<Vec<(DVector<f64>, f64)>> {
        match *self {
            SphereQuadrature::MonteCarlo { seed, count } => {
                let w = 1.0 / count as f64;
                Ok(sample_sphere(n, count, seed)?.into_iter().map(|u| (u.into_inner(), w)).collect())
            }
            SphereQuadrature::ProductRule { order } => product_nodes(n, order),
        }
    }

    /// Integrate a scalar function against the normalized measure.
    ///
    /// Monte Carlo reports one standard error; product rules report the
    /// difference against the rule of half the order.
    pub fn integrate<F>(&self, n: usize, f: F) -> Result<Estimate>
    where
        F: Fn(&DVector<f64>) -> f64 + Sync,
    {
        Ok(self.integrate_many(n, 1, |u| vec![f(u)])?.remove(0))
    }

    /// Vector-valued version of [`integrate`](Self::integrate); `f` returns
    /// `width` values per node.
    pub fn integrate_many<F>(&self, n: usize, width: usize, f: F) -> Result<Vec<Estimate>>
    where
        F: Fn(&DVector<f64>) -> Vec<f64> + Sync,
    {
        match *self {
            SphereQuadrature::MonteCarlo { seed, count } => {
                if count == 0 {
                    return Err(Error::Argument("Monte Carlo count must be positive".into()));
                }
                let m = stats::par_moments(seed, count, width, |rng| f(&random_unit(n, rng)));
                Ok(m.iter().map(|m| m.estimate()).collect())
            }
            SphereQuadrature::ProductRule { order } => {
                let fine = weighted_sum(&product_nodes(n, order)?, width, &f);
                let coarse = weighted_sum(&product_nodes(n, (order / 2).max(1))?, width, &f);
                Ok(fine.iter().zip(&coarse).map(|(&a, &b)| Estimate::from_orders(a, b)).collect())
            }
        }
    }
}

fn weighted_sum<F>(nodes: &[(DVector<f64>, f64)], width: usize, f: &F) -> Vec<f64>
where
    F: Fn(&DVector<f64>) -> Vec<f64> + Sync,
{
    let vals = stats::par_map(nodes, |(u, w)| (f(u), *w));
    let mut acc = vec![0.0; width];
    for (v, w) in vals {
        for (a, x) in acc.iter_mut().zip(v) {
            *a += w * x;
        }
    }
    acc
}

fn product_nodes(n: usize, order: usize) -> Result<Vec<(DVector<f64>, f64)>> {
    if order == 0 {
        return Err(Error::Argument("product rule order must be positive".into()));
    }
    match n {
        2 => {
            let w = 1.0 / order as f64;
            Ok(trapezoid_angles(order)
                .into_iter()
                .map(|t| (DVector::from_column_slice(&[t.cos(), t.sin()]), w))
                .collect())
        }
        3 => {
            let gl = gauss_legendre(order)?;
            let az = trapezoid_angles(2 * order);
            let waz = 1.0 / az.len() as f64;
            let mut out = Vec::with_capacity(gl.len() * az.len());
            for (z, wz) in gl.iter() {
                let r = (1.0 - z * z).max(0.0).sqrt();
                for &phi in &az {
                    out.push((DVector::from_column_slice(&[r * phi.cos(), r * phi.sin(), z]), wz * waz));
                }
            }
            Ok(out)
        }
        _ => Err(Error::Dimension(format!(
            "deterministic product rules exist only on S^1 and S^2, requested S^{}",
            n.saturating_sub(1)
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((kappa(2) - PI).abs() < 1e-15);
        assert!((kappa(3) - 4.0 * PI / 3.0).abs() < 1e-15);
        assert!((kappa(4) - PI * PI / 2.0).abs() < 1e-15);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn unit_vector_validation() {
        assert!(UnitVector::new(DVector::from_column_slice(&[1.0, 1.0])).is_err());
        assert!(UnitVector::normalize(DVector::zeros(3)).is_err());
        let u = UnitVector::from_slice(&[3.0, 4.0]).unwrap();
        assert!((u[0] - 0.6).abs() < 1e-15);
    }

    #[test]
    fn product_weights_sum_to_one() {
        for n in [2, 3] {
            let nodes = SphereQuadrature::ProductRule { order: 12 }.nodes(n).unwrap();
            let s: f64 = nodes.iter().map(|(_, w)| w).sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
        assert!(SphereQuadrature::ProductRule { order: 4 }.nodes(4).is_err());
    }

    #[test]
    fn product_rule_moments() {
        let q = SphereQuadrature::ProductRule { order: 16 };
        let e = q.integrate(3, |u| u[0] * u[0] * u[1] * u[1]).unwrap();
        assert!((e.value - 1.0 / 15.0).abs() < 1e-15);
        let e = q.integrate(2, |u| u[0].powi(4)).unwrap();
        assert!((e.value - 3.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_sphere(5, 5000, 11).unwrap();
        let b = sample_sphere(5, 5000, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|u| (u.norm() - 1.0).abs() < 1e-12));
    }
}
