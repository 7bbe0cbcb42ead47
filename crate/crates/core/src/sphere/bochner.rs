//! The integrated Bochner identity
//! `int (Delta f)^2 - |nabla^2 f|^2 = (n-2) int |nabla f|^2` on `S^{n-1}`.

use nalgebra::DVector;
use num_traits::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::exact::{int, Rational};
use crate::stats::Estimate;

use super::calculus::{intrinsic_grad, intrinsic_hessian, AmbientFunction};
use super::poly::AmbientPolynomial;
use super::{sphere_area, SphereQuadrature};

/// Integrals over `S^{n-1}` with the unnormalized surface measure.
#[derive(Debug, Clone, Serialize)]
pub struct BochnerTerms {
    pub laplacian_sq: Estimate,
    pub hessian_sq: Estimate,
    pub gradient_sq: Estimate,
    /// `laplacian_sq - hessian_sq - (n-2) gradient_sq`, integrated pointwise.
    pub residual: Estimate,
}

impl BochnerTerms {
    /// `|residual| / int |nabla f|^2`, or the absolute residual when the
    /// gradient vanishes.
    pub fn relative_residual(&self) -> f64 {
        let scale = self.gradient_sq.value.abs();
        if scale > 0.0 {
            self.residual.value.abs() / scale
        } else {
            self.residual.value.abs()
        }
    }
}

/// Floating-point evaluation of the Bochner terms from intrinsic derivatives
/// in a tangent frame.
pub fn bochner_residual<F: AmbientFunction>(f: &F, quad: &SphereQuadrature) -> Result<BochnerTerms> {
    let n = f.dim();
    let d = n as f64 - 1.0;
    let vals = quad.integrate_many(n, 4, |u: &DVector<f64>| {
        let h = intrinsic_hessian(f, u);
        let lap = h.trace();
        let hs = h.norm_squared();
        let gs = intrinsic_grad(f, u).norm_squared();
        vec![lap * lap, hs, gs, lap * lap - hs - (d - 1.0) * gs]
    })?;
    let area = sphere_area(n);
    Ok(BochnerTerms {
        laplacian_sq: vals[0].scale(area),
        hessian_sq: vals[1].scale(area),
        gradient_sq: vals[2].scale(area),
        residual: vals[3].scale(area),
    })
}

/// Exact Bochner terms for a polynomial, as normalized sphere averages.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactBochner {
    pub laplacian_sq: Rational,
    pub hessian_sq: Rational,
    pub gradient_sq: Rational,
    pub residual: Rational,
}

/// Exact evaluation: with `g = grad P`, `G = D^2 P` and `c = <x, g>`, the
/// intrinsic quantities on the sphere are the polynomials
///
/// * `Delta f = tr G - x^T G x - (n-1) c`
/// * `|nabla^2 f|^2 = tr G^2 - 2 x^T G^2 x + (x^T G x)^2 - 2c (tr G - x^T G x) + (n-1) c^2`
/// * `|nabla f|^2 = |g|^2 - c^2`
///
/// each of which is integrated term by term.
pub fn bochner_residual_exact(p: &AmbientPolynomial) -> Result<ExactBochner> {
    let n = p.dim();
    let zero = AmbientPolynomial::zero(n);
    let x: Vec<AmbientPolynomial> = (0..n).map(|i| AmbientPolynomial::coordinate(n, i)).collect();
    let g: Vec<AmbientPolynomial> = (0..n).map(|i| p.partial(i)).collect();
    let hess: Vec<Vec<AmbientPolynomial>> = (0..n).map(|i| (0..n).map(|j| g[i].partial(j)).collect()).collect();

    let c = x.iter().zip(&g).fold(zero.clone(), |acc, (xi, gi)| acc.add(&xi.mul(gi)));
    let tr = (0..n).fold(zero.clone(), |acc, i| acc.add(&hess[i][i]));
    let tr_sq = (0..n).fold(zero.clone(), |acc, i| (0..n).fold(acc, |a, j| a.add(&hess[i][j].mul(&hess[i][j]))));
    // w = G x
    let w: Vec<AmbientPolynomial> = (0..n)
        .map(|i| (0..n).fold(zero.clone(), |acc, j| acc.add(&hess[i][j].mul(&x[j]))))
        .collect();
    let xgx = x.iter().zip(&w).fold(zero.clone(), |acc, (xi, wi)| acc.add(&xi.mul(wi)));
    let xg2x = w.iter().fold(zero.clone(), |acc, wi| acc.add(&wi.mul(wi)));
    let gg = g.iter().fold(zero.clone(), |acc, gi| acc.add(&gi.mul(gi)));

    let nm1 = int(n as i64 - 1);
    let tangential_trace = tr.sub(&xgx);
    let lap = tangential_trace.sub(&c.scale(&nm1));
    let hs = tr_sq
        .sub(&xg2x.scale(&int(2)))
        .add(&xgx.mul(&xgx))
        .sub(&c.mul(&tangential_trace).scale(&int(2)))
        .add(&c.mul(&c).scale(&nm1));
    let gs = gg.sub(&c.mul(&c));

    let laplacian_sq = lap.mul(&lap).sphere_integral()?;
    let hessian_sq = hs.sphere_integral()?;
    let gradient_sq = gs.sphere_integral()?;
    let residual = &laplacian_sq - &hessian_sq - int(n as i64 - 2) * &gradient_sq;
    Ok(ExactBochner { laplacian_sq, hessian_sq, gradient_sq, residual })
}

impl ExactBochner {
    pub fn is_exact_zero(&self) -> bool {
        self.residual.is_zero()
    }
}
