//! Convex bodies given by support-function oracles.
//!
//! A [`SupportBody`] carries an ambient extension of its support function
//! with closed-form first and second derivatives. Zonal bodies additionally
//! remember their axis and profile so that volumes and projection volumes can
//! be reduced to one-dimensional integrals.

pub mod oracle;
pub mod profile;
mod spec;

use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::{section_law, Subspace};
use crate::quadrature::{first_coordinate_rule, trapezoid_angles};
use crate::sphere::calculus::{intrinsic_hessian, OneHomogeneous};
use crate::sphere::{kappa, random_unit, AmbientFunction, AmbientPolynomial, SphereQuadrature};
use crate::stats::{self, Estimate};

pub use oracle::Oracle;
pub use profile::{zonal_polar_volume_ratio, zonal_volume_ratio, ZonalProfile};
pub use spec::{BodySpec, PolynomialTerm};

/// Smallest accepted eigenvalue of the curvature matrix.
pub const CONVEXITY_MARGIN: f64 = 1e-8;
/// Random directions added to every certification node set.
pub const CERTIFY_RANDOM_POINTS: usize = 10_000;
const CERTIFY_SEED: u64 = 0x00c0_ffee;
/// Grid used for one-dimensional scans of zonal profiles.
const ZONAL_SCAN_POINTS: usize = 20_001;
/// Largest trapezoid order used for planar areas.
pub const PLANAR_MAX_ORDER: usize = 2048;
/// Default angle order for zonal reductions.
pub const ZONAL_ORDER: usize = 256;

/// Axis and profile of a zonal body: `h(u) = psi(<axis, u>)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Zonal {
    pub axis: Vec<f64>,
    pub profile: ZonalProfile,
}

/// A convex body in `R^n` described by its support function.
#[derive(Clone)]
pub struct SupportBody {
    n: usize,
    oracle: Oracle,
    symmetric: bool,
    zonal: Option<Zonal>,
    volume_hint: Option<f64>,
    polar_volume_hint: Option<f64>,
    /// `(T, K)` when this body is `T K`.
    preimage: Option<Arc<(DMatrix<f64>, SupportBody)>>,
    label: String,
}

impl std::fmt::Debug for SupportBody {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SupportBody")
            .field("n", &self.n)
            .field("label", &self.label)
            .field("symmetric", &self.symmetric)
            .field("zonal", &self.zonal)
            .finish()
    }
}

impl SupportBody {
    /// Body from an arbitrary oracle. `symmetric` asserts `h(u) = h(-u)`.
    pub fn from_oracle(oracle: Oracle, symmetric: bool, label: impl Into<String>) -> Self {
        Self {
            n: oracle.dim(),
            oracle,
            symmetric,
            zonal: None,
            volume_hint: None,
            polar_volume_hint: None,
            preimage: None,
            label: label.into(),
        }
    }

    pub fn ball(n: usize, radius: f64) -> Self {
        let mut b = Self::from_oracle(Arc::new(oracle::EuclideanNorm { n, radius }), true, format!("ball(r={radius})"));
        let mut axis = vec![0.0; n];
        axis[0] = 1.0;
        b.zonal = Some(Zonal { axis, profile: ZonalProfile::constant(radius) });
        b.volume_hint = Some(kappa(n) * radius.powi(n as i32));
        b.polar_volume_hint = Some(kappa(n) * radius.powi(-(n as i32)));
        b
    }

    /// Axis-aligned ellipsoid with the given semi-axes.
    pub fn ellipsoid(axes: &[f64]) -> Result<Self> {
        if axes.is_empty() || axes.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
            return Err(Error::Argument(format!("ellipsoid semi-axes must be positive, got {axes:?}")));
        }
        let n = axes.len();
        let prod: f64 = axes.iter().product();
        let axes_sq = DVector::from_iterator(n, axes.iter().map(|a| a * a));
        let mut b = Self::from_oracle(Arc::new(oracle::EllipsoidSupport { axes_sq }), true, format!("ellipsoid{axes:?}"));
        b.volume_hint = Some(kappa(n) * prod);
        b.polar_volume_hint = Some(kappa(n) / prod);
        Ok(b)
    }

    /// Zonal body `h(u) = psi(u_1)`.
    pub fn zonal(n: usize, profile: ZonalProfile) -> Self {
        let mut axis = DVector::zeros(n);
        axis[0] = 1.0;
        Self::zonal_about(axis, profile)
    }

    /// Zonal body about a unit axis.
    pub fn zonal_about(axis: DVector<f64>, profile: ZonalProfile) -> Self {
        let symmetric = profile.coeffs.iter().skip(1).step_by(2).all(|&c| c == 0.0);
        let label = format!("zonal{:?}", profile.coeffs);
        let zonal = Zonal { axis: axis.iter().copied().collect(), profile: profile.clone() };
        let mut b = Self::from_oracle(Arc::new(oracle::ZonalSupport { axis, profile }), symmetric, label);
        b.zonal = Some(zonal);
        b
    }

    /// `h = 1 + t Y` with `Y` the fourth zonal harmonic.
    pub fn zonal4(n: usize, t: f64) -> Self {
        let mut b = Self::zonal(n, ZonalProfile::perturbation(t, &ZonalProfile::y(n)));
        b.label = format!("zonal4(n={n}, t={t})");
        b
    }

    /// `h = 1 + t P` for a polynomial `P`.
    pub fn harmonic_perturbation(poly: AmbientPolynomial, t: f64) -> Self {
        let symmetric = poly.terms().all(|(e, _)| e.iter().sum::<u32>() % 2 == 0);
        Self::from_oracle(
            Arc::new(oracle::PolynomialPerturbation { poly, t }),
            symmetric,
            format!("harmonic_perturbation(t={t})"),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn zonal_data(&self) -> Option<&Zonal> {
        self.zonal.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Closed-form volume, when known from the construction.
    pub fn volume_hint(&self) -> Option<f64> {
        self.volume_hint
    }

    pub fn support(&self, u: &DVector<f64>) -> f64 {
        self.oracle.value(u)
    }

    /// Width `h(u) + h(-u)`.
    pub fn width(&self, u: &DVector<f64>) -> f64 {
        self.oracle.value(u) + self.oracle.value(&-u)
    }

    /// Curvature matrix `nabla_S^2 h + h I` in the tangent frame at `u`.
    pub fn curvature_matrix(&self, u: &DVector<f64>) -> DMatrix<f64> {
        let mut c = intrinsic_hessian(&self.oracle, u);
        let h = self.oracle.value(u);
        for i in 0..c.nrows() {
            c[(i, i)] += h;
        }
        c
    }

    /// `K + a`.
    pub fn translate(&self, shift: &[f64]) -> Result<Self> {
        if shift.len() != self.n {
            return Err(Error::Dimension(format!("shift of length {} for a body in R^{}", shift.len(), self.n)));
        }
        let symmetric = shift.iter().all(|&a| a == 0.0) && self.symmetric;
        let mut b = Self::from_oracle(
            Arc::new(oracle::Translated { inner: self.oracle.clone(), shift: DVector::from_column_slice(shift) }),
            symmetric,
            format!("{} + {shift:?}", self.label),
        );
        b.volume_hint = self.volume_hint;
        Ok(b)
    }

    /// `T K` for an invertible `n x n` matrix.
    pub fn linear_image(&self, map: &DMatrix<f64>) -> Result<Self> {
        if map.nrows() != self.n || map.ncols() != self.n {
            return Err(Error::Dimension(format!("{}x{} map for a body in R^{}", map.nrows(), map.ncols(), self.n)));
        }
        let det = map.determinant();
        if det == 0.0 || !det.is_finite() {
            return Err(Error::Argument("linear map is singular".into()));
        }
        let mut b = Self::from_oracle(
            Arc::new(oracle::LinearImage { inner: OneHomogeneous(self.oracle.clone()), map: map.clone() }),
            self.symmetric,
            format!("T({})", self.label),
        );
        let (vol, polar) = if self.zonal.is_some() {
            (best_volume(self).ok().map(|e| e.value), best_polar_volume(self).ok().map(|e| e.value))
        } else {
            (self.volume_hint, self.polar_volume_hint)
        };
        b.volume_hint = vol.map(|v| v * det.abs());
        b.polar_volume_hint = polar.map(|v| v / det.abs());
        b.preimage = Some(Arc::new((map.clone(), self.clone())));
        Ok(b)
    }

    /// `lambda K` for `lambda > 0`.
    pub fn dilate(&self, factor: f64) -> Result<Self> {
        if factor.is_nan() || factor <= 0.0 {
            return Err(Error::Argument(format!("dilation factor must be positive, got {factor}")));
        }
        let mut b = Self::from_oracle(
            Arc::new(oracle::Dilated { inner: self.oracle.clone(), factor }),
            self.symmetric,
            format!("{factor} {}", self.label),
        );
        let n = self.n as i32;
        b.zonal = self.zonal.as_ref().map(|z| Zonal { axis: z.axis.clone(), profile: z.profile.scaled(factor) });
        b.volume_hint = self.volume_hint.map(|v| v * factor.powi(n));
        b.polar_volume_hint = self.polar_volume_hint.map(|v| v * factor.powi(-n));
        Ok(b)
    }

    /// `L = DK / 2`, support function `(h(u) + h(-u)) / 2`.
    pub fn central_symmetrization(&self) -> Self {
        if self.symmetric {
            return self.clone();
        }
        let mut b = Self::from_oracle(
            Arc::new(oracle::Symmetrized { inner: self.oracle.clone() }),
            true,
            format!("DK/2 of {}", self.label),
        );
        b.zonal = self.zonal.as_ref().map(|z| Zonal { axis: z.axis.clone(), profile: z.profile.even_part() });
        b
    }

    /// Orthogonal projection onto `F`, as a body in `R^j` (coordinates in the
    /// basis of `F`).
    pub fn project(&self, f: &Subspace) -> Result<Self> {
        if f.ambient_dim() != self.n {
            return Err(Error::Dimension(format!("subspace of R^{} for a body in R^{}", f.ambient_dim(), self.n)));
        }
        if let Some(pre) = &self.preimage {
            // h_{P_F TK}(y) = h_K(T^T B y); with T^T B = Q R this is R^T P_G K
            // for G = span(Q).
            let (t, k) = &**pre;
            let m = t.transpose() * f.basis();
            let g = Subspace::from_spanning(&m)?;
            let r = g.basis().transpose() * &m;
            let label = format!("P_F({})", self.label);
            return Ok(k.project(&g)?.linear_image(&r.transpose())?.with_label(label));
        }
        let mut b = Self::from_oracle(
            Arc::new(oracle::Restricted { inner: self.oracle.clone(), basis: f.basis().clone() }),
            self.symmetric,
            format!("P_F({})", self.label),
        );
        b.zonal = self.zonal.as_ref().map(|z| {
            let a = f.coordinates(&DVector::from_column_slice(&z.axis));
            let s = a.norm();
            if s > 1e-14 {
                Zonal { axis: (a / s).iter().copied().collect(), profile: z.profile.scaled_argument(s) }
            } else {
                let mut axis = vec![0.0; f.dim()];
                axis[0] = 1.0;
                Zonal { axis, profile: ZonalProfile::constant(z.profile.value(0.0)) }
            }
        });
        Ok(b)
    }

    /// For planar bodies: `theta -> [h, h', h'']`.
    pub fn planar_support(&self) -> Result<impl Fn(f64) -> [f64; 3] + Sync + '_> {
        if self.n != 2 {
            return Err(Error::Dimension(format!("planar support requested for a body in R^{}", self.n)));
        }
        Ok(move |theta: f64| {
            let (s, c) = theta.sin_cos();
            let u = DVector::from_column_slice(&[c, s]);
            let tau = DVector::from_column_slice(&[-s, c]);
            let h = self.oracle.value(&u);
            let g = self.oracle.gradient(&u);
            let hess = self.oracle.hessian(&u);
            [h, g.dot(&tau), (hess * &tau).dot(&tau) - g.dot(&u)]
        })
    }
}

/// Outcome of a successful convexity certification.
#[derive(Debug, Clone, Serialize)]
pub struct ConvexityCertificate {
    pub nodes_checked: usize,
    /// Smallest curvature eigenvalue seen.
    pub margin: f64,
    /// Direction attaining the margin.
    pub witness: Vec<f64>,
    /// Smallest support value seen.
    pub min_support: f64,
}

/// Check that the curvature matrix is positive definite (margin
/// [`CONVEXITY_MARGIN`]) and that `h > 0` on the quadrature nodes of `quad`
/// together with [`CERTIFY_RANDOM_POINTS`] random directions. Zonal bodies
/// are also scanned along a fine grid of the profile.
pub fn certify_convex(body: &SupportBody, quad: &SphereQuadrature) -> Result<ConvexityCertificate> {
    let n = body.n;
    if n < 2 {
        return Err(Error::Dimension("convexity certification needs n >= 2".into()));
    }
    let mut nodes: Vec<DVector<f64>> = quad.nodes(n)?.into_iter().map(|(u, _)| u).collect();
    let mut rng = stats::stream_rng(CERTIFY_SEED, 0);
    nodes.extend((0..CERTIFY_RANDOM_POINTS).map(|_| random_unit(n, &mut rng)));
    let per_node = stats::par_map(&nodes, |u| {
        let c = body.curvature_matrix(u);
        let min_eig = SymmetricEigen::new(c).eigenvalues.min();
        (min_eig, body.support(u))
    });
    let mut margin = f64::INFINITY;
    let mut witness = nodes[0].clone();
    let mut min_support = f64::INFINITY;
    for ((e, h), u) in per_node.iter().zip(&nodes) {
        if *e < margin {
            margin = *e;
            witness = u.clone();
        }
        if *h <= 0.0 {
            return Err(Error::NonPositive { node: u.iter().copied().collect(), value: *h });
        }
        min_support = min_support.min(*h);
    }
    let mut checked = nodes.len();
    if let Some(z) = &body.zonal {
        let axis = DVector::from_column_slice(&z.axis);
        let frame = crate::sphere::calculus::tangent_frame(&axis);
        for i in 0..ZONAL_SCAN_POINTS {
            let s = -1.0 + 2.0 * i as f64 / (ZONAL_SCAN_POINTS - 1) as f64;
            let mer = z.profile.meridian(s);
            let e = if n > 2 { mer.min(z.profile.parallel(s)) } else { mer };
            let h = z.profile.value(s);
            let u = &axis * s + frame.column(0) * (1.0 - s * s).max(0.0).sqrt();
            if h <= 0.0 {
                return Err(Error::NonPositive { node: u.iter().copied().collect(), value: h });
            }
            if e < margin {
                margin = e;
                witness = u;
            }
            min_support = min_support.min(h);
        }
        checked += ZONAL_SCAN_POINTS;
    }
    if margin < CONVEXITY_MARGIN {
        return Err(Error::NotConvex { node: witness.iter().copied().collect(), min_eigenvalue: margin });
    }
    Ok(ConvexityCertificate { nodes_checked: checked, margin, witness: witness.iter().copied().collect(), min_support })
}

/// Largest interval `(-a, b)` of `t` for which `1 + t phi(u_1)` has positive
/// definite curvature matrix in `R^n`, measured on a grid of the profile.
/// The curvature eigenvalues are affine in `t`, so the bound is explicit once
/// the extreme eigenvalue coefficients are known.
pub fn zonal_convexity_range(phi: &ZonalProfile, n: usize) -> (f64, f64) {
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    for i in 0..ZONAL_SCAN_POINTS {
        let s = -1.0 + 2.0 * i as f64 / (ZONAL_SCAN_POINTS - 1) as f64;
        let mut qs = vec![phi.meridian(s)];
        if n > 2 {
            qs.push(phi.parallel(s));
        }
        qs.push(phi.value(s));
        for q in qs {
            lo = lo.min(q);
            hi = hi.max(q);
        }
    }
    let pos = if lo < 0.0 { -1.0 / lo } else { f64::INFINITY };
    let neg = if hi > 0.0 { 1.0 / hi } else { f64::INFINITY };
    (-neg, pos)
}

/// `vol_n(K)` by the support-volume formula `kappa_n int h det(C) d sigma`
/// on the nodes of `quad`. Fails if the curvature matrix is not positive
/// definite at some node.
pub fn volume(body: &SupportBody, quad: &SphereQuadrature) -> Result<Estimate> {
    let n = body.n;
    if n == 1 {
        let e = DVector::from_element(1, 1.0);
        return Ok(Estimate::exact(body.width(&e)));
    }
    let failure = std::sync::Mutex::new(None::<Error>);
    let est = quad.integrate(n, |u| {
        let c = body.curvature_matrix(u);
        match Cholesky::new(c.clone()) {
            Some(ch) => body.support(u) * ch.determinant(),
            None => {
                let min_eigenvalue = SymmetricEigen::new(c).eigenvalues.min();
                let mut f = failure.lock().expect("poisoned");
                f.get_or_insert(Error::NotConvex { node: u.iter().copied().collect(), min_eigenvalue });
                0.0
            }
        }
    })?;
    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    Ok(est.scale(kappa(n)))
}

/// `vol_m / kappa_m` of a zonal body by the one-dimensional reduction, with
/// the error taken from halving the order.
pub fn zonal_volume_ratio_estimate(psi: &ZonalProfile, m: usize, order: usize) -> Result<Estimate> {
    let fine = zonal_volume_ratio(psi, m, &section_law(m, order)?);
    let coarse = zonal_volume_ratio(psi, m, &section_law(m, order / 2)?);
    Ok(Estimate::from_orders(fine, coarse))
}

/// `(1/2) int (h^2 - h'^2) d theta` by the periodic trapezoid rule, after
/// checking `h > 0` and `h + h'' > 0` on the same grid.
pub fn planar_area(h: impl Fn(f64) -> [f64; 3], order: usize) -> Result<f64> {
    if order < 3 {
        return Err(Error::Argument(format!("planar area needs at least 3 angles, got {order}")));
    }
    let mut acc = 0.0;
    for th in trapezoid_angles(order) {
        let [v, d1, d2] = h(th);
        let node = vec![th.cos(), th.sin()];
        if v <= 0.0 {
            return Err(Error::NonPositive { node, value: v });
        }
        if v + d2 <= 0.0 {
            return Err(Error::NotConvex { node, min_eigenvalue: v + d2 });
        }
        acc += v * v - d1 * d1;
    }
    Ok(0.5 * acc * std::f64::consts::TAU / order as f64)
}

/// Volume by the most accurate route available: a closed form from the
/// construction, the zonal reduction, the planar trapezoid rule, the
/// product rule on `S^2`, or Monte Carlo in higher dimensions.
pub fn best_volume(body: &SupportBody) -> Result<Estimate> {
    if let Some(v) = body.volume_hint {
        return Ok(Estimate::exact(v));
    }
    let n = body.n;
    if let Some(z) = &body.zonal {
        return Ok(zonal_volume_ratio_estimate(&z.profile, n, ZONAL_ORDER)?.scale(kappa(n)));
    }
    match n {
        1 => volume(body, &SphereQuadrature::ProductRule { order: 1 }),
        2 => {
            // Trapezoid on a smooth periodic integrand: double until converged.
            let h = body.planar_support()?;
            let mut order = 64;
            let mut coarse = planar_area(&h, order)?;
            loop {
                order *= 2;
                let fine = planar_area(&h, order)?;
                if (fine - coarse).abs() <= 1e-13 * fine || order >= PLANAR_MAX_ORDER {
                    return Ok(Estimate::from_orders(fine, coarse));
                }
                coarse = fine;
            }
        }
        3 => volume(body, &SphereQuadrature::ProductRule { order: 64 }),
        _ => volume(body, &SphereQuadrature::MonteCarlo { seed: 0x0076_6f6c, count: 400_000 }),
    }
}

/// A random origin-symmetric `C^2_+` body in `R^n`: a linear image `T Z`
/// of a zonal body `Z` with even profile `1 + t (a s^2 + b s^4)`, where `t`
/// stays inside 80% of the convexity range and `T` is near the identity.
pub fn random_symmetric<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SupportBody> {
    if n < 2 {
        return Err(Error::Dimension("random bodies need n >= 2".into()));
    }
    let a = rng.random::<f64>() * 2.0 - 1.0;
    let b = rng.random::<f64>() * 2.0 - 1.0;
    let phi = ZonalProfile::new(vec![0.0, 0.0, a, 0.0, b]);
    let (lo, hi) = zonal_convexity_range(&phi, n);
    let t = if rng.random::<bool>() { 0.8 * hi.min(1.0) } else { 0.8 * lo.max(-1.0) } * rng.random::<f64>();
    let z = SupportBody::zonal(n, ZonalProfile::perturbation(t, &phi));
    let noise = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
    let map = DMatrix::identity(n, n) + noise * 0.25;
    let body = z.linear_image(&map)?;
    Ok(body.with_label(format!("T(zonal {a:.3} s^2 + {b:.3} s^4, t = {t:.4})")))
}

/// A random perturbed ball `h = 1 + t p(u)` with `p` a random polynomial
/// of degree at most 4 in `R^n`, not symmetric in general. The caller is
/// expected to certify convexity.
pub fn random_perturbed_ball<R: rand::Rng + ?Sized>(n: usize, t: f64, rng: &mut R) -> Result<SupportBody> {
    let mut terms = Vec::new();
    for _ in 0..6 {
        let degree = rng.random_range(1..=4u32);
        let mut e = vec![0u32; n];
        for _ in 0..degree {
            e[rng.random_range(0..n)] += 1;
        }
        terms.push((e, rng.random::<f64>() * 2.0 - 1.0));
    }
    let poly = AmbientPolynomial::from_float_terms(n, &terms)?;
    Ok(SupportBody::harmonic_perturbation(poly, t).with_label(format!("perturbed ball, t = {t}")))
}

/// `vol_j(P_F K)`.
pub fn projection_volume(body: &SupportBody, f: &Subspace) -> Result<Estimate> {
    if f.dim() == 1 {
        let b = f.basis().column(0).into_owned();
        return Ok(Estimate::exact(body.width(&b)));
    }
    best_volume(&body.project(f)?)
}

/// `vol_n(K°) = kappa_n int h^{-n} d sigma`.
pub fn polar_volume(body: &SupportBody, quad: &SphereQuadrature) -> Result<Estimate> {
    let n = body.n;
    let bad = std::sync::Mutex::new(None::<Error>);
    let est = quad.integrate(n, |u| {
        let h = body.support(u);
        if h <= 0.0 {
            bad.lock().expect("poisoned").get_or_insert(Error::NonPositive { node: u.iter().copied().collect(), value: h });
            return 0.0;
        }
        h.powi(-(n as i32))
    })?;
    if let Some(e) = bad.into_inner().expect("poisoned") {
        return Err(e);
    }
    Ok(est.scale(kappa(n)))
}

/// Polar volume by the most accurate route available.
pub fn best_polar_volume(body: &SupportBody) -> Result<Estimate> {
    if let Some(v) = body.polar_volume_hint {
        return Ok(Estimate::exact(v));
    }
    let n = body.n;
    if let Some(z) = &body.zonal {
        if n >= 2 {
            let law = |order| first_coordinate_rule(n, order);
            let min = law(ZONAL_ORDER)?.nodes.iter().map(|&s| z.profile.value(s)).fold(f64::INFINITY, f64::min);
            if min <= 0.0 {
                return Err(Error::NonPositive { node: vec![], value: min });
            }
            let fine = zonal_polar_volume_ratio(&z.profile, n, &law(ZONAL_ORDER)?);
            let coarse = zonal_polar_volume_ratio(&z.profile, n, &law(ZONAL_ORDER / 2)?);
            return Ok(Estimate::from_orders(fine, coarse).scale(kappa(n)));
        }
    }
    match n {
        2 => polar_volume(body, &SphereQuadrature::ProductRule { order: 1024 }),
        3 => polar_volume(body, &SphereQuadrature::ProductRule { order: 64 }),
        _ => polar_volume(body, &SphereQuadrature::MonteCarlo { seed: 0x0070_6f6c, count: 400_000 }),
    }
}

/// Two evaluations of `vol_j((M ∩ F)°)` for `M = L°`.
#[derive(Debug, Clone, Serialize)]
pub struct SectionPolarVolume {
    /// `vol_j(P_F L)` from the support function of the projection.
    pub via_projection: Estimate,
    /// Direct radial integration of `(M ∩ F)°` from `rho_M = 1 / h_L`.
    pub via_section: Estimate,
}

/// `vol_2((M ∩ F)°)` for `M = L°` and a plane `F`, by the projection and by
/// the section.
pub fn section_polar_volume(l: &SupportBody, f: &Subspace) -> Result<SectionPolarVolume> {
    if f.dim() != 2 {
        return Err(Error::Dimension(format!("section polar volume is implemented for planes, got j = {}", f.dim())));
    }
    if !l.symmetric {
        return Err(Error::Precondition("the body L must be origin-symmetric".into()));
    }
    let via_projection = projection_volume(l, f)?;
    let basis = f.basis().clone();
    let oracle = l.oracle.clone();
    let section = crate::tomo::PlanarBody::from_radial(
        move |th: f64| {
            let x = basis.column(0) * th.cos() + basis.column(1) * th.sin();
            1.0 / oracle.value(&x)
        },
        true,
    );
    let via_section = section.polar().area_estimate();
    Ok(SectionPolarVolume { via_projection, via_section })
}

#[cfg(test)]
mod tests;
