//! Haar measure on the Grassmannian `G_{n,j}`, the statistic
//! `T_j(F) = |P_F e_1|^2`, spherical Radon averages over `S_F`, and the two
//! evaluation paths (Haar Monte Carlo and the Beta reduction) for averages of
//! zonal integrands.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, int, rat, to_f64};
use crate::quadrature::{beta_rule, first_coordinate_rule, Rule};
use crate::sphere::{random_unit, SphereQuadrature};
use crate::stats::{self, Estimate};

/// Minimum Gauss–Jacobi order for the law of `T_j`.
pub const MIN_BETA_ORDER: usize = 64;

/// A `j`-dimensional linear subspace of `R^n`, stored as an `n x j` matrix
/// with orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: DMatrix<f64>,
}

impl Subspace {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        let j = basis.ncols();
        if j == 0 || j > basis.nrows() {
            return Err(Error::Dimension(format!("basis of shape {}x{}", basis.nrows(), j)));
        }
        let defect = (basis.transpose() * &basis - DMatrix::identity(j, j)).amax();
        if defect > Self::TOLERANCE {
            return Err(Error::Argument(format!("basis columns are not orthonormal (defect {defect:.2e})")));
        }
        Ok(Self { basis })
    }

    /// `span(e_1, ..., e_j)`.
    pub fn coordinate(n: usize, j: usize) -> Result<Self> {
        check_dims(n, j)?;
        Ok(Self { basis: DMatrix::identity(n, j) })
    }

    /// Orthonormalize the columns of `m` (Gram–Schmidt / QR) with the sign
    /// convention `R_ii > 0`, which makes the map from Gaussian matrices to
    /// subspaces push the Gaussian law forward to Haar measure.
    pub fn from_spanning(m: &DMatrix<f64>) -> Result<Self> {
        let j = m.ncols();
        let qr = m.clone().qr();
        let r = qr.r();
        let mut q = qr.q();
        for i in 0..j {
            if r[(i, i)] == 0.0 {
                return Err(Error::Argument("spanning matrix is rank deficient".into()));
            }
            if r[(i, i)] < 0.0 {
                q.column_mut(i).neg_mut();
            }
        }
        Self::new(q.columns(0, j).into_owned())
    }

    /// Haar-random subspace.
    pub fn random<R: Rng + ?Sized>(n: usize, j: usize, rng: &mut R) -> Self {
        loop {
            let g = DMatrix::from_fn(n, j, |_, _| rng.sample::<f64, _>(StandardNormal));
            if let Ok(s) = Self::from_spanning(&g) {
                return s;
            }
        }
    }

    /// The hyperplane `u^perp` for a unit vector `u`.
    pub fn orthogonal_complement(u: &DVector<f64>) -> Self {
        Self { basis: crate::sphere::calculus::tangent_frame(u) }
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    /// `B y`, the point of `F` with coordinates `y`.
    pub fn embed(&self, y: &DVector<f64>) -> DVector<f64> {
        &self.basis * y
    }

    /// `B^T x`, coordinates of `P_F x`.
    pub fn coordinates(&self, x: &DVector<f64>) -> DVector<f64> {
        self.basis.transpose() * x
    }

    /// The same subspace with basis `B Q` for an orthogonal `j x j` matrix `Q`.
    pub fn rebased(&self, q: &DMatrix<f64>) -> Result<Self> {
        Self::new(&self.basis * q)
    }
}

fn check_dims(n: usize, j: usize) -> Result<()> {
    if j == 0 || j > n {
        return Err(Error::Dimension(format!("need 1 <= j <= n, got j = {j}, n = {n}")));
    }
    Ok(())
}

/// `T_j(F) = |P_F e_1|^2`.
pub fn t_of(f: &Subspace) -> f64 {
    f.basis.row(0).norm_squared()
}

/// `count` Haar-distributed subspaces, reproducible for a fixed seed.
pub fn sample_grassmann(n: usize, j: usize, count: usize, seed: u64) -> Result<Vec<Subspace>> {
    check_dims(n, j)?;
    let chunks: Vec<usize> = (0..count.div_ceil(stats::CHUNK)).collect();
    let parts = stats::par_map(&chunks, |&c| {
        let mut rng = stats::stream_rng(seed, c as u64);
        let todo = stats::CHUNK.min(count - c * stats::CHUNK);
        (0..todo).map(|_| Subspace::random(n, j, &mut rng)).collect::<Vec<_>>()
    });
    Ok(parts.into_iter().flatten().collect())
}

/// Monte Carlo estimates of `E[T_j^r]`, `r = 1..=4`, under Haar measure.
pub fn t_moment_estimates(n: usize, j: usize, count: usize, seed: u64) -> Result<Vec<Estimate>> {
    check_dims(n, j)?;
    let m = stats::par_moments(seed, count, 4, |rng| {
        let t = t_of(&Subspace::random(n, j, rng));
        vec![t, t * t, t * t * t, t * t * t * t]
    });
    Ok(m.iter().map(|m| m.estimate()).collect())
}

/// Gauss–Jacobi rule for the law of `T_j`, which is Beta(`j/2`, `(n-j)/2`).
/// For `j = n` the law is the point mass at 1.
#[derive(Debug, Clone)]
pub struct BetaQuadrature {
    pub n: usize,
    pub j: usize,
    rule: Rule,
}

impl BetaQuadrature {
    pub fn new(n: usize, j: usize, order: usize) -> Result<Self> {
        check_dims(n, j)?;
        if order < MIN_BETA_ORDER {
            return Err(Error::Argument(format!("Beta quadrature order must be >= {MIN_BETA_ORDER}, got {order}")));
        }
        let rule = if j == n {
            Rule { nodes: vec![1.0], weights: vec![1.0] }
        } else {
            beta_rule(order, j as f64 / 2.0, (n - j) as f64 / 2.0)?
        };
        Ok(Self { n, j, rule })
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.rule.integrate(f)
    }
}

/// Mean of `f` over the unit sphere `S_F` of `F`.
///
/// For `j = 1` this is the antipodal average; otherwise `quad` is used on
/// `S^{j-1}` and mapped through the basis.
pub fn radon_average<F>(f: F, sub: &Subspace, quad: &SphereQuadrature) -> Result<Estimate>
where
    F: Fn(&DVector<f64>) -> f64 + Sync,
{
    if sub.dim() == 1 {
        let b = sub.basis.column(0).into_owned();
        return Ok(Estimate::exact(0.5 * (f(&b) + f(&-b))));
    }
    quad.integrate(sub.dim(), |y| f(&sub.embed(y)))
}

/// Mean of `phi(s c)` where `c` is the first coordinate of a uniform point
/// of `S^{j-1}`. This is the Radon average over any `F` with `T_j(F) = s^2`
/// of the zonal function `u -> phi(u_1)`.
pub fn zonal_section_average(phi: impl Fn(f64) -> f64, j: usize, s: f64, law: &Rule) -> f64 {
    if j == 1 {
        0.5 * (phi(s) + phi(-s))
    } else {
        law.integrate(|c| phi(s * c))
    }
}

/// Rule for the first coordinate on `S^{j-1}`; a placeholder for `j = 1`.
pub fn section_law(j: usize, order: usize) -> Result<Rule> {
    if j == 1 {
        Ok(Rule { nodes: vec![1.0, -1.0], weights: vec![0.5, 0.5] })
    } else {
        first_coordinate_rule(j, order)
    }
}

fn y_and_gradient(n: usize, x1: f64) -> (f64, f64) {
    let nf = n as f64;
    let s = x1 * x1;
    (s * s - 6.0 * s / (nf + 4.0) + 3.0 / ((nf + 2.0) * (nf + 4.0)), 4.0 * s * x1 - 12.0 * x1 / (nf + 4.0))
}

/// Weighted nodes on a sphere.
type WeightedNodes = Vec<(DVector<f64>, f64)>;

/// Inner rule on `S_F`: deterministic where available, otherwise `None`.
fn inner_nodes(j: usize) -> Result<Option<WeightedNodes>> {
    match j {
        1 => Ok(Some(vec![
            (DVector::from_element(1, 1.0), 0.5),
            (DVector::from_element(1, -1.0), 0.5),
        ])),
        2 | 3 => Ok(Some(SphereQuadrature::ProductRule { order: 16 }.nodes(j)?)),
        _ => Ok(None),
    }
}

/// Points used for one Radon average on `S_F`: the deterministic rule, or
/// `mc_points` fresh uniform points.
fn inner_points<R: Rng + ?Sized>(
    fixed: &Option<Vec<(DVector<f64>, f64)>>,
    j: usize,
    mc_points: usize,
    rng: &mut R,
) -> Vec<(DVector<f64>, f64)> {
    match fixed {
        Some(nodes) => nodes.clone(),
        None => (0..mc_points).map(|_| (random_unit(j, rng), 1.0 / mc_points as f64)).collect(),
    }
}

/// Haar Monte Carlo estimates of the Grassmannian averages of `R_j(Y^2)` and
/// `R_j(|nabla_F Y|^2)`, next to their exact targets.
#[derive(Debug, Clone, Serialize)]
pub struct RadonIdentityReport {
    pub n: usize,
    pub j: usize,
    pub samples: usize,
    pub y_sq: Estimate,
    pub y_sq_target: f64,
    pub gradient_sq: Estimate,
    pub gradient_sq_target: f64,
}

impl RadonIdentityReport {
    pub fn passes(&self) -> bool {
        self.y_sq.agrees_with(self.y_sq_target) && self.gradient_sq.agrees_with(self.gradient_sq_target)
    }
}

pub fn radon_identity_check(n: usize, j: usize, samples: usize, seed: u64) -> Result<RadonIdentityReport> {
    check_dims(n, j)?;
    if n < 2 {
        return Err(Error::Dimension("need n >= 2".into()));
    }
    let fixed = inner_nodes(j)?;
    let m = stats::par_moments(seed, samples, 2, |rng| {
        let f = Subspace::random(n, j, rng);
        let t = t_of(&f);
        let mut acc = [0.0; 2];
        for (y, w) in inner_points(&fixed, j, 1, rng) {
            let x1 = f.basis.row(0).dot(&y.transpose());
            let (v, g1) = y_and_gradient(n, x1);
            acc[0] += w * v * v;
            if j > 1 {
                acc[1] += w * g1 * g1 * (t - x1 * x1);
            }
        }
        acc.to_vec()
    });
    let norm = exact::norm_y_sq(n as u32)?;
    let grad = rat(j as i64 - 1, n as i64 - 1) * exact::lambda_fourth(n as u32) * &norm;
    Ok(RadonIdentityReport {
        n,
        j,
        samples,
        y_sq: m[0].estimate(),
        y_sq_target: to_f64(&norm),
        gradient_sq: m[1].estimate(),
        gradient_sq_target: to_f64(&grad),
    })
}

/// The Grassmannian average of `(j R_j Y)^2` by both paths.
#[derive(Debug, Clone, Serialize)]
pub struct SquareAverageReport {
    pub n: usize,
    pub j: usize,
    pub haar: Estimate,
    pub beta: Estimate,
    pub target: f64,
}

impl SquareAverageReport {
    pub fn passes(&self) -> bool {
        self.haar.agrees_with(self.target) && self.beta.agrees_with(self.target) && self.haar.agrees_with(self.beta.value)
    }
}

/// `j R_j Y` at `T_j = s^2`, from the first-coordinate law on `S^{j-1}`.
pub fn j_radon_y_zonal(n: usize, j: usize, t: f64, law: &Rule) -> f64 {
    j as f64 * zonal_section_average(|c| y_and_gradient(n, c).0, j, t.max(0.0).sqrt(), law)
}

pub fn square_average_check(n: usize, j: usize, samples: usize, seed: u64, beta_order: usize) -> Result<SquareAverageReport> {
    check_dims(n, j)?;
    let fixed = inner_nodes(j)?;
    let jf = j as f64;
    // Two independent inner estimates keep the square unbiased when S_F is
    // sampled rather than integrated by a fixed rule.
    let m = stats::par_moments(seed, samples, 1, |rng| {
        let f = Subspace::random(n, j, rng);
        let mean = |rng: &mut rand_chacha::ChaCha8Rng| {
            inner_points(&fixed, j, 8, rng)
                .iter()
                .map(|(y, w)| w * y_and_gradient(n, f.basis.row(0).dot(&y.transpose())).0)
                .sum::<f64>()
        };
        let a = mean(rng);
        let b = if fixed.is_some() { a } else { mean(rng) };
        vec![jf * jf * a * b]
    });
    let beta_value = |order: usize| -> Result<f64> {
        let q = BetaQuadrature::new(n, j, order)?;
        let law = section_law(j, order)?;
        Ok(q.integrate(|t| j_radon_y_zonal(n, j, t, &law).powi(2)))
    };
    let fine = beta_value(beta_order.max(2 * MIN_BETA_ORDER))?;
    let coarse = beta_value(beta_order.max(2 * MIN_BETA_ORDER) / 2)?;
    let target = int(j as i64) * exact::norm_y_sq(n as u32)? * exact::bj(n as u32, j as u32)?;
    Ok(SquareAverageReport { n, j, haar: m[0].estimate(), beta: Estimate::from_orders(fine, coarse), target: to_f64(&target) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_subspaces_are_orthonormal() {
        let fs = sample_grassmann(7, 3, 100, 4).unwrap();
        for f in &fs {
            assert!((f.basis().transpose() * f.basis() - DMatrix::identity(3, 3)).amax() < 1e-12);
            let t = t_of(f);
            assert!((0.0..=1.0 + 1e-12).contains(&t));
        }
        assert_eq!(fs, sample_grassmann(7, 3, 100, 4).unwrap());
    }

    #[test]
    fn extreme_subspaces() {
        assert_eq!(t_of(&Subspace::coordinate(5, 2).unwrap()), 1.0);
        let f = Subspace::new(DMatrix::from_column_slice(3, 1, &[0.0, 1.0, 0.0])).unwrap();
        assert_eq!(t_of(&f), 0.0);
        let full = sample_grassmann(4, 4, 3, 1).unwrap();
        assert!(full.iter().all(|f| (t_of(f) - 1.0).abs() < 1e-12));
        assert!(Subspace::coordinate(3, 4).is_err());
    }

    #[test]
    fn beta_rule_reproduces_t_moments() {
        for (n, j) in [(11, 1), (11, 2), (11, 5), (6, 3), (4, 4)] {
            let q = BetaQuadrature::new(n, j, 64).unwrap();
            for r in 1..=4 {
                let target = to_f64(&exact::t_moment(n as u32, j as u32, r).unwrap());
                assert!((q.integrate(|t| t.powi(r as i32)) - target).abs() < 1e-12, "n={n} j={j} r={r}");
            }
        }
        assert!(BetaQuadrature::new(11, 2, 32).is_err());
    }

    #[test]
    fn radon_of_constant_and_full_space() {
        let mut rng = stats::stream_rng(2, 0);
        let f = Subspace::random(5, 3, &mut rng);
        let q = SphereQuadrature::ProductRule { order: 8 };
        assert!((radon_average(|_| 2.5, &f, &q).unwrap().value - 2.5).abs() < 1e-14);
        let full = Subspace::random(3, 3, &mut rng);
        let r = radon_average(|u| crate::sphere::eval_y(3, u), &full, &q).unwrap();
        assert!(r.value.abs() < 1e-14);
    }

    #[test]
    fn rebasing_leaves_radon_average_unchanged() {
        let mut rng = stats::stream_rng(6, 0);
        let f = Subspace::random(6, 3, &mut rng);
        let q = Subspace::random(3, 3, &mut rng).basis().clone();
        let g = f.rebased(&q).unwrap();
        let quad = SphereQuadrature::ProductRule { order: 12 };
        let y = |u: &DVector<f64>| crate::sphere::eval_y(6, u);
        let a = radon_average(y, &f, &quad).unwrap().value;
        let b = radon_average(y, &g, &quad).unwrap().value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn zonal_path_matches_closed_form_in_t() {
        let (n, j) = (11, 2);
        let law = section_law(j, 64).unwrap();
        let poly = exact::jrjy_in_t(n as u32, j as u32).unwrap();
        for t in [0.0f64, 0.3, 0.9] {
            let closed: f64 = poly.iter().enumerate().map(|(k, c)| to_f64(c) * t.powi(k as i32)).sum();
            assert!((j_radon_y_zonal(n, j, t, &law) - closed).abs() < 1e-14);
        }
    }

    #[test]
    fn square_average_endpoint() {
        let r = square_average_check(3, 3, 4096, 1, 128).unwrap();
        assert!(r.target == 0.0 && r.beta.value.abs() < 1e-15 && r.haar.value.abs() < 1e-15);
        let r = square_average_check(5, 5, 4096, 1, 128).unwrap();
        assert!(r.beta.value.abs() < 1e-15 && r.haar.agrees_with(0.0));
    }
}
