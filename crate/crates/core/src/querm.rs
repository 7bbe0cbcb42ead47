//! Normalized `L^p`-moment quermassintegrals `I_{j,p}`, the log-ratio of two
//! of them along the family `h_t = 1 + t Y`, extraction of its quadratic
//! coefficient, and the reversal certificate.

use serde::{Deserialize, Serialize};

use crate::body::{self, best_volume, certify_convex, projection_volume, SupportBody, ZonalProfile};
use crate::error::{Error, Result};
use crate::exact::{self, to_f64};
use crate::grassmann::{radon_average, section_law, t_of, BetaQuadrature, Subspace};
use crate::sphere::{eval_y, kappa, SphereQuadrature};
use crate::stats::{self, ErrorKind, Estimate};

/// Default `t` for the reversal certificate.
pub const CERTIFY_T: f64 = 0.05;
/// Default `t` for coefficient extraction.
pub const EXTRACT_T: f64 = 0.02;

/// How `I_{j,p}` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum QuermMethod {
    /// Zonal bodies: Gauss–Jacobi over the law of `T_j` times the
    /// one-dimensional support-volume reduction in the angle.
    Zonal { beta_order: usize, angle_order: usize },
    /// Haar Monte Carlo over `G_{n,j}` with projection volumes per sample.
    HaarMc { seed: u64, count: usize },
    /// `n = 3` only: `G_{3,1}` and `G_{3,2}` parametrized by `S^2` and
    /// integrated by the product rule.
    SphereProduct { order: usize },
}

impl QuermMethod {
    pub fn zonal_default() -> Self {
        QuermMethod::Zonal { beta_order: 128, angle_order: 256 }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            QuermMethod::Zonal { .. } => "zonal",
            QuermMethod::HaarMc { .. } => "haar-mc",
            QuermMethod::SphereProduct { .. } => "sphere-product",
        }
    }
}

/// `I_{j,p}(K)^{1/j}` with its error estimate.
#[derive(Debug, Clone, Serialize)]
pub struct QuermResult {
    pub j: usize,
    pub p: f64,
    pub value: f64,
    pub error: f64,
    pub method: &'static str,
    pub estimate: Estimate,
}

impl QuermResult {
    pub(crate) fn new(j: usize, p: f64, method: &QuermMethod, estimate: Estimate) -> Self {
        Self { j, p, value: estimate.value, error: estimate.error_bar(), method: method.tag(), estimate }
    }
}

fn check_args(body: &SupportBody, j: usize, p: f64) -> Result<()> {
    if p == 0.0 || !p.is_finite() {
        return Err(Error::Argument(format!("exponent p must be finite and non-zero, got {p}")));
    }
    if j == 0 || j > body.dim() {
        return Err(Error::Dimension(format!("need 1 <= j <= n = {}, got j = {j}", body.dim())));
    }
    Ok(())
}

/// `I_{j,p}(K)^{1/j} = (int (V_j(F) / V_n^{j/n})^p dF)^{1/(p j)}` with
/// `V_j(F) = vol_j(P_F K) / kappa_j` and `V_n = vol_n(K) / kappa_n`.
pub fn i_jp(body: &SupportBody, j: usize, p: f64, method: &QuermMethod) -> Result<QuermResult> {
    check_args(body, j, p)?;
    let n = body.dim();
    if j == n {
        return Ok(QuermResult::new(j, p, method, Estimate::exact(1.0)));
    }
    let est = match *method {
        QuermMethod::Zonal { beta_order, angle_order } => {
            let z = body
                .zonal_data()
                .ok_or_else(|| Error::Precondition("zonal evaluation needs a zonal body".into()))?;
            let fine = zonal_i(&z.profile, n, j, p, beta_order, angle_order)?;
            let coarse = zonal_i(&z.profile, n, j, p, beta_order / 2, angle_order / 2)?;
            Estimate::quadrature(fine, (fine - coarse).abs() + 64.0 * f64::EPSILON * fine.abs())
        }
        QuermMethod::HaarMc { seed, count } => haar_i(body, j, p, seed, count)?,
        QuermMethod::SphereProduct { order } => sphere_product_i(body, j, p, order)?,
    };
    Ok(QuermResult::new(j, p, method, est))
}

/// Zonal reduction: `V_j` depends on `F` only through `T_j(F) = s^2`, and the
/// projection has profile `c -> psi(s c)`.
pub fn zonal_i(psi: &ZonalProfile, n: usize, j: usize, p: f64, beta_order: usize, angle_order: usize) -> Result<f64> {
    zonal_scan(psi, n)?;
    let law_n = section_law(n, angle_order)?;
    let vn = body::zonal_volume_ratio(psi, n, &law_n);
    if j == n {
        return Ok(1.0);
    }
    let law_j = section_law(j, angle_order)?;
    let beta = BetaQuadrature::new(n, j, beta_order)?;
    let scale = vn.powf(j as f64 / n as f64);
    let mean = beta.integrate(|t| {
        let vj = body::zonal_volume_ratio(&psi.scaled_argument(t.max(0.0).sqrt()), j, &law_j);
        (vj / scale).powf(p)
    });
    Ok(mean.powf(1.0 / (p * j as f64)))
}

/// Reject zonal profiles whose curvature eigenvalues are not positive.
fn zonal_scan(psi: &ZonalProfile, n: usize) -> Result<()> {
    const POINTS: usize = 4001;
    for i in 0..POINTS {
        let s = -1.0 + 2.0 * i as f64 / (POINTS - 1) as f64;
        let e = if n > 2 { psi.meridian(s).min(psi.parallel(s)) } else { psi.meridian(s) };
        if e < body::CONVEXITY_MARGIN {
            let mut node = vec![0.0; n];
            node[0] = s;
            if n > 1 {
                node[1] = (1.0 - s * s).max(0.0).sqrt();
            }
            return Err(Error::NotConvex { node, min_eigenvalue: e });
        }
    }
    Ok(())
}

fn haar_i(body: &SupportBody, j: usize, p: f64, seed: u64, count: usize) -> Result<Estimate> {
    let n = body.dim();
    let vn = best_volume(body)?.scale(1.0 / kappa(n));
    let scale = vn.value.powf(j as f64 / n as f64);
    let failure = std::sync::Mutex::new(None::<Error>);
    let m = stats::par_moments(seed, count, 1, |rng| {
        let f = Subspace::random(n, j, rng);
        match projection_volume(body, &f) {
            Ok(v) => vec![(v.value / kappa(j) / scale).powf(p)],
            Err(e) => {
                failure.lock().expect("poisoned").get_or_insert(e);
                vec![0.0]
            }
        }
    });
    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    let mean = m[0].estimate();
    let expo = 1.0 / (p * j as f64);
    let value = mean.value.powf(expo);
    // Delta method for the Monte Carlo mean, plus the first-order effect of
    // the error in V_n.
    let se = (expo * value / mean.value * mean.err).abs() + value * vn.err / (n as f64 * vn.value);
    Ok(Estimate::mc(value, se))
}

fn sphere_product_i(body: &SupportBody, j: usize, p: f64, order: usize) -> Result<Estimate> {
    if body.dim() != 3 || j > 2 {
        return Err(Error::Dimension("the sphere product rule evaluates j = 1, 2 in R^3".into()));
    }
    let vn = best_volume(body)?.value / kappa(3);
    let scale = vn.powf(j as f64 / 3.0);
    let quad = SphereQuadrature::ProductRule { order };
    let mean = quad.integrate(3, |u| {
        let vj = if j == 1 {
            body.width(u) / 2.0
        } else {
            brightness(body, u).unwrap_or(f64::NAN) / std::f64::consts::PI
        };
        (vj / scale).powf(p)
    })?;
    if !mean.value.is_finite() {
        return Err(Error::Indeterminate("a projection volume could not be evaluated".into()));
    }
    let expo = 1.0 / (p * j as f64);
    Ok(mean.map(|m| m.powf(expo), expo * mean.value.powf(expo - 1.0)))
}

/// `vol_2(P_{u^perp} K)` for a body in `R^3`.
pub fn brightness(body: &SupportBody, u: &nalgebra::DVector<f64>) -> Result<f64> {
    let f = Subspace::orthogonal_complement(u);
    let proj = body.project(&f)?;
    if let Some(z) = proj.zonal_data() {
        return Ok(body::zonal_volume_ratio(&z.profile, 2, &section_law(2, 64)?) * std::f64::consts::PI);
    }
    let area = body::planar_area(proj.planar_support()?, 256);
    area
}

/// `log I_m^{1/m} - log I_k^{1/k}` for `K_t` with `h_t = 1 + t Y`.
pub fn log_ratio(m: usize, k: usize, n: usize, t: f64, method: &QuermMethod) -> Result<Estimate> {
    let body = SupportBody::zonal4(n, t);
    match *method {
        QuermMethod::Zonal { beta_order, angle_order } => {
            let psi = &body.zonal_data().expect("zonal4 is zonal").profile;
            let eval = |b, a| -> Result<f64> {
                Ok(zonal_i(psi, n, m, -(n as f64), b, a)?.ln() - zonal_i(psi, n, k, -(n as f64), b, a)?.ln())
            };
            let fine = eval(beta_order, angle_order)?;
            let coarse = eval(beta_order / 2, angle_order / 2)?;
            Ok(Estimate::quadrature(fine, (fine - coarse).abs() + 64.0 * f64::EPSILON))
        }
        _ => {
            let a = i_jp(&body, m, -(n as f64), method)?.estimate;
            let b = i_jp(&body, k, -(n as f64), method)?.estimate;
            let la = a.map(f64::ln, 1.0 / a.value);
            let lb = b.map(f64::ln, 1.0 / b.value);
            Ok(la.minus(&lb))
        }
    }
}

/// `(f(t) + f(-t)) / (2 t^2)` with `f` the log-ratio.
pub fn extract_quadratic(m: usize, k: usize, n: usize, t: f64, method: &QuermMethod) -> Result<Estimate> {
    if t == 0.0 {
        return Err(Error::Argument("extraction needs t != 0".into()));
    }
    let plus = log_ratio(m, k, n, t, method)?;
    let minus = log_ratio(m, k, n, -t, method)?;
    let sum = Estimate { value: plus.value + minus.value, err: plus.err + minus.err, kind: plus.kind };
    Ok(sum.scale(1.0 / (2.0 * t * t)))
}

/// Target quadratic coefficient `c_{m,k,n} ||Y||^2`, exactly.
pub fn target_coefficient(m: usize, k: usize, n: usize) -> Result<exact::Rational> {
    Ok(exact::coefficient(m as u32, k as u32, n as u32)? * exact::norm_y_sq(n as u32)?)
}

/// Log-ratio on a grid of `t` and the extracted quadratic coefficient.
#[derive(Debug, Clone, Serialize)]
pub struct VariationReport {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub t_grid: Vec<f64>,
    /// `(t, f(t))`, including the mirrored `-t`.
    pub log_ratios: Vec<(f64, Estimate)>,
    /// `(t, (f(t) + f(-t)) / (2 t^2))`.
    pub quadratic_estimates: Vec<(f64, Estimate)>,
    /// Estimate at the first grid point.
    pub extracted: Estimate,
    pub target: f64,
    pub target_exact: String,
    /// `|extracted - target| / |target|`; `None` when the target is zero.
    pub relative_deviation: Option<f64>,
    /// `log2` of the ratio of deviations between `t` and `t/2` for grid
    /// points related by halving; close to 2 for an `O(t^2)` remainder.
    pub observed_orders: Vec<(f64, f64)>,
}

pub fn variation_report(m: usize, k: usize, n: usize, t_grid: &[f64], method: &QuermMethod) -> Result<VariationReport> {
    if t_grid.is_empty() {
        return Err(Error::Argument("empty t grid".into()));
    }
    let target_q = target_coefficient(m, k, n)?;
    let target = to_f64(&target_q);
    let mut log_ratios = Vec::new();
    let mut quadratic_estimates = Vec::new();
    for &t in t_grid {
        let plus = log_ratio(m, k, n, t, method)?;
        let minus = log_ratio(m, k, n, -t, method)?;
        log_ratios.push((t, plus));
        log_ratios.push((-t, minus));
        let sum = Estimate { value: plus.value + minus.value, err: plus.err + minus.err, kind: plus.kind };
        quadratic_estimates.push((t, sum.scale(1.0 / (2.0 * t * t))));
    }
    let extracted = quadratic_estimates[0].1;
    let relative_deviation = (target != 0.0).then(|| (extracted.value - target).abs() / target.abs());
    let mut observed_orders = Vec::new();
    for (t, a) in &quadratic_estimates {
        if let Some((_, b)) = quadratic_estimates.iter().find(|(s, _)| (s * 2.0 - t).abs() < 1e-15 * t.abs()) {
            let da = (a.value - target).abs();
            let db = (b.value - target).abs();
            if db > 0.0 {
                observed_orders.push((*t, (da / db).log2()));
            }
        }
    }
    Ok(VariationReport {
        m,
        k,
        n,
        t_grid: t_grid.to_vec(),
        log_ratios,
        quadratic_estimates,
        extracted,
        target,
        target_exact: target_q.to_string(),
        relative_deviation,
        observed_orders,
    })
}

/// Finite-difference `t`-derivatives at `t = 0` of `V_j(F, t)` against the
/// Radon-average formulas for the first two coefficients.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionExpansionReport {
    pub n: usize,
    pub j: usize,
    pub t_of_f: f64,
    pub step: f64,
    pub first_fd: f64,
    /// `j R_j Y (F)`.
    pub first_target: f64,
    pub second_fd: f64,
    /// `j R_j((j - 1) Y^2 - |nabla_F Y|^2)(F)`.
    pub second_target: f64,
}

impl ProjectionExpansionReport {
    pub fn relative_errors(&self) -> (f64, f64) {
        let rel = |a: f64, b: f64| if b.abs() > 1e-12 { (a - b).abs() / b.abs() } else { (a - b).abs() };
        (rel(self.first_fd, self.first_target), rel(self.second_fd, self.second_target))
    }
}

/// `V_j(F, t)` is a polynomial of degree `j` in `t`, so the five-point
/// stencils below are exact apart from rounding when `j <= 4`.
pub fn projection_expansion_check(n: usize, f: &Subspace, step: f64) -> Result<ProjectionExpansionReport> {
    let j = f.dim();
    if f.ambient_dim() != n || n < 2 {
        return Err(Error::Dimension(format!("subspace of R^{} for n = {n}", f.ambient_dim())));
    }
    let v = |t: f64| -> Result<f64> {
        let body = if j <= 3 {
            SupportBody::harmonic_perturbation(crate::sphere::AmbientPolynomial::zonal_y(n), t)
        } else {
            SupportBody::zonal4(n, t)
        };
        Ok(projection_volume(&body, f)?.value / kappa(j))
    };
    let h = step;
    let (m2, m1, z, p1, p2) = (v(-2.0 * h)?, v(-h)?, v(0.0)?, v(h)?, v(2.0 * h)?);
    let first_fd = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let second_fd = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h);

    let t = t_of(f);
    let jf = j as f64;
    let nf = n as f64;
    let quad = SphereQuadrature::ProductRule { order: 16 };
    let (first_target, second_target) = if j <= 3 {
        let a = radon_average(|x| eval_y(n, x), f, &quad)?.value;
        let b = if j == 1 {
            0.0
        } else {
            radon_average(
                |x| {
                    let y = eval_y(n, x);
                    let g1 = 4.0 * x[0].powi(3) - 12.0 * x[0] / (nf + 4.0);
                    (jf - 1.0) * y * y - g1 * g1 * (t - x[0] * x[0])
                },
                f,
                &quad,
            )?
            .value
        };
        (jf * a, jf * b)
    } else {
        let law = section_law(j, 128)?;
        let s = t.sqrt();
        let y = |c: f64| eval_y(n, &nalgebra::DVector::from_element(1, c));
        let a = law.integrate(|c| y(s * c));
        let b = law.integrate(|c| {
            let x1 = s * c;
            let g1 = 4.0 * x1.powi(3) - 12.0 * x1 / (nf + 4.0);
            (jf - 1.0) * y(x1).powi(2) - g1 * g1 * (t - x1 * x1)
        });
        (jf * a, jf * b)
    };
    Ok(ProjectionExpansionReport { n, j, t_of_f: t, step, first_fd, first_target, second_fd, second_target })
}

/// Verdict of a reversal certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// `I_k^{1/k} - I_m^{1/m}` exceeds three error bars.
    Reversed,
    /// The gap is within three error bars of zero.
    Indeterminate,
    /// The chain inequality holds beyond three error bars.
    NotReversed,
}

/// Evidence that `I_{m,-n}(K_t)^{1/m} < I_{k,-n}(K_t)^{1/k}`.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleCertificate {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub t: f64,
    pub convexity_margin: f64,
    pub convexity_nodes: usize,
    pub i_m: QuermResult,
    pub i_k: QuermResult,
    /// `I_k^{1/k} - I_m^{1/m}`.
    pub gap: Estimate,
    pub verdict: Verdict,
}

pub fn counterexample_certify(
    m: usize,
    k: usize,
    n: usize,
    t: f64,
    beta_order: usize,
    angle_order: usize,
) -> Result<CounterexampleCertificate> {
    if !exact::counterexample_exists(m as u32, k as u32, n as u32)? {
        return Err(Error::Precondition(format!(
            "no reversal is predicted for (m, k, n) = ({m}, {k}, {n}): need n > (m+2)(k+2) - 2"
        )));
    }
    let body = SupportBody::zonal4(n, t);
    let cert = certify_convex(&body, &SphereQuadrature::MonteCarlo { seed: 1, count: 2000 })?;
    let method = QuermMethod::Zonal { beta_order, angle_order };
    let i_m = i_jp(&body, m, -(n as f64), &method)?;
    let i_k = i_jp(&body, k, -(n as f64), &method)?;
    let psi = &body.zonal_data().expect("zonal4 is zonal").profile;
    let p = -(n as f64);
    let gap_at = |b, a| -> Result<f64> { Ok(zonal_i(psi, n, k, p, b, a)? - zonal_i(psi, n, m, p, b, a)?) };
    let fine = gap_at(beta_order, angle_order)?;
    let coarse = gap_at(beta_order / 2, angle_order / 2)?;
    let floor = 64.0 * f64::EPSILON * (i_m.value.abs() + i_k.value.abs());
    let gap = Estimate::quadrature(fine, (fine - coarse).abs() + floor);
    let verdict = if gap.value > 3.0 * gap.error_bar() {
        Verdict::Reversed
    } else if gap.value < -3.0 * gap.error_bar() {
        Verdict::NotReversed
    } else {
        Verdict::Indeterminate
    };
    debug_assert_eq!(gap.kind, ErrorKind::Quadrature);
    Ok(CounterexampleCertificate {
        m,
        k,
        n,
        t,
        convexity_margin: cert.margin,
        convexity_nodes: cert.nodes_checked,
        i_m,
        i_k,
        gap,
        verdict,
    })
}
