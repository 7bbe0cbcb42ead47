//! Planar star bodies given by a radial and/or a support oracle in the polar
//! angle, and the planar functionals built on them: the determinant
//! functionals `D` and `D_2`, moment matrices and centroid bodies.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use nalgebra::{Matrix2, Vector2};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, trapezoid_angles, Rule};
use crate::stats::{self, Estimate};

type AngleFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Angles used by trapezoid integrals over the full circle.
pub const PLANAR_ANGLES: usize = 2048;
const SEARCH_GRID: usize = 48;
const GOLDEN_STEPS: usize = 80;

/// A planar body containing the origin in its interior. At least one of the
/// two oracles is present; the other is computed on demand by a
/// one-dimensional optimization over directions.
#[derive(Clone)]
pub struct PlanarBody {
    radial: Option<AngleFn>,
    support: Option<AngleFn>,
    symmetric: bool,
    label: String,
}

impl std::fmt::Debug for PlanarBody {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PlanarBody")
            .field("label", &self.label)
            .field("radial", &self.radial.is_some())
            .field("support", &self.support.is_some())
            .field("symmetric", &self.symmetric)
            .finish()
    }
}

impl PlanarBody {
    pub fn from_radial(rho: impl Fn(f64) -> f64 + Send + Sync + 'static, symmetric: bool) -> Self {
        Self { radial: Some(Arc::new(rho)), support: None, symmetric, label: "radial".into() }
    }

    pub fn from_support(h: impl Fn(f64) -> f64 + Send + Sync + 'static, symmetric: bool) -> Self {
        Self { radial: None, support: Some(Arc::new(h)), symmetric, label: "support".into() }
    }

    pub fn from_both(
        rho: impl Fn(f64) -> f64 + Send + Sync + 'static,
        h: impl Fn(f64) -> f64 + Send + Sync + 'static,
        symmetric: bool,
    ) -> Self {
        Self { radial: Some(Arc::new(rho)), support: Some(Arc::new(h)), symmetric, label: "planar".into() }
    }

    pub fn disk(r: f64) -> Self {
        Self::from_both(move |_| r, move |_| r, true).with_label(format!("disk(r={r})"))
    }

    /// Centered ellipse with semi-axes `a`, `b`, the `a`-axis at angle `phi`.
    pub fn ellipse(a: f64, b: f64, phi: f64) -> Self {
        let rho = move |th: f64| {
            let (s, c) = (th - phi).sin_cos();
            1.0 / ((c / a).powi(2) + (s / b).powi(2)).sqrt()
        };
        let h = move |th: f64| {
            let (s, c) = (th - phi).sin_cos();
            ((a * c).powi(2) + (b * s).powi(2)).sqrt()
        };
        Self::from_both(rho, h, true).with_label(format!("ellipse(a={a}, b={b}, phi={phi})"))
    }

    /// Convex polygon with the given vertices in counter-clockwise order;
    /// the origin must be interior.
    pub fn polygon(vertices: &[[f64; 2]]) -> Result<Self> {
        let m = vertices.len();
        if m < 3 {
            return Err(Error::Argument("a polygon needs at least three vertices".into()));
        }
        let mut edges = Vec::with_capacity(m);
        for i in 0..m {
            let p = Vector2::from(vertices[i]);
            let q = Vector2::from(vertices[(i + 1) % m]);
            let d = q - p;
            let normal = Vector2::new(d.y, -d.x).normalize();
            let offset = normal.dot(&p);
            if offset <= 0.0 {
                return Err(Error::Precondition("origin is not interior to the polygon".into()));
            }
            edges.push((normal, offset));
        }
        let verts: Vec<Vector2<f64>> = vertices.iter().map(|v| Vector2::from(*v)).collect();
        let symmetric = m.is_multiple_of(2) && (0..m / 2).all(|i| (verts[i] + verts[i + m / 2]).norm() < 1e-12);
        let rho = move |th: f64| {
            let dir = Vector2::new(th.cos(), th.sin());
            edges
                .iter()
                .filter_map(|(nrm, c)| {
                    let d = nrm.dot(&dir);
                    (d > 0.0).then(|| c / d)
                })
                .fold(f64::INFINITY, f64::min)
        };
        let h = move |th: f64| {
            let dir = Vector2::new(th.cos(), th.sin());
            verts.iter().map(|v| v.dot(&dir)).fold(f64::NEG_INFINITY, f64::max)
        };
        Ok(Self::from_both(rho, h, symmetric).with_label(format!("polygon({m})")))
    }

    /// Regular hexagon with circumradius `r`.
    pub fn regular_hexagon(r: f64) -> Self {
        let v: Vec<[f64; 2]> = (0..6).map(|i| {
            let a = PI / 3.0 * i as f64;
            [r * a.cos(), r * a.sin()]
        }).collect();
        Self::polygon(&v).expect("regular hexagon is a valid polygon").with_label(format!("hexagon(r={r})"))
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Radial function `rho(theta)`.
    pub fn radial(&self, theta: f64) -> f64 {
        match (&self.radial, &self.support) {
            (Some(r), _) => r(theta),
            (None, Some(h)) => {
                // rho(theta) = min over |phi - theta| < pi/2 of h(phi) / cos(phi - theta)
                let v = minimize_half_circle(|d| h(theta + d) / d.cos());
                v.max(0.0)
            }
            (None, None) => unreachable!("planar body without oracles"),
        }
    }

    /// Support function `h(theta)`.
    pub fn support(&self, theta: f64) -> f64 {
        match (&self.support, &self.radial) {
            (Some(h), _) => h(theta),
            (None, Some(r)) => -minimize_half_circle(|d| -r(theta + d) * d.cos()),
            (None, None) => unreachable!("planar body without oracles"),
        }
    }

    /// The polar body: radial and support functions are swapped and inverted.
    pub fn polar(&self) -> Self {
        let me = self.clone();
        let me2 = self.clone();
        let radial: Option<AngleFn> = Some(Arc::new(move |t| 1.0 / me.support(t)));
        let support: Option<AngleFn> = if self.radial.is_some() { Some(Arc::new(move |t| 1.0 / me2.radial(t))) } else { None };
        Self { radial, support, symmetric: self.symmetric, label: format!("polar of {}", self.label) }
    }

    /// `T A` for an invertible matrix `T`.
    pub fn linear_image(&self, t: &Matrix2<f64>) -> Result<Self> {
        let inv = t.try_inverse().ok_or_else(|| Error::Argument("singular linear map".into()))?;
        let tt = t.transpose();
        let a = self.clone();
        let b = self.clone();
        let rho = move |th: f64| {
            let v = inv * Vector2::new(th.cos(), th.sin());
            a.radial(v.y.atan2(v.x)) / v.norm()
        };
        let h = move |th: f64| {
            let v = tt * Vector2::new(th.cos(), th.sin());
            b.support(v.y.atan2(v.x)) * v.norm()
        };
        Ok(Self::from_both(rho, h, self.symmetric).with_label(format!("T({})", self.label)))
    }

    /// A random origin-symmetric convex body with an explicit radial
    /// function: the polar of [`crate::body::random_symmetric`] in the plane.
    pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R) -> Result<Self> {
        use crate::sphere::AmbientFunction;
        let b = crate::body::random_symmetric(2, rng)?;
        let oracle = b.oracle().clone();
        let label = format!("polar of {}", b.label());
        Ok(Self::from_radial(
            move |th: f64| 1.0 / oracle.value(&nalgebra::DVector::from_vec(vec![th.cos(), th.sin()])),
            true,
        )
        .with_label(label))
    }

    /// Radii on the uniform grid of `count` angles.
    pub fn radial_grid(&self, count: usize) -> Vec<f64> {
        let angles = trapezoid_angles(count);
        stats::par_map(&angles, |&t| self.radial(t))
    }

    /// Area by `(1/2) int rho^2`, with the error from halving the grid.
    pub fn area_estimate(&self) -> Estimate {
        let fine = half_moment(&self.radial_grid(PLANAR_ANGLES), 2);
        let coarse = half_moment(&self.radial_grid(PLANAR_ANGLES / 2), 2);
        Estimate::from_orders(fine, coarse)
    }

    pub fn area(&self) -> f64 {
        self.area_estimate().value
    }

    /// Uniform sampler on the body.
    pub fn sampler(&self) -> UniformSampler {
        let grid = self.radial_grid(4096);
        let max = grid.iter().cloned().fold(0.0, f64::max) * 1.02;
        UniformSampler { body: self.clone(), rho_max: max }
    }
}

/// `(1/p) int rho^p d theta` from equispaced samples.
fn half_moment(rho: &[f64], p: i32) -> f64 {
    rho.iter().map(|r| r.powi(p)).sum::<f64>() * TAU / rho.len() as f64 / p as f64
}

/// Minimum of `f` on `(-pi/2, pi/2)`: grid search followed by golden-section
/// refinement around the best grid point.
fn minimize_half_circle(f: impl Fn(f64) -> f64) -> f64 {
    let lim = PI / 2.0 * (1.0 - 1e-9);
    let step = 2.0 * lim / SEARCH_GRID as f64;
    let mut best = (0.0, f(0.0));
    for i in 0..=SEARCH_GRID {
        let d = -lim + step * i as f64;
        let v = f(d);
        if v < best.1 {
            best = (d, v);
        }
    }
    let (mut a, mut b) = ((best.0 - step).max(-lim), (best.0 + step).min(lim));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_STEPS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    best.1.min(fc).min(fd)
}

/// Rejection sampler: `theta` with density proportional to `rho^2`, then
/// `r = rho(theta) sqrt(U)`.
#[derive(Clone)]
pub struct UniformSampler {
    body: PlanarBody,
    rho_max: f64,
}

impl UniformSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector2<f64> {
        loop {
            let th = rng.random::<f64>() * TAU;
            let rho = self.body.radial(th);
            debug_assert!(rho <= self.rho_max, "radial bound violated");
            if rng.random::<f64>() * self.rho_max * self.rho_max <= rho * rho {
                let r = rho * rng.random::<f64>().sqrt();
                return Vector2::new(r * th.cos(), r * th.sin());
            }
        }
    }
}

fn det2(x: &Vector2<f64>, y: &Vector2<f64>) -> f64 {
    x.x * y.y - x.y * y.x
}

/// Monte Carlo estimate of `D(A) = int_A int_A |det(x, y)| dx dy`.
pub fn d_functional(a: &PlanarBody, samples: usize, seed: u64) -> Estimate {
    let area = a.area();
    let sampler = a.sampler();
    let m = stats::par_moments(seed, samples, 1, |rng| {
        let x = sampler.sample(rng);
        let y = sampler.sample(rng);
        vec![det2(&x, &y).abs()]
    });
    m[0].estimate().scale(area * area)
}

/// `D(A)` from the Fourier series of `rho^3`:
/// `D = (1/9) int int rho^3(a) rho^3(b) |sin(b - a)|`, and `|sin|` has
/// coefficients `2/pi` (mode 0) and `-2/(pi(4k^2 - 1))` (mode `2k`).
pub fn d_functional_spectral(a: &PlanarBody, angles: usize) -> Estimate {
    let fine = d_spectral_from(&a.radial_grid(angles));
    let coarse = d_spectral_from(&a.radial_grid(angles / 2));
    Estimate::from_orders(fine, coarse)
}

fn d_spectral_from(rho: &[f64]) -> f64 {
    let n = rho.len();
    let f: Vec<f64> = rho.iter().map(|r| r.powi(3)).collect();
    let step = TAU / n as f64;
    let mut total = 0.0;
    for k in 0..=n / 4 {
        let m = 2 * k;
        let (mut re, mut im) = (0.0, 0.0);
        for (i, v) in f.iter().enumerate() {
            let (s, c) = (m as f64 * step * i as f64).sin_cos();
            re += v * c;
            im -= v * s;
        }
        re /= n as f64;
        im /= n as f64;
        let kernel = if k == 0 { 2.0 / PI } else { -2.0 / (PI * (4.0 * (k * k) as f64 - 1.0)) };
        let mult = if k == 0 { 1.0 } else { 2.0 };
        total += mult * (re * re + im * im) * kernel;
    }
    TAU * TAU * total / 9.0
}

/// `(8 pi^4 / 9) vol(A°)^{-3} - D(A)` with the ingredients.
#[derive(Debug, Clone, Serialize)]
pub struct PlanarLemmaReport {
    pub body: String,
    pub d: Estimate,
    pub d_spectral: Estimate,
    pub polar_area: Estimate,
    pub bound: f64,
    pub slack: Estimate,
    /// `D(A) vol(A°)^3`, equal to `8 pi^4 / 9` for centered ellipses.
    pub normalized: Estimate,
}

impl PlanarLemmaReport {
    pub fn passes(&self) -> bool {
        self.slack.value >= -self.slack.error_bar()
    }
}

pub fn planar_lemma_check(a: &PlanarBody, samples: usize, seed: u64) -> Result<PlanarLemmaReport> {
    if !a.symmetric {
        return Err(Error::Precondition("the planar determinant estimate needs a symmetric body".into()));
    }
    let d = d_functional(a, samples, seed);
    let d_spectral = d_functional_spectral(a, 512);
    let polar_area = a.polar().area_estimate();
    let bound = 8.0 * PI.powi(4) / 9.0 * polar_area.value.powi(-3);
    let slack = Estimate::exact(bound).minus(&d);
    let normalized = d.scale(polar_area.value.powi(3));
    Ok(PlanarLemmaReport { body: a.label.clone(), d, d_spectral, polar_area, bound, slack, normalized })
}

/// Support function of the centroid body `Gamma A` with its first two
/// derivatives, `h(xi) = (1 / (3 V)) int rho^3(theta) |cos(theta - xi)|`.
pub struct CentroidSupport {
    rho: PlanarBody,
    area: f64,
    rule: Rule,
}

impl CentroidSupport {
    pub fn new(a: &PlanarBody, order: usize) -> Result<Self> {
        Ok(Self { rho: a.clone(), area: a.area(), rule: gauss_legendre(order)? })
    }

    /// `[h, h', h'']` at angle `xi`.
    pub fn eval(&self, xi: f64) -> [f64; 3] {
        let mut h = 0.0;
        let mut dh = 0.0;
        // Two arcs on which cos(theta - xi) has constant sign.
        for (start, sign) in [(xi - PI / 2.0, 1.0), (xi + PI / 2.0, -1.0)] {
            for (x, w) in self.rule.iter() {
                let th = start + PI * 0.5 * (x + 1.0);
                let r3 = self.rho.radial(th).powi(3);
                let (s, c) = (th - xi).sin_cos();
                h += w * PI * r3 * sign * c;
                dh += w * PI * r3 * sign * s;
            }
        }
        let scale = 1.0 / (3.0 * self.area);
        let jump = self.rho.radial(xi + PI / 2.0).powi(3) + self.rho.radial(xi - PI / 2.0).powi(3);
        [scale * h, scale * dh, scale * (2.0 * jump - h)]
    }
}

/// Centroid-body identity `vol(Gamma A) = 2 D(A) / vol(A)^2`, and the polar
/// centroid product `vol(Gamma A) vol(A°)`.
#[derive(Debug, Clone, Serialize)]
pub struct CentroidReport {
    pub body: String,
    pub centroid_area: Estimate,
    pub two_d_over_area_sq: Estimate,
    pub two_d_over_area_sq_spectral: Estimate,
    pub polar_centroid_product: f64,
}

impl CentroidReport {
    pub fn passes(&self) -> bool {
        let diff = self.centroid_area.minus(&self.two_d_over_area_sq);
        diff.value.abs() <= diff.error_bar() + 1e-10 && self.polar_centroid_product <= 16.0 / 9.0 + 1e-9
    }
}

pub fn centroid_identity_check(a: &PlanarBody, samples: usize, seed: u64) -> Result<CentroidReport> {
    if !a.symmetric {
        return Err(Error::Precondition("centroid identity is checked for symmetric bodies".into()));
    }
    let gamma = CentroidSupport::new(a, 64)?;
    let fine = crate::body::planar_area(|xi| gamma.eval(xi), 512)?;
    let coarse = crate::body::planar_area(|xi| gamma.eval(xi), 256)?;
    let centroid_area = Estimate::from_orders(fine, coarse);
    let area = a.area();
    let d = d_functional(a, samples, seed);
    let ds = d_functional_spectral(a, 512);
    let polar_area = a.polar().area();
    Ok(CentroidReport {
        body: a.label.clone(),
        centroid_area,
        two_d_over_area_sq: d.scale(2.0 / (area * area)),
        two_d_over_area_sq_spectral: ds.scale(2.0 / (area * area)),
        polar_centroid_product: centroid_area.value * polar_area,
    })
}

/// `M_A = int_A x x^T dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentMatrix(pub Matrix2<f64>);

impl MomentMatrix {
    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    /// `D_2(A) = int_A int_A det(x, y)^2 = 2 det M_A`.
    pub fn d2(&self) -> f64 {
        2.0 * self.det()
    }
}

/// `M_A = int rho^4 / 4 (cos, sin)(cos, sin)^T d theta`.
pub fn moment_matrix(a: &PlanarBody) -> MomentMatrix {
    moment_matrix_from(&a.radial_grid(PLANAR_ANGLES))
}

pub fn moment_matrix_from(rho: &[f64]) -> MomentMatrix {
    let n = rho.len();
    let mut m = Matrix2::zeros();
    for (th, r) in trapezoid_angles(n).into_iter().zip(rho) {
        let v = Vector2::new(th.cos(), th.sin());
        m += v * v.transpose() * r.powi(4);
    }
    MomentMatrix(m * (TAU / n as f64 / 4.0))
}

/// Independent Monte Carlo estimate of `D_2(A)`.
pub fn d2_monte_carlo(a: &PlanarBody, samples: usize, seed: u64) -> Estimate {
    let area = a.area();
    let sampler = a.sampler();
    let m = stats::par_moments(seed, samples, 1, |rng| {
        let x = sampler.sample(rng);
        let y = sampler.sample(rng);
        vec![det2(&x, &y).powi(2)]
    });
    m[0].estimate().scale(area * area)
}

/// `tr(M_A M_{A°}) = int_A int_{A°} <x, y>^2`.
pub fn ball_quadratic_santalo(a: &PlanarBody) -> f64 {
    (moment_matrix(a).0 * moment_matrix(&a.polar()).0).trace()
}

/// Monte Carlo estimate of `int_A int_{A°} <x, y>^2`.
pub fn santalo_pairing_monte_carlo(a: &PlanarBody, samples: usize, seed: u64) -> Estimate {
    let polar = a.polar();
    let scale = a.area() * polar.area();
    let (sa, sb) = (a.sampler(), polar.sampler());
    let m = stats::par_moments(seed, samples, 1, |rng| {
        let x = sa.sample(rng);
        let y = sb.sample(rng);
        vec![x.dot(&y).powi(2)]
    });
    m[0].estimate().scale(scale)
}
