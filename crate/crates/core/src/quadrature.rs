//! One-dimensional Gauss rules.
//!
//! All rules are returned as probability rules (weights summing to one)
//! because every integral in the crate is taken against a normalized
//! measure.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Nodes and normalized weights of a one-dimensional rule.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    fn normalized(mut self) -> Self {
        let total: f64 = self.weights.iter().sum();
        self.weights.iter_mut().for_each(|w| *w /= total);
        self
    }
}

type RuleKey = (usize, u64, u64);

fn rule_cache() -> &'static Mutex<HashMap<RuleKey, Arc<Rule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<Rule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Jacobi rule on `[-1, 1]` for the weight `(1-x)^alpha (1+x)^beta`,
/// computed by Golub–Welsch from the monic three-term recurrence. Rules are
/// memoized per `(order, alpha, beta)`.
pub fn gauss_jacobi(order: usize, alpha: f64, beta: f64) -> Result<Rule> {
    let key = (order, alpha.to_bits(), beta.to_bits());
    if let Some(r) = rule_cache().lock().expect("rule cache poisoned").get(&key) {
        return Ok((**r).clone());
    }
    let rule = golub_welsch(order, alpha, beta)?;
    rule_cache().lock().expect("rule cache poisoned").insert(key, Arc::new(rule.clone()));
    Ok(rule)
}

fn golub_welsch(order: usize, alpha: f64, beta: f64) -> Result<Rule> {
    if order == 0 {
        return Err(Error::Argument("quadrature order must be positive".into()));
    }
    if alpha <= -1.0 || beta <= -1.0 {
        return Err(Error::Argument(format!("Jacobi parameters must exceed -1, got ({alpha}, {beta})")));
    }
    let ab = alpha + beta;
    let mut jac = DMatrix::<f64>::zeros(order, order);
    for k in 0..order {
        let kf = k as f64;
        let diag = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else if alpha == beta {
            0.0
        } else {
            (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        jac[(k, k)] = diag;
        if k + 1 < order {
            let m = kf + 1.0;
            let b2 = if k == 0 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                let s = 2.0 * m + ab;
                4.0 * m * (m + alpha) * (m + beta) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            let off = b2.sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(Rule { nodes, weights }.normalized())
}

/// Gauss–Legendre on `[-1, 1]`, weights normalized to one.
pub fn gauss_legendre(order: usize) -> Result<Rule> {
    gauss_jacobi(order, 0.0, 0.0)
}

/// Gauss–Jacobi rule for the Beta(`a`, `b`) law on `[0, 1]`.
pub fn beta_rule(order: usize, a: f64, b: f64) -> Result<Rule> {
    if a <= 0.0 || b <= 0.0 {
        return Err(Error::Argument(format!("Beta parameters must be positive, got ({a}, {b})")));
    }
    let r = gauss_jacobi(order, b - 1.0, a - 1.0)?;
    Ok(Rule { nodes: r.nodes.iter().map(|x| 0.5 * (1.0 + x)).collect(), weights: r.weights })
}

/// Law of the first coordinate of a uniform point on `S^{m-1}`, written in
/// the polar angle: Gauss–Legendre in `theta` on `[0, pi]` with the weight
/// `sin^{m-2} theta` folded in. Nodes are returned as `cos theta`.
///
/// Integrands in the crate are smooth in the angle, so this converges
/// spectrally even when `(m-3)/2` is a half-integer.
pub fn first_coordinate_rule(m: usize, order: usize) -> Result<Rule> {
    if m < 2 {
        return Err(Error::Dimension(format!("first-coordinate law needs m >= 2, got {m}")));
    }
    let gl = gauss_legendre(order)?;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let (nodes, weights) = gl
        .iter()
        .map(|(x, w)| {
            let theta = half_pi * (x + 1.0);
            (theta.cos(), w * theta.sin().powi(m as i32 - 2))
        })
        .unzip();
    Ok(Rule { nodes, weights }.normalized())
}

/// Equispaced periodic angles on `[0, 2 pi)` with equal weights.
pub fn trapezoid_angles(count: usize) -> Vec<f64> {
    let step = std::f64::consts::TAU / count as f64;
    (0..count).map(|i| step * i as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let r = gauss_legendre(10).unwrap();
        // mean of x^18 over [-1,1] is 1/19
        assert!((r.integrate(|x| x.powi(18)) - 1.0 / 19.0).abs() < 1e-15);
        assert!(r.integrate(|x| x.powi(7)).abs() < 1e-15);
    }

    #[test]
    fn chebyshev_case_is_handled() {
        // alpha = beta = -1/2: nodes are cos((2i-1) pi / 2N).
        let r = gauss_jacobi(8, -0.5, -0.5).unwrap();
        for (i, x) in r.nodes.iter().enumerate() {
            let expect = -((2 * i + 1) as f64 * std::f64::consts::PI / 16.0).cos();
            assert!((x - expect).abs() < 1e-14);
            assert!((r.weights[i] - 0.125).abs() < 1e-14);
        }
    }

    #[test]
    fn beta_rule_moments() {
        // Beta(1, 4): E[T^2] = (1*2)/(5*6)
        let r = beta_rule(16, 1.0, 4.0).unwrap();
        assert!((r.integrate(|t| t * t) - 2.0 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn first_coordinate_moment_on_s2() {
        // u_1 is uniform on [-1,1] for S^2: E[u1^4] = 1/5
        let r = first_coordinate_rule(3, 32).unwrap();
        assert!((r.integrate(|s| s.powi(4)) - 0.2).abs() < 1e-14);
        // S^1: E[cos^2] = 1/2
        let r = first_coordinate_rule(2, 32).unwrap();
        assert!((r.integrate(|s| s * s) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gauss_jacobi(0, 0.0, 0.0).is_err());
        assert!(gauss_jacobi(4, -1.0, 0.0).is_err());
        assert!(beta_rule(4, 0.0, 1.0).is_err());
    }
}
