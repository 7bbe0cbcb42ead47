//! Polynomial profiles `psi` of zonal functions `u -> psi(<a, u>)`.

use serde::{Deserialize, Serialize};

use crate::exact::{self, to_f64};
use crate::quadrature::Rule;

/// `psi(s) = sum_k coeffs[k] s^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZonalProfile {
    pub coeffs: Vec<f64>,
}

impl ZonalProfile {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// Profile of the fourth zonal harmonic in dimension `n`.
    pub fn y(n: usize) -> Self {
        Self { coeffs: exact::y_profile(n as u32).iter().map(to_f64).collect() }
    }

    /// `1 + t phi`.
    pub fn perturbation(t: f64, phi: &ZonalProfile) -> Self {
        let mut coeffs: Vec<f64> = phi.coeffs.iter().map(|c| t * c).collect();
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        coeffs[0] += 1.0;
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn value(&self, s: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }

    pub fn d1(&self, s: f64) -> f64 {
        self.coeffs.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, c)| acc * s + k as f64 * c)
    }

    pub fn d2(&self, s: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(2)
            .rev()
            .fold(0.0, |acc, (k, c)| acc * s + (k * (k - 1)) as f64 * c)
    }

    /// `c -> psi(s c)`.
    pub fn scaled_argument(&self, s: f64) -> Self {
        let mut p = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c * p;
                p *= s;
                v
            })
            .collect();
        Self { coeffs }
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| lambda * c).collect() }
    }

    /// `(psi(s) + psi(-s)) / 2`.
    pub fn even_part(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c } else { 0.0 }).collect(),
        }
    }

    /// Curvature eigenvalue along the meridian, `psi - s psi' + (1 - s^2) psi''`.
    pub fn meridian(&self, s: f64) -> f64 {
        self.value(s) - s * self.d1(s) + (1.0 - s * s) * self.d2(s)
    }

    /// Curvature eigenvalue along the parallels (multiplicity `m - 2`),
    /// `psi - s psi'`.
    pub fn parallel(&self, s: f64) -> f64 {
        self.value(s) - s * self.d1(s)
    }
}

/// `vol_m(K) / kappa_m` for the body in `R^m` with support function
/// `u -> psi(u_1)`, by the one-dimensional reduction of the support-volume
/// integral against the law of `u_1`.
pub fn zonal_volume_ratio(psi: &ZonalProfile, m: usize, law: &Rule) -> f64 {
    if m == 1 {
        return 0.5 * (psi.value(1.0) + psi.value(-1.0));
    }
    law.integrate(|s| psi.value(s) * psi.meridian(s) * psi.parallel(s).powi(m as i32 - 2))
}

/// `vol_m(K°) / kappa_m` for the same body: the mean of `psi(u_1)^{-m}`.
pub fn zonal_polar_volume_ratio(psi: &ZonalProfile, m: usize, law: &Rule) -> f64 {
    if m == 1 {
        return 0.5 * (1.0 / psi.value(1.0) + 1.0 / psi.value(-1.0));
    }
    law.integrate(|s| psi.value(s).powi(-(m as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::first_coordinate_rule;

    #[test]
    fn derivatives() {
        let p = ZonalProfile::new(vec![1.0, -2.0, 0.5, 3.0]);
        let s = 0.37;
        let h = 1e-5;
        assert!(((p.value(s + h) - p.value(s - h)) / (2.0 * h) - p.d1(s)).abs() < 1e-9);
        assert!(((p.d1(s + h) - p.d1(s - h)) / (2.0 * h) - p.d2(s)).abs() < 1e-9);
        assert!((p.scaled_argument(0.5).value(0.8) - p.value(0.4)).abs() < 1e-15);
        assert!((p.even_part().value(s) - 0.5 * (p.value(s) + p.value(-s))).abs() < 1e-15);
    }

    #[test]
    fn ball_volume_ratio_is_power_of_radius() {
        for m in 1..8 {
            let law = if m == 1 { Rule { nodes: vec![], weights: vec![] } } else { first_coordinate_rule(m, 32).unwrap() };
            let r = 1.3f64;
            let v = zonal_volume_ratio(&ZonalProfile::constant(r), m, &law);
            assert!((v - r.powi(m as i32)).abs() < 1e-13, "m = {m}");
        }
    }

    #[test]
    fn planar_perturbation_area() {
        // psi(s) = 1 + t(2 s^2 - 1) is 1 + t cos 2 theta; area ratio 1 - 3t^2/2.
        let t = 0.1;
        let psi = ZonalProfile::new(vec![1.0 - t, 0.0, 2.0 * t]);
        let v = zonal_volume_ratio(&psi, 2, &first_coordinate_rule(2, 64).unwrap());
        assert!((v - (1.0 - 1.5 * t * t)).abs() < 1e-14);
    }
}
