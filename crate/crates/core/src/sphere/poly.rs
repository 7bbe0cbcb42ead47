//! Polynomials on `R^n` with exact rational coefficients.
//!
//! Floating-point evaluation (value, gradient, Hessian) runs on a cached
//! `f64` copy of the terms; the exact terms feed the polynomial sphere
//! integrator.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, int, rat, MonomialExponent, Rational};

use super::calculus::AmbientFunction;

#[derive(Debug, Clone, PartialEq)]
pub struct AmbientPolynomial {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
    float_terms: Vec<(Vec<u32>, f64)>,
}

impl AmbientPolynomial {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new(), float_terms: Vec::new() }
    }

    pub fn constant(dim: usize, c: Rational) -> Self {
        Self::from_terms(dim, [(vec![0; dim], c)])
    }

    /// The coordinate function `x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut e = vec![0; dim];
        e[i] = 1;
        Self::from_terms(dim, [(e, int(1))])
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (mut e, c) in terms {
            e.resize(dim, 0);
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(dim, map)
    }

    /// Terms with `f64` coefficients, converted exactly to rationals.
    pub fn from_float_terms(dim: usize, terms: &[(Vec<u32>, f64)]) -> Result<Self> {
        let mut out = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            if e.len() > dim {
                return Err(Error::Dimension(format!("exponent {e:?} longer than dimension {dim}")));
            }
            let q = Rational::from_float(*c)
                .ok_or_else(|| Error::Argument(format!("non-finite coefficient {c}")))?;
            out.push((e.clone(), q));
        }
        Ok(Self::from_terms(dim, out))
    }

    fn from_map(dim: usize, mut terms: BTreeMap<Vec<u32>, Rational>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        let float_terms = terms.iter().map(|(e, c)| (e.clone(), c.to_f64().unwrap_or(f64::NAN))).collect();
        Self { dim, terms, float_terms }
    }

    /// Polynomial in one coordinate: `sum_k coeffs[k] x_axis^k`.
    pub fn univariate(dim: usize, axis: usize, coeffs: &[Rational]) -> Self {
        Self::from_terms(
            dim,
            coeffs.iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; dim];
                e[axis] = k as u32;
                (e, c.clone())
            }),
        )
    }

    /// Homogeneous harmonic extension of the fourth zonal harmonic,
    /// `x_1^4 - 6/(n+4) x_1^2 |x|^2 + 3/((n+2)(n+4)) |x|^4`.
    pub fn harmonic_y(n: usize) -> Self {
        let ni = n as i64;
        let x1 = Self::coordinate(n, 0);
        let r2 = (0..n).fold(Self::zero(n), |acc, i| acc.add(&Self::coordinate(n, i).pow(2)));
        x1.pow(4)
            .add(&x1.pow(2).mul(&r2).scale(&rat(-6, ni + 4)))
            .add(&r2.pow(2).scale(&rat(3, (ni + 2) * (ni + 4))))
    }

    /// Extension of the fourth zonal harmonic that depends on `x_1` only,
    /// `x_1^4 - 6/(n+4) x_1^2 + 3/((n+2)(n+4))`. Agrees with
    /// [`harmonic_y`](Self::harmonic_y) on the sphere.
    pub fn zonal_y(n: usize) -> Self {
        Self::univariate(n, 0, &exact::y_profile(n as u32))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut map = self.terms.clone();
        for (e, c) in &other.terms {
            *map.entry(e.clone()).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(self.dim, map)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_map(self.dim, self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut map: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *map.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Self::from_map(self.dim, map)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.dim, int(1)), |acc, _| acc.mul(self))
    }

    /// Exact partial derivative along `x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let map = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut d = e.clone();
                d[i] -= 1;
                (d, c * int(e[i] as i64))
            })
            .collect();
        Self::from_map(self.dim, map)
    }

    /// Exact normalized integral over `S^{dim-1}`.
    pub fn sphere_integral(&self) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            acc += c * exact::sphere_poly_integral(&MonomialExponent(e.clone()), self.dim as u32)?;
        }
        Ok(acc)
    }

    /// Ambient Euclidean Laplacian (exact).
    pub fn euclidean_laplacian(&self) -> Self {
        (0..self.dim).fold(Self::zero(self.dim), |acc, i| acc.add(&self.partial(i).partial(i)))
    }

    fn powers(&self, x: &DVector<f64>, max: u32) -> Vec<Vec<f64>> {
        (0..self.dim)
            .map(|i| {
                let mut p = Vec::with_capacity(max as usize + 1);
                let mut acc = 1.0;
                for _ in 0..=max {
                    p.push(acc);
                    acc *= x[i];
                }
                p
            })
            .collect()
    }
}

impl AmbientFunction for AmbientPolynomial {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        let pw = self.powers(x, self.degree());
        self.float_terms
            .iter()
            .map(|(e, c)| c * e.iter().enumerate().map(|(i, &k)| pw[i][k as usize]).product::<f64>())
            .sum()
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let pw = self.powers(x, self.degree());
        let mut g = DVector::zeros(self.dim);
        for (e, c) in &self.float_terms {
            for i in 0..self.dim {
                if e[i] == 0 {
                    continue;
                }
                let mut t = c * e[i] as f64;
                for (l, &k) in e.iter().enumerate() {
                    t *= pw[l][if l == i { k as usize - 1 } else { k as usize }];
                }
                g[i] += t;
            }
        }
        g
    }

    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let pw = self.powers(x, self.degree());
        let mut h = DMatrix::zeros(self.dim, self.dim);
        for (e, c) in &self.float_terms {
            for i in 0..self.dim {
                for j in i..self.dim {
                    let mut d = e.clone();
                    let mut coef = *c;
                    if d[i] == 0 {
                        continue;
                    }
                    coef *= d[i] as f64;
                    d[i] -= 1;
                    if d[j] == 0 {
                        continue;
                    }
                    coef *= d[j] as f64;
                    d[j] -= 1;
                    let t: f64 = coef * d.iter().enumerate().map(|(l, &k)| pw[l][k as usize]).product::<f64>();
                    h[(i, j)] += t;
                    if i != j {
                        h[(j, i)] += t;
                    }
                }
            }
        }
        h
    }

    fn homogeneity(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}
