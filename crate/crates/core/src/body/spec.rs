//! JSON description of test bodies.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::AmbientPolynomial;

use super::SupportBody;

/// One monomial `coeff * x^exponents` of a perturbation polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialTerm {
    pub exponents: Vec<u32>,
    pub coeff: f64,
}

/// Serializable body description, e.g. `{"type": "zonal4", "t": 0.05}` or
/// `{"type": "ellipsoid", "axes": [1.0, 1.3, 0.7]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ball {
        #[serde(default = "unit")]
        radius: f64,
    },
    Ellipsoid {
        axes: Vec<f64>,
    },
    /// `h = 1 + t Y` with `Y` the fourth zonal harmonic.
    Zonal4 {
        t: f64,
    },
    /// `h = 1 + t P` with `P` given by its monomials.
    HarmonicPerturbation {
        coeffs: Vec<PolynomialTerm>,
        t: f64,
    },
}

fn unit() -> f64 {
    1.0
}

impl BodySpec {
    /// Build the body in `R^n`.
    pub fn build(&self, n: usize) -> Result<SupportBody> {
        if n < 1 {
            return Err(Error::Dimension("bodies need n >= 1".into()));
        }
        match self {
            BodySpec::Ball { radius } => {
                if radius.is_nan() || *radius <= 0.0 {
                    return Err(Error::Argument(format!("ball radius must be positive, got {radius}")));
                }
                Ok(SupportBody::ball(n, *radius))
            }
            BodySpec::Ellipsoid { axes } => {
                if axes.len() != n {
                    return Err(Error::Dimension(format!("{} semi-axes given for a body in R^{n}", axes.len())));
                }
                SupportBody::ellipsoid(axes)
            }
            BodySpec::Zonal4 { t } => Ok(SupportBody::zonal4(n, *t)),
            BodySpec::HarmonicPerturbation { coeffs, t } => {
                let terms: Vec<(Vec<u32>, f64)> = coeffs.iter().map(|c| (c.exponents.clone(), c.coeff)).collect();
                let poly = AmbientPolynomial::from_float_terms(n, &terms)?;
                Ok(SupportBody::harmonic_perturbation(poly, *t))
            }
        }
    }

    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Argument(format!("invalid body spec: {e}")))
    }
}
