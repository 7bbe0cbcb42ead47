//! Exact rational evaluation of the closed forms attached to the fourth
//! zonal harmonic: sphere moments, Grassmannian moments of `T_j`, the
//! `L^2` norm of `Y`, the averages `B_j`, the second-order coefficients
//! `A_j`, and the cross-dimensional coefficient.
//!
//! Every function here is pure and exact. Quantities described as being "in
//! units of `||Y||^2`" are returned without that factor.

pub mod certify;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact reduced fraction with positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Nearest double, for handing exact targets to floating-point checks.
pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exponent vector of a monomial `u_1^{e_1} ... u_n^{e_n}`.
///
/// A vector shorter than the ambient dimension is padded with zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialExponent(pub Vec<u32>);

impl MonomialExponent {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// `a (a+1) ... (a+r-1)`, and `1` for `r = 0`.
pub fn rising_factorial(a: &Rational, r: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = a.clone();
    for _ in 0..r {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

fn check_sphere_dim(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::Dimension(format!("sphere S^(n-1) needs n >= 2, got n = {n}")));
    }
    Ok(())
}

fn check_j(n: u32, j: u32) -> Result<()> {
    if j < 1 || j > n {
        return Err(Error::Argument(format!("need 1 <= j <= n, got j = {j}, n = {n}")));
    }
    Ok(())
}

/// Normalized moment `int u_1^{2r} dsigma = (1/2)_r / (n/2)_r` on `S^{n-1}`.
pub fn sphere_coordinate_moment(n: u32, r: u32) -> Result<Rational> {
    check_sphere_dim(n)?;
    Ok(rising_factorial(&rat(1, 2), r) / rising_factorial(&rat(n as i64, 2), r))
}

/// Normalized integral of `u_1^{2 a_1} ... u_j^{2 a_j}` over `S^{n-1}`,
/// indexed by the half-exponents `a`.
pub fn sphere_even_moment(half_exponents: &[u32], n: u32) -> Result<Rational> {
    check_sphere_dim(n)?;
    if half_exponents.len() > n as usize {
        return Err(Error::Dimension(format!(
            "{} exponents exceed ambient dimension {n}",
            half_exponents.len()
        )));
    }
    let half = rat(1, 2);
    let mut num = Rational::one();
    let mut total = 0u32;
    for &a in half_exponents {
        num *= rising_factorial(&half, a);
        total += a;
    }
    Ok(num / rising_factorial(&rat(n as i64, 2), total))
}

/// Exact normalized integral of the monomial `u^e` over `S^{n-1}`; zero as
/// soon as one exponent is odd.
pub fn sphere_poly_integral(exponents: &MonomialExponent, n: u32) -> Result<Rational> {
    check_sphere_dim(n)?;
    if exponents.0.len() > n as usize {
        return Err(Error::Dimension(format!(
            "monomial has {} variables, ambient dimension is {n}",
            exponents.0.len()
        )));
    }
    if exponents.0.iter().any(|e| e % 2 == 1) {
        return Ok(Rational::zero());
    }
    let half: Vec<u32> = exponents.0.iter().map(|e| e / 2).collect();
    sphere_even_moment(&half, n)
}

/// `M_r(j) = prod_{i<r} (j+2i)/(n+2i)`: the `r`-th moment of
/// `T_j(F) = |P_F e_1|^2` under the Haar measure on `G(n, j)`.
pub fn t_moment(n: u32, j: u32, r: u32) -> Result<Rational> {
    check_j(n, j)?;
    let mut acc = Rational::one();
    for i in 0..r {
        acc *= rat((j + 2 * i) as i64, (n + 2 * i) as i64);
    }
    Ok(acc)
}

/// Spherical Laplace eigenvalue of a degree-four harmonic: `4(n+2)`.
pub fn lambda_fourth(n: u32) -> Rational {
    int(4 * (n as i64 + 2))
}

/// Coefficients `[c0, c1, c2, c3, c4]` of the profile
/// `Y(u) = u_1^4 - 6 u_1^2/(n+4) + 3/((n+2)(n+4))`.
pub fn y_profile(n: u32) -> Vec<Rational> {
    let n = n as i64;
    vec![rat(3, (n + 2) * (n + 4)), Rational::zero(), rat(-6, n + 4), Rational::zero(), int(1)]
}

/// `||Y||_2^2 = 24(n-1)(n+1) / (n (n+2)^2 (n+4)^2 (n+6))`.
pub fn norm_y_sq(n: u32) -> Result<Rational> {
    check_sphere_dim(n)?;
    let n = n as i64;
    Ok(rat(24 * (n - 1) * (n + 1), n * (n + 2).pow(2) * (n + 4).pow(2) * (n + 6)))
}

/// Product of two polynomials given by ascending coefficients.
pub fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (k, y) in b.iter().enumerate() {
            out[i + k] += x * y;
        }
    }
    out
}

/// `||Y||^2` obtained by squaring the profile and integrating term by term
/// with [`sphere_coordinate_moment`].
pub fn norm_y_sq_expanded(n: u32) -> Result<Rational> {
    check_sphere_dim(n)?;
    let p = y_profile(n);
    let sq = poly_mul(&p, &p);
    let mut acc = Rational::zero();
    for (deg, c) in sq.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        debug_assert!(deg % 2 == 0);
        acc += c * sphere_coordinate_moment(n, (deg / 2) as u32)?;
    }
    Ok(acc)
}

/// `j R_j Y(F)` as a polynomial in `T = T_j(F)`:
/// `3T^2/(j+2) - 6T/(n+4) + 3j/((n+2)(n+4))`.
pub fn jrjy_in_t(n: u32, j: u32) -> Result<Vec<Rational>> {
    check_j(n, j)?;
    let (n, j) = (n as i64, j as i64);
    Ok(vec![rat(3 * j, (n + 2) * (n + 4)), rat(-6, n + 4), rat(3, j + 2)])
}

/// `int_G (j R_j Y)^2 dF` by squaring [`jrjy_in_t`] and integrating against
/// the moments of `T_j`.
pub fn j_average_expanded(n: u32, j: u32) -> Result<Rational> {
    let p = jrjy_in_t(n, j)?;
    let sq = poly_mul(&p, &p);
    let mut acc = Rational::zero();
    for (r, c) in sq.iter().enumerate() {
        acc += c * t_moment(n, j, r as u32)?;
    }
    Ok(acc)
}

/// `B_j = 3 (n-j)(n-j+2) / ((j+2)(n-1)(n+1))`.
pub fn bj(n: u32, j: u32) -> Result<Rational> {
    check_sphere_dim(n)?;
    check_j(n, j)?;
    let (n, j) = (n as i64, j as i64);
    Ok(rat(3 * (n - j) * (n - j + 2), (j + 2) * (n - 1) * (n + 1)))
}

/// Closed form `int_G (j R_j Y)^2 dF = j B_j ||Y||^2` (absolute, not in units).
pub fn j_average_closed(n: u32, j: u32) -> Result<Rational> {
    Ok(int(j as i64) * bj(n, j)? * norm_y_sq(n)?)
}

/// Closed second-order coefficient of `log I_{j,-n}(K_t)^{1/j}`, in units
/// of `||Y||^2`: `3(n+4)(n-j)(j+1) / (2(j+2)(n-1))`.
pub fn aj_closed(n: u32, j: u32) -> Result<Rational> {
    check_sphere_dim(n)?;
    check_j(n, j)?;
    let (n, j) = (n as i64, j as i64);
    Ok(rat(3 * (n + 4) * (n - j) * (j + 1), 2 * (j + 2) * (n - 1)))
}

/// The same coefficient assembled from its two pieces,
/// `(n-j)/2 (lambda/(n-1) - 1) - (n+1)/2 B_j`, with `lambda = 4(n+2)`.
pub fn aj_assembled(n: u32, j: u32) -> Result<Rational> {
    let b = bj(n, j)?;
    let ni = n as i64;
    let volume_part = rat(ni - j as i64, 2) * (lambda_fourth(n) / int(ni - 1) - int(1));
    Ok(volume_part - rat(ni + 1, 2) * b)
}

fn check_mkn(m: u32, k: u32, n: u32) -> Result<()> {
    if !(1 <= m && m < k && k < n) {
        return Err(Error::Precondition(format!("need 1 <= m < k <= n-1, got (m,k,n) = ({m},{k},{n})")));
    }
    Ok(())
}

/// Coefficient of `||Y||^2 t^2` in `log(I_m^{1/m} / I_k^{1/k})`:
/// `3(n+4)(k-m)((m+2)(k+2)-n-2) / (2(n-1)(m+2)(k+2))`.
pub fn coefficient(m: u32, k: u32, n: u32) -> Result<Rational> {
    check_mkn(m, k, n)?;
    let (m, k, n) = (m as i64, k as i64, n as i64);
    Ok(rat(3 * (n + 4) * (k - m) * ((m + 2) * (k + 2) - n - 2), 2 * (n - 1) * (m + 2) * (k + 2)))
}

/// Whether the zonal perturbation reverses the `(m, k)` comparison in `R^n`,
/// i.e. `n > (m+2)(k+2) - 2`.
pub fn counterexample_exists(m: u32, k: u32, n: u32) -> Result<bool> {
    check_mkn(m, k, n)?;
    Ok(n + 2 > (m + 2) * (k + 2))
}

/// Sign of a rational as -1, 0, 1.
pub fn sign(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_negative() {
        -1
    } else {
        1
    }
}
