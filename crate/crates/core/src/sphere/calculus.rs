//! Intrinsic derivatives on `S^{n-1}` computed from ambient derivatives.

use nalgebra::{DMatrix, DVector};

/// A function on `R^n` (or a neighbourhood of the sphere) with closed-form
/// first and second derivatives. Its restriction to the sphere is the
/// spherical function of interest.
pub trait AmbientFunction: Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &DVector<f64>) -> f64;
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64>;
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64>;
    /// Degree of positive homogeneity, when the extension has one.
    fn homogeneity(&self) -> Option<u32> {
        None
    }
}

impl<T: AmbientFunction + ?Sized> AmbientFunction for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &DVector<f64>) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        (**self).gradient(x)
    }
    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        (**self).hessian(x)
    }
    fn homogeneity(&self) -> Option<u32> {
        (**self).homogeneity()
    }
}

/// The fourth zonal harmonic `u_1^4 - 6 u_1^2/(n+4) + 3/((n+2)(n+4))`.
pub fn eval_y(n: usize, u: &DVector<f64>) -> f64 {
    let n = n as f64;
    let s = u[0] * u[0];
    s * s - 6.0 * s / (n + 4.0) + 3.0 / ((n + 2.0) * (n + 4.0))
}

/// Orthonormal basis of `u^perp` (as the columns of an `n x (n-1)` matrix),
/// obtained by Gram–Schmidt completion of `u` against the coordinate axes.
pub fn tangent_frame(u: &DVector<f64>) -> DMatrix<f64> {
    let n = u.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| u[a].abs().total_cmp(&u[b].abs()));
    let candidates = order.into_iter().map(|i| {
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        e
    });
    tangent_frame_from(u, candidates)
}

/// Gram–Schmidt completion of `u` from an arbitrary list of candidate
/// vectors; candidates nearly dependent on the vectors already chosen are
/// skipped.
pub fn tangent_frame_from(u: &DVector<f64>, candidates: impl IntoIterator<Item = DVector<f64>>) -> DMatrix<f64> {
    let n = u.len();
    let mut basis: Vec<DVector<f64>> = vec![u.normalize()];
    for c in candidates {
        if basis.len() == n {
            break;
        }
        let mut v = c;
        for _ in 0..2 {
            for b in &basis {
                v -= b * b.dot(&v);
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            basis.push(v / norm);
        }
    }
    assert_eq!(basis.len(), n, "candidate vectors do not span R^{n}");
    DMatrix::from_columns(&basis[1..])
}

/// Spherical gradient `(I - u u^T) grad f(u)`, as an ambient vector.
pub fn intrinsic_grad<F: AmbientFunction + ?Sized>(f: &F, u: &DVector<f64>) -> DVector<f64> {
    let g = f.gradient(u);
    let c = u.dot(&g);
    g - u * c
}

/// Covariant Hessian of `f|_S` at `u` in the frame `v` (columns tangent at u).
pub fn intrinsic_hessian_in<F: AmbientFunction + ?Sized>(f: &F, u: &DVector<f64>, v: &DMatrix<f64>) -> DMatrix<f64> {
    let radial = u.dot(&f.gradient(u));
    let h = v.transpose() * f.hessian(u) * v;
    let k = h.nrows();
    let mut s = (&h + h.transpose()) * 0.5;
    for i in 0..k {
        s[(i, i)] -= radial;
    }
    s
}

/// Covariant Hessian of `f|_S` at `u` in the frame of [`tangent_frame`].
pub fn intrinsic_hessian<F: AmbientFunction + ?Sized>(f: &F, u: &DVector<f64>) -> DMatrix<f64> {
    intrinsic_hessian_in(f, u, &tangent_frame(u))
}

/// Laplace–Beltrami operator (non-positive convention) at `u`.
pub fn laplacian<F: AmbientFunction + ?Sized>(f: &F, u: &DVector<f64>) -> f64 {
    intrinsic_hessian(f, u).trace()
}

/// `Delta_S f = Delta f - d(d+n-2) f` for a degree-`d` homogeneous extension.
pub fn laplacian_from_homogeneity<F: AmbientFunction + ?Sized>(f: &F, u: &DVector<f64>) -> Option<f64> {
    let d = f.homogeneity()? as f64;
    let n = f.dim() as f64;
    Some(f.hessian(u).trace() - d * (d + n - 2.0) * f.value(u))
}

/// The 1-homogeneous extension `x -> |x| f(x/|x|)` of an arbitrary ambient
/// function. Support functions of linear images need a genuinely
/// homogeneous extension because their Hessians are evaluated off the sphere.
#[derive(Debug, Clone)]
pub struct OneHomogeneous<F>(pub F);

impl<F: AmbientFunction> AmbientFunction for OneHomogeneous<F> {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        let r = x.norm();
        r * self.0.value(&(x / r))
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let r = x.norm();
        let u = x / r;
        let f = self.0.value(&u);
        let g = self.0.gradient(&u);
        let c = u.dot(&g);
        g + &u * (f - c)
    }

    fn hessian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = x.len();
        let r = x.norm();
        let u = x / r;
        let f = self.0.value(&u);
        let g = self.0.gradient(&u);
        let h = self.0.hessian(&u);
        let p = DMatrix::identity(n, n) - &u * u.transpose();
        (&p * h * &p + &p * (f - u.dot(&g))) / r
    }

    fn homogeneity(&self) -> Option<u32> {
        Some(1)
    }
}
