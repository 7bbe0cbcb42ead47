//! Sampling laws on spheres and Grassmannians, and frame independence of
//! the intrinsic calculus.

use nalgebra::{DMatrix, DVector};
use querm_core::grassmann::{self, radon_average, t_of, BetaQuadrature, Subspace};
use querm_core::sphere::calculus::{intrinsic_grad, intrinsic_hessian, intrinsic_hessian_in, tangent_frame_from};
use querm_core::sphere::{eval_y, laplacian, random_unit, sample_sphere, AmbientPolynomial, SphereQuadrature};
use querm_core::stats::{stream_rng, Moments};
use querm_core::exact;

/// Kolmogorov–Smirnov critical value at a 3-sigma-equivalent level
/// (alpha = 0.0027).
const KS_C: f64 = 1.82;

fn two_sample_ks(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

fn random_rotation(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = stream_rng(seed, 7);
    let f = Subspace::random(n, n, &mut rng);
    f.basis().clone()
}

#[test]
fn first_coordinate_law_is_rotation_invariant() {
    let count = 100_000;
    for n in [3usize, 5] {
        let r = random_rotation(n, n as u64);
        let a = random_unit(n, &mut stream_rng(99, n as u64));
        let first: Vec<f64> = sample_sphere(n, count, 10).unwrap().iter().map(|u| u[0]).collect();
        let rotated: Vec<f64> = sample_sphere(n, count, 11).unwrap().iter().map(|u| (&r * &**u).dot(&a)).collect();
        let d = two_sample_ks(first.clone(), rotated);
        let crit = KS_C * (2.0 / count as f64).sqrt();
        assert!(d < crit, "n={n}: KS {d} >= {crit}");
        if n == 3 {
            // Archimedes: u_1 is uniform on [-1, 1].
            let mut s = first;
            s.sort_by(f64::total_cmp);
            let d1 = s
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let f = (x + 1.0) / 2.0;
                    (f - i as f64 / count as f64).abs().max((f - (i + 1) as f64 / count as f64).abs())
                })
                .fold(0.0, f64::max);
            assert!(d1 < KS_C / (count as f64).sqrt(), "one-sample KS {d1}");
        }
    }
}

#[test]
fn y_is_an_eigenfunction_at_every_node() {
    for n in [3usize, 6] {
        let lambda = 4.0 * (n as f64 + 2.0);
        let y = AmbientPolynomial::zonal_y(n);
        let quad = if n == 3 { SphereQuadrature::ProductRule { order: 12 } } else { SphereQuadrature::MonteCarlo { seed: 3, count: 500 } };
        for (u, _) in quad.nodes(n).unwrap() {
            let l = laplacian(&y, &u);
            let target = -lambda * eval_y(n, &u);
            assert!((l - target).abs() <= 1e-10 * target.abs().max(1e-3), "n={n}: {l} vs {target}");
        }
    }
}

#[test]
fn frame_invariant_scalars() {
    let mut rng = stream_rng(4, 0);
    let f = AmbientPolynomial::from_float_terms(4, &[(vec![3, 1], 0.7), (vec![0, 2, 1], -1.1), (vec![1], 0.4)]).unwrap();
    for _ in 0..20 {
        let u = random_unit(4, &mut rng);
        let h0 = intrinsic_hessian(&f, &u);
        let g0 = intrinsic_grad(&f, &u).norm_squared();
        let cands: Vec<DVector<f64>> = (0..5).map(|_| random_unit(4, &mut rng)).collect();
        let v = tangent_frame_from(&u, cands);
        let h1 = intrinsic_hessian_in(&f, &u, &v);
        assert!((h0.trace() - h1.trace()).abs() < 1e-12);
        assert!((h0.norm_squared() - h1.norm_squared()).abs() < 1e-11);
        assert!((h0.determinant() - h1.determinant()).abs() < 1e-11);
        assert!(g0.is_finite());
    }
}

#[test]
fn haar_statistics_do_not_depend_on_the_reference_axis() {
    let (n, j, count) = (7usize, 3usize, 100_000usize);
    let a = random_unit(n, &mut stream_rng(5, 0));
    let mut rng = stream_rng(6, 0);
    let mut e1 = Moments::default();
    let mut ea = Moments::default();
    for _ in 0..count {
        let f = Subspace::random(n, j, &mut rng);
        e1.push(t_of(&f));
        let p = f.coordinates(&a);
        ea.push(p.norm_squared());
    }
    let (x, y) = (e1.estimate(), ea.estimate());
    let diff = x.minus(&y);
    assert!(diff.value.abs() < diff.error_bar(), "{x:?} vs {y:?}");
    let exact = j as f64 / n as f64;
    assert!(y.agrees_with(exact));
}

#[test]
fn radon_average_ignores_the_basis_of_f() {
    let mut rng = stream_rng(7, 0);
    let quad = SphereQuadrature::ProductRule { order: 16 };
    for j in [2usize, 3] {
        let f = Subspace::random(6, j, &mut rng);
        let q = Subspace::random(j, j, &mut rng).basis().clone();
        let g = f.rebased(&q).unwrap();
        let phi = |x: &DVector<f64>| {
            let y = eval_y(6, x);
            y * y + x[1].powi(4)
        };
        let a = radon_average(phi, &f, &quad).unwrap().value;
        let b = radon_average(phi, &g, &quad).unwrap().value;
        assert!((a - b).abs() < 1e-12, "j={j}: {a} vs {b}");
    }
}

#[test]
fn beta_reduction_is_exact_for_polynomials_in_t() {
    for (n, j) in [(11usize, 1usize), (11, 2), (11, 5), (40, 17), (6, 6)] {
        let q = BetaQuadrature::new(n, j, 64).unwrap();
        for r in 0..=4u32 {
            let got = q.integrate(|t| t.powi(r as i32));
            let want = exact::to_f64(&exact::t_moment(n as u32, j as u32, r).unwrap());
            assert!((got - want).abs() <= 1e-12, "n={n} j={j} r={r}");
        }
    }
    let est = grassmann::t_moment_estimates(9, 4, 50_000, 8).unwrap();
    for (r, e) in est.iter().enumerate() {
        let want = exact::to_f64(&exact::t_moment(9, 4, r as u32 + 1).unwrap());
        assert!(e.agrees_with(want), "r={}: {e:?} vs {want}", r + 1);
    }
}
