use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::*;
use crate::sphere::calculus::tangent_frame_from;
use crate::sphere::eval_y;

fn s2(order: usize) -> SphereQuadrature {
    SphereQuadrature::ProductRule { order }
}

#[test]
fn ball_certificate_margin_is_one() {
    let c = certify_convex(&SupportBody::ball(3, 1.0), &s2(8)).unwrap();
    assert!((c.margin - 1.0).abs() < 1e-12);
    let c = certify_convex(&SupportBody::ball(6, 1.0), &SphereQuadrature::MonteCarlo { seed: 1, count: 100 }).unwrap();
    assert!((c.margin - 1.0).abs() < 1e-12);
}

#[test]
fn zonal_certification_and_failure() {
    let quad = SphereQuadrature::MonteCarlo { seed: 2, count: 500 };
    assert!(certify_convex(&SupportBody::zonal4(11, 0.05), &quad).unwrap().margin > 0.0);
    let (lo, hi) = zonal_convexity_range(&ZonalProfile::y(11), 11);
    assert!(lo < -0.05 && hi > 0.05);
    match certify_convex(&SupportBody::zonal4(11, hi * 1.05), &quad) {
        Err(Error::NotConvex { min_eigenvalue, .. }) => assert!(min_eigenvalue < 0.0),
        other => panic!("expected failure, got {other:?}"),
    }
    assert!(certify_convex(&SupportBody::zonal4(11, hi * 0.95), &quad).is_ok());
}

#[test]
fn non_zonal_oracle_detects_nonconvexity() {
    let poly = AmbientPolynomial::zonal_y(3);
    let body = SupportBody::harmonic_perturbation(poly, 2.0);
    assert!(matches!(certify_convex(&body, &s2(16)), Err(Error::NotConvex { .. })));
}

#[test]
fn ball_volumes() {
    for (n, quad) in [(2, s2(64)), (3, s2(32))] {
        let v = volume(&SupportBody::ball(n, 1.5), &quad).unwrap();
        assert!((v.value - kappa(n) * 1.5f64.powi(n as i32)).abs() < 1e-10);
    }
    let v = zonal_volume_ratio_estimate(&ZonalProfile::constant(1.0), 7, 64).unwrap();
    assert!((v.value - 1.0).abs() < 1e-13);
}

#[test]
fn ellipsoid_volume_by_support_formula() {
    let e = SupportBody::ellipsoid(&[1.0, 1.3, 0.7]).unwrap();
    let v = volume(&e, &s2(64)).unwrap();
    assert!((v.value - 4.0 * PI / 3.0 * 0.91).abs() < 1e-8, "{}", v.value);
    let p = polar_volume(&e, &s2(64)).unwrap();
    assert!((p.value - 4.0 * PI / 3.0 / 0.91).abs() < 1e-8);
}

#[test]
fn second_order_volume_expansion() {
    // vol / kappa_n = 1 + (n/2)((n-1) - lambda) ||Y||^2 t^2 + O(t^3)
    for n in [3usize, 5, 11] {
        let nf = n as f64;
        let norm = crate::exact::to_f64(&crate::exact::norm_y_sq(n as u32).unwrap());
        let target = 2.0 * (nf / 2.0) * ((nf - 1.0) - 4.0 * (nf + 2.0)) * norm;
        let v = |t: f64| zonal_volume_ratio_estimate(&ZonalProfile::perturbation(t, &ZonalProfile::y(n)), n, 128).unwrap().value;
        let h = 1e-3;
        let d2 = (v(h) - 2.0 * v(0.0) + v(-h)) / (h * h);
        assert!((d2 - target).abs() <= 1e-3 * target.abs(), "n={n}: {d2} vs {target}");
    }
}

#[test]
fn zonal_reduction_matches_sphere_quadrature() {
    let body = SupportBody::zonal4(3, 0.1);
    let full = volume(&body, &s2(48)).unwrap();
    let reduced = best_volume(&body).unwrap();
    assert!((full.value - reduced.value).abs() < 1e-12);
    let mc = volume(&SupportBody::zonal4(5, 0.1), &SphereQuadrature::MonteCarlo { seed: 3, count: 200_000 }).unwrap();
    let red5 = best_volume(&SupportBody::zonal4(5, 0.1)).unwrap();
    assert!(mc.agrees_with(red5.value));
}

#[test]
fn planar_areas() {
    assert!((planar_area(|_| [1.0, 0.0, 0.0], 64).unwrap() - PI).abs() < 1e-14);
    let t = 0.1;
    let h = |th: f64| [1.0 + t * (2.0 * th).cos(), -2.0 * t * (2.0 * th).sin(), -4.0 * t * (2.0 * th).cos()];
    assert!((planar_area(h, 64).unwrap() - PI * (1.0 - 1.5 * t * t)).abs() < 1e-13);
    let (a, b) = (2.0f64, 0.5f64);
    let e = SupportBody::ellipsoid(&[a, b]).unwrap();
    assert!((planar_area(e.planar_support().unwrap(), 512).unwrap() - PI * a * b).abs() < 1e-10);
    let bad = |th: f64| [1.0 + 0.5 * (2.0 * th).cos(), 0.0, -2.0 * (2.0 * th).cos()];
    assert!(planar_area(bad, 64).is_err());
}

#[test]
fn santalo_equality_for_ellipses() {
    let e = SupportBody::ellipsoid(&[2.0, 0.3]).unwrap();
    let area = best_volume(&e).unwrap().value;
    let polar = polar_volume(&e, &s2(1024)).unwrap().value;
    assert!((area * polar - PI * PI).abs() < 1e-9);
}

#[test]
fn polar_volume_homogeneity() {
    let k = SupportBody::zonal4(3, 0.1);
    let a = polar_volume(&k, &s2(32)).unwrap().value;
    let b = polar_volume(&k.dilate(1.7).unwrap(), &s2(32)).unwrap().value;
    assert!((b - a * 1.7f64.powi(-3)).abs() < 1e-12);
    assert!((best_polar_volume(&k).unwrap().value - a).abs() < 1e-12);
}

#[test]
fn projections() {
    let mut rng = stats::stream_rng(4, 0);
    let ball = SupportBody::ball(5, 1.0);
    let f = Subspace::random(5, 3, &mut rng);
    let p = ball.project(&f).unwrap();
    assert!((best_volume(&p).unwrap().value - kappa(3)).abs() < 1e-12);

    let k = SupportBody::zonal4(6, 0.1);
    let f = Subspace::random(6, 3, &mut rng);
    let p = k.project(&f).unwrap();
    let z = p.zonal_data().unwrap();
    let s = crate::grassmann::t_of(&f).sqrt();
    let axis = DVector::from_column_slice(&z.axis);
    let expected_axis = f.coordinates(&DVector::from_fn(6, |i, _| if i == 0 { 1.0 } else { 0.0 })) / s;
    assert!((axis - expected_axis).norm() < 1e-12);
    for _ in 0..10 {
        let y = random_unit(3, &mut rng);
        let direct = p.support(&y);
        let via_profile = z.profile.value(DVector::from_column_slice(&z.axis).dot(&y));
        assert!((direct - via_profile).abs() < 1e-14);
        assert!((direct - (1.0 + 0.1 * eval_y(6, &f.embed(&y)))).abs() < 1e-14);
    }
    let line = Subspace::random(6, 1, &mut rng);
    let b = line.basis().column(0).into_owned();
    assert!((projection_volume(&k, &line).unwrap().value - k.width(&b)).abs() < 1e-15);
}

#[test]
fn symmetrization() {
    let mut rng = stats::stream_rng(5, 0);
    let k = SupportBody::ball(3, 1.0).translate(&[0.2, -0.1, 0.3]).unwrap();
    let l = k.central_symmetrization();
    let ball = SupportBody::ball(3, 1.0);
    for _ in 0..10 {
        let u = random_unit(3, &mut rng);
        assert!((l.support(&u) - ball.support(&u)).abs() < 1e-14);
    }
    let sym = SupportBody::zonal4(4, 0.1);
    assert!(sym.central_symmetrization().is_symmetric());
    // P_F(DK/2) = D(P_F K)/2
    let k = SupportBody::harmonic_perturbation(
        AmbientPolynomial::from_float_terms(3, &[(vec![3], 1.0), (vec![1, 1, 0], 0.5)]).unwrap(),
        0.05,
    );
    let f = Subspace::random(3, 2, &mut rng);
    let a = k.central_symmetrization().project(&f).unwrap();
    let b = k.project(&f).unwrap().central_symmetrization();
    for _ in 0..10 {
        let y = random_unit(2, &mut rng);
        assert!((a.support(&y) - b.support(&y)).abs() < 1e-12);
    }
    // Brunn-Minkowski: vol(P_F L) >= vol(P_F K)
    let va = best_volume(&a).unwrap().value;
    let vk = best_volume(&k.project(&f).unwrap()).unwrap().value;
    assert!(va >= vk - 1e-10);
}

#[test]
fn simplex_like_body_symmetrization_grows_area() {
    // A smooth non-symmetric planar body: h = 1 + 0.1 cos 3 theta.
    let h = |th: f64| [1.0 + 0.1 * (3.0 * th).cos(), -0.3 * (3.0 * th).sin(), -0.9 * (3.0 * th).cos()];
    let hs = move |th: f64| {
        let a = h(th);
        let b = h(th + PI);
        [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0, (a[2] + b[2]) / 2.0]
    };
    let ak = planar_area(h, 512).unwrap();
    let al = planar_area(hs, 512).unwrap();
    assert!(al >= ak);
    for th in [0.1, 1.0, 2.5] {
        assert!(((hs(th)[0] + hs(th + PI)[0]) - (h(th)[0] + h(th + PI)[0])).abs() < 1e-15);
    }
}

#[test]
fn frame_invariance_of_curvature_determinant() {
    let mut rng = stats::stream_rng(6, 0);
    let k = SupportBody::harmonic_perturbation(AmbientPolynomial::harmonic_y(4), 0.1);
    for _ in 0..5 {
        let u = random_unit(4, &mut rng);
        let a = k.curvature_matrix(&u).determinant();
        let cands: Vec<DVector<f64>> = (0..6).map(|_| random_unit(4, &mut rng)).collect();
        let v = tangent_frame_from(&u, cands);
        let mut c = crate::sphere::calculus::intrinsic_hessian_in(k.oracle(), &u, &v);
        for i in 0..3 {
            c[(i, i)] += k.support(&u);
        }
        assert!((c.determinant() - a).abs() < 1e-12);
    }
}

#[test]
fn linear_images() {
    let e = SupportBody::ellipsoid(&[1.0, 2.0, 0.5]).unwrap();
    let t = DMatrix::from_row_slice(3, 3, &[1.0, 0.3, 0.0, 0.0, 1.2, -0.2, 0.1, 0.0, 0.9]);
    let te = e.linear_image(&t).unwrap();
    let v = volume(&te, &s2(64)).unwrap().value;
    assert!((v - te.volume_hint().unwrap()).abs() < 1e-8);
    let pv = polar_volume(&te, &s2(64)).unwrap().value;
    assert!((pv - best_polar_volume(&te).unwrap().value).abs() < 1e-8);
}

#[test]
fn section_polar_volume_two_paths() {
    let mut rng = stats::stream_rng(7, 0);
    let l = SupportBody::zonal4(3, 0.12);
    for _ in 0..3 {
        let f = Subspace::random(3, 2, &mut rng);
        let r = section_polar_volume(&l, &f).unwrap();
        assert!((r.via_projection.value - r.via_section.value).abs() < 1e-8, "{r:?}");
    }
    let ball = SupportBody::ball(3, 1.0);
    let f = Subspace::random(3, 2, &mut rng);
    assert!((section_polar_volume(&ball, &f).unwrap().via_section.value - PI).abs() < 1e-10);
    let r2 = section_polar_volume(&ball.dilate(2.0).unwrap(), &f).unwrap();
    assert!((r2.via_section.value - 4.0 * PI).abs() < 1e-9);
}

#[test]
fn body_spec_round_trip() {
    let spec = BodySpec::parse(r#"{"type":"ellipsoid","axes":[1.0,1.3,0.7]}"#).unwrap();
    assert!(spec.build(3).is_ok());
    assert!(spec.build(4).is_err());
    let z = BodySpec::parse(r#"{"type":"zonal4","t":0.05}"#).unwrap();
    assert!(z.build(11).unwrap().zonal_data().is_some());
    let b = BodySpec::parse(r#"{"type":"ball"}"#).unwrap();
    assert_eq!(b, BodySpec::Ball { radius: 1.0 });
    let h = BodySpec::parse(r#"{"type":"harmonic_perturbation","coeffs":[{"exponents":[2,0,0],"coeff":1.0}],"t":0.1}"#).unwrap();
    assert!(h.build(3).is_ok());
    assert!(BodySpec::parse(r#"{"type":"cube"}"#).is_err());
}

#[test]
fn projection_of_linear_image_matches_direct_restriction() {
    let mut rng = stats::stream_rng(8, 0);
    let k = random_symmetric(4, &mut rng).unwrap();
    let f = Subspace::random(4, 2, &mut rng);
    let fast = k.project(&f).unwrap();
    let direct = SupportBody::from_oracle(
        Arc::new(oracle::Restricted { inner: k.oracle().clone(), basis: f.basis().clone() }),
        true,
        "direct",
    );
    for _ in 0..10 {
        let y = random_unit(2, &mut rng);
        assert!((fast.support(&y) - direct.support(&y)).abs() < 1e-13);
    }
    let a = best_volume(&fast).unwrap().value;
    let b = best_volume(&direct).unwrap().value;
    assert!((a - b).abs() < 1e-10 * a, "{a} vs {b}");
}

#[test]
fn random_symmetric_bodies_are_convex_and_symmetric() {
    let mut rng = stats::stream_rng(9, 0);
    for n in [2, 3, 4] {
        let k = random_symmetric(n, &mut rng).unwrap();
        assert!(k.is_symmetric());
        assert!(certify_convex(&k, &SphereQuadrature::MonteCarlo { seed: 1, count: 500 }).is_ok());
        let u = random_unit(n, &mut rng);
        assert!((k.support(&u) - k.support(&-u.clone())).abs() < 1e-13);
    }
}
