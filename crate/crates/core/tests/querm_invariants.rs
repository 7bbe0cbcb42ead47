//! Invariants of the normalized moment quermassintegrals.

use nalgebra::DMatrix;
use querm_core::body::SupportBody;
use querm_core::exact;
use querm_core::querm::{self, i_jp, QuermMethod};
use querm_core::stats::stream_rng;
use rand::Rng;

fn volume_preserving<R: Rng>(rng: &mut R) -> DMatrix<f64> {
    let m = DMatrix::identity(3, 3) + DMatrix::from_fn(3, 3, |_, _| rng.random::<f64>() - 0.5);
    let d = m.determinant();
    m * d.abs().powf(-1.0 / 3.0)
}

#[test]
fn ball_gives_one_on_every_path() {
    let ball = SupportBody::ball(3, 0.7);
    for method in [
        QuermMethod::zonal_default(),
        QuermMethod::SphereProduct { order: 16 },
        QuermMethod::HaarMc { seed: 1, count: 500 },
    ] {
        for j in 1..=2 {
            let r = i_jp(&ball, j, -3.0, &method).unwrap();
            assert!((r.value - 1.0).abs() < 1e-10, "{method:?} j={j}: {}", r.value);
        }
    }
}

#[test]
fn affine_invariance_at_p_minus_n() {
    let mut rng = stream_rng(21, 0);
    let e = SupportBody::ellipsoid(&[1.0, 1.4, 0.6]).unwrap();
    let method = QuermMethod::SphereProduct { order: 48 };
    let base: Vec<f64> = (1..=2).map(|j| i_jp(&e, j, -3.0, &method).unwrap().value).collect();
    for _ in 0..3 {
        let te = e.linear_image(&volume_preserving(&mut rng)).unwrap();
        for j in 1..=2 {
            let v = i_jp(&te, j, -3.0, &method).unwrap().value;
            assert!((v - base[j - 1]).abs() < 1e-6, "j={j}: {v} vs {}", base[j - 1]);
        }
    }
    let k = SupportBody::zonal4(3, 0.1);
    let zk: Vec<f64> = (1..=2).map(|j| i_jp(&k, j, -3.0, &QuermMethod::zonal_default()).unwrap().value).collect();
    let tk = k.linear_image(&volume_preserving(&mut rng)).unwrap();
    for j in 1..=2 {
        let v = i_jp(&tk, j, -3.0, &method).unwrap().value;
        assert!((v - zk[j - 1]).abs() < 1e-6, "zonal j={j}: {v} vs {}", zk[j - 1]);
    }
}

#[test]
fn top_comparison_in_dimension_three() {
    for t in [-0.1, -0.03, 0.04, 0.12] {
        let k = SupportBody::zonal4(3, t);
        let i2 = i_jp(&k, 2, -3.0, &QuermMethod::zonal_default()).unwrap();
        assert!(i2.value >= 1.0 - i2.error, "t={t}: {}", i2.value);
    }
}

#[test]
fn zonal_path_agrees_with_haar_monte_carlo() {
    let k = SupportBody::zonal4(5, 0.1);
    for j in [1usize, 2] {
        let z = i_jp(&k, j, -5.0, &QuermMethod::zonal_default()).unwrap();
        let mc = i_jp(&k, j, -5.0, &QuermMethod::HaarMc { seed: 3, count: 20_000 }).unwrap();
        assert!(mc.estimate.agrees_with(z.value), "j={j}: {:?} vs {}", mc.estimate, z.value);
    }
}

#[test]
fn quadratic_extraction_converges_at_second_order() {
    let grid = [0.04, 0.02, 0.01];
    let r = querm::variation_report(1, 2, 11, &grid, &QuermMethod::zonal_default()).unwrap();
    assert!(r.relative_deviation.unwrap() < 0.1);
    assert!(!r.observed_orders.is_empty());
    for (t, order) in &r.observed_orders {
        assert!((order - 2.0).abs() < 0.3, "t={t}: observed order {order}");
    }
}

#[test]
fn sign_dichotomy_away_from_the_boundary() {
    let method = QuermMethod::zonal_default();
    for (m, k, n) in [(1usize, 2usize, 5usize), (1, 2, 12), (1, 3, 8), (1, 3, 16), (2, 3, 12), (2, 3, 22)] {
        let c = exact::coefficient(m as u32, k as u32, n as u32).unwrap();
        let q = querm::extract_quadratic(m, k, n, 0.02, &method).unwrap();
        assert_eq!(q.value > 0.0, exact::sign(&c) > 0, "(m,k,n)=({m},{k},{n}): {}", q.value);
    }
}

#[test]
fn counterexample_needs_the_dimension_condition() {
    assert!(matches!(
        querm::counterexample_certify(1, 2, 9, 0.05, 128, 256),
        Err(querm_core::Error::Precondition(_))
    ));
    assert!(querm::counterexample_certify(1, 2, 11, 0.05, 128, 256).is_ok());
}
