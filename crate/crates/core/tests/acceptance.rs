//! Acceptance suite. Run with
//! `cargo test -p querm-core --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use querm_core::body::{self, certify_convex, random_perturbed_ball, random_symmetric, SupportBody};
use querm_core::exact::{self, certify::ClosedForms};
use querm_core::grassmann::{self, BetaQuadrature, Subspace};
use querm_core::querm::{self, QuermMethod, Verdict};
use querm_core::sphere::{bochner_residual, bochner_residual_exact, AmbientPolynomial, SphereQuadrature};
use querm_core::stats::stream_rng;
use querm_core::tomo::{self, planar::PlanarBody};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run(id: u32, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let mut outcome = f();
    let elapsed = start.elapsed();
    if let (Ok(_), Some(b)) = (&outcome, budget) {
        if elapsed > b {
            outcome = Err(format!("took {elapsed:.1?}, budget {b:?}"));
        }
    }
    let (tag, detail) = match &outcome {
        Ok(d) => ("PASS", d.as_str()),
        Err(d) => ("FAIL", d.as_str()),
    };
    println!("[{tag}] criterion {id:>2}: {name} ({elapsed:.2?}) {detail}");
    outcome.is_ok()
}

fn c1_exact_identities() -> Outcome {
    let cert = exact::certify::certify(40, 40, &ClosedForms::default());
    let checked: usize = cert.identities.iter().map(|i| i.checked).sum();
    for id in &cert.identities {
        ensure(id.passed, || format!("{} failed at {:?}", id.name, id.failures))?;
    }
    ensure(cert.all_passed, || "certificate not clean".into())?;
    Ok(format!("{} identities, {checked} exact checks", cert.identities.len()))
}

fn c2_counterexample() -> Outcome {
    let c = querm::counterexample_certify(1, 2, 11, 0.05, 128, 256).map_err(|e| e.to_string())?;
    ensure(c.convexity_margin > 0.0, || "not convex".into())?;
    ensure(c.gap.value > 3.0 * c.gap.error_bar(), || format!("gap {:?}", c.gap))?;
    ensure(c.verdict == Verdict::Reversed, || format!("verdict {:?}", c.verdict))?;
    Ok(format!(
        "I_1 = {:.12}, I_2^(1/2) = {:.12}, gap = {:.3e} +- {:.1e}",
        c.i_m.value,
        c.i_k.value,
        c.gap.value,
        c.gap.error_bar()
    ))
}

fn c3_second_variation() -> Outcome {
    let method = QuermMethod::zonal_default();
    let target11 = -(3.0 / 16.0) * (2880.0 / 7_110_675.0);
    let exact11 = exact::to_f64(&querm::target_coefficient(1, 2, 11).map_err(|e| e.to_string())?);
    ensure((exact11 - target11).abs() < 1e-15, || format!("target {exact11} vs {target11}"))?;
    let q11 = querm::extract_quadratic(1, 2, 11, 0.02, &method).map_err(|e| e.to_string())?;
    let rel11 = (q11.value - target11).abs() / target11.abs();
    ensure(rel11 < 0.1, || format!("n=11: {} vs {target11}", q11.value))?;

    let target9_q = exact::rat(13, 64) * exact::norm_y_sq(9).map_err(|e| e.to_string())?;
    ensure(querm::target_coefficient(1, 2, 9).map_err(|e| e.to_string())? == target9_q, || "n=9 target".into())?;
    let target9 = exact::to_f64(&target9_q);
    let q9 = querm::extract_quadratic(1, 2, 9, 0.02, &method).map_err(|e| e.to_string())?;
    let rel9 = (q9.value - target9).abs() / target9.abs();
    ensure(q9.value > 0.0 && q11.value < 0.0, || "no sign flip".into())?;
    ensure(rel9 < 0.1, || format!("n=9: {} vs {target9}", q9.value))?;
    Ok(format!("n=11: {:.4e} (rel {rel11:.1e}); n=9: {:.4e} (rel {rel9:.1e})", q11.value, q9.value))
}

fn c4_grassmann_moments() -> Outcome {
    let n = 11;
    let mut worst: f64 = 0.0;
    for j in [1usize, 2, 5] {
        let est = grassmann::t_moment_estimates(n, j, 1_000_000, 40 + j as u64).map_err(|e| e.to_string())?;
        let beta = BetaQuadrature::new(n, j, 64).map_err(|e| e.to_string())?;
        for (r, e) in est.iter().enumerate() {
            let r = r + 1;
            let exact = exact::to_f64(&exact::t_moment(n as u32, j as u32, r as u32).map_err(|e| e.to_string())?);
            ensure(e.agrees_with(exact), || format!("MC j={j} r={r}: {e:?} vs {exact}"))?;
            worst = worst.max((e.value - exact).abs() / e.err);
            let q = beta.integrate(|t| t.powi(r as i32));
            ensure((q - exact).abs() <= 1e-12, || format!("Beta j={j} r={r}: {q} vs {exact}"))?;
        }
    }
    Ok(format!("max deviation {worst:.2} SE"))
}

fn c5_radon() -> Outcome {
    let mut detail = Vec::new();
    for (n, j) in [(6usize, 3usize), (11, 2)] {
        let r = grassmann::radon_identity_check(n, j, 200_000, 50 + n as u64).map_err(|e| e.to_string())?;
        ensure(r.passes(), || format!("Radon ({n},{j}): {r:?}"))?;
        let s = grassmann::square_average_check(n, j, 200_000, 60 + n as u64, 128).map_err(|e| e.to_string())?;
        ensure(s.passes(), || format!("square average ({n},{j}): {s:?}"))?;
        detail.push(format!(
            "({n},{j}): Y^2 {:+.1} SE, grad {:+.1} SE, square {:+.1} SE",
            (r.y_sq.value - r.y_sq_target) / r.y_sq.err,
            (r.gradient_sq.value - r.gradient_sq_target) / r.gradient_sq.err,
            (s.haar.value - s.target) / s.haar.err
        ));
    }
    Ok(detail.join("; "))
}

fn c6_bochner() -> Outcome {
    for n in [3usize, 11] {
        for (name, p) in [
            ("u_1", AmbientPolynomial::coordinate(n, 0)),
            ("Y", AmbientPolynomial::zonal_y(n)),
            ("Y (harmonic)", AmbientPolynomial::harmonic_y(n)),
        ] {
            let e = bochner_residual_exact(&p).map_err(|e| e.to_string())?;
            ensure(e.is_exact_zero(), || format!("{name} on S^{}: {e:?}", n - 1))?;
        }
    }
    let quad = SphereQuadrature::ProductRule { order: 32 };
    let mut worst: f64 = 0.0;
    for p in [AmbientPolynomial::coordinate(3, 0), AmbientPolynomial::zonal_y(3), AmbientPolynomial::harmonic_y(3)] {
        let r = bochner_residual(&p, &quad).map_err(|e| e.to_string())?.relative_residual();
        worst = worst.max(r);
    }
    ensure(worst <= 1e-8, || format!("quadrature residual {worst:e}"))?;
    Ok(format!("exact zeros on S^2 and S^10; quadrature residual {worst:.1e}"))
}

fn c7_projection_expansion() -> Outcome {
    let mut rng = stream_rng(70, 0);
    let mut worst: (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let f = Subspace::random(6, 3, &mut rng);
        let r = querm::projection_expansion_check(6, &f, 0.02).map_err(|e| e.to_string())?;
        let (a, b) = r.relative_errors();
        ensure(a <= 1e-4 && b <= 1e-4, || format!("{r:?}"))?;
        worst = (worst.0.max(a), worst.1.max(b));
    }
    Ok(format!("max relative error {:.1e} (first), {:.1e} (second)", worst.0, worst.1))
}

fn random_matrix<R: Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    DMatrix::identity(n, n) + DMatrix::from_fn(n, n, |_, _| rng.random::<f64>() - 0.5)
}

fn c8_dim3_chain() -> Outcome {
    let order = 32;
    let mut rng = stream_rng(80, 0);
    let mut bodies = vec![SupportBody::ball(3, 1.0)];
    for _ in 0..3 {
        let axes = [0.5 + rng.random::<f64>(), 0.5 + rng.random::<f64>(), 0.5 + rng.random::<f64>()];
        let e = SupportBody::ellipsoid(&axes).map_err(|e| e.to_string())?;
        bodies.push(e.linear_image(&random_matrix(3, &mut rng)).map_err(|e| e.to_string())?);
    }
    for b in &bodies {
        let r = tomo::dim3_endpoints(b, order, 0).map_err(|e| e.to_string())?;
        ensure((r.i1.value - 1.0).abs() <= 1e-6 && (r.i2.value - 1.0).abs() <= 1e-6, || {
            format!("{}: I_1 = {}, I_2^(1/2) = {}", r.body, r.i1.value, r.i2.value)
        })?;
    }
    let quad = SphereQuadrature::ProductRule { order: 16 };
    let mut min_gap = (f64::INFINITY, f64::INFINITY);
    let mut certified = 0;
    while certified < 50 {
        let k = random_perturbed_ball(3, 0.06, &mut rng).map_err(|e| e.to_string())?;
        if certify_convex(&k, &quad).is_err() {
            continue;
        }
        certified += 1;
        let r = tomo::dim3_endpoints(&k, order, 0).map_err(|e| e.to_string())?;
        ensure(r.first_holds && r.second_holds == Some(true), || {
            format!("violation for {}: gap_12 {:?}, gap_2 {:?}", r.body, r.gap_12, r.gap_2_top)
        })?;
        let g2 = r.gap_2_top.expect("dimension 3");
        min_gap = (min_gap.0.min(r.gap_12.value), min_gap.1.min(g2.value));
    }
    Ok(format!("4 equality cases; 50 perturbed balls, min gaps {:.2e}, {:.2e}", min_gap.0, min_gap.1))
}

fn c9_planar_lemma() -> Outcome {
    let samples = 200_000;
    let bound = 8.0 * PI.powi(4) / 9.0;
    let disk = tomo::planar_lemma_check(&PlanarBody::disk(1.0), 1_000_000, 90).map_err(|e| e.to_string())?;
    ensure(disk.normalized.agrees_with(bound), || format!("disk: {:?} vs {bound}", disk.normalized))?;
    let mut rng = stream_rng(91, 0);
    let mut min_slack = f64::INFINITY;
    for i in 0..100 {
        let a = if i == 0 { PlanarBody::regular_hexagon(1.0) } else { PlanarBody::random_symmetric(&mut rng).map_err(|e| e.to_string())? };
        let r = tomo::planar_lemma_check(&a, samples, 100 + i).map_err(|e| e.to_string())?;
        ensure(r.passes(), || format!("{}: slack {:?}", r.body, r.slack))?;
        min_slack = min_slack.min(r.slack.value / r.bound);
    }
    for i in 0..20 {
        let e = PlanarBody::ellipse(0.3 + 2.0 * rng.random::<f64>(), 0.3 + 2.0 * rng.random::<f64>(), PI * rng.random::<f64>());
        let r = tomo::planar_lemma_check(&e, samples, 300 + i).map_err(|e| e.to_string())?;
        ensure(r.slack.agrees_with(0.0), || format!("ellipse {i}: slack {:?}", r.slack))?;
    }
    Ok(format!("disk normalized {:.4}; min relative slack {min_slack:.3e}", disk.normalized.value))
}

fn c10_bp() -> Outcome {
    let quad = SphereQuadrature::ProductRule { order: 24 };
    let ball3 = tomo::bp3_check(&SupportBody::ball(3, 1.0), &quad).map_err(|e| e.to_string())?;
    let t3 = 32.0 * PI * PI / 9.0;
    ensure(ball3.exact_match && ball3.lhs.within(t3, 0.0) && ball3.rhs.within(t3, 0.0), || format!("{ball3:?}"))?;
    let ball4 = tomo::bp4_check(&SupportBody::ball(4, 1.0), 200, 1).map_err(|e| e.to_string())?;
    let t4 = PI * PI / 8.0;
    ensure(ball4.exact_match && ball4.lhs.within(t4, 0.0) && ball4.rhs.within(t4, 0.0), || format!("{ball4:?}"))?;
    let mut rng = stream_rng(100, 0);
    for i in 0..10 {
        let l3 = random_symmetric(3, &mut rng).map_err(|e| e.to_string())?;
        let r3 = tomo::bp3_check(&l3, &quad).map_err(|e| e.to_string())?;
        ensure(r3.passes(), || format!("dim 3 body {i}: {r3:?}"))?;
        let l4 = random_symmetric(4, &mut rng).map_err(|e| e.to_string())?;
        let r4 = tomo::bp4_check(&l4, 40_000, 200 + i).map_err(|e| e.to_string())?;
        ensure(r4.passes(), || format!("dim 4 body {i}: {r4:?}"))?;
    }
    Ok("balls exact; 10 + 10 random bodies within error bars".into())
}

fn c11_dim4() -> Outcome {
    let ball = tomo::dim4_endpoints(&SupportBody::ball(4, 1.0), 2000, 110, false).map_err(|e| e.to_string())?;
    ensure((ball.i1.value - 1.0).abs() <= 1e-4 && (ball.i2.value - 1.0).abs() <= 1e-4, || {
        format!("ball: I_1 = {}, I_2^(1/2) = {}", ball.i1.value, ball.i2.value)
    })?;
    ensure(ball.target_slack.value.abs() <= 1e-4 * ball.b_k.value, || format!("ball slack {:?}", ball.target_slack))?;
    let mut rng = stream_rng(111, 0);
    let mut min_rel = f64::INFINITY;
    for i in 0..20 {
        let k = random_symmetric(4, &mut rng).map_err(|e| e.to_string())?;
        let r = tomo::dim4_endpoints(&k, 100_000, 120 + i, false).map_err(|e| e.to_string())?;
        ensure(r.first_holds, || format!("{}: slack {:?}", r.body, r.target_slack))?;
        min_rel = min_rel.min(r.target_slack.value / r.b_k.value);
    }
    Ok(format!("ball equality; 20 bodies, min relative slack {min_rel:.3e}"))
}

#[test]
fn acceptance() {
    let _ = body::CONVEXITY_MARGIN;
    let results = [
        run(1, "exact identity suite", Some(Duration::from_secs(5)), c1_exact_identities),
        run(2, "counterexample (1,2,11), t = 0.05", Some(Duration::from_secs(60)), c2_counterexample),
        run(3, "second-variation coefficient", Some(Duration::from_secs(120)), c3_second_variation),
        run(4, "Grassmannian moments", None, c4_grassmann_moments),
        run(5, "Radon identities and square average", None, c5_radon),
        run(6, "Bochner residual", None, c6_bochner),
        run(7, "projection expansion, n = 6, j = 3", None, c7_projection_expansion),
        run(8, "dimension-3 chain", None, c8_dim3_chain),
        run(9, "planar lemma", None, c9_planar_lemma),
        run(10, "Blaschke-Petkantschin identities", None, c10_bp),
        run(11, "dimension-4 first comparison", None, c11_dim4),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
