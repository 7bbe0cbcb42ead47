use std::fmt;
use std::path::Path;

use querm_core::body::{certify_convex, BodySpec, SupportBody};
use querm_core::exact::{self, certify::ClosedForms, certify::Fault};
use querm_core::grassmann::{self, BetaQuadrature};
use querm_core::querm::{self, QuermMethod, Verdict};
use querm_core::sphere::SphereQuadrature;
use querm_core::stats::stream_rng;
use querm_core::tomo::{self, planar::PlanarBody};
use querm_core::Estimate;
use serde::Serialize;

use crate::config::RunConfig;
use crate::report::{write_csv, write_json};
use crate::Status;

#[derive(Debug)]
pub struct CliError {
    status: Status,
    message: String,
}

impl CliError {
    pub fn status(&self) -> Status {
        self.status
    }

    fn precondition(message: impl Into<String>) -> Self {
        Self { status: Status::Precondition, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<querm_core::Error> for CliError {
    fn from(e: querm_core::Error) -> Self {
        let status = match e {
            querm_core::Error::Indeterminate(_) => Status::Indeterminate,
            _ => Status::Precondition,
        };
        Self { status, message: e.to_string() }
    }
}

impl From<String> for CliError {
    fn from(message: String) -> Self {
        Self::precondition(message)
    }
}

type Outcome = Result<Status, CliError>;

fn status_of(passed: bool) -> Status {
    if passed {
        Status::Pass
    } else {
        Status::IdentityFailure
    }
}

fn announce(path: &Path) {
    eprintln!("wrote {}", path.display());
}

/// `--body` accepts inline JSON, a path to a JSON file, or a bare type name
/// such as `ball`.
pub fn parse_body(arg: &str, n: usize) -> Result<(BodySpec, SupportBody), CliError> {
    let trimmed = arg.trim();
    let json = if trimmed.starts_with('{') {
        trimmed.to_string()
    } else if Path::new(trimmed).is_file() {
        std::fs::read_to_string(trimmed).map_err(|e| CliError::precondition(format!("reading {trimmed}: {e}")))?
    } else {
        serde_json::json!({ "type": trimmed }).to_string()
    };
    let spec = BodySpec::parse(&json)?;
    let body = spec.build(n)?;
    Ok((spec, body))
}

pub fn exact_report(config: &RunConfig, n_max: u32, sign_max: u32, fault: Option<Fault>) -> Outcome {
    if n_max < 2 || sign_max > n_max {
        return Err(CliError::precondition("need 2 <= n-max and sign-max <= n-max"));
    }
    let forms = fault.map(ClosedForms::with_fault).unwrap_or_default();
    let cert = exact::certify::certify(n_max, sign_max, &forms);
    #[derive(Serialize)]
    struct Body<'a> {
        injected_fault: Option<String>,
        certificate: &'a exact::certify::Certificate,
    }
    let body = Body { injected_fault: fault.map(|f| format!("{f:?}")), certificate: &cert };
    announce(&write_json(config, "exact_report", cert.all_passed, &body)?);
    announce(&write_csv(config, "coefficient_signs", &cert.coefficient_signs)?);
    for id in &cert.identities {
        let tag = if id.passed { "ok  " } else { "FAIL" };
        println!("{tag} {:<32} {:>7} checks  {}", id.name, id.checked, id.range);
    }
    Ok(status_of(cert.all_passed))
}

pub fn counterexample(config: &RunConfig, m: usize, k: usize, n: usize, t: f64) -> Outcome {
    if !(1 <= m && m < k && k < n) {
        return Err(CliError::precondition(format!("need 1 <= m < k <= n-1, got (m, k, n) = ({m}, {k}, {n})")));
    }
    if !(t.is_finite() && t != 0.0) {
        return Err(CliError::precondition("t must be finite and nonzero"));
    }
    let q = &config.quad_orders;
    let cert = querm::counterexample_certify(m, k, n, t, q.beta_order, q.angle_order)?;
    let sig = config.tolerance.sigmas;
    let status = if cert.gap.value > sig * cert.gap.error_bar() {
        Status::Pass
    } else if cert.gap.value < -sig * cert.gap.error_bar() {
        Status::IdentityFailure
    } else {
        Status::Indeterminate
    };
    announce(&write_json(config, "counterexample", status == Status::Pass, &cert)?);
    println!(
        "I_{m}^(1/{m}) = {:.15}  I_{k}^(1/{k}) = {:.15}  gap = {:.4e} +- {:.1e}  verdict: {:?}",
        cert.i_m.value,
        cert.i_k.value,
        cert.gap.value,
        cert.gap.error_bar(),
        cert.verdict
    );
    debug_assert!(status != Status::Pass || cert.verdict == Verdict::Reversed || sig < 3.0);
    Ok(status)
}

#[derive(Serialize)]
struct ScanRow {
    m: usize,
    k: usize,
    n: usize,
    coefficient: String,
    target: f64,
    extracted: f64,
    extracted_err: f64,
    relative_deviation: Option<f64>,
    boundary: bool,
    reversal_predicted: bool,
    sign_agrees: bool,
    within_tolerance: bool,
}

pub fn scan(config: &RunConfig, n_max: usize, t: f64) -> Outcome {
    if n_max < 3 {
        return Err(CliError::precondition("scan needs n-max >= 3"));
    }
    if !(t.is_finite() && t != 0.0) {
        return Err(CliError::precondition("t must be finite and nonzero"));
    }
    let q = &config.quad_orders;
    let method = QuermMethod::Zonal { beta_order: q.beta_order, angle_order: q.angle_order };
    let mut rows = Vec::new();
    for n in 3..=n_max {
        for k in 2..n {
            for m in 1..k {
                let coeff = exact::coefficient(m as u32, k as u32, n as u32)?;
                let target = exact::to_f64(&querm::target_coefficient(m, k, n)?);
                let extracted = querm::extract_quadratic(m, k, n, t, &method)?;
                let boundary = (m + 2) * (k + 2) - 2 == n;
                let relative_deviation = (target != 0.0).then(|| (extracted.value - target).abs() / target.abs());
                rows.push(ScanRow {
                    m,
                    k,
                    n,
                    coefficient: coeff.to_string(),
                    target,
                    extracted: extracted.value,
                    extracted_err: extracted.error_bar(),
                    relative_deviation,
                    boundary,
                    reversal_predicted: exact::counterexample_exists(m as u32, k as u32, n as u32)?,
                    sign_agrees: boundary || (extracted.value > 0.0) == (target > 0.0),
                    within_tolerance: relative_deviation.is_none_or(|d| d <= config.tolerance.quadratic_rel),
                });
            }
        }
    }
    let passed = rows.iter().all(|r| r.sign_agrees);
    let loose = rows.iter().filter(|r| !r.boundary && !r.within_tolerance).count();
    announce(&write_json(config, "scan", passed, &rows)?);
    announce(&write_csv(config, "scan", &rows)?);
    println!(
        "{} triples, {} sign disagreements, {loose} outside the relative tolerance",
        rows.len(),
        rows.iter().filter(|r| !r.sign_agrees).count()
    );
    Ok(status_of(passed))
}

pub fn chain3(config: &RunConfig, body: &str, table_order: usize) -> Outcome {
    let (spec, k) = parse_body(body, 3)?;
    let quad = SphereQuadrature::ProductRule { order: config.quad_orders.sphere_grid };
    let cert = certify_convex(&k, &quad)?;
    let report = tomo::dim3_endpoints(&k, config.quad_orders.sphere_grid, table_order)?;
    let passed = report.first_holds && report.second_holds == Some(true);
    #[derive(Serialize)]
    struct Body<'a> {
        spec: &'a BodySpec,
        convexity_margin: f64,
        report: &'a tomo::ChainReport,
    }
    announce(&write_json(config, "chain3", passed, &Body { spec: &spec, convexity_margin: cert.margin, report: &report })?);
    #[derive(Serialize)]
    struct DirectionCsv {
        u1: f64,
        u2: f64,
        u3: f64,
        width: f64,
        brightness: f64,
        section_d: f64,
    }
    let csv_rows: Vec<DirectionCsv> = report
        .rows
        .iter()
        .map(|r| DirectionCsv {
            u1: r.u[0],
            u2: r.u[1],
            u3: r.u[2],
            width: r.width,
            brightness: r.brightness,
            section_d: r.section_d,
        })
        .collect();
    announce(&write_csv(config, "chain3_directions", &csv_rows)?);
    println!(
        "I_1 = {:.12} +- {:.1e}  I_2^(1/2) = {:.12} +- {:.1e}  B' - (64/pi^3) A^2 = {:.4e}",
        report.i1.value, report.i1.error, report.i2.value, report.i2.error, report.target_slack.value
    );
    Ok(status_of(passed))
}

#[derive(Serialize)]
struct PlanarRow {
    body: String,
    d: f64,
    d_err: f64,
    d_spectral: f64,
    polar_area: f64,
    bound: f64,
    slack: f64,
    slack_err: f64,
    normalized: f64,
    passes: bool,
}

pub fn planar(config: &RunConfig, trials: usize) -> Outcome {
    let samples = config.mc_samples;
    let mut rng = stream_rng(config.seed, 0x504c);
    let mut bodies = vec![PlanarBody::disk(1.0), PlanarBody::regular_hexagon(1.0), PlanarBody::ellipse(2.0, 0.5, 0.3)];
    for _ in 0..trials {
        bodies.push(PlanarBody::random_symmetric(&mut rng)?);
    }
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for (i, a) in bodies.iter().enumerate() {
        let r = tomo::planar_lemma_check(a, samples, config.seed.wrapping_add(i as u64))?;
        rows.push(PlanarRow {
            body: r.body.clone(),
            d: r.d.value,
            d_err: r.d.error_bar(),
            d_spectral: r.d_spectral.value,
            polar_area: r.polar_area.value,
            bound: r.bound,
            slack: r.slack.value,
            slack_err: r.slack.error_bar(),
            normalized: r.normalized.value,
            passes: r.passes(),
        });
        reports.push(r);
    }
    let equality_ok = reports[0].slack.agrees_with(0.0) && reports[2].slack.agrees_with(0.0);
    let centroid = tomo::centroid_identity_check(&bodies[0], samples, config.seed)?;
    let passed = rows.iter().all(|r| r.passes) && equality_ok && centroid.passes();
    #[derive(Serialize)]
    struct Body<'a> {
        equality_cases_agree: bool,
        centroid_disk: &'a tomo::CentroidReport,
        bodies: &'a [tomo::PlanarLemmaReport],
    }
    let body = Body { equality_cases_agree: equality_ok, centroid_disk: &centroid, bodies: &reports };
    announce(&write_json(config, "planar", passed, &body)?);
    announce(&write_csv(config, "planar", &rows)?);
    let min = rows.iter().map(|r| r.slack / r.bound).fold(f64::INFINITY, f64::min);
    println!("{} bodies, {} failures, min relative slack {min:.3e}", rows.len(), rows.iter().filter(|r| !r.passes).count());
    Ok(status_of(passed))
}

pub fn bp(config: &RunConfig, dim: usize, body: &str) -> Outcome {
    let (spec, l) = parse_body(body, dim)?;
    if !l.is_symmetric() {
        return Err(CliError::precondition("the identities are checked for origin-symmetric L"));
    }
    let report = match dim {
        3 => tomo::bp3_check(&l, &SphereQuadrature::ProductRule { order: config.quad_orders.sphere_grid })?,
        4 => tomo::bp4_check(&l, config.mc_samples, config.seed)?,
        _ => return Err(CliError::precondition("--dim must be 3 or 4")),
    };
    let passed = report.passes();
    #[derive(Serialize)]
    struct Body<'a> {
        spec: &'a BodySpec,
        note: Option<&'static str>,
        report: &'a tomo::BPReport,
    }
    let note = report.exact_match.then_some("exact match: both sides are closed forms for the ball");
    announce(&write_json(config, &format!("bp{dim}"), passed, &Body { spec: &spec, note, report: &report })?);
    println!(
        "lhs = {:.12} +- {:.1e}  rhs = {:.12} +- {:.1e}{}",
        report.lhs.value,
        report.lhs.error_bar(),
        report.rhs.value,
        report.rhs.error_bar(),
        note.map(|s| format!("  ({s})")).unwrap_or_default()
    );
    Ok(status_of(passed))
}

#[derive(Serialize)]
struct MomentRow {
    n: usize,
    j: usize,
    r: u32,
    exact: String,
    exact_value: f64,
    haar: f64,
    haar_se: f64,
    beta: f64,
    haar_agrees: bool,
    beta_agrees: bool,
}

pub fn moments(config: &RunConfig, n: usize, js: &[usize], r_max: u32) -> Outcome {
    if js.iter().any(|&j| j == 0 || j > n) {
        return Err(CliError::precondition(format!("need 1 <= j <= n = {n}")));
    }
    if r_max > 4 {
        return Err(CliError::precondition("moments are estimated for r <= 4"));
    }
    let mut rows = Vec::new();
    for (idx, &j) in js.iter().enumerate() {
        let est = grassmann::t_moment_estimates(n, j, config.mc_samples, config.seed.wrapping_add(idx as u64))?;
        let beta = BetaQuadrature::new(n, j, config.quad_orders.beta_order.max(grassmann::MIN_BETA_ORDER))?;
        for r in 1..=r_max {
            let exact_q = exact::t_moment(n as u32, j as u32, r)?;
            let exact_value = exact::to_f64(&exact_q);
            let e: &Estimate = &est[r as usize - 1];
            let b = beta.integrate(|t| t.powi(r as i32));
            rows.push(MomentRow {
                n,
                j,
                r,
                exact: exact_q.to_string(),
                exact_value,
                haar: e.value,
                haar_se: e.err,
                beta: b,
                haar_agrees: e.within(exact_value, config.tolerance.sigmas),
                beta_agrees: (b - exact_value).abs() <= 1e-12,
            });
        }
    }
    let passed = rows.iter().all(|r| r.haar_agrees && r.beta_agrees);
    announce(&write_json(config, "moments", passed, &rows)?);
    announce(&write_csv(config, "moments", &rows)?);
    for r in &rows {
        println!("j={} r={} exact={:.10} haar={:.10}+-{:.1e} beta={:.15}", r.j, r.r, r.exact_value, r.haar, r.haar_se, r.beta);
    }
    Ok(status_of(passed))
}
