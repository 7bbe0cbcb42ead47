//! Low-dimensional endpoint inequalities: the dimension-3 chain
//! `I_1 >= I_2^{1/2} >= 1`, the first comparison in dimension 4, the planar
//! functionals behind them and the Blaschke–Petkantschin identities.

pub mod planar;

use std::f64::consts::PI;

use nalgebra::DVector;
use serde::Serialize;

use crate::body::{best_polar_volume, best_volume, SupportBody};
use crate::error::{Error, Result};
use crate::grassmann::Subspace;
use crate::querm::{brightness, i_jp, QuermMethod, QuermResult};
use crate::sphere::calculus::tangent_frame;
use crate::sphere::{kappa, AmbientFunction, SphereQuadrature};
use crate::stats::{self, Estimate};

pub use planar::{
    ball_quadratic_santalo, centroid_identity_check, d2_monte_carlo, d_functional, d_functional_spectral,
    moment_matrix, planar_lemma_check, santalo_pairing_monte_carlo, CentroidReport, MomentMatrix, PlanarBody,
    PlanarLemmaReport,
};

/// Angles used for spectral evaluation of `D` on central sections.
pub const SECTION_ANGLES: usize = 128;

/// The central section `M ∩ F` of `M = L°`, as a planar body with radial
/// function `1 / h_L` in the basis of the plane `F`.
pub fn polar_section(l: &SupportBody, f: &Subspace) -> Result<PlanarBody> {
    if f.dim() != 2 || f.ambient_dim() != l.dim() {
        return Err(Error::Dimension("sections are taken by planes of the ambient space".into()));
    }
    let basis = f.basis().clone();
    let oracle = l.oracle().clone();
    Ok(PlanarBody::from_radial(
        move |th: f64| {
            let x = basis.column(0) * th.cos() + basis.column(1) * th.sin();
            1.0 / oracle.value(&x)
        },
        l.is_symmetric(),
    )
    .with_label("central section"))
}

/// Flag-integral estimate against its closed form.
#[derive(Debug, Clone, Serialize)]
pub struct BPReport {
    pub dim: usize,
    pub body: String,
    pub lhs: Estimate,
    pub rhs: Estimate,
    /// Set when both sides are exact for the ball.
    pub exact_match: bool,
}

impl BPReport {
    pub fn passes(&self) -> bool {
        let diff = self.lhs.minus(&self.rhs);
        diff.value.abs() <= diff.error_bar() + 1e-12 * self.rhs.value.abs()
    }
}

fn require_symmetric(l: &SupportBody, n: usize) -> Result<()> {
    if l.dim() != n {
        return Err(Error::Dimension(format!("expected a body in R^{n}, got R^{}", l.dim())));
    }
    if !l.is_symmetric() {
        return Err(Error::Precondition("M = L° needs an origin-symmetric L".into()));
    }
    Ok(())
}

/// `int_{S^2} D(M ∩ u^perp) d omega(u)` (unnormalized measure, total mass
/// `4 pi`) against `2 vol_3(M)^2`, for `M = L°`.
pub fn bp3_check(l: &SupportBody, quad: &SphereQuadrature) -> Result<BPReport> {
    require_symmetric(l, 3)?;
    let lhs = quad.integrate(3, |u| {
        let f = Subspace::orthogonal_complement(u);
        let section = polar_section(l, &f).expect("plane of R^3");
        d_functional_spectral(&section, SECTION_ANGLES).value
    })?;
    let lhs = lhs.scale(4.0 * PI);
    let vol = best_polar_volume(l)?;
    let rhs = vol.map(|v| 2.0 * v * v, 4.0 * vol.value);
    let exact_match = l.zonal_data().is_some_and(|z| z.profile.degree() == 0);
    Ok(BPReport { dim: 3, body: l.label().to_string(), lhs, rhs, exact_match })
}

/// `int_{G_{4,2}} D_2(M ∩ F) dF` (normalized Haar measure) against
/// `vol_4(M)^2 / (2 pi^2)`, for `M = L°`.
pub fn bp4_check(l: &SupportBody, samples: usize, seed: u64) -> Result<BPReport> {
    require_symmetric(l, 4)?;
    let m = stats::par_moments(seed, samples, 1, |rng| {
        let f = Subspace::random(4, 2, rng);
        let section = polar_section(l, &f).expect("plane of R^4");
        vec![planar::moment_matrix_from(&section.radial_grid(SECTION_ANGLES)).d2()]
    });
    let lhs = m[0].estimate();
    let vol = best_polar_volume(l)?;
    let rhs = vol.map(|v| v * v / (2.0 * PI * PI), vol.value / (PI * PI));
    let exact_match = l.zonal_data().is_some_and(|z| z.profile.degree() == 0);
    Ok(BPReport { dim: 4, body: l.label().to_string(), lhs, rhs, exact_match })
}

/// One direction of the dimension-3 tables.
#[derive(Debug, Clone, Serialize)]
pub struct DirectionRow {
    pub u: [f64; 3],
    pub width: f64,
    pub brightness: f64,
    /// `D(M ∩ u^perp)` with `M = (DK/2)°`.
    pub section_d: f64,
}

/// Endpoint chain values with pairwise gaps.
#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub body: String,
    pub dim: usize,
    pub volume: Estimate,
    pub i1: QuermResult,
    pub i2: QuermResult,
    /// `I_3^{1/3}` in dimension 4; measured, no inequality asserted.
    pub i3: Option<QuermResult>,
    /// `I_1 - I_2^{1/2}`.
    pub gap_12: Estimate,
    /// `I_2^{1/2} - 1` in dimension 3.
    pub gap_2_top: Option<Estimate>,
    /// `I_2^{1/2} - I_3^{1/3}` in dimension 4.
    pub gap_23: Option<Estimate>,
    /// Dimension 3: `A_K = int w^{-3}`, `B'_K = int b^{-3}`. Dimension 4:
    /// `A_K = int w^{-4}`, `B_K^{(2)} = int b(F)^{-4}`.
    pub a_k: Estimate,
    pub b_k: Estimate,
    /// `B - c A^2` with `c = 64/pi^3` (dimension 3) or `256/pi^4` (dimension 4).
    pub target_slack: Estimate,
    pub first_holds: bool,
    pub second_holds: Option<bool>,
    pub rows: Vec<DirectionRow>,
}

fn nonnegative(e: &Estimate) -> bool {
    e.value + e.error_bar() + 1e-12 >= 0.0
}

/// `I_1`, `I_2^{1/2}` for a convex body in `R^3` by the product rule on
/// `S^2`, with the checks `I_1 >= I_2^{1/2} >= 1`.
pub fn dim3_endpoints(k: &SupportBody, order: usize, table_order: usize) -> Result<ChainReport> {
    if k.dim() != 3 {
        return Err(Error::Dimension(format!("dimension-3 chain for a body in R^{}", k.dim())));
    }
    let method = QuermMethod::SphereProduct { order };
    let i1 = i_jp(k, 1, -3.0, &method)?;
    let i2 = i_jp(k, 2, -3.0, &method)?;
    let volume = best_volume(k)?;
    let r = (volume.value / kappa(3)).cbrt();
    // Invert the closed forms I_1 = (2r)^{-1} A^{-1/3}, I_2^{1/2} = (sqrt(pi) r)^{-1} B'^{-1/6}.
    let a_k = i1.estimate.map(|v| (2.0 * r * v).powi(-3), -3.0 * (2.0 * r * i1.value).powi(-4) * 2.0 * r);
    let b_k = i2.estimate.map(|v| (PI.sqrt() * r * v).powi(-6), -6.0 * (PI.sqrt() * r * i2.value).powi(-7) * PI.sqrt() * r);
    let c = 64.0 / PI.powi(3);
    let target_slack = b_k.minus(&a_k.map(|a| c * a * a, 2.0 * c * a_k.value));
    let gap_12 = i1.estimate.minus(&i2.estimate);
    let gap_2_top = i2.estimate.minus(&Estimate::exact(1.0));
    let rows = direction_rows(k, table_order)?;
    Ok(ChainReport {
        body: k.label().to_string(),
        dim: 3,
        volume,
        first_holds: nonnegative(&gap_12),
        second_holds: Some(nonnegative(&gap_2_top)),
        i1,
        i2,
        i3: None,
        gap_12,
        gap_2_top: Some(gap_2_top),
        gap_23: None,
        a_k,
        b_k,
        target_slack,
        rows,
    })
}

/// Per-direction widths, brightness and section functionals on the nodes
/// of a product rule of the given order.
pub fn direction_rows(k: &SupportBody, order: usize) -> Result<Vec<DirectionRow>> {
    if order == 0 {
        return Ok(Vec::new());
    }
    let l = k.central_symmetrization();
    let nodes = SphereQuadrature::ProductRule { order }.nodes(3)?;
    let rows = stats::par_map(&nodes, |(u, _)| -> Result<DirectionRow> {
        let f = Subspace::orthogonal_complement(u);
        let section = polar_section(&l, &f)?;
        Ok(DirectionRow {
            u: [u[0], u[1], u[2]],
            width: k.width(u),
            brightness: brightness(k, u)?,
            section_d: d_functional_spectral(&section, SECTION_ANGLES).value,
        })
    });
    rows.into_iter().collect()
}

/// `I_1`, `I_2^{1/2}` and `I_3^{1/3}` for a convex body in `R^4` by Haar
/// Monte Carlo, with the check `B_K^{(2)} >= (256 / pi^4) A_K^2`.
pub fn dim4_endpoints(k: &SupportBody, samples: usize, seed: u64, with_i3: bool) -> Result<ChainReport> {
    if k.dim() != 4 {
        return Err(Error::Dimension(format!("dimension-4 comparison for a body in R^{}", k.dim())));
    }
    let mc = |s: u64, count: usize| QuermMethod::HaarMc { seed: s, count };
    let volume = best_volume(k)?;
    let r = (volume.value / kappa(4)).powf(0.25);
    let a_k = {
        let m = stats::par_moments(seed ^ 0xa, samples, 1, |rng| {
            let u = crate::sphere::random_unit(4, rng);
            vec![k.width(&u).powi(-4)]
        });
        m[0].estimate()
    };
    let b_k = {
        let failure = std::sync::Mutex::new(None::<Error>);
        let m = stats::par_moments(seed ^ 0xb, samples, 1, |rng| {
            let f = Subspace::random(4, 2, rng);
            match crate::body::projection_volume(k, &f) {
                Ok(v) => vec![v.value.powi(-4)],
                Err(e) => {
                    failure.lock().expect("poisoned").get_or_insert(e);
                    vec![0.0]
                }
            }
        });
        if let Some(e) = failure.into_inner().expect("poisoned") {
            return Err(e);
        }
        m[0].estimate()
    };
    // I_1 = (2r)^{-1} A^{-1/4} and I_2^{1/2} = (sqrt(pi) r)^{-1} B^{-1/8},
    // from the same samples as A_K and B_K.
    let i1 = QuermResult::new(1, -4.0, &mc(seed ^ 0xa, samples), a_k.map(|a| a.powf(-0.25) / (2.0 * r), 0.25 * a_k.value.powf(-1.25) / (2.0 * r)));
    let i2 = QuermResult::new(
        2,
        -4.0,
        &mc(seed ^ 0xb, samples),
        b_k.map(|b| b.powf(-0.125) / (PI.sqrt() * r), 0.125 * b_k.value.powf(-1.125) / (PI.sqrt() * r)),
    );
    let i3 = if with_i3 { Some(i_jp(k, 3, -4.0, &mc(seed ^ 0xc, samples / 8 + 1))?) } else { None };
    let c = 256.0 / PI.powi(4);
    let target_slack = b_k.minus(&a_k.map(|a| c * a * a, 2.0 * c * a_k.value));
    let gap_12 = i1.estimate.minus(&i2.estimate);
    let gap_23 = i3.as_ref().map(|i3| i2.estimate.minus(&i3.estimate));
    Ok(ChainReport {
        body: k.label().to_string(),
        dim: 4,
        volume,
        first_holds: nonnegative(&target_slack),
        second_holds: None,
        i1,
        i2,
        i3,
        gap_12,
        gap_2_top: None,
        gap_23,
        a_k,
        b_k,
        target_slack,
        rows: Vec::new(),
    })
}

/// Width of `K` in direction `u`, as used by the tables.
pub fn width(k: &SupportBody, u: &DVector<f64>) -> f64 {
    k.width(u)
}

/// Unit normal frame used for `u^perp` sections, exposed for callers that
/// need consistent planar coordinates.
pub fn section_frame(u: &DVector<f64>) -> nalgebra::DMatrix<f64> {
    tangent_frame(u)
}
