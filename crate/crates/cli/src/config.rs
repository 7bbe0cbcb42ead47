use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Environment variable naming a JSON file with default settings.
pub const CONFIG_ENV: &str = "QUERM_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadOrders {
    pub beta_order: usize,
    pub angle_order: usize,
    /// Product-rule order on `S^2`.
    pub sphere_grid: usize,
}

impl Default for QuadOrders {
    fn default() -> Self {
        Self { beta_order: 128, angle_order: 256, sphere_grid: 32 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerance {
    /// Error bars a gap has to clear before it counts as decided.
    pub sigmas: f64,
    /// Allowed relative deviation of an extracted quadratic coefficient.
    pub quadratic_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { sigmas: 3.0, quadratic_rel: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub mc_samples: usize,
    pub quad_orders: QuadOrders,
    pub tolerance: Tolerance,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            mc_samples: 200_000,
            quad_orders: QuadOrders::default(),
            tolerance: Tolerance::default(),
            out_dir: PathBuf::from("querm-reports"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("parsing {}: {e}", path.display()))
    }

    pub fn validate(&self) -> Result<(), String> {
        let q = &self.quad_orders;
        if self.mc_samples == 0 {
            return Err("mc_samples must be positive".into());
        }
        if q.beta_order < 2 || q.angle_order < 2 || q.sphere_grid < 2 {
            return Err("quadrature orders must be at least 2".into());
        }
        if self.tolerance.sigmas.is_nan() || self.tolerance.sigmas <= 0.0 || self.tolerance.quadratic_rel.is_nan() || self.tolerance.quadratic_rel <= 0.0 {
            return Err("tolerances must be positive".into());
        }
        Ok(())
    }
}
