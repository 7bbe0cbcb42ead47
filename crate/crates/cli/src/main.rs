//! `querm`: verification campaigns for moment quermassintegrals of perturbed
//! balls and the low-dimensional endpoint inequalities.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{RunConfig, CONFIG_ENV};

/// Exit status contract shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    IdentityFailure = 1,
    Precondition = 2,
    Indeterminate = 3,
}

impl Status {
    pub fn worst(self, other: Status) -> Status {
        if (other as u8) > (self as u8) {
            other
        } else {
            self
        }
    }
}

#[derive(Parser)]
#[command(name = "querm", version, about = "Verification campaigns for affine quermassintegrals")]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// JSON run configuration; fields not given keep their defaults.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    mc_samples: Option<usize>,
    #[arg(long, global = true)]
    beta_order: Option<usize>,
    #[arg(long, global = true)]
    angle_order: Option<usize>,
    /// Product-rule order on S^2.
    #[arg(long, global = true)]
    sphere_grid: Option<usize>,
    /// Directory receiving JSON and CSV reports.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Certify every exact rational identity and tabulate coefficient signs.
    ExactReport {
        #[arg(long, default_value_t = 40)]
        n_max: u32,
        #[arg(long, default_value_t = 20)]
        sign_max: u32,
        /// Replace one closed form by a corrupted one (negative control).
        #[arg(long, hide = true)]
        inject_fault: Option<querm_core::exact::certify::Fault>,
    },
    /// Certify I_{m,-n}^{1/m} < I_{k,-n}^{1/k} for h = 1 + t Y.
    Counterexample {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = querm_core::querm::CERTIFY_T)]
        t: f64,
    },
    /// Extract the quadratic coefficient for all 1 <= m < k <= n-1, n <= n-max.
    Scan {
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = querm_core::querm::EXTRACT_T)]
        t: f64,
    },
    /// I_1 >= I_2^{1/2} >= 1 for a body in R^3.
    Chain3 {
        /// Body spec as JSON, a path to a JSON file, or a bare type name.
        #[arg(long)]
        body: String,
        /// Product-rule order of the per-direction table.
        #[arg(long, default_value_t = 8)]
        table_order: usize,
    },
    /// Planar determinant estimate on the disk and random symmetric bodies.
    Planar {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Blaschke-Petkantschin identities for M = L°.
    Bp {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=4))]
        dim: u8,
        #[arg(long, default_value = "ball")]
        body: String,
    },
    /// Grassmannian moments of T_j by Haar sampling and Beta quadrature.
    Moments {
        #[arg(long, default_value_t = 11)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,5")]
        j: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        r_max: u32,
    },
}

fn resolve_config(o: &Overrides) -> Result<RunConfig, String> {
    let mut c = match &o.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = o.seed {
        c.seed = v;
    }
    if let Some(v) = o.mc_samples {
        c.mc_samples = v;
    }
    if let Some(v) = o.beta_order {
        c.quad_orders.beta_order = v;
    }
    if let Some(v) = o.angle_order {
        c.quad_orders.angle_order = v;
    }
    if let Some(v) = o.sphere_grid {
        c.quad_orders.sphere_grid = v;
    }
    if let Some(v) = &o.out_dir {
        c.out_dir = v.clone();
    }
    c.validate()?;
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match resolve_config(&cli.overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("querm: {e}");
            return ExitCode::from(Status::Precondition as u8);
        }
    };
    let outcome = match cli.command {
        Command::ExactReport { n_max, sign_max, inject_fault } => {
            commands::exact_report(&config, n_max, sign_max, inject_fault)
        }
        Command::Counterexample { m, k, n, t } => commands::counterexample(&config, m, k, n, t),
        Command::Scan { n_max, t } => commands::scan(&config, n_max, t),
        Command::Chain3 { body, table_order } => commands::chain3(&config, &body, table_order),
        Command::Planar { trials } => commands::planar(&config, trials),
        Command::Bp { dim, body } => commands::bp(&config, dim as usize, &body),
        Command::Moments { n, j, r_max } => commands::moments(&config, n, &j, r_max),
    };
    match outcome {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("querm: {e}");
            ExitCode::from(e.status() as u8)
        }
    }
}
