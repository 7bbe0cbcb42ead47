//! Monte Carlo bookkeeping: reproducible random streams, running means and
//! the error-bar convention shared by every estimator in the crate.
//!
//! Streams are ChaCha8 generators keyed by `(seed, stream)`; parallel work is
//! always split into fixed chunks, one stream per chunk, and reduced in chunk
//! order so that results do not depend on the thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Samples handled by one deterministic work item.
pub const CHUNK: usize = 4096;

/// Independent generator for work item `stream` of a campaign seeded by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// How the `err` field of an [`Estimate`] should be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// One standard error of a Monte Carlo mean.
    StdError,
    /// Deterministic quadrature: difference between two quadrature orders
    /// plus a rounding floor.
    Quadrature,
    /// Value is exact up to floating-point rounding.
    Exact,
}

/// A number with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
    pub kind: ErrorKind,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, err: 0.0, kind: ErrorKind::Exact }
    }

    pub fn mc(value: f64, std_error: f64) -> Self {
        Self { value, err: std_error, kind: ErrorKind::StdError }
    }

    pub fn quadrature(value: f64, err: f64) -> Self {
        Self { value, err, kind: ErrorKind::Quadrature }
    }

    /// Build a deterministic estimate from a fine and a coarse evaluation.
    pub fn from_orders(fine: f64, coarse: f64) -> Self {
        let err = (fine - coarse).abs() + 64.0 * f64::EPSILON * fine.abs();
        Self::quadrature(fine, err)
    }

    /// Reported error bar: 3 standard errors for Monte Carlo, the
    /// quadrature-order sensitivity for deterministic paths.
    pub fn error_bar(&self) -> f64 {
        match self.kind {
            ErrorKind::StdError => 3.0 * self.err,
            ErrorKind::Quadrature | ErrorKind::Exact => self.err,
        }
    }

    /// `|value - target| <= k * err`, with a rounding allowance for the
    /// deterministic kinds.
    pub fn within(&self, target: f64, k: f64) -> bool {
        let slack = k * self.err + 1e-12 * target.abs().max(self.value.abs());
        (self.value - target).abs() <= slack
    }

    /// `|value - target| <= 3 SE` (or the quadrature bar).
    pub fn agrees_with(&self, target: f64) -> bool {
        match self.kind {
            ErrorKind::StdError => self.within(target, 3.0),
            _ => self.within(target, 1.0),
        }
    }

    /// Apply a smooth map, propagating the error to first order.
    pub fn map(&self, f: impl Fn(f64) -> f64, derivative: f64) -> Self {
        Self { value: f(self.value), err: (derivative * self.err).abs(), kind: self.kind }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { value: c * self.value, err: c.abs() * self.err, kind: self.kind }
    }

    /// Difference of two independent estimates.
    pub fn minus(&self, other: &Estimate) -> Self {
        Self {
            value: self.value - other.value,
            err: combine_err(self.err, other.err, self.kind, other.kind),
            kind: merge_kind(self.kind, other.kind),
        }
    }
}

fn merge_kind(a: ErrorKind, b: ErrorKind) -> ErrorKind {
    match (a, b) {
        (ErrorKind::StdError, _) | (_, ErrorKind::StdError) => ErrorKind::StdError,
        (ErrorKind::Quadrature, _) | (_, ErrorKind::Quadrature) => ErrorKind::Quadrature,
        _ => ErrorKind::Exact,
    }
}

fn combine_err(a: f64, b: f64, ka: ErrorKind, kb: ErrorKind) -> f64 {
    if ka == ErrorKind::StdError && kb == ErrorKind::StdError {
        a.hypot(b)
    } else {
        a + b
    }
}

/// Streaming mean/variance (Welford). Merging is exact in the sense of
/// Chan et al., so chunked reductions reproduce the sequential answer up to
/// rounding and are themselves deterministic for a fixed chunking.
#[derive(Debug, Clone, Copy, Default)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * (self.count as f64) * (other.count as f64) / n;
        self.count += other.count;
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            f64::INFINITY
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }

    pub fn estimate(&self) -> Estimate {
        Estimate::mc(self.mean, self.std_error())
    }
}

/// Run `count` Monte Carlo trials in deterministic parallel chunks.
///
/// `trial` receives the chunk generator and returns a vector of `width`
/// observations; the result holds one [`Moments`] per observation slot.
pub fn par_moments<F>(seed: u64, count: usize, width: usize, trial: F) -> Vec<Moments>
where
    F: Fn(&mut ChaCha8Rng) -> Vec<f64> + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    let partial: Vec<Vec<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64);
            let todo = CHUNK.min(count - c * CHUNK);
            let mut acc = vec![Moments::default(); width];
            for _ in 0..todo {
                let obs = trial(&mut rng);
                debug_assert_eq!(obs.len(), width);
                for (a, x) in acc.iter_mut().zip(obs) {
                    a.push(x);
                }
            }
            acc
        })
        .collect();
    let mut total = vec![Moments::default(); width];
    for chunk in &partial {
        for (t, c) in total.iter_mut().zip(chunk) {
            t.merge(c);
        }
    }
    total
}

/// Deterministic parallel map preserving input order.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    items.par_iter().map(&f).collect()
}
