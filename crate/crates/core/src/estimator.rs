//! Sufficient statistics and closed-form maximum-likelihood estimates.
//!
//! With `λ_0 = 1`, the score equations of both models reduce to
//!
//! ```text
//! θ̂       = n / S_1
//! λ̂_{j-1} = S_1 / S_j        (j = 2..k)
//! ```
//!
//! where `S_j` is the total stage-`j` exposure: `(k-j+1)·Σ_i t_ij` for
//! constant-hazard stages and `½(k-j+1)·Σ_i t_ij²` for SSK linear stages.
//! Stage 1 is always constant-hazard, so `θ̂ = n / (k·Σ_i t_i1)` under both
//! models and the two fits agree bit for bit on `θ̂` and on every `λ̂` of a
//! shared constant-hazard stage.

use alloc::vec::Vec;

use crate::error::Result;
use crate::model::{log_likelihood, ModelKind, ModelSpec, Params, SpacingsMatrix};

/// Per-stage column sums: `t_{•j}` for Kim–Kvam, `y_{•j}` for SSK.
#[derive(Debug, Clone, PartialEq)]
pub struct SufficientStats {
    sums: Vec<f64>,
    n: usize,
}

impl SufficientStats {
    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// How a [`FitResult`] was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum FitMethod {
    ClosedForm,
    /// Cyclic coordinate ascent. `trace` holds the log-likelihood after every
    /// one-dimensional search, in order.
    CoordinateAscent {
        sweeps: usize,
        final_change: f64,
        trace: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params_hat: Params,
    pub loglik_at_mle: f64,
    pub stats: SufficientStats,
    pub model: ModelSpec,
    pub n: usize,
    pub method: FitMethod,
}

pub fn sufficient_stats(spec: &ModelSpec, t: &SpacingsMatrix) -> Result<SufficientStats> {
    t.check_against(spec)?;
    let k = spec.k();
    let sums = (0..k)
        .map(|stage| match spec.kind() {
            ModelKind::KimKvam => t.column_sum(stage, |v| v),
            ModelKind::Ssk => {
                let m = spec.survivors(stage) as f64;
                if spec.is_linear_stage(stage) {
                    0.5 * m * t.column_sum(stage, |v| v * v)
                } else {
                    m * t.column_sum(stage, |v| v)
                }
            }
        })
        .collect();
    Ok(SufficientStats { sums, n: t.n() })
}

/// Total exposure of zero-based `stage` (the `S_j` of the module docs).
fn stage_total(spec: &ModelSpec, stats: &SufficientStats, stage: usize) -> f64 {
    match spec.kind() {
        ModelKind::KimKvam => spec.survivors(stage) as f64 * stats.sums[stage],
        ModelKind::Ssk => stats.sums[stage],
    }
}

/// Estimates from sufficient statistics alone.
pub fn params_from_stats(spec: &ModelSpec, stats: &SufficientStats) -> Result<Params> {
    let first = stage_total(spec, stats, 0);
    let theta = stats.n as f64 / first;
    let lambdas = (1..spec.k())
        .map(|stage| first / stage_total(spec, stats, stage))
        .collect();
    Params::new(theta, lambdas)
}

pub fn closed_form_mle(spec: &ModelSpec, t: &SpacingsMatrix) -> Result<FitResult> {
    let stats = sufficient_stats(spec, t)?;
    let params_hat = params_from_stats(spec, &stats)?;
    let loglik_at_mle = log_likelihood(spec, &params_hat, t)?;
    Ok(FitResult {
        params_hat,
        loglik_at_mle,
        stats,
        model: *spec,
        n: t.n(),
        method: FitMethod::ClosedForm,
    })
}
