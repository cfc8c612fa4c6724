//! Synthetic data from either model and Monte Carlo parameter recovery.
//!
//! Spacings are drawn stage by stage. A constant-hazard stage with total rate
//! `r = (k-j+1)·λ_{j-1}·θ` gives `T = -ln U / r`; a linear-hazard stage with
//! cumulative hazard `½·r·t²` gives `T = sqrt(2·(-ln U) / r)`. The hazard clock
//! restarts at every failure, matching the likelihood.
//!
//! Randomness comes from ChaCha20 seeded through [`RngState`]. Replicate `r`
//! of a Monte Carlo study uses the master seed with ChaCha stream `r`, so
//! results do not depend on how replicates are scheduled.

use alloc::vec::Vec;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::estimator::closed_form_mle;
use crate::model::{Matrix, ModelKind, ModelSpec, Params, SpacingsMatrix};
use crate::sum::sum;

/// Seeded ChaCha20 generator.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    rng: ChaCha20Rng,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        RngState {
            seed,
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `index` under `seed`.
    pub fn for_stream(seed: u64, index: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(index);
        RngState { seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw on the open interval `(0, 1)`.
    pub fn open_unit(&mut self) -> f64 {
        // 52 random bits centred in their cell; `m + 0.5` stays exact in f64,
        // so neither 0 nor 1 is reachable.
        ((self.next_u64() >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        // Lemire's multiply-shift; the bias is below 2^-58 for small spans.
        lo + ((self.next_u64() as u128 * span as u128) >> 64) as usize
    }

    /// Log-uniform draw on `[lo, hi]`.
    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let (a, b) = (libm::log(lo), libm::log(hi));
        libm::exp(a + (b - a) * self.open_unit())
    }
}

/// Inverse CDF of a constant-hazard spacing with total rate `rate`.
pub fn exponential_spacing(u: f64, rate: f64) -> f64 {
    -libm::log(u) / rate
}

/// Inverse CDF of a linear-hazard spacing with cumulative hazard `½·rate·t²`.
pub fn rayleigh_spacing(u: f64, rate: f64) -> f64 {
    libm::sqrt(2.0 * -libm::log(u) / rate)
}

fn check_params(spec: &ModelSpec, params: &Params) -> Result<()> {
    if params.k() != spec.k() {
        return Err(Error::InvalidParams("lambda count must equal k-1"));
    }
    Ok(())
}

fn fill_system(spec: &ModelSpec, params: &Params, rng: &mut RngState, out: &mut Vec<f64>) {
    for stage in 0..spec.k() {
        let rate = spec.survivors(stage) as f64 * params.multiplier(stage) * params.theta();
        let u = rng.open_unit();
        let t = if spec.is_linear_stage(stage) {
            rayleigh_spacing(u, rate)
        } else {
            exponential_spacing(u, rate)
        };
        out.push(t);
    }
}

/// One system's `k` spacings.
pub fn sample_system(spec: &ModelSpec, params: &Params, rng: &mut RngState) -> Result<Vec<f64>> {
    check_params(spec, params)?;
    let mut row = Vec::with_capacity(spec.k());
    fill_system(spec, params, rng, &mut row);
    Ok(row)
}

/// `n` independent systems.
pub fn sample_dataset(
    spec: &ModelSpec,
    params: &Params,
    n: usize,
    rng: &mut RngState,
) -> Result<SpacingsMatrix> {
    if n == 0 {
        return Err(Error::InvalidSampleSize { n, min: 1 });
    }
    check_params(spec, params)?;
    let mut data = Vec::with_capacity(n * spec.k());
    for _ in 0..n {
        fill_system(spec, params, rng, &mut data);
    }
    // Underflow of a tiny spacing to zero is caught here rather than passed on.
    SpacingsMatrix::new(Matrix::from_row_major(n, spec.k(), data)?)
}

/// Per-parameter Monte Carlo summary in `(θ, λ_1, …)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct McSummary {
    pub reps: usize,
    pub n: usize,
    pub truth: Params,
    pub mean_estimates: Vec<f64>,
    pub bias: Vec<f64>,
    pub mse: Vec<f64>,
    /// Monte Carlo standard error of each mean.
    pub std_error: Vec<f64>,
}

impl McSummary {
    /// Summarizes replicate estimates, each laid out as [`Params::to_vec`].
    pub fn from_estimates(truth: &Params, n: usize, estimates: &[Vec<f64>]) -> Result<Self> {
        let reps = estimates.len();
        if reps == 0 {
            return Err(Error::InvalidSampleSize { n: 0, min: 1 });
        }
        let truth_v = truth.to_vec();
        let p = truth_v.len();
        if let Some(bad) = estimates.iter().find(|e| e.len() != p) {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: bad.len(),
            });
        }
        let r = reps as f64;
        let mut mean_estimates = Vec::with_capacity(p);
        let mut bias = Vec::with_capacity(p);
        let mut mse = Vec::with_capacity(p);
        let mut std_error = Vec::with_capacity(p);
        for q in 0..p {
            let mean = sum(estimates.iter().map(|e| e[q])) / r;
            let sq_dev = sum(estimates.iter().map(|e| (e[q] - mean) * (e[q] - mean)));
            let var = if reps > 1 { sq_dev / (r - 1.0) } else { 0.0 };
            let b = mean - truth_v[q];
            mean_estimates.push(mean);
            bias.push(b);
            // Mean squared deviation from the truth.
            mse.push(
                sum(estimates
                    .iter()
                    .map(|e| (e[q] - truth_v[q]) * (e[q] - truth_v[q])))
                    / r,
            );
            std_error.push(libm::sqrt(var / r));
        }
        Ok(McSummary {
            reps,
            n,
            truth: truth.clone(),
            mean_estimates,
            bias,
            mse,
            std_error,
        })
    }

    /// `n/(n-1)·truth`, the exact mean of each estimator.
    pub fn reference_mean(&self) -> Vec<f64> {
        let inflate = self.n as f64 / (self.n as f64 - 1.0);
        self.truth.to_vec().iter().map(|v| inflate * v).collect()
    }
}

/// Closed-form estimate for replicate `index` of a study seeded with `seed`.
pub fn replicate_estimate(
    spec: &ModelSpec,
    truth: &Params,
    n: usize,
    seed: u64,
    index: u64,
) -> Result<Vec<f64>> {
    let mut rng = RngState::for_stream(seed, index);
    let data = sample_dataset(spec, truth, n, &mut rng)?;
    Ok(closed_form_mle(spec, &data)?.params_hat.to_vec())
}

pub(crate) fn check_study(n: usize, reps: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidSampleSize { n, min: 2 });
    }
    if reps < 1 {
        return Err(Error::InvalidConfig("reps must be at least 1"));
    }
    Ok(())
}

/// Sequential Monte Carlo recovery study.
///
/// `n >= 2` is required because the mean of `θ̂` is infinite for a single system.
pub fn mc_study(
    spec: &ModelSpec,
    truth: &Params,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<McSummary> {
    check_study(n, reps)?;
    check_params(spec, truth)?;
    let estimates = (0..reps as u64)
        .map(|r| replicate_estimate(spec, truth, n, seed, r))
        .collect::<Result<Vec<_>>>()?;
    McSummary::from_estimates(truth, n, &estimates)
}

/// Validates study arguments without running it.
pub fn validate_study(spec: &ModelSpec, truth: &Params, n: usize, reps: usize) -> Result<()> {
    check_study(n, reps)?;
    check_params(spec, truth)
}

/// A random model, parameter vector and dataset for closed-form/oracle checks.
#[derive(Debug, Clone)]
pub struct ValidationInstance {
    pub spec: ModelSpec,
    pub truth: Params,
    pub data: SpacingsMatrix,
}

impl ValidationInstance {
    /// `k` uniform on `2..=6` (`3..=6` for SSK, which needs `2 ≤ s ≤ k-1`),
    /// `s` uniform on `2..=k-1`, `n` uniform on `1..=20`, and every parameter
    /// log-uniform on `[0.1, 10]`.
    pub fn draw(kind: ModelKind, rng: &mut RngState) -> Result<Self> {
        let spec = match kind {
            ModelKind::KimKvam => ModelSpec::kim_kvam(rng.int_inclusive(2, 6))?,
            ModelKind::Ssk => {
                let k = rng.int_inclusive(3, 6);
                ModelSpec::ssk(k, rng.int_inclusive(2, k - 1))?
            }
        };
        let n = rng.int_inclusive(1, 20);
        let theta = rng.log_uniform(0.1, 10.0);
        let lambdas = (1..spec.k()).map(|_| rng.log_uniform(0.1, 10.0)).collect();
        let truth = Params::new(theta, lambdas)?;
        let data = sample_dataset(&spec, &truth, n, rng)?;
        Ok(ValidationInstance { spec, truth, data })
    }

    /// The standard seeded batch of `count` instances.
    pub fn batch(kind: ModelKind, count: usize, seed: u64) -> Result<Vec<Self>> {
        let mut rng = RngState::new(seed);
        (0..count).map(|_| Self::draw(kind, &mut rng)).collect()
    }
}
