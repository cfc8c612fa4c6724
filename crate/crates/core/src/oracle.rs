//! Derivative-free numeric maximization of the log-likelihood.
//!
//! This is the iterative approach that the closed forms replace, kept as an
//! independent check on them. It evaluates [`log_likelihood`] and nothing
//! else: no score, no sufficient statistics, no closed-form estimates.
//!
//! The search runs in log-parameter space, so positivity never needs clamping.
//! Each sweep visits `θ, λ_1, …, λ_{k-1}` in turn; for each coordinate it
//! brackets a maximum by geometric expansion and then narrows the bracket by
//! golden-section search. A coordinate only moves when the log-likelihood
//! strictly improves, so the objective is nondecreasing step by step.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::estimator::{sufficient_stats, FitMethod, FitResult};
use crate::model::{log_likelihood, ModelSpec, Params, SpacingsMatrix};

/// `1/φ`, the golden-section shrink factor.
const INV_PHI: f64 = 0.618_033_988_749_894_9;
/// Relative bracket width at which a line search stops.
const LINE_TOL: f64 = 1e-12;
/// First bracketing step in log space.
const INITIAL_STEP: f64 = 0.5;
/// Log-space excursions beyond this are treated as a runaway bracket.
const MAX_LOG_EXCURSION: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Maximum number of full sweeps.
    pub max_iters: usize,
    /// Convergence threshold on the largest relative parameter change per sweep.
    pub tol: f64,
    /// Geometric growth factor of the bracketing step.
    pub bracket_expand: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_iters: 200,
            tol: 1e-10,
            bracket_expand: 4.0,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(Error::InvalidConfig("max_iters must be at least 1"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig("tol must be positive"));
        }
        if !(self.bracket_expand > 1.0 && self.bracket_expand.is_finite()) {
            return Err(Error::InvalidConfig("bracket_expand must exceed 1"));
        }
        Ok(())
    }
}

/// Best point seen by a line search.
#[derive(Clone, Copy)]
struct Probe {
    x: f64,
    f: f64,
}

impl Probe {
    fn keep_better(&mut self, other: Probe) {
        if other.f > self.f {
            *self = other;
        }
    }
}

/// Maximizes a unimodal `g` starting from `x0` (with `g(x0) = f0`).
///
/// Returns the best point evaluated; it equals `x0` unless some evaluation
/// was strictly larger than `f0`.
fn line_search(
    g: &mut impl FnMut(f64) -> Result<f64>,
    x0: f64,
    f0: f64,
    expand: f64,
) -> Result<Probe> {
    let mut best = Probe { x: x0, f: f0 };

    // Pick the uphill direction.
    let right = Probe {
        x: x0 + INITIAL_STEP,
        f: g(x0 + INITIAL_STEP)?,
    };
    let (dir, mut near) = if right.f >= f0 {
        (1.0, right)
    } else {
        let left = Probe {
            x: x0 - INITIAL_STEP,
            f: g(x0 - INITIAL_STEP)?,
        };
        if left.f <= f0 {
            // x0 already brackets the maximum.
            best.keep_better(right);
            best.keep_better(left);
            return golden(g, left.x, right.x, best);
        }
        (-1.0, left)
    };
    best.keep_better(near);

    // Expand until the function turns down.
    let mut behind = Probe { x: x0, f: f0 };
    let mut step = INITIAL_STEP;
    loop {
        step *= expand;
        let x = near.x + dir * step;
        if (x - x0).abs() > MAX_LOG_EXCURSION {
            return Err(Error::InvalidConfig(
                "line search failed to bracket a maximum",
            ));
        }
        let far = Probe { x, f: g(x)? };
        best.keep_better(far);
        if far.f < near.f {
            let (a, b) = if dir > 0.0 {
                (behind.x, far.x)
            } else {
                (far.x, behind.x)
            };
            return golden(g, a, b, best);
        }
        behind = near;
        near = far;
    }
}

/// Golden-section refinement of the bracket `[a, b]`.
fn golden(
    g: &mut impl FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    mut best: Probe,
) -> Result<Probe> {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = g(c)?;
    let mut fd = g(d)?;
    best.keep_better(Probe { x: c, f: fc });
    best.keep_better(Probe { x: d, f: fd });
    while (b - a).abs() > LINE_TOL * a.abs().max(b.abs()).max(1.0) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = g(c)?;
            best.keep_better(Probe { x: c, f: fc });
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = g(d)?;
            best.keep_better(Probe { x: d, f: fd });
        }
    }
    Ok(best)
}

/// Cyclic coordinate ascent from the all-ones starting point.
pub fn numeric_mle(spec: &ModelSpec, t: &SpacingsMatrix, cfg: &OracleConfig) -> Result<FitResult> {
    cfg.validate()?;
    let k = spec.k();
    let mut logp: Vec<f64> = alloc::vec![0.0; k];
    let eval = |logp: &[f64]| -> Result<f64> {
        let values: Vec<f64> = logp.iter().map(|&v| libm::exp(v)).collect();
        log_likelihood(spec, &Params::from_slice(&values)?, t)
    };

    let mut current = eval(&logp)?;
    let mut trace = Vec::new();
    let mut change = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < cfg.max_iters {
        sweeps += 1;
        change = 0.0;
        for coord in 0..k {
            let before = logp[coord];
            let mut point = logp.clone();
            let mut g = |x: f64| {
                point[coord] = x;
                eval(&point)
            };
            let best = line_search(&mut g, before, current, cfg.bracket_expand)?;
            debug_assert!(best.f >= current);
            logp[coord] = best.x;
            current = best.f;
            trace.push(current);
            // exp(Δ) - 1 is the relative change of the parameter itself.
            change = f64::max(change, libm::expm1(best.x - before).abs());
        }
        if change < cfg.tol {
            break;
        }
    }
    if change >= cfg.tol {
        return Err(Error::NoConvergence { sweeps, change });
    }

    let values: Vec<f64> = logp.iter().map(|&v| libm::exp(v)).collect();
    let params_hat = Params::from_slice(&values)?;
    let loglik_at_mle = log_likelihood(spec, &params_hat, t)?;
    Ok(FitResult {
        params_hat,
        loglik_at_mle,
        stats: sufficient_stats(spec, t)?,
        model: *spec,
        n: t.n(),
        method: FitMethod::CoordinateAscent {
            sweeps,
            final_change: change,
            trace,
        },
    })
}

/// Central finite-difference gradient of the log-likelihood in
/// `(θ, λ_1, …, λ_{k-1})` order, with per-parameter step `step·max(1, |p|)`.
pub fn fd_gradient(
    spec: &ModelSpec,
    params: &Params,
    t: &SpacingsMatrix,
    step: f64,
) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidConfig(
            "finite-difference step must be positive",
        ));
    }
    let base = params.to_vec();
    let mut grad = Vec::with_capacity(base.len());
    let mut point = base.clone();
    for p in 0..base.len() {
        let h = step * base[p].abs().max(1.0);
        if base[p] - h <= 0.0 {
            return Err(Error::InvalidParams(
                "finite-difference step leaves the positive orthant",
            ));
        }
        point[p] = base[p] + h;
        let up = log_likelihood(spec, &Params::from_slice(&point)?, t)?;
        point[p] = base[p] - h;
        let down = log_likelihood(spec, &Params::from_slice(&point)?, t)?;
        point[p] = base[p];
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}
