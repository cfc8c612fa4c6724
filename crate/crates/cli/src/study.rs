//! Parallel Monte Carlo driver. Replicate `r` always uses ChaCha stream `r`
//! of the master seed and estimates are reduced in replicate order, so the
//! summary is bit-identical to [`loadshare_core::mc_study`] for any thread
//! count.

use loadshare_core::simulator::{replicate_estimate, validate_study};
use loadshare_core::{McSummary, ModelSpec, Params, Result};
use rayon::prelude::*;

pub fn mc_study_parallel(
    spec: &ModelSpec,
    truth: &Params,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<McSummary> {
    validate_study(spec, truth, n, reps)?;
    let estimates = (0..reps as u64)
        .into_par_iter()
        .map(|r| replicate_estimate(spec, truth, n, seed, r))
        .collect::<Result<Vec<_>>>()?;
    McSummary::from_estimates(truth, n, &estimates)
}

/// Runs the study on a dedicated pool of `threads` workers (rayon's default when `None`).
pub fn mc_study_with_threads(
    spec: &ModelSpec,
    truth: &Params,
    n: usize,
    reps: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<McSummary> {
    match threads {
        None => mc_study_parallel(spec, truth, n, reps, seed),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(|| mc_study_parallel(spec, truth, n, reps, seed)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use loadshare_core::mc_study;

    #[test]
    fn parallel_equals_sequential() {
        let spec = ModelSpec::ssk(4, 2).unwrap();
        let truth = Params::new(0.7, vec![1.2, 0.4, 3.0]).unwrap();
        let seq = mc_study(&spec, &truth, 6, 3000, 17).unwrap();
        for threads in [Some(1), Some(3), Some(8), None] {
            let par = mc_study_with_threads(&spec, &truth, 6, 3000, 17, threads).unwrap();
            assert_eq!(par, seq);
        }
    }
}
