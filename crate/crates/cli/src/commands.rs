use std::fs::File;
use std::io::{self, BufWriter, Write};

use loadshare_core::{
    closed_form_mle, numeric_mle, sample_dataset, Error as CoreError, FitMethod, ModelKind,
    ModelSpec, OracleConfig, Params, RngState, SpacingsMatrix, ValidationInstance,
};

use crate::args::{
    Cli, Command, FitArgs, Format, McStudyArgs, ModelArg, SimulateArgs, TruthArgs, VerifyArgs,
};
use crate::dataset::{read_dataset, write_spacings};
use crate::params_file::ParamsFile;
use crate::render::{self, VerifyRow};
use crate::study::mc_study_with_threads;
use crate::CliError;

/// Largest relative parameter discrepancy accepted by `verify`.
pub const VERIFY_PARAM_TOL: f64 = 1e-6;
/// Largest absolute log-likelihood gap accepted by `verify`.
pub const VERIFY_LOGLIK_TOL: f64 = 1e-9;

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(a) => simulate(&a),
        Command::Fit(a) => fit(&a),
        Command::Verify(a) => verify(&a),
        Command::McStudy(a) => mc_study(&a),
    }
}

pub fn model_spec(model: ModelArg, k: usize, s: Option<usize>) -> Result<ModelSpec, CliError> {
    match (model, s) {
        (ModelArg::KimKvam, None) => ModelSpec::kim_kvam(k),
        (ModelArg::KimKvam, Some(_)) => {
            return Err(CliError::Usage("--s only applies to --model ssk".into()))
        }
        (ModelArg::Ssk, Some(s)) => ModelSpec::ssk(k, s),
        (ModelArg::Ssk, None) => return Err(CliError::Usage("--model ssk requires --s".into())),
    }
    .map_err(CliError::usage)
}

fn resolve_truth(a: &TruthArgs) -> Result<(ModelSpec, Params), CliError> {
    if let Some(path) = &a.params {
        return ParamsFile::load(path)?.resolve();
    }
    let (Some(model), Some(k), Some(theta), Some(lambda)) = (a.model, a.k, a.theta, &a.lambda)
    else {
        return Err(CliError::Usage(
            "--model, --k, --theta and --lambda are required".into(),
        ));
    };
    let spec = model_spec(model, k, a.s)?;
    if lambda.len() + 1 != k {
        return Err(CliError::Usage(format!(
            "--lambda must list k-1 = {} values, got {}",
            k - 1,
            lambda.len()
        )));
    }
    let params = Params::new(theta, lambda.clone()).map_err(CliError::usage)?;
    Ok((spec, params))
}

/// Pairs a dataset with the requested model; `k` comes from the data.
fn data_spec(model: ModelArg, s: Option<usize>, t: &SpacingsMatrix) -> Result<ModelSpec, CliError> {
    if t.k() < 2 {
        return Err(CliError::Data(format!(
            "dataset has {} column(s); at least 2 components are required",
            t.k()
        )));
    }
    model_spec(model, t.k(), s)
}

fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let (spec, params) = resolve_truth(&a.truth)?;
    if a.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let data =
        sample_dataset(&spec, &params, a.n, &mut RngState::new(a.seed)).map_err(CliError::data)?;
    match &a.out {
        Some(path) => write_spacings(BufWriter::new(File::create(path)?), &data)?,
        None => write_spacings(io::stdout().lock(), &data)?,
    }
    eprintln!("simulated n={} k={} seed={}", a.n, spec.k(), a.seed);
    Ok(())
}

fn emit(text: &str) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn fit(a: &FitArgs) -> Result<(), CliError> {
    let data = read_dataset(&a.data, a.lifetimes)?;
    let spec = data_spec(a.model, a.s, &data.spacings)?;
    let fit = closed_form_mle(&spec, &data.spacings).map_err(CliError::data)?;
    emit(&match a.format {
        Format::Json => render::fit_json(&fit),
        Format::Text => render::fit_text(&fit),
    })
}

/// Runs closed form and oracle on one dataset.
pub fn verify_instance(
    spec: &ModelSpec,
    t: &SpacingsMatrix,
    cfg: &OracleConfig,
) -> Result<VerifyRow, CliError> {
    let cf = closed_form_mle(spec, t).map_err(CliError::data)?;
    let closed_form = cf.params_hat.to_vec();
    let mut row = VerifyRow {
        spec: *spec,
        n: t.n(),
        closed_form: closed_form.clone(),
        oracle: None,
        max_rel_discrepancy: f64::INFINITY,
        loglik_gap: f64::INFINITY,
        sweeps: None,
        error: None,
        pass: false,
    };
    match numeric_mle(spec, t, cfg) {
        Ok(nm) => {
            let oracle = nm.params_hat.to_vec();
            row.max_rel_discrepancy = oracle
                .iter()
                .zip(&closed_form)
                .map(|(o, c)| (o - c).abs() / c.abs())
                .fold(0.0, f64::max);
            row.loglik_gap = (nm.loglik_at_mle - cf.loglik_at_mle).abs();
            if let FitMethod::CoordinateAscent { sweeps, .. } = nm.method {
                row.sweeps = Some(sweeps);
            }
            row.oracle = Some(oracle);
            row.pass =
                row.max_rel_discrepancy <= VERIFY_PARAM_TOL && row.loglik_gap <= VERIFY_LOGLIK_TOL;
        }
        Err(e @ CoreError::NoConvergence { sweeps, .. }) => {
            row.sweeps = Some(sweeps);
            row.error = Some(e.to_string());
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    Ok(row)
}

fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let cfg = OracleConfig {
        max_iters: a.max_iters,
        tol: a.tol,
        ..OracleConfig::default()
    };
    cfg.validate().map_err(CliError::usage)?;
    let rows = if a.random {
        if a.instances == 0 {
            return Err(CliError::Usage("--instances must be at least 1".into()));
        }
        let kind = match a.model {
            ModelArg::KimKvam => ModelKind::KimKvam,
            ModelArg::Ssk => ModelKind::Ssk,
        };
        ValidationInstance::batch(kind, a.instances, a.seed)
            .map_err(CliError::data)?
            .iter()
            .map(|inst| verify_instance(&inst.spec, &inst.data, &cfg))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        let path = a
            .data
            .as_ref()
            .ok_or_else(|| CliError::Usage("--data or --random is required".into()))?;
        let data = read_dataset(path, a.lifetimes)?;
        let spec = data_spec(a.model, a.s, &data.spacings)?;
        vec![verify_instance(&spec, &data.spacings, &cfg)?]
    };
    emit(&match a.format {
        Format::Json => render::verify_json(&rows),
        Format::Text => render::verify_text(&rows),
    })?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(CliError::Verification(format!(
            "{failed} of {} instances exceeded tolerance (parameters {VERIFY_PARAM_TOL:e}, log-likelihood {VERIFY_LOGLIK_TOL:e})",
            rows.len()
        )));
    }
    Ok(())
}

fn mc_study(a: &McStudyArgs) -> Result<(), CliError> {
    let (spec, truth) = resolve_truth(&a.truth)?;
    if a.n < 2 {
        return Err(CliError::Usage(
            "--n must be at least 2: the mean of theta_hat is infinite for a single system".into(),
        ));
    }
    if a.reps < 1 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    if a.n == 2 {
        eprintln!("warning: with n = 2 the estimators have infinite variance; MSE will not settle");
    }
    let summary = mc_study_with_threads(&spec, &truth, a.n, a.reps, a.seed, a.threads)
        .map_err(CliError::data)?;
    emit(&match a.format {
        Format::Json => render::mc_json(&spec, a.seed, &summary),
        Format::Text => render::mc_text(&spec, a.seed, &summary),
    })
}
