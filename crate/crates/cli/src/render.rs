//! Text and JSON renderings. Reals are printed like C's `%.17g`, which is
//! always enough digits to reproduce the `f64` exactly.

use std::fmt::Write as _;

use loadshare_core::{FitResult, McSummary, ModelKind, ModelSpec};

/// `%.17g`-style formatting.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let (_, exp) = sci
        .split_once('e')
        .expect("scientific notation has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let fixed = format!("{x:.*}", (16 - exp) as usize);
        trim_fraction(&fixed).to_string()
    } else {
        let (mantissa, _) = sci.split_once('e').unwrap();
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Minimal JSON value with `%.17g` numbers.
#[derive(Debug, Clone)]
pub enum Json {
    Num(f64),
    Int(u64),
    Bool(bool),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    pub fn nums(xs: &[f64]) -> Json {
        Json::Arr(xs.iter().map(|&x| Json::Num(x)).collect())
    }

    fn write(&self, out: &mut String) {
        match self {
            Json::Num(x) if x.is_finite() => out.push_str(&fmt_g17(*x)),
            Json::Num(_) => out.push_str("null"),
            Json::Int(v) => {
                let _ = write!(out, "{v}");
            }
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Str(s) => {
                // serde_json handles escaping
                out.push_str(&serde_json::to_string(s).expect("string serializes"));
            }
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "\"{key}\":");
                    value.write(out);
                }
                out.push('}');
            }
        }
    }

    pub fn to_string_compact(&self) -> String {
        let mut s = String::new();
        self.write(&mut s);
        s
    }
}

pub fn model_name(spec: &ModelSpec) -> &'static str {
    match spec.kind() {
        ModelKind::KimKvam => "kim-kvam",
        ModelKind::Ssk => "ssk",
    }
}

fn model_fields(spec: &ModelSpec) -> Vec<(&'static str, Json)> {
    let mut f = vec![
        ("model", Json::Str(model_name(spec).into())),
        ("k", Json::Int(spec.k() as u64)),
    ];
    if let Some(s) = spec.switch_index() {
        f.push(("s", Json::Int(s as u64)));
    }
    f
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_g17(x)).collect::<Vec<_>>().join(" ")
}

pub fn fit_json(fit: &FitResult) -> String {
    let mut fields = vec![
        ("theta_hat", Json::Num(fit.params_hat.theta())),
        ("lambda_hat", Json::nums(fit.params_hat.lambdas())),
        ("loglik", Json::Num(fit.loglik_at_mle)),
        ("n", Json::Int(fit.n as u64)),
    ];
    fields.extend(model_fields(&fit.model));
    fields.push(("sufficient_stats", Json::nums(fit.stats.sums())));
    Json::Obj(fields).to_string_compact() + "\n"
}

pub fn fit_text(fit: &FitResult) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "model: {}", model_name(&fit.model));
    let _ = writeln!(s, "k: {}", fit.model.k());
    if let Some(sw) = fit.model.switch_index() {
        let _ = writeln!(s, "s: {sw}");
    }
    let _ = writeln!(s, "n: {}", fit.n);
    let _ = writeln!(s, "theta_hat: {}", fmt_g17(fit.params_hat.theta()));
    let _ = writeln!(s, "lambda_hat: {}", join(fit.params_hat.lambdas()));
    let _ = writeln!(s, "loglik: {}", fmt_g17(fit.loglik_at_mle));
    let _ = writeln!(s, "sufficient_stats: {}", join(fit.stats.sums()));
    s
}

fn param_names(k: usize) -> Vec<String> {
    std::iter::once("theta".to_string())
        .chain((1..k).map(|j| format!("lambda{j}")))
        .collect()
}

pub fn mc_json(spec: &ModelSpec, seed: u64, summary: &McSummary) -> String {
    let reference = summary.reference_mean();
    let truth = summary.truth.to_vec();
    let params = param_names(spec.k())
        .into_iter()
        .enumerate()
        .map(|(q, name)| {
            Json::Obj(vec![
                ("name", Json::Str(name)),
                ("truth", Json::Num(truth[q])),
                ("mean", Json::Num(summary.mean_estimates[q])),
                ("bias", Json::Num(summary.bias[q])),
                ("mse", Json::Num(summary.mse[q])),
                ("std_error", Json::Num(summary.std_error[q])),
                ("reference_mean", Json::Num(reference[q])),
            ])
        })
        .collect();
    let mut fields = model_fields(spec);
    fields.extend([
        ("n", Json::Int(summary.n as u64)),
        ("reps", Json::Int(summary.reps as u64)),
        ("seed", Json::Int(seed)),
        ("parameters", Json::Arr(params)),
    ]);
    Json::Obj(fields).to_string_compact() + "\n"
}

pub fn mc_text(spec: &ModelSpec, seed: u64, summary: &McSummary) -> String {
    let mut s = String::new();
    let _ = write!(s, "model: {}  k: {}", model_name(spec), spec.k());
    if let Some(sw) = spec.switch_index() {
        let _ = write!(s, "  s: {sw}");
    }
    let _ = writeln!(
        s,
        "  n: {}  reps: {}  seed: {seed}",
        summary.n, summary.reps
    );
    let _ = writeln!(
        s,
        "{:<9} {:>24} {:>24} {:>24} {:>24} {:>24} {:>24}",
        "param", "truth", "mean", "bias", "mse", "std_error", "reference_mean"
    );
    let reference = summary.reference_mean();
    let truth = summary.truth.to_vec();
    for (q, name) in param_names(spec.k()).iter().enumerate() {
        let _ = writeln!(
            s,
            "{:<9} {:>24} {:>24} {:>24} {:>24} {:>24} {:>24}",
            name,
            fmt_g17(truth[q]),
            fmt_g17(summary.mean_estimates[q]),
            fmt_g17(summary.bias[q]),
            fmt_g17(summary.mse[q]),
            fmt_g17(summary.std_error[q]),
            fmt_g17(reference[q]),
        );
    }
    s
}

/// Outcome of comparing the closed form with the oracle on one instance.
#[derive(Debug, Clone)]
pub struct VerifyRow {
    pub spec: ModelSpec,
    pub n: usize,
    pub closed_form: Vec<f64>,
    /// `None` when the oracle failed; `error` then says why.
    pub oracle: Option<Vec<f64>>,
    pub max_rel_discrepancy: f64,
    pub loglik_gap: f64,
    pub sweeps: Option<usize>,
    pub error: Option<String>,
    pub pass: bool,
}

pub fn verify_text(rows: &[VerifyRow]) -> String {
    let mut s = String::new();
    for (i, r) in rows.iter().enumerate() {
        let _ = write!(
            s,
            "instance {}: model={} k={}",
            i + 1,
            model_name(&r.spec),
            r.spec.k()
        );
        if let Some(sw) = r.spec.switch_index() {
            let _ = write!(s, " s={sw}");
        }
        let _ = writeln!(s, " n={}", r.n);
        let _ = writeln!(s, "  closed_form: {}", join(&r.closed_form));
        match &r.oracle {
            Some(o) => {
                let _ = writeln!(s, "  oracle:      {}", join(o));
            }
            None => {
                let _ = writeln!(
                    s,
                    "  oracle:      failed ({})",
                    r.error.as_deref().unwrap_or("unknown")
                );
            }
        }
        let _ = writeln!(
            s,
            "  max_rel_discrepancy: {}  loglik_gap: {}  sweeps: {}  status: {}",
            fmt_g17(r.max_rel_discrepancy),
            fmt_g17(r.loglik_gap),
            r.sweeps.map_or("-".to_string(), |v| v.to_string()),
            if r.pass { "ok" } else { "FAIL" }
        );
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    let _ = writeln!(
        s,
        "summary: {} instances, {} passed, {failed} failed",
        rows.len(),
        rows.len() - failed
    );
    s
}

pub fn verify_json(rows: &[VerifyRow]) -> String {
    let items = rows
        .iter()
        .map(|r| {
            let mut f = model_fields(&r.spec);
            f.extend([
                ("n", Json::Int(r.n as u64)),
                ("closed_form", Json::nums(&r.closed_form)),
                (
                    "oracle",
                    r.oracle.as_deref().map_or(Json::Arr(vec![]), Json::nums),
                ),
                ("max_rel_discrepancy", Json::Num(r.max_rel_discrepancy)),
                ("loglik_gap", Json::Num(r.loglik_gap)),
                ("pass", Json::Bool(r.pass)),
            ]);
            if let Some(sw) = r.sweeps {
                f.push(("sweeps", Json::Int(sw as u64)));
            }
            if let Some(e) = &r.error {
                f.push(("error", Json::Str(e.clone())));
            }
            Json::Obj(f)
        })
        .collect();
    let failed = rows.iter().filter(|r| !r.pass).count() as u64;
    Json::Obj(vec![
        ("instances", Json::Arr(items)),
        ("failed", Json::Int(failed)),
        ("pass", Json::Bool(failed == 0)),
    ])
    .to_string_compact()
        + "\n"
}
