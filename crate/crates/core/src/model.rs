//! Model specifications, parameter vectors, spacing data and the exact
//! log-likelihood and score of both load-sharing models.
//!
//! Stages are indexed from zero in code: stage `j` (zero-based) runs from the
//! `j`-th to the `(j+1)`-th failure, has `k - j` surviving components and uses
//! multiplier `λ_j` (with `λ_0 = 1`). Under SSK, stage `j` is in the
//! linear-hazard phase iff `j >= s`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::sum::{sum, CompensatedSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    KimKvam,
    /// Singh–Sharma–Kumar: constant hazards up to the `s`-th failure, linear afterwards.
    Ssk,
}

/// Which load-sharing model is fitted, with its component count `k` and,
/// for SSK, the switch index `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelSpec {
    kind: ModelKind,
    k: usize,
    s: Option<usize>,
}

impl ModelSpec {
    pub fn kim_kvam(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidModel("k must be at least 2"));
        }
        Ok(ModelSpec {
            kind: ModelKind::KimKvam,
            k,
            s: None,
        })
    }

    pub fn ssk(k: usize, s: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidModel("k must be at least 2"));
        }
        if s < 2 || s > k - 1 {
            return Err(Error::InvalidModel("s must satisfy 2 ≤ s ≤ k−1"));
        }
        Ok(ModelSpec {
            kind: ModelKind::Ssk,
            k,
            s: Some(s),
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The switch index `s`; `None` for Kim–Kvam.
    pub fn switch_index(&self) -> Option<usize> {
        self.s
    }

    /// Number of parameters, `θ` plus `k-1` multipliers.
    pub fn n_params(&self) -> usize {
        self.k
    }

    /// Surviving components during zero-based stage `stage`.
    #[inline]
    pub fn survivors(&self, stage: usize) -> usize {
        self.k - stage
    }

    /// Whether zero-based `stage` has a linearly increasing hazard.
    #[inline]
    pub fn is_linear_stage(&self, stage: usize) -> bool {
        matches!(self.s, Some(s) if stage >= s)
    }

    /// The per-system contribution `y` of one spacing to the stage exposure:
    /// `(k-j+1)·t` in constant-hazard stages and `½(k-j+1)·t²` in linear ones.
    #[inline]
    pub fn stage_exposure(&self, stage: usize, t: f64) -> f64 {
        let m = self.survivors(stage) as f64;
        if self.is_linear_stage(stage) {
            0.5 * m * t * t
        } else {
            m * t
        }
    }
}

/// Parameter vector `(θ, λ_1, …, λ_{k-1})`. `λ_0 = 1` is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    theta: f64,
    lambdas: Vec<f64>,
}

impl Params {
    pub fn new(theta: f64, lambdas: Vec<f64>) -> Result<Self> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::InvalidParams("theta must be positive and finite"));
        }
        if lambdas.is_empty() {
            return Err(Error::InvalidParams(
                "at least one lambda is required (k ≥ 2)",
            ));
        }
        if lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::InvalidParams(
                "every lambda must be positive and finite",
            ));
        }
        Ok(Params { theta, lambdas })
    }

    /// Builds from the flat `(θ, λ_1, …)` layout used by [`Params::to_vec`].
    pub fn from_slice(values: &[f64]) -> Result<Self> {
        match values.split_first() {
            Some((&theta, rest)) => Params::new(theta, rest.to_vec()),
            None => Err(Error::InvalidParams("empty parameter vector")),
        }
    }

    /// All-ones starting point for a `k`-component model.
    pub fn ones(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidModel("k must be at least 2"));
        }
        Ok(Params {
            theta: 1.0,
            lambdas: alloc::vec![1.0; k - 1],
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `(λ_1, …, λ_{k-1})`.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// Multiplier of zero-based `stage`; stage 0 is always 1.
    #[inline]
    pub fn multiplier(&self, stage: usize) -> f64 {
        if stage == 0 {
            1.0
        } else {
            self.lambdas[stage - 1]
        }
    }

    /// The component count implied by the parameter vector.
    pub fn k(&self) -> usize {
        self.lambdas.len() + 1
    }

    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.k());
        v.push(self.theta);
        v.extend_from_slice(&self.lambdas);
        v
    }

    fn check_against(&self, spec: &ModelSpec) -> Result<()> {
        if self.k() != spec.k() {
            return Err(Error::DimensionMismatch {
                expected: spec.k(),
                found: self.k(),
            });
        }
        Ok(())
    }
}

/// Dense row-major matrix of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds from nested rows, rejecting ragged input.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyData)?.as_ref().len();
        let mut data = Vec::with_capacity(rows.len() * first);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != first {
                return Err(Error::RaggedRow {
                    row: i,
                    expected: first,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols: first,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.cols.max(1)).take(self.rows)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// `n × k` inter-failure spacings, one row per system. Every entry is
/// strictly positive and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingsMatrix(Matrix);

impl SpacingsMatrix {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.rows == 0 || matrix.cols == 0 {
            return Err(Error::EmptyData);
        }
        for (i, row) in matrix.iter_rows().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFiniteValue { row: i, col: j });
                }
                if v <= 0.0 {
                    return Err(Error::NonPositiveSpacing {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        Ok(SpacingsMatrix(matrix))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        SpacingsMatrix::new(Matrix::from_rows(rows)?)
    }

    /// Number of systems.
    pub fn n(&self) -> usize {
        self.0.rows
    }

    /// Number of stages (components per system).
    pub fn k(&self) -> usize {
        self.0.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0.get(row, col)
    }

    pub fn row(&self, row: usize) -> &[f64] {
        self.0.row(row)
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.0.iter_rows()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    /// Compensated column sum of `f(t_ij)` over systems.
    pub(crate) fn column_sum(&self, col: usize, f: impl Fn(f64) -> f64) -> f64 {
        sum((0..self.n()).map(|i| f(self.get(i, col))))
    }

    pub(crate) fn check_against(&self, spec: &ModelSpec) -> Result<()> {
        if self.k() != spec.k() {
            return Err(Error::DimensionMismatch {
                expected: spec.k(),
                found: self.k(),
            });
        }
        Ok(())
    }
}

/// Converts raw component lifetimes into ordered inter-failure spacings.
///
/// Each row is sorted ascending and differenced against an implicit zero
/// start time.
pub fn spacings_from_lifetimes(lifetimes: &Matrix) -> Result<SpacingsMatrix> {
    if lifetimes.rows == 0 || lifetimes.cols == 0 {
        return Err(Error::EmptyData);
    }
    let k = lifetimes.cols;
    let mut out = Vec::with_capacity(lifetimes.data.len());
    let mut order: Vec<usize> = Vec::with_capacity(k);
    for (i, row) in lifetimes.iter_rows().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if !x.is_finite() {
                return Err(Error::NonFiniteValue { row: i, col: j });
            }
            if x <= 0.0 {
                return Err(Error::NonPositiveLifetime {
                    row: i,
                    col: j,
                    value: x,
                });
            }
        }
        order.clear();
        order.extend(0..k);
        order.sort_by(|&a, &b| row[a].total_cmp(&row[b]));
        let mut prev = 0.0;
        for w in 0..k {
            let x = row[order[w]];
            if w > 0 && x == prev {
                let col = order[w].max(order[w - 1]);
                return Err(Error::DuplicateLifetime { row: i, col });
            }
            out.push(x - prev);
            prev = x;
        }
    }
    SpacingsMatrix::new(Matrix {
        rows: lifetimes.rows,
        cols: k,
        data: out,
    })
}

/// Elementwise SSK exposure transform: `y_ij = (k-j+1)·t_ij` for `j ≤ s`,
/// `½(k-j+1)·t_ij²` for `j > s` (one-based `j`).
pub fn y_transform(spec: &ModelSpec, t: &SpacingsMatrix) -> Result<Matrix> {
    if spec.kind() != ModelKind::Ssk {
        return Err(Error::ModelMismatch);
    }
    t.check_against(spec)?;
    let k = spec.k();
    let data = t
        .as_matrix()
        .as_slice()
        .iter()
        .enumerate()
        .map(|(idx, &v)| spec.stage_exposure(idx % k, v))
        .collect();
    Ok(Matrix {
        rows: t.n(),
        cols: k,
        data,
    })
}

/// `ln k!` by summing logarithms.
pub(crate) fn ln_factorial(k: usize) -> f64 {
    sum((2..=k).map(|m| libm::log(m as f64)))
}

/// Per-stage totals `Σ_i y_ij` (Kim–Kvam: `(k-j+1)·t_ij`).
fn exposures(spec: &ModelSpec, t: &SpacingsMatrix) -> Vec<f64> {
    (0..spec.k())
        .map(|stage| t.column_sum(stage, |v| spec.stage_exposure(stage, v)))
        .collect()
}

fn check_inputs(spec: &ModelSpec, params: &Params, t: &SpacingsMatrix) -> Result<()> {
    params.check_against(spec)?;
    t.check_against(spec)
}

/// Exact log-likelihood, including `n·ln k!` and, for SSK, `Σ ln t_ij` over
/// the linear-hazard stages.
pub fn log_likelihood(spec: &ModelSpec, params: &Params, t: &SpacingsMatrix) -> Result<f64> {
    check_inputs(spec, params, t)?;
    let n = t.n() as f64;
    let k = spec.k();
    let mut acc = CompensatedSum::default();
    acc.add(n * ln_factorial(k));
    acc.add(n * k as f64 * libm::log(params.theta()));
    for &l in params.lambdas() {
        acc.add(n * libm::log(l));
    }
    if let Some(s) = spec.switch_index() {
        for stage in s..k {
            acc.add(t.column_sum(stage, libm::log));
        }
    }
    let exposure = sum(exposures(spec, t)
        .iter()
        .enumerate()
        .map(|(stage, &y)| params.multiplier(stage) * y));
    acc.add(-params.theta() * exposure);
    Ok(acc.value())
}

/// Analytic gradient `(∂ℓ/∂θ, ∂ℓ/∂λ_1, …, ∂ℓ/∂λ_{k-1})`.
pub fn score(spec: &ModelSpec, params: &Params, t: &SpacingsMatrix) -> Result<Vec<f64>> {
    check_inputs(spec, params, t)?;
    let n = t.n() as f64;
    let k = spec.k();
    let y = exposures(spec, t);
    let theta = params.theta();
    let mut out = Vec::with_capacity(k);
    let weighted = sum(y
        .iter()
        .enumerate()
        .map(|(stage, &ys)| params.multiplier(stage) * ys));
    out.push(n * k as f64 / theta - weighted);
    for (stage, &ys) in y.iter().enumerate().skip(1) {
        out.push(n / params.multiplier(stage) - theta * ys);
    }
    Ok(out)
}
