//! Monte Carlo experiment runner.
//!
//! A trial draws a signal matrix, hides it behind a uniformly random column
//! permutation, adds Gaussian noise, runs the chosen estimators, and scores
//! each against the hidden permutation up to reversal. Trial (g, r) of an
//! experiment is seeded by `mix_seed(seed, g, r)`, so aggregates are
//! independent of execution order and of the worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{estimate, EstimatorKind};
use crate::matrix::DataMatrix;
use crate::metrics::{ranking_loss_up_to_reversal, Metric};
use crate::models::{
    add_noise_with, generate_linear, generate_regime_with, LinearGrowthSpec, Regime, RegimeSpec,
};
use crate::perm::Permutation;
use crate::rng::{mix_seed, SimRng};

fn default_tol() -> f64 {
    crate::spectra::DEFAULT_TOL
}

/// A fixed linear signal plus a noise variance, as a simulation source.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearSource {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub eta: Vec<f64>,
    pub sigma2: f64,
}

/// One sweep entry: fields present here replace the base source's.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<Regime>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
    /// Multiplies `eta` of a linear source; rejected for regime sources.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_scale: Option<f64>,
}

/// Experiment description. Exactly one of `regime` / `linear` must be set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<RegimeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linear: Option<LinearSource>,
    pub estimators: Vec<EstimatorKind>,
    pub metrics: Vec<Metric>,
    pub replications: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<GridOverride>>,
    /// Keep the per-replication losses in the result.
    #[serde(default)]
    pub retain_raw: bool,
    /// Residual tolerance handed to the spectral estimators.
    #[serde(default = "default_tol")]
    pub tol: f64,
}

/// Resolved signal source of one grid point.
#[derive(Clone, Debug)]
pub enum SourceInstance {
    Regime(RegimeSpec),
    Linear {
        spec: LinearGrowthSpec<f64>,
        sigma2: f64,
    },
}

/// The flattened parameters a grid point runs at (also the CSV columns).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regime: Option<Regime>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub n: usize,
    pub p: usize,
    pub sigma2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta_scale: Option<f64>,
}

impl PointParams {
    /// Compact single-token-per-field label, used for table headers.
    pub fn label(&self) -> String {
        match (self.regime, self.eta_scale) {
            (Some(r), _) => format!(
                "{} a={} n={} p={} s2={}",
                r.name(),
                self.alpha.unwrap_or(f64::NAN),
                self.n,
                self.p,
                self.sigma2
            ),
            (None, scale) => format!(
                "linear x{} n={} p={} s2={}",
                scale.unwrap_or(1.0),
                self.n,
                self.p,
                self.sigma2
            ),
        }
    }
}

/// One runnable grid point.
#[derive(Clone, Debug)]
pub struct ResolvedPoint {
    pub params: PointParams,
    pub source: SourceInstance,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        match (&self.regime, &self.linear) {
            (Some(_), Some(_)) => {
                return Err(Error::Domain(
                    "config must set exactly one of 'regime' and 'linear'".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Domain(
                    "config needs a 'regime' or a 'linear' source".into(),
                ))
            }
            _ => {}
        }
        if self.estimators.is_empty() {
            return Err(Error::Domain("config needs at least one estimator".into()));
        }
        if self.metrics.is_empty() {
            return Err(Error::Domain("config needs at least one metric".into()));
        }
        let mut ests = self.estimators.clone();
        ests.dedup();
        if ests.len() != self.estimators.len() {
            return Err(Error::Domain("duplicate estimator in config".into()));
        }
        if self.replications < 1 {
            return Err(Error::Domain("replications must be at least 1".into()));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::Domain("tol must be positive".into()));
        }
        for point in self.resolve_points()? {
            match point.source {
                SourceInstance::Regime(spec) => spec.validate()?,
                SourceInstance::Linear { spec, .. } => spec.validate()?,
            }
        }
        Ok(())
    }

    pub fn resolve_points(&self) -> Result<Vec<ResolvedPoint>> {
        let overrides: Vec<GridOverride> = match &self.grid {
            Some(g) if !g.is_empty() => g.clone(),
            _ => vec![GridOverride::default()],
        };
        overrides.iter().map(|o| self.resolve_one(o)).collect()
    }

    fn resolve_one(&self, o: &GridOverride) -> Result<ResolvedPoint> {
        if let Some(base) = &self.regime {
            if o.eta_scale.is_some() {
                return Err(Error::Domain(
                    "eta_scale only applies to a linear source".into(),
                ));
            }
            let spec = RegimeSpec {
                regime: o.regime.unwrap_or(base.regime),
                alpha: o.alpha.unwrap_or(base.alpha),
                n: o.n.unwrap_or(base.n),
                p: o.p.unwrap_or(base.p),
                sigma2: o.sigma2.unwrap_or(base.sigma2),
            };
            spec.validate()?;
            Ok(ResolvedPoint {
                params: PointParams {
                    regime: Some(spec.regime),
                    alpha: Some(spec.alpha),
                    n: spec.n,
                    p: spec.p,
                    sigma2: spec.sigma2,
                    eta_scale: None,
                },
                source: SourceInstance::Regime(spec),
            })
        } else {
            let base = self.linear.as_ref().expect("validated");
            if o.regime.is_some() || o.alpha.is_some() || o.n.is_some() || o.p.is_some() {
                return Err(Error::Domain(
                    "regime/alpha/n/p overrides only apply to a regime source".into(),
                ));
            }
            let scale = o.eta_scale.unwrap_or(1.0);
            if !scale.is_finite() || scale <= 0.0 {
                return Err(Error::Domain("eta_scale must be positive".into()));
            }
            let sigma2 = o.sigma2.unwrap_or(base.sigma2);
            if !sigma2.is_finite() || sigma2 < 0.0 {
                return Err(Error::Domain("sigma2 must be >= 0".into()));
            }
            let spec = LinearGrowthSpec::new(
                base.a.clone(),
                base.b.clone(),
                base.eta.iter().map(|&e| e * scale).collect(),
            )?;
            Ok(ResolvedPoint {
                params: PointParams {
                    regime: None,
                    alpha: None,
                    n: spec.n(),
                    p: spec.p(),
                    sigma2,
                    eta_scale: Some(scale),
                },
                source: SourceInstance::Linear { spec, sigma2 },
            })
        }
    }
}

/// Per-trial losses, indexed `[estimator][metric]`, plus degeneracy flags.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub losses: Vec<Vec<f64>>,
    pub degenerate: Vec<bool>,
}

/// Runs one seeded trial: draw the signal, hide it behind a random column
/// permutation, add noise, estimate, and score against the hidden truth up
/// to reversal (in ranking space, so the loss does not depend on the hidden
/// shuffle; see [`ranking_loss_up_to_reversal`]). An estimator's
/// degenerate-input error scores as loss 1 with its flag set instead of
/// aborting the trial.
pub fn run_trial(
    point: &ResolvedPoint,
    estimators: &[EstimatorKind],
    metrics: &[Metric],
    tol: f64,
    seed: u64,
) -> Result<TrialOutcome> {
    let mut rng = SimRng::new(seed);
    let (theta, sigma2) = match &point.source {
        SourceInstance::Regime(spec) => {
            let (theta, _) = generate_regime_with(spec, &mut rng)?;
            (theta, spec.sigma2)
        }
        SourceInstance::Linear { spec, sigma2 } => (generate_linear(spec)?, *sigma2),
    };
    let truth = Permutation::random(theta.p(), &mut rng);
    let permuted = theta.apply_columns(&truth)?;
    let y: DataMatrix<f64> = add_noise_with(&permuted, sigma2, &mut rng)?;

    let mut losses = Vec::with_capacity(estimators.len());
    let mut degenerate = Vec::with_capacity(estimators.len());
    for &kind in estimators {
        match estimate(kind, &y, tol) {
            Ok(out) => {
                let mut row = Vec::with_capacity(metrics.len());
                for &metric in metrics {
                    let (loss, _) =
                        ranking_loss_up_to_reversal(&out.permutation, &truth, metric)?;
                    row.push(loss);
                }
                losses.push(row);
                degenerate.push(out.degenerate);
            }
            Err(Error::Degenerate(_)) => {
                losses.push(vec![1.0; metrics.len()]);
                degenerate.push(true);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(TrialOutcome { losses, degenerate })
}

/// Aggregate of one (point, estimator, metric) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub estimator: EstimatorKind,
    pub metric: Metric,
    pub mean_loss: f64,
    /// Sample standard deviation / sqrt(replications); 0 for one replication.
    pub std_error: f64,
    pub replications: usize,
    /// Trials where this estimator hit a degenerate input.
    pub degenerate_trials: usize,
}

/// Raw per-replication losses of one (estimator, metric) pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawCell {
    pub estimator: EstimatorKind,
    pub metric: Metric,
    pub losses: Vec<f64>,
}

/// Results of one grid point; `error` is set (and `cells` empty) when any
/// of its trials failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub grid_index: usize,
    pub params: PointParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub cells: Vec<CellResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<Vec<RawCell>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub points: Vec<PointResult>,
}

impl ExperimentResult {
    pub fn find_cell(
        &self,
        grid_index: usize,
        estimator: EstimatorKind,
        metric: Metric,
    ) -> Option<&CellResult> {
        self.points.get(grid_index).and_then(|p| {
            p.cells
                .iter()
                .find(|c| c.estimator == estimator && c.metric == metric)
        })
    }
}

/// Runs the whole grid, `parallelism` worker threads (0 = library default).
/// Every number in the result depends only on (config, seed), not on the
/// worker count or scheduling.
pub fn run_experiment(config: &ExperimentConfig, parallelism: usize) -> Result<ExperimentResult> {
    config.validate()?;
    let points = config.resolve_points()?;
    let reps = config.replications;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::Domain(format!("cannot build thread pool: {e}")))?;
    let outcomes: Vec<Result<TrialOutcome>> = pool.install(|| {
        (0..points.len() * reps)
            .into_par_iter()
            .map(|idx| {
                let g = idx / reps;
                let r = idx % reps;
                run_trial(
                    &points[g],
                    &config.estimators,
                    &config.metrics,
                    config.tol,
                    mix_seed(config.seed, g as u64, r as u64),
                )
            })
            .collect()
    });

    let mut point_results = Vec::with_capacity(points.len());
    for (g, point) in points.iter().enumerate() {
        let slice = &outcomes[g * reps..(g + 1) * reps];
        if let Some(err) = slice.iter().find_map(|o| o.as_ref().err()) {
            point_results.push(PointResult {
                grid_index: g,
                params: point.params.clone(),
                error: Some(err.to_string()),
                cells: vec![],
                raw: None,
            });
            continue;
        }
        let trials: Vec<&TrialOutcome> = slice
            .iter()
            .map(|o| o.as_ref().expect("errors handled above"))
            .collect();
        let mut cells = Vec::new();
        let mut raw = Vec::new();
        for (ei, &est) in config.estimators.iter().enumerate() {
            let degenerate_trials = trials.iter().filter(|t| t.degenerate[ei]).count();
            for (mi, &metric) in config.metrics.iter().enumerate() {
                let losses: Vec<f64> = trials.iter().map(|t| t.losses[ei][mi]).collect();
                let mean = losses.iter().sum::<f64>() / reps as f64;
                let std_error = if reps > 1 {
                    let var = losses.iter().map(|l| (l - mean).powi(2)).sum::<f64>()
                        / (reps - 1) as f64;
                    (var / reps as f64).sqrt()
                } else {
                    0.0
                };
                cells.push(CellResult {
                    estimator: est,
                    metric,
                    mean_loss: mean,
                    std_error,
                    replications: reps,
                    degenerate_trials,
                });
                if config.retain_raw {
                    raw.push(RawCell {
                        estimator: est,
                        metric,
                        losses,
                    });
                }
            }
        }
        point_results.push(PointResult {
            grid_index: g,
            params: point.params.clone(),
            error: None,
            cells,
            raw: config.retain_raw.then_some(raw),
        });
    }
    Ok(ExperimentResult {
        config: config.clone(),
        points: point_results,
    })
}

/// Output encodings for [`emit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Json,
    MarkdownTable,
}

fn csv_safe(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

/// Renders aggregates. CSV: one row per (point, estimator, metric). JSON:
/// the full result, round-trippable. Markdown: estimators x points table of
/// mean losses for the 0-1 metric (or the first configured metric).
pub fn emit(result: &ExperimentResult, format: EmitFormat) -> Result<String> {
    if result.points.is_empty() {
        return Err(Error::Domain("cannot emit an empty result".into()));
    }
    match format {
        EmitFormat::Json => {
            let mut s = serde_json::to_string_pretty(result)
                .map_err(|e| Error::Domain(format!("json encoding failed: {e}")))?;
            s.push('\n');
            Ok(s)
        }
        EmitFormat::Csv => {
            let mut out = String::from(
                "grid_index,regime,alpha,n,p,sigma2,eta_scale,estimator,metric,\
                 mean_loss,std_error,replications,degenerate_trials,error\n",
            );
            for point in &result.points {
                let params = &point.params;
                let prefix = format!(
                    "{},{},{},{},{},{},{}",
                    point.grid_index,
                    params.regime.map(|r| r.name()).unwrap_or(""),
                    fmt_opt(&params.alpha),
                    params.n,
                    params.p,
                    params.sigma2,
                    fmt_opt(&params.eta_scale),
                );
                if let Some(err) = &point.error {
                    out.push_str(&format!("{prefix},,,,,,,{}\n", csv_safe(err)));
                    continue;
                }
                for cell in &point.cells {
                    out.push_str(&format!(
                        "{prefix},{},{},{},{},{},{},\n",
                        cell.estimator.name(),
                        cell.metric.name(),
                        cell.mean_loss,
                        cell.std_error,
                        cell.replications,
                        cell.degenerate_trials,
                    ));
                }
            }
            Ok(out)
        }
        EmitFormat::MarkdownTable => {
            let metric = if result.config.metrics.contains(&Metric::ZeroOne) {
                Metric::ZeroOne
            } else {
                result.config.metrics[0]
            };
            let mut out = format!(
                "mean {} loss, {} replications\n\n",
                metric.name(),
                result.config.replications
            );
            out.push_str("| estimator |");
            for point in &result.points {
                out.push_str(&format!(" {} |", point.params.label()));
            }
            out.push('\n');
            out.push_str("|---|");
            for _ in &result.points {
                out.push_str("---|");
            }
            out.push('\n');
            for &est in &result.config.estimators {
                out.push_str(&format!("| {} |", est.name()));
                for point in &result.points {
                    let cell = point
                        .cells
                        .iter()
                        .find(|c| c.estimator == est && c.metric == metric);
                    match (cell, &point.error) {
                        (Some(c), _) => out.push_str(&format!(" {:.3} |", c.mean_loss)),
                        (None, Some(_)) => out.push_str(" failed |"),
                        (None, None) => out.push_str(" - |"),
                    }
                }
                out.push('\n');
            }
            Ok(out)
        }
    }
}

/// Per-replication losses as CSV, when the result retained them.
pub fn emit_raw(result: &ExperimentResult) -> Option<String> {
    let any = result.points.iter().any(|p| p.raw.is_some());
    if !any {
        return None;
    }
    let mut out = String::from("grid_index,estimator,metric,replication,loss\n");
    for point in &result.points {
        if let Some(raw) = &point.raw {
            for cell in raw {
                for (r, loss) in cell.losses.iter().enumerate() {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        point.grid_index,
                        cell.estimator.name(),
                        cell.metric.name(),
                        r,
                        loss
                    ));
                }
            }
        }
    }
    Some(out)
}
