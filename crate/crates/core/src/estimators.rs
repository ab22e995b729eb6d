//! Column-order estimators and downstream peak-to-trough ratio fitting.
//!
//! All order estimators share the shape "rank a score vector, invert the
//! ranking": the best-linear-projection estimator scores columns by the
//! dominant eigenvector of the centered Gram matrix, the baselines score by
//! column means or maxima, and the plain SVD variant ranks the first right
//! singular vector of the uncentered data.

use std::str::FromStr;

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::perm::{rank_of, Permutation};
use crate::scalar::Scalar;
use crate::spectra::{leading_eigenvector, projection_gram, top_svd, DEFAULT_MAX_ITER};

/// Which order estimator to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    Blp,
    Mean,
    Max,
    Svd,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [
        EstimatorKind::Blp,
        EstimatorKind::Mean,
        EstimatorKind::Max,
        EstimatorKind::Svd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Blp => "blp",
            EstimatorKind::Mean => "mean",
            EstimatorKind::Max => "max",
            EstimatorKind::Svd => "svd",
        }
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blp" => Ok(EstimatorKind::Blp),
            "mean" => Ok(EstimatorKind::Mean),
            "max" => Ok(EstimatorKind::Max),
            "svd" => Ok(EstimatorKind::Svd),
            other => Err(Error::Domain(format!("unknown estimator '{other}'"))),
        }
    }
}

/// Result of one order-recovery run.
#[derive(Clone, Debug)]
pub struct RecoveryOutput<F: Scalar> {
    /// The estimated permutation (inverse rank of the scores).
    pub permutation: Permutation,
    /// Unit weight vector over samples, when the method has one.
    pub projection_vector: Option<Array1<F>>,
    /// Per-column scores whose ranking produced the permutation.
    pub projection_scores: Option<Array1<F>>,
    pub method: EstimatorKind,
    /// Set when the scores carried no ordering information (all equal); the
    /// permutation then falls back to the identity via the stable tie rule.
    pub degenerate: bool,
}

fn scores_are_flat<F: Scalar>(scores: &Array1<F>) -> bool {
    let mut it = scores.iter();
    let first = *it.next().expect("p >= 2");
    it.all(|v| *v == first)
}

fn output_from_scores<F: Scalar>(
    scores: Array1<F>,
    projection_vector: Option<Array1<F>>,
    method: EstimatorKind,
) -> Result<RecoveryOutput<F>> {
    let ranks = rank_of(scores.as_slice().expect("contiguous"))?;
    Ok(RecoveryOutput {
        permutation: ranks.inverse(),
        degenerate: scores_are_flat(&scores),
        projection_scores: Some(scores),
        projection_vector,
        method,
    })
}

/// Best-linear-projection estimator: scores are `w^t Y` for the dominant
/// eigenvector `w` of the centered Gram matrix of `Y`.
///
/// Errors with [`Error::Degenerate`] when the centered Gram is zero (all
/// columns equal / constant rows), since no dominant direction exists.
pub fn estimate_blp<F: Scalar>(y: &DataMatrix<F>, tol: F) -> Result<RecoveryOutput<F>> {
    let gram = projection_gram(y);
    let eig = leading_eigenvector(&gram, tol, DEFAULT_MAX_ITER)?;
    let scores = y.array().t().dot(&eig.vector);
    output_from_scores(scores, Some(eig.vector), EstimatorKind::Blp)
}

/// Baseline: order columns by their means. The implied weight vector is the
/// constant unit vector.
pub fn estimate_mean<F: Scalar>(y: &DataMatrix<F>) -> Result<RecoveryOutput<F>> {
    let inv_n = F::one() / F::from_count(y.n());
    let scores = Array1::from_shape_fn(y.p(), |j| {
        y.column(j).iter().copied().sum::<F>() * inv_n
    });
    let weight = Array1::from_elem(y.n(), F::one() / F::from_count(y.n()).sqrt());
    output_from_scores(scores, Some(weight), EstimatorKind::Mean)
}

/// Baseline: order columns by their maxima. Not a linear projection, so no
/// weight vector is reported.
pub fn estimate_max<F: Scalar>(y: &DataMatrix<F>) -> Result<RecoveryOutput<F>> {
    let scores = Array1::from_shape_fn(y.p(), |j| {
        y.column(j)
            .iter()
            .copied()
            .fold(F::neg_infinity(), F::max)
    });
    output_from_scores(scores, None, EstimatorKind::Max)
}

/// SVD estimator: ranks the first right singular vector of the *uncentered*
/// data. Unlike [`estimate_blp`] it is not invariant to per-row intercepts.
pub fn estimate_svd<F: Scalar>(y: &DataMatrix<F>, tol: F) -> Result<RecoveryOutput<F>> {
    // All columns identical: the right singular direction is constant, so
    // return the identity with the degeneracy flag instead of iterating.
    let first = y.column(0);
    let all_equal = (1..y.p()).all(|j| y.column(j) == first);
    if all_equal {
        return Ok(RecoveryOutput {
            permutation: Permutation::identity(y.p()),
            projection_vector: None,
            projection_scores: None,
            method: EstimatorKind::Svd,
            degenerate: true,
        });
    }
    let svd = top_svd(y, 1, tol)?;
    let v1 = svd.right_vectors.column(0).to_owned();
    let u1 = svd.left_vectors.column(0).to_owned();
    output_from_scores(v1, Some(u1), EstimatorKind::Svd)
}

/// Dispatches on the estimator kind. `tol` is used by the spectral methods.
pub fn estimate<F: Scalar>(
    kind: EstimatorKind,
    y: &DataMatrix<F>,
    tol: F,
) -> Result<RecoveryOutput<F>> {
    match kind {
        EstimatorKind::Blp => estimate_blp(y, tol),
        EstimatorKind::Mean => estimate_mean(y),
        EstimatorKind::Max => estimate_max(y),
        EstimatorKind::Svd => estimate_svd(y, tol),
    }
}

/// Base of the logarithm the coverage values live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBase {
    Natural,
    Two,
}

impl LogBase {
    fn raise<F: Scalar>(self, exponent: F) -> F {
        match self {
            LogBase::Natural => exponent.exp(),
            LogBase::Two => F::cast(2.0).powf(exponent),
        }
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" => Ok(LogBase::Natural),
            "2" => Ok(LogBase::Two),
            other => Err(Error::Domain(format!(
                "unknown log base '{other}' (expected 'e' or '2')"
            ))),
        }
    }
}

/// Peak-to-trough ratio per row: reorder each row of log-scale coverages by
/// `order`, fit ordinary least squares against the normalized position
/// `x_j = j/(p-1)`, and exponentiate the slope. A constant row yields 1.
pub fn estimate_ptr<F: Scalar>(
    y: &DataMatrix<F>,
    order: &Permutation,
    log_base: LogBase,
) -> Result<Vec<F>> {
    let p = y.p();
    if order.len() != p {
        return Err(Error::Dimension(format!(
            "ordering of size {} does not fit {} columns",
            order.len(),
            p
        )));
    }
    let denom = F::from_count(p - 1);
    let xs: Vec<F> = (0..p).map(|j| F::from_count(j) / denom).collect();
    let x_mean = xs.iter().copied().sum::<F>() / F::from_count(p);
    let sxx: F = xs.iter().map(|&x| (x - x_mean) * (x - x_mean)).sum();

    let mut out = Vec::with_capacity(y.n());
    for i in 0..y.n() {
        let row = y.row(i);
        let ys: Vec<F> = (0..p).map(|j| row[order[j]]).collect();
        let y_mean = ys.iter().copied().sum::<F>() / F::from_count(p);
        let sxy: F = xs
            .iter()
            .zip(&ys)
            .map(|(&x, &yv)| (x - x_mean) * (yv - y_mean))
            .sum();
        let slope = sxy / sxx;
        out.push(log_base.raise(slope));
    }
    Ok(out)
}
