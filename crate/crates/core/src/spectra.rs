//! Numeric kernels: row centering, the projection Gram matrix, dominant
//! eigenpairs, and top-k singular triplets.
//!
//! Eigenpairs come from power iteration with per-step normalization. Two
//! fixed start vectors are always run — the constant vector and a linear
//! ramp — and the dominant of the converged pairs is returned, so a start
//! that happens to be orthogonal to the leading eigenspace cannot silently
//! yield a subdominant pair. No randomness enters the numerics.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::scalar::Scalar;

/// Default residual tolerance for the iterative eigensolver.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default iteration budget.
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Converged dominant eigenpair of a symmetric PSD matrix.
#[derive(Clone, Debug)]
pub struct EigenResult<F: Scalar> {
    pub value: F,
    /// Unit eigenvector, sign fixed so its component sum is nonnegative
    /// (first nonzero component positive when the sum vanishes).
    pub vector: Array1<F>,
    pub iterations: usize,
    pub residual: F,
}

/// Top-k singular triplets, values descending, columns orthonormal.
#[derive(Clone, Debug)]
pub struct SvdTriplets<F: Scalar> {
    pub singular_values: Vec<F>,
    /// `n x k`; column `i` is the i-th left singular vector.
    pub left_vectors: Array2<F>,
    /// `p x k`; column `i` is the i-th right singular vector, sign fixed so
    /// its component sum is nonnegative.
    pub right_vectors: Array2<F>,
}

impl<F: Scalar> SvdTriplets<F> {
    pub fn k(&self) -> usize {
        self.singular_values.len()
    }
}

/// Subtracts each row's mean: output rows sum to zero.
pub fn row_center<F: Scalar>(m: &DataMatrix<F>) -> DataMatrix<F> {
    let inv_p = F::one() / F::from_count(m.p());
    let mut arr = m.array().clone();
    for mut row in arr.rows_mut() {
        let mean = row.iter().copied().sum::<F>() * inv_p;
        row.mapv_inplace(|v| v - mean);
    }
    DataMatrix::from_array(arr).expect("centering preserves shape and finiteness")
}

/// The n x n Gram matrix of the row-centered data, `T T^t` with
/// `T = row_center(Y)`. Symmetric PSD, and invariant under any column
/// permutation of `Y`.
pub fn projection_gram<F: Scalar>(y: &DataMatrix<F>) -> Array2<F> {
    let t = row_center(y);
    let a = t.array().dot(&t.array().t());
    symmetrize(a)
}

fn symmetrize<F: Scalar>(mut a: Array2<F>) -> Array2<F> {
    let half = F::cast(0.5);
    let n = a.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (a[(i, j)] + a[(j, i)]) * half;
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

/// Flips `v` so its component sum is nonnegative; when the sum is exactly
/// zero, makes the first nonzero component positive.
fn fix_sign<F: Scalar>(v: &mut Array1<F>) {
    let s: F = v.iter().copied().sum();
    let flip = if s < F::zero() {
        true
    } else if s > F::zero() {
        false
    } else {
        v.iter()
            .find(|x| **x != F::zero())
            .is_some_and(|x| *x < F::zero())
    };
    if flip {
        v.mapv_inplace(|x| -x);
    }
}

enum PowerOutcome<F: Scalar> {
    Converged {
        value: F,
        vector: Array1<F>,
        iterations: usize,
        residual: F,
    },
    /// The start vector (after projection) lies in a null space of the
    /// operator; no information can be extracted from it.
    DeadStart,
    Exhausted {
        residual: F,
    },
}

fn project_out<F: Scalar>(w: &mut Array1<F>, ortho: &[Array1<F>]) {
    for o in ortho {
        let c = o.dot(w);
        w.zip_mut_with(o, |wi, oi| *wi -= c * *oi);
    }
}

fn norm<F: Scalar>(v: &Array1<F>) -> F {
    v.dot(v).sqrt()
}

/// Power iteration on symmetric `a`, keeping iterates orthogonal to `ortho`.
/// Convergence: `||A v - lambda v|| <= tol * max(lambda, scale, 1)`.
fn power_iterate<F: Scalar>(
    a: &Array2<F>,
    start: &Array1<F>,
    ortho: &[Array1<F>],
    scale: F,
    tol: F,
    max_iter: usize,
) -> PowerOutcome<F> {
    let mut v = start.clone();
    project_out(&mut v, ortho);
    let nv = norm(&v);
    if nv < F::cast(1e-6) {
        return PowerOutcome::DeadStart;
    }
    v.mapv_inplace(|x| x / nv);

    let floor = scale.max(F::one());
    let mut last_residual = F::infinity();
    for it in 1..=max_iter {
        let mut w = a.dot(&v);
        project_out(&mut w, ortho);
        let lambda = v.dot(&w);
        let mut resid_vec = w.clone();
        resid_vec.zip_mut_with(&v, |r, vi| *r -= lambda * *vi);
        let residual = norm(&resid_vec);
        last_residual = residual;
        if residual <= tol * lambda.max(floor) {
            return PowerOutcome::Converged {
                value: lambda,
                vector: v,
                iterations: it,
                residual,
            };
        }
        let nw = norm(&w);
        if nw == F::zero() {
            return PowerOutcome::DeadStart;
        }
        w.mapv_inplace(|x| x / nw);
        v = w;
    }
    PowerOutcome::Exhausted {
        residual: last_residual,
    }
}

fn uniform_start<F: Scalar>(d: usize) -> Array1<F> {
    let inv = F::one() / F::from_count(d).sqrt();
    Array1::from_elem(d, inv)
}

fn ramp_start<F: Scalar>(d: usize) -> Array1<F> {
    let mut v = Array1::from_shape_fn(d, |i| F::from_count(i + 1));
    let nv = norm(&v);
    v.mapv_inplace(|x| x / nv);
    v
}

/// Canonical basis vectors, used as fallback starts and to complete
/// orthonormal families along null directions.
fn canonical_completion<F: Scalar>(d: usize, ortho: &[Array1<F>]) -> Option<Array1<F>> {
    for c in 0..d {
        let mut v = Array1::zeros(d);
        v[c] = F::one();
        project_out(&mut v, ortho);
        let nv = norm(&v);
        if nv > F::cast(1e-6) {
            v.mapv_inplace(|x| x / nv);
            return Some(v);
        }
    }
    None
}

fn dominant_pair<F: Scalar>(
    a: &Array2<F>,
    ortho: &[Array1<F>],
    scale: F,
    tol: F,
    max_iter: usize,
) -> Result<(F, Array1<F>, usize, F)> {
    let d = a.nrows();
    let mut starts = vec![uniform_start(d), ramp_start(d)];
    if let Some(extra) = canonical_completion(d, ortho) {
        starts.push(extra);
    }

    let mut best: Option<(F, Array1<F>, usize, F)> = None;
    let mut dead = 0usize;
    let mut worst_residual = F::zero();
    for start in &starts {
        match power_iterate(a, start, ortho, scale, tol, max_iter) {
            PowerOutcome::Converged {
                value,
                vector,
                iterations,
                residual,
            } => {
                let better = best.as_ref().is_none_or(|(v, ..)| value > *v);
                if better {
                    best = Some((value, vector, iterations, residual));
                }
            }
            PowerOutcome::DeadStart => dead += 1,
            PowerOutcome::Exhausted { residual } => {
                worst_residual = worst_residual.max(residual)
            }
        }
    }
    match best {
        Some(hit) => Ok(hit),
        None if dead == starts.len() => Err(Error::Degenerate(
            "operator annihilates every start vector".into(),
        )),
        None => Err(Error::NoConvergence {
            iterations: max_iter,
            residual: worst_residual.to_f64().unwrap_or(f64::NAN),
        }),
    }
}

/// Dominant eigenpair of a symmetric PSD matrix by power iteration.
pub fn leading_eigenvector<F: Scalar>(
    a: &Array2<F>,
    tol: F,
    max_iter: usize,
) -> Result<EigenResult<F>> {
    if a.nrows() != a.ncols() {
        return Err(Error::Dimension(format!(
            "eigenproblem needs a square matrix, got {} x {}",
            a.nrows(),
            a.ncols()
        )));
    }
    if tol <= F::zero() || !tol.is_finite() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    if max_iter == 0 {
        return Err(Error::Domain("max_iter must be at least 1".into()));
    }
    let amax = a.iter().fold(F::zero(), |m, v| m.max(v.abs()));
    if amax == F::zero() {
        return Err(Error::Degenerate(
            "zero matrix has no dominant eigenvector".into(),
        ));
    }
    let (value, mut vector, iterations, residual) =
        dominant_pair(a, &[], F::one(), tol, max_iter)?;
    fix_sign(&mut vector);
    Ok(EigenResult {
        value,
        vector,
        iterations,
        residual,
    })
}

/// Top-k singular triplets via power iteration with deflation on the Gram
/// matrix of the smaller side. Exactly null directions are completed with
/// deterministic canonical vectors and zero singular values.
pub fn top_svd<F: Scalar>(m: &DataMatrix<F>, k: usize, tol: F) -> Result<SvdTriplets<F>> {
    let (n, p) = (m.n(), m.p());
    let small = n.min(p);
    if k == 0 || k > small {
        return Err(Error::Domain(format!(
            "k = {k} out of range 1..={small} for a {n} x {p} matrix"
        )));
    }
    if tol <= F::zero() || !tol.is_finite() {
        return Err(Error::Domain("tolerance must be positive".into()));
    }

    let arr = m.array();
    let left_side = n <= p; // run the Gram on the smaller dimension
    let mut g = if left_side {
        symmetrize(arr.dot(&arr.t()))
    } else {
        symmetrize(arr.t().dot(arr))
    };
    let d = g.nrows();

    let mut gram_values: Vec<F> = Vec::with_capacity(k);
    let mut gram_vectors: Vec<Array1<F>> = Vec::with_capacity(k);
    let mut top_scale = F::one();
    for stage in 0..k {
        let gmax = g.iter().fold(F::zero(), |mx, v| mx.max(v.abs()));
        // Stage 0 treats only the exactly-zero matrix as null; later stages
        // also treat deflation residue at machine level as null.
        let negligible = if stage == 0 {
            gmax == F::zero()
        } else {
            gmax <= F::epsilon() * top_scale * F::from_count(d)
        };
        let (mut lambda, y) = if negligible {
            let y = canonical_completion(d, &gram_vectors).ok_or_else(|| {
                Error::Degenerate("no direction left to complete the basis".into())
            })?;
            (F::zero(), y)
        } else {
            let (lambda, y, _, _) =
                dominant_pair(&g, &gram_vectors, top_scale, tol, DEFAULT_MAX_ITER)?;
            (lambda.max(F::zero()), y)
        };
        if stage == 0 {
            top_scale = lambda.max(F::one());
        } else {
            // Deflation rounding can nudge a later value above an earlier
            // one by an ulp; keep the sequence nonincreasing.
            lambda = lambda.min(gram_values[stage - 1]);
        }
        // Deflate and keep later iterates orthogonal to what was found.
        let outer_scale = lambda;
        for i in 0..d {
            for j in 0..d {
                g[(i, j)] -= outer_scale * y[i] * y[j];
            }
        }
        gram_values.push(lambda);
        gram_vectors.push(y);
    }

    // Recover the other side: z_i = M^t u_i (or M v_i), normalized; its norm
    // is the singular value. Null directions get canonical completions.
    let mut singular_values = Vec::with_capacity(k);
    let mut gram_side: Vec<Array1<F>> = Vec::with_capacity(k);
    let mut other_side: Vec<Array1<F>> = Vec::with_capacity(k);
    let sigma_floor = F::epsilon() * top_scale.sqrt() * F::from_count(d);
    for (lambda, y) in gram_values.iter().zip(&gram_vectors) {
        let z = if left_side {
            arr.t().dot(y)
        } else {
            arr.dot(y)
        };
        let sigma = norm(&z);
        if sigma > sigma_floor && *lambda > F::zero() {
            let mut z = z;
            z.mapv_inplace(|x| x / sigma);
            // Light re-orthonormalization against earlier vectors.
            project_out(&mut z, &other_side);
            let nz = norm(&z);
            z.mapv_inplace(|x| x / nz);
            singular_values.push(sigma);
            other_side.push(z);
        } else {
            let z = canonical_completion(z.len(), &other_side).ok_or_else(|| {
                Error::Degenerate("no direction left to complete the basis".into())
            })?;
            singular_values.push(F::zero());
            other_side.push(z);
        }
        gram_side.push(y.clone());
    }

    let (mut us, mut vs) = if left_side {
        (gram_side, other_side)
    } else {
        (other_side, gram_side)
    };
    for i in 0..k {
        // Sign rule lives on the right vectors; flip pairs jointly.
        let mut v = vs[i].clone();
        let before = v.clone();
        fix_sign(&mut v);
        if v != before {
            us[i].mapv_inplace(|x| -x);
        }
        vs[i] = v;
    }

    let mut left = Array2::zeros((n, k));
    let mut right = Array2::zeros((p, k));
    for i in 0..k {
        left.column_mut(i).assign(&us[i]);
        right.column_mut(i).assign(&vs[i]);
    }
    Ok(SvdTriplets {
        singular_values,
        left_vectors: left,
        right_vectors: right,
    })
}
