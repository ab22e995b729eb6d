//! Dense data matrices (rows are samples, columns are items).

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::scalar::Scalar;

/// A dense `n x p` real matrix with `n >= 1`, `p >= 2`, all entries finite.
#[derive(Clone, Debug, PartialEq)]
pub struct DataMatrix<F: Scalar> {
    values: Array2<F>,
}

impl<F: Scalar> DataMatrix<F> {
    pub fn from_array(values: Array2<F>) -> Result<Self> {
        let (n, p) = values.dim();
        if n < 1 || p < 2 {
            return Err(Error::Dimension(format!(
                "a data matrix needs n >= 1 and p >= 2, got {n} x {p}"
            )));
        }
        if let Some((i, j)) = values
            .indexed_iter()
            .find(|(_, v)| !v.is_finite())
            .map(|(ix, _)| ix)
        {
            return Err(Error::NonFinite(format!("matrix entry ({i}, {j})")));
        }
        Ok(Self { values })
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Dimension("matrix needs at least one row".into()));
        }
        let p = rows[0].len();
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::Dimension("rows have unequal lengths".into()));
        }
        let flat: Vec<F> = rows.iter().flatten().copied().collect();
        let arr = Array2::from_shape_vec((rows.len(), p), flat)
            .expect("shape matches by construction");
        Self::from_array(arr)
    }

    /// Builds the matrix entrywise from `f(i, j)` (row-major order).
    pub fn from_fn(n: usize, p: usize, mut f: impl FnMut(usize, usize) -> F) -> Result<Self> {
        Self::from_array(Array2::from_shape_fn((n, p), |(i, j)| f(i, j)))
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn p(&self) -> usize {
        self.values.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.values[(i, j)]
    }

    pub fn array(&self) -> &Array2<F> {
        &self.values
    }

    pub fn into_array(self) -> Array2<F> {
        self.values
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, F> {
        self.values.row(i)
    }

    pub fn column(&self, j: usize) -> ArrayView1<'_, F> {
        self.values.column(j)
    }

    /// Right-action of a permutation on the columns: column `i` of `self`
    /// lands at position `pi(i)`, i.e. output column `j` is input column
    /// `pi^-1(j)`. Under this convention, ranking any nonnegative projection
    /// of the permuted matrix of a row-monotone signal recovers `pi^-1`.
    pub fn apply_columns(&self, pi: &Permutation) -> Result<Self> {
        if pi.len() != self.p() {
            return Err(Error::Dimension(format!(
                "permutation of size {} cannot act on {} columns",
                pi.len(),
                self.p()
            )));
        }
        let mut out = Array2::zeros(self.values.dim());
        for i in 0..self.p() {
            out.column_mut(pi[i]).assign(&self.values.column(i));
        }
        Ok(Self { values: out })
    }
}
