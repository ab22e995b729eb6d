//! Permutations of `{0, ..., p-1}` and the ranking operator.
//!
//! Indices are 0-based throughout the library; the I/O layers convert to and
//! from the 1-based convention used in files and on the command line.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};
use crate::rng::SimRng;
use crate::scalar::Scalar;

/// A permutation in one-line notation: `mapping[i] = pi(i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from its one-line mapping, validating that it is
    /// a bijection on `{0, ..., p-1}`.
    pub fn from_mapping(mapping: Vec<usize>) -> Result<Self> {
        let p = mapping.len();
        if p == 0 {
            return Err(Error::Domain("a permutation needs at least one element".into()));
        }
        let mut seen = vec![false; p];
        for &v in &mapping {
            if v >= p {
                return Err(Error::Domain(format!(
                    "image {v} out of range for a permutation of size {p}"
                )));
            }
            if seen[v] {
                return Err(Error::Domain(format!("image {v} appears twice")));
            }
            seen[v] = true;
        }
        Ok(Self { mapping })
    }

    pub fn identity(p: usize) -> Self {
        Self {
            mapping: (0..p).collect(),
        }
    }

    /// The transposition swapping positions `i` and `j` (identity elsewhere).
    pub fn transposition(p: usize, i: usize, j: usize) -> Result<Self> {
        if i >= p || j >= p {
            return Err(Error::Domain(format!(
                "transposition ({i}, {j}) out of range for size {p}"
            )));
        }
        let mut mapping: Vec<usize> = (0..p).collect();
        mapping.swap(i, j);
        Ok(Self { mapping })
    }

    /// Uniformly random permutation drawn from `rng` by Fisher-Yates.
    pub fn random(p: usize, rng: &mut SimRng) -> Self {
        let mut mapping: Vec<usize> = (0..p).collect();
        rng.shuffle(&mut mapping);
        Self { mapping }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.mapping
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mapping.iter().copied()
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Group inverse: `inverse()[self[i]] == i`.
    pub fn inverse(&self) -> Self {
        let mut inv = vec![0usize; self.len()];
        for (i, &v) in self.mapping.iter().enumerate() {
            inv[v] = i;
        }
        Self { mapping: inv }
    }

    /// Function composition `(self o other)(i) = self[other[i]]`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "cannot compose permutations of sizes {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Self {
            mapping: other.mapping.iter().map(|&v| self.mapping[v]).collect(),
        })
    }

    /// Order reversal: `reverse()[i] = self[p-1-i]`.
    pub fn reverse(&self) -> Self {
        let mut mapping = self.mapping.clone();
        mapping.reverse();
        Self { mapping }
    }
}

impl Index<usize> for Permutation {
    type Output = usize;

    fn index(&self, i: usize) -> &usize {
        &self.mapping[i]
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({:?})", self.mapping)
    }
}

/// Ranking operator: component `i` of the result is the rank of `x[i]` among
/// all entries under ascending order, ties broken by original position (left
/// to right).
pub fn rank_of<F: Scalar>(x: &[F]) -> Result<Permutation> {
    if x.is_empty() {
        return Err(Error::Domain("rank_of needs at least one entry".into()));
    }
    for (i, v) in x.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("entry {i} of the ranked vector")));
        }
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    // Stable sort: equal values keep index order, which is the tie rule.
    order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).expect("finite values compare"));
    let mut ranks = vec![0usize; x.len()];
    for (rank, &i) in order.iter().enumerate() {
        ranks[i] = rank;
    }
    Ok(Permutation { mapping: ranks })
}
