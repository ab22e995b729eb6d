//! Shared test support: an independent dense eigensolver oracle and small
//! random-instance generators.
#![allow(dead_code)] // each test binary uses a subset

use ndarray::Array2;
use permrec::rng::SimRng;
use permrec::DataMatrix;

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns (eigenvalues descending, eigenvectors as columns). Independent of
/// the library's power-iteration path.
pub fn jacobi_symmetric_eig(a: &Array2<f64>) -> (Vec<f64>, Array2<f64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "jacobi oracle needs a square matrix");
    let mut m = a.clone();
    let mut vecs = Array2::<f64>::eye(n);
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);

    for _sweep in 0..200 {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)] * m[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-14 * frob {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = vecs[(k, p)];
                    let vkq = vecs[(k, q)];
                    vecs[(k, p)] = c * vkp - s * vkq;
                    vecs[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].partial_cmp(&m[(i, i)]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| m[(i, i)]).collect();
    let mut sorted_vecs = Array2::<f64>::zeros((n, n));
    for (col, &i) in order.iter().enumerate() {
        sorted_vecs.column_mut(col).assign(&vecs.column(i));
    }
    (values, sorted_vecs)
}

/// Random matrix with nonnegative, strictly increasing rows: start at a
/// nonnegative level, add positive increments.
pub fn random_monotone_matrix(n: usize, p: usize, rng: &mut SimRng) -> DataMatrix<f64> {
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let mut level = rng.uniform_in(0.0, 2.0);
        let mut row = Vec::with_capacity(p);
        for _ in 0..p {
            row.push(level);
            level += rng.uniform_in(0.05, 1.0);
        }
        rows.push(row);
    }
    DataMatrix::from_rows(&rows).unwrap()
}

/// Random symmetric PSD matrix `B B^t / d` with entries of `B` uniform.
pub fn random_psd(d: usize, rng: &mut SimRng) -> Array2<f64> {
    let b = Array2::from_shape_fn((d, d + 2), |_| rng.uniform_in(-1.0, 1.0));
    let a = b.dot(&b.t());
    // Exact symmetry for the solver contract.
    let mut s = a.clone();
    for i in 0..d {
        for j in 0..d {
            s[(i, j)] = 0.5 * (a[(i, j)] + a[(j, i)]);
        }
    }
    s
}
