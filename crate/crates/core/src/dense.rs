//! Dense `2^R`-dimensional matrices used as a cross-check backend.
//!
//! Matrices here are indexed by register key: row/column `k` is the basis
//! state whose site-`n` bit is bit `n` of `k`.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::DENSE_RANK_LIMIT;

pub type DenseMatrix = DMatrix<Complex64>;

pub(crate) fn check_dense_rank(rank: usize) -> Result<()> {
    if rank > DENSE_RANK_LIMIT {
        return Err(Error::RankTooLarge {
            rank,
            limit: DENSE_RANK_LIMIT,
        });
    }
    Ok(())
}

/// Kronecker product of single-site matrices, identity on unlisted sites.
///
/// Site matrices are in the `(|1), |0))` row order of
/// [`SiteOp::matrix`](crate::algebra::SiteOp::matrix). Built entry by entry,
/// independently of the key-rewrite gate kernels.
pub fn site_product(rank: usize, factors: &[(usize, Matrix2<Complex64>)]) -> Result<DenseMatrix> {
    check_dense_rank(rank)?;
    let mut per_site = vec![Matrix2::<Complex64>::identity(); rank];
    for (site, m) in factors {
        if *site >= rank {
            return Err(Error::SiteOutOfRange { site: *site, rank });
        }
        per_site[*site] *= m;
    }
    let dim = 1usize << rank;
    let mut out = DenseMatrix::zeros(dim, dim);
    for row in 0..dim {
        for col in 0..dim {
            let mut v = Complex64::new(1.0, 0.0);
            for (site, m) in per_site.iter().enumerate() {
                let r = 1 - ((row >> site) & 1);
                let c = 1 - ((col >> site) & 1);
                v *= m[(r, c)];
                if v == Complex64::new(0.0, 0.0) {
                    break;
                }
            }
            out[(row, col)] = v;
        }
    }
    Ok(out)
}

pub fn max_abs_diff(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs(a: &DenseMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn commutator(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    product(a, b) - product(b, a)
}

/// `a·b`, skipping exact zeros of `a`. Register operators are very sparse,
/// so this is much cheaper than a full product while giving the same sums.
pub fn product(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    assert_eq!(a.ncols(), b.nrows(), "shape mismatch");
    let zero = Complex64::new(0.0, 0.0);
    let mut out = DenseMatrix::zeros(a.nrows(), b.ncols());
    for k in 0..a.ncols() {
        let nonzero_b: Vec<(usize, Complex64)> = (0..b.ncols())
            .map(|j| (j, b[(k, j)]))
            .filter(|(_, v)| *v != zero)
            .collect();
        for i in 0..a.nrows() {
            let aik = a[(i, k)];
            if aik == zero {
                continue;
            }
            for &(j, bkj) in &nonzero_b {
                out[(i, j)] += aik * bkj;
            }
        }
    }
    out
}

/// `exp(M)·v` by a scaled Taylor series: `exp(M) = (exp(M/s))^s` with `s`
/// chosen so each step has 1-norm at most ½. Products skip the zero entries
/// of `M`.
pub fn expm_multiply(m: &DenseMatrix, v: &DVector<Complex64>) -> DVector<Complex64> {
    assert_eq!(m.ncols(), v.len(), "shape mismatch");
    let norm1 = (0..m.ncols())
        .map(|c| m.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let steps = ((norm1 / 0.5).ceil() as usize).max(1);
    let scale = 1.0 / steps as f64;
    let zero = Complex64::new(0.0, 0.0);
    let mut entries = Vec::new();
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let x = m[(row, col)];
            if x != zero {
                entries.push((row, col, x * scale));
            }
        }
    }
    let apply = |x: &DVector<Complex64>| {
        let mut y = DVector::zeros(m.nrows());
        for &(r, c, val) in &entries {
            y[r] += val * x[c];
        }
        y
    };
    let mut out = v.clone();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..=60 {
            term = apply(&term) / Complex64::new(k as f64, 0.0);
            acc += &term;
            if term.norm() <= f64::EPSILON * 1e-3 * acc.norm() {
                break;
            }
        }
        out = acc;
    }
    out
}
