//! Truncated standard oscillator in the number basis.
//!
//! Built straight from the ladder matrix elements, sharing nothing with the
//! register construction except [`PhysParams`], so it can serve as ground
//! truth for it.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bosonic::{PhysParams, RegisterOperator};
use crate::error::{Error, Result};
use crate::state::RegisterState;

/// Largest truncation the oracle will build.
pub const FOCK_RANK_LIMIT: usize = 512;

pub type FockMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct FockOperatorSet {
    pub a: FockMatrix,
    pub a_plus: FockMatrix,
    pub x: FockMatrix,
    pub p: FockMatrix,
    pub h: FockMatrix,
    pub params: PhysParams,
}

impl FockOperatorSet {
    pub fn rank(&self) -> usize {
        self.a.nrows()
    }
}

pub fn build_fock(params: PhysParams, rank: usize) -> Result<FockOperatorSet> {
    if rank == 0 || rank > FOCK_RANK_LIMIT {
        return Err(Error::InvalidRank {
            rank,
            min: 1,
            max: FOCK_RANK_LIMIT,
        });
    }
    let eps = params.epsilon();
    let a = FockMatrix::from_fn(rank, rank, |row, col| {
        if col == row + 1 {
            Complex64::new((col as f64 * 2.0 * eps).sqrt(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let a_plus = a.adjoint();
    let x = (&a_plus + &a) * Complex64::new(0.5 / params.beta(), 0.0);
    let p = (&a_plus - &a) * Complex64::new(0.0, 0.5 / params.alpha());
    let h = &a_plus * &a * Complex64::new(0.5, 0.0) + FockMatrix::identity(rank, rank) * Complex64::new(0.5 * eps, 0.0);
    Ok(FockOperatorSet {
        a,
        a_plus,
        x,
        p,
        h,
        params,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntertwineReport {
    pub max_deviation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Compares the action of `op` between one-hot register states with
/// `fock_matrix`, entry by entry.
pub fn intertwine_check(op: &RegisterOperator, fock_matrix: &FockMatrix, tol: f64) -> Result<IntertwineReport> {
    let rank = op.rank();
    if fock_matrix.shape() != (rank, rank) {
        return Err(Error::RankMismatch {
            left: rank,
            right: fock_matrix.nrows(),
        });
    }
    let mut worst = 0.0f64;
    for col in 0..rank {
        let image = op.apply(&RegisterState::basis(rank, 1u64 << col)?)?;
        for row in 0..rank {
            let d = (image.amplitude(1u64 << row) - fock_matrix[(row, col)]).norm();
            worst = worst.max(d);
        }
    }
    Ok(IntertwineReport {
        max_deviation: worst,
        tol,
        pass: worst <= tol,
    })
}
