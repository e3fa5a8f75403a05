//! The bosonic layer of a rank-`R` register.
//!
//! Oscillator level `n` is the register basis state `|2^n)`: site `n` set,
//! every other site clear. The filter `I_B = Σ P_n` keeps exactly those keys.
//! Everything else (including the void state `|0)`) is transbosonic.
//!
//! # Hop-operator convention
//!
//! `b_lower(n) = {⊗_{j≠n,n+1} P⁰_j} A⁺_n A_{n+1}` moves the excitation from
//! site `n+1` down to site `n`, and `b_raise(n) = {⊗ P⁰_j} A_n A⁺_{n+1}` moves
//! it up. This is the only assignment under which the lowering operator
//! annihilates `|2^0)` and the relations `B_n⁺ B_m = δ_nm P_{n+1}`,
//! `B_n B_m⁺ = δ_nm P_n` hold together; the two textbook-style displays of
//! these operators disagree on which one lowers.
//!
//! # Truncation
//!
//! Sums over hop operators run `n = 0..R-2`, sums over projectors
//! `n = 0..R-1`. Canonical commutators therefore hold only on states with no
//! weight on the top level `R-1`; there `[a_B, a_B⁺]` gives `-2ε(R-1)` instead
//! of `2ε`, as for any truncated ladder.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::SiteOp;
use crate::conventions::{Conventions, Mutation};
use crate::dense::{check_dense_rank, DenseMatrix};
use crate::error::{Error, Result};
use crate::gates::{apply_circuit_with, circuit_to_matrix_with, Circuit, CircuitTerm, GatePlacement};
use crate::state::{check_rank, RegisterState, MAX_RANK};

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Physical constants of `H = ½α²p² + ½β²x²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    alpha: f64,
    beta: f64,
    hbar: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams {
            alpha: 1.0,
            beta: 1.0,
            hbar: 1.0,
        }
    }
}

impl PhysParams {
    pub fn new(alpha: f64, beta: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("beta", beta), ("hbar", hbar)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(PhysParams { alpha, beta, hbar })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Energy quantum `ε = αβħ`.
    pub fn epsilon(&self) -> f64 {
        self.alpha * self.beta * self.hbar
    }

    /// Angular frequency `ω = αβ`.
    pub fn omega(&self) -> f64 {
        self.alpha * self.beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Lower,
    Raise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Position,
    Momentum,
}

/// A linear operator on register states, stored as a gate sum.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterOperator {
    circuit: Circuit,
    conv: Conventions,
}

impl RegisterOperator {
    pub fn new(circuit: Circuit) -> Self {
        Self::with_conventions(circuit, Conventions::STANDARD)
    }

    pub fn with_conventions(circuit: Circuit, conv: Conventions) -> Self {
        RegisterOperator { circuit, conv }
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn rank(&self) -> usize {
        self.circuit.rank()
    }

    pub fn apply(&self, state: &RegisterState) -> Result<RegisterState> {
        apply_circuit_with(state, &self.circuit, &self.conv)
    }

    pub fn matrix(&self) -> Result<DenseMatrix> {
        circuit_to_matrix_with(&self.circuit, &self.conv)
    }

    fn lift(&self, circuit: Circuit) -> Self {
        RegisterOperator {
            circuit,
            conv: self.conv,
        }
    }

    pub fn sum(&self, other: &RegisterOperator) -> Result<Self> {
        Ok(self.lift(self.circuit.sum(&other.circuit)?))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.lift(self.circuit.scale(c))
    }

    /// `self · other`.
    pub fn compose(&self, other: &RegisterOperator) -> Result<Self> {
        Ok(self.lift(self.circuit.compose(&other.circuit)?))
    }

    pub fn commutator(&self, other: &RegisterOperator) -> Result<Self> {
        Ok(self.lift(self.circuit.commutator(&other.circuit)?))
    }
}

/// Amplitudes on the bosonic levels `|2^0), ..., |2^{R-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct BosonicSubspaceVector {
    pub coeffs: DVector<Complex64>,
}

impl BosonicSubspaceVector {
    pub fn new(coeffs: DVector<Complex64>) -> Self {
        BosonicSubspaceVector { coeffs }
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }
}

pub fn is_power_of_two(key: u64) -> bool {
    key.is_power_of_two()
}

/// Full and reduced gate forms of a hop-operator sum.
///
/// The full form carries the `-P⁰P⁰ - P¹P¹` correction terms and equals the
/// operator on every register state; the reduced form keeps only the
/// transpose gates and is exact on bosonic states only.
#[derive(Debug, Clone, PartialEq)]
pub struct GateDecomposition {
    pub full: RegisterOperator,
    pub reduced: RegisterOperator,
}

/// Builder for the bosonic operators on one register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonicRegister {
    params: PhysParams,
    rank: usize,
    conv: Conventions,
}

impl BosonicRegister {
    pub fn new(params: PhysParams, rank: usize) -> Result<Self> {
        Self::with_conventions(params, rank, Conventions::STANDARD)
    }

    pub fn with_conventions(params: PhysParams, rank: usize, conv: Conventions) -> Result<Self> {
        check_rank(rank)?;
        Ok(BosonicRegister { params, rank, conv })
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn conventions(&self) -> &Conventions {
        &self.conv
    }

    fn op(&self, circuit: Circuit) -> RegisterOperator {
        RegisterOperator::with_conventions(circuit, self.conv)
    }

    fn check_level(&self, n: usize) -> Result<()> {
        if n >= self.rank {
            return Err(Error::LevelOutOfRange {
                level: n,
                rank: self.rank,
            });
        }
        Ok(())
    }

    fn check_hop(&self, n: usize) -> Result<()> {
        if self.rank < 2 {
            return Err(Error::InvalidRank {
                rank: self.rank,
                min: 2,
                max: MAX_RANK,
            });
        }
        if n + 1 >= self.rank {
            return Err(Error::LevelOutOfRange {
                level: n,
                rank: self.rank,
            });
        }
        Ok(())
    }

    /// `P⁰` on every site except those listed.
    fn clear_elsewhere(&self, skip: &[usize]) -> Vec<GatePlacement> {
        (0..self.rank)
            .filter(|j| !skip.contains(j))
            .map(|j| GatePlacement::local(j, SiteOp::P0))
            .collect()
    }

    fn projector_factors(&self, n: usize) -> Vec<GatePlacement> {
        let mut f = self.clear_elsewhere(&[n]);
        f.push(GatePlacement::local(n, SiteOp::P1));
        f
    }

    /// `P_n`: keeps key `2^n`, annihilates every other key.
    pub fn projector(&self, n: usize) -> Result<RegisterOperator> {
        self.check_level(n)?;
        Ok(self.op(Circuit::single(self.rank, real(1.0), self.projector_factors(n))?))
    }

    /// The bosonic filter `I_B = Σ_n P_n`.
    pub fn identity(&self) -> RegisterOperator {
        let terms = (0..self.rank)
            .map(|n| CircuitTerm::new(real(1.0), self.projector_factors(n)))
            .collect();
        self.op(Circuit::from_terms(self.rank, terms).expect("sites below rank"))
    }

    /// Projector onto the void state.
    pub fn void_projector(&self) -> RegisterOperator {
        self.op(Circuit::single(self.rank, real(1.0), self.clear_elsewhere(&[])).expect("sites below rank"))
    }

    /// `A_n` or `A_n⁺` at one site, identity elsewhere. Not bosonic.
    pub fn site_ladder(&self, n: usize, direction: Direction) -> Result<RegisterOperator> {
        self.check_level(n)?;
        let op = match direction {
            Direction::Lower => SiteOp::A,
            Direction::Raise => SiteOp::Aplus,
        };
        Ok(self.op(Circuit::single(
            self.rank,
            real(1.0),
            vec![GatePlacement::local(n, op)],
        )?))
    }

    fn hop_factors(&self, n: usize, direction: Direction) -> Vec<GatePlacement> {
        let direction = match (self.conv.mutation, direction) {
            (Mutation::SwapLadderConvention, Direction::Lower) => Direction::Raise,
            (Mutation::SwapLadderConvention, Direction::Raise) => Direction::Lower,
            (_, d) => d,
        };
        let (at_n, at_next) = match direction {
            Direction::Lower => (SiteOp::Aplus, SiteOp::A),
            Direction::Raise => (SiteOp::A, SiteOp::Aplus),
        };
        let mut f = self.clear_elsewhere(&[n, n + 1]);
        f.push(GatePlacement::local(n, at_n));
        f.push(GatePlacement::local(n + 1, at_next));
        f
    }

    fn hop_coeff(&self, direction: Direction) -> Complex64 {
        match (self.conv.mutation, direction) {
            (Mutation::NegateLowering, Direction::Lower) => real(-1.0),
            _ => real(1.0),
        }
    }

    fn hop(&self, n: usize, direction: Direction) -> Result<RegisterOperator> {
        self.check_hop(n)?;
        let c = Circuit::single(self.rank, self.hop_coeff(direction), self.hop_factors(n, direction))?;
        Ok(self.op(c))
    }

    /// `B_n`: `|2^{n+1}) → |2^n)`.
    pub fn b_lower(&self, n: usize) -> Result<RegisterOperator> {
        self.hop(n, Direction::Lower)
    }

    /// `B_n⁺`: `|2^n) → |2^{n+1})`.
    pub fn b_raise(&self, n: usize) -> Result<RegisterOperator> {
        self.hop(n, Direction::Raise)
    }

    /// `√((n+1)·2ε)`, the ladder matrix element between levels `n` and `n+1`.
    pub fn ladder_weight(&self, n: usize) -> f64 {
        ((n as f64 + 1.0) * 2.0 * self.params.epsilon()).sqrt()
    }

    /// `a_B = Σ √((n+1)2ε) B_n` or its adjoint.
    pub fn ladder(&self, direction: Direction) -> Result<RegisterOperator> {
        self.check_hop(0)?;
        let terms = (0..self.rank - 1)
            .map(|n| {
                CircuitTerm::new(
                    self.hop_coeff(direction) * self.ladder_weight(n),
                    self.hop_factors(n, direction),
                )
            })
            .collect();
        Ok(self.op(Circuit::from_terms(self.rank, terms)?))
    }

    fn zero_point(&self) -> f64 {
        if self.conv.mutation == Mutation::DropZeroPoint {
            0.0
        } else {
            0.5
        }
    }

    /// `H_B = Σ (n+½)ε P_n`.
    pub fn hamiltonian(&self) -> RegisterOperator {
        let eps = self.params.epsilon();
        let terms = (0..self.rank)
            .map(|n| CircuitTerm::new(real((n as f64 + self.zero_point()) * eps), self.projector_factors(n)))
            .collect();
        self.op(Circuit::from_terms(self.rank, terms).expect("sites below rank"))
    }

    /// `H_B = ½ a_B⁺ a_B + ½ε I_B`, built from the ladder operators.
    pub fn hamiltonian_ladder_form(&self) -> Result<RegisterOperator> {
        let number = self
            .ladder(Direction::Raise)?
            .compose(&self.ladder(Direction::Lower)?)?;
        let offset = self.identity().scale(real(self.zero_point() * self.params.epsilon()));
        number.scale(real(0.5)).sum(&offset)
    }

    /// `x̂_B = (a_B⁺ + a_B)/(2β)`.
    pub fn position(&self) -> Result<RegisterOperator> {
        let s = self.ladder(Direction::Raise)?.sum(&self.ladder(Direction::Lower)?)?;
        Ok(s.scale(real(0.5 / self.params.beta)))
    }

    /// `p̂_B = i(a_B⁺ - a_B)/(2α)`.
    pub fn momentum(&self) -> Result<RegisterOperator> {
        let minus_lower = self.ladder(Direction::Lower)?.scale(real(-1.0));
        let s = self.ladder(Direction::Raise)?.sum(&minus_lower)?;
        Ok(s.scale(Complex64::new(0.0, 0.5 / self.params.alpha)))
    }

    pub fn quadrature(&self, kind: Quadrature) -> Result<RegisterOperator> {
        match kind {
            Quadrature::Position => self.position(),
            Quadrature::Momentum => self.momentum(),
        }
    }

    /// `Σ_n coeff(n) {⊗P⁰_j} (T_{n,n+1}(θ) [- P⁰P⁰ - P¹P¹])` in full and
    /// reduced form.
    pub(crate) fn transpose_sum<F>(&self, theta: f64, coeff: F) -> Result<GateDecomposition>
    where
        F: Fn(usize) -> Complex64,
    {
        self.check_hop(0)?;
        let mut full = Circuit::zero(self.rank)?;
        let mut reduced = Circuit::zero(self.rank)?;
        for n in 0..self.rank - 1 {
            let c = coeff(n);
            let mut with_t = self.clear_elsewhere(&[n, n + 1]);
            with_t.push(GatePlacement::transpose_theta(n, n + 1, theta));
            reduced.push(CircuitTerm::new(c, with_t.clone()))?;
            full.push(CircuitTerm::new(c, with_t))?;
            for p in [SiteOp::P0, SiteOp::P1] {
                let mut f = self.clear_elsewhere(&[n, n + 1]);
                f.push(GatePlacement::local(n, p));
                f.push(GatePlacement::local(n + 1, p));
                full.push(CircuitTerm::new(-c, f))?;
            }
        }
        Ok(GateDecomposition {
            full: self.op(full),
            reduced: self.op(reduced),
        })
    }

    /// `x̂_B` through `T_{n,n+1}(0)`, `p̂_B` through `T_{n,n+1}(π/2)`.
    pub fn gate_decomposition(&self, kind: Quadrature) -> Result<GateDecomposition> {
        let (theta, scale) = match kind {
            Quadrature::Position => (0.0, 0.5 / self.params.beta),
            Quadrature::Momentum => (FRAC_PI_2, 0.5 / self.params.alpha),
        };
        self.transpose_sum(theta, |n| real(scale * self.ladder_weight(n)))
    }

    /// `(a_B⁺)^n |2^0) / √(n!(2ε)^n)`, which lands on `|2^n)`.
    pub fn number_state(&self, n: usize) -> Result<RegisterState> {
        self.check_level(n)?;
        let mut state = RegisterState::basis(self.rank, 1)?;
        if n > 0 {
            let raise = self.ladder(Direction::Raise)?;
            let two_eps = 2.0 * self.params.epsilon();
            for k in 1..=n {
                // Normalise per step so large n does not overflow.
                state = raise.apply(&state)?.scale(real(1.0 / (k as f64 * two_eps).sqrt()));
            }
        }
        let target = 1u64 << n;
        let stray = state.keys().any(|k| k != target);
        let deviation = (state.amplitude(target) - real(1.0)).norm();
        if stray || deviation > 1e-10 {
            return Err(Error::LadderDrift { level: n, deviation });
        }
        Ok(state)
    }

    pub fn embed(&self, v: &BosonicSubspaceVector) -> Result<RegisterState> {
        if v.rank() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: v.rank(),
            });
        }
        RegisterState::from_amplitudes(self.rank, v.coeffs.iter().enumerate().map(|(n, &c)| (1u64 << n, c)))
    }

    /// Reads the amplitudes on `|2^n)`; transbosonic content is dropped.
    pub fn project(&self, state: &RegisterState) -> Result<BosonicSubspaceVector> {
        if state.rank() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: state.rank(),
            });
        }
        let coeffs = DVector::from_iterator(self.rank, (0..self.rank).map(|n| state.amplitude(1u64 << n)));
        Ok(BosonicSubspaceVector::new(coeffs))
    }

    /// `project ∘ op ∘ embed` as an `R×R` matrix.
    pub fn project_operator(&self, op: &RegisterOperator) -> Result<DMatrix<Complex64>> {
        let mut m = DMatrix::zeros(self.rank, self.rank);
        for col in 0..self.rank {
            let image = op.apply(&RegisterState::basis(self.rank, 1u64 << col)?)?;
            let p = self.project(&image)?;
            m.set_column(col, &p.coeffs);
        }
        Ok(m)
    }

    /// `‖I_B ψ - ψ‖ ≤ tol·‖ψ‖`.
    pub fn is_bosonic_state(&self, state: &RegisterState, tol: f64) -> Result<bool> {
        let norm = state.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let filtered = self.identity().apply(state)?;
        Ok(filtered.sub(state)?.norm() <= tol * norm)
    }

    /// Largest entry of `[O, I_B]` over the dense `2^R` basis.
    ///
    /// `I_B` is diagonal, so entry `(i, j)` of the commutator is
    /// `O_ij (d_j - d_i)`; this is evaluated column by column without
    /// materialising either matrix.
    pub fn bosonic_commutator_norm(&self, op: &RegisterOperator) -> Result<f64> {
        check_dense_rank(self.rank)?;
        if op.rank() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: op.rank(),
            });
        }
        let filter = self.identity();
        let dim = 1u64 << self.rank;
        let diag: Vec<Complex64> = (0..dim)
            .map(|k| Ok(filter.apply(&RegisterState::basis(self.rank, k)?)?.amplitude(k)))
            .collect::<Result<_>>()?;
        let mut worst = 0.0f64;
        for col in 0..dim {
            let image = op.apply(&RegisterState::basis(self.rank, col)?)?;
            for (row, v) in image.iter() {
                let entry = v * (diag[col as usize] - diag[row as usize]);
                worst = worst.max(entry.norm());
            }
        }
        Ok(worst)
    }

    pub fn is_bosonic_operator(&self, op: &RegisterOperator, tol: f64) -> Result<bool> {
        Ok(self.bosonic_commutator_norm(op)? <= tol)
    }
}
