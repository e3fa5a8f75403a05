//! Coherent states of the register oscillator and their time evolution.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bosonic::{BosonicRegister, Direction, GateDecomposition, PhysParams, RegisterOperator};
use crate::conventions::Conventions;
use crate::dense::expm_multiply;
use crate::error::{Error, Result};
use crate::gates::Circuit;
use crate::state::{format_sig17, RegisterState, Sig17, StateDocument};

/// Largest rank at which the gate-form generator is exponentiated densely.
pub const GATEFORM_EXP_RANK_LIMIT: usize = 10;

/// A coherent amplitude `z` on a rank-`R` register.
///
/// By default `|z|² ≤ R/4` is enforced before any state is built, which keeps
/// the Poisson weight beyond the top level negligible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentSpec {
    z: Complex64,
    params: PhysParams,
    rank: usize,
    guard: bool,
    conv: Conventions,
}

impl CoherentSpec {
    pub fn new(z: Complex64, params: PhysParams, rank: usize) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "z",
                value: z.norm(),
            });
        }
        // Validates the rank.
        BosonicRegister::new(params, rank)?;
        Ok(CoherentSpec {
            z,
            params,
            rank,
            guard: true,
            conv: Conventions::STANDARD,
        })
    }

    /// `z = i·r·e^{iθ}`.
    pub fn from_polar(r: f64, theta: f64, params: PhysParams, rank: usize) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter { name: "r", value: r });
        }
        Self::new(Complex64::i() * Complex64::from_polar(r, theta), params, rank)
    }

    pub fn with_guard(mut self, guard: bool) -> Self {
        self.guard = guard;
        self
    }

    pub fn with_conventions(mut self, conv: Conventions) -> Self {
        self.conv = conv;
        self
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn r(&self) -> f64 {
        self.z.norm()
    }

    /// Angle in `z = i·r·e^{iθ}`; zero when `r = 0`.
    pub fn theta(&self) -> f64 {
        if self.z.norm() == 0.0 {
            0.0
        } else {
            self.z.arg() - FRAC_PI_2
        }
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn register(&self) -> BosonicRegister {
        BosonicRegister::with_conventions(self.params, self.rank, self.conv).expect("rank checked at construction")
    }

    pub fn check_guard(&self) -> Result<()> {
        let limit = self.rank as f64 / 4.0;
        let norm_sqr = self.z.norm_sqr();
        if self.guard && norm_sqr > limit {
            return Err(Error::TruncationRisk { norm_sqr, limit });
        }
        Ok(())
    }
}

/// A truncated coherent state and the Poisson weight that did not fit.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentState {
    pub state: RegisterState,
    pub tail_mass: f64,
}

impl CoherentState {
    pub fn to_document(&self) -> StateDocument {
        let mut doc = self.state.to_document();
        doc.tail_mass = Some(Sig17(self.tail_mass));
        doc
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("finite amplitudes serialize")
    }
}

/// `e^{-|z|²/2} Σ_{n<R} zⁿ/√(n!) |2^n)`.
pub fn coherent_series(spec: &CoherentSpec) -> Result<CoherentState> {
    spec.check_guard()?;
    let z = spec.z;
    let mut coeff = Complex64::new((-0.5 * z.norm_sqr()).exp(), 0.0);
    let mut amps = Vec::with_capacity(spec.rank);
    for n in 0..spec.rank {
        amps.push((1u64 << n, coeff));
        coeff = coeff * z / ((n + 1) as f64).sqrt();
    }
    let state = RegisterState::from_amplitudes(spec.rank, amps)?;
    Ok(CoherentState {
        state,
        tail_mass: poisson_tail(z.norm_sqr(), spec.rank),
    })
}

/// `Σ_{n≥from} e^{-λ} λⁿ/n!`, summed term by term.
fn poisson_tail(lambda: f64, from: usize) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let mut term = (-lambda).exp();
    for n in 1..=from {
        term *= lambda / n as f64;
    }
    let mut sum = 0.0;
    let mut n = from;
    while term > 0.0 && term > sum * f64::EPSILON * 1e-3 {
        sum += term;
        n += 1;
        term *= lambda / n as f64;
    }
    sum
}

/// `|amplitude on |2^n)|²` for each level `n`.
pub fn number_distribution(state: &RegisterState) -> Vec<f64> {
    (0..state.rank())
        .map(|n| state.amplitude(1u64 << n).norm_sqr())
        .collect()
}

fn check_bosonic_support(state: &RegisterState) -> Result<()> {
    match state.keys().find(|k| !k.is_power_of_two()) {
        Some(k) => Err(Error::NotBosonic(k)),
        None => Ok(()),
    }
}

/// `(z a_B⁺ - z* a_B)/√(2ε)` on the one-hot subspace.
pub fn displacement_generator(spec: &CoherentSpec) -> Result<DMatrix<Complex64>> {
    let reg = spec.register();
    let raise = reg.ladder(Direction::Raise)?.scale(spec.z);
    let lower = reg.ladder(Direction::Lower)?.scale(-spec.z.conj());
    let g = raise
        .sum(&lower)?
        .scale(Complex64::new(1.0 / (2.0 * spec.params.epsilon()).sqrt(), 0.0));
    reg.project_operator(&g)
}

/// The displacement operator as an `R×R` matrix on the one-hot subspace.
pub fn displacement_matrix(spec: &CoherentSpec) -> Result<DMatrix<Complex64>> {
    Ok(displacement_generator(spec)?.exp())
}

pub fn displacement_apply(spec: &CoherentSpec, state: &RegisterState) -> Result<RegisterState> {
    spec.check_guard()?;
    if state.rank() != spec.rank {
        return Err(Error::RankMismatch {
            left: spec.rank,
            right: state.rank(),
        });
    }
    check_bosonic_support(state)?;
    let reg = spec.register();
    let v = reg.project(state)?;
    let moved = displacement_matrix(spec)? * v.coeffs;
    reg.embed(&crate::bosonic::BosonicSubspaceVector::new(moved))
}

/// The displacement generator as `i·r·Σ √(n+1) {⊗P⁰} T_{n,n+1}(θ)` gate sums.
pub fn displacement_generator_gateform(spec: &CoherentSpec) -> Result<GateDecomposition> {
    let reg = spec.register();
    if spec.r() == 0.0 {
        let zero = RegisterOperator::with_conventions(Circuit::zero(spec.rank)?, spec.conv);
        return Ok(GateDecomposition {
            full: zero.clone(),
            reduced: zero,
        });
    }
    let r = spec.r();
    reg.transpose_sum(spec.theta(), |n| Complex64::new(0.0, r * ((n + 1) as f64).sqrt()))
}

/// `exp(G)·state` with `G` the full gate-form generator, on the dense `2^R`
/// space.
pub fn gateform_displacement_apply(spec: &CoherentSpec, state: &RegisterState) -> Result<RegisterState> {
    if spec.rank > GATEFORM_EXP_RANK_LIMIT {
        return Err(Error::RankTooLarge {
            rank: spec.rank,
            limit: GATEFORM_EXP_RANK_LIMIT,
        });
    }
    let g = displacement_generator_gateform(spec)?.full.matrix()?;
    let out = expm_multiply(&g, &state.to_dense()?);
    RegisterState::from_dense(spec.rank, &out)
}

/// `(ψ|O ψ)/(ψ|ψ)`.
pub fn expectation(op: &RegisterOperator, state: &RegisterState) -> Result<Complex64> {
    let norm_sqr = state.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(state.inner_product(&op.apply(state)?)? / norm_sqr)
}

/// Evolution under the register Hamiltonian: level `n` picks up
/// `e^{-i(n+½)εt/ħ}`.
pub fn evolve(state: &RegisterState, t: f64, params: &PhysParams) -> Result<RegisterState> {
    check_bosonic_support(state)?;
    let rate = params.epsilon() * t / params.hbar();
    let amps = state.iter().map(|(k, a)| {
        let n = k.trailing_zeros() as f64;
        (k, a * Complex64::from_polar(1.0, -(n + 0.5) * rate))
    });
    RegisterState::from_amplitudes(state.rank(), amps)
}

/// Expectation values along a coherent-state orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub x_exp: Vec<f64>,
    pub p_exp: Vec<f64>,
    pub h_exp: Vec<f64>,
}

impl Trajectory {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,p,h\n");
        for i in 0..self.times.len() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                format_sig17(self.times[i]),
                format_sig17(self.x_exp[i]),
                format_sig17(self.p_exp[i]),
                format_sig17(self.h_exp[i])
            );
        }
        out
    }

    /// Largest relative spread of the energy column.
    pub fn energy_drift(&self) -> f64 {
        let Some(&first) = self.h_exp.first() else {
            return 0.0;
        };
        let scale = first.abs().max(f64::MIN_POSITIVE);
        self.h_exp.iter().map(|h| (h - first).abs() / scale).fold(0.0, f64::max)
    }
}

pub fn trajectory(spec: &CoherentSpec, times: &[f64]) -> Result<Trajectory> {
    let start = coherent_series(spec)?.state;
    let reg = spec.register();
    let x = reg.position()?;
    let p = reg.momentum()?;
    let h = reg.hamiltonian();
    let mut tr = Trajectory {
        times: times.to_vec(),
        x_exp: Vec::with_capacity(times.len()),
        p_exp: Vec::with_capacity(times.len()),
        h_exp: Vec::with_capacity(times.len()),
    };
    for &t in times {
        let s = evolve(&start, t, &spec.params)?;
        tr.x_exp.push(expectation(&x, &s)?.re);
        tr.p_exp.push(expectation(&p, &s)?.re);
        tr.h_exp.push(expectation(&h, &s)?.re);
    }
    Ok(tr)
}
