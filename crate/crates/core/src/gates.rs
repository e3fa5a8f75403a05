//! Register gates and weighted gate sums.
//!
//! Every gate here is monomial in the computational basis (each basis key
//! goes to at most one key, with a phase), so gates are applied as key
//! rewrites. Dense matrices come from [`circuit_to_matrix`] and are only used
//! for cross-checks.

use std::collections::BTreeMap;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{PhaseTransform, SiteOp};
use crate::conventions::Conventions;
use crate::dense::{check_dense_rank, site_product, DenseMatrix};
use crate::error::{Error, Result};
use crate::state::{check_rank, RegisterState, Sig17};

/// One factor of a circuit term.
///
/// The transpose CNOT `C_ab^T` is `Cnot { a: b, b: a }` and the plain
/// transpose gate `T_ab` is `Transpose { theta: 0.0 }`; see
/// [`GatePlacement::cnot_transpose`] and [`GatePlacement::transpose`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GatePlacement {
    Local {
        site: usize,
        op: SiteOp,
    },
    /// Flip `b` when `a` is set.
    Cnot {
        a: usize,
        b: usize,
    },
    /// `P⁰P⁰ + P¹P¹ + e^{iθ} A_a A_b⁺ + e^{-iθ} A_a⁺ A_b`.
    Transpose {
        a: usize,
        b: usize,
        theta: f64,
    },
}

impl GatePlacement {
    pub fn local(site: usize, op: SiteOp) -> Self {
        GatePlacement::Local { site, op }
    }

    pub fn cnot(a: usize, b: usize) -> Self {
        GatePlacement::Cnot { a, b }
    }

    pub fn cnot_transpose(a: usize, b: usize) -> Self {
        GatePlacement::Cnot { a: b, b: a }
    }

    pub fn transpose(a: usize, b: usize) -> Self {
        GatePlacement::Transpose { a, b, theta: 0.0 }
    }

    pub fn transpose_theta(a: usize, b: usize, theta: f64) -> Self {
        GatePlacement::Transpose { a, b, theta }
    }

    pub fn validate(&self, rank: usize) -> Result<()> {
        let check = |site: usize| {
            if site >= rank {
                Err(Error::SiteOutOfRange { site, rank })
            } else {
                Ok(())
            }
        };
        match *self {
            GatePlacement::Local { site, .. } => check(site),
            GatePlacement::Cnot { a, b } | GatePlacement::Transpose { a, b, .. } => {
                check(a)?;
                check(b)?;
                if a == b {
                    return Err(Error::SameSite(a));
                }
                Ok(())
            }
        }
    }

    /// Image of one basis key, or `None` if the gate annihilates it.
    pub(crate) fn act(&self, key: u64, conv: &Conventions) -> Option<(u64, Complex64)> {
        match *self {
            GatePlacement::Local { site, op } => {
                let bit = (key >> site) & 1 == 1;
                let (out, c) = op.act(bit)?;
                let key = if out == bit { key } else { key ^ (1 << site) };
                Some((key, c.to_complex()))
            }
            GatePlacement::Cnot { a, b } => {
                let key = if (key >> a) & 1 == 1 { key ^ (1 << b) } else { key };
                Some((key, Complex64::new(1.0, 0.0)))
            }
            GatePlacement::Transpose { a, b, theta } => {
                let bit_a = (key >> a) & 1 == 1;
                let bit_b = (key >> b) & 1 == 1;
                if bit_a == bit_b {
                    return Some((key, Complex64::new(1.0, 0.0)));
                }
                let swapped = key ^ (1 << a) ^ (1 << b);
                // A_a A_b⁺ takes (a=1, b=0) to (a=0, b=1).
                let phase = if bit_a { theta } else { -theta } * conv.theta_sign();
                Some((swapped, Complex64::from_polar(1.0, phase)))
            }
        }
    }
}

fn check_pair(state: &RegisterState, a: usize, b: usize) -> Result<()> {
    GatePlacement::cnot(a, b).validate(state.rank())
}

fn rewrite<F>(state: &RegisterState, mut f: F) -> RegisterState
where
    F: FnMut(u64) -> Option<(u64, Complex64)>,
{
    let mut out: BTreeMap<u64, Complex64> = BTreeMap::new();
    for (k, amp) in state.iter() {
        if let Some((k2, c)) = f(k) {
            *out.entry(k2).or_default() += amp * c;
        }
    }
    RegisterState::from_map_unchecked(state.rank(), out)
}

pub fn apply_gate(state: &RegisterState, gate: &GatePlacement) -> Result<RegisterState> {
    apply_gate_with(state, gate, &Conventions::STANDARD)
}

pub fn apply_gate_with(state: &RegisterState, gate: &GatePlacement, conv: &Conventions) -> Result<RegisterState> {
    gate.validate(state.rank())?;
    Ok(rewrite(state, |k| gate.act(k, conv)))
}

pub fn apply_local(state: &RegisterState, site: usize, op: SiteOp) -> Result<RegisterState> {
    apply_gate(state, &GatePlacement::local(site, op))
}

pub fn apply_cnot(state: &RegisterState, a: usize, b: usize) -> Result<RegisterState> {
    apply_gate(state, &GatePlacement::cnot(a, b))
}

pub fn apply_cnot_transpose(state: &RegisterState, a: usize, b: usize) -> Result<RegisterState> {
    apply_gate(state, &GatePlacement::cnot_transpose(a, b))
}

/// Swaps the bits at sites `a` and `b` in every key.
pub fn apply_transpose(state: &RegisterState, a: usize, b: usize) -> Result<RegisterState> {
    check_pair(state, a, b)?;
    Ok(rewrite(state, |k| {
        let differ = ((k >> a) ^ (k >> b)) & 1 == 1;
        let k2 = if differ { k ^ (1 << a) ^ (1 << b) } else { k };
        Some((k2, Complex64::new(1.0, 0.0)))
    }))
}

pub fn apply_transpose_theta(state: &RegisterState, a: usize, b: usize, theta: f64) -> Result<RegisterState> {
    apply_gate(state, &GatePlacement::transpose_theta(a, b, theta))
}

/// One weighted product of gates. The rightmost factor acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitTerm {
    pub coeff: Complex64,
    pub factors: Vec<GatePlacement>,
}

impl CircuitTerm {
    pub fn new(coeff: Complex64, factors: Vec<GatePlacement>) -> Self {
        CircuitTerm { coeff, factors }
    }

    pub(crate) fn act(&self, key: u64, conv: &Conventions) -> Option<(u64, Complex64)> {
        let mut k = key;
        let mut c = self.coeff;
        for g in self.factors.iter().rev() {
            let (k2, phase) = g.act(k, conv)?;
            k = k2;
            c *= phase;
        }
        Some((k, c))
    }
}

/// A weighted sum of gate products on a rank-`R` register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitJson", into = "CircuitJson")]
pub struct Circuit {
    rank: usize,
    terms: Vec<CircuitTerm>,
}

impl Circuit {
    /// The empty sum (zero operator).
    pub fn zero(rank: usize) -> Result<Self> {
        check_rank(rank)?;
        Ok(Circuit {
            rank,
            terms: Vec::new(),
        })
    }

    pub fn identity(rank: usize) -> Result<Self> {
        let mut c = Self::zero(rank)?;
        c.terms.push(CircuitTerm::new(Complex64::new(1.0, 0.0), Vec::new()));
        Ok(c)
    }

    pub fn from_terms(rank: usize, terms: Vec<CircuitTerm>) -> Result<Self> {
        let mut c = Self::zero(rank)?;
        for t in terms {
            c.push(t)?;
        }
        Ok(c)
    }

    pub fn single(rank: usize, coeff: Complex64, factors: Vec<GatePlacement>) -> Result<Self> {
        Self::from_terms(rank, vec![CircuitTerm::new(coeff, factors)])
    }

    pub fn push(&mut self, term: CircuitTerm) -> Result<()> {
        for g in &term.factors {
            g.validate(self.rank)?;
        }
        self.terms.push(term);
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &[CircuitTerm] {
        &self.terms
    }

    fn same_rank(&self, other: &Circuit) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Circuit) -> Result<Circuit> {
        self.same_rank(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Circuit { rank: self.rank, terms })
    }

    pub fn scale(&self, c: Complex64) -> Circuit {
        let terms = self
            .terms
            .iter()
            .map(|t| CircuitTerm::new(t.coeff * c, t.factors.clone()))
            .collect();
        Circuit { rank: self.rank, terms }
    }

    /// Operator product `self · other` (`other` acts first).
    pub fn compose(&self, other: &Circuit) -> Result<Circuit> {
        self.same_rank(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for l in &self.terms {
            for r in &other.terms {
                let mut factors = l.factors.clone();
                factors.extend(r.factors.iter().copied());
                terms.push(CircuitTerm::new(l.coeff * r.coeff, factors));
            }
        }
        Ok(Circuit { rank: self.rank, terms })
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Circuit) -> Result<Circuit> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        ab.sum(&ba.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("finite coefficients serialize")
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn apply_circuit(state: &RegisterState, circuit: &Circuit) -> Result<RegisterState> {
    apply_circuit_with(state, circuit, &Conventions::STANDARD)
}

pub fn apply_circuit_with(state: &RegisterState, circuit: &Circuit, conv: &Conventions) -> Result<RegisterState> {
    if state.rank() != circuit.rank {
        return Err(Error::RankMismatch {
            left: state.rank(),
            right: circuit.rank,
        });
    }
    let mut out: BTreeMap<u64, Complex64> = BTreeMap::new();
    for term in &circuit.terms {
        for (k, amp) in state.iter() {
            if let Some((k2, c)) = term.act(k, conv) {
                *out.entry(k2).or_default() += amp * c;
            }
        }
    }
    Ok(RegisterState::from_map_unchecked(state.rank(), out))
}

pub fn circuit_to_matrix(circuit: &Circuit) -> Result<DenseMatrix> {
    circuit_to_matrix_with(circuit, &Conventions::STANDARD)
}

pub fn circuit_to_matrix_with(circuit: &Circuit, conv: &Conventions) -> Result<DenseMatrix> {
    check_dense_rank(circuit.rank)?;
    let dim = 1usize << circuit.rank;
    let mut m = DenseMatrix::zeros(dim, dim);
    for col in 0..dim {
        for term in &circuit.terms {
            if let Some((row, c)) = term.act(col as u64, conv) {
                m[(row as usize, col)] += c;
            }
        }
    }
    Ok(m)
}

/// `U_ab C_ab U_ab⁺` on a rank-2 register with donor `a = 0`, acceptor
/// `b = 1`, `U_ab = U_a(α, β) ⊗ U_b(γ, δ)`.
pub fn conjugated_cnot_matrix(alpha: f64, beta: f64, gamma: f64, delta: f64) -> DenseMatrix {
    let ua = PhaseTransform::new(alpha, beta).matrix();
    let ub = PhaseTransform::new(gamma, delta).matrix();
    let u = site_product(2, &[(0, ua), (1, ub)]).expect("rank 2");
    let c = circuit_to_matrix(
        &Circuit::single(2, Complex64::new(1.0, 0.0), vec![GatePlacement::cnot(0, 1)]).expect("rank 2"),
    )
    .expect("rank 2");
    &u * c * u.adjoint()
}

/// `P_a⁰ ⊗ σ_b⁰ + P_a¹ ⊗ {cos φ σ_b¹ + sin φ σ_b²}` with `a = 0`, `b = 1`.
pub fn rotated_cnot_matrix(phi: f64) -> DenseMatrix {
    let c = |x: f64| Complex64::new(x, 0.0);
    let rotated: Matrix2<Complex64> = SiteOp::Sigma1.matrix() * c(phi.cos()) + SiteOp::Sigma2.matrix() * c(phi.sin());
    let keep = site_product(2, &[(0, SiteOp::P0.matrix())]).expect("rank 2");
    let flip = site_product(2, &[(0, SiteOp::P1.matrix()), (1, rotated)]).expect("rank 2");
    keep + flip
}

// --- JSON form -----------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    re: Sig17,
    im: Sig17,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type")]
enum FactorJson {
    #[serde(rename = "local")]
    Local { site: usize, op: String },
    #[serde(rename = "cnot")]
    Cnot { a: usize, b: usize },
    #[serde(rename = "T")]
    T { a: usize, b: usize, theta: Sig17 },
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: CoeffJson,
    factors: Vec<FactorJson>,
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    rank: usize,
    terms: Vec<TermJson>,
}

impl From<Circuit> for CircuitJson {
    fn from(c: Circuit) -> Self {
        let terms = c
            .terms
            .into_iter()
            .map(|t| TermJson {
                coeff: CoeffJson {
                    re: Sig17(t.coeff.re),
                    im: Sig17(t.coeff.im),
                },
                factors: t
                    .factors
                    .into_iter()
                    .map(|g| match g {
                        // The zero operator never appears in built circuits.
                        GatePlacement::Local { site, op } => FactorJson::Local {
                            site,
                            op: op.mnemonic().unwrap_or("0").to_string(),
                        },
                        GatePlacement::Cnot { a, b } => FactorJson::Cnot { a, b },
                        GatePlacement::Transpose { a, b, theta } => FactorJson::T {
                            a,
                            b,
                            theta: Sig17(theta),
                        },
                    })
                    .collect(),
            })
            .collect();
        CircuitJson { rank: c.rank, terms }
    }
}

impl TryFrom<CircuitJson> for Circuit {
    type Error = Error;

    fn try_from(j: CircuitJson) -> Result<Self> {
        let mut c = Circuit::zero(j.rank)?;
        for t in j.terms {
            let factors = t
                .factors
                .into_iter()
                .map(|f| match f {
                    FactorJson::Local { site, op } => SiteOp::from_mnemonic(&op)
                        .or((op == "0").then_some(SiteOp::Zero))
                        .map(|op| GatePlacement::Local { site, op })
                        .ok_or_else(|| Error::Parse(format!("unknown op mnemonic {op:?}"))),
                    FactorJson::Cnot { a, b } => Ok(GatePlacement::Cnot { a, b }),
                    FactorJson::T { a, b, theta } => Ok(GatePlacement::Transpose { a, b, theta: theta.0 }),
                })
                .collect::<Result<Vec<_>>>()?;
            c.push(CircuitTerm::new(Complex64::new(t.coeff.re.0, t.coeff.im.0), factors))?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::dense::max_abs_diff;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis(rank: usize, k: u64) -> RegisterState {
        RegisterState::basis(rank, k).unwrap()
    }

    fn sample(rank: usize) -> RegisterState {
        RegisterState::from_amplitudes(
            rank,
            (0..1u64 << rank).map(|k| (k, c(0.1 + k as f64 * 0.03, 0.5 - k as f64 * 0.07))),
        )
        .unwrap()
    }

    fn one(rank: usize, g: GatePlacement) -> Circuit {
        Circuit::single(rank, c(1.0, 0.0), vec![g]).unwrap()
    }

    #[test]
    fn cnot_examples() {
        // Site 0 set, site 1 clear.
        assert_eq!(apply_cnot(&basis(2, 1), 0, 1).unwrap(), basis(2, 3));
        assert_eq!(apply_cnot(&basis(2, 2), 0, 1).unwrap(), basis(2, 2));
        let s = sample(3);
        assert_eq!(apply_cnot(&apply_cnot(&s, 2, 0).unwrap(), 2, 0).unwrap(), s);
        assert_eq!(apply_cnot(&s, 1, 1), Err(Error::SameSite(1)));
        assert!(matches!(apply_cnot(&s, 0, 3), Err(Error::SiteOutOfRange { .. })));
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(apply_transpose(&basis(2, 1), 0, 1).unwrap(), basis(2, 2));
        assert_eq!(apply_transpose(&basis(2, 3), 0, 1).unwrap(), basis(2, 3));
        let s = sample(4);
        let via_cnots = apply_cnot(
            &apply_cnot_transpose(&apply_cnot(&s, 1, 3).unwrap(), 1, 3).unwrap(),
            1,
            3,
        )
        .unwrap();
        assert_eq!(apply_transpose(&s, 1, 3).unwrap(), via_cnots);
    }

    #[test]
    fn transpose_theta_examples() {
        let s = sample(3);
        assert_eq!(
            apply_transpose_theta(&s, 0, 2, 0.0).unwrap(),
            apply_transpose(&s, 0, 2).unwrap()
        );
        // (a=1, b=0) picks up e^{iθ}; (a=0, b=1) picks up e^{-iθ}.
        let out = apply_transpose_theta(&basis(2, 1), 0, 1, FRAC_PI_2).unwrap();
        assert!(out.max_deviation(&basis(2, 2).scale(c(0.0, 1.0))).unwrap() < 1e-15);
        let back = apply_transpose_theta(&basis(2, 2), 0, 1, FRAC_PI_2).unwrap();
        assert!(back.max_deviation(&basis(2, 1).scale(c(0.0, -1.0))).unwrap() < 1e-15);
        assert_eq!(apply_transpose_theta(&basis(2, 0), 0, 1, 1.234).unwrap(), basis(2, 0));
    }

    #[test]
    fn flipped_theta_convention_conjugates_phase() {
        let conv = Conventions::mutated(crate::conventions::Mutation::FlipThetaSign);
        let out = apply_gate_with(&basis(2, 1), &GatePlacement::transpose_theta(0, 1, FRAC_PI_2), &conv).unwrap();
        assert!(out.max_deviation(&basis(2, 2).scale(c(0.0, -1.0))).unwrap() < 1e-15);
    }

    #[test]
    fn conjugated_cnot() {
        let plain = circuit_to_matrix(&one(2, GatePlacement::cnot(0, 1))).unwrap();
        assert!(max_abs_diff(&conjugated_cnot_matrix(0.3, -1.2, 0.7, 0.7), &plain) < 1e-12);
        let quarter = conjugated_cnot_matrix(0.0, 0.0, FRAC_PI_2, 0.0);
        let expected = site_product(2, &[(0, SiteOp::P0.matrix())]).unwrap()
            + site_product(2, &[(0, SiteOp::P1.matrix()), (1, SiteOp::Sigma2.matrix())]).unwrap();
        assert!(max_abs_diff(&quarter, &expected) < 1e-12);
        let a = conjugated_cnot_matrix(0.0, 0.0, 0.4, 1.5);
        let b = conjugated_cnot_matrix(2.1, -0.6, 0.4, 1.5);
        assert!(max_abs_diff(&a, &b) < 1e-12);
        assert!(max_abs_diff(&a, &rotated_cnot_matrix(0.4 - 1.5)) < 1e-12);
    }

    #[test]
    fn circuit_examples() {
        let s = sample(3);
        assert_eq!(
            apply_circuit(&s, &one(3, GatePlacement::cnot(0, 2))).unwrap(),
            apply_cnot(&s, 0, 2).unwrap()
        );
        assert!(apply_circuit(&s, &Circuit::zero(3).unwrap()).unwrap().is_zero());
        let halves = Circuit::from_terms(
            3,
            vec![
                CircuitTerm::new(c(0.5, 0.0), vec![GatePlacement::transpose(0, 1)]),
                CircuitTerm::new(c(0.5, 0.0), vec![GatePlacement::transpose(0, 1)]),
            ],
        )
        .unwrap();
        assert!(
            apply_circuit(&s, &halves)
                .unwrap()
                .max_deviation(&apply_transpose(&s, 0, 1).unwrap())
                .unwrap()
                < 1e-15
        );
        assert!(matches!(
            apply_circuit(&sample(2), &halves),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn rightmost_factor_acts_first() {
        // A_0 then A_0⁺ returns |1) to itself; the other order kills it.
        let lower_then_raise = Circuit::single(
            1,
            c(1.0, 0.0),
            vec![
                GatePlacement::local(0, SiteOp::Aplus),
                GatePlacement::local(0, SiteOp::A),
            ],
        )
        .unwrap();
        assert_eq!(apply_circuit(&basis(1, 1), &lower_then_raise).unwrap(), basis(1, 1));
        assert!(apply_circuit(&basis(1, 0), &lower_then_raise).unwrap().is_zero());
    }

    #[test]
    fn matrix_examples() {
        let id = circuit_to_matrix(&Circuit::identity(3).unwrap()).unwrap();
        assert_eq!(id, DenseMatrix::identity(8, 8));
        let cnot = circuit_to_matrix(&one(2, GatePlacement::cnot(0, 1))).unwrap();
        let mut perm = DenseMatrix::zeros(4, 4);
        for (col, row) in [(0, 0), (1, 3), (2, 2), (3, 1)] {
            perm[(row, col)] = c(1.0, 0.0);
        }
        assert_eq!(cnot, perm);
        let t = circuit_to_matrix(&one(2, GatePlacement::transpose_theta(0, 1, FRAC_PI_2))).unwrap();
        assert!((t[(2, 1)] - c(0.0, 1.0)).norm() < 1e-15);
        assert!((t[(1, 2)] - c(0.0, -1.0)).norm() < 1e-15);
        assert!(matches!(
            circuit_to_matrix(&Circuit::identity(13).unwrap()),
            Err(Error::RankTooLarge { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let circ = Circuit::from_terms(
            4,
            vec![
                CircuitTerm::new(
                    c(0.1, -2.5),
                    vec![GatePlacement::local(3, SiteOp::Aplus), GatePlacement::cnot(0, 1)],
                ),
                CircuitTerm::new(c(1.0 / 3.0, 0.0), vec![GatePlacement::transpose_theta(2, 1, FRAC_PI_2)]),
            ],
        )
        .unwrap();
        let text = circ.to_json();
        assert!(text.contains("\"type\": \"T\""));
        assert!(text.contains("\"op\": \"A+\""));
        assert_eq!(Circuit::from_json(&text).unwrap(), circ);
        assert!(Circuit::from_json(
            r#"{"rank":2,"terms":[{"coeff":{"re":1,"im":0},"factors":[{"type":"cnot","a":0,"b":0}]}]}"#
        )
        .is_err());
    }
}
