use std::f64::consts::PI;

use bosoreg::algebra::{op_matrix, op_product, ScaledSiteOp, SiteOp, Unit};
use bosoreg::bosonic::{BosonicRegister, BosonicSubspaceVector, Direction, PhysParams};
use bosoreg::coherent::{coherent_series, displacement_apply, evolve, number_distribution, CoherentSpec};
use bosoreg::dense::max_abs_diff;
use bosoreg::gates::{
    apply_circuit, apply_cnot, apply_cnot_transpose, apply_gate, apply_transpose, circuit_to_matrix, Circuit,
    CircuitTerm, GatePlacement,
};
use bosoreg::logic::{BasisIndex, BinaryGate, EventuallyPeriodicSequence, LogicFunction};
use bosoreg::state::RegisterState;
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;

fn site_op() -> impl Strategy<Value = SiteOp> {
    prop::sample::select(SiteOp::ALL.to_vec())
}

fn unit() -> impl Strategy<Value = Unit> {
    prop::sample::select(vec![Unit::Zero, Unit::One, Unit::I, Unit::MinusOne, Unit::MinusI])
}

fn scaled() -> impl Strategy<Value = ScaledSiteOp> {
    (unit(), site_op()).prop_map(|(u, op)| ScaledSiteOp::new(u, op))
}

fn amplitude() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

/// A rank and a state with arbitrary support on it.
fn state(max_rank: usize) -> impl Strategy<Value = RegisterState> {
    (1..=max_rank).prop_flat_map(|rank| {
        prop::collection::vec((0..1u64 << rank, amplitude()), 0..12)
            .prop_map(move |amps| RegisterState::from_amplitudes(rank, amps).unwrap())
    })
}

fn two_sites(rank: usize) -> impl Strategy<Value = (usize, usize)> {
    (0..rank, 0..rank).prop_filter("distinct sites", |(a, b)| a != b)
}

fn state_and_pair(max_rank: usize) -> impl Strategy<Value = (RegisterState, usize, usize)> {
    state(max_rank)
        .prop_filter("two sites", |s| s.rank() >= 2)
        .prop_flat_map(|s| {
            let r = s.rank();
            (Just(s), two_sites(r))
        })
        .prop_map(|(s, (a, b))| (s, a, b))
}

fn gate(rank: usize) -> impl Strategy<Value = GatePlacement> {
    prop_oneof![
        (0..rank, site_op()).prop_map(|(s, op)| GatePlacement::local(s, op)),
        two_sites(rank).prop_map(|(a, b)| GatePlacement::cnot(a, b)),
        (two_sites(rank), -PI..PI).prop_map(|((a, b), t)| GatePlacement::transpose_theta(a, b, t)),
    ]
}

fn circuit(rank: usize) -> impl Strategy<Value = Circuit> {
    prop::collection::vec((amplitude(), prop::collection::vec(gate(rank), 0..4)), 0..5).prop_map(move |terms| {
        Circuit::from_terms(rank, terms.into_iter().map(|(c, f)| CircuitTerm::new(c, f)).collect()).unwrap()
    })
}

fn bits(max: usize) -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 1..=max)
}

fn bosonic_state(rank: usize, levels: usize) -> impl Strategy<Value = RegisterState> {
    prop::collection::vec(amplitude(), levels).prop_filter_map("nonzero", move |amps| {
        let s = RegisterState::from_amplitudes(rank, amps.into_iter().enumerate().map(|(n, a)| (1u64 << n, a))).ok()?;
        s.normalize().ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn negation_identities(b in bits(40)) {
        let f = LogicFunction::new(b);
        let r = f.rank();
        prop_assert_eq!(f.combine(BinaryGate::Xor, &f.negation()).unwrap(), LogicFunction::yes(r));
        prop_assert_eq!(f.combine(BinaryGate::Or, &f.negation()).unwrap(), LogicFunction::yes(r));
        prop_assert_eq!(f.combine(BinaryGate::And, &f.negation()).unwrap(), LogicFunction::no(r));
        prop_assert_eq!(f.count_yes() + f.count_no(), r);
        prop_assert_eq!(f.sigma3_sum(), f.count_yes() as i64 - f.count_no() as i64);
    }

    #[test]
    fn logic_strings_round_trip(b in bits(40)) {
        let f = LogicFunction::new(b);
        prop_assert_eq!(f.to_string().parse::<LogicFunction>().unwrap(), f);
    }

    #[test]
    fn computational_index_round_trips(b in bits(64)) {
        let idx = BasisIndex::from_bits(&b).unwrap();
        prop_assert_eq!(idx.bits(b.len()), b.clone());
        let expected: u128 = b.iter().enumerate().filter(|(_, &x)| x).map(|(n, _)| 1u128 << n).sum();
        prop_assert_eq!(u128::from(idx.0), expected);
    }

    #[test]
    fn continuum_map_of_finite_prefix(b in bits(40)) {
        let value = EventuallyPeriodicSequence::finite(b.clone()).continuum_value();
        let direct: f64 = b.iter().enumerate().filter(|(_, &x)| x).map(|(n, _)| 0.5f64.powi(n as i32)).sum();
        prop_assert!((value - direct).abs() <= 1e-15);
    }

    #[test]
    fn continuum_map_of_recurring_tail(prefix in bits(8), period in bits(6)) {
        let seq = EventuallyPeriodicSequence::new(prefix.clone(), period.clone());
        // Unroll enough periods that the rest is below double precision.
        let mut unrolled = prefix.clone();
        while unrolled.len() < 70 {
            unrolled.extend(&period);
        }
        let direct: f64 = unrolled.iter().enumerate().filter(|(_, &x)| x).map(|(n, _)| 0.5f64.powi(n as i32)).sum();
        prop_assert!((seq.continuum_value() - direct).abs() <= 1e-14);
    }

    #[test]
    fn scaled_products_agree_with_matrices(a in scaled(), b in scaled(), c in scaled()) {
        let ab = op_product(a, b);
        prop_assert_eq!(op_matrix(ab), op_matrix(a) * op_matrix(b));
        prop_assert_eq!(op_product(ab, c), op_product(a, op_product(b, c)));
        prop_assert_eq!(op_product(a, b).adjoint(), op_product(b.adjoint(), a.adjoint()));
    }

    #[test]
    fn cnot_is_an_involution((s, a, b) in state_and_pair(8)) {
        prop_assert_eq!(apply_cnot(&apply_cnot(&s, a, b).unwrap(), a, b).unwrap(), s.clone());
        prop_assert_eq!(apply_cnot_transpose(&apply_cnot_transpose(&s, a, b).unwrap(), a, b).unwrap(), s);
    }

    #[test]
    fn transpose_from_three_cnots((s, a, b) in state_and_pair(8)) {
        let c = apply_cnot(&s, a, b).unwrap();
        let ct = apply_cnot_transpose(&c, a, b).unwrap();
        prop_assert_eq!(apply_cnot(&ct, a, b).unwrap(), apply_transpose(&s, a, b).unwrap());
    }

    #[test]
    fn transpose_theta_preserves_norm((s, a, b) in state_and_pair(8), theta in -10.0..10.0f64) {
        let out = apply_gate(&s, &GatePlacement::transpose_theta(a, b, theta)).unwrap();
        prop_assert!((out.norm() - s.norm()).abs() <= 1e-12);
    }

    #[test]
    fn sparse_and_dense_agree(s in state(6).prop_filter("two sites", |s| s.rank() >= 2)
        .prop_flat_map(|s| { let r = s.rank(); (Just(s), circuit(r)) }))
    {
        let (s, c) = s;
        let sparse = apply_circuit(&s, &c).unwrap().to_dense().unwrap();
        let dense = circuit_to_matrix(&c).unwrap() * s.to_dense().unwrap();
        let dev = (sparse - dense).iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(dev <= 1e-12);
    }

    #[test]
    fn circuit_linearity(input in state(5).prop_filter("two sites", |s| s.rank() >= 2)
        .prop_flat_map(|s| { let r = s.rank(); (Just(s), circuit(r), amplitude()) }))
    {
        let (s, c, k) = input;
        let lhs = apply_circuit(&s.scale(k), &c).unwrap();
        let rhs = apply_circuit(&s, &c).unwrap().scale(k);
        prop_assert!(lhs.max_deviation(&rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn state_json_round_trip(s in state(12)) {
        prop_assert_eq!(RegisterState::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn circuit_json_round_trip(c in circuit(5)) {
        prop_assert_eq!(Circuit::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn bosonic_operators_keep_states_bosonic(psi in bosonic_state(8, 8)) {
        let reg = BosonicRegister::new(PhysParams::new(0.8, 1.4, 0.9).unwrap(), 8).unwrap();
        let ops = [
            reg.ladder(Direction::Lower).unwrap(),
            reg.ladder(Direction::Raise).unwrap(),
            reg.hamiltonian(),
            reg.position().unwrap(),
            reg.momentum().unwrap(),
        ];
        for op in &ops {
            let out = op.apply(&psi).unwrap();
            prop_assert!(out.is_zero() || reg.is_bosonic_state(&out, 1e-12).unwrap());
        }
    }

    #[test]
    fn project_embed_round_trip(v in prop::collection::vec(amplitude(), 6)) {
        let reg = BosonicRegister::new(PhysParams::default(), 6).unwrap();
        let v = BosonicSubspaceVector::new(DVector::from_vec(v));
        prop_assert_eq!(reg.project(&reg.embed(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn evolution_is_a_norm_preserving_group(psi in bosonic_state(10, 10), t1 in -5.0..5.0f64, t2 in -5.0..5.0f64) {
        let p = PhysParams::new(1.1, 0.6, 1.3).unwrap();
        let once = evolve(&psi, t1 + t2, &p).unwrap();
        let twice = evolve(&evolve(&psi, t1, &p).unwrap(), t2, &p).unwrap();
        prop_assert!(once.max_deviation(&twice).unwrap() <= 1e-12);
        prop_assert!((once.norm() - psi.norm()).abs() <= 1e-14);
    }

    #[test]
    fn displacement_is_unitary_and_matches_series(re in -1.0..1.0f64, im in -1.0..1.0f64) {
        let spec = CoherentSpec::new(Complex64::new(re, im), PhysParams::default(), 24).unwrap();
        let ground = RegisterState::basis(24, 1).unwrap();
        let moved = displacement_apply(&spec, &ground).unwrap();
        prop_assert!((moved.norm() - 1.0).abs() <= 1e-10);
        let series = coherent_series(&spec).unwrap();
        prop_assert!(moved.sub(&series.state).unwrap().norm() <= 1e-8);
    }

    #[test]
    fn poisson_statistics(re in -1.2..1.2f64, im in -1.2..1.2f64) {
        let z = Complex64::new(re, im);
        let spec = CoherentSpec::new(z, PhysParams::default(), 32).unwrap();
        let dist = number_distribution(&coherent_series(&spec).unwrap().state);
        let lambda = z.norm_sqr();
        let mut p = (-lambda).exp();
        for (n, &q) in dist.iter().enumerate() {
            prop_assert!((q - p).abs() <= 1e-12, "level {}", n);
            p *= lambda / (n + 1) as f64;
        }
    }

    #[test]
    fn phase_rule_for_sigma1(alpha in -PI..PI, beta in -PI..PI) {
        let u = bosoreg::algebra::PhaseTransform::new(alpha, beta);
        let phi = alpha - beta;
        let lhs = bosoreg::algebra::phase_conjugate(SiteOp::Sigma1, u);
        let rhs = SiteOp::Sigma1.matrix() * Complex64::new(phi.cos(), 0.0)
            + SiteOp::Sigma2.matrix() * Complex64::new(phi.sin(), 0.0);
        prop_assert!((lhs - rhs).iter().all(|z| z.norm() <= 1e-12));
    }

    #[test]
    fn conjugated_cnot_ignores_donor_phases(a in -PI..PI, b in -PI..PI, g in -PI..PI, d in -PI..PI) {
        let m = bosoreg::gates::conjugated_cnot_matrix(a, b, g, d);
        prop_assert!(max_abs_diff(&m, &bosoreg::gates::conjugated_cnot_matrix(0.0, 0.0, g, d)) <= 1e-12);
    }
}
