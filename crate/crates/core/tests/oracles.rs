use bosoreg::bosonic::{BosonicRegister, Direction, PhysParams, Quadrature};
use bosoreg::coherent::{
    coherent_series, displacement_apply, displacement_generator_gateform, expectation, gateform_displacement_apply,
    trajectory, CoherentSpec,
};
use bosoreg::dense::max_abs_diff;
use bosoreg::fock::{build_fock, intertwine_check};
use bosoreg::state::RegisterState;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn odd_params() -> PhysParams {
    PhysParams::new(0.7, 1.6, 0.85).unwrap()
}

#[test]
fn rank_two_fock_values() {
    let f = build_fock(PhysParams::default(), 2).unwrap();
    let reg = BosonicRegister::new(PhysParams::default(), 2).unwrap();
    let a = reg.ladder(Direction::Lower).unwrap();
    let out = a.apply(&RegisterState::basis(2, 2).unwrap()).unwrap();
    assert!((out.amplitude(1) - c(2f64.sqrt(), 0.0)).norm() < 1e-15);
    assert_eq!(out.nnz(), 1);
    assert!(intertwine_check(&a, &f.a, 1e-15).unwrap().pass);
}

#[test]
fn every_operator_intertwines_with_fock_at_odd_parameters() {
    let params = odd_params();
    for rank in [2, 5, 9] {
        let f = build_fock(params, rank).unwrap();
        let reg = BosonicRegister::new(params, rank).unwrap();
        let pairs = [
            (reg.ladder(Direction::Lower).unwrap(), &f.a),
            (reg.ladder(Direction::Raise).unwrap(), &f.a_plus),
            (reg.position().unwrap(), &f.x),
            (reg.momentum().unwrap(), &f.p),
            (reg.hamiltonian(), &f.h),
            (reg.hamiltonian_ladder_form().unwrap(), &f.h),
        ];
        for (op, m) in &pairs {
            let rep = intertwine_check(op, m, 1e-12).unwrap();
            assert!(rep.pass, "rank {rank}: deviation {}", rep.max_deviation);
        }
    }
}

#[test]
fn truncated_commutator_boundary() {
    let params = odd_params();
    let eps = params.epsilon();
    let rank = 7;
    let reg = BosonicRegister::new(params, rank).unwrap();
    let comm = reg
        .ladder(Direction::Lower)
        .unwrap()
        .commutator(&reg.ladder(Direction::Raise).unwrap())
        .unwrap();
    let projected = reg.project_operator(&comm).unwrap();
    for n in 0..rank {
        let expected = if n + 1 < rank {
            2.0 * eps
        } else {
            -2.0 * eps * (rank - 1) as f64
        };
        assert!((projected[(n, n)] - c(expected, 0.0)).norm() < 1e-12, "level {n}");
    }
    let f = build_fock(params, rank).unwrap();
    let fock_comm = &f.a * &f.a_plus - &f.a_plus * &f.a;
    assert!(max_abs_diff(&projected, &fock_comm) < 1e-12);
}

#[test]
fn number_states_match_fock_powers() {
    let params = odd_params();
    let rank = 10;
    let reg = BosonicRegister::new(params, rank).unwrap();
    let f = build_fock(params, rank).unwrap();
    let mut v = nalgebra::DVector::from_element(rank, c(0.0, 0.0));
    v[0] = c(1.0, 0.0);
    for n in 0..rank {
        let state = reg.number_state(n).unwrap();
        assert_eq!(state.keys().collect::<Vec<_>>(), vec![1u64 << n]);
        let normed = &v / c(v.norm(), 0.0);
        assert!((state.amplitude(1u64 << n) - normed[n]).norm() < 1e-10);
        let energy = expectation(&reg.hamiltonian(), &state).unwrap();
        assert!((energy - c((n as f64 + 0.5) * params.epsilon(), 0.0)).norm() < 1e-12);
        v = &f.a_plus * v;
    }
}

#[test]
fn trajectory_closed_forms() {
    let params = odd_params();
    let eps = params.epsilon();
    let omega = params.omega();
    let z = c(0.6, -0.4);
    let spec = CoherentSpec::new(z, params, 32).unwrap();
    let times: Vec<f64> = (0..25).map(|k| k as f64 * 0.37).collect();
    let tr = trajectory(&spec, &times).unwrap();
    for (i, &t) in times.iter().enumerate() {
        let zt = z * Complex64::from_polar(1.0, -omega * t);
        let x = (2.0 * eps).sqrt() / params.beta() * zt.re;
        let p = (2.0 * eps).sqrt() / params.alpha() * zt.im;
        let h = eps * (z.norm_sqr() + 0.5);
        assert!((tr.x_exp[i] - x).abs() < 1e-10, "x at t={t}");
        assert!((tr.p_exp[i] - p).abs() < 1e-10, "p at t={t}");
        assert!((tr.h_exp[i] - h).abs() < 1e-10, "h at t={t}");
    }
    assert!(tr.energy_drift() < 1e-10);
}

#[test]
fn trajectory_is_periodic() {
    let params = odd_params();
    let period = 2.0 * std::f64::consts::PI / params.omega();
    let spec = CoherentSpec::new(c(0.3, 0.8), params, 32).unwrap();
    let tr = trajectory(&spec, &[0.0, period, 3.0 * period]).unwrap();
    for i in 1..3 {
        assert!((tr.x_exp[i] - tr.x_exp[0]).abs() < 1e-10);
        assert!((tr.p_exp[i] - tr.p_exp[0]).abs() < 1e-10);
    }
}

#[test]
fn gateform_displacement_matches_series() {
    let spec = CoherentSpec::new(c(0.0, 0.3), PhysParams::default(), 10).unwrap();
    let ground = RegisterState::basis(10, 1).unwrap();
    let gate = gateform_displacement_apply(&spec, &ground).unwrap();
    let series = coherent_series(&spec).unwrap();
    // The gate-form generator is exact on the bosonic subspace, so the only
    // discrepancy is the truncated tail.
    assert!(gate.sub(&series.state).unwrap().norm() < 1e-6);
    let dense = displacement_apply(&spec, &ground).unwrap();
    assert!(gate.max_deviation(&dense).unwrap() < 1e-10);
}

#[test]
fn reduced_generator_matches_full_on_bosonic_states() {
    let spec = CoherentSpec::new(c(0.4, -0.2), odd_params(), 6).unwrap();
    let d = displacement_generator_gateform(&spec).unwrap();
    let reg = spec.register();
    for n in 0..6 {
        let psi = reg.number_state(n).unwrap();
        let full = d.full.apply(&psi).unwrap();
        let reduced = d.reduced.apply(&psi).unwrap();
        assert!(full.max_deviation(&reduced).unwrap() < 1e-10, "level {n}");
    }
    for kind in [Quadrature::Position, Quadrature::Momentum] {
        let g = reg.gate_decomposition(kind).unwrap();
        let op = reg.quadrature(kind).unwrap();
        let psi = reg.number_state(3).unwrap();
        let expected = op.apply(&psi).unwrap();
        assert!(g.full.apply(&psi).unwrap().max_deviation(&expected).unwrap() < 1e-10);
        assert!(g.reduced.apply(&psi).unwrap().max_deviation(&expected).unwrap() < 1e-10);
    }
}

#[test]
fn identity_expectation_is_retained_mass() {
    let spec = CoherentSpec::new(c(0.5, 0.0), PhysParams::default(), 32).unwrap();
    let cs = coherent_series(&spec).unwrap();
    assert!(cs.tail_mass < 1e-15);
    let ib = expectation(&spec.register().identity(), &cs.state).unwrap();
    assert!((ib.re - (1.0 - cs.tail_mass)).abs() < 1e-14);
    assert!(ib.im.abs() < 1e-15);
}

#[test]
fn displaced_state_is_a_lowering_eigenstate() {
    let params = odd_params();
    let z = c(-0.3, 0.45);
    let spec = CoherentSpec::new(z, params, 40).unwrap();
    let reg = spec.register();
    let displaced = displacement_apply(&spec, &RegisterState::basis(40, 1).unwrap()).unwrap();
    let lowered = reg.ladder(Direction::Lower).unwrap().apply(&displaced).unwrap();
    let expected = displaced.scale(z * (2.0 * params.epsilon()).sqrt());
    // Exact up to the top level, whose weight is negligible here.
    assert!(lowered.max_deviation(&expected).unwrap() < 1e-10);
}
