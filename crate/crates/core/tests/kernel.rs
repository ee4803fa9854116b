mod common;

use common::*;
use iontrap_teleport::hilbert::{apply_local, fidelity_mod_phase, Operator, Register, RegisterLayout};
use iontrap_teleport::ops::{collective_phase, sideband_unitary, PulseConfig};
use iontrap_teleport::C64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random layout with 1..=6 qubits and a random operator on 1..=3 registers.
fn random_case(seed: u64) -> (RegisterLayout, Operator<f64>, Operator<f64>) {
    let mut r = rng(seed);
    let nq = r.random_range(1..=6);
    let mut labels: Vec<u32> = (1..=9).collect();
    labels.shuffle(&mut r);
    labels.truncate(nq);
    let mode_dim = r.random_range(2..=4);
    let layout = RegisterLayout::new(labels.clone(), mode_dim).unwrap();

    let mut regs: Vec<Register> = labels.iter().map(|&q| Register::Qubit(q)).collect();
    regs.push(Register::Mode);
    regs.shuffle(&mut r);
    let k = r.random_range(1..=regs.len().min(3));
    let targets: Vec<Register> = regs[..k].to_vec();
    let dim: usize = targets
        .iter()
        .map(|t| if *t == Register::Mode { mode_dim } else { 2 })
        .product();
    let u = Operator::unitary(targets.clone(), random_unitary(dim, &mut r)).unwrap();
    let v = Operator::unitary(targets, random_unitary(dim, &mut r)).unwrap();
    (layout, u, v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn apply_local_matches_dense_oracle(seed in any::<u64>()) {
        let (layout, u, _) = random_case(seed);
        let psi = random_state(layout.clone(), &mut rng(seed ^ 0x5eed));
        let fast = apply_local(&u, &psi).unwrap();
        let dense = dense_apply(&dense_embed(&u, &layout), psi.amps());
        prop_assert!(max_diff(fast.amps(), &dense) <= 1e-12);
        prop_assert!((fast.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn composition_matches_sequential_application(seed in any::<u64>()) {
        let (layout, u, v) = random_case(seed);
        let psi = random_state(layout, &mut rng(seed.rotate_left(7)));
        let seq = apply_local(&u, &apply_local(&v, &psi).unwrap()).unwrap();
        let once = apply_local(&u.compose(&v).unwrap(), &psi).unwrap();
        prop_assert!(seq.max_abs_diff(&once).unwrap() <= 1e-12);
    }

    #[test]
    fn fidelity_symmetric_and_phase_blind(seed in any::<u64>(), phi in -10.0f64..10.0) {
        let layout = RegisterLayout::new(vec![4, 6], 3).unwrap();
        let mut r = rng(seed);
        let x = random_state(layout.clone(), &mut r);
        let y = random_state(layout, &mut r);
        let fxy = fidelity_mod_phase(&x, &y).unwrap();
        prop_assert!((fxy - fidelity_mod_phase(&y, &x).unwrap()).abs() < 1e-14);
        let yp = y.scaled(C64::from_polar(1.0, phi));
        prop_assert!((fxy - fidelity_mod_phase(&x, &yp).unwrap()).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&fxy));
    }

    #[test]
    fn sideband_is_unitary_and_conserves_excitations(
        gt in 0.0f64..std::f64::consts::TAU,
        phi in 0.0f64..std::f64::consts::TAU,
        n_max in 2usize..=4,
    ) {
        let u = sideband_unitary::<f64>(6, &PulseConfig::new(gt, phi, n_max).unwrap());
        let m = u.matrix();
        prop_assert!(m.unitarity_deviation() <= 1e-12);
        // excitation number: (ion excited ? 1 : 0) + phonons
        let excitations = |i: usize| (if i < n_max { 1 } else { 0 }) + i % n_max;
        for r in 0..2 * n_max {
            for c in 0..2 * n_max {
                if m.get(r, c).norm() > 0.0 {
                    prop_assert_eq!(excitations(r), excitations(c));
                }
            }
        }
    }

    #[test]
    fn collective_phase_factorizes(p1 in -7.0f64..7.0, p2 in -7.0f64..7.0) {
        let u = collective_phase::<f64>(4, 6, p1, p2);
        let m = u.matrix();
        prop_assert!(m.is_diagonal());
        prop_assert!(m.unitarity_deviation() <= 1e-12);
        prop_assert!((m.get(3, 3) - m.get(1, 1) * m.get(2, 2)).norm() <= 1e-12);
    }
}

#[test]
fn unitarity_is_checked_on_construction() {
    let mut m = random_unitary(2, &mut rng(3));
    m.set(0, 0, m.get(0, 0) * 1.01);
    assert!(Operator::unitary(vec![Register::Qubit(1)], m).is_err());
}

#[test]
fn spectator_marginals_unchanged() {
    let mut r = rng(11);
    let layout = RegisterLayout::new(vec![1, 2, 3], 2).unwrap();
    let psi = random_state(layout.clone(), &mut r);
    let u = Operator::unitary(
        vec![Register::Qubit(2), Register::Mode],
        random_unitary(4, &mut r),
    )
    .unwrap();
    let out = apply_local(&u, &psi).unwrap();
    // marginal over (ion 1, ion 3)
    let marginal = |s: &iontrap_teleport::StateVector| {
        let mut m = [0.0; 4];
        for (i, z) in s.amps().iter().enumerate() {
            let q1 = (i >> 3) & 1;
            let q3 = (i >> 1) & 1;
            m[q1 * 2 + q3] += z.norm_sqr();
        }
        m
    };
    let (a, b) = (marginal(&psi), marginal(&out));
    for k in 0..4 {
        assert!((a[k] - b[k]).abs() < 1e-12);
    }
}
