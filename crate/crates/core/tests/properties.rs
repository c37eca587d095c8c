//! Randomized invariants of the operator algebra.
//!
//! Long random programs built from every operator family must keep the norm
//! pinned, leave per-setting probability untouched when they avoid the
//! setting register, and undo exactly under their reversed adjoints.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use tsow_core::oracle::{make_deutsch_jozsa, OracleProblem};
use tsow_core::state::{
    init_superposed_input, OracleBinding, Operator, RegisterLayout, StateVector,
};
use tsow_core::NORM_DRIFT_PER_OP;

fn fixture() -> (Arc<OracleProblem>, RegisterLayout) {
    let problem = make_deutsch_jozsa(2).unwrap();
    let layout = RegisterLayout::new(4, 3, 1).unwrap();
    (problem, layout)
}

/// A rotation by three Euler angles; always unitary, rarely axis-aligned.
fn u3(qubit: usize, theta: f64, phi: f64, lambda: f64) -> Operator {
    let (s, c) = (theta / 2.0).sin_cos();
    let ei = |x: f64| Complex64::from_polar(1.0, x);
    Operator::dense(
        "U3",
        vec![qubit],
        vec![
            Complex64::new(c, 0.0),
            -ei(lambda) * s,
            ei(phi) * s,
            ei(phi + lambda) * c,
        ],
    )
    .unwrap()
}

/// Instantiates one operator from the sampled raw material.  Every family
/// appears, and none touches the setting register except block-diagonally.
fn build_op(
    problem: &Arc<OracleProblem>,
    layout: &RegisterLayout,
    family: u8,
    slot: usize,
    angles: (f64, f64, f64),
) -> Operator {
    // non-setting qubits: the workspace digit and the three argument digits
    let free = [layout.w_qubit(0), layout.a_qubit(2), layout.a_qubit(1), layout.a_qubit(0)];
    let q = free[slot % free.len()];
    match family % 8 {
        0 => Operator::hadamard(q),
        1 => Operator::pauli_x(q),
        2 => u3(q, angles.0, angles.1, angles.2),
        3 => Operator::Reflection { targets: free.to_vec(), angle: angles.0 },
        4 => Operator::OracleXor { oracle: OracleBinding::controlled(Arc::clone(problem)) },
        5 => Operator::oracle_phase(OracleBinding::controlled(Arc::clone(problem)), angles.1)
            .unwrap(),
        6 => Operator::FlipIfAnySet {
            target: layout.w_qubit(0),
            controls: vec![layout.a_qubit(0), layout.a_qubit(1), layout.a_qubit(2)],
        },
        _ => Operator::GlobalPhase { angle: angles.2 },
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// One hundred random operators: the norm budget of 1e-12 per operator
    /// holds at every prefix, per-setting probability never moves, and the
    /// reversed adjoint chain reconstructs the input.
    #[test]
    fn random_programs_hold_norm_mass_and_reversibility(
        ops in proptest::collection::vec(
            (0u8..8, 0usize..4, (0.0..TAU, 0.0..TAU, 0.0..TAU)),
            100,
        )
    ) {
        let (problem, layout) = fixture();
        let input = init_superposed_input(&problem, layout).unwrap();
        let start_mass: Vec<f64> =
            problem.sigma().iter().map(|b| input.block_mass(b.value())).collect();

        let program: Vec<Operator> = ops
            .iter()
            .map(|(family, slot, angles)| build_op(&problem, &layout, *family, *slot, *angles))
            .collect();

        let mut state = input.clone();
        for (i, op) in program.iter().enumerate() {
            prop_assert!(op.is_unitary());
            state = op.apply(&state).unwrap();
            let drift = (state.norm() - 1.0).abs();
            let budget = NORM_DRIFT_PER_OP * (i + 1) as f64;
            prop_assert!(drift <= budget, "drift {drift:.3e} after {} ops", i + 1);
        }

        for (b, before) in problem.sigma().iter().zip(&start_mass) {
            let after = state.block_mass(b.value());
            prop_assert!(
                (after - before).abs() <= 1e-9,
                "setting {b}: mass moved {before} -> {after}"
            );
        }

        for op in program.iter().rev() {
            state = op.adjoint().apply(&state).unwrap();
        }
        let fidelity = input.fidelity(&state).unwrap();
        prop_assert!(fidelity >= 1.0 - 1e-9, "recovered fidelity {fidelity}");
    }

    /// The reversible query is an involution: applying it twice returns the
    /// identical amplitude vector, bit for bit, on any basis state.
    #[test]
    fn query_twice_is_the_identity(b_index in 0usize..8, a in 0u32..8, w in 0u32..2) {
        let (problem, layout) = fixture();
        let b = problem.sigma().members()[b_index];
        let state = StateVector::basis(layout, b.value(), a, w);
        let query = Operator::OracleXor { oracle: OracleBinding::controlled(problem) };
        let twice = query.apply(&query.apply(&state).unwrap()).unwrap();
        for (x, y) in state.amplitudes().iter().zip(twice.amplitudes()) {
            prop_assert_eq!(x, y);
        }
    }
}
