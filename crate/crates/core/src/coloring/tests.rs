use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::engine::{run, Limits, RegionState};
use crate::linalg::{gates, ComplexMatrix, C64};
use crate::model::*;
use crate::testutil::*;

fn ring(n: usize) -> Region {
    Region::line(n, Boundary::Torus).unwrap()
}

fn qubit() -> CellLayout {
    CellLayout::qudit(2).unwrap()
}

/// Product over the phases of the phase operator at every cell of its
/// color, on a ring of `n` qubits.
fn period_oracle(cqca: &CqcaDefinition, n: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::identity(1 << n);
    for (j, phase) in cqca.phases().iter().enumerate() {
        let m = phase.to_dense(cqca.layout(), 3).unwrap();
        for x in 0..n as i64 {
            if cqca.coloring().color(&[x]) != cqca.colors()[j] {
                continue;
            }
            let cells: Vec<usize> = [-1, 0, 1]
                .iter()
                .map(|o| (x + o).rem_euclid(n as i64) as usize)
                .collect();
            g = &embed(2, n, &cells, &m) * &g;
        }
    }
    g
}

fn random_cqca(rng: &mut ChaCha8Rng) -> CqcaDefinition {
    // center unitaries controlled by both neighbors commute for same-colored cells
    let tables: Vec<Vec<ComplexMatrix>> = (0..2)
        .map(|_| (0..4).map(|_| random_unitary(2, rng)).collect())
        .collect();
    let phases = tables
        .into_iter()
        .map(|t| {
            SymmetricRule::new(&qubit(), 1, move |nb| Some(t[nb[0] * 2 + nb[1]].clone()))
                .unwrap()
                .into_operator()
        })
        .collect();
    CqcaDefinition::new(qubit(), Coloring::checkerboard(1), phases, vec![0, 1], None).unwrap()
}

#[test]
fn symmetric_examples() {
    let l = qubit();
    assert!(is_symmetric(&ComplexMatrix::identity(8), &l, 1, 1e-12));
    assert!(is_symmetric(
        &on_center(&l, 1, &gates::hadamard()),
        &l,
        1,
        1e-12
    ));
    // X on the center iff both neighbors are 1
    let toffoli = ComplexMatrix::permutation(8, |x| if x & 0b101 == 0b101 { x ^ 0b010 } else { x });
    assert!(is_symmetric(&toffoli, &l, 1, 1e-12));
    // controlled by the left neighbor only: not invariant under the swap
    let left = ComplexMatrix::permutation(8, |x| if x & 0b100 != 0 { x ^ 0b010 } else { x });
    assert!(!is_symmetric(&left, &l, 1, 1e-12));
    let moves = ComplexMatrix::identity(4).kron(&gates::pauli_x());
    assert!(!is_symmetric(&moves, &l, 1, 1e-12));
}

#[test]
fn symmetric_rule_matches_its_dense_form() {
    let rule =
        SymmetricRule::new(&qubit(), 1, |nb| (nb[0] + nb[1] == 1).then(gates::pauli_x)).unwrap();
    let m = rule.into_operator().to_dense(&qubit(), 3).unwrap();
    let want = ComplexMatrix::permutation(8, |x| {
        let (a, c) = (x >> 2, x & 1);
        if a + c == 1 {
            x ^ 0b010
        } else {
            x
        }
    });
    assert!((&m - &want).frobenius_norm() < 1e-12);
    assert!(is_symmetric(&m, &qubit(), 1, 1e-12));
}

#[test]
fn validate_flags_same_color_conflicts() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let good = random_cqca(&mut rng);
    let rep = validate_cqca(&good, 1e-9).unwrap();
    assert!(rep.pass, "{rep:?}");
    // Z on the left neighbor, H on the right: translates by 2 clash
    let zh = gates::pauli_z()
        .kron(&ComplexMatrix::identity(2))
        .kron(&gates::hadamard());
    let bad = CqcaDefinition::new(
        qubit(),
        Coloring::checkerboard(1),
        vec![zh.into()],
        vec![0],
        None,
    )
    .unwrap();
    let rep = validate_cqca(&bad, 1e-9).unwrap();
    assert!(!rep.pass);
    assert!(rep.same_color_commutation[0] > 0.1);
}

#[test]
fn rejects_incorrect_coloring() {
    let c = Coloring::new(vec![3], vec![0, 0, 1], 2).unwrap();
    assert!(!validate_coloring(&c));
    let e = CqcaDefinition::new(
        qubit(),
        c,
        vec![ComplexMatrix::identity(8).into()],
        vec![0],
        None,
    );
    assert!(e.is_err());
}

#[test]
fn period_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cqca = random_cqca(&mut rng);
    let amps = random_state(16, &mut rng);
    let mut s =
        RegionState::from_dense(&ring(4), &qubit(), vec![], amps.clone(), Limits::default())
            .unwrap();
    cqca_period(&mut s, &cqca).unwrap();
    let want = period_oracle(&cqca, 4).apply(&amps);
    let got = s.dense().unwrap();
    let dev = got
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(dev < 1e-12, "{dev}");
}

#[test]
fn ordering_within_a_phase_is_irrelevant() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cqca = random_cqca(&mut rng);
    let amps = random_state(64, &mut rng);
    let mut a =
        RegionState::from_dense(&ring(6), &qubit(), vec![], amps.clone(), Limits::default())
            .unwrap();
    let mut b = a.clone();
    cqca_step(&mut a, &cqca, 1).unwrap();
    cqca_step_ordered(&mut b, &cqca, 1, &[vec![5], vec![1], vec![3]]).unwrap();
    assert!(a.max_deviation(&b) < 1e-12);
    assert!(cqca_step_ordered(&mut b, &cqca, 1, &[vec![5], vec![1]]).is_err());
}

#[test]
fn torus_must_fit_the_period() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cqca = random_cqca(&mut rng);
    let mut s = RegionState::from_dense(
        &ring(5),
        &qubit(),
        vec![],
        random_state(32, &mut rng),
        Limits::default(),
    )
    .unwrap();
    assert!(cqca_step(&mut s, &cqca, 0).is_err());
}

#[test]
fn translated_qca_simulates_one_period_per_period_steps() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cqca = random_cqca(&mut rng);
    let qca = cqca_to_qca(&cqca).unwrap();
    assert!(crate::validate_definition(&qca, 1e-9).unwrap().pass);
    let amps = random_state(16, &mut rng);
    let mut direct =
        RegionState::from_dense(&ring(4), &qubit(), vec![], amps, Limits::default()).unwrap();
    let mut lifted = lift_state(&direct, &cqca, &qca).unwrap();
    assert_eq!(lifted.classical(), &[0, 0, 1, 0, 0, 0, 1, 0]);
    for _ in 0..3 {
        cqca_period(&mut direct, &cqca).unwrap();
        run(&mut lifted, &qca, cqca.period()).unwrap();
        let back = project_state(&lifted, &cqca).unwrap();
        assert!(direct.max_deviation(&back) < 1e-12);
        assert_eq!(lifted.classical(), &[0, 0, 1, 0, 0, 0, 1, 0]);
    }
}

#[test]
fn translated_qca_is_idle_off_pattern() {
    // a cell claiming a color its neighbors cannot surround does nothing
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cqca = random_cqca(&mut rng);
    let qca = cqca_to_qca(&cqca).unwrap();
    let region = ring(4);
    let assignment: Vec<Vec<usize>> = (0..4).map(|i| vec![i % 2, 0, 0]).collect();
    let mut s = RegionState::basis(&region, qca.layout(), &assignment, Limits::default()).unwrap();
    let before = s.clone();
    run(&mut s, &qca, 2).unwrap();
    assert!(s.max_deviation(&before) < 1e-12);
}

#[test]
fn gate_sequence_matches_sequential_application() {
    let gs = vec![
        CellGate::Single {
            offset: vec![0],
            matrix: gates::hadamard(),
        },
        CellGate::Cnot {
            control: vec![0],
            target: vec![1],
        },
        CellGate::Single {
            offset: vec![0],
            matrix: gates::t_gate(),
        },
    ];
    let cqca = gates_to_cqca(&gs, &qubit(), &Coloring::checkerboard(1)).unwrap();
    assert_eq!(cqca.period(), 6);
    assert_eq!(cqca.colors(), &[0, 1, 0, 1, 0, 1]);
    assert!(validate_cqca(&cqca, 1e-9).unwrap().pass);
    let n = 4;
    let mut g = ComplexMatrix::identity(16);
    for gate in &gs {
        for color in 0..2 {
            for x in (color..n).step_by(2) {
                g = &match gate {
                    CellGate::Single { matrix, .. } => embed(2, n, &[x], matrix),
                    _ => embed(2, n, &[x, (x + 1) % n], &gates::cnot()),
                } * &g;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let amps = random_state(16, &mut rng);
    let mut s =
        RegionState::from_dense(&ring(4), &qubit(), vec![], amps.clone(), Limits::default())
            .unwrap();
    cqca_period(&mut s, &cqca).unwrap();
    let want = g.apply(&amps);
    let dev = s
        .dense()
        .unwrap()
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(dev < 1e-12);
}

#[test]
fn gate_sequence_errors() {
    let cb = Coloring::checkerboard(1);
    let far = [CellGate::Single {
        offset: vec![2],
        matrix: gates::hadamard(),
    }];
    assert!(gates_to_cqca(&far, &qubit(), &cb).is_err());
    // both neighbors share a color under the checkerboard
    let wide = [CellGate::Cnot {
        control: vec![-1],
        target: vec![1],
    }];
    assert!(gates_to_cqca(&wide, &qubit(), &cb).is_err());
    assert!(gates_to_cqca(&wide, &qubit(), &Coloring::cyclic(3)).is_ok());
    let hybrid =
        CellLayout::new(vec![Register::quantum("q", 2), Register::classical("c", 2)]).unwrap();
    assert!(gates_to_cqca(&[], &hybrid, &cb).is_err());
    let empty = gates_to_cqca(&[], &qubit(), &cb).unwrap();
    assert_eq!(empty.period(), 1);
}

#[test]
fn checkerboard_two_dimensional_phases() {
    let cb = Coloring::checkerboard(2);
    assert!(validate_coloring(&cb));
    let z = on_center(&qubit(), 2, &gates::pauli_z());
    let cqca = CqcaDefinition::new(
        qubit(),
        cb,
        vec![z.clone().into(), z.into()],
        vec![0, 1],
        None,
    )
    .unwrap();
    let region = Region::cube(2, 4, Boundary::Torus).unwrap();
    let basis = |ones: &[usize]| -> Vec<Vec<usize>> {
        (0..16).map(|i| vec![ones.contains(&i) as usize]).collect()
    };
    // (0,0) and (1,1) are black, (0,1) is white
    let mut s = RegionState::basis(&region, &qubit(), &basis(&[0, 5]), Limits::default()).unwrap();
    cqca_step(&mut s, &cqca, 0).unwrap();
    let amp = s.amplitude(&basis(&[0, 5])).unwrap();
    assert!((amp - C64::new(1.0, 0.0)).norm() < 1e-12);
    let mut s = RegionState::basis(&region, &qubit(), &basis(&[1]), Limits::default()).unwrap();
    cqca_step(&mut s, &cqca, 1).unwrap();
    let amp = s.amplitude(&basis(&[1])).unwrap();
    assert!((amp + C64::new(1.0, 0.0)).norm() < 1e-12);
    cqca_step(&mut s, &cqca, 0).unwrap();
    assert!((s.amplitude(&basis(&[1])).unwrap() + C64::new(1.0, 0.0)).norm() < 1e-12);
}

#[test]
fn padded_phases_agree_between_backends() {
    // qutrit rule fixing |0> up to a neighbor-dependent phase
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let l = CellLayout::qudit(3).unwrap();
    let entries: Vec<ComplexMatrix> = (0..9)
        .map(|_| {
            let ph = random_diagonal(1, &mut rng);
            let w = random_unitary(2, &mut rng);
            let mut m = ComplexMatrix::zeros(3);
            m.set(0, 0, ph.get(0, 0));
            for i in 0..2 {
                for j in 0..2 {
                    m.set(i + 1, j + 1, w.get(i, j));
                }
            }
            m
        })
        .collect();
    let op = SymmetricRule::new(&l, 1, move |nb| Some(entries[nb[0] * 3 + nb[1]].clone()))
        .unwrap()
        .into_operator();
    let cqca = CqcaDefinition::new(
        l.clone(),
        Coloring::checkerboard(1),
        vec![op.clone(), op],
        vec![0, 1],
        Some(0),
    )
    .unwrap();
    let region = Region::line(4, Boundary::Quiescent).unwrap();
    let amps = random_state(81, &mut rng);
    let mut dense = RegionState::from_dense(&region, &l, vec![], amps, Limits::default()).unwrap();
    let mut sparse = dense.clone().into_sparse();
    for _ in 0..3 {
        cqca_period(&mut dense, &cqca).unwrap();
        cqca_period(&mut sparse, &cqca).unwrap();
    }
    assert!(dense.max_deviation(&sparse) < 1e-12);
    assert!((dense.norm() - 1.0).abs() < 1e-12);
}
