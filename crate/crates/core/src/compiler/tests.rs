use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::builders::{ising_qca, shift_right_qca, walk_qca, WalkParams};
use crate::engine::{run, Limits, RegionState};
use crate::linalg::{gates, CheckMode, ComplexMatrix, C64};
use crate::model::{Boundary, CellLayout, NeighborhoodScheme, QcaDefinition, Region};
use crate::testutil::*;
use crate::validate::validate_definition_opts;
use crate::Error;

fn max_dev(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn fidelity(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<C64>()
        .norm_sqr()
}

fn engine_vs_circuit(qca: &QcaDefinition, region: &Region, t: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = qca.layout().cell_dimension().pow(region.len() as u32);
    let amps = random_state(n, &mut rng);
    let c = compile_to_circuit(qca, region, t).unwrap();
    let out = simulate_circuit(&c, &amps).unwrap();
    let mut s =
        RegionState::from_dense(region, qca.layout(), vec![], amps, Limits::default()).unwrap();
    run(&mut s, qca, t).unwrap();
    max_dev(s.dense().unwrap(), &out)
}

#[test]
fn empty_and_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let v = random_state(4, &mut rng);
    let c = Circuit::qubits(2);
    assert_eq!(simulate_circuit(&c, &v).unwrap(), v);
    let mut c = Circuit::qubits(2);
    c.push_layer(vec![Gate::new("H", vec![1], gates::hadamard())])
        .unwrap();
    c.push_layer(vec![Gate::new("H", vec![1], gates::hadamard())])
        .unwrap();
    assert!(max_dev(&simulate_circuit(&c, &v).unwrap(), &v) < 1e-15);
    assert!(simulate_circuit(&c, &v[..2]).is_err());
}

#[test]
fn layers_reject_bad_gates() {
    let mut c = Circuit::qubits(3);
    let h = || Gate::new("H", vec![0], gates::hadamard());
    assert!(c
        .push_layer(vec![h(), Gate::new("CZ", vec![0, 1], gates::cz())])
        .is_err());
    assert!(c
        .push_layer(vec![Gate::new(
            "bad",
            vec![0],
            ComplexMatrix::diagonal(&[C64::new(2.0, 0.0), C64::new(1.0, 0.0)])
        )])
        .is_err());
    assert!(c
        .push_layer(vec![Gate::new("far", vec![3], gates::hadamard())])
        .is_err());
    assert!(c
        .push_layer(vec![Gate::new("dim", vec![0, 1], gates::hadamard())])
        .is_err());
    assert_eq!(c.depth(), 0);
    c.push_asap(h()).unwrap();
    c.push_asap(Gate::new("X", vec![2], gates::pauli_x()))
        .unwrap();
    c.push_asap(Gate::new("CZ", vec![0, 1], gates::cz()))
        .unwrap();
    assert_eq!(c.depth(), 2);
    assert_eq!(c.layers()[0].len(), 2);
}

#[test]
fn circuit_json_round_trip() {
    let mut c = Circuit::qubits(2);
    c.push_layer(vec![
        Gate::new("T", vec![0], gates::t_gate()),
        Gate::new("H", vec![1], gates::hadamard()),
    ])
    .unwrap();
    c.push_layer(vec![Gate::new("CZ", vec![1, 0], gates::cz())])
        .unwrap();
    let s = c.to_json();
    assert!(s.contains("\"format\": \"luqca-circuit\""));
    let back = Circuit::from_json(&s).unwrap();
    assert_eq!(back, c);
    assert_eq!(back.to_json(), s);
    assert!(matches!(
        Circuit::from_json("{\"format\":\"x\"}"),
        Err(Error::Parse(_))
    ));
    assert!(matches!(
        Circuit::from_json(&s.replace("luqca-circuit", "other")),
        Err(Error::Parse(_))
    ));
}

#[test]
fn ising_depth_is_linear_and_region_independent() {
    let q = ising_qca(1.0, 0.1).unwrap();
    let ring = |n| Region::line(n, Boundary::Torus).unwrap();
    assert_eq!(compile_to_circuit(&q, &ring(8), 0).unwrap().depth(), 0);
    let c1 = compile_to_circuit(&q, &ring(8), 1).unwrap().depth();
    assert_eq!(c1, 3);
    for t in [1, 5] {
        assert_eq!(compile_to_circuit(&q, &ring(8), t).unwrap().depth(), c1 * t);
        assert_eq!(
            compile_to_circuit(&q, &ring(16), t).unwrap().depth(),
            c1 * t
        );
    }
    assert!(engine_vs_circuit(&q, &ring(8), 5, 21) < 1e-10);
}

#[test]
fn radius_one_needs_four_layers() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let q = QcaDefinition::new(
        CellLayout::qudit(2).unwrap(),
        NeighborhoodScheme::von_neumann(1),
        random_diagonal(8, &mut rng),
        random_unitary(2, &mut rng),
        None,
    )
    .unwrap();
    let ring = Region::line(6, Boundary::Torus).unwrap();
    assert_eq!(compile_to_circuit(&q, &ring, 2).unwrap().depth(), 8);
    assert!(engine_vs_circuit(&q, &ring, 2, 23) < 1e-10);
    // 7 is not a multiple of 3: the wrapped class needs one more layer
    let ring7 = Region::line(7, Boundary::Torus).unwrap();
    assert_eq!(compile_to_circuit(&q, &ring7, 1).unwrap().depth(), 5);
    assert!(engine_vs_circuit(&q, &ring7, 2, 24) < 1e-10);
}

#[test]
fn quiescent_regions_compile_when_nothing_leaks() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let mut diag = random_diagonal(8, &mut rng);
    diag.set(0, 0, C64::new(1.0, 0.0));
    let mut v = random_unitary(2, &mut rng);
    // |0> fixed by V
    let ph = v.get(0, 0) / v.get(0, 0).norm();
    v = ComplexMatrix::from_rows(&[
        vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        vec![C64::new(0.0, 0.0), ph],
    ])
    .unwrap();
    let q = QcaDefinition::new(
        CellLayout::qudit(2).unwrap(),
        NeighborhoodScheme::von_neumann(1),
        diag,
        v,
        Some(0),
    )
    .unwrap();
    let line = Region::line(5, Boundary::Quiescent).unwrap();
    assert!(engine_vs_circuit(&q, &line, 3, 26) < 1e-10);
    let walk = walk_qca(
        WalkParams::new(C64::new(0.0, 0.6), C64::new(0.8, 0.0), C64::new(1.0, 0.0)).unwrap(),
    )
    .unwrap();
    assert!(matches!(
        compile_to_circuit(&walk, &line, 1),
        Err(Error::Structural(_))
    ));
    assert!(compile_to_circuit(
        &shift_right_qca(),
        &Region::line(4, Boundary::Torus).unwrap(),
        2
    )
    .is_ok());
}

fn random_circuit(rng: &mut ChaCha8Rng, wires: usize, gates_n: usize) -> Circuit {
    let mut c = Circuit::qubits(wires);
    for _ in 0..gates_n {
        if rng.gen_bool(0.5) {
            let a = rng.gen_range(0..wires);
            let mut b = rng.gen_range(0..wires - 1);
            if b >= a {
                b += 1;
            }
            c.push_asap(Gate::new("U2", vec![a, b], random_unitary(4, rng)))
                .unwrap();
        } else {
            c.push_asap(Gate::new(
                "U1",
                vec![rng.gen_range(0..wires)],
                random_unitary(2, rng),
            ))
            .unwrap();
        }
    }
    c
}

#[test]
fn routing_preserves_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let mut nn = Circuit::qubits(3);
    nn.push_layer(vec![Gate::new("CZ", vec![1, 2], gates::cz())])
        .unwrap();
    assert_eq!(route_nearest_neighbor(&nn, &[0, 1, 2]).unwrap(), nn);

    let mut far = Circuit::qubits(3);
    far.push_layer(vec![Gate::new("CZ", vec![0, 2], gates::cz())])
        .unwrap();
    let r = route_nearest_neighbor(&far, &[0, 1, 2]).unwrap();
    assert_eq!(r.gate_count(), 3);
    let v = random_state(8, &mut rng);
    assert!(
        max_dev(
            &simulate_circuit(&r, &v).unwrap(),
            &simulate_circuit(&far, &v).unwrap()
        ) < 1e-12
    );

    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let c = random_circuit(&mut rng, 4, 10);
        let order = [2, 0, 3, 1];
        let r = route_nearest_neighbor(&c, &order).unwrap();
        let pos = |w: usize| order.iter().position(|&x| x == w).unwrap();
        for g in r.layers().iter().flatten() {
            if g.wires.len() == 2 {
                assert_eq!(pos(g.wires[0]).abs_diff(pos(g.wires[1])), 1);
            }
        }
        assert!(r.depth() <= c.depth() * (2 * 4 - 3));
        let v = random_state(16, &mut rng);
        assert!(
            max_dev(
                &simulate_circuit(&r, &v).unwrap(),
                &simulate_circuit(&c, &v).unwrap()
            ) < 1e-11
        );
    }
    let mut wide = Circuit::qubits(3);
    wide.push_layer(vec![Gate::new(
        "CCZ",
        vec![0, 1, 2],
        ComplexMatrix::identity(8),
    )])
    .unwrap();
    assert!(route_nearest_neighbor(&wide, &[0, 1, 2]).is_err());
}

fn random_nn_circuit(rng: &mut ChaCha8Rng, wires: usize, cols: usize) -> Circuit {
    let singles = [
        ("H", gates::hadamard()),
        ("T", gates::t_gate()),
        ("X", gates::pauli_x()),
    ];
    let mut c = Circuit::qubits(wires);
    for _ in 0..cols {
        let mut layer = vec![];
        let mut w = 0;
        while w < wires {
            let r = rng.gen_range(0..5);
            if r == 4 && w + 1 < wires {
                layer.push(Gate::new("CZ", vec![w, w + 1], gates::cz()));
                w += 2;
                continue;
            }
            if r < 3 {
                layer.push(Gate::new(singles[r].0, vec![w], singles[r].1.clone()));
            }
            w += 1;
        }
        c.push_layer(layer).unwrap();
    }
    c
}

fn round_trip(c: &Circuit, input: &[C64]) -> f64 {
    let enc = encode_circuit_as_qca(c, &UniversalGateSet::default()).unwrap();
    let mut s = enc.prepare(input).unwrap();
    run(&mut s, &enc.qca, enc.steps).unwrap();
    fidelity(
        &extract_output(&s, &enc).unwrap(),
        &simulate_circuit(c, input).unwrap(),
    )
}

#[test]
fn universal_examples() {
    let mut one = Circuit::qubits(1);
    one.push_layer(vec![]).unwrap();
    let input = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
    let enc = encode_circuit_as_qca(&one, &UniversalGateSet::default()).unwrap();
    assert_eq!(enc.steps, 2);
    let mut s = enc.prepare(&input).unwrap();
    run(&mut s, &enc.qca, enc.steps).unwrap();
    assert!(max_dev(&extract_output(&s, &enc).unwrap(), &input) < 1e-15);

    let mut hc = Circuit::qubits(2);
    hc.push_layer(vec![Gate::new("H", vec![0], gates::hadamard())])
        .unwrap();
    hc.push_layer(vec![Gate::new("CZ", vec![0, 1], gates::cz())])
        .unwrap();
    let zero = [
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
    ];
    assert!(round_trip(&hc, &zero) > 1.0 - 1e-9);
    let enc = encode_circuit_as_qca(&hc, &UniversalGateSet::default()).unwrap();
    assert_eq!(enc.steps, 4);
    // the active column reaches the output column on the last step
    let mut s = enc.initial.clone();
    let active = |s: &RegionState, col: i64| {
        (0..2)
            .map(|r| s.classical_of(s.cell_index(&[col, r]).unwrap())[2])
            .collect::<Vec<_>>()
    };
    run(&mut s, &enc.qca, 3).unwrap();
    assert_eq!((active(&s, 1), active(&s, 2)), (vec![1, 1], vec![0, 0]));
    run(&mut s, &enc.qca, 1).unwrap();
    assert_eq!((active(&s, 1), active(&s, 2)), (vec![0, 0], vec![1, 1]));
}

#[test]
fn universal_random_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    for _ in 0..6 {
        let wires = rng.gen_range(1..=3);
        let cols = rng.gen_range(1..=4);
        let c = random_nn_circuit(&mut rng, wires, cols);
        let input = random_state(1 << wires, &mut rng);
        assert!(round_trip(&c, &input) > 1.0 - 1e-9);
    }
}

#[test]
fn universal_qca_validates() {
    let q = universal_qca(&UniversalGateSet::default()).unwrap();
    let rep = validate_definition_opts(
        &q,
        1e-10,
        CheckMode::Sampled {
            samples: 4000,
            seed: 29,
        },
    )
    .unwrap();
    assert!(rep.pass && rep.sampled, "{rep}");
}

#[test]
fn universal_encoding_errors() {
    let set = UniversalGateSet::default();
    let mut far = Circuit::qubits(3);
    far.push_layer(vec![Gate::new("CZ", vec![0, 2], gates::cz())])
        .unwrap();
    assert!(encode_circuit_as_qca(&far, &set).is_err());
    let mut other = Circuit::qubits(1);
    other
        .push_layer(vec![Gate::new("Z", vec![0], gates::pauli_z())])
        .unwrap();
    assert!(encode_circuit_as_qca(&other, &set).is_err());
    let mut cnot = Circuit::qubits(2);
    cnot.push_layer(vec![Gate::new("CNOT", vec![0, 1], gates::cnot())])
        .unwrap();
    assert!(encode_circuit_as_qca(&cnot, &set).is_err());
    assert!(encode_circuit_as_qca(&Circuit::new(vec![3]), &set).is_err());
}
