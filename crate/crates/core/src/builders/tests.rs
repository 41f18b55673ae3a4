use std::f64::consts::FRAC_1_SQRT_2;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::coloring::{cqca_period, validate_cqca};
use crate::engine::{reduced_density, run, step, Limits, RegionState};
use crate::linalg::{commutes_with_translations, herm_exp, ComplexMatrix, C64};
use crate::model::{Boundary, Region};
use crate::testutil::*;
use crate::validate_definition;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn ring(n: usize) -> Region {
    Region::line(n, Boundary::Torus).unwrap()
}

fn max_dev(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn hadamard_walk() -> WalkParams {
    WalkParams::new(c(0.0, FRAC_1_SQRT_2), c(FRAC_1_SQRT_2, 0.0), c(1.0, 0.0)).unwrap()
}

// ---- Ising

#[test]
fn ising_zero_coupling_is_trivial() {
    let q = ising_qca(0.0, 0.3).unwrap();
    let u = q.u0().as_matrix().unwrap();
    assert!((u - &ComplexMatrix::identity(4)).frobenius_norm() < 1e-15);
    assert!(ising_qca(1.0, 0.0).is_err());
}

#[test]
fn ising_step_is_the_chain_exponential() {
    let q = ising_qca(1.0, 0.1).unwrap();
    let rep = validate_definition(&q, 1e-12).unwrap();
    assert!(rep.pass && rep.max_residual() < 1e-12, "{rep}");
    // zz energies of the 4-ring, read off the bit strings
    let h: Vec<C64> = (0..16usize)
        .map(|x| {
            let b: Vec<f64> = (0..4)
                .map(|i| if x >> (3 - i) & 1 == 1 { -1.0 } else { 1.0 })
                .collect();
            c((0..4).map(|i| b[i] * b[(i + 1) % 4]).sum(), 0.0)
        })
        .collect();
    let u = herm_exp(&ComplexMatrix::diagonal(&h), 0.1).unwrap();
    assert!(
        (&u - &herm_exp(&ising_hamiltonian(1.0, 4, true), 0.1).unwrap()).frobenius_norm() < 1e-14
    );
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let amps = random_state(16, &mut rng);
    let mut s = RegionState::from_dense(
        &ring(4),
        q.layout(),
        vec![],
        amps.clone(),
        Limits::default(),
    )
    .unwrap();
    step(&mut s, &q).unwrap();
    assert!(max_dev(s.dense().unwrap(), &u.apply(&amps)) < 1e-10);
}

// ---- Heisenberg

fn bond_oracle(j: f64) -> ComplexMatrix {
    // singlet has energy -4J, triplet 0
    let r = FRAC_1_SQRT_2;
    let mut h = ComplexMatrix::zeros(4);
    let s = [0.0, r, -r, 0.0];
    for a in 0..4 {
        for b in 0..4 {
            h.set(a, b, c(-4.0 * j * s[a] * s[b], 0.0));
        }
    }
    h
}

#[test]
fn heisenberg_bond_matches_singlet_projector() {
    assert!((&heisenberg_bond(0.7) - &bond_oracle(0.7)).frobenius_norm() < 1e-14);
    // neighboring bonds do not commute
    let h = heisenberg_bond(1.0);
    let h12 = h.kron(&ComplexMatrix::identity(2));
    let h23 = ComplexMatrix::identity(2).kron(&h);
    assert!(h12.commutator(&h23).spectral_norm() > 1.0);
}

#[test]
fn heisenberg_zero_coupling_has_no_error() {
    assert_eq!(trotter_error(0.0, 0.2, 3, 4).unwrap(), 0.0);
}

#[test]
fn trotter_error_halves_with_k() {
    let e: Vec<f64> = [2, 4, 8, 16]
        .iter()
        .map(|&k| trotter_error(1.0, 0.2, k, 4).unwrap())
        .collect();
    for w in e.windows(2) {
        assert!(w[1] <= w[0]);
        let r = w[0] / w[1];
        assert!((1.6..=2.4).contains(&r), "{e:?}");
    }
    assert!(matches!(
        trotter_error(1.0, 0.2, 2, 40),
        Err(crate::Error::Resource(_))
    ));
}

#[test]
fn heisenberg_cqca_period_is_one_trotter_factor() {
    let (j, dt, k) = (1.0, 0.2, 3);
    let cqca = heisenberg_cqca(j, dt, k).unwrap();
    assert!(validate_cqca(&cqca, 1e-10).unwrap().pass);
    let u = herm_exp(&bond_oracle(j), dt / k as f64).unwrap();
    let mut g = ComplexMatrix::identity(16);
    for start in [0, 1] {
        for x in (start..4).step_by(2) {
            g = &embed(2, 4, &[x, (x + 1) % 4], &u) * &g;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let amps = random_state(16, &mut rng);
    let mut s = RegionState::from_dense(
        &ring(4),
        cqca.layout(),
        vec![],
        amps.clone(),
        Limits::default(),
    )
    .unwrap();
    cqca_period(&mut s, &cqca).unwrap();
    assert!(max_dev(s.dense().unwrap(), &g.apply(&amps)) < 1e-12);
}

// ---- walk

fn recurrence(p: C64, q: C64, n: usize, x0: usize, steps: usize) -> (Vec<C64>, Vec<C64>) {
    let mut u = vec![c(0.0, 0.0); n];
    let mut d = u.clone();
    u[x0] = c(1.0, 0.0);
    for _ in 0..steps {
        let mut nu = vec![c(0.0, 0.0); n];
        let mut nd = nu.clone();
        for x in 0..n {
            if x > 0 {
                nu[x] += q * u[x - 1];
                nd[x] += p * u[x - 1];
            }
            if x + 1 < n {
                nu[x] += p * d[x + 1];
                nd[x] += q * d[x + 1];
            }
        }
        u = nu;
        d = nd;
    }
    (u, d)
}

#[test]
fn walk_params_invariants() {
    let w = hadamard_walk();
    assert!((w.mass() - c(-1.0, 0.0)).norm() < 1e-15);
    assert!(WalkParams::new(c(0.6, 0.0), c(0.8, 0.0), c(1.0, 0.0)).is_err());
    assert!(WalkParams::new(c(0.0, 0.6), c(0.7, 0.0), c(1.0, 0.0)).is_err());
    assert!(WalkParams::new(c(0.0, 0.6), c(0.8, 0.0), c(0.0, 0.9)).is_err());
}

#[test]
fn walk_validates() {
    let q = walk_qca(hadamard_walk()).unwrap();
    let rep = validate_definition(&q, 1e-12).unwrap();
    assert!(rep.pass, "{rep}");
    assert!(commutes_with_translations(&q, 1e-12).unwrap().pass);
}

#[test]
fn walk_first_step() {
    let w = hadamard_walk();
    let q = walk_qca(w).unwrap();
    let region = Region::line(5, Boundary::Quiescent).unwrap();
    let mut s = walk_particle(&region, 0, true, Limits::default()).unwrap();
    step(&mut s, &q).unwrap();
    let sites = walk_amplitudes(&s).unwrap();
    for site in &sites {
        let (u, d) = if site.x == 1 {
            (w.q, w.p)
        } else {
            (c(0.0, 0.0), c(0.0, 0.0))
        };
        assert!(
            (site.up - u).norm() < 1e-15 && (site.down - d).norm() < 1e-15,
            "{site:?}"
        );
    }
}

#[test]
fn walk_follows_recurrences() {
    let w = WalkParams::new(c(0.0, 0.6), c(0.8, 0.0), c(0.0, 1.0)).unwrap();
    let q = walk_qca(w).unwrap();
    let n = 24;
    let region = Region::line(n, Boundary::Quiescent).unwrap();
    let mut s = walk_particle(&region, 12, true, Limits::default()).unwrap();
    let mut rows = vec![];
    for t in 1..=10 {
        step(&mut s, &q).unwrap();
        let sites = walk_amplitudes(&s).unwrap();
        let (u, d) = recurrence(w.p, w.q, n, 12, t);
        for (i, site) in sites.iter().enumerate() {
            assert!((site.up - u[i]).norm() < 1e-12 && (site.down - d[i]).norm() < 1e-12);
        }
        let total: f64 = sites
            .iter()
            .map(|s| s.up.norm_sqr() + s.down.norm_sqr())
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
        rows.push((t as u64, sites));
    }
    let csv = walk_csv(&rows);
    assert!(csv.starts_with("# luqca-walk v1\nstep,x,p_up,p_down\n"));
    assert_eq!(csv.lines().count(), 2 + 10 * n);
}

// ---- shift-right

#[test]
fn shift_right_rotates_basis_states() {
    let q = shift_right_qca();
    assert!(validate_definition(&q, 1e-12).unwrap().pass);
    let r = ring(3);
    let data = [1, 0, 1];
    let a: Vec<Vec<usize>> = data.iter().map(|&d| vec![d, 0]).collect();
    for k in 1..=3 {
        let mut s = RegionState::basis(&r, q.layout(), &a, Limits::default()).unwrap();
        run(&mut s, &q, k).unwrap();
        let want: Vec<Vec<usize>> = (0..3).map(|x| vec![data[(x + 3 - k) % 3], 0]).collect();
        assert!((s.amplitude(&want).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn shift_right_moves_a_superposition() {
    let q = shift_right_qca();
    let region = Region::line(4, Boundary::Quiescent).unwrap();
    let mut s =
        RegionState::basis(&region, q.layout(), &vec![vec![0, 0]; 4], Limits::default()).unwrap();
    let (al, be) = (c(0.6, 0.0), c(0.0, 0.8));
    let psi = ComplexMatrix::from_rows(&[vec![al, be], vec![-be.conj(), al.conj()]]).unwrap();
    crate::engine::apply_local(&mut s, &psi.kron(&ComplexMatrix::identity(2)), &[vec![0]]).unwrap();
    run(&mut s, &q, 2).unwrap();
    let rho = reduced_density(&s, &[vec![2]]).unwrap();
    // data qubit of cell 2 is alpha|0> + beta|1>, buffer |0>
    let want = [al, c(0.0, 0.0), be, c(0.0, 0.0)];
    let fid: C64 = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| want[i].conj() * rho.get(i, j) * want[j])
        .sum();
    assert!((fid.re - 1.0).abs() < 1e-15);
}

// ---- amplification

/// Sign-valued brute force: `+1`, `-1`, `0` per cell of the cube.
fn sign_orbit(side: usize, flip: &[i32], start: Vec<i32>, periods: usize) -> Vec<i32> {
    let s = side as i64;
    let idx = |x: i64, y: i64, z: i64| ((x * s + y) * s + z) as usize;
    let mut v = start;
    for _ in 0..periods {
        for color in 0..2 {
            let old = v.clone();
            for x in 0..s {
                for y in 0..s {
                    for z in 0..s {
                        if (x + y + z) % 2 != color || old[idx(x, y, z)] == 0 {
                            continue;
                        }
                        let mut sum = 0;
                        for (dx, dy, dz) in [
                            (1, 0, 0),
                            (-1, 0, 0),
                            (0, 1, 0),
                            (0, -1, 0),
                            (0, 0, 1),
                            (0, 0, -1),
                        ] {
                            let (a, b, cc) = (x + dx, y + dy, z + dz);
                            if (0..s).contains(&a) && (0..s).contains(&b) && (0..s).contains(&cc) {
                                sum += old[idx(a, b, cc)];
                            }
                        }
                        if flip.contains(&sum) {
                            v[idx(x, y, z)] = -old[idx(x, y, z)];
                        }
                    }
                }
            }
        }
    }
    v
}

fn as_signs(spins: &[Spin]) -> Vec<i32> {
    spins.iter().map(|s| s.value()).collect()
}

#[test]
fn amplification_demo_matches_brute_force() {
    for side in [2, 3] {
        for flip in [vec![-2, -1, 0], vec![-2, -1, 0, 1]] {
            let mut spec = AmplificationSpec::new(side);
            spec.flip_set = flip.iter().copied().collect();
            let rep = amplification_demo(&spec).unwrap();
            let n = side.pow(3);
            let mut start = vec![-1; n];
            start[0] = 1;
            assert_eq!(
                as_signs(&rep.final_plus),
                sign_orbit(side, &flip, start, rep.steps)
            );
            assert_eq!(as_signs(&rep.final_minus), vec![-1; n]);
            let reached = as_signs(&rep.final_plus) == vec![1; n];
            assert_eq!(rep.reached_fixed_point, reached);
            let want_fid = if reached { 1.0 } else { 0.25 };
            assert!((rep.fidelity - want_fid).abs() < 1e-12, "{rep:?}");
        }
    }
}

#[test]
fn amplification_all_minus_is_fixed() {
    for side in [2, 3, 4] {
        let n = side * side * side;
        assert_eq!(sign_orbit(side, &[-2, -1, 0], vec![-1; n], 1), vec![-1; n]);
    }
    let spec = AmplificationSpec::new(3);
    let cqca = amplification_cqca(&spec).unwrap();
    let a = vec![vec![Spin::Minus.index()]; 27];
    let mut s = RegionState::basis(&spec.region(), cqca.layout(), &a, Limits::default())
        .unwrap()
        .into_sparse();
    cqca_period(&mut s, &cqca).unwrap();
    assert!((s.amplitude(&a).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn amplification_period_permutes_a_slab() {
    // 2x2x1 slab inside a quiescent exterior: every basis state goes to a basis state
    let spec = AmplificationSpec::new(2);
    let cqca = amplification_cqca(&spec).unwrap();
    let region = Region::new(vec![0, 0, 0], vec![1, 1, 0], Boundary::Quiescent).unwrap();
    let mut images = std::collections::HashSet::new();
    for x in 0..81usize {
        let a: Vec<Vec<usize>> = (0..4).map(|i| vec![x / 3usize.pow(3 - i) % 3]).collect();
        let mut s = RegionState::basis(&region, cqca.layout(), &a, Limits::default()).unwrap();
        cqca_period(&mut s, &cqca).unwrap();
        let e = s.entries();
        let nz: Vec<_> = e.iter().filter(|(_, z)| z.norm() > 0.0).collect();
        assert_eq!(nz.len(), 1);
        assert_eq!(nz[0].1, c(1.0, 0.0));
        assert!(images.insert(nz[0].0.clone()));
    }
}

#[test]
fn amplification_input_state() {
    let spec = AmplificationSpec::new(2);
    let s = amplification_state(&spec, Limits::default()).unwrap();
    let mut a = vec![vec![2]; 8];
    a[0] = vec![1];
    assert!((s.amplitude(&a).unwrap() - spec.alpha).norm() < 1e-15);
    a[0] = vec![2];
    assert!((s.amplitude(&a).unwrap() - spec.beta).norm() < 1e-15);
    let mut bad = AmplificationSpec::new(1);
    assert!(amplification_cqca(&bad).is_err());
    bad.side = 2;
    bad.flip_set.insert(7);
    assert!(amplification_cqca(&bad).is_err());
}
