use std::path::Path;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use luqca::builders::*;
use luqca::coloring::cqca_period;
use luqca::engine::{run, step, Limits, ObservableTable, RegionState};
use luqca::linalg::{gates, herm_exp, C64};
use luqca::model::{Boundary, Region};

use crate::{write, CliResult, Failure};

#[derive(Clone, Copy, ValueEnum)]
pub enum DemoName {
    Ising,
    Heisenberg,
    Walk,
    Amplify,
    Shift,
}

pub fn random_state(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

fn verdict(pass: bool, what: &str) -> CliResult<()> {
    println!("{} {what}", if pass { "PASS" } else { "FAIL" });
    if pass {
        Ok(())
    } else {
        Err(Failure::semantic(format!("demo failed: {what}")))
    }
}

fn ising(steps: usize, seed: u64, out: Option<&Path>) -> CliResult<()> {
    let (j, dt, n) = (1.0, 0.1, 4);
    let q = ising_qca(j, dt)?;
    let ring = Region::line(n, Boundary::Torus)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps = random_state(1 << n, &mut rng);
    let mut s =
        RegionState::from_dense(&ring, q.layout(), vec![], amps.clone(), Limits::default())?;
    let mut table = ObservableTable::new("sigma_z");
    table.record(&s, &gates::pauli_z())?;
    for _ in 0..steps {
        step(&mut s, &q)?;
        table.record(&s, &gates::pauli_z())?;
    }
    let u = herm_exp(&ising_hamiltonian(j, n, true), dt * steps as f64)?;
    let want = u.apply(&amps);
    let dev = s
        .dense()
        .unwrap()
        .iter()
        .zip(&want)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("Ising ring of {n}, J = {j}, dt = {dt}, {steps} steps");
    println!("max deviation from exp(-iHt): {dev:.3e}");
    if let Some(dir) = out {
        write(&dir.join("ising_sigma_z.csv"), &table.to_csv())?;
    }
    verdict(
        dev < 1e-9,
        "engine matches the dense exponential within 1e-9",
    )
}

fn heisenberg() -> CliResult<()> {
    let (j, dt, n) = (1.0, 0.2, 4);
    let ks = [2, 4, 8, 16];
    let mut errs = vec![];
    for k in ks {
        let e = trotter_error(j, dt, k, n)?;
        println!("k = {k:<3} error {e:.6e}");
        errs.push(e);
    }
    let ratios: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    println!("ratios {ratios:.4?}");
    verdict(
        ratios[1..].iter().all(|r| (1.6..=2.4).contains(r)),
        "error(k)/error(2k) in [1.6, 2.4] for k = 4, 8",
    )
}

fn walk(steps: usize, out: Option<&Path>) -> CliResult<()> {
    let w = WalkParams::new(C64::new(0.0, 0.6), C64::new(0.8, 0.0), C64::new(0.0, 1.0))?;
    let q = walk_qca(w)?;
    let n = 2 * steps + 4;
    let region = Region::line(n, Boundary::Quiescent)?;
    let mut s = walk_particle(&region, (n / 2) as i64, true, Limits::default())?;
    let mut rows = vec![(0u64, walk_amplitudes(&s)?)];
    let mut worst: f64 = 0.0;
    for t in 1..=steps {
        step(&mut s, &q)?;
        let sites = walk_amplitudes(&s)?;
        let total: f64 = sites
            .iter()
            .map(|x| x.up.norm_sqr() + x.down.norm_sqr())
            .sum();
        worst = worst.max((total - 1.0).abs());
        rows.push((t as u64, sites));
    }
    println!("walk on {n} sites, {steps} steps, mass {:.3}", w.mass());
    println!("largest probability deviation {worst:.3e}");
    if let Some(dir) = out {
        write(&dir.join("walk.csv"), &walk_csv(&rows))?;
    }
    verdict(
        worst < 1e-12,
        "total probability is 1 within 1e-12 every step",
    )
}

fn amplify(side: usize, flip_set: Option<Vec<i32>>, out: Option<&Path>) -> CliResult<()> {
    let mut spec = AmplificationSpec::new(side);
    if let Some(f) = flip_set {
        spec.flip_set = f.into_iter().collect();
    }
    let rep = amplification_demo(&spec)?;
    println!(
        "cube side {side}, flip set {:?}: {} after {} periods{}",
        spec.flip_set,
        if rep.reached_fixed_point {
            "reached all +1"
        } else {
            "did not reach all +1"
        },
        rep.steps,
        if rep.cycled { " (orbit cycles)" } else { "" }
    );
    println!("flips per period {:?}", rep.flips);
    println!("fidelity to a|+...+> + b|-...-> {:.6}", rep.fidelity);
    // the superposed input evolves by linearity into the two orbits
    let cqca = amplification_cqca(&spec)?;
    let mut s = amplification_state(&spec, Limits::default())?.into_sparse();
    for _ in 0..rep.steps {
        cqca_period(&mut s, &cqca)?;
    }
    let plus: Vec<Vec<usize>> = rep.final_plus.iter().map(|x| vec![x.index()]).collect();
    let minus: Vec<Vec<usize>> = rep.final_minus.iter().map(|x| vec![x.index()]).collect();
    let linear = s.amplitude(&plus)? == spec.alpha
        && s.amplitude(&minus)? == spec.beta
        && s.entries().iter().filter(|(_, z)| z.norm() > 0.0).count() == 2;
    if let Some(dir) = out {
        write(
            &dir.join(format!("amplification_s{side}.csv")),
            &rep.to_csv(),
        )?;
    }
    verdict(
        linear,
        "superposed corner evolves into a*orbit(+1) + b*orbit(-1)",
    )
}

fn shift(steps: Option<usize>, seed: u64) -> CliResult<()> {
    let q = shift_right_qca();
    let n = 6;
    let k = steps.unwrap_or(n);
    let ring = Region::line(n, Boundary::Torus)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<usize> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let a: Vec<Vec<usize>> = data.iter().map(|&d| vec![d, 0]).collect();
    let mut s = RegionState::basis(&ring, q.layout(), &a, Limits::default())?;
    run(&mut s, &q, k)?;
    let want: Vec<Vec<usize>> = (0..n).map(|x| vec![data[(x + n * k - k) % n], 0]).collect();
    let fid = s.amplitude(&want)?.norm_sqr();
    println!("data {data:?} shifted {k} cells on a ring of {n}: fidelity {fid}");
    verdict((fid - 1.0).abs() <= 1e-15, "shift fidelity 1 within 1e-15")
}

pub fn run_demo(
    name: DemoName,
    steps: Option<usize>,
    side: usize,
    flip_set: Option<Vec<i32>>,
    seed: u64,
    out: Option<&Path>,
) -> CliResult<()> {
    match name {
        DemoName::Ising => ising(steps.unwrap_or(5), seed, out),
        DemoName::Heisenberg => heisenberg(),
        DemoName::Walk => walk(steps.unwrap_or(30), out),
        DemoName::Amplify => amplify(side, flip_set, out),
        DemoName::Shift => shift(steps, seed),
    }
}
