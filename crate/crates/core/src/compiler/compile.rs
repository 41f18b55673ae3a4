use std::collections::BTreeMap;

use crate::compiler::circuit::{Circuit, Gate};
use crate::engine::read_sites;
use crate::error::{structural, Result};
use crate::linalg::ComplexMatrix;
use crate::model::{Coord, QcaDefinition, Region};

const UNITARY_TOL: f64 = 1e-10;

/// Matrix on the inside cells of a support, with the padding cells held at
/// the quiescent state `q`. Cells have dimension `d`.
fn restrict(full: &ComplexMatrix, inside: &[bool], d: usize, q: usize) -> ComplexMatrix {
    let k = inside.len();
    let n_in = d.pow(inside.iter().filter(|&&b| b).count() as u32);
    let embed = |mut x: usize| {
        let mut digits = vec![q; k];
        for i in (0..k).rev().filter(|&i| inside[i]) {
            digits[i] = x % d;
            x /= d;
        }
        digits.iter().fold(0, |a, &v| a * d + v)
    };
    let idx: Vec<usize> = (0..n_in).map(embed).collect();
    let mut m = ComplexMatrix::zeros(n_in);
    for (i, &r) in idx.iter().enumerate() {
        for (j, &c) in idx.iter().enumerate() {
            m.set(i, j, full.get(r, c));
        }
    }
    m
}

/// Groups `sites` into sub-layers of pairwise disjoint supports: first by
/// coordinates modulo the neighborhood diameter, then greedily where a torus
/// wraps a class onto itself.
fn sublayers(sites: &[(Coord, Vec<usize>)], qca: &QcaDefinition) -> Vec<Vec<usize>> {
    let n = qca.neighborhood();
    let mut classes: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, (x, _)) in sites.iter().enumerate() {
        let key = x
            .iter()
            .enumerate()
            .map(|(a, v)| v.rem_euclid(n.diameter(a) as i64))
            .collect();
        classes.entry(key).or_default().push(i);
    }
    let mut out = Vec::new();
    for members in classes.into_values() {
        let mut layers: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        for i in members {
            let wires = &sites[i].1;
            match layers
                .iter_mut()
                .find(|(_, used)| wires.iter().all(|w| !used.contains(w)))
            {
                Some((l, used)) => {
                    l.push(i);
                    used.extend(wires);
                }
                None => layers.push((vec![i], wires.clone())),
            }
        }
        out.extend(layers.into_iter().map(|(l, _)| l));
    }
    out
}

/// Layered circuit for `t` steps on `region`: one wire per cell (the full
/// cell, classical registers included), the read operators of a step split
/// into sub-layers of disjoint supports, then one layer of update operators.
/// The layers per step depend only on the neighborhood (and, on a torus, on
/// whether the side is a multiple of the diameter).
pub fn compile_to_circuit(qca: &QcaDefinition, region: &Region, t: usize) -> Result<Circuit> {
    region.check_against(qca.neighborhood())?;
    let d = qca.layout().cell_dimension();
    let k = qca.neighborhood().len();
    let u0 = qca.u0().to_dense(qca.layout(), k)?;
    let v0 = qca.v0().to_dense(qca.layout(), 1)?;

    let mut sites: Vec<(Coord, Vec<usize>)> = Vec::new();
    let mut gates: Vec<ComplexMatrix> = Vec::new();
    for x in read_sites(region, qca) {
        let cells: Vec<Option<usize>> = qca
            .neighborhood()
            .offsets()
            .iter()
            .map(|o| region.resolve(&x.iter().zip(o).map(|(a, b)| a + b).collect::<Vec<_>>()))
            .collect();
        let inside: Vec<bool> = cells.iter().map(|c| c.is_some()).collect();
        let m = if inside.iter().all(|&b| b) {
            u0.clone()
        } else {
            let q = qca
                .quiescent()
                .expect("read sites leave the region only with a quiescent state");
            let m = restrict(&u0, &inside, d, q);
            if m.unitarity_residual() > UNITARY_TOL {
                return structural(format!(
                    "read operator at {x:?} moves amplitude out of the region; enlarge it or use a torus"
                ));
            }
            m
        };
        sites.push((x, cells.into_iter().flatten().collect()));
        gates.push(m);
    }
    let plan = sublayers(&sites, qca);

    let mut c = Circuit::new(vec![d; region.len()]);
    for _ in 0..t {
        for layer in &plan {
            let gs = layer
                .iter()
                .map(|&i| Gate::new("U", sites[i].1.clone(), gates[i].clone()))
                .collect();
            c.push_layer(gs)?;
        }
        c.push_layer(
            (0..region.len())
                .map(|w| Gate::new("V", vec![w], v0.clone()))
                .collect(),
        )?;
    }
    Ok(c)
}
