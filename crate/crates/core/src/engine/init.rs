use std::collections::BTreeMap;

use crate::engine::state::{Amplitudes, Limits, RegionState};
use crate::error::{invalid, structural, Result};
use crate::linalg::{C64, ONE, ZERO};
use crate::model::{BlockInitializer, CellLayout, Coord, Fill, QcaDefinition, Region};

/// Product of the initializer's block states over `region`.
pub fn init_region(
    init: &BlockInitializer,
    region: &Region,
    qca: &QcaDefinition,
) -> Result<RegionState> {
    init_region_with(
        init,
        region,
        qca.layout(),
        qca.quiescent(),
        Limits::default(),
    )
}

pub fn init_region_with(
    init: &BlockInitializer,
    region: &Region,
    layout: &CellLayout,
    quiescent: Option<usize>,
    limits: Limits,
) -> Result<RegionState> {
    if init.dimension() != region.dimension() {
        return structural("initializer and region dimensions differ");
    }
    let fill = match init.fill() {
        Fill::Quiescent => quiescent.ok_or_else(|| {
            crate::Error::Structural("fill is quiescent but no quiescent state is declared".into())
        })?,
        Fill::Basis(i) => i,
    };
    if fill >= layout.cell_dimension() {
        return invalid(format!("fill state {fill} out of range"));
    }
    let d = layout.cell_dimension();
    let nc = layout.classical_registers().len();
    let nq = layout.quantum_registers().len();
    let qd = layout.quantum_dimension();
    let n_cells = region.len();

    // groups of region cells with a joint quantum vector over them
    let mut groups: Vec<(Vec<usize>, Vec<C64>)> = Vec::new();
    let mut classical = vec![0usize; nc * n_cells];
    let mut covered = vec![false; n_cells];
    let (fill_c, fill_q) = layout.split(fill);
    for (b, psi) in init.blocks() {
        let cells = init.block_cells(b);
        let idx: Vec<Option<usize>> = cells.iter().map(|c| region.index_of(c)).collect();
        if idx.iter().all(|i| i.is_none()) {
            continue;
        }
        if idx.iter().any(|i| i.is_none()) {
            return invalid(format!("block {b:?} is only partly inside the region"));
        }
        let k = cells.len();
        if psi.len() != d.pow(k as u32) {
            return invalid(format!(
                "block {b:?} state has {} entries, expected {}",
                psi.len(),
                d.pow(k as u32)
            ));
        }
        let (cls, q) = split_block(layout, k, psi, b)?;
        let idx: Vec<usize> = idx.into_iter().map(Option::unwrap).collect();
        for (j, &i) in idx.iter().enumerate() {
            classical[i * nc..(i + 1) * nc].copy_from_slice(&layout.classical_values(cls[j]));
            covered[i] = true;
        }
        groups.push((idx, q));
    }
    for i in 0..n_cells {
        if !covered[i] {
            classical[i * nc..(i + 1) * nc].copy_from_slice(&layout.classical_values(fill_c));
            let mut v = vec![ZERO; qd];
            v[fill_q] = ONE;
            groups.push((vec![i], v));
        }
    }

    let mut state = RegionState::empty(region, layout, classical, limits)?;
    // sparse product: digits per factor
    let per_reg: Vec<usize> = layout
        .quantum_registers()
        .iter()
        .map(|&r| layout.registers()[r].dim)
        .collect();
    let mut entries: Vec<(Vec<usize>, C64)> = vec![(vec![0; n_cells * nq], ONE)];
    for (cells, v) in &groups {
        let mut next = Vec::new();
        for (digits, a) in &entries {
            for (x, &z) in v.iter().enumerate() {
                if z == ZERO {
                    continue;
                }
                let mut dg = digits.clone();
                let mut rem = x;
                for &cell in cells.iter().rev() {
                    let mut cq = rem % qd;
                    rem /= qd;
                    for k in (0..nq).rev() {
                        dg[cell * nq + k] = cq % per_reg[k];
                        cq /= per_reg[k];
                    }
                }
                next.push((dg, a * z));
            }
        }
        if next.len() > limits.max_amplitudes {
            return Err(crate::Error::Resource(
                "initial state has too many nonzero amplitudes".into(),
            ));
        }
        entries = next;
    }
    let dims = state.dims.clone();
    match &mut state.amps {
        Amplitudes::Dense(vec) => {
            for (dg, z) in entries {
                vec[dg.iter().zip(&dims).fold(0, |a, (&x, &n)| a * n + x)] = z;
            }
        }
        Amplitudes::Sparse(map) => {
            for (dg, z) in entries {
                map.insert(dg.iter().map(|&x| x as u8).collect(), z);
            }
        }
    }
    Ok(state)
}

/// Splits a block vector into definite per-cell classical indices and a
/// quantum vector over the block's quantum registers.
fn split_block(
    layout: &CellLayout,
    k: usize,
    psi: &[C64],
    b: &Coord,
) -> Result<(Vec<usize>, Vec<C64>)> {
    let d = layout.cell_dimension();
    let qd = layout.quantum_dimension();
    let mut cls: Option<Vec<usize>> = None;
    let mut q = vec![ZERO; qd.pow(k as u32)];
    for (idx, &z) in psi.iter().enumerate() {
        if z == ZERO {
            continue;
        }
        let mut rem = idx;
        let mut c = vec![0; k];
        let mut qi = vec![0; k];
        for j in (0..k).rev() {
            let (cc, qq) = layout.split(rem % d);
            c[j] = cc;
            qi[j] = qq;
            rem /= d;
        }
        match &cls {
            None => cls = Some(c),
            Some(prev) if *prev != c => {
                return invalid(format!("block {b:?} superposes classical register values"));
            }
            _ => {}
        }
        q[qi.iter().fold(0, |a, &x| a * qd + x)] = z;
    }
    Ok((cls.unwrap_or_else(|| vec![0; k]), q))
}

/// Convenience: a product of single-cell basis states given by a map from
/// cell to basis index; other cells get `fill`.
pub fn basis_cells(
    region: &Region,
    layout: &CellLayout,
    fill: usize,
    cells: &BTreeMap<Coord, usize>,
    limits: Limits,
) -> Result<RegionState> {
    let assignment: Vec<Vec<usize>> = region
        .cells()
        .iter()
        .map(|c| layout.decode(*cells.get(c).unwrap_or(&fill)))
        .collect();
    RegionState::basis(region, layout, &assignment, limits)
}
