use std::collections::HashMap;

use crate::engine::state::{Amplitudes, RegionState};
use crate::error::{invalid, Result};
use crate::linalg::kernel::{factor_offsets, for_each_base, strides};
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::model::Coord;

/// Reduced density matrix of the quantum registers of `cells` (in the given
/// order), normalised to unit trace.
pub fn reduced_density(state: &RegionState, cells: &[Coord]) -> Result<ComplexMatrix> {
    let mut factors = Vec::new();
    for c in cells {
        let i = state
            .cell_index(c)
            .ok_or_else(|| crate::Error::Invalid(format!("cell {c:?} is outside the region")))?;
        for &r in state.layout.quantum_registers() {
            factors.push(state.factor(i, r));
        }
    }
    let mut sorted = factors.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != factors.len() {
        return invalid("cells must be distinct");
    }
    let fd: Vec<usize> = factors.iter().map(|&f| state.dims[f]).collect();
    let n: usize = fd.iter().product();
    let mut rho = ComplexMatrix::zeros(n);
    let mut acc = |v: &[C64]| {
        for i in 0..n {
            if v[i] == ZERO {
                continue;
            }
            for j in 0..n {
                let z = rho.get(i, j) + v[i] * v[j].conj();
                rho.set(i, j, z);
            }
        }
    };
    match &state.amps {
        Amplitudes::Dense(amps) => {
            let st = strides(&state.dims);
            let offs = factor_offsets(&state.dims, &st, &factors);
            let mut buf = vec![ZERO; n];
            for_each_base(&state.dims, &st, &factors, |base| {
                for (b, &o) in buf.iter_mut().zip(&offs) {
                    *b = amps[base + o];
                }
                acc(&buf);
            });
        }
        Amplitudes::Sparse(map) => {
            let mut groups: HashMap<Vec<u8>, Vec<C64>> = HashMap::new();
            for (k, &z) in map {
                let mut rest = k.clone();
                let mut sub = 0;
                for (&f, &d) in factors.iter().zip(&fd) {
                    sub = sub * d + k[f] as usize;
                    rest[f] = 0;
                }
                groups.entry(rest).or_insert_with(|| vec![ZERO; n])[sub] += z;
            }
            for v in groups.values() {
                acc(v);
            }
        }
    }
    let tr: f64 = (0..n).map(|i| rho.get(i, i).re).sum();
    if tr <= 0.0 {
        return invalid("state has zero norm");
    }
    Ok(rho.scale(C64::new(1.0 / tr, 0.0)))
}

/// Reduced state `ρ_x` of one cell over its full basis; classical registers
/// contribute their definite value.
pub fn observe(state: &RegionState, cell: &[i64]) -> Result<ComplexMatrix> {
    let i = state
        .cell_index(cell)
        .ok_or_else(|| crate::Error::Invalid(format!("cell {cell:?} is outside the region")))?;
    let rq = reduced_density(state, &[cell.to_vec()])?;
    let layout = &state.layout;
    let c = layout.classical_index(state.classical_of(i));
    let mut rho = ComplexMatrix::zeros(layout.cell_dimension());
    let q = layout.quantum_dimension();
    for a in 0..q {
        for b in 0..q {
            rho.set(layout.join(c, a), layout.join(c, b), rq.get(a, b));
        }
    }
    Ok(rho)
}

/// `tr(ρ_x O)` for a Hermitian observable on the full cell basis.
pub fn expectation(state: &RegionState, cell: &[i64], observable: &ComplexMatrix) -> Result<f64> {
    let d = state.layout.cell_dimension();
    if observable.dim() != d {
        return invalid(format!("observable must be {d}x{d}"));
    }
    if observable.hermiticity_residual() > 1e-10 * observable.frobenius_norm().max(1.0) {
        return invalid("observable is not Hermitian");
    }
    let rho = observe(state, cell)?;
    Ok((&rho * observable)
        .data()
        .iter()
        .step_by(d + 1)
        .map(|z| z.re)
        .sum())
}
