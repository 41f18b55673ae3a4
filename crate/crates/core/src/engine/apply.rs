use std::collections::HashMap;
use std::sync::Arc;

use crate::engine::state::{Amplitudes, RegionState};
use crate::error::{structural, Error, Result};
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::model::{ClassicalControl, Coord, LocalOperator, QuantumAction, RegRef};

/// Compressed boundary operators, keyed by operator identity and padding mask.
#[derive(Default)]
pub(crate) struct PadCache {
    map: HashMap<(usize, Vec<bool>), (QuantumAction, bool)>,
}

/// Where each support cell of an operator lives.
pub(crate) struct Support {
    /// Region index, or `None` for a quiescent padding cell.
    pub cells: Vec<Option<usize>>,
    pub coords: Vec<Coord>,
}

impl Support {
    pub(crate) fn at(state: &RegionState, base: &[i64], offsets: &[Coord]) -> Self {
        let coords: Vec<Coord> = offsets
            .iter()
            .map(|o| o.iter().zip(base).map(|(a, b)| a + b).collect())
            .collect();
        let cells = coords.iter().map(|c| state.region.resolve(c)).collect();
        Self { cells, coords }
    }
}

const LEAK_TOL: f64 = 1e-12;

/// Applies `rule` on `support`. Padding cells are held at `quiescent`;
/// amplitude that would leave them raises [`Error::BoundaryLeak`].
pub(crate) fn apply_rule(
    state: &mut RegionState,
    rule: &dyn ClassicalControl,
    support: &Support,
    quiescent: Option<usize>,
    cache: &mut PadCache,
) -> Result<()> {
    let layout = state.layout.clone();
    let nc = layout.classical_registers().len();
    let has_pad = support.cells.iter().any(|c| c.is_none());
    let (q_cl, q_q) = match (has_pad, quiescent) {
        (false, _) => (vec![], vec![]),
        (true, None) => {
            return structural(format!(
            "the neighborhood of cell {:?} leaves the region and no quiescent state is declared",
            support.coords[0]
        ))
        }
        (true, Some(q)) => {
            let vals = layout.decode(q);
            let cl: Vec<usize> = layout
                .classical_registers()
                .iter()
                .map(|&r| vals[r])
                .collect();
            (cl, vals)
        }
    };

    let mut vals = Vec::with_capacity(nc * support.cells.len());
    for c in &support.cells {
        match c {
            Some(i) => vals.extend_from_slice(state.classical_of(*i)),
            None => vals.extend_from_slice(&q_cl),
        }
    }
    let before = vals.clone();
    let action = rule.act(&mut vals);
    for (k, c) in support.cells.iter().enumerate() {
        let chunk = &vals[k * nc..(k + 1) * nc];
        match c {
            Some(i) => state.classical[i * nc..(i + 1) * nc].copy_from_slice(chunk),
            None => {
                if chunk != &before[k * nc..(k + 1) * nc] {
                    return Err(Error::BoundaryLeak {
                        cell: support.coords[k].clone(),
                        lost: 1.0,
                    });
                }
            }
        }
    }

    let regs = action.registers();
    if regs.is_empty() {
        return Ok(());
    }
    let nq = layout.quantum_registers().len();
    let qpos: Vec<usize> = (0..layout.registers().len())
        .map(|r| layout.quantum_position(r).unwrap_or(0))
        .collect();
    let factor = |r: RegRef| support.cells[r.cell].unwrap() * nq + qpos[r.reg];
    let pad: Vec<RegRef> = regs
        .iter()
        .copied()
        .filter(|r| support.cells[r.cell].is_none())
        .collect();
    let first_pad =
        || support.coords[support.cells.iter().position(|c| c.is_none()).unwrap()].clone();

    if let Amplitudes::Sparse(_) = state.amps {
        return apply_sparse(state, &action, &regs, &pad, &q_q, &factor, first_pad);
    }

    if pad.is_empty() {
        let dims = state.dims.clone();
        if let Amplitudes::Dense(v) = &mut state.amps {
            action.apply(v, &dims, factor);
        }
        return Ok(());
    }

    // controls on padding cells are fixed at the quiescent values
    if let QuantumAction::Conditioned {
        targets,
        controls,
        table,
    } = &action
    {
        if pad.iter().all(|r| controls.contains(r)) {
            let reduced = reduce_controls(&layout, targets, controls, table, &pad, &q_q);
            let dims = state.dims.clone();
            if let Amplitudes::Dense(v) = &mut state.amps {
                reduced.apply(v, &dims, factor);
            }
            return Ok(());
        }
    }

    // general case: compress the action onto the inside registers
    let mask: Vec<bool> = support.cells.iter().map(|c| c.is_none()).collect();
    let key = match &action {
        QuantumAction::On { matrix, .. } => Some((Arc::as_ptr(matrix) as usize, mask)),
        QuantumAction::Conditioned { table, .. } => Some((Arc::as_ptr(table) as usize, mask)),
        QuantumAction::Identity => None,
    };
    let cached = key.as_ref().and_then(|k| cache.map.get(k).cloned());
    let (reduced, unitary) = match cached {
        Some(e) => e,
        None => {
            let is_pad = |r: RegRef| support.cells[r.cell].is_none();
            let e = match &action {
                QuantumAction::Conditioned {
                    targets,
                    controls,
                    table,
                } => {
                    let rc = reduce_controls(&layout, targets, controls, table, &pad, &q_q);
                    compress_conditioned(&layout, rc, &q_q, is_pad)
                }
                _ => {
                    let inside: Vec<RegRef> =
                        regs.iter().copied().filter(|r| !is_pad(*r)).collect();
                    let full = action.matrix_on(&layout, &regs);
                    let m = compress(&layout, &full, &regs, &q_q, is_pad);
                    let unitary = m.unitarity_residual() <= LEAK_TOL;
                    (
                        QuantumAction::On {
                            regs: inside,
                            matrix: Arc::new(m),
                        },
                        unitary,
                    )
                }
            };
            if let Some(k) = key {
                cache.map.insert(k, e.clone());
            }
            e
        }
    };
    let dims = state.dims.clone();
    let before = if unitary { 0.0 } else { state.norm().powi(2) };
    if let Amplitudes::Dense(v) = &mut state.amps {
        reduced.apply(v, &dims, factor);
    }
    if !unitary {
        let lost = before - state.norm().powi(2);
        if lost > LEAK_TOL {
            return Err(Error::BoundaryLeak {
                cell: first_pad(),
                lost,
            });
        }
    }
    Ok(())
}

/// Conditioned action whose controls are all inside: each table entry is
/// compressed onto the inside targets. Without inside targets the first
/// control becomes the target and carries the leftover scalars.
fn compress_conditioned(
    layout: &crate::model::CellLayout,
    action: QuantumAction,
    q_vals: &[usize],
    is_pad: impl Fn(RegRef) -> bool + Copy,
) -> (QuantumAction, bool) {
    let QuantumAction::Conditioned {
        targets,
        controls,
        table,
    } = action
    else {
        unreachable!()
    };
    let inside: Vec<RegRef> = targets.iter().copied().filter(|r| !is_pad(*r)).collect();
    let squash = |w: &ComplexMatrix| compress(layout, w, &targets, q_vals, is_pad);
    let mut unitary = true;
    if !inside.is_empty() || controls.is_empty() {
        let t: Vec<Option<Arc<ComplexMatrix>>> = table
            .iter()
            .map(|e| {
                e.as_ref().map(|w| {
                    let m = squash(w);
                    unitary &= m.unitarity_residual() <= LEAK_TOL;
                    Arc::new(m)
                })
            })
            .collect();
        if inside.is_empty() {
            // no registers left at all: a scalar
            let z = t[0].as_ref().map_or(C64::new(1.0, 0.0), |m| m.get(0, 0));
            return (
                QuantumAction::On {
                    regs: vec![],
                    matrix: Arc::new(ComplexMatrix::diagonal(&[z])),
                },
                unitary,
            );
        }
        return (
            QuantumAction::Conditioned {
                targets: inside,
                controls,
                table: Arc::new(t),
            },
            unitary,
        );
    }
    let d0 = layout.registers()[controls[0].reg].dim;
    let rest = table.len() / d0;
    let one = C64::new(1.0, 0.0);
    let mut t = Vec::with_capacity(rest);
    for r in 0..rest {
        let diag: Vec<C64> = (0..d0)
            .map(|v| {
                table[v * rest + r]
                    .as_ref()
                    .map_or(one, |w| squash(w).get(0, 0))
            })
            .collect();
        unitary &= diag.iter().all(|z| (z.norm() - 1.0).abs() <= LEAK_TOL);
        t.push(
            diag.iter()
                .any(|z| *z != one)
                .then(|| Arc::new(ComplexMatrix::diagonal(&diag))),
        );
    }
    let action = QuantumAction::Conditioned {
        targets: vec![controls[0]],
        controls: controls[1..].to_vec(),
        table: Arc::new(t),
    };
    (action, unitary)
}

/// `⟨q_pad| M |q_pad⟩` as a matrix on the non-padding registers.
fn compress(
    layout: &crate::model::CellLayout,
    full: &ComplexMatrix,
    regs: &[RegRef],
    q_vals: &[usize],
    is_pad: impl Fn(RegRef) -> bool,
) -> ComplexMatrix {
    let dims: Vec<usize> = regs.iter().map(|r| layout.registers()[r.reg].dim).collect();
    let inside: Vec<usize> = (0..regs.len()).filter(|&i| !is_pad(regs[i])).collect();
    let n_in: usize = inside.iter().map(|&i| dims[i]).product();
    let embed = |mut x: usize| {
        let mut digits = vec![0; regs.len()];
        for &i in inside.iter().rev() {
            digits[i] = x % dims[i];
            x /= dims[i];
        }
        for (i, r) in regs.iter().enumerate() {
            if is_pad(*r) {
                digits[i] = q_vals[r.reg];
            }
        }
        digits.iter().zip(&dims).fold(0, |a, (&d, &n)| a * n + d)
    };
    let idx: Vec<usize> = (0..n_in).map(embed).collect();
    let mut m = ComplexMatrix::zeros(n_in);
    for i in 0..n_in {
        for j in 0..n_in {
            m.set(i, j, full.get(idx[i], idx[j]));
        }
    }
    m
}

fn reduce_controls(
    layout: &crate::model::CellLayout,
    targets: &[RegRef],
    controls: &[RegRef],
    table: &Arc<Vec<Option<Arc<ComplexMatrix>>>>,
    pad: &[RegRef],
    q_vals: &[usize],
) -> QuantumAction {
    let cdims: Vec<usize> = controls
        .iter()
        .map(|r| layout.registers()[r.reg].dim)
        .collect();
    let keep: Vec<usize> = (0..controls.len())
        .filter(|&i| !pad.contains(&controls[i]))
        .collect();
    let n_keep: usize = keep.iter().map(|&i| cdims[i]).product();
    let mut new_table = Vec::with_capacity(n_keep);
    for mut x in 0..n_keep {
        let mut digits: Vec<usize> = controls.iter().map(|r| q_vals[r.reg]).collect();
        for &i in keep.iter().rev() {
            digits[i] = x % cdims[i];
            x /= cdims[i];
        }
        let idx = digits.iter().zip(&cdims).fold(0, |a, (&d, &n)| a * n + d);
        new_table.push(table[idx].clone());
    }
    QuantumAction::Conditioned {
        targets: targets.to_vec(),
        controls: keep.iter().map(|&i| controls[i]).collect(),
        table: Arc::new(new_table),
    }
}

/// Sparse application: every stored basis state is mapped through the
/// relevant matrix column.
fn apply_sparse(
    state: &mut RegionState,
    action: &QuantumAction,
    regs: &[RegRef],
    pad: &[RegRef],
    q_vals: &[usize],
    factor: &dyn Fn(RegRef) -> usize,
    first_pad: impl Fn() -> Coord,
) -> Result<()> {
    let layout = &state.layout;
    let dim_of = |r: &RegRef| layout.registers()[r.reg].dim;
    // (registers the matrix acts on, control registers and table)
    let (targets, controls, fixed, table): (
        Vec<RegRef>,
        Vec<RegRef>,
        Option<Arc<ComplexMatrix>>,
        _,
    ) = match action {
        QuantumAction::Identity => return Ok(()),
        QuantumAction::On { regs, matrix } => (regs.clone(), vec![], Some(matrix.clone()), None),
        QuantumAction::Conditioned {
            targets,
            controls,
            table,
        } => (targets.clone(), controls.clone(), None, Some(table.clone())),
    };
    let _ = regs;
    let tdims: Vec<usize> = targets.iter().map(dim_of).collect();
    let cdims: Vec<usize> = controls.iter().map(dim_of).collect();
    let is_pad = |r: &RegRef| pad.contains(r);
    let read = |key: &[u8], r: &RegRef| {
        if is_pad(r) {
            q_vals[r.reg]
        } else {
            key[factor(*r)] as usize
        }
    };

    let Amplitudes::Sparse(map) = &mut state.amps else {
        unreachable!()
    };
    let old = std::mem::take(map);
    let mut out: HashMap<Vec<u8>, C64> = HashMap::with_capacity(old.len());
    let mut leaked: HashMap<(Vec<u8>, Vec<u8>), C64> = HashMap::new();
    for (key, amp) in old {
        let m = match (&fixed, &table) {
            (Some(m), _) => Some(m.clone()),
            (None, Some(t)) => {
                let c = controls
                    .iter()
                    .zip(&cdims)
                    .fold(0, |a, (r, &n)| a * n + read(&key, r));
                t[c].clone()
            }
            _ => unreachable!(),
        };
        let Some(m) = m else {
            *out.entry(key).or_insert(ZERO) += amp;
            continue;
        };
        let col = targets
            .iter()
            .zip(&tdims)
            .fold(0, |a, (r, &n)| a * n + read(&key, r));
        for row in 0..m.dim() {
            let z = m.get(row, col);
            if z == ZERO {
                continue;
            }
            let mut k = key.clone();
            let mut pad_digits = Vec::new();
            let mut x = row;
            let mut digits = vec![0; targets.len()];
            for i in (0..targets.len()).rev() {
                digits[i] = x % tdims[i];
                x /= tdims[i];
            }
            let mut escaped = false;
            for (r, &d) in targets.iter().zip(&digits) {
                if is_pad(r) {
                    pad_digits.push(d as u8);
                    escaped |= d != q_vals[r.reg];
                } else {
                    k[factor(*r)] = d as u8;
                }
            }
            if escaped {
                *leaked.entry((k, pad_digits)).or_insert(ZERO) += amp * z;
            } else {
                *out.entry(k).or_insert(ZERO) += amp * z;
            }
        }
    }
    out.retain(|_, z| *z != ZERO);
    if out.len() > state.limits.max_amplitudes {
        return Err(Error::Resource(format!(
            "sparse state holds {} entries, above the cap {}",
            out.len(),
            state.limits.max_amplitudes
        )));
    }
    *map = out;
    let lost: f64 = leaked.values().map(|z| z.norm_sqr()).sum();
    if lost > LEAK_TOL {
        return Err(Error::BoundaryLeak {
            cell: first_pad(),
            lost,
        });
    }
    Ok(())
}

/// Applies a full-cell matrix `op` to the cells `support` (torus coordinates
/// wrap). Every support cell must lie in the region.
pub fn apply_local(state: &mut RegionState, op: &ComplexMatrix, support: &[Coord]) -> Result<()> {
    apply_operator(state, &LocalOperator::Matrix(op.clone()), support)
}

/// Applies a local operator to the cells `support`, all inside the region.
pub fn apply_operator(
    state: &mut RegionState,
    op: &LocalOperator,
    support: &[Coord],
) -> Result<()> {
    let cells: Vec<Option<usize>> = support.iter().map(|c| state.region.resolve(c)).collect();
    if let Some(k) = cells.iter().position(|c| c.is_none()) {
        return structural(format!(
            "support cell {:?} lies outside the region",
            support[k]
        ));
    }
    let mut seen = cells.clone();
    seen.sort();
    seen.dedup();
    if seen.len() != cells.len() {
        return structural("support cells must be distinct");
    }
    let rule = op.compile(&state.layout, support.len())?;
    let sup = Support {
        cells,
        coords: support.to_vec(),
    };
    apply_rule(state, rule.as_ref(), &sup, None, &mut PadCache::default())
}
