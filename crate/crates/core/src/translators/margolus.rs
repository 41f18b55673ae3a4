use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::{Limits, RegionState};
use crate::error::{invalid, Result};
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::model::{
    CellLayout, ClassicalControl, LocalOperator, NeighborhoodScheme, QcaDefinition, QuantumAction,
    RegRef, Region, Register,
};

/// Two-stage block automaton on `Z^dim` with cell alphabet `cell`.
///
/// Corners `v ∈ {0,1}^dim` are numbered in lexicographic order. Stage 0 maps
/// the data of each block `2z + {0,1}^dim` through `u0` onto
/// `A_0 ⊗ … ⊗ A_{2^dim−1}` (dimensions `algebras`), with `A_v` held at cell
/// `2z + v`. Stage 1 gathers, for the block `2z + 1 + {0,1}^dim`, the
/// algebra held at each of its cells in lexicographic order and maps them
/// through `u1` back onto cell data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MargolusDef {
    pub dim: usize,
    pub cell: usize,
    pub algebras: Vec<usize>,
    pub u0: ComplexMatrix,
    pub u1: ComplexMatrix,
}

impl MargolusDef {
    pub fn new(
        dim: usize,
        cell: usize,
        algebras: Vec<usize>,
        u0: ComplexMatrix,
        u1: ComplexMatrix,
    ) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return invalid("dimension must be 1, 2 or 3");
        }
        let corners = 1 << dim;
        if cell < 2 || algebras.len() != corners || algebras.contains(&0) {
            return invalid(format!(
                "need a cell alphabet of at least 2 and {corners} nonzero algebra dimensions"
            ));
        }
        let n = cell.pow(corners as u32);
        if algebras.iter().product::<usize>() != n {
            return invalid(format!("algebra dimensions must multiply to {n}"));
        }
        for (name, u) in [("u0", &u0), ("u1", &u1)] {
            if u.dim() != n {
                return invalid(format!("{name} must be {n}x{n}"));
            }
            if u.unitarity_residual() > 1e-10 {
                return invalid(format!("{name} is not unitary"));
            }
        }
        Ok(Self {
            dim,
            cell,
            algebras,
            u0,
            u1,
        })
    }

    fn corners(&self) -> usize {
        1 << self.dim
    }

    /// Corner index of cell `x` in its stage-0 block.
    pub fn corner_of(&self, x: &[i64]) -> usize {
        x.iter().fold(0, |a, &c| a * 2 + c.rem_euclid(2) as usize)
    }
}

/// Cell layout: `data`, one memory register `m{v}` per corner with `a_v > 1`,
/// classical `corner` and `clock`.
pub fn margolus_layout(m: &MargolusDef) -> CellLayout {
    let mut regs = vec![Register::quantum("data", m.cell)];
    for (v, &a) in m.algebras.iter().enumerate() {
        if a > 1 {
            regs.push(Register::quantum(&format!("m{v}"), a));
        }
    }
    regs.push(Register::classical("corner", m.corners()));
    regs.push(Register::classical("clock", 2));
    CellLayout::new(regs).unwrap()
}

struct Stages {
    corners: usize,
    /// Register index of the memory for corner `v`, if any.
    mem: Vec<Option<usize>>,
    stage0: Arc<ComplexMatrix>,
    stage1: Arc<ComplexMatrix>,
}

impl ClassicalControl for Stages {
    fn act(&self, v: &mut [usize]) -> QuantumAction {
        // per cell: corner, clock; support cell w is the block corner w
        let corner = |w: usize| v[w * 2];
        let clock = |w: usize| v[w * 2 + 1];
        let t = clock(0);
        let anchor = if t == 0 { 0 } else { self.corners - 1 };
        if corner(0) != anchor
            || (0..self.corners).any(|w| clock(w) != t || corner(w) != anchor ^ w)
        {
            return QuantumAction::Identity;
        }
        let data: Vec<RegRef> = (0..self.corners).map(|w| RegRef::new(w, 0)).collect();
        // algebra held at block cell w: corner w at stage 0, corner !w at stage 1
        let mems: Vec<RegRef> = (0..self.corners)
            .filter_map(|w| self.mem[anchor ^ w].map(|r| RegRef::new(w, r)))
            .collect();
        if t == 0 {
            QuantumAction::On {
                regs: [data, mems].concat(),
                matrix: self.stage0.clone(),
            }
        } else {
            QuantumAction::On {
                regs: [mems, data].concat(),
                matrix: self.stage1.clone(),
            }
        }
    }

    fn name(&self) -> String {
        "margolus-stages".into()
    }
}

/// Two steps of the result are one period of `m`: stage 0 moves block data
/// into the corner memories and applies `u0`, stage 1 applies `u1` to the
/// gathered memories and moves the result back into data.
pub fn margolus_to_luqca(m: &MargolusDef) -> Result<QcaDefinition> {
    let m = MargolusDef::new(
        m.dim,
        m.cell,
        m.algebras.clone(),
        m.u0.clone(),
        m.u1.clone(),
    )?;
    let layout = margolus_layout(&m);
    let n = m.u0.dim();
    // exchange |i>|j> <-> |j>|i> on two spaces of dimension n
    let swap = ComplexMatrix::permutation(n * n, |x| (x % n) * n + x / n);
    let id = ComplexMatrix::identity(n);
    let stage0 = &id.kron(&m.u0) * &swap;
    let stage1 = &swap * &m.u1.kron(&id);
    let mem = m
        .algebras
        .iter()
        .enumerate()
        .map(|(v, &a)| (a > 1).then(|| layout.register_index(&format!("m{v}")).unwrap()))
        .collect();
    let block: Vec<Vec<i64>> = (0..m.corners())
        .map(|w| {
            (0..m.dim)
                .map(|a| ((w >> (m.dim - 1 - a)) & 1) as i64)
                .collect()
        })
        .collect();
    let rule = Stages {
        corners: m.corners(),
        mem,
        stage0: Arc::new(stage0),
        stage1: Arc::new(stage1),
    };
    QcaDefinition::new(
        layout,
        NeighborhoodScheme::new(m.dim, block)?,
        LocalOperator::controlled(rule),
        LocalOperator::controlled(Tick),
        None,
    )
}

struct Tick;

impl ClassicalControl for Tick {
    fn act(&self, v: &mut [usize]) -> QuantumAction {
        v[1] ^= 1;
        QuantumAction::Identity
    }

    fn name(&self) -> String {
        "clock-tick".into()
    }
}

/// Translated state for data amplitudes `data` over the cells of `region`
/// (lexicographic, first cell most significant): memories empty, corner
/// labels set, clock 0.
pub fn margolus_state(
    m: &MargolusDef,
    region: &Region,
    data: &[C64],
    limits: Limits,
) -> Result<RegionState> {
    let layout = margolus_layout(m);
    let n = region.len();
    if region.dimension() != m.dim || (0..m.dim).any(|a| !region.axis_len(a).is_multiple_of(2)) {
        return invalid("region must have the automaton's dimension and even sides");
    }
    if data.len() as u128 != (m.cell as u128).pow(n as u32) {
        return invalid("data vector does not match the region");
    }
    let classical = region
        .cells()
        .iter()
        .flat_map(|x| [m.corner_of(x), 0])
        .collect();
    let mut s = RegionState::empty(region, &layout, classical, limits)?;
    let nq = layout.quantum_registers().len();
    let mut digits = vec![0; n * nq];
    for (i, &z) in data.iter().enumerate() {
        if z == ZERO {
            continue;
        }
        let mut x = i;
        for c in (0..n).rev() {
            digits[c * nq] = x % m.cell;
            x /= m.cell;
        }
        s.set_amplitude_digits(&digits, z);
    }
    Ok(s)
}

/// Data amplitudes of a translated state, memories at `|0⟩`.
pub fn margolus_data(m: &MargolusDef, state: &RegionState) -> Result<Vec<C64>> {
    if state.layout() != &margolus_layout(m) {
        return invalid("state does not carry the Margolus layout");
    }
    let n = state.region().len();
    let nq = state.layout().quantum_registers().len();
    let total = m
        .cell
        .checked_pow(n as u32)
        .ok_or_else(|| crate::Error::Resource("data space too large".into()))?;
    let mut out = vec![ZERO; total];
    let mut digits = vec![0; n * nq];
    for (i, z) in out.iter_mut().enumerate() {
        let mut x = i;
        for c in (0..n).rev() {
            digits[c * nq] = x % m.cell;
            x /= m.cell;
        }
        *z = state.amplitude_digits(&digits);
    }
    Ok(out)
}
