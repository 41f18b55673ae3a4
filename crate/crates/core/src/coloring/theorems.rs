use std::collections::BTreeSet;
use std::sync::Arc;

use crate::coloring::coloring::Coloring;
use crate::coloring::cqca::{cnot_on, CqcaDefinition};
use crate::engine::RegionState;
use crate::error::{invalid, structural, Result};
use crate::linalg::ComplexMatrix;
use crate::model::{
    CellLayout, ClassicalControl, Coord, FixedAction, LocalOperator, NeighborhoodScheme,
    QcaDefinition, QuantumAction, RegRef, Register,
};

/// Read rule of the translated automaton: phase `j` fires at a cell whose
/// color is `c_j`, whose clock is `j`, whose neighbors carry a color pattern
/// that occurs in the coloring, and whose neighbors' clocks all equal `j`.
struct ClockedPhases {
    nc: usize,
    k: usize,
    center: usize,
    colors: Vec<usize>,
    patterns: BTreeSet<Vec<usize>>,
    rules: Vec<Arc<dyn ClassicalControl>>,
}

impl ClassicalControl for ClockedPhases {
    fn act(&self, vals: &mut [usize]) -> QuantumAction {
        let w = self.nc + 2;
        let color = |i: usize| vals[i * w + self.nc];
        let clock = |i: usize| vals[i * w + self.nc + 1];
        let j = clock(self.center);
        if j >= self.colors.len() || color(self.center) != self.colors[j] {
            return QuantumAction::Identity;
        }
        if (0..self.k).any(|i| clock(i) != j) {
            return QuantumAction::Identity;
        }
        let pattern: Vec<usize> = (0..self.k).map(color).collect();
        if !self.patterns.contains(&pattern) {
            return QuantumAction::Identity;
        }
        let mut inner: Vec<usize> = (0..self.k)
            .flat_map(|i| vals[i * w..i * w + self.nc].to_vec())
            .collect();
        let action = self.rules[j].act(&mut inner);
        for i in 0..self.k {
            vals[i * w..i * w + self.nc].copy_from_slice(&inner[i * self.nc..(i + 1) * self.nc]);
        }
        action
    }

    fn name(&self) -> String {
        "clocked-phases".into()
    }
}

/// Update rule of the translated automaton: advance the clock.
struct ClockTick {
    nc: usize,
    period: usize,
}

impl ClassicalControl for ClockTick {
    fn act(&self, vals: &mut [usize]) -> QuantumAction {
        let t = &mut vals[self.nc + 1];
        *t = (*t + 1) % self.period;
        QuantumAction::Identity
    }

    fn name(&self) -> String {
        "clock-tick".into()
    }
}

fn fresh_name(layout: &CellLayout, base: &str) -> String {
    let mut name = base.to_string();
    while layout.register_index(&name).is_some() {
        name.push('\'');
    }
    name
}

/// Plain QCA simulating a colored one: each cell gains classical `color`
/// (dimension k) and `clock` (dimension T) registers, placed after the
/// original ones. `T` steps of the result equal one period of the input on
/// states prepared with [`lift_state`].
pub fn cqca_to_qca(cqca: &CqcaDefinition) -> Result<QcaDefinition> {
    let orig = cqca.layout();
    let mut regs = orig.registers().to_vec();
    regs.push(Register::classical(
        &fresh_name(orig, "color"),
        cqca.coloring().k(),
    ));
    regs.push(Register::classical(
        &fresh_name(orig, "clock"),
        cqca.period(),
    ));
    let layout = CellLayout::new(regs)?;
    let n = cqca.neighborhood().clone();
    let nc = orig.classical_registers().len();
    let u = ClockedPhases {
        nc,
        k: n.len(),
        center: n.zero_index(),
        colors: cqca.colors().to_vec(),
        patterns: cqca.coloring().patterns(n.offsets()).into_iter().collect(),
        rules: (0..cqca.period()).map(|j| cqca.rule(j).clone()).collect(),
    };
    let v = ClockTick {
        nc,
        period: cqca.period(),
    };
    QcaDefinition::new(
        layout,
        n,
        LocalOperator::controlled(u),
        LocalOperator::controlled(v),
        None,
    )
}

/// Adds `color = C(x)` and `clock = 0` to every cell of a CQCA state.
pub fn lift_state(
    state: &RegionState,
    cqca: &CqcaDefinition,
    qca: &QcaDefinition,
) -> Result<RegionState> {
    if state.layout() != cqca.layout() {
        return structural("state layout differs from the CQCA layout");
    }
    let nc = cqca.layout().classical_registers().len();
    let mut classical = Vec::with_capacity((nc + 2) * state.region().len());
    for (i, x) in state.cells().iter().enumerate() {
        classical.extend_from_slice(state.classical_of(i));
        classical.push(cqca.coloring().color(x));
        classical.push(0);
    }
    let mut out = state.clone();
    out.layout = qca.layout().clone();
    out.classical = classical;
    Ok(out)
}

/// Drops the color and clock registers added by [`cqca_to_qca`].
pub fn project_state(state: &RegionState, cqca: &CqcaDefinition) -> Result<RegionState> {
    let nc = cqca.layout().classical_registers().len();
    let w = nc + 2;
    if state.layout().classical_registers().len() != w {
        return structural("state does not carry color and clock registers");
    }
    let mut out = state.clone();
    out.layout = cqca.layout().clone();
    out.classical = state
        .classical()
        .chunks(w)
        .flat_map(|c| c[..nc].to_vec())
        .collect();
    Ok(out)
}

/// One gate of a per-cell gate sequence, offsets relative to the cell.
#[derive(Clone, Debug)]
pub enum CellGate {
    Single {
        offset: Coord,
        matrix: ComplexMatrix,
    },
    Cnot {
        control: Coord,
        target: Coord,
    },
}

impl CellGate {
    fn offsets(&self) -> Vec<Coord> {
        match self {
            Self::Single { offset, .. } => vec![offset.clone()],
            Self::Cnot { control, target } => vec![control.clone(), target.clone()],
        }
    }
}

/// Colored QCA applying each gate of `gates`, color class by color class,
/// at every cell: phase `i·k + c` applies gate `i` at the cells of color `c`.
/// An empty sequence gives a single identity phase.
pub fn gates_to_cqca(
    gates: &[CellGate],
    layout: &CellLayout,
    coloring: &Coloring,
) -> Result<CqcaDefinition> {
    if layout.has_classical() {
        return invalid("gate sequences act on quantum layouts");
    }
    let dim = coloring.dimension();
    let n = NeighborhoodScheme::von_neumann(dim);
    let d = layout.cell_dimension();
    let k = n.len();
    let mut used: Vec<Coord> = vec![vec![0; dim]];
    for g in gates {
        for o in g.offsets() {
            if o.len() != dim || n.index_of(&o).is_none() {
                return invalid(format!(
                    "gate offset {o:?} is outside the radius-1 neighborhood"
                ));
            }
            used.push(o);
        }
        if let CellGate::Cnot { control, target } = g {
            if control == target {
                return invalid("controlled-NOT needs two distinct cells");
            }
        }
        if let CellGate::Single { matrix, .. } = g {
            if matrix.dim() != d {
                return invalid(format!("single-cell gate must be {d}x{d}"));
            }
        }
    }
    used.sort();
    used.dedup();
    if !coloring.distinguishes(&used) {
        return invalid("coloring repeats a color inside a gate neighborhood");
    }
    if gates.is_empty() {
        return CqcaDefinition::new(
            layout.clone(),
            coloring.clone(),
            vec![LocalOperator::controlled(FixedAction(
                QuantumAction::Identity,
            ))],
            vec![0],
            None,
        );
    }
    let regs_of = |o: &Coord| -> Vec<RegRef> {
        let cell = n.index_of(o).unwrap();
        layout
            .quantum_registers()
            .iter()
            .map(|&r| RegRef::new(cell, r))
            .collect()
    };
    let _ = k;
    let mut phases = Vec::new();
    let mut colors = Vec::new();
    for g in gates {
        let action = match g {
            CellGate::Single { offset, matrix } => QuantumAction::On {
                regs: regs_of(offset),
                matrix: Arc::new(matrix.clone()),
            },
            CellGate::Cnot { control, target } => {
                let mut regs = regs_of(control);
                regs.extend(regs_of(target));
                QuantumAction::On {
                    regs,
                    matrix: Arc::new(cnot_on(layout)),
                }
            }
        };
        for c in 0..coloring.k() {
            phases.push(LocalOperator::controlled(FixedAction(action.clone())));
            colors.push(c);
        }
    }
    CqcaDefinition::new(layout.clone(), coloring.clone(), phases, colors, None)
}
