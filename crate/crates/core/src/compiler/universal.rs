use std::sync::Arc;

use crate::compiler::circuit::Circuit;
use crate::engine::{Limits, RegionState};
use crate::error::{invalid, Result};
use crate::linalg::{gates, ComplexMatrix, C64};
use crate::model::{
    Boundary, CellLayout, ClassicalControl, Coord, LocalOperator, NeighborhoodScheme,
    QcaDefinition, QuantumAction, RegRef, Region, Register,
};

const NOP: usize = 0;
const CP_LOWER: usize = 1;
const CP_UPPER: usize = 2;
const SINGLE: usize = 3;

// register indices in the cell layout
const STATE: usize = 0;

// support positions: offsets (0,-1), (0,0), (1,0) in lexicographic order
const UPPER: usize = 0;
const OWN: usize = 1;
const RIGHT: usize = 2;

const MATCH_TOL: f64 = 1e-12;

/// Single-qubit gates the universal automaton can hold in its gate
/// register, besides the controlled phase.
#[derive(Clone, Debug)]
pub struct UniversalGateSet {
    pub singles: Vec<(String, ComplexMatrix)>,
}

impl Default for UniversalGateSet {
    fn default() -> Self {
        Self {
            singles: vec![
                ("H".into(), gates::hadamard()),
                ("T".into(), gates::t_gate()),
                ("X".into(), gates::pauli_x()),
            ],
        }
    }
}

struct UniversalRead {
    singles: Vec<Arc<ComplexMatrix>>,
    cz: Arc<ComplexMatrix>,
    swap: Arc<ComplexMatrix>,
}

impl ClassicalControl for UniversalRead {
    fn act(&self, v: &mut [usize]) -> QuantumAction {
        // classical registers per cell: gate, clock, active, color
        let gate = |i: usize| v[i * 4];
        let clock = |i: usize| v[i * 4 + 1];
        let active = |i: usize| v[i * 4 + 2];
        let color = |i: usize| v[i * 4 + 3];
        let c = clock(OWN);
        let state = |i: usize| RegRef::new(i, STATE);
        if c % 2 == 0 {
            if active(OWN) == 0 {
                return QuantumAction::Identity;
            }
            return match gate(OWN) {
                g if g >= SINGLE => QuantumAction::On {
                    regs: vec![state(OWN)],
                    matrix: self.singles[g - SINGLE].clone(),
                },
                CP_LOWER if gate(UPPER) == CP_UPPER && active(UPPER) == 1 && clock(UPPER) == c => {
                    QuantumAction::On {
                        regs: vec![state(UPPER), state(OWN)],
                        matrix: self.cz.clone(),
                    }
                }
                _ => QuantumAction::Identity,
            };
        }
        let s = (c - 1) / 2;
        if clock(RIGHT) == c
            && color(OWN) == s
            && color(RIGHT) == (s + 1) % 3
            && active(OWN) != active(RIGHT)
        {
            v.swap(OWN * 4 + 2, RIGHT * 4 + 2);
            return QuantumAction::On {
                regs: vec![state(OWN), state(RIGHT)],
                matrix: self.swap.clone(),
            };
        }
        QuantumAction::Identity
    }

    fn name(&self) -> String {
        "universal-read".into()
    }
}

struct Tick;

impl ClassicalControl for Tick {
    fn act(&self, v: &mut [usize]) -> QuantumAction {
        v[1] = (v[1] + 1) % 6;
        QuantumAction::Identity
    }

    fn name(&self) -> String {
        "clock-tick".into()
    }
}

/// The universal automaton for a gate set: registers `state` (qubit) and
/// classical `gate`, `clock` (mod 6), `active`, `color` (column mod 3).
pub fn universal_qca(set: &UniversalGateSet) -> Result<QcaDefinition> {
    for (name, m) in &set.singles {
        if m.dim() != 2 {
            return invalid(format!("gate {name} is not a single-qubit gate"));
        }
    }
    let layout = CellLayout::new(vec![
        Register::quantum("state", 2),
        Register::classical("gate", SINGLE + set.singles.len()),
        Register::classical("clock", 6),
        Register::classical("active", 2),
        Register::classical("color", 3),
    ])?;
    let n = NeighborhoodScheme::new(2, vec![vec![0, -1], vec![0, 0], vec![1, 0]])?;
    let read = UniversalRead {
        singles: set
            .singles
            .iter()
            .map(|(_, m)| Arc::new(m.clone()))
            .collect(),
        cz: Arc::new(gates::cz()),
        swap: Arc::new(gates::swap(2)),
    };
    QcaDefinition::new(
        layout,
        n,
        LocalOperator::controlled(read),
        LocalOperator::controlled(Tick),
        None,
    )
}

/// A circuit laid out on the universal automaton: column `c` of the torus
/// holds layer `c`, row `w` holds wire `w`, and the last column receives the
/// output.
#[derive(Clone, Debug)]
pub struct UniversalEncoding {
    pub qca: QcaDefinition,
    /// Input `|0…0⟩`; see [`UniversalEncoding::prepare`].
    pub initial: RegionState,
    pub steps: usize,
    /// Cell holding wire `w` at the end.
    pub output: Vec<Coord>,
    wires: usize,
}

impl UniversalEncoding {
    pub fn region(&self) -> &Region {
        self.initial.region()
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    /// Initial state with `input` (over the wires, wire 0 most significant)
    /// in column 0.
    pub fn prepare(&self, input: &[C64]) -> Result<RegionState> {
        if input.len() != 1 << self.wires {
            return invalid(format!(
                "input must have {} amplitudes",
                1usize << self.wires
            ));
        }
        let region = self.region();
        let h = region.axis_len(1);
        let mut s = RegionState::empty(
            region,
            self.qca.layout(),
            self.initial.classical().to_vec(),
            self.initial.limits(),
        )?;
        let mut digits = vec![0; region.len()];
        for (i, &z) in input.iter().enumerate() {
            if z == C64::new(0.0, 0.0) {
                continue;
            }
            for w in 0..self.wires {
                digits[w] = (i >> (self.wires - 1 - w)) & 1;
            }
            debug_assert!(self.wires <= h);
            s.set_amplitude_digits(&digits, z);
        }
        Ok(s)
    }
}

/// Encodes a layered qubit circuit. Layers become columns; single-qubit gates
/// must belong to `set`, two-qubit gates must be controlled phases on
/// neighboring wires.
pub fn encode_circuit_as_qca(c: &Circuit, set: &UniversalGateSet) -> Result<UniversalEncoding> {
    if c.wire_dims().iter().any(|&d| d != 2) {
        return invalid("the universal automaton runs qubit circuits");
    }
    let qca = universal_qca(set)?;
    let d = c.depth();
    let wires = c.wires();
    let width = (d + 1).max(2);
    let height = wires.max(2);
    let region = Region::new(
        vec![0, 0],
        vec![width as i64 - 1, height as i64 - 1],
        Boundary::Torus,
    )?;
    let mut gate = vec![NOP; width * height];
    let cz = gates::cz();
    for (col, layer) in c.layers().iter().enumerate() {
        for g in layer {
            match g.wires.as_slice() {
                &[w] => {
                    let s = set
                        .singles
                        .iter()
                        .position(|(_, m)| (m - &g.matrix).frobenius_norm() < MATCH_TOL)
                        .ok_or_else(|| {
                            crate::Error::Invalid(format!(
                                "gate '{}' is not in the gate set",
                                g.name
                            ))
                        })?;
                    gate[col * height + w] = SINGLE + s;
                }
                &[a, b] => {
                    if (&g.matrix - &cz).frobenius_norm() >= MATCH_TOL {
                        return invalid(format!(
                            "two-qubit gate '{}' is not a controlled phase",
                            g.name
                        ));
                    }
                    if a.abs_diff(b) != 1 {
                        return invalid(format!(
                            "controlled phase on wires {a}, {b} is not nearest-neighbor"
                        ));
                    }
                    gate[col * height + a.min(b)] = CP_UPPER;
                    gate[col * height + a.max(b)] = CP_LOWER;
                }
                _ => return invalid(format!("gate '{}' acts on more than two wires", g.name)),
            }
        }
    }
    let mut classical = Vec::with_capacity(4 * width * height);
    for col in 0..width {
        for row in 0..height {
            let active = (col == 0 && row < wires) as usize;
            classical.extend([gate[col * height + row], 0, active, col % 3]);
        }
    }
    let initial = RegionState::empty(&region, qca.layout(), classical, Limits::default())?;
    let mut enc = UniversalEncoding {
        qca,
        initial,
        steps: 2 * d,
        output: (0..wires).map(|w| vec![d as i64, w as i64]).collect(),
        wires,
    };
    let mut zero = vec![C64::new(0.0, 0.0); 1 << wires];
    zero[0] = C64::new(1.0, 0.0);
    enc.initial = enc.prepare(&zero)?;
    Ok(enc)
}

/// Amplitudes of the output cells' state registers, every other state
/// register at `|0⟩`.
pub fn extract_output(state: &RegionState, enc: &UniversalEncoding) -> Result<Vec<C64>> {
    if state.region() != enc.region() || state.layout() != enc.qca.layout() {
        return invalid("state does not belong to this encoding");
    }
    let cells: Vec<usize> = enc
        .output
        .iter()
        .map(|c| state.cell_index(c).unwrap())
        .collect();
    let w = enc.wires;
    let mut out = vec![C64::new(0.0, 0.0); 1 << w];
    let mut digits = vec![0; state.region().len()];
    for (i, z) in out.iter_mut().enumerate() {
        for (k, &cell) in cells.iter().enumerate() {
            digits[cell] = (i >> (w - 1 - k)) & 1;
        }
        *z = state.amplitude_digits(&digits);
    }
    Ok(out)
}
