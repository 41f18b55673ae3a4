use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::kernel::apply_dense;
use crate::linalg::{ComplexMatrix, C64};

/// A unitary on an ordered list of wires, first wire most significant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub name: String,
    pub wires: Vec<usize>,
    pub matrix: ComplexMatrix,
}

impl Gate {
    pub fn new(name: &str, wires: Vec<usize>, matrix: ComplexMatrix) -> Self {
        Self {
            name: name.into(),
            wires,
            matrix,
        }
    }
}

/// Layered circuit; the gates of one layer touch disjoint wires.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    format: String,
    version: u32,
    wire_dims: Vec<usize>,
    layers: Vec<Vec<Gate>>,
}

const FORMAT: &str = "luqca-circuit";
const UNITARY_TOL: f64 = 1e-10;

impl Circuit {
    pub fn new(wire_dims: Vec<usize>) -> Self {
        Self {
            format: FORMAT.into(),
            version: 1,
            wire_dims,
            layers: vec![],
        }
    }

    pub fn qubits(n: usize) -> Self {
        Self::new(vec![2; n])
    }

    pub fn wires(&self) -> usize {
        self.wire_dims.len()
    }

    pub fn wire_dims(&self) -> &[usize] {
        &self.wire_dims
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.len()).sum()
    }

    fn check_gate(&self, g: &Gate) -> Result<()> {
        let mut n = 1usize;
        for (i, &w) in g.wires.iter().enumerate() {
            if w >= self.wires() {
                return invalid(format!(
                    "gate '{}' uses wire {w} of {}",
                    g.name,
                    self.wires()
                ));
            }
            if g.wires[..i].contains(&w) {
                return invalid(format!("gate '{}' repeats wire {w}", g.name));
            }
            n *= self.wire_dims[w];
        }
        if g.matrix.dim() != n {
            return invalid(format!(
                "gate '{}' is {}x{}, its wires need {n}",
                g.name,
                g.matrix.dim(),
                g.matrix.dim()
            ));
        }
        let r = g.matrix.unitarity_residual();
        if r > UNITARY_TOL {
            return invalid(format!("gate '{}' is not unitary (residual {r:e})", g.name));
        }
        Ok(())
    }

    /// Appends a layer; its gates must touch disjoint wires.
    pub fn push_layer(&mut self, gates: Vec<Gate>) -> Result<()> {
        let mut used = vec![false; self.wires()];
        for g in &gates {
            self.check_gate(g)?;
            for &w in &g.wires {
                if std::mem::replace(&mut used[w], true) {
                    return invalid(format!("wire {w} is used twice in one layer"));
                }
            }
        }
        self.layers.push(gates);
        Ok(())
    }

    /// Appends `g` to the earliest layer after every layer that touches its
    /// wires.
    pub fn push_asap(&mut self, g: Gate) -> Result<()> {
        self.check_gate(&g)?;
        let busy = |l: &Vec<Gate>| {
            l.iter()
                .any(|h| h.wires.iter().any(|w| g.wires.contains(w)))
        };
        let at = self.layers.iter().rposition(busy).map_or(0, |i| i + 1);
        if at == self.layers.len() {
            self.layers.push(vec![]);
        }
        self.layers[at].push(g);
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Self =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("circuit JSON: {e}")))?;
        if raw.format != FORMAT || raw.version != 1 {
            return Err(Error::Parse(format!(
                "expected {FORMAT} v1, found {} v{}",
                raw.format, raw.version
            )));
        }
        if raw.wire_dims.iter().any(|&d| d < 2) {
            return Err(Error::Parse("wire dimensions must be at least 2".into()));
        }
        let mut c = Self::new(raw.wire_dims);
        for l in raw.layers {
            c.push_layer(l).map_err(|e| Error::Parse(e.to_string()))?;
        }
        Ok(c)
    }
}

/// Applies the layers of `c` in order to `input`.
pub fn simulate_circuit(c: &Circuit, input: &[C64]) -> Result<Vec<C64>> {
    let n: usize = c.wire_dims.iter().product();
    if input.len() != n {
        return invalid(format!(
            "circuit acts on {n} amplitudes, input has {}",
            input.len()
        ));
    }
    let mut v = input.to_vec();
    for layer in &c.layers {
        for g in layer {
            apply_dense(&mut v, &c.wire_dims, &g.wires, &g.matrix);
        }
    }
    Ok(v)
}
