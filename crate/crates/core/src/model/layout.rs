use serde::{Deserialize, Serialize};

use crate::error::{invalid, structural, Result};

/// One named field of a cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub classical: bool,
}

impl Register {
    pub fn quantum(name: &str, dim: usize) -> Self {
        Self {
            name: name.into(),
            dim,
            classical: false,
        }
    }

    pub fn classical(name: &str, dim: usize) -> Self {
        Self {
            name: name.into(),
            dim,
            classical: true,
        }
    }
}

/// Ordered registers of a cell. The cell basis is the big-endian mixed-radix
/// product of the registers in declaration order.
///
/// Registers flagged classical are kept out of the amplitude vector by the
/// engine; operators must act on them as basis-controlled permutations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellLayout {
    registers: Vec<Register>,
    cell_dim: usize,
    quantum: Vec<usize>,
    classical: Vec<usize>,
    quantum_dim: usize,
    classical_dim: usize,
}

impl CellLayout {
    pub fn new(registers: Vec<Register>) -> Result<Self> {
        if registers.is_empty() {
            return structural("a cell layout needs at least one register");
        }
        let mut cell_dim = 1usize;
        for (i, r) in registers.iter().enumerate() {
            let min = if r.classical { 1 } else { 2 };
            if r.dim < min {
                return structural(format!(
                    "register '{}' has dimension {} (minimum {min})",
                    r.name, r.dim
                ));
            }
            if registers[..i].iter().any(|o| o.name == r.name) {
                return structural(format!("duplicate register name '{}'", r.name));
            }
            cell_dim = match cell_dim.checked_mul(r.dim) {
                Some(d) => d,
                None => return structural("cell dimension overflows"),
            };
        }
        let quantum: Vec<usize> = (0..registers.len())
            .filter(|&i| !registers[i].classical)
            .collect();
        let classical: Vec<usize> = (0..registers.len())
            .filter(|&i| registers[i].classical)
            .collect();
        let quantum_dim = quantum.iter().map(|&i| registers[i].dim).product();
        let classical_dim = classical.iter().map(|&i| registers[i].dim).product();
        Ok(Self {
            registers,
            cell_dim,
            quantum,
            classical,
            quantum_dim,
            classical_dim,
        })
    }

    /// A single quantum register `q` of dimension `d`.
    pub fn qudit(d: usize) -> Result<Self> {
        Self::new(vec![Register::quantum("q", d)])
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn cell_dimension(&self) -> usize {
        self.cell_dim
    }

    pub fn quantum_registers(&self) -> &[usize] {
        &self.quantum
    }

    pub fn classical_registers(&self) -> &[usize] {
        &self.classical
    }

    pub fn quantum_dimension(&self) -> usize {
        self.quantum_dim
    }

    pub fn classical_dimension(&self) -> usize {
        self.classical_dim
    }

    pub fn has_classical(&self) -> bool {
        !self.classical.is_empty()
    }

    pub fn register_index(&self, name: &str) -> Option<usize> {
        self.registers.iter().position(|r| r.name == name)
    }

    /// Position of register `reg` among the quantum registers.
    pub fn quantum_position(&self, reg: usize) -> Option<usize> {
        self.quantum.iter().position(|&r| r == reg)
    }

    /// Position of register `reg` among the classical registers.
    pub fn classical_position(&self, reg: usize) -> Option<usize> {
        self.classical.iter().position(|&r| r == reg)
    }

    /// Same registers, all treated as quantum.
    pub fn all_quantum(&self) -> Self {
        let regs = self
            .registers
            .iter()
            .map(|r| Register {
                classical: false,
                ..r.clone()
            })
            .collect();
        Self::new(regs).expect("classical registers of dimension 1 cannot become quantum")
    }

    pub fn encode(&self, values: &[usize]) -> Result<usize> {
        if values.len() != self.registers.len() {
            return invalid(format!(
                "expected {} register values, got {}",
                self.registers.len(),
                values.len()
            ));
        }
        let mut idx = 0;
        for (r, &v) in self.registers.iter().zip(values) {
            if v >= r.dim {
                return invalid(format!(
                    "value {v} out of range for register '{}' (dim {})",
                    r.name, r.dim
                ));
            }
            idx = idx * r.dim + v;
        }
        Ok(idx)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.registers.len()];
        for (i, r) in self.registers.iter().enumerate().rev() {
            out[i] = index % r.dim;
            index /= r.dim;
        }
        out
    }

    /// Splits a cell basis index into (classical part, quantum part), each
    /// a mixed-radix index over the respective registers.
    pub fn split(&self, index: usize) -> (usize, usize) {
        let vals = self.decode(index);
        let c = self
            .classical
            .iter()
            .fold(0, |a, &i| a * self.registers[i].dim + vals[i]);
        let q = self
            .quantum
            .iter()
            .fold(0, |a, &i| a * self.registers[i].dim + vals[i]);
        (c, q)
    }

    pub fn join(&self, classical: usize, quantum: usize) -> usize {
        let mut vals = vec![0; self.registers.len()];
        let (mut c, mut q) = (classical, quantum);
        for &i in self.classical.iter().rev() {
            vals[i] = c % self.registers[i].dim;
            c /= self.registers[i].dim;
        }
        for &i in self.quantum.iter().rev() {
            vals[i] = q % self.registers[i].dim;
            q /= self.registers[i].dim;
        }
        vals.iter()
            .zip(&self.registers)
            .fold(0, |a, (&v, r)| a * r.dim + v)
    }

    /// Classical register values for a classical index.
    pub fn classical_values(&self, classical: usize) -> Vec<usize> {
        let mut out = vec![0; self.classical.len()];
        let mut c = classical;
        for (k, &i) in self.classical.iter().enumerate().rev() {
            out[k] = c % self.registers[i].dim;
            c /= self.registers[i].dim;
        }
        out
    }

    pub fn classical_index(&self, values: &[usize]) -> usize {
        self.classical
            .iter()
            .zip(values)
            .fold(0, |a, (&i, &v)| a * self.registers[i].dim + v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hybrid() -> CellLayout {
        CellLayout::new(vec![
            Register::quantum("a", 2),
            Register::classical("b", 3),
            Register::quantum("c", 3),
            Register::classical("d", 2),
        ])
        .unwrap()
    }

    #[test]
    fn rejects_small_quantum_register() {
        assert!(CellLayout::new(vec![Register::quantum("x", 1)]).is_err());
        assert!(
            CellLayout::new(vec![Register::classical("x", 1), Register::quantum("y", 2)]).is_ok()
        );
    }

    #[test]
    fn split_join_roundtrip() {
        let l = hybrid();
        assert_eq!(l.cell_dimension(), 36);
        for idx in 0..36 {
            let (c, q) = l.split(idx);
            assert!(c < 6 && q < 6);
            assert_eq!(l.join(c, q), idx);
        }
        // a=1 b=2 c=0 d=1: index ((1*3+2)*3+0)*2+1 = 31
        assert_eq!(l.encode(&[1, 2, 0, 1]).unwrap(), 31);
        assert_eq!(l.split(31), (2 * 2 + 1, 1 * 3));
    }
}
