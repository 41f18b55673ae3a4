//! Lattices, cell layouts, operators and automaton definitions.

mod basis;
mod definition;
mod init;
mod lattice;
mod layout;
mod operator;

pub use basis::{basis_decode, basis_index};
pub use definition::QcaDefinition;
pub use init::{BlockInitializer, Fill};
pub use lattice::{Boundary, Coord, NeighborhoodScheme, Region};
pub use layout::{CellLayout, Register};
pub(crate) use operator::{all_quantum_regs, joint_classical_index, joint_classical_values};
pub use operator::{ClassicalControl, FixedAction, LocalOperator, QuantumAction, RegRef};
