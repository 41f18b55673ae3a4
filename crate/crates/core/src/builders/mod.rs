//! Concrete automata: Ising chain, Trotterized Heisenberg chain, quantum
//! walk, spin-signal amplification and the shift-right automaton.

mod amplification;
mod heisenberg;
mod ising;
mod shift;
mod walk;

pub use amplification::{
    amplification_cqca, amplification_demo, amplification_state, AmplificationReport,
    AmplificationSpec, Spin,
};
pub use heisenberg::{
    heisenberg_bond, heisenberg_cqca, heisenberg_hamiltonian, trotter_error, trotter_product,
};
pub use ising::{ising_hamiltonian, ising_qca};
pub use shift::shift_right_qca;
pub use walk::{walk_amplitudes, walk_csv, walk_particle, walk_qca, WalkParams, WalkSite};

#[cfg(test)]
mod tests;
