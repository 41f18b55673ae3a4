//! Colorings, colored QCA and their translation to plain QCA.

#[allow(clippy::module_inception)]
mod coloring;
mod cqca;
mod theorems;

pub use coloring::{validate_coloring, Coloring};
pub use cqca::{
    cqca_period, cqca_step, cqca_step_ordered, is_symmetric, on_center, validate_cqca,
    CqcaDefinition, CqcaReport, SymmetricRule,
};
pub use theorems::{cqca_to_qca, gates_to_cqca, lift_state, project_state, CellGate};

#[cfg(test)]
mod tests;
