//! Partitioned (Watrous) and block-partitioned (Margolus) automata as local
//! unitary QCA.

mod margolus;
mod watrous;

pub use margolus::{
    margolus_data, margolus_layout, margolus_state, margolus_to_luqca, MargolusDef,
};
pub use watrous::{watrous_layout, watrous_to_luqca, WatrousPartitionedDef};
