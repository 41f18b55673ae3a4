//! Layered circuits: compiling an automaton into one, routing, and encoding a
//! circuit into the universal automaton.

mod circuit;
mod compile;
mod route;
mod universal;

pub use circuit::{simulate_circuit, Circuit, Gate};
pub use compile::compile_to_circuit;
pub use route::route_nearest_neighbor;
pub use universal::{
    encode_circuit_as_qca, extract_output, universal_qca, UniversalEncoding, UniversalGateSet,
};

#[cfg(test)]
mod tests;
