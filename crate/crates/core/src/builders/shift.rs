use crate::linalg::{gates, ComplexMatrix};
use crate::model::{CellLayout, NeighborhoodScheme, QcaDefinition, Register};

/// Registers `(data, buffer)`, qubits. `U0` swaps `data(x)` with
/// `buffer(x+1)`, `V0` swaps buffer and data. Quiescent state `|00⟩`.
pub fn shift_right_qca() -> QcaDefinition {
    let layout = CellLayout::new(vec![
        Register::quantum("data", 2),
        Register::quantum("buffer", 2),
    ])
    .unwrap();
    // digits (data0, buffer0, data1, buffer1): exchange digits 0 and 3
    let u0 = ComplexMatrix::permutation(16, |x| {
        let (a, b) = (x >> 3, x & 1);
        (x & 0b0110) | (b << 3) | a
    });
    QcaDefinition::new(
        layout,
        NeighborhoodScheme::right_pair(),
        u0,
        gates::swap(2),
        Some(0),
    )
    .unwrap()
}
