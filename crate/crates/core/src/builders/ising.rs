use crate::error::{invalid, Result};
use crate::linalg::{gates, herm_exp, ComplexMatrix};
use crate::model::{CellLayout, NeighborhoodScheme, QcaDefinition};

/// Ising chain: `U0 = exp(-i J σz⊗σz Δt)` on `{0, +1}`, `V0 = I`. No
/// quiescent state, so run it on a torus.
pub fn ising_qca(j: f64, dt: f64) -> Result<QcaDefinition> {
    if dt.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        || !j.is_finite()
        || !dt.is_finite()
    {
        return invalid("need finite J and Δt > 0");
    }
    let zz = gates::pauli_z().kron(&gates::pauli_z()).scale(j.into());
    QcaDefinition::new(
        CellLayout::qudit(2)?,
        NeighborhoodScheme::right_pair(),
        herm_exp(&zz, dt)?,
        ComplexMatrix::identity(2),
        None,
    )
}

/// `J Σ σz(n) σz(n+1)` on `n` qubits, periodic if `ring`.
pub fn ising_hamiltonian(j: f64, n: usize, ring: bool) -> ComplexMatrix {
    let dim = 1usize << n;
    let bonds = if ring { n } else { n.saturating_sub(1) };
    let diag: Vec<_> = (0..dim)
        .map(|x| {
            let s = |i: usize| {
                if (x >> (n - 1 - i)) & 1 == 0 {
                    1.0
                } else {
                    -1.0
                }
            };
            (0..bonds)
                .map(|b| j * s(b) * s((b + 1) % n))
                .sum::<f64>()
                .into()
        })
        .collect();
    ComplexMatrix::diagonal(&diag)
}
