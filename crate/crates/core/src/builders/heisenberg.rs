use crate::coloring::{Coloring, CqcaDefinition};
use crate::error::{invalid, Error, Result};
use crate::linalg::{gates, herm_exp, ComplexMatrix};
use crate::model::CellLayout;

/// `J (XX + YY + ZZ - I)` on two qubits.
pub fn heisenberg_bond(j: f64) -> ComplexMatrix {
    let (x, y, z) = (gates::pauli_x(), gates::pauli_y(), gates::pauli_z());
    let s = &(&x.kron(&x) + &y.kron(&y)) + &z.kron(&z);
    (&s - &ComplexMatrix::identity(4)).scale(j.into())
}

/// Colored Heisenberg chain. Phase 0 applies `exp(-i H(x,x+1) Δt/k)` at
/// even `x`, phase 1 at odd `x`; one period is one Trotter factor pair.
pub fn heisenberg_cqca(j: f64, dt: f64, k: usize) -> Result<CqcaDefinition> {
    if k == 0 {
        return invalid("need k >= 1");
    }
    let u = herm_exp(&heisenberg_bond(j), dt / k as f64)?;
    let phase = ComplexMatrix::identity(2).kron(&u);
    CqcaDefinition::new(
        CellLayout::qudit(2)?,
        Coloring::checkerboard(1),
        vec![phase.clone().into(), phase.into()],
        vec![0, 1],
        None,
    )
}

fn bond_on(h: &ComplexMatrix, n: usize, b: usize) -> ComplexMatrix {
    let left = ComplexMatrix::identity(1 << b);
    let right = ComplexMatrix::identity(1 << (n - b - 2));
    left.kron(h).kron(&right)
}

/// Heisenberg Hamiltonian of an open chain of `n` qubits.
pub fn heisenberg_hamiltonian(j: f64, n: usize) -> ComplexMatrix {
    let h = heisenberg_bond(j);
    (0..n - 1).fold(ComplexMatrix::zeros(1 << n), |acc, b| {
        &acc + &bond_on(&h, n, b)
    })
}

const MAX_CHAIN: usize = 12;

fn check_chain(n: usize) -> Result<()> {
    if n < 2 {
        return invalid("chain needs at least two cells");
    }
    if n > MAX_CHAIN {
        return Err(Error::Resource(format!(
            "chain of {n} cells exceeds the dense limit of {MAX_CHAIN}"
        )));
    }
    Ok(())
}

/// `k` periods of the colored chain on an open chain of `n` qubits: bonds
/// that would leave the chain are dropped.
pub fn trotter_product(j: f64, dt: f64, k: usize, n: usize) -> Result<ComplexMatrix> {
    check_chain(n)?;
    if k == 0 {
        return invalid("need k >= 1");
    }
    let u = herm_exp(&heisenberg_bond(j), dt / k as f64)?;
    let mut factor = ComplexMatrix::identity(1 << n);
    for p in 0..2 {
        for b in (p..n - 1).step_by(2) {
            factor = &bond_on(&u, n, b) * &factor;
        }
    }
    let mut out = ComplexMatrix::identity(1 << n);
    for _ in 0..k {
        out = &factor * &out;
    }
    Ok(out)
}

/// Spectral norm of `(e^{-iH_bΔt/k} e^{-iH_aΔt/k})^k - e^{-iHΔt}` on an open
/// chain of `n` cells.
pub fn trotter_error(j: f64, dt: f64, k: usize, n: usize) -> Result<f64> {
    let approx = trotter_product(j, dt, k, n)?;
    let exact = herm_exp(&heisenberg_hamiltonian(j, n), dt)?;
    Ok((&approx - &exact).spectral_norm())
}
