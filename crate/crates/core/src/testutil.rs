//! Shared helpers for unit tests.

use rand::Rng;

use crate::linalg::{herm_exp, ComplexMatrix, C64};

pub(crate) fn random_state(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let s = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / s).collect()
}

pub(crate) fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            h.set(
                i,
                j,
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
    }
    herm_exp(&(&h + &h.adjoint()), 1.0).unwrap()
}

pub(crate) fn random_diagonal(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::diagonal(
        &(0..n)
            .map(|_| C64::from_polar(1.0, rng.gen_range(0.0..6.3)))
            .collect::<Vec<_>>(),
    )
}

/// `m` acting on `cells` (in that order) of `n` cells of dimension `d`,
/// built entry by entry.
pub(crate) fn embed(d: usize, n: usize, cells: &[usize], m: &ComplexMatrix) -> ComplexMatrix {
    let total = d.pow(n as u32);
    let digit = |x: usize, i: usize| (x / d.pow((n - 1 - i) as u32)) % d;
    let sub = |x: usize| cells.iter().fold(0, |a, &c| a * d + digit(x, c));
    let mut out = ComplexMatrix::zeros(total);
    for r in 0..total {
        for col in 0..total {
            if (0..n).all(|i| cells.contains(&i) || digit(r, i) == digit(col, i)) {
                out.set(r, col, m.get(sub(r), sub(col)));
            }
        }
    }
    out
}
