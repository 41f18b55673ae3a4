use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{ComplexMatrix, ONE};
use crate::model::{CellLayout, NeighborhoodScheme, QcaDefinition, Register};

/// Partitioned one-dimensional automaton: cells are triples `(l, c, r)`.
/// A step moves `l` in from the right neighbor and `r` in from the left
/// neighbor, then applies `v` to every cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WatrousPartitionedDef {
    pub left: usize,
    pub center: usize,
    pub right: usize,
    /// On `(l, c, r)`, `l` most significant.
    pub v: ComplexMatrix,
}

impl WatrousPartitionedDef {
    pub fn new(left: usize, center: usize, right: usize, v: ComplexMatrix) -> Result<Self> {
        if left == 0 || center == 0 || right == 0 {
            return invalid("sub-alphabets must be nonempty");
        }
        if left.max(right) < 2 {
            return invalid("a side alphabet needs at least two symbols");
        }
        if v.dim() != left * center * right {
            return invalid(format!(
                "cell operator must be {0}x{0}",
                left * center * right
            ));
        }
        let r = v.unitarity_residual();
        if r > 1e-10 {
            return invalid(format!("cell operator is not unitary (residual {r:e})"));
        }
        Ok(Self {
            left,
            center,
            right,
            v,
        })
    }

    /// Common size of the padded `l` and `r` alphabets.
    pub fn padded_side(&self) -> usize {
        self.left.max(self.right)
    }

    /// `v` on the padded alphabets: unchanged on original symbols, the
    /// identity wherever a padding symbol occurs.
    pub fn padded_v(&self) -> ComplexMatrix {
        let m = self.padded_side();
        let c = self.center;
        let n = m * c * m;
        let split = |x: usize| (x / (c * m), (x / m) % c, x % m);
        let valid = |x: usize| {
            let (l, _, r) = split(x);
            l < self.left && r < self.right
        };
        let orig = |x: usize| {
            let (l, cc, r) = split(x);
            (l * c + cc) * self.right + r
        };
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let z = match (valid(i), valid(j)) {
                    (true, true) => self.v.get(orig(i), orig(j)),
                    (false, false) if i == j => ONE,
                    _ => continue,
                };
                out.set(i, j, z);
            }
        }
        out
    }
}

/// Layout `(l, c, r)` with the padded side alphabets.
pub fn watrous_layout(w: &WatrousPartitionedDef) -> CellLayout {
    let m = w.padded_side();
    let mut regs = vec![Register::quantum("l", m), Register::quantum("r", m)];
    if w.center > 1 {
        regs.insert(1, Register::quantum("c", w.center));
    }
    // a one-symbol center is dropped from the layout
    CellLayout::new(regs).unwrap()
}

/// `U0` exchanges `r(x)` with `l(x+1)`; `V0` swaps `l` and `r` in the cell,
/// then applies the padded `v`.
pub fn watrous_to_luqca(w: &WatrousPartitionedDef) -> QcaDefinition {
    let m = w.padded_side();
    let c = w.center;
    let cell = m * c * m;
    let u0 = ComplexMatrix::permutation(cell * cell, |x| {
        let (a, b) = (x / cell, x % cell);
        let (l0, c0, r0) = (a / (c * m), (a / m) % c, a % m);
        let (l1, c1, r1) = (b / (c * m), (b / m) % c, b % m);
        let a2 = (l0 * c + c0) * m + l1;
        let b2 = (r0 * c + c1) * m + r1;
        a2 * cell + b2
    });
    let p2 = ComplexMatrix::permutation(cell, |x| {
        let (l, cc, r) = (x / (c * m), (x / m) % c, x % m);
        (r * c + cc) * m + l
    });
    let v0 = &w.padded_v() * &p2;
    QcaDefinition::new(
        watrous_layout(w),
        NeighborhoodScheme::right_pair(),
        u0,
        v0,
        None,
    )
    .unwrap()
}
