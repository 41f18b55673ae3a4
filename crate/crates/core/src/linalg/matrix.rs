use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Dense square complex matrix, row-major. Serialized as a list of rows of
/// `[re, im]` pairs.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<[f64; 2]>>", into = "Vec<Vec<[f64; 2]>>")]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<C64>,
}

impl TryFrom<Vec<Vec<[f64; 2]>>> for ComplexMatrix {
    type Error = String;

    fn try_from(rows: Vec<Vec<[f64; 2]>>) -> std::result::Result<Self, String> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(format!("matrix must be square and nonempty, got {n} rows"));
        }
        let data: Vec<C64> = rows
            .into_iter()
            .flatten()
            .map(|[re, im]| C64::new(re, im))
            .collect();
        Self::new(n, data).map_err(|e| e.to_string())
    }
}

impl From<ComplexMatrix> for Vec<Vec<[f64; 2]>> {
    fn from(m: ComplexMatrix) -> Self {
        m.data
            .chunks(m.n)
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
            .collect()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.n, self.n)?;
        if self.n <= 8 {
            for i in 0..self.n {
                let row: Vec<String> = (0..self.n)
                    .map(|j| {
                        let z = self.get(i, j);
                        format!("{:+.4}{:+.4}i", z.re, z.im)
                    })
                    .collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Fails if the entry count is not
    /// a perfect square of `n` or any entry is not finite.
    pub fn new(n: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != n * n {
            return invalid(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            ));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("matrix has non-finite entries");
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return invalid("rows must all have length equal to the row count");
            }
            data.extend_from_slice(r);
        }
        Self::new(n, data)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// 0/1 matrix sending basis state `j` to `perm(j)`.
    pub fn permutation(n: usize, perm: impl Fn(usize) -> usize) -> Self {
        let mut m = Self::zeros(n);
        for j in 0..n {
            let i = perm(j);
            assert!(i < n, "permutation image out of range");
            m.data[i * n + j] = ONE;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: C64) {
        self.data[i * self.n + j] = z;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Kronecker product `self ⊗ other`; `self` is the more significant factor.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.n, other.n);
        let n = a * b;
        let mut m = Self::zeros(n);
        for i1 in 0..a {
            for j1 in 0..a {
                let s = self.get(i1, j1);
                if s == ZERO {
                    continue;
                }
                for i2 in 0..b {
                    for j2 in 0..b {
                        m.data[(i1 * b + i2) * n + j1 * b + j2] = s * other.get(i2, j2);
                    }
                }
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let row = &self.data[i * self.n..(i + 1) * self.n];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// `‖M − M†‖_F`.
    pub fn hermiticity_residual(&self) -> f64 {
        (self - &self.adjoint()).frobenius_norm()
    }

    /// `‖M†M − I‖_F`.
    pub fn unitarity_residual(&self) -> f64 {
        (&(&self.adjoint() * self) - &Self::identity(self.n)).frobenius_norm()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        let g = &self.adjoint() * self;
        hermitian_eigenvalues(&g)
            .into_iter()
            .fold(0.0f64, |m, x| m.max(x))
            .max(0.0)
            .sqrt()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == ZERO))
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.n, self.n, &self.data)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in product");
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Returns `(‖M†M − I‖_F ≤ tol, residual)`.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> (bool, f64) {
    let r = m.unitarity_residual();
    (r <= tol, r)
}

/// Eigenvalues of a Hermitian matrix (ascending order not guaranteed).
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    SymmetricEigen::new(h.to_nalgebra())
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

/// `e^{−iHt}` for Hermitian `H`, computed from the eigendecomposition
/// `H = Q Λ Q†` as `Q e^{−iΛt} Q†`.
pub fn herm_exp(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let scale = h.frobenius_norm();
    let res = h.hermiticity_residual();
    if res > 1e-9 * scale.max(f64::MIN_POSITIVE) && res > 0.0 {
        return invalid(format!(
            "herm_exp: input is not Hermitian (‖H − H†‖_F = {res:.3e})"
        ));
    }
    let n = h.dim();
    if scale == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    // symmetrise so the solver sees an exactly Hermitian matrix
    let sym = (h + &h.adjoint()).scale(C64::new(0.5, 0.0));
    let eig = SymmetricEigen::new(sym.to_nalgebra());
    let q = &eig.eigenvectors;
    let mut out = ComplexMatrix::zeros(n);
    for k in 0..n {
        let phase = C64::from_polar(1.0, -eig.eigenvalues[k] * t);
        for i in 0..n {
            let a = q[(i, k)] * phase;
            if a == ZERO {
                continue;
            }
            for j in 0..n {
                out.data[i * n + j] += a * q[(j, k)].conj();
            }
        }
    }
    Ok(out)
}

/// Trace distance `½‖ρ − σ‖₁` between two density matrices.
pub fn trace_distance(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
    let d = rho - sigma;
    let d = (&d + &d.adjoint()).scale(C64::new(0.5, 0.0));
    0.5 * hermitian_eigenvalues(&d)
        .iter()
        .map(|x| x.abs())
        .sum::<f64>()
}

/// Common single-qubit and two-qubit gates.
pub mod gates {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    pub fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![ZERO, C64::new(0.0, -1.0)],
            vec![C64::new(0.0, 1.0), ZERO],
        ])
        .unwrap()
    }

    pub fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    pub fn hadamard() -> ComplexMatrix {
        let h = FRAC_1_SQRT_2;
        ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]).unwrap()
    }

    pub fn t_gate() -> ComplexMatrix {
        ComplexMatrix::diagonal(&[ONE, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)])
    }

    pub fn cz() -> ComplexMatrix {
        ComplexMatrix::diagonal(&[ONE, ONE, ONE, -ONE])
    }

    /// CNOT with the first (more significant) qubit as control.
    pub fn cnot() -> ComplexMatrix {
        ComplexMatrix::permutation(4, |j| if j >= 2 { j ^ 1 } else { j })
    }

    /// Swap of two qudits of dimension `d`.
    pub fn swap(d: usize) -> ComplexMatrix {
        ComplexMatrix::permutation(d * d, |j| (j % d) * d + j / d)
    }
}
