#![allow(dead_code)]

use luqca::linalg::{ComplexMatrix, C64};
use nalgebra::DMatrix;
use rand::Rng;

pub const ZERO: C64 = C64::new(0.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    // Box-Muller
    let (u, v): (f64, f64) = (1.0 - rng.gen::<f64>(), rng.gen());
    C64::from_polar((-2.0 * u.ln()).sqrt(), std::f64::consts::TAU * v)
}

pub fn random_state(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Q factor of a complex Gaussian matrix.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| gaussian(rng));
    from_na(&g.qr().q())
}

pub fn to_na(m: &ComplexMatrix) -> DMatrix<C64> {
    DMatrix::from_fn(m.dim(), m.dim(), |i, j| m.get(i, j))
}

pub fn from_na(m: &DMatrix<C64>) -> ComplexMatrix {
    let rows: Vec<Vec<C64>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).unwrap()
}

pub fn max_dev(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn fidelity(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<C64>()
        .norm_sqr()
}

pub fn digits(mut x: usize, dims: &[usize]) -> Vec<usize> {
    let mut d = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        d[i] = x % dims[i];
        x /= dims[i];
    }
    d
}

pub fn index(d: &[usize], dims: &[usize]) -> usize {
    d.iter().zip(dims).fold(0, |a, (&v, &n)| a * n + v)
}

/// `m` applied to `cells` (in that order) of a vector over factors `din`;
/// the touched factors become `dout`.
pub fn apply_block(
    v: &[C64],
    din: &[usize],
    dout: &[usize],
    cells: &[usize],
    m: &ComplexMatrix,
) -> Vec<C64> {
    let total: usize = dout.iter().product();
    let mut out = vec![ZERO; total];
    let bin: Vec<usize> = cells.iter().map(|&c| din[c]).collect();
    let bout: Vec<usize> = cells.iter().map(|&c| dout[c]).collect();
    for (x, &z) in v.iter().enumerate() {
        if z == ZERO {
            continue;
        }
        let dx = digits(x, din);
        let col = index(&cells.iter().map(|&c| dx[c]).collect::<Vec<_>>(), &bin);
        for row in 0..m.dim() {
            let w = m.get(row, col);
            if w == ZERO {
                continue;
            }
            let mut dy = dx.clone();
            for (k, &c) in cells.iter().enumerate() {
                dy[c] = digits(row, &bout)[k];
            }
            out[index(&dy, dout)] += w * z;
        }
    }
    out
}
