//! Strided application of small operators to a factored amplitude vector.
//!
//! The vector is indexed big-endian over `dims`: factor 0 is the most
//! significant digit.

use super::matrix::{ComplexMatrix, C64, ZERO};

pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut st = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        st[i] = st[i + 1] * dims[i + 1];
    }
    st
}

/// Offsets of every joint value of `factors` (big-endian in the given order).
pub fn factor_offsets(dims: &[usize], st: &[usize], factors: &[usize]) -> Vec<usize> {
    let mut offs = vec![0usize];
    for &f in factors {
        let mut next = Vec::with_capacity(offs.len() * dims[f]);
        for &o in &offs {
            for v in 0..dims[f] {
                next.push(o + v * st[f]);
            }
        }
        offs = next;
    }
    offs
}

/// Calls `f(base)` for every joint value of the factors not in `excluded`.
pub fn for_each_base(dims: &[usize], st: &[usize], excluded: &[usize], mut f: impl FnMut(usize)) {
    let rest: Vec<usize> = (0..dims.len()).filter(|i| !excluded.contains(i)).collect();
    let mut digits = vec![0usize; rest.len()];
    let mut base = 0usize;
    loop {
        f(base);
        let mut k = rest.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            let fct = rest[k];
            digits[k] += 1;
            base += st[fct];
            if digits[k] < dims[fct] {
                break;
            }
            base -= digits[k] * st[fct];
            digits[k] = 0;
        }
    }
}

fn apply_at(amps: &mut [C64], m: &ComplexMatrix, base: usize, offs: &[usize], buf: &mut [C64]) {
    let mut nonzero = false;
    for (b, &o) in buf.iter_mut().zip(offs) {
        *b = amps[base + o];
        nonzero |= *b != ZERO;
    }
    if !nonzero {
        return;
    }
    let n = offs.len();
    let data = m.data();
    for (i, &o) in offs.iter().enumerate() {
        let row = &data[i * n..(i + 1) * n];
        amps[base + o] = row.iter().zip(buf.iter()).map(|(a, b)| a * b).sum();
    }
}

/// Applies `m` to the tensor factors `factors` (in that order) of `amps`.
pub fn apply_dense(amps: &mut [C64], dims: &[usize], factors: &[usize], m: &ComplexMatrix) {
    let st = strides(dims);
    let offs = factor_offsets(dims, &st, factors);
    assert_eq!(
        offs.len(),
        m.dim(),
        "operator dimension does not match its support"
    );
    let mut buf = vec![ZERO; offs.len()];
    for_each_base(dims, &st, factors, |base| {
        apply_at(amps, m, base, &offs, &mut buf)
    });
}

/// Applies `table[c]` to `targets` wherever the `controls` factors hold the
/// joint value `c`; `None` entries act as the identity.
pub fn apply_conditioned(
    amps: &mut [C64],
    dims: &[usize],
    targets: &[usize],
    controls: &[usize],
    table: &[Option<&ComplexMatrix>],
) {
    let st = strides(dims);
    let toffs = factor_offsets(dims, &st, targets);
    let coffs = factor_offsets(dims, &st, controls);
    assert_eq!(coffs.len(), table.len(), "control table size mismatch");
    let mut buf = vec![ZERO; toffs.len()];
    let mut excluded = targets.to_vec();
    excluded.extend_from_slice(controls);
    for_each_base(dims, &st, &excluded, |base| {
        for (c, m) in table.iter().enumerate() {
            if let Some(m) = m {
                apply_at(amps, m, base + coffs[c], &toffs, &mut buf);
            }
        }
    });
}

#[cfg(test)]
mod tests {
    use super::super::matrix::{gates, ONE};
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Oracle: build the full operator `P (m ⊗ I) P†` by explicit index
    /// arithmetic and multiply.
    fn dense_oracle(
        amps: &[C64],
        dims: &[usize],
        factors: &[usize],
        m: &ComplexMatrix,
    ) -> Vec<C64> {
        let total: usize = dims.iter().product();
        let decode = |mut x: usize| {
            let mut d = vec![0; dims.len()];
            for i in (0..dims.len()).rev() {
                d[i] = x % dims[i];
                x /= dims[i];
            }
            d
        };
        let sub = |d: &[usize]| factors.iter().fold(0, |acc, &f| acc * dims[f] + d[f]);
        let mut out = vec![ZERO; total];
        for col in 0..total {
            let dc = decode(col);
            for row in 0..total {
                let dr = decode(row);
                let same_rest = (0..dims.len()).all(|i| factors.contains(&i) || dr[i] == dc[i]);
                if same_rest {
                    out[row] += m.get(sub(&dr), sub(&dc)) * amps[col];
                }
            }
        }
        out
    }

    fn random_vec(n: usize, rng: &mut impl Rng) -> Vec<C64> {
        (0..n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    fn random_matrix(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
        ComplexMatrix::new(n, random_vec(n * n, rng)).unwrap()
    }

    #[test]
    fn strides_big_endian() {
        assert_eq!(strides(&[2, 3, 4]), vec![12, 4, 1]);
    }

    #[test]
    fn swap_on_reordered_factors() {
        let dims = [2, 2, 2];
        let mut v = vec![ZERO; 8];
        v[0b100] = ONE;
        apply_dense(&mut v, &dims, &[2, 0], &gates::swap(2));
        assert_eq!(v[0b001], ONE);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn dense_matches_oracle(seed in 0u64..100_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let nf = rng.gen_range(1..5);
            let dims: Vec<usize> = (0..nf).map(|_| rng.gen_range(1..4)).collect();
            let mut idx: Vec<usize> = (0..nf).collect();
            for i in (1..nf).rev() { idx.swap(i, rng.gen_range(0..=i)); }
            let k = rng.gen_range(1..=nf);
            let factors = &idx[..k];
            let sz: usize = factors.iter().map(|&f| dims[f]).product();
            let m = random_matrix(sz, &mut rng);
            let v = random_vec(dims.iter().product(), &mut rng);
            let expect = dense_oracle(&v, &dims, factors, &m);
            let mut got = v.clone();
            apply_dense(&mut got, &dims, factors, &m);
            for (a, b) in got.iter().zip(&expect) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }

        #[test]
        fn conditioned_matches_block_diagonal_oracle(seed in 0u64..100_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dims = vec![2, 3, 2, 2];
            let targets = [2usize, 0];
            let controls = [1usize];
            let mats: Vec<Option<ComplexMatrix>> = (0..3)
                .map(|_| if rng.gen_bool(0.7) { Some(random_matrix(4, &mut rng)) } else { None })
                .collect();
            // oracle: the controlled operator as one dense matrix on factors (1, 2, 0)
            let mut big = ComplexMatrix::zeros(12);
            for c in 0..3 {
                for i in 0..4 {
                    for j in 0..4 {
                        let z = match &mats[c] { Some(m) => m.get(i, j), None => if i == j { ONE } else { ZERO } };
                        big.set(c * 4 + i, c * 4 + j, z);
                    }
                }
            }
            let v = random_vec(24, &mut rng);
            let expect = dense_oracle(&v, &dims, &[1, 2, 0], &big);
            let table: Vec<Option<&ComplexMatrix>> = mats.iter().map(|m| m.as_ref()).collect();
            let mut got = v.clone();
            apply_conditioned(&mut got, &dims, &targets, &controls, &table);
            for (a, b) in got.iter().zip(&expect) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
