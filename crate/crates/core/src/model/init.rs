use std::collections::BTreeMap;

use crate::error::{invalid, Result};
use crate::linalg::C64;
use crate::model::Coord;

/// What cells outside every supplied block hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fill {
    Quiescent,
    /// Cell basis index.
    Basis(usize),
}

/// Initial state built from blocks of side `k`. Block `b` covers the cells
/// `k·b ..= k·b + (k−1)` on every axis; its state is a vector over the cells
/// of the block in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockInitializer {
    k: usize,
    dim: usize,
    blocks: BTreeMap<Coord, Vec<C64>>,
    fill: Fill,
}

impl BlockInitializer {
    pub fn new(dim: usize, k: usize, fill: Fill) -> Result<Self> {
        if k == 0 || dim == 0 {
            return invalid("block side and lattice dimension must be positive");
        }
        Ok(Self {
            k,
            dim,
            blocks: BTreeMap::new(),
            fill,
        })
    }

    /// Sets the state of block `block`; the vector must have unit norm.
    pub fn with_block(mut self, block: Coord, state: Vec<C64>) -> Result<Self> {
        if block.len() != self.dim {
            return invalid(format!(
                "block coordinate {block:?} is not {}-dimensional",
                self.dim
            ));
        }
        let n: f64 = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (n - 1.0).abs() > 1e-10 {
            return invalid(format!("block state at {block:?} has norm {n}, expected 1"));
        }
        self.blocks.insert(block, state);
        Ok(self)
    }

    pub fn side(&self) -> usize {
        self.k
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn fill(&self) -> Fill {
        self.fill
    }

    pub fn blocks(&self) -> &BTreeMap<Coord, Vec<C64>> {
        &self.blocks
    }

    /// Block containing cell `c`.
    pub fn block_of(&self, c: &[i64]) -> Coord {
        c.iter().map(|&x| x.div_euclid(self.k as i64)).collect()
    }

    /// Cells of block `b` in lexicographic order.
    pub fn block_cells(&self, b: &[i64]) -> Vec<Coord> {
        let k = self.k as i64;
        let n = self.k.pow(self.dim as u32);
        (0..n)
            .map(|mut i| {
                let mut c = vec![0; self.dim];
                for a in (0..self.dim).rev() {
                    c[a] = b[a] * k + (i % self.k) as i64;
                    i /= self.k;
                }
                c
            })
            .collect()
    }
}
