use serde::{Deserialize, Serialize};

use crate::error::{invalid, structural, Result};

pub type Coord = Vec<i64>;

/// Finite neighborhood `N ⊂ Z^d`. Offsets are kept sorted lexicographically;
/// the factors of a read operator follow this order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "NeighborhoodRepr", into = "NeighborhoodRepr")]
pub struct NeighborhoodScheme {
    dim: usize,
    offsets: Vec<Coord>,
}

#[derive(Serialize, Deserialize)]
struct NeighborhoodRepr {
    dim: usize,
    offsets: Vec<Coord>,
}

impl TryFrom<NeighborhoodRepr> for NeighborhoodScheme {
    type Error = crate::Error;
    fn try_from(r: NeighborhoodRepr) -> Result<Self> {
        Self::new(r.dim, r.offsets)
    }
}

impl From<NeighborhoodScheme> for NeighborhoodRepr {
    fn from(n: NeighborhoodScheme) -> Self {
        Self {
            dim: n.dim,
            offsets: n.offsets,
        }
    }
}

impl NeighborhoodScheme {
    pub fn new(dim: usize, mut offsets: Vec<Coord>) -> Result<Self> {
        if dim == 0 {
            return structural("lattice dimension must be at least 1");
        }
        if let Some(o) = offsets.iter().find(|o| o.len() != dim) {
            return structural(format!("offset {o:?} does not have {dim} components"));
        }
        offsets.sort();
        if offsets.windows(2).any(|w| w[0] == w[1]) {
            return structural("neighborhood offsets must be distinct");
        }
        if !offsets.iter().any(|o| o.iter().all(|&x| x == 0)) {
            return structural("neighborhood must contain the zero offset");
        }
        Ok(Self { dim, offsets })
    }

    /// Offsets with `‖x‖₁ ≤ 1`.
    pub fn von_neumann(dim: usize) -> Self {
        let mut offs = vec![vec![0; dim]];
        for a in 0..dim {
            for s in [-1, 1] {
                let mut o = vec![0; dim];
                o[a] = s;
                offs.push(o);
            }
        }
        Self::new(dim, offs).unwrap()
    }

    /// `{0, 1}` in one dimension.
    pub fn right_pair() -> Self {
        Self::new(1, vec![vec![0], vec![1]]).unwrap()
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn offsets(&self) -> &[Coord] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn index_of(&self, offset: &[i64]) -> Option<usize> {
        self.offsets
            .binary_search_by(|o| o.as_slice().cmp(offset))
            .ok()
    }

    pub fn zero_index(&self) -> usize {
        self.index_of(&vec![0; self.dim]).unwrap()
    }

    pub fn min(&self, axis: usize) -> i64 {
        self.offsets.iter().map(|o| o[axis]).min().unwrap()
    }

    pub fn max(&self, axis: usize) -> i64 {
        self.offsets.iter().map(|o| o[axis]).max().unwrap()
    }

    pub fn diameter(&self, axis: usize) -> usize {
        (self.max(axis) - self.min(axis) + 1) as usize
    }

    /// Nonzero differences `a − b` for `a, b ∈ N`, sorted.
    pub fn differences(&self) -> Vec<Coord> {
        let mut out: Vec<Coord> = Vec::new();
        for a in &self.offsets {
            for b in &self.offsets {
                let d: Coord = a.iter().zip(b).map(|(x, y)| x - y).collect();
                if d.iter().any(|&x| x != 0) {
                    out.push(d);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Everything outside the region is held in the quiescent state.
    Quiescent,
    /// Coordinates wrap around.
    Torus,
}

/// Box of cells `lower ..= upper` with a boundary mode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    lower: Coord,
    upper: Coord,
    boundary: Boundary,
}

impl Region {
    pub fn new(lower: Coord, upper: Coord, boundary: Boundary) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return structural("region corners must be nonempty and of equal dimension");
        }
        if lower.iter().zip(&upper).any(|(a, b)| a > b) {
            return structural(format!(
                "region lower corner {lower:?} exceeds upper corner {upper:?}"
            ));
        }
        Ok(Self {
            lower,
            upper,
            boundary,
        })
    }

    /// `0 ..= n−1` in one dimension.
    pub fn line(n: usize, boundary: Boundary) -> Result<Self> {
        if n == 0 {
            return invalid("empty region");
        }
        Self::new(vec![0], vec![n as i64 - 1], boundary)
    }

    /// Cube `[0, side)^dim`.
    pub fn cube(dim: usize, side: usize, boundary: Boundary) -> Result<Self> {
        if side == 0 {
            return invalid("empty region");
        }
        Self::new(vec![0; dim], vec![side as i64 - 1; dim], boundary)
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[i64] {
        &self.lower
    }

    pub fn upper(&self) -> &[i64] {
        &self.upper
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn with_boundary(&self, boundary: Boundary) -> Self {
        Self {
            boundary,
            ..self.clone()
        }
    }

    pub fn axis_len(&self, axis: usize) -> usize {
        (self.upper[axis] - self.lower[axis] + 1) as usize
    }

    pub fn shape(&self) -> Vec<usize> {
        (0..self.dimension()).map(|a| self.axis_len(a)).collect()
    }

    pub fn len(&self) -> usize {
        self.shape().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, c: &[i64]) -> bool {
        c.len() == self.dimension()
            && c.iter()
                .enumerate()
                .all(|(a, &x)| self.lower[a] <= x && x <= self.upper[a])
    }

    /// Index of `c` in lexicographic cell order, if inside.
    pub fn index_of(&self, c: &[i64]) -> Option<usize> {
        if !self.contains(c) {
            return None;
        }
        Some((0..self.dimension()).fold(0, |acc, a| {
            acc * self.axis_len(a) + (c[a] - self.lower[a]) as usize
        }))
    }

    pub fn coord_of(&self, mut index: usize) -> Coord {
        let d = self.dimension();
        let mut c = vec![0; d];
        for a in (0..d).rev() {
            let n = self.axis_len(a);
            c[a] = self.lower[a] + (index % n) as i64;
            index /= n;
        }
        c
    }

    /// All cells in lexicographic order.
    pub fn cells(&self) -> Vec<Coord> {
        (0..self.len()).map(|i| self.coord_of(i)).collect()
    }

    /// Reduces `c` into the box along every axis.
    pub fn wrap(&self, c: &[i64]) -> Coord {
        c.iter()
            .enumerate()
            .map(|(a, &x)| {
                let n = self.axis_len(a) as i64;
                self.lower[a] + (x - self.lower[a]).rem_euclid(n)
            })
            .collect()
    }

    /// Index of `c` after wrapping (torus) or `None` if outside (quiescent).
    pub fn resolve(&self, c: &[i64]) -> Option<usize> {
        match self.boundary {
            Boundary::Torus => self.index_of(&self.wrap(c)),
            Boundary::Quiescent => self.index_of(c),
        }
    }

    /// Extends the box by `below[a]` and `above[a]` cells on each axis.
    pub fn grow(&self, below: &[usize], above: &[usize]) -> Self {
        let lower = self
            .lower
            .iter()
            .zip(below)
            .map(|(&x, &b)| x - b as i64)
            .collect();
        let upper = self
            .upper
            .iter()
            .zip(above)
            .map(|(&x, &b)| x + b as i64)
            .collect();
        Self {
            lower,
            upper,
            boundary: self.boundary,
        }
    }

    /// Checks that torus axes are at least as long as the neighborhood diameter.
    pub fn check_against(&self, n: &NeighborhoodScheme) -> Result<()> {
        if n.dimension() != self.dimension() {
            return structural(format!(
                "region has dimension {} but the neighborhood has dimension {}",
                self.dimension(),
                n.dimension()
            ));
        }
        if self.boundary == Boundary::Torus {
            for a in 0..self.dimension() {
                if self.axis_len(a) < n.diameter(a) {
                    return structural(format!(
                        "torus axis {a} has length {} but the neighborhood diameter is {}",
                        self.axis_len(a),
                        n.diameter(a)
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_offset_required() {
        assert!(NeighborhoodScheme::new(1, vec![vec![1]]).is_err());
        assert!(NeighborhoodScheme::new(1, vec![vec![0], vec![0]]).is_err());
    }

    #[test]
    fn offsets_sorted() {
        let n = NeighborhoodScheme::new(1, vec![vec![1], vec![-1], vec![0]]).unwrap();
        assert_eq!(n.offsets(), &[vec![-1], vec![0], vec![1]]);
        assert_eq!(n.diameter(0), 3);
        assert_eq!(n.differences(), vec![vec![-2], vec![-1], vec![1], vec![2]]);
    }

    #[test]
    fn region_index_roundtrip() {
        let r = Region::new(vec![-1, 2], vec![1, 5], Boundary::Torus).unwrap();
        assert_eq!(r.len(), 12);
        for i in 0..12 {
            assert_eq!(r.index_of(&r.coord_of(i)), Some(i));
        }
        assert_eq!(r.resolve(&[2, 6]), r.index_of(&[-1, 2]));
    }

    #[test]
    fn torus_too_small() {
        let r = Region::line(2, Boundary::Torus).unwrap();
        assert!(r
            .check_against(&NeighborhoodScheme::von_neumann(1))
            .is_err());
        assert!(r
            .with_boundary(Boundary::Quiescent)
            .check_against(&NeighborhoodScheme::von_neumann(1))
            .is_ok());
    }
}
