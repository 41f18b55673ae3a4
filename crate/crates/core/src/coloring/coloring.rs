use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::Coord;

/// Periodic coloring of `Z^d`: `color(x) = colors[x mod period]`, the
/// period box indexed lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ColoringRepr", into = "ColoringRepr")]
pub struct Coloring {
    period: Vec<usize>,
    colors: Vec<usize>,
    k: usize,
}

#[derive(Serialize, Deserialize)]
struct ColoringRepr {
    period: Vec<usize>,
    colors: Vec<usize>,
    k: usize,
}

impl TryFrom<ColoringRepr> for Coloring {
    type Error = String;

    fn try_from(r: ColoringRepr) -> std::result::Result<Self, String> {
        Self::new(r.period, r.colors, r.k).map_err(|e| e.to_string())
    }
}

impl From<Coloring> for ColoringRepr {
    fn from(c: Coloring) -> Self {
        Self {
            period: c.period,
            colors: c.colors,
            k: c.k,
        }
    }
}

impl Coloring {
    pub fn new(period: Vec<usize>, colors: Vec<usize>, k: usize) -> Result<Self> {
        if period.is_empty() || period.contains(&0) {
            return invalid("period must be positive on every axis");
        }
        let n: usize = period.iter().product();
        if colors.len() != n {
            return invalid(format!(
                "expected {n} colors for one period, got {}",
                colors.len()
            ));
        }
        if k == 0 || colors.iter().any(|&c| c >= k) {
            return invalid(format!("colors must lie in [0, {k})"));
        }
        Ok(Self { period, colors, k })
    }

    /// `(x_1 + … + x_d) mod 2`.
    pub fn checkerboard(dim: usize) -> Self {
        let period = vec![2; dim];
        let n = 1 << dim;
        let colors = (0..n).map(|i: usize| i.count_ones() as usize % 2).collect();
        Self::new(period, colors, 2).unwrap()
    }

    /// `x mod k` in one dimension.
    pub fn cyclic(k: usize) -> Self {
        Self::new(vec![k], (0..k).collect(), k).unwrap()
    }

    pub fn dimension(&self) -> usize {
        self.period.len()
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn color(&self, x: &[i64]) -> usize {
        let idx = x
            .iter()
            .zip(&self.period)
            .fold(0, |a, (&c, &p)| a * p + c.rem_euclid(p as i64) as usize);
        self.colors[idx]
    }

    /// Cells of one period box, lexicographic.
    pub fn period_cells(&self) -> Vec<Coord> {
        let n: usize = self.period.iter().product();
        (0..n)
            .map(|mut i| {
                let mut c = vec![0i64; self.dimension()];
                for a in (0..self.dimension()).rev() {
                    c[a] = (i % self.period[a]) as i64;
                    i /= self.period[a];
                }
                c
            })
            .collect()
    }

    /// Colors of `p + o` for every offset, for every `p` of the period.
    pub fn patterns(&self, offsets: &[Coord]) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .period_cells()
            .iter()
            .map(|p| offsets.iter().map(|o| self.color(&add(p, o))).collect())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// True if no translate of `offsets` holds two cells of the same color.
    pub fn distinguishes(&self, offsets: &[Coord]) -> bool {
        self.period_cells().iter().all(|p| {
            let mut cs: Vec<usize> = offsets.iter().map(|o| self.color(&add(p, o))).collect();
            cs.sort();
            cs.windows(2).all(|w| w[0] != w[1])
        })
    }
}

pub(crate) fn add(a: &[i64], b: &[i64]) -> Coord {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// True iff cells at Manhattan distance 1 always get different colors,
/// checked over one period including the wrap seams.
pub fn validate_coloring(col: &Coloring) -> bool {
    let d = col.dimension();
    col.period_cells().iter().all(|p| {
        (0..d).all(|a| {
            let mut q = p.clone();
            q[a] += 1;
            col.color(p) != col.color(&q)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(validate_coloring(&Coloring::cyclic(2)));
        assert!(!validate_coloring(
            &Coloring::new(vec![1], vec![0], 1).unwrap()
        ));
        assert!(!validate_coloring(
            &Coloring::new(vec![1, 1], vec![0], 1).unwrap()
        ));
        assert!(validate_coloring(&Coloring::checkerboard(3)));
        // odd period breaks the seam
        assert!(!validate_coloring(
            &Coloring::new(vec![3], vec![0, 1, 0], 2).unwrap()
        ));
    }

    #[test]
    fn checkerboard_is_coordinate_parity() {
        let c = Coloring::checkerboard(3);
        for x in -2..3i64 {
            for y in -2..3i64 {
                for z in -2..3i64 {
                    assert_eq!(c.color(&[x, y, z]), (x + y + z).rem_euclid(2) as usize);
                }
            }
        }
    }
}
