use crate::error::{invalid, Result};
use crate::model::{CellLayout, Region};

/// Global basis index of a per-cell register assignment. Cells are taken in
/// lexicographic coordinate order, most significant first; within a cell the
/// registers are big-endian in declaration order.
///
/// ```
/// use luqca::model::{basis_index, Boundary, CellLayout, Region};
/// let layout = CellLayout::qudit(3).unwrap();
/// let region = Region::line(2, Boundary::Torus).unwrap();
/// assert_eq!(basis_index(&layout, &region, &[vec![2], vec![1]]).unwrap(), 7);
/// ```
pub fn basis_index(
    layout: &CellLayout,
    region: &Region,
    assignment: &[Vec<usize>],
) -> Result<u128> {
    if assignment.len() != region.len() {
        return invalid(format!(
            "expected {} cells, got {}",
            region.len(),
            assignment.len()
        ));
    }
    let d = layout.cell_dimension() as u128;
    let mut idx: u128 = 0;
    for vals in assignment {
        let c = layout.encode(vals)? as u128;
        idx = idx
            .checked_mul(d)
            .and_then(|x| x.checked_add(c))
            .ok_or_else(|| crate::Error::Invalid("basis index exceeds 128 bits".into()))?;
    }
    Ok(idx)
}

/// Inverse of [`basis_index`].
pub fn basis_decode(
    layout: &CellLayout,
    region: &Region,
    mut index: u128,
) -> Result<Vec<Vec<usize>>> {
    let d = layout.cell_dimension() as u128;
    let n = region.len();
    let mut out = vec![Vec::new(); n];
    for cell in (0..n).rev() {
        out[cell] = layout.decode((index % d) as usize);
        index /= d;
    }
    if index != 0 {
        return invalid("basis index out of range for the region");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Boundary, Register};
    use rand::{Rng, SeedableRng};

    #[test]
    fn single_qubit() {
        let l = CellLayout::qudit(2).unwrap();
        let r = Region::line(1, Boundary::Quiescent).unwrap();
        assert_eq!(basis_index(&l, &r, &[vec![1]]).unwrap(), 1);
    }

    #[test]
    fn out_of_range_value() {
        let l = CellLayout::qudit(2).unwrap();
        let r = Region::line(1, Boundary::Quiescent).unwrap();
        assert!(basis_index(&l, &r, &[vec![2]]).is_err());
        assert!(basis_decode(&l, &r, 2).is_err());
    }

    #[test]
    fn exhaustive_bijection_small_space() {
        // three 16-dimensional cells: 2^12 states
        let l = CellLayout::new(vec![
            Register::quantum("a", 2),
            Register::classical("b", 4),
            Register::quantum("c", 2),
        ])
        .unwrap();
        let r = Region::line(3, Boundary::Torus).unwrap();
        for idx in 0..4096u128 {
            let a = basis_decode(&l, &r, idx).unwrap();
            assert_eq!(basis_index(&l, &r, &a).unwrap(), idx);
        }
    }

    #[test]
    fn random_assignments_roundtrip() {
        let l =
            CellLayout::new(vec![Register::quantum("a", 3), Register::quantum("b", 5)]).unwrap();
        let r = Region::cube(2, 3, Boundary::Torus).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let a: Vec<Vec<usize>> = (0..9)
                .map(|_| vec![rng.gen_range(0..3), rng.gen_range(0..5)])
                .collect();
            let idx = basis_index(&l, &r, &a).unwrap();
            assert_eq!(basis_decode(&l, &r, idx).unwrap(), a);
        }
    }
}
