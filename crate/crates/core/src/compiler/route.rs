use crate::compiler::circuit::{Circuit, Gate};
use crate::error::{invalid, Result};
use crate::linalg::gates;

/// Equivalent circuit whose two-wire gates act on wires adjacent in
/// `order` (`order[p]` is the wire at position `p`). Distant partners are
/// brought together by swaps, which are undone after the gate.
pub fn route_nearest_neighbor(c: &Circuit, order: &[usize]) -> Result<Circuit> {
    let n = c.wires();
    let mut pos = vec![usize::MAX; n];
    for (p, &w) in order.iter().enumerate() {
        if w >= n || pos[w] != usize::MAX {
            return invalid("order must be a permutation of the wires");
        }
        pos[w] = p;
    }
    if order.len() != n {
        return invalid("order must be a permutation of the wires");
    }
    if c.layers().iter().flatten().any(|g| g.wires.len() > 2) {
        return invalid("routing handles gates on at most two wires");
    }
    let adjacent = |g: &Gate| g.wires.len() < 2 || pos[g.wires[0]].abs_diff(pos[g.wires[1]]) == 1;
    if c.layers().iter().flatten().all(adjacent) {
        return Ok(c.clone());
    }
    let mut out = Circuit::new(c.wire_dims().to_vec());
    for layer in c.layers() {
        for g in layer {
            if adjacent(g) {
                out.push_asap(g.clone())?;
                continue;
            }
            let (a, b) = (g.wires[0], g.wires[1]);
            let (pa, pb) = (pos[a], pos[b]);
            // walk b's content toward a
            let path: Vec<usize> = if pb > pa {
                (pa + 1..pb).rev().collect()
            } else {
                (pb + 1..pa).collect()
            };
            let mut swaps = Vec::new();
            let mut at = pb;
            for p in path {
                let (x, y) = (order[at], order[p]);
                if c.wire_dims()[x] != c.wire_dims()[y] {
                    return invalid("swap routing needs equal wire dimensions");
                }
                let s = Gate::new("SWAP", vec![x, y], gates::swap(c.wire_dims()[x]));
                out.push_asap(s.clone())?;
                swaps.push(s);
                at = p;
            }
            out.push_asap(Gate::new(&g.name, vec![a, order[at]], g.matrix.clone()))?;
            for s in swaps.into_iter().rev() {
                out.push_asap(s)?;
            }
        }
    }
    Ok(out)
}
