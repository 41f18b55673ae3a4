use std::sync::Arc;

use serde::Serialize;

use crate::coloring::coloring::{add, validate_coloring, Coloring};
use crate::engine::{apply_rule, PadCache, RegionState, Support};
use crate::error::{invalid, structural, Result};
use crate::linalg::{commutes_with_translations, gates, ComplexMatrix};
use crate::model::{
    all_quantum_regs, CellLayout, ClassicalControl, Coord, LocalOperator, NeighborhoodScheme,
    QcaDefinition, QuantumAction, RegRef,
};
use crate::validate::rule_unitarity;

/// Colored QCA: phase `j` applies `phases[j]` (on the radius-1 neighborhood)
/// at every cell of color `colors[j]`.
#[derive(Clone, Debug)]
pub struct CqcaDefinition {
    layout: CellLayout,
    coloring: Coloring,
    neighborhood: NeighborhoodScheme,
    phases: Vec<LocalOperator>,
    colors: Vec<usize>,
    quiescent: Option<usize>,
    rules: Vec<Arc<dyn ClassicalControl>>,
}

impl CqcaDefinition {
    pub fn new(
        layout: CellLayout,
        coloring: Coloring,
        phases: Vec<LocalOperator>,
        colors: Vec<usize>,
        quiescent: Option<usize>,
    ) -> Result<Self> {
        if !validate_coloring(&coloring) {
            return structural("coloring is not correct: two adjacent cells share a color");
        }
        if phases.is_empty() || phases.len() != colors.len() {
            return structural("need one color per phase and at least one phase");
        }
        if let Some(c) = colors.iter().find(|&&c| c >= coloring.k()) {
            return structural(format!("phase color {c} exceeds k = {}", coloring.k()));
        }
        if let Some(q) = quiescent {
            if q >= layout.cell_dimension() {
                return structural("quiescent index out of range");
            }
        }
        let neighborhood = NeighborhoodScheme::von_neumann(coloring.dimension());
        let rules = phases
            .iter()
            .map(|p| p.compile(&layout, neighborhood.len()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            layout,
            coloring,
            neighborhood,
            phases,
            colors,
            quiescent,
            rules,
        })
    }

    pub fn layout(&self) -> &CellLayout {
        &self.layout
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    pub fn neighborhood(&self) -> &NeighborhoodScheme {
        &self.neighborhood
    }

    pub fn phases(&self) -> &[LocalOperator] {
        &self.phases
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn period(&self) -> usize {
        self.phases.len()
    }

    pub fn quiescent(&self) -> Option<usize> {
        self.quiescent
    }

    pub(crate) fn rule(&self, j: usize) -> &Arc<dyn ClassicalControl> {
        &self.rules[j]
    }
}

/// Per-phase checks of a colored QCA.
#[derive(Clone, Debug, Serialize)]
pub struct CqcaReport {
    pub unitarity: Vec<f64>,
    /// `None` for controlled phases (no matrix to test).
    pub symmetric: Vec<Option<bool>>,
    /// Largest commutator between same-colored overlapping translates.
    pub same_color_commutation: Vec<f64>,
    pub pass: bool,
}

/// Unitarity, symmetry and same-color commutation of every phase. Symmetry
/// is reported but not required for `pass`.
pub fn validate_cqca(cqca: &CqcaDefinition, tol: f64) -> Result<CqcaReport> {
    let k = cqca.neighborhood.len();
    let mut unitarity = Vec::new();
    let mut symmetric = Vec::new();
    let mut same_color_commutation = Vec::new();
    for (j, phase) in cqca.phases.iter().enumerate() {
        unitarity.push(rule_unitarity(
            &cqca.layout,
            cqca.rules[j].as_ref(),
            k,
            Default::default(),
        )?);
        symmetric.push(
            phase
                .as_matrix()
                .map(|m| is_symmetric(m, &cqca.layout, cqca.coloring.dimension(), tol)),
        );
        let probe = QcaDefinition::new(
            cqca.layout.clone(),
            cqca.neighborhood.clone(),
            phase.clone(),
            ComplexMatrix::identity(cqca.layout.cell_dimension()),
            None,
        )?;
        let rep = commutes_with_translations(&probe, tol)?;
        let c = cqca.colors[j];
        let cells = cqca.coloring.period_cells();
        let worst = rep
            .offsets
            .iter()
            .filter(|o| {
                cells.iter().any(|p| {
                    cqca.coloring.color(p) == c && cqca.coloring.color(&add(p, &o.offset)) == c
                })
            })
            .map(|o| o.residual)
            .fold(0.0, f64::max);
        same_color_commutation.push(worst);
    }
    let pass = unitarity
        .iter()
        .chain(&same_color_commutation)
        .all(|&r| r <= tol);
    Ok(CqcaReport {
        unitarity,
        symmetric,
        same_color_commutation,
        pass,
    })
}

/// Symmetric update operator test on the radius-1 neighborhood (cells in
/// lexicographic offset order): `U` commutes with every swap of two
/// neighbors and is block diagonal over the neighbors' basis states.
pub fn is_symmetric(u: &ComplexMatrix, layout: &CellLayout, dim: usize, tol: f64) -> bool {
    let n = NeighborhoodScheme::von_neumann(dim);
    let k = n.len();
    let d = layout.cell_dimension();
    if u.dim() != d.pow(k as u32) {
        return false;
    }
    let z = n.zero_index();
    let digit = |x: usize, i: usize| (x / d.pow((k - 1 - i) as u32)) % d;
    // (b) no amplitude between different neighbor configurations
    let mut off = 0.0;
    for r in 0..u.dim() {
        for c in 0..u.dim() {
            if (0..k).any(|i| i != z && digit(r, i) != digit(c, i)) {
                off += u.get(r, c).norm_sqr();
            }
        }
    }
    if off.sqrt() > tol {
        return false;
    }
    // (a) invariance under swapping two neighbors
    for i in 0..k {
        for j in i + 1..k {
            if i == z || j == z {
                continue;
            }
            let swap = ComplexMatrix::permutation(u.dim(), |x| {
                let (a, b) = (digit(x, i), digit(x, j));
                let pi = d.pow((k - 1 - i) as u32);
                let pj = d.pow((k - 1 - j) as u32);
                x - a * pi - b * pj + b * pi + a * pj
            });
            if u.commutator(&swap).frobenius_norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Single-cell operator on the center, selected by the basis values of the
/// neighbors (in neighborhood order, center excluded). Quantum layouts only.
pub struct SymmetricRule {
    layout: CellLayout,
    targets: Vec<RegRef>,
    controls: Vec<RegRef>,
    table: Arc<Vec<Option<Arc<ComplexMatrix>>>>,
}

impl SymmetricRule {
    pub fn new(
        layout: &CellLayout,
        dim: usize,
        rule: impl Fn(&[usize]) -> Option<ComplexMatrix>,
    ) -> Result<Self> {
        if layout.has_classical() {
            return invalid("symmetric rules are defined on quantum layouts");
        }
        let n = NeighborhoodScheme::von_neumann(dim);
        let k = n.len();
        let z = n.zero_index();
        let d = layout.cell_dimension();
        let regs = all_quantum_regs(layout, k);
        let targets: Vec<RegRef> = regs.iter().copied().filter(|r| r.cell == z).collect();
        let controls: Vec<RegRef> = regs.iter().copied().filter(|r| r.cell != z).collect();
        let m = d.pow((k - 1) as u32);
        let mut table = Vec::with_capacity(m);
        for mut x in 0..m {
            let mut vals = vec![0; k - 1];
            for v in vals.iter_mut().rev() {
                *v = x % d;
                x /= d;
            }
            let entry = rule(&vals);
            if let Some(w) = &entry {
                if w.dim() != d {
                    return invalid(format!(
                        "rule returned a {}x{} matrix for a {d}-state cell",
                        w.dim(),
                        w.dim()
                    ));
                }
            }
            table.push(entry.map(Arc::new));
        }
        Ok(Self {
            layout: layout.clone(),
            targets,
            controls,
            table: Arc::new(table),
        })
    }

    pub fn into_operator(self) -> LocalOperator {
        LocalOperator::Controlled(Arc::new(self))
    }

    pub fn layout(&self) -> &CellLayout {
        &self.layout
    }
}

impl ClassicalControl for SymmetricRule {
    fn act(&self, _: &mut [usize]) -> QuantumAction {
        QuantumAction::Conditioned {
            targets: self.targets.clone(),
            controls: self.controls.clone(),
            table: self.table.clone(),
        }
    }

    fn name(&self) -> String {
        "symmetric".into()
    }
}

/// Cells of color `c` whose neighborhood meets the region (on a torus,
/// just the region cells of color `c`), lexicographic.
fn phase_sites(state: &RegionState, cqca: &CqcaDefinition, c: usize) -> Vec<Coord> {
    let region = state.region();
    let cells = match region.boundary() {
        crate::model::Boundary::Torus => region.cells(),
        crate::model::Boundary::Quiescent => {
            let pad = vec![1; region.dimension()];
            region
                .grow(&pad, &pad)
                .cells()
                .into_iter()
                .filter(|x| {
                    cqca.neighborhood
                        .offsets()
                        .iter()
                        .any(|o| region.contains(&add(x, o)))
                })
                .collect()
        }
    };
    cells
        .into_iter()
        .filter(|x| cqca.coloring.color(x) == c)
        .collect()
}

/// Phase `j`: the phase operator at every cell of color `colors[j]`.
pub fn cqca_step(state: &mut RegionState, cqca: &CqcaDefinition, j: usize) -> Result<()> {
    if j >= cqca.period() {
        return invalid(format!("phase {j} out of range (period {})", cqca.period()));
    }
    if state.layout() != &cqca.layout {
        return structural("state layout differs from the CQCA layout");
    }
    state.region().check_against(&cqca.neighborhood)?;
    if state.region().boundary() == crate::model::Boundary::Torus {
        for (a, &p) in cqca.coloring.period().iter().enumerate() {
            if !state.region().axis_len(a).is_multiple_of(p) {
                return structural("torus side must be a multiple of the coloring period");
            }
        }
    }
    let mut cache = PadCache::default();
    for x in phase_sites(state, cqca, cqca.colors[j]) {
        let sup = Support::at(state, &x, cqca.neighborhood.offsets());
        apply_rule(
            state,
            cqca.rules[j].as_ref(),
            &sup,
            cqca.quiescent,
            &mut cache,
        )?;
    }
    Ok(())
}

/// Phase `j` with the cells of the active color visited in `order`.
pub fn cqca_step_ordered(
    state: &mut RegionState,
    cqca: &CqcaDefinition,
    j: usize,
    order: &[Coord],
) -> Result<()> {
    let mut want = phase_sites(state, cqca, cqca.colors[j]);
    let mut got = order.to_vec();
    want.sort();
    got.sort();
    if want != got {
        return invalid("order must be a permutation of the phase's cells");
    }
    let mut cache = PadCache::default();
    for x in order {
        let sup = Support::at(state, x, cqca.neighborhood.offsets());
        apply_rule(
            state,
            cqca.rules[j].as_ref(),
            &sup,
            cqca.quiescent,
            &mut cache,
        )?;
    }
    Ok(())
}

/// One full period: phases `0..T` in order.
pub fn cqca_period(state: &mut RegionState, cqca: &CqcaDefinition) -> Result<()> {
    for j in 0..cqca.period() {
        cqca_step(state, cqca, j)?;
    }
    Ok(())
}

/// Cell-0 operator `w` lifted to the full radius-1 neighborhood.
pub fn on_center(layout: &CellLayout, dim: usize, w: &ComplexMatrix) -> ComplexMatrix {
    let n = NeighborhoodScheme::von_neumann(dim);
    let d = layout.cell_dimension();
    let z = n.zero_index();
    let left = ComplexMatrix::identity(d.pow(z as u32));
    let right = ComplexMatrix::identity(d.pow((n.len() - 1 - z) as u32));
    left.kron(w).kron(&right)
}

pub(crate) fn cnot_on(layout: &CellLayout) -> ComplexMatrix {
    let d = layout.cell_dimension();
    if d == 2 {
        gates::cnot()
    } else {
        // generalised: target += control mod d
        ComplexMatrix::permutation(d * d, |j| (j / d) * d + (j % d + j / d) % d)
    }
}
