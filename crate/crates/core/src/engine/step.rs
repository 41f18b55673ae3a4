use crate::engine::apply::{apply_rule, PadCache, Support};
use crate::engine::state::RegionState;
use crate::error::{invalid, structural, Result};
use crate::model::{Boundary, Coord, QcaDefinition, Region};

/// Cells whose read operator is applied in a step: every region cell on a
/// torus, every cell whose neighborhood meets the region otherwise.
/// Lexicographic order.
pub fn read_sites(region: &Region, qca: &QcaDefinition) -> Vec<Coord> {
    let n = qca.neighborhood();
    match region.boundary() {
        Boundary::Torus => region.cells(),
        Boundary::Quiescent => {
            let d = region.dimension();
            let below: Vec<usize> = (0..d).map(|a| n.max(a).max(0) as usize).collect();
            let above: Vec<usize> = (0..d).map(|a| (-n.min(a)).max(0) as usize).collect();
            region
                .grow(&below, &above)
                .cells()
                .into_iter()
                .filter(|x| {
                    n.offsets().iter().any(|o| {
                        let c: Coord = o.iter().zip(x).map(|(a, b)| a + b).collect();
                        region.contains(&c)
                    })
                })
                .collect()
        }
    }
}

fn check(state: &RegionState, qca: &QcaDefinition) -> Result<()> {
    if state.layout != *qca.layout() {
        return structural("state layout differs from the automaton's layout");
    }
    state.region.check_against(qca.neighborhood())
}

/// One step `R = V·∏U_x` with the read operators in lexicographic order.
pub fn step(state: &mut RegionState, qca: &QcaDefinition) -> Result<()> {
    let sites = read_sites(&state.region, qca);
    step_inner(state, qca, &sites, &mut PadCache::default())
}

/// One step with the read operators applied in the given order, which must
/// be a permutation of [`read_sites`].
pub fn step_ordered(state: &mut RegionState, qca: &QcaDefinition, order: &[Coord]) -> Result<()> {
    let mut want = read_sites(&state.region, qca);
    let mut got = order.to_vec();
    want.sort();
    got.sort();
    if want != got {
        return invalid("order must be a permutation of the read sites");
    }
    step_inner(state, qca, order, &mut PadCache::default())
}

fn step_inner(
    state: &mut RegionState,
    qca: &QcaDefinition,
    sites: &[Coord],
    cache: &mut PadCache,
) -> Result<()> {
    check(state, qca)?;
    let offsets = qca.neighborhood().offsets();
    for x in sites {
        let sup = Support::at(state, x, offsets);
        apply_rule(state, qca.u_rule().as_ref(), &sup, qca.quiescent(), cache)?;
    }
    let zero = vec![vec![0; qca.dimension()]];
    for x in state.region.cells() {
        let sup = Support::at(state, &x, &zero);
        apply_rule(state, qca.v_rule().as_ref(), &sup, qca.quiescent(), cache)?;
    }
    state.t += 1;
    Ok(())
}

/// `t` steps.
pub fn run(state: &mut RegionState, qca: &QcaDefinition, t: usize) -> Result<()> {
    let sites = read_sites(&state.region, qca);
    let mut cache = PadCache::default();
    for _ in 0..t {
        step_inner(state, qca, &sites, &mut cache)?;
    }
    Ok(())
}

/// `t` steps, calling `observe` on the initial state and after every step.
pub fn run_observed(
    state: &mut RegionState,
    qca: &QcaDefinition,
    t: usize,
    mut observe: impl FnMut(&RegionState) -> Result<()>,
) -> Result<()> {
    let sites = read_sites(&state.region, qca);
    let mut cache = PadCache::default();
    observe(state)?;
    for _ in 0..t {
        step_inner(state, qca, &sites, &mut cache)?;
        observe(state)?;
    }
    Ok(())
}
