use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::coloring::{cqca_period, Coloring, CqcaDefinition, SymmetricRule};
use crate::engine::{init_region_with, Limits, RegionState};
use crate::error::{invalid, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::model::{BlockInitializer, Boundary, CellLayout, Fill, Region};

/// Cell values of the amplification automaton. The basis index of each
/// variant is its position: quiescent 0, `+1` is 1, `-1` is 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Spin {
    Quiescent,
    Plus,
    Minus,
}

impl Spin {
    pub fn from_index(i: usize) -> Option<Self> {
        [Self::Quiescent, Self::Plus, Self::Minus].get(i).copied()
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn value(self) -> i32 {
        match self {
            Self::Quiescent => 0,
            Self::Plus => 1,
            Self::Minus => -1,
        }
    }
}

/// Cube of side `side` filled with `-1`, except the corner at the origin,
/// which holds `alpha|+1⟩ + beta|-1⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplificationSpec {
    pub side: usize,
    pub flip_set: BTreeSet<i32>,
    pub alpha: C64,
    pub beta: C64,
    /// Give up after this many periods.
    pub max_periods: usize,
}

impl AmplificationSpec {
    pub fn new(side: usize) -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            side,
            flip_set: [-2, -1, 0].into(),
            alpha: r.into(),
            beta: r.into(),
            max_periods: 256,
        }
    }

    fn check(&self) -> Result<()> {
        if self.side < 2 {
            return invalid("cube side must be at least 2");
        }
        if self.flip_set.iter().any(|v| v.abs() > 6) {
            return invalid("flip set must lie in [-6, 6]");
        }
        if (self.alpha.norm_sqr() + self.beta.norm_sqr() - 1.0).abs() > 1e-10 {
            return invalid("corner state must have unit norm");
        }
        Ok(())
    }

    pub fn region(&self) -> Region {
        Region::cube(3, self.side, Boundary::Quiescent).unwrap()
    }
}

/// Checkerboard 3D automaton over 3-state cells: a `±1` cell flips sign iff
/// the sum of its six neighbors (quiescent counts 0) is in the flip set.
pub fn amplification_cqca(spec: &AmplificationSpec) -> Result<CqcaDefinition> {
    spec.check()?;
    let layout = CellLayout::qudit(3)?;
    let flip = ComplexMatrix::permutation(3, |i| [0, 2, 1][i]);
    let set = spec.flip_set.clone();
    let rule = SymmetricRule::new(&layout, 3, move |nb| {
        let sum: i32 = nb
            .iter()
            .map(|&i| Spin::from_index(i).unwrap().value())
            .sum();
        set.contains(&sum).then(|| flip.clone())
    })?;
    let op = rule.into_operator();
    CqcaDefinition::new(
        layout,
        Coloring::checkerboard(3),
        vec![op.clone(), op],
        vec![0, 1],
        Some(0),
    )
}

/// The demo's input state.
pub fn amplification_state(spec: &AmplificationSpec, limits: Limits) -> Result<RegionState> {
    spec.check()?;
    let init = BlockInitializer::new(3, 1, Fill::Basis(Spin::Minus.index()))?.with_block(
        vec![0, 0, 0],
        vec![C64::new(0.0, 0.0), spec.alpha, spec.beta],
    )?;
    init_region_with(
        &init,
        &spec.region(),
        &CellLayout::qudit(3)?,
        Some(0),
        limits,
    )
}

/// Outcome of the amplification demo. Periods are full two-phase cycles.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmplificationReport {
    pub side: usize,
    pub reached_fixed_point: bool,
    /// Periods until the all-`+1` cube, or periods simulated otherwise.
    pub steps: usize,
    /// The `+1`-corner orbit revisited an earlier configuration.
    pub cycled: bool,
    /// Cells flipped in each period of the `+1`-corner orbit.
    pub flips: Vec<usize>,
    /// `|⟨α +…+ + β −…−|ψ(steps)⟩|^2`.
    pub fidelity: f64,
    pub final_plus: Vec<Spin>,
    pub final_minus: Vec<Spin>,
}

impl AmplificationReport {
    /// `# luqca-amplification v1`, then `period,flipped` rows.
    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "# luqca-amplification v1 side={}\nperiod,flipped\n",
            self.side
        );
        for (t, f) in self.flips.iter().enumerate() {
            s.push_str(&format!("{},{f}\n", t + 1));
        }
        s
    }
}

fn configuration(state: &RegionState) -> Vec<usize> {
    let e = state.entries();
    debug_assert_eq!(e.len(), 1);
    e.into_iter().next().map(|(d, _)| d).unwrap_or_default()
}

fn basis_orbit(
    cqca: &CqcaDefinition,
    region: &Region,
    start: Vec<usize>,
    periods: usize,
) -> Result<Vec<Vec<usize>>> {
    let a: Vec<Vec<usize>> = start.iter().map(|&v| vec![v]).collect();
    let mut s = RegionState::basis(region, cqca.layout(), &a, Limits::default())?.into_sparse();
    let mut out = vec![start];
    for _ in 0..periods {
        cqca_period(&mut s, cqca)?;
        out.push(configuration(&s));
    }
    Ok(out)
}

/// Runs the two basis configurations of the input (corner `+1`, corner
/// `-1`) through the automaton and combines them by linearity.
pub fn amplification_demo(spec: &AmplificationSpec) -> Result<AmplificationReport> {
    let cqca = amplification_cqca(spec)?;
    let region = spec.region();
    let n = region.len();
    let all = |s: Spin| vec![s.index(); n];
    let mut plus = all(Spin::Minus);
    plus[0] = Spin::Plus.index();

    let a: Vec<Vec<usize>> = plus.iter().map(|&v| vec![v]).collect();
    let mut s = RegionState::basis(&region, cqca.layout(), &a, Limits::default())?.into_sparse();
    let mut seen = HashSet::from([plus.clone()]);
    let mut cur = plus;
    let mut flips = vec![];
    let (mut reached, mut cycled) = (false, false);
    while flips.len() < spec.max_periods {
        cqca_period(&mut s, &cqca)?;
        let next = configuration(&s);
        flips.push(cur.iter().zip(&next).filter(|(a, b)| a != b).count());
        cur = next;
        if cur == all(Spin::Plus) {
            reached = true;
            break;
        }
        if !seen.insert(cur.clone()) {
            cycled = true;
            break;
        }
    }
    let steps = flips.len();
    let minus = basis_orbit(&cqca, &region, all(Spin::Minus), steps)?
        .pop()
        .unwrap();

    let delta = |x: &[usize], s: Spin| if x == all(s).as_slice() { 1.0 } else { 0.0 };
    let (al, be) = (spec.alpha, spec.beta);
    let overlap = al.conj() * al * delta(&cur, Spin::Plus)
        + al.conj() * be * delta(&minus, Spin::Plus)
        + be.conj() * al * delta(&cur, Spin::Minus)
        + be.conj() * be * delta(&minus, Spin::Minus);
    let spins = |x: &[usize]| x.iter().map(|&i| Spin::from_index(i).unwrap()).collect();
    Ok(AmplificationReport {
        side: spec.side,
        reached_fixed_point: reached,
        steps,
        cycled,
        flips,
        fidelity: overlap.norm_sqr(),
        final_plus: spins(&cur),
        final_minus: spins(&minus),
    })
}
