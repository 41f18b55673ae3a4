use crate::engine::{Limits, RegionState};
use crate::error::{invalid, Result};
use crate::linalg::{gates, ComplexMatrix, C64};
use crate::model::{CellLayout, NeighborhoodScheme, QcaDefinition, Region, Register};

const TOL: f64 = 1e-12;

/// Coin parameters of the lattice-gas walk.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkParams {
    pub p: C64,
    pub q: C64,
    pub phi: C64,
}

impl WalkParams {
    pub fn new(p: C64, q: C64, phi: C64) -> Result<Self> {
        if (p.norm_sqr() + q.norm_sqr() - 1.0).abs() > TOL {
            return invalid("need |p|^2 + |q|^2 = 1");
        }
        if (p * q.conj() + p.conj() * q).norm() > TOL {
            return invalid("need p conj(q) + conj(p) q = 0");
        }
        if (phi.norm() - 1.0).abs() > TOL {
            return invalid("need |phi| = 1");
        }
        Ok(Self { p, q, phi })
    }

    /// Mass `i p / q` of the continuum particle.
    pub fn mass(&self) -> C64 {
        C64::i() * self.p / self.q
    }

    fn coin(&self) -> ComplexMatrix {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        ComplexMatrix::from_rows(&[
            vec![o, z, z, z],
            vec![z, self.q, self.p, z],
            vec![z, self.p, self.q, z],
            vec![z, z, z, self.phi],
        ])
        .unwrap()
    }
}

fn layout() -> CellLayout {
    CellLayout::new(vec![
        Register::quantum("up", 2),
        Register::quantum("down", 2),
    ])
    .unwrap()
}

/// Walk on a line: `U0` swaps `up(x)` with `down(x+1)`, `V0` is the coin
/// after exchanging up and down. Empty cells are quiescent.
pub fn walk_qca(params: WalkParams) -> Result<QcaDefinition> {
    let params = WalkParams::new(params.p, params.q, params.phi)?;
    // digits (up0, down0, up1, down1): exchange digits 0 and 3
    let u0 = ComplexMatrix::permutation(16, |x| (x & 0b0110) | ((x & 1) << 3) | (x >> 3));
    let v0 = &params.coin() * &gates::swap(2);
    QcaDefinition::new(layout(), NeighborhoodScheme::right_pair(), u0, v0, Some(0))
}

/// Single particle at `x` (`up` selects the spin) on a 1D region.
pub fn walk_particle(region: &Region, x: i64, up: bool, limits: Limits) -> Result<RegionState> {
    let i = region
        .index_of(&[x])
        .ok_or_else(|| crate::Error::Invalid(format!("site {x} outside the region")))?;
    let mut a = vec![vec![0, 0]; region.len()];
    a[i] = if up { vec![1, 0] } else { vec![0, 1] };
    RegionState::basis(region, &layout(), &a, limits)
}

/// Single-particle amplitudes at one site.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkSite {
    pub x: i64,
    pub up: C64,
    pub down: C64,
}

/// `Ψ_u(x)`, `Ψ_d(x)` for every site: the amplitude of one particle of that
/// spin at `x` and no other particle.
pub fn walk_amplitudes(state: &RegionState) -> Result<Vec<WalkSite>> {
    if state.layout() != &layout() || state.region().dimension() != 1 {
        return invalid("not a walk state");
    }
    let n = state.region().len();
    let mut out = Vec::with_capacity(n);
    for (i, c) in state.cells().into_iter().enumerate() {
        let mut a = vec![vec![0, 0]; n];
        a[i] = vec![1, 0];
        let up = state.amplitude(&a)?;
        a[i] = vec![0, 1];
        let down = state.amplitude(&a)?;
        out.push(WalkSite { x: c[0], up, down });
    }
    Ok(out)
}

/// Per-site probabilities `|Ψ_u|^2 + |Ψ_d|^2`.
pub fn walk_csv(rows: &[(u64, Vec<WalkSite>)]) -> String {
    let mut s = String::from("# luqca-walk v1\nstep,x,p_up,p_down\n");
    for (t, sites) in rows {
        for w in sites {
            s.push_str(&format!(
                "{t},{},{:e},{:e}\n",
                w.x,
                w.up.norm_sqr(),
                w.down.norm_sqr()
            ));
        }
    }
    s
}
