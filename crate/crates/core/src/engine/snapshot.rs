use serde::{Deserialize, Serialize};

use crate::engine::state::{Limits, RegionState};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::model::{CellLayout, Region, Register};

pub const DEFAULT_THRESHOLD: f64 = 1e-12;

/// JSON form of a state: `[global basis index, re, im]` for every amplitude
/// with modulus above the threshold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub format: String,
    pub version: u32,
    pub region: Region,
    pub layout: Vec<Register>,
    pub step: u64,
    pub classical: Vec<usize>,
    pub amplitudes: Vec<(u128, f64, f64)>,
}

impl Snapshot {
    pub fn of(state: &RegionState, threshold: f64) -> Self {
        let mut amplitudes: Vec<(u128, f64, f64)> = state
            .entries()
            .into_iter()
            .filter(|(_, z)| z.norm() > threshold)
            .map(|(d, z)| (state.global_index(&d), z.re, z.im))
            .collect();
        amplitudes.sort_by_key(|a| a.0);
        Self {
            format: "luqca-snapshot".into(),
            version: 1,
            region: state.region().clone(),
            layout: state.layout().registers().to_vec(),
            step: state.step_count(),
            classical: state.classical().to_vec(),
            amplitudes,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("snapshot serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let snap: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if snap.format != "luqca-snapshot" || snap.version != 1 {
            return Err(Error::Parse(format!(
                "unsupported snapshot format {} v{}",
                snap.format, snap.version
            )));
        }
        Ok(snap)
    }

    /// Rebuilds the state (amplitudes below the threshold are gone).
    pub fn to_state(&self, limits: Limits) -> Result<RegionState> {
        let layout = CellLayout::new(self.layout.clone())?;
        let mut state = RegionState::empty(&self.region, &layout, self.classical.clone(), limits)?;
        state.t = self.step;
        let d = layout.cell_dimension() as u128;
        let n = self.region.len();
        let nq = layout.quantum_registers().len();
        let nc = layout.classical_registers().len();
        for &(idx, re, im) in &self.amplitudes {
            let mut rem = idx;
            let mut digits = vec![0usize; n * nq];
            for cell in (0..n).rev() {
                let vals = layout.decode((rem % d) as usize);
                rem /= d;
                let cl: Vec<usize> = layout
                    .classical_registers()
                    .iter()
                    .map(|&r| vals[r])
                    .collect();
                if cl != self.classical[cell * nc..(cell + 1) * nc] {
                    return Err(Error::Parse(format!(
                        "amplitude {idx} disagrees with the classical registers"
                    )));
                }
                for (k, &r) in layout.quantum_registers().iter().enumerate() {
                    digits[cell * nq + k] = vals[r];
                }
            }
            if rem != 0 {
                return Err(Error::Parse(format!("basis index {idx} out of range")));
            }
            state.set_amplitude_digits(&digits, C64::new(re, im));
        }
        Ok(state)
    }

    /// `# luqca-snapshot v1` header, then `index,re,im` rows.
    pub fn to_csv(&self) -> String {
        let mut s = format!("# luqca-snapshot v1 step={}\nindex,re,im\n", self.step);
        for (i, re, im) in &self.amplitudes {
            s.push_str(&format!("{i},{re:e},{im:e}\n"));
        }
        s
    }
}

/// Table of per-cell observable values, one row per (step, cell).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObservableTable {
    pub name: String,
    pub rows: Vec<(u64, Vec<i64>, f64)>,
}

impl ObservableTable {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            rows: vec![],
        }
    }

    /// Appends `⟨O⟩` for every cell of the state.
    pub fn record(
        &mut self,
        state: &RegionState,
        observable: &crate::linalg::ComplexMatrix,
    ) -> Result<()> {
        for c in state.cells() {
            let v = crate::engine::expectation(state, &c, observable)?;
            self.rows.push((state.step_count(), c, v));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!(
            "# luqca-observable v1 name={}\nstep,cell,value\n",
            self.name
        );
        for (t, c, v) in &self.rows {
            let c: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{t},{},{v:e}\n", c.join(" ")));
        }
        s
    }
}

impl RegionState {
    pub(crate) fn set_amplitude_digits(&mut self, digits: &[usize], z: C64) {
        use crate::engine::state::Amplitudes;
        match &mut self.amps {
            Amplitudes::Dense(v) => {
                let i = digits
                    .iter()
                    .zip(&self.dims)
                    .fold(0, |a, (&x, &d)| a * d + x);
                v[i] = z;
            }
            Amplitudes::Sparse(m) => {
                m.insert(digits.iter().map(|&x| x as u8).collect(), z);
            }
        }
    }
}
