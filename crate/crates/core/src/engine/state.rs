use std::collections::HashMap;

use crate::error::{invalid, Error, Result};
use crate::linalg::{C64, ONE, ZERO};
use crate::model::{CellLayout, Coord, Region};

/// Resource caps for state vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest dense amplitude vector; also bounds the entry count of a sparse state.
    pub max_amplitudes: usize,
}

pub const AMPLITUDE_CAP_ENV: &str = "LUQCA_MAX_AMPLITUDES";

impl Default for Limits {
    /// `2^24`, or the value of `LUQCA_MAX_AMPLITUDES` when set.
    fn default() -> Self {
        let max_amplitudes = std::env::var(AMPLITUDE_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(1 << 24);
        Self { max_amplitudes }
    }
}

/// Storage for the quantum part of a region state.
#[derive(Clone, Debug, PartialEq)]
pub enum Amplitudes {
    /// Full vector, big-endian over (cell, quantum register) factors.
    Dense(Vec<C64>),
    /// Nonzero amplitudes keyed by per-factor digits.
    Sparse(HashMap<Vec<u8>, C64>),
}

/// State of a finite region: quantum amplitudes over the quantum registers
/// of every cell plus definite values for the classical registers.
#[derive(Clone, Debug)]
pub struct RegionState {
    pub(crate) region: Region,
    pub(crate) layout: CellLayout,
    pub(crate) dims: Vec<usize>,
    pub(crate) amps: Amplitudes,
    pub(crate) classical: Vec<usize>,
    pub(crate) t: u64,
    pub(crate) limits: Limits,
}

impl RegionState {
    /// Basis state from per-cell register values (lexicographic cell order).
    /// Uses a dense vector when it fits under the cap, sparse storage otherwise.
    pub fn basis(
        region: &Region,
        layout: &CellLayout,
        assignment: &[Vec<usize>],
        limits: Limits,
    ) -> Result<Self> {
        if assignment.len() != region.len() {
            return invalid(format!(
                "expected {} cell assignments, got {}",
                region.len(),
                assignment.len()
            ));
        }
        let mut classical = Vec::new();
        let mut digits = Vec::new();
        for vals in assignment {
            layout.encode(vals)?;
            classical.extend(layout.classical_registers().iter().map(|&r| vals[r]));
            digits.extend(layout.quantum_registers().iter().map(|&r| vals[r]));
        }
        let mut s = Self::empty(region, layout, classical, limits)?;
        s.set_basis_digits(&digits);
        Ok(s)
    }

    /// Dense state from a quantum amplitude vector and classical values.
    pub fn from_dense(
        region: &Region,
        layout: &CellLayout,
        classical: Vec<usize>,
        amps: Vec<C64>,
        limits: Limits,
    ) -> Result<Self> {
        let mut s = Self::empty_dense(region, layout, classical, limits)?;
        let n: usize = s.dims.iter().product();
        if amps.len() != n {
            return invalid(format!("expected {n} amplitudes, got {}", amps.len()));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return invalid(format!("state has norm {norm}, expected 1"));
        }
        s.amps = Amplitudes::Dense(amps);
        Ok(s)
    }

    fn check_classical(region: &Region, layout: &CellLayout, classical: &[usize]) -> Result<()> {
        let nc = layout.classical_registers().len();
        if classical.len() != nc * region.len() {
            return invalid(format!(
                "expected {} classical values, got {}",
                nc * region.len(),
                classical.len()
            ));
        }
        for (i, &v) in classical.iter().enumerate() {
            let r = layout.classical_registers()[i % nc.max(1)];
            if v >= layout.registers()[r].dim {
                return invalid(format!(
                    "classical value {v} out of range for register '{}'",
                    layout.registers()[r].name
                ));
            }
        }
        Ok(())
    }

    fn dims_for(region: &Region, layout: &CellLayout) -> Vec<usize> {
        let per: Vec<usize> = layout
            .quantum_registers()
            .iter()
            .map(|&r| layout.registers()[r].dim)
            .collect();
        (0..region.len())
            .flat_map(|_| per.iter().copied())
            .collect()
    }

    /// Dense if the vector fits under the cap, otherwise sparse. Amplitudes start at zero.
    pub(crate) fn empty(
        region: &Region,
        layout: &CellLayout,
        classical: Vec<usize>,
        limits: Limits,
    ) -> Result<Self> {
        match Self::empty_dense(region, layout, classical.clone(), limits) {
            Err(Error::Resource(_)) => Self::empty_sparse(region, layout, classical, limits),
            other => other,
        }
    }

    pub(crate) fn empty_dense(
        region: &Region,
        layout: &CellLayout,
        classical: Vec<usize>,
        limits: Limits,
    ) -> Result<Self> {
        Self::check_classical(region, layout, &classical)?;
        let dims = Self::dims_for(region, layout);
        let n = dims
            .iter()
            .try_fold(1usize, |a, &d| a.checked_mul(d))
            .filter(|&n| n <= limits.max_amplitudes)
            .ok_or_else(|| {
                Error::Resource(format!(
                    "dense state of {} cells exceeds the amplitude cap {} (set {AMPLITUDE_CAP_ENV} to raise it)",
                    region.len(),
                    limits.max_amplitudes
                ))
            })?;
        Ok(Self {
            region: region.clone(),
            layout: layout.clone(),
            dims,
            amps: Amplitudes::Dense(vec![ZERO; n]),
            classical,
            t: 0,
            limits,
        })
    }

    pub(crate) fn empty_sparse(
        region: &Region,
        layout: &CellLayout,
        classical: Vec<usize>,
        limits: Limits,
    ) -> Result<Self> {
        Self::check_classical(region, layout, &classical)?;
        let dims = Self::dims_for(region, layout);
        if dims.iter().any(|&d| d > 256) {
            return Err(Error::Resource(
                "sparse storage supports registers of dimension at most 256".into(),
            ));
        }
        Ok(Self {
            region: region.clone(),
            layout: layout.clone(),
            dims,
            amps: Amplitudes::Sparse(HashMap::new()),
            classical,
            t: 0,
            limits,
        })
    }

    fn set_basis_digits(&mut self, digits: &[usize]) {
        match &mut self.amps {
            Amplitudes::Dense(v) => {
                let idx = digits
                    .iter()
                    .zip(&self.dims)
                    .fold(0, |a, (&x, &d)| a * d + x);
                v[idx] = ONE;
            }
            Amplitudes::Sparse(m) => {
                m.insert(digits.iter().map(|&x| x as u8).collect(), ONE);
            }
        }
    }

    /// Converts to sparse storage.
    pub fn into_sparse(mut self) -> Self {
        if let Amplitudes::Dense(v) = &self.amps {
            let mut m = HashMap::new();
            for (i, &z) in v.iter().enumerate() {
                if z != ZERO {
                    m.insert(self.digits_of(i).into_iter().map(|x| x as u8).collect(), z);
                }
            }
            self.amps = Amplitudes::Sparse(m);
        }
        self
    }

    /// Converts to a dense vector, subject to the amplitude cap.
    pub fn into_dense(self) -> Result<Self> {
        if let Amplitudes::Sparse(m) = &self.amps {
            let mut s = Self::empty_dense(
                &self.region,
                &self.layout,
                self.classical.clone(),
                self.limits,
            )?;
            if let Amplitudes::Dense(v) = &mut s.amps {
                for (k, &z) in m {
                    let idx = k
                        .iter()
                        .zip(&s.dims)
                        .fold(0, |a, (&x, &d)| a * d + x as usize);
                    v[idx] = z;
                }
            }
            s.t = self.t;
            return Ok(s);
        }
        Ok(self)
    }

    pub(crate) fn digits_of(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for i in (0..self.dims.len()).rev() {
            out[i] = idx % self.dims[i];
            idx /= self.dims[i];
        }
        out
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn layout(&self) -> &CellLayout {
        &self.layout
    }

    pub fn step_count(&self) -> u64 {
        self.t
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.amps
    }

    /// Dense amplitude vector, if stored densely.
    pub fn dense(&self) -> Option<&[C64]> {
        match &self.amps {
            Amplitudes::Dense(v) => Some(v),
            Amplitudes::Sparse(_) => None,
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.amps, Amplitudes::Sparse(_))
    }

    /// Dimensions of the (cell, quantum register) tensor factors.
    pub fn factor_dims(&self) -> &[usize] {
        &self.dims
    }

    /// Tensor factor of quantum register `reg` of cell `cell`.
    pub fn factor(&self, cell: usize, reg: usize) -> usize {
        cell * self.layout.quantum_registers().len()
            + self
                .layout
                .quantum_position(reg)
                .expect("not a quantum register")
    }

    pub fn classical(&self) -> &[usize] {
        &self.classical
    }

    pub fn classical_of(&self, cell: usize) -> &[usize] {
        let nc = self.layout.classical_registers().len();
        &self.classical[cell * nc..(cell + 1) * nc]
    }

    pub fn cell_index(&self, c: &[i64]) -> Option<usize> {
        self.region.index_of(c)
    }

    pub fn cells(&self) -> Vec<Coord> {
        self.region.cells()
    }

    pub fn norm(&self) -> f64 {
        match &self.amps {
            Amplitudes::Dense(v) => v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            Amplitudes::Sparse(m) => m.values().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
        }
    }

    /// Amplitude of the basis state with per-cell register values
    /// `assignment`; zero if its classical values differ from the state's.
    pub fn amplitude(&self, assignment: &[Vec<usize>]) -> Result<C64> {
        if assignment.len() != self.region.len() {
            return invalid("assignment does not cover the region");
        }
        let mut digits = Vec::with_capacity(self.dims.len());
        for (cell, vals) in assignment.iter().enumerate() {
            self.layout.encode(vals)?;
            let cl: Vec<usize> = self
                .layout
                .classical_registers()
                .iter()
                .map(|&r| vals[r])
                .collect();
            if cl != self.classical_of(cell) {
                return Ok(ZERO);
            }
            digits.extend(self.layout.quantum_registers().iter().map(|&r| vals[r]));
        }
        Ok(self.amplitude_digits(&digits))
    }

    pub(crate) fn amplitude_digits(&self, digits: &[usize]) -> C64 {
        match &self.amps {
            Amplitudes::Dense(v) => {
                v[digits
                    .iter()
                    .zip(&self.dims)
                    .fold(0, |a, (&x, &d)| a * d + x)]
            }
            Amplitudes::Sparse(m) => {
                let k: Vec<u8> = digits.iter().map(|&x| x as u8).collect();
                m.get(&k).copied().unwrap_or(ZERO)
            }
        }
    }

    /// Nonzero amplitudes as (factor digits, amplitude), in no particular order.
    pub fn entries(&self) -> Vec<(Vec<usize>, C64)> {
        match &self.amps {
            Amplitudes::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, z)| **z != ZERO)
                .map(|(i, &z)| (self.digits_of(i), z))
                .collect(),
            Amplitudes::Sparse(m) => m
                .iter()
                .map(|(k, &z)| (k.iter().map(|&x| x as usize).collect(), z))
                .collect(),
        }
    }

    /// Global basis index (over full cells, classical registers included)
    /// for quantum factor digits combined with the current classical values.
    pub fn global_index(&self, digits: &[usize]) -> u128 {
        let nq = self.layout.quantum_registers().len();
        let d = self.layout.cell_dimension() as u128;
        let mut idx: u128 = 0;
        for cell in 0..self.region.len() {
            let mut vals = vec![0; self.layout.registers().len()];
            for (k, &r) in self.layout.classical_registers().iter().enumerate() {
                vals[r] = self.classical_of(cell)[k];
            }
            for (k, &r) in self.layout.quantum_registers().iter().enumerate() {
                vals[r] = digits[cell * nq + k];
            }
            idx = idx * d + self.layout.encode(&vals).unwrap() as u128;
        }
        idx
    }

    /// `⟨self|other⟩`; both states must share region, layout and classical values.
    pub fn inner(&self, other: &RegionState) -> Result<C64> {
        if self.dims != other.dims || self.classical != other.classical {
            return Ok(ZERO);
        }
        Ok(match (&self.amps, &other.amps) {
            (Amplitudes::Dense(a), Amplitudes::Dense(b)) => {
                a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
            }
            _ => {
                let b = other.entries();
                b.iter()
                    .map(|(d, z)| self.amplitude_digits(d).conj() * z)
                    .sum()
            }
        })
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &RegionState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Largest amplitude difference; infinite if the classical values differ.
    pub fn max_deviation(&self, other: &RegionState) -> f64 {
        if self.dims != other.dims || self.classical != other.classical {
            return f64::INFINITY;
        }
        let mut m: f64 = 0.0;
        for (d, z) in self.entries() {
            m = m.max((z - other.amplitude_digits(&d)).norm());
        }
        for (d, z) in other.entries() {
            m = m.max((z - self.amplitude_digits(&d)).norm());
        }
        m
    }
}
