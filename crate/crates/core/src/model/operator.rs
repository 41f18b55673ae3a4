use std::fmt;
use std::sync::Arc;

use crate::error::{structural, Result};
use crate::linalg::kernel::{apply_conditioned, apply_dense};
use crate::linalg::{ComplexMatrix, C64, ONE, ZERO};
use crate::model::CellLayout;

/// Quantum register `reg` of support cell `cell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RegRef {
    pub cell: usize,
    pub reg: usize,
}

impl RegRef {
    pub fn new(cell: usize, reg: usize) -> Self {
        Self { cell, reg }
    }
}

/// What an operator does to the quantum registers of its support once the
/// classical values are known.
#[derive(Clone, Debug)]
pub enum QuantumAction {
    Identity,
    /// `matrix` on the listed registers, first register most significant.
    On {
        regs: Vec<RegRef>,
        matrix: Arc<ComplexMatrix>,
    },
    /// `table[c]` on `targets` where the `controls` hold joint value `c`.
    Conditioned {
        targets: Vec<RegRef>,
        controls: Vec<RegRef>,
        table: Arc<Vec<Option<Arc<ComplexMatrix>>>>,
    },
}

impl QuantumAction {
    /// `matrix` on every quantum register of a `k`-cell support.
    pub fn dense(layout: &CellLayout, k: usize, matrix: Arc<ComplexMatrix>) -> Self {
        Self::On {
            regs: all_quantum_regs(layout, k),
            matrix,
        }
    }

    /// Every register the action may touch, sorted.
    pub fn registers(&self) -> Vec<RegRef> {
        let mut v = match self {
            Self::Identity => vec![],
            Self::On { regs, .. } => regs.clone(),
            Self::Conditioned {
                targets, controls, ..
            } => targets.iter().chain(controls).copied().collect(),
        };
        v.sort();
        v.dedup();
        v
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Self::Identity)
    }

    /// Applies the action to a factored vector; `factor` maps a register to
    /// its tensor factor.
    pub fn apply(&self, amps: &mut [C64], dims: &[usize], factor: impl Fn(RegRef) -> usize) {
        match self {
            Self::Identity => {}
            Self::On { regs, matrix } => {
                let f: Vec<usize> = regs.iter().map(|&r| factor(r)).collect();
                apply_dense(amps, dims, &f, matrix);
            }
            Self::Conditioned {
                targets,
                controls,
                table,
            } => {
                let t: Vec<usize> = targets.iter().map(|&r| factor(r)).collect();
                let c: Vec<usize> = controls.iter().map(|&r| factor(r)).collect();
                let refs: Vec<Option<&ComplexMatrix>> =
                    table.iter().map(|m| m.as_deref()).collect();
                apply_conditioned(amps, dims, &t, &c, &refs);
            }
        }
    }

    /// Dense matrix of the action on `regs` (which must cover every touched
    /// register), first register most significant.
    pub fn matrix_on(&self, layout: &CellLayout, regs: &[RegRef]) -> ComplexMatrix {
        let dims: Vec<usize> = regs.iter().map(|r| layout.registers()[r.reg].dim).collect();
        let n: usize = dims.iter().product();
        let pos = |r: RegRef| {
            regs.iter()
                .position(|&x| x == r)
                .expect("register not covered")
        };
        let mut m = ComplexMatrix::zeros(n);
        let mut col = vec![ZERO; n];
        for j in 0..n {
            col.iter_mut().for_each(|z| *z = ZERO);
            col[j] = ONE;
            self.apply(&mut col, &dims, pos);
            for (i, &z) in col.iter().enumerate() {
                m.set(i, j, z);
            }
        }
        m
    }
}

pub(crate) fn all_quantum_regs(layout: &CellLayout, k: usize) -> Vec<RegRef> {
    (0..k)
        .flat_map(|c| {
            layout
                .quantum_registers()
                .iter()
                .map(move |&r| RegRef::new(c, r))
        })
        .collect()
}

/// Rule of an operator that is a basis-controlled permutation on the
/// classical registers of its support:
/// `U = Σ_c |π(c)⟩⟨c| ⊗ W_c`.
///
/// `act` receives the classical values of the support (cell by cell,
/// classical registers in layout order), overwrites them with `π(c)` and
/// returns `W_c`.
pub trait ClassicalControl: Send + Sync {
    fn act(&self, classical: &mut [usize]) -> QuantumAction;

    fn name(&self) -> String {
        "controlled".into()
    }
}

impl fmt::Debug for dyn ClassicalControl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Read or update rule of an automaton.
#[derive(Clone)]
pub enum LocalOperator {
    /// Matrix on the full cell space of the support, cells in neighborhood order.
    Matrix(ComplexMatrix),
    Controlled(Arc<dyn ClassicalControl>),
}

impl fmt::Debug for LocalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Matrix(m) => write!(f, "Matrix({}x{})", m.dim(), m.dim()),
            Self::Controlled(c) => write!(f, "Controlled({})", c.name()),
        }
    }
}

impl From<ComplexMatrix> for LocalOperator {
    fn from(m: ComplexMatrix) -> Self {
        Self::Matrix(m)
    }
}

impl LocalOperator {
    pub fn controlled(c: impl ClassicalControl + 'static) -> Self {
        Self::Controlled(Arc::new(c))
    }

    pub fn as_matrix(&self) -> Option<&ComplexMatrix> {
        match self {
            Self::Matrix(m) => Some(m),
            Self::Controlled(_) => None,
        }
    }

    /// Turns the operator into a rule over a `k`-cell support. Matrices are
    /// scanned column by column; a matrix that mixes classical values fails.
    pub(crate) fn compile(
        &self,
        layout: &CellLayout,
        k: usize,
    ) -> Result<Arc<dyn ClassicalControl>> {
        match self {
            Self::Controlled(c) => Ok(c.clone()),
            Self::Matrix(m) => {
                let want = checked_pow(layout.cell_dimension(), k)?;
                if m.dim() != want {
                    return structural(format!(
                        "operator on {k} cell(s) must be {want}x{want}, got {}x{}",
                        m.dim(),
                        m.dim()
                    ));
                }
                Ok(Arc::new(TableControl::scan(layout, k, m)?))
            }
        }
    }

    /// Full matrix on the `k`-cell support, classical registers included.
    pub fn to_dense(&self, layout: &CellLayout, k: usize) -> Result<ComplexMatrix> {
        if let Self::Matrix(m) = self {
            return Ok(m.clone());
        }
        let n = checked_pow(layout.cell_dimension(), k)?;
        if n > 1 << 12 {
            return Err(crate::Error::Resource(format!(
                "dense operator of dimension {n} exceeds 4096"
            )));
        }
        let rule = self.compile(layout, k)?;
        let cdim = layout.classical_dimension().pow(k as u32);
        let qdim = layout.quantum_dimension().pow(k as u32);
        let regs = all_quantum_regs(layout, k);
        let nc = layout.classical_registers().len();
        let mut out = ComplexMatrix::zeros(n);
        for c in 0..cdim {
            let mut vals = joint_classical_values(layout, k, c);
            let action = rule.act(&mut vals);
            let c2 = joint_classical_index(layout, &vals, nc);
            let w = action.matrix_on(layout, &regs);
            for qi in 0..qdim {
                for qj in 0..qdim {
                    let z = w.get(qi, qj);
                    if z != ZERO {
                        out.set(
                            joint_join(layout, k, c2, qi),
                            joint_join(layout, k, c, qj),
                            z,
                        );
                    }
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn checked_pow(base: usize, k: usize) -> Result<usize> {
    base.checked_pow(k as u32)
        .ok_or_else(|| crate::Error::Resource(format!("{base}^{k} overflows")))
}

/// Classical values (cell-major) of joint classical index `c` over `k` cells.
pub(crate) fn joint_classical_values(layout: &CellLayout, k: usize, mut c: usize) -> Vec<usize> {
    let cd = layout.classical_dimension();
    let nc = layout.classical_registers().len();
    let mut out = vec![0; nc * k];
    for cell in (0..k).rev() {
        let v = layout.classical_values(c % cd);
        out[cell * nc..(cell + 1) * nc].copy_from_slice(&v);
        c /= cd;
    }
    out
}

pub(crate) fn joint_classical_index(layout: &CellLayout, vals: &[usize], nc: usize) -> usize {
    if nc == 0 {
        return 0;
    }
    let cd = layout.classical_dimension();
    vals.chunks(nc)
        .fold(0, |a, ch| a * cd + layout.classical_index(ch))
}

/// Full joint index from joint classical and joint quantum indices.
pub(crate) fn joint_join(layout: &CellLayout, k: usize, mut c: usize, mut q: usize) -> usize {
    let (cd, qd, d) = (
        layout.classical_dimension(),
        layout.quantum_dimension(),
        layout.cell_dimension(),
    );
    let mut idx = 0;
    let mut mul = 1;
    for _ in 0..k {
        idx += layout.join(c % cd, q % qd) * mul;
        c /= cd;
        q /= qd;
        mul *= d;
    }
    idx
}

/// Controlled rule stored as one entry per joint classical value.
pub(crate) struct TableControl {
    layout: CellLayout,
    entries: Vec<(usize, QuantumAction)>,
}

impl TableControl {
    fn scan(layout: &CellLayout, k: usize, m: &ComplexMatrix) -> Result<Self> {
        let cdim = checked_pow(layout.classical_dimension(), k)?;
        let qdim = checked_pow(layout.quantum_dimension(), k)?;
        let n = m.dim();
        let regs = all_quantum_regs(layout, k);
        if cdim == 1 {
            let action = if *m == ComplexMatrix::identity(n) {
                QuantumAction::Identity
            } else {
                QuantumAction::On {
                    regs,
                    matrix: Arc::new(m.clone()),
                }
            };
            return Ok(Self {
                layout: layout.clone(),
                entries: vec![(0, action)],
            });
        }
        // (classical, quantum) split of every joint index
        let split: Vec<(usize, usize)> = (0..n)
            .map(|mut idx| {
                let (cd, qd, d) = (
                    layout.classical_dimension(),
                    layout.quantum_dimension(),
                    layout.cell_dimension(),
                );
                let (mut c, mut q, mut mul_c, mut mul_q) = (0, 0, 1, 1);
                for _ in 0..k {
                    let (ci, qi) = layout.split(idx % d);
                    c += ci * mul_c;
                    q += qi * mul_q;
                    idx /= d;
                    mul_c *= cd;
                    mul_q *= qd;
                }
                (c, q)
            })
            .collect();
        let mut index_of = vec![vec![0usize; qdim]; cdim];
        for (idx, &(c, q)) in split.iter().enumerate() {
            index_of[c][q] = idx;
        }
        let mut entries = Vec::with_capacity(cdim);
        for c in 0..cdim {
            let mut target: Option<usize> = None;
            for q in 0..qdim {
                let col = index_of[c][q];
                for row in 0..n {
                    if m.get(row, col).norm() > 1e-14 {
                        let rc = split[row].0;
                        match target {
                            None => target = Some(rc),
                            Some(t) if t != rc => {
                                return structural(format!(
                                    "operator is not a basis-controlled permutation on the classical registers \
                                     (classical input {c} maps to both {t} and {rc})"
                                ))
                            }
                            _ => {}
                        }
                    }
                }
            }
            let t = target.unwrap_or(c);
            let mut w = ComplexMatrix::zeros(qdim);
            for qi in 0..qdim {
                for qj in 0..qdim {
                    w.set(qi, qj, m.get(index_of[t][qi], index_of[c][qj]));
                }
            }
            let action = if w == ComplexMatrix::identity(qdim) {
                QuantumAction::Identity
            } else {
                QuantumAction::On {
                    regs: regs.clone(),
                    matrix: Arc::new(w),
                }
            };
            entries.push((t, action));
        }
        Ok(Self {
            layout: layout.clone(),
            entries,
        })
    }
}

impl ClassicalControl for TableControl {
    fn act(&self, classical: &mut [usize]) -> QuantumAction {
        let nc = self.layout.classical_registers().len();
        let c = joint_classical_index(&self.layout, classical, nc);
        let (t, action) = &self.entries[c];
        if *t != c {
            let k = classical.len() / nc.max(1);
            classical.copy_from_slice(&joint_classical_values(&self.layout, k, *t));
        }
        action.clone()
    }

    fn name(&self) -> String {
        "matrix".into()
    }
}

/// Rule that ignores the classical registers and always returns one action.
pub struct FixedAction(pub QuantumAction);

impl ClassicalControl for FixedAction {
    fn act(&self, _: &mut [usize]) -> QuantumAction {
        self.0.clone()
    }

    fn name(&self) -> String {
        "fixed".into()
    }
}
