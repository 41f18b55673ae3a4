//! Validity checks for automaton definitions.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{commutes_with_translations_opts, CheckMode, CommutationReport, ComplexMatrix};
use crate::model::{
    joint_classical_index, joint_classical_values, CellLayout, ClassicalControl, QcaDefinition,
    QuantumAction, RegRef,
};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Residual of `U|q…q⟩ = e^{iθ}|q…q⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FixedPoint {
    pub residual: f64,
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuiescenceReport {
    pub state: usize,
    pub read: FixedPoint,
    pub update: FixedPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub tol: f64,
    /// `‖U†U − I‖_F`
    pub unitarity_u: f64,
    /// `‖V†V − I‖_F`
    pub unitarity_v: f64,
    pub quiescence: Option<QuiescenceReport>,
    pub commutation: CommutationReport,
    pub sampled: bool,
    pub pass: bool,
}

impl ValidationReport {
    pub fn max_residual(&self) -> f64 {
        let mut m = self
            .unitarity_u
            .max(self.unitarity_v)
            .max(self.commutation.max_residual);
        if let Some(q) = &self.quiescence {
            m = m.max(q.read.residual).max(q.update.residual);
        }
        m
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mark = |r: f64| if r <= self.tol { "ok" } else { "FAIL" };
        writeln!(
            f,
            "unitarity U   {:.3e}  {}",
            self.unitarity_u,
            mark(self.unitarity_u)
        )?;
        writeln!(
            f,
            "unitarity V   {:.3e}  {}",
            self.unitarity_v,
            mark(self.unitarity_v)
        )?;
        match &self.quiescence {
            Some(q) => {
                writeln!(
                    f,
                    "quiescent U   {:.3e}  {} (phase {:+.6})",
                    q.read.residual,
                    mark(q.read.residual),
                    q.read.phase
                )?;
                writeln!(
                    f,
                    "quiescent V   {:.3e}  {} (phase {:+.6})",
                    q.update.residual,
                    mark(q.update.residual),
                    q.update.phase
                )?;
            }
            None => writeln!(f, "quiescent     none declared")?,
        }
        for o in &self.commutation.offsets {
            writeln!(
                f,
                "commute {:<12} {:.3e}  {}",
                format!("{:?}", o.offset),
                o.residual,
                mark(o.residual)
            )?;
        }
        if self.sampled {
            writeln!(f, "(classical configurations sampled)")?;
        }
        write!(
            f,
            "overall       {}",
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Unitarity, quiescence and translation commutation of `qca`, with every
/// classical configuration enumerated.
pub fn validate_definition(qca: &QcaDefinition, tol: f64) -> Result<ValidationReport> {
    validate_definition_opts(qca, tol, CheckMode::default())
}

pub fn validate_definition_opts(
    qca: &QcaDefinition,
    tol: f64,
    mode: CheckMode,
) -> Result<ValidationReport> {
    let layout = qca.layout();
    let k = qca.neighborhood().len();
    let unitarity_u = rule_unitarity(layout, qca.u_rule().as_ref(), k, mode)?;
    let unitarity_v = rule_unitarity(layout, qca.v_rule().as_ref(), 1, mode)?;
    let quiescence = qca.quiescent().map(|q| QuiescenceReport {
        state: q,
        read: rule_fixed_point(layout, qca.u_rule().as_ref(), k, q),
        update: rule_fixed_point(layout, qca.v_rule().as_ref(), 1, q),
    });
    let commutation = commutes_with_translations_opts(qca, tol, mode)?;
    let mut report = ValidationReport {
        tol,
        unitarity_u,
        unitarity_v,
        quiescence,
        commutation,
        sampled: matches!(mode, CheckMode::Sampled { .. }),
        pass: false,
    };
    report.pass = report.max_residual() <= tol;
    Ok(report)
}

fn regs_dims(layout: &CellLayout, regs: &[RegRef]) -> usize {
    regs.iter().map(|r| layout.registers()[r.reg].dim).product()
}

/// `‖M†M − I‖_F` for `M = Σ_c |π(c)⟩⟨c| ⊗ W_c` on `k` cells.
pub(crate) fn rule_unitarity(
    layout: &CellLayout,
    rule: &dyn ClassicalControl,
    k: usize,
    mode: CheckMode,
) -> Result<f64> {
    let nc = layout.classical_registers().len();
    let q_full = (layout.quantum_dimension() as f64).powi(k as i32);
    let per_cell = layout.classical_dimension() as u64;
    let configs = per_cell.checked_pow(k as u32).unwrap_or(u64::MAX);
    let samples: Vec<usize> = match mode {
        CheckMode::Exhaustive { max_work } => {
            if configs > max_work {
                return Err(Error::Resource(format!(
                    "{configs} classical configurations exceed the work cap {max_work}"
                )));
            }
            (0..configs as usize).collect()
        }
        CheckMode::Sampled { samples, seed } => {
            if configs <= samples as u64 {
                (0..configs as usize).collect()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut s: Vec<usize> = (0..samples)
                    .map(|_| rng.gen_range(0..configs as usize))
                    .collect();
                s.sort();
                s.dedup();
                s
            }
        }
    };
    let mut total = 0.0;
    let mut by_target: HashMap<usize, Vec<QuantumAction>> = HashMap::new();
    for c in samples {
        let mut vals = joint_classical_values(layout, k, c);
        let action = rule.act(&mut vals);
        if !action.is_identity() {
            let regs = action.registers();
            let w = action.matrix_on(layout, &regs);
            let d = regs_dims(layout, &regs) as f64;
            total += (&(&w.adjoint() * &w) - &ComplexMatrix::identity(w.dim()))
                .frobenius_norm()
                .powi(2)
                * q_full
                / d;
        }
        by_target
            .entry(joint_classical_index(layout, &vals, nc))
            .or_default()
            .push(action);
    }
    for group in by_target.values().filter(|g| g.len() > 1) {
        for (i, a) in group.iter().enumerate() {
            for (j, b) in group.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut regs = a.registers();
                regs.extend(b.registers());
                regs.sort();
                regs.dedup();
                let (wa, wb) = (a.matrix_on(layout, &regs), b.matrix_on(layout, &regs));
                let d = regs_dims(layout, &regs) as f64;
                total += (&wa.adjoint() * &wb).frobenius_norm().powi(2) * q_full / d;
            }
        }
    }
    Ok(total.sqrt())
}

/// Fixed-point residual of the all-`q` state of `k` cells, up to a phase.
pub(crate) fn rule_fixed_point(
    layout: &CellLayout,
    rule: &dyn ClassicalControl,
    k: usize,
    q: usize,
) -> FixedPoint {
    let (qc, qq) = layout.split(q);
    let cvals = layout.classical_values(qc);
    let mut vals: Vec<usize> = (0..k).flat_map(|_| cvals.iter().copied()).collect();
    let before = vals.clone();
    let action = rule.act(&mut vals);
    if vals != before {
        return FixedPoint {
            residual: 2f64.sqrt(),
            phase: 0.0,
        };
    }
    let regs = action.registers();
    if regs.is_empty() {
        return FixedPoint {
            residual: 0.0,
            phase: 0.0,
        };
    }
    let w = action.matrix_on(layout, &regs);
    // index of the quiescent quantum values within the touched registers
    let qvals = layout.decode(layout.join(0, qq));
    let col = regs
        .iter()
        .fold(0, |a, r| a * layout.registers()[r.reg].dim + qvals[r.reg]);
    let out = w.column(col);
    let z = out[col];
    let norm2: f64 = out.iter().map(|x| x.norm_sqr()).sum();
    let residual = (norm2 - 2.0 * z.norm() + 1.0).max(0.0).sqrt();
    FixedPoint {
        residual,
        phase: z.arg(),
    }
}
