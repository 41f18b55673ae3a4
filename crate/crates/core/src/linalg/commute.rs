use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{C64, ONE, ZERO};
use crate::model::{Coord, QcaDefinition, QuantumAction, RegRef};

/// How the classical configurations of a joint support are covered.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CheckMode {
    /// Every configuration; fails with a resource error once the summed work
    /// (configurations × touched-dimension²) exceeds `max_work`.
    Exhaustive { max_work: u64 },
    /// `samples` uniformly drawn configurations per offset.
    Sampled { samples: usize, seed: u64 },
}

impl Default for CheckMode {
    fn default() -> Self {
        Self::Exhaustive { max_work: 1 << 22 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OffsetResidual {
    pub offset: Coord,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutationReport {
    /// One entry per nonzero `δ` with `N ∩ (N+δ) ≠ ∅`.
    pub offsets: Vec<OffsetResidual>,
    pub max_residual: f64,
    pub pass: bool,
    /// True when only sampled classical configurations were checked.
    pub sampled: bool,
}

impl CommutationReport {
    pub fn failing(&self, tol: f64) -> Vec<&OffsetResidual> {
        self.offsets.iter().filter(|o| o.residual > tol).collect()
    }
}

/// `‖[U_0, U_δ]‖_F` on the joint support for every overlapping offset `δ`.
pub fn commutes_with_translations(qca: &QcaDefinition, tol: f64) -> Result<CommutationReport> {
    commutes_with_translations_opts(qca, tol, CheckMode::default())
}

pub fn commutes_with_translations_opts(
    qca: &QcaDefinition,
    tol: f64,
    mode: CheckMode,
) -> Result<CommutationReport> {
    let n = qca.neighborhood();
    let mut offsets = Vec::new();
    for delta in n.differences() {
        let residual = offset_residual(qca, &delta, mode)?;
        offsets.push(OffsetResidual {
            offset: delta,
            residual,
        });
    }
    let max_residual = offsets.iter().map(|o| o.residual).fold(0.0, f64::max);
    Ok(CommutationReport {
        pass: max_residual <= tol,
        max_residual,
        offsets,
        sampled: matches!(mode, CheckMode::Sampled { .. }),
    })
}

fn offset_residual(qca: &QcaDefinition, delta: &[i64], mode: CheckMode) -> Result<f64> {
    let layout = qca.layout();
    let offs = qca.neighborhood().offsets();
    let shifted: Vec<Coord> = offs
        .iter()
        .map(|o| o.iter().zip(delta).map(|(a, b)| a + b).collect())
        .collect();
    let mut joint: Vec<Coord> = offs.iter().chain(&shifted).cloned().collect();
    joint.sort();
    joint.dedup();
    let pos = |c: &Coord| joint.binary_search(c).unwrap();
    let pos_a: Vec<usize> = offs.iter().map(pos).collect();
    let pos_b: Vec<usize> = shifted.iter().map(pos).collect();

    let nc = layout.classical_registers().len();
    let cdims: Vec<usize> = layout
        .classical_registers()
        .iter()
        .map(|&r| layout.registers()[r].dim)
        .collect();
    let q_joint = (layout.quantum_dimension() as f64).powi(joint.len() as i32);
    let rule = qca.u_rule();

    let mut total = 0.0;
    let work = std::cell::Cell::new(0u64);
    let eval = |vals: &[usize]| -> Result<f64> {
        let run = |first: &[usize], second: &[usize]| {
            let mut v = vals.to_vec();
            let a1 = act_at(rule.as_ref(), &mut v, first, nc);
            let a2 = act_at(rule.as_ref(), &mut v, second, nc);
            (v, a1, a2)
        };
        // AB: B acts first
        let (c_ab, b1, a2) = run(&pos_b, &pos_a);
        let (c_ba, a1, b2) = run(&pos_a, &pos_b);
        if c_ab != c_ba {
            return Ok(2.0 * q_joint);
        }
        let mut regs: Vec<RegRef> = Vec::new();
        for (act, p) in [(&b1, &pos_b), (&a2, &pos_a), (&a1, &pos_a), (&b2, &pos_b)] {
            regs.extend(
                act.registers()
                    .into_iter()
                    .map(|r| RegRef::new(p[r.cell], r.reg)),
            );
        }
        regs.sort();
        regs.dedup();
        if regs.is_empty() {
            return Ok(0.0);
        }
        let dims: Vec<usize> = regs.iter().map(|r| layout.registers()[r.reg].dim).collect();
        let d: usize = dims.iter().product();
        work.set(work.get() + (d * d) as u64);
        let idx = |p: &Vec<usize>| {
            let regs = &regs;
            let p = p.clone();
            move |r: RegRef| regs.binary_search(&RegRef::new(p[r.cell], r.reg)).unwrap()
        };
        let mut sum = 0.0;
        let mut x = vec![ZERO; d];
        let mut y = vec![ZERO; d];
        for j in 0..d {
            x.iter_mut().for_each(|z| *z = ZERO);
            x[j] = ONE;
            y.copy_from_slice(&x);
            b1.apply(&mut x, &dims, idx(&pos_b));
            a2.apply(&mut x, &dims, idx(&pos_a));
            a1.apply(&mut y, &dims, idx(&pos_a));
            b2.apply(&mut y, &dims, idx(&pos_b));
            sum += x
                .iter()
                .zip(&y)
                .map(|(a, b): (&C64, &C64)| (a - b).norm_sqr())
                .sum::<f64>();
        }
        Ok(sum * q_joint / d as f64)
    };

    match mode {
        CheckMode::Exhaustive { max_work } => {
            let per_cell = layout.classical_dimension() as u64;
            let configs = per_cell.checked_pow(joint.len() as u32).unwrap_or(u64::MAX);
            if configs > max_work {
                return Err(Error::Resource(format!(
                    "{configs} classical configurations on the joint support of offset {delta:?} exceed the work cap {max_work}"
                )));
            }
            let mut vals = vec![0usize; nc * joint.len()];
            for _ in 0..configs {
                total += eval(&vals)?;
                if work.get() > max_work {
                    return Err(Error::Resource(format!(
                        "commutation check for offset {delta:?} exceeds the work cap {max_work}"
                    )));
                }
                // advance the mixed-radix counter
                for i in (0..vals.len()).rev() {
                    vals[i] += 1;
                    if vals[i] < cdims[i % nc] {
                        break;
                    }
                    vals[i] = 0;
                }
            }
        }
        CheckMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ hash_offset(delta));
            let mut vals = vec![0usize; nc * joint.len()];
            let reps = if nc == 0 { 1 } else { samples };
            for _ in 0..reps {
                for (i, v) in vals.iter_mut().enumerate() {
                    *v = rng.gen_range(0..cdims[i % nc]);
                }
                total += eval(&vals)?;
            }
        }
    }
    Ok(total.sqrt())
}

fn hash_offset(delta: &[i64]) -> u64 {
    delta.iter().fold(0xcbf29ce484222325u64, |h, &x| {
        (h ^ x as u64).wrapping_mul(0x100000001b3)
    })
}

/// Runs the rule on the cells at joint positions `pos`, writing the new
/// classical values back.
fn act_at(
    rule: &dyn crate::model::ClassicalControl,
    vals: &mut [usize],
    pos: &[usize],
    nc: usize,
) -> QuantumAction {
    let mut local: Vec<usize> = pos
        .iter()
        .flat_map(|&p| vals[p * nc..(p + 1) * nc].iter().copied())
        .collect();
    let action = rule.act(&mut local);
    for (k, &p) in pos.iter().enumerate() {
        vals[p * nc..(p + 1) * nc].copy_from_slice(&local[k * nc..(k + 1) * nc]);
    }
    action
}
