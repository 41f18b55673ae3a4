//! TOML model files.
//!
//! Every file carries a `model` tag:
//!
//! * `luqca`: `registers`, `dimension`, `offsets`, `u0`, `v0`, optional `quiescent`
//! * `cqca`: `registers`, `coloring`, `phases`, `phase_colors`, optional `quiescent`
//! * `watrous`: `left`, `center`, `right`, `v`
//! * `margolus`: `dim`, `cell`, `algebras`, `u0`, `u1`
//! * `builtin`: a `name` (`ising`, `walk`, `shift`, `heisenberg`,
//!   `amplification`, `universal`) and its parameters
//!
//! Matrices are lists of rows of `[re, im]` pairs.

use serde::{Deserialize, Serialize};

use crate::builders::{
    amplification_cqca, heisenberg_cqca, ising_qca, shift_right_qca, walk_qca, AmplificationSpec,
    WalkParams,
};
use crate::coloring::{Coloring, CqcaDefinition};
use crate::compiler::{universal_qca, UniversalGateSet};
use crate::error::{structural, Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::model::{CellLayout, Coord, LocalOperator, NeighborhoodScheme, QcaDefinition, Register};
use crate::translators::{margolus_to_luqca, watrous_to_luqca, MargolusDef, WatrousPartitionedDef};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LuqcaConfig {
    pub registers: Vec<Register>,
    pub dimension: usize,
    pub offsets: Vec<Coord>,
    pub u0: ComplexMatrix,
    pub v0: ComplexMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quiescent: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CqcaConfig {
    pub registers: Vec<Register>,
    pub coloring: Coloring,
    pub phases: Vec<ComplexMatrix>,
    pub phase_colors: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quiescent: Option<usize>,
}

/// Constructions known by name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Builtin {
    Ising {
        j: f64,
        dt: f64,
    },
    Walk {
        p: [f64; 2],
        q: [f64; 2],
        phi: [f64; 2],
    },
    Shift,
    Heisenberg {
        j: f64,
        dt: f64,
        k: usize,
    },
    Amplification {
        side: usize,
        #[serde(default = "default_flip_set")]
        flip_set: Vec<i32>,
    },
    Universal,
}

fn default_flip_set() -> Vec<i32> {
    vec![-2, -1, 0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelConfig {
    Luqca(LuqcaConfig),
    Cqca(CqcaConfig),
    Watrous(WatrousPartitionedDef),
    Margolus(MargolusDef),
    Builtin(Builtin),
}

/// A loaded model.
#[derive(Clone, Debug)]
pub enum Model {
    Qca(QcaDefinition),
    Cqca(CqcaDefinition),
}

impl Model {
    /// The model as a plain automaton (colored ones are translated).
    pub fn into_qca(self) -> Result<QcaDefinition> {
        match self {
            Self::Qca(q) => Ok(q),
            Self::Cqca(c) => crate::coloring::cqca_to_qca(&c),
        }
    }
}

fn c(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

impl ModelConfig {
    pub fn from_toml(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("model configuration serializes")
    }

    pub fn build(&self) -> Result<Model> {
        Ok(match self {
            Self::Luqca(l) => Model::Qca(QcaDefinition::new(
                CellLayout::new(l.registers.clone())?,
                NeighborhoodScheme::new(l.dimension, l.offsets.clone())?,
                l.u0.clone(),
                l.v0.clone(),
                l.quiescent,
            )?),
            Self::Cqca(cq) => Model::Cqca(CqcaDefinition::new(
                CellLayout::new(cq.registers.clone())?,
                cq.coloring.clone(),
                cq.phases.iter().cloned().map(LocalOperator::from).collect(),
                cq.phase_colors.clone(),
                cq.quiescent,
            )?),
            Self::Watrous(w) => {
                let w = WatrousPartitionedDef::new(w.left, w.center, w.right, w.v.clone())?;
                Model::Qca(watrous_to_luqca(&w))
            }
            Self::Margolus(m) => Model::Qca(margolus_to_luqca(m)?),
            Self::Builtin(b) => match b {
                Builtin::Ising { j, dt } => Model::Qca(ising_qca(*j, *dt)?),
                Builtin::Walk { p, q, phi } => {
                    Model::Qca(walk_qca(WalkParams::new(c(*p), c(*q), c(*phi))?)?)
                }
                Builtin::Shift => Model::Qca(shift_right_qca()),
                Builtin::Heisenberg { j, dt, k } => Model::Cqca(heisenberg_cqca(*j, *dt, *k)?),
                Builtin::Amplification { side, flip_set } => {
                    let mut spec = AmplificationSpec::new(*side);
                    spec.flip_set = flip_set.iter().copied().collect();
                    Model::Cqca(amplification_cqca(&spec)?)
                }
                Builtin::Universal => Model::Qca(universal_qca(&UniversalGateSet::default())?),
            },
        })
    }

    /// Configuration of a matrix-backed automaton.
    pub fn from_qca(q: &QcaDefinition) -> Result<Self> {
        let (Some(u0), Some(v0)) = (q.u0().as_matrix(), q.v0().as_matrix()) else {
            return structural(
                "controlled operators have no matrix form; describe the model as a builtin",
            );
        };
        Ok(Self::Luqca(LuqcaConfig {
            registers: q.layout().registers().to_vec(),
            dimension: q.dimension(),
            offsets: q.neighborhood().offsets().to_vec(),
            u0: u0.clone(),
            v0: v0.clone(),
            quiescent: q.quiescent(),
        }))
    }

    /// Configuration of a matrix-backed colored automaton.
    pub fn from_cqca(q: &CqcaDefinition) -> Result<Self> {
        let phases = q
            .phases()
            .iter()
            .map(|p| p.as_matrix().cloned())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Structural("controlled phases have no matrix form".into()))?;
        Ok(Self::Cqca(CqcaConfig {
            registers: q.layout().registers().to_vec(),
            coloring: q.coloring().clone(),
            phases,
            phase_colors: q.colors().to_vec(),
            quiescent: q.quiescent(),
        }))
    }
}

/// Reads and builds a model file.
pub fn load_model(path: &std::path::Path) -> Result<Model> {
    let s = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    ModelConfig::from_toml(&s)?.build()
}
