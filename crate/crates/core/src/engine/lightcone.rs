use serde::Serialize;

use crate::model::{QcaDefinition, Region};

/// Region needed to reproduce `target` exactly after `steps` steps.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LightconeSpec {
    pub target: Region,
    pub steps: usize,
    /// Cells added below and above the target, per axis.
    pub below: Vec<usize>,
    pub above: Vec<usize>,
    pub padded: Region,
}

/// Past lightcone of `target`. One step lets a cell be influenced by any
/// cell of `x − N + N`, so every side grows by `t·(max N − min N)` per axis.
pub fn required_region(target: &Region, qca: &QcaDefinition, steps: usize) -> LightconeSpec {
    let n = qca.neighborhood();
    let reach: Vec<usize> = (0..target.dimension())
        .map(|a| steps * (n.max(a) - n.min(a)) as usize)
        .collect();
    LightconeSpec {
        target: target.clone(),
        steps,
        below: reach.clone(),
        above: reach.clone(),
        padded: target.grow(&reach, &reach),
    }
}
