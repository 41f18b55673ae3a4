use std::sync::Arc;

use crate::error::{structural, Result};
use crate::model::{CellLayout, ClassicalControl, LocalOperator, NeighborhoodScheme};

/// A local unitary QCA: read operator `U0` on the neighborhood, update
/// operator `V0` on one cell, optional quiescent basis state.
#[derive(Clone)]
pub struct QcaDefinition {
    layout: CellLayout,
    neighborhood: NeighborhoodScheme,
    u0: LocalOperator,
    v0: LocalOperator,
    quiescent: Option<usize>,
    u_rule: Arc<dyn ClassicalControl>,
    v_rule: Arc<dyn ClassicalControl>,
}

impl std::fmt::Debug for QcaDefinition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QcaDefinition")
            .field("layout", &self.layout)
            .field("neighborhood", &self.neighborhood)
            .field("u0", &self.u0)
            .field("v0", &self.v0)
            .field("quiescent", &self.quiescent)
            .finish()
    }
}

impl QcaDefinition {
    /// Checks shapes and, for layouts with classical registers, that matrix
    /// operators are basis-controlled permutations on them.
    pub fn new(
        layout: CellLayout,
        neighborhood: NeighborhoodScheme,
        u0: impl Into<LocalOperator>,
        v0: impl Into<LocalOperator>,
        quiescent: Option<usize>,
    ) -> Result<Self> {
        let (u0, v0) = (u0.into(), v0.into());
        if let Some(q) = quiescent {
            if q >= layout.cell_dimension() {
                return structural(format!(
                    "quiescent index {q} out of range for cell dimension {}",
                    layout.cell_dimension()
                ));
            }
        }
        let u_rule = u0.compile(&layout, neighborhood.len())?;
        let v_rule = v0.compile(&layout, 1)?;
        Ok(Self {
            layout,
            neighborhood,
            u0,
            v0,
            quiescent,
            u_rule,
            v_rule,
        })
    }

    pub fn layout(&self) -> &CellLayout {
        &self.layout
    }

    pub fn neighborhood(&self) -> &NeighborhoodScheme {
        &self.neighborhood
    }

    pub fn dimension(&self) -> usize {
        self.neighborhood.dimension()
    }

    pub fn u0(&self) -> &LocalOperator {
        &self.u0
    }

    pub fn v0(&self) -> &LocalOperator {
        &self.v0
    }

    pub fn quiescent(&self) -> Option<usize> {
        self.quiescent
    }

    pub fn u_rule(&self) -> &Arc<dyn ClassicalControl> {
        &self.u_rule
    }

    pub fn v_rule(&self) -> &Arc<dyn ClassicalControl> {
        &self.v_rule
    }

    /// Same operators with every register treated as quantum.
    /// Controlled operators are expanded to dense matrices.
    pub fn to_all_quantum(&self) -> Result<Self> {
        let layout = self.layout.all_quantum();
        let u = self.u0.to_dense(&self.layout, self.neighborhood.len())?;
        let v = self.v0.to_dense(&self.layout, 1)?;
        Self::new(layout, self.neighborhood.clone(), u, v, self.quiescent)
    }
}
