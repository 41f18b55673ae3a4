//! Execution of automata on finite regions.

mod apply;
mod init;
mod lightcone;
mod observe;
mod snapshot;
mod state;
mod step;

pub use apply::{apply_local, apply_operator};
pub(crate) use apply::{apply_rule, PadCache, Support};
pub use init::{basis_cells, init_region, init_region_with};
pub use lightcone::{required_region, LightconeSpec};
pub use observe::{expectation, observe, reduced_density};
pub use snapshot::{ObservableTable, Snapshot, DEFAULT_THRESHOLD};
pub use state::{Amplitudes, Limits, RegionState, AMPLITUDE_CAP_ENV};
pub use step::{read_sites, run, run_observed, step, step_ordered};
