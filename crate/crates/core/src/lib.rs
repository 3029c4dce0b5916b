//! Invariance pressure, induced pressure and BS invariance dimension for
//! discrete-time control systems presented through invariant partitions.
//!
//! Every quantity here depends on the control system only through the
//! admissible-word language of the partition and additive per-symbol weights
//! compiled from potentials on the control range. The crate is `no_std`
//! (it needs `alloc`); file formats, configuration and the command line live
//! in the `invpress` companion crate.
//!
//! Module map:
//!
//! * [`symbolic`]: control ranges, partitions, per-symbol weights, word
//!   languages and cylinder trees.
//! * [`systems`]: finite-state and affine interval systems, invariant
//!   partition validation and compilation to word languages.
//! * [`capacity`]: upper capacity invariance pressure, spectral and cycle-mean
//!   limit oracles, and the certified Bowen-equation root.
//! * [`induced`]: finite-T induced pressure sums and the dimensional
//!   characterization scan.
//! * [`caratheodory`]: cylinder-cover outer sums, Pesin-Pitskel pressure, BS
//!   invariance dimension and tree-duality Frostman measures.
//! * [`measures`]: cylinder measures, lower BS invariance pressure and the
//!   variational-principle harness.
#![no_std]
#![forbid(unsafe_code)]
#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop,
    clippy::should_implement_trait,
    clippy::too_many_arguments,
    clippy::type_complexity
)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod capacity;
pub mod caratheodory;
mod error;
pub mod induced;
mod limits;
pub mod logspace;
mod math;
pub mod measures;
pub mod spectral;
pub mod symbolic;
pub mod systems;

pub use error::{Error, ErrorKind, Result};

/// Version of this crate, for run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use limits::Limits;
pub use logspace::LogValue;
pub use symbolic::{
    ControlRange, CylinderTree, PartitionSpec, PerSymbolWeights, Symbol, Word, WordLanguage,
};
