//! Structural controllability and output controllability of networks with
//! higher-order heterogeneous local dynamics.

pub mod cases;
pub mod classify;
pub mod cover;
pub mod error;
pub mod extend;
pub mod graph;
pub mod model;
pub mod par;
pub mod verify;

pub use classify::{classify, ClassLabel, Label};
pub use cover::{generic_dimension, PathCycleCover, Stem};
pub use error::{Error, Result};
pub use extend::{extend_general, extend_x_network, ExtensionPlan};
pub use graph::SystemGraph;
pub use model::{CopyId, CopyPattern, ExtendedNetwork, StructuredNetwork};
pub use par::Execution;
