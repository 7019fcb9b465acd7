//! Product-state classical capacity of qubit channels.
//!
//! Covers amplitude damping, generalised amplitude damping and depolarising
//! channels through their one-parameter χ(a) curves, a multi-start ensemble
//! search that works for any Kraus map, and two memory-channel constructions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channels;
pub mod error;
pub mod holevo;
pub mod linalg;
pub mod memory;
pub mod optimize;
pub mod qstate;

pub use channels::{
    AmplitudeDamping, Channel, ChannelRegistry, Depolarizing, GeneralizedAmplitudeDamping,
    GenericKraus, KrausSet, QubitChannel,
};
pub use error::{Error, Result};
pub use memory::{InterchangeReport, MemoryKind, MemorySpec, MinMaxDiagnostic};
pub use optimize::{capacity, CapacityResult, Method, OracleConfig, OracleResult};
pub use qstate::{BlochVector, DensityMatrix, Ensemble, PureQubit, Sign};
