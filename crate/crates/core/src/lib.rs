//! Parallel Leiden community detection on weighted undirected graphs.
//!
//! The crate is `no_std` (with `alloc`). Parallelism is supplied by the
//! caller through the [`Runtime`] trait: anything that can broadcast a job
//! to a fixed set of workers. [`Sequential`] is the single-thread runtime.
//!
//! The pipeline per pass is local-moving, refinement within the
//! local-moving bounds, then aggregation of refined communities into
//! super-vertices. See [`leiden()`] for the driver and [`quality`] for
//! modularity and the disconnected-community audit.
#![no_std]
#![warn(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod accumulator;
pub mod atomic;
pub mod config;
pub mod error;
pub mod graph;
pub mod holey;
pub mod leiden;
pub mod membership;
pub mod parallel;
pub mod quality;
pub mod rng;
pub mod scan;

pub use accumulator::ThreadAccumulator;
pub use config::{LabelStrategy, LeidenConfig, RefineStrategy};
pub use error::{ConfigError, GraphError, QualityError};
pub use graph::{vertex_weights, CsrGraph, Symmetry, VertexWeights, Weight};
pub use holey::HoleyCsrBuilder;
pub use leiden::{
    delta_modularity, leiden, leiden_observed, LeidenResult, PassTrace, PhaseSeconds,
};
pub use membership::{lookup_dendrogram, renumber_communities, Membership};
pub use parallel::{Runtime, Sequential};
pub use quality::{audit, disconnected_communities, modularity, AuditReport};
pub use rng::Xorshift32;
pub use scan::exclusive_scan;
