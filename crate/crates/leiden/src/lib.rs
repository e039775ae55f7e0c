//! Leiden community detection on shared-memory multicore machines.
//!
//! Re-exports `leiden-core` and adds the parts that need `std`, chiefly the
//! rayon-backed [`ThreadPoolRuntime`], the file formats and the `leiden` CLI.

pub mod cli;
pub mod io;
pub mod report;
pub mod runtime;
pub mod synthetic;

pub use leiden_core::*;
pub use runtime::ThreadPoolRuntime;
