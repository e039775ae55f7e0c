//! CSR with over-allocated rows, filled concurrently.

use alloc::vec::Vec;
use core::sync::atomic::{AtomicU32, AtomicU64, AtomicUsize, Ordering};

use crate::graph::CsrGraph;
use crate::parallel::Runtime;
use crate::scan::offsets_from_counts;

/// Row `r` owns slots `capacity_offsets[r]..capacity_offsets[r + 1]`, of
/// which the first `fill[r]` are occupied. Appends from different threads
/// are safe; each claims its slot with an atomic increment of the row
/// counter.
#[derive(Debug)]
pub struct HoleyCsrBuilder {
    capacity_offsets: Vec<usize>,
    fill: Vec<AtomicUsize>,
    edges: Vec<AtomicU32>,
    weights: Vec<AtomicU64>,
}

impl HoleyCsrBuilder {
    /// `capacity_offsets` must be non-decreasing and start at zero.
    pub fn new(capacity_offsets: Vec<usize>) -> Self {
        assert!(
            capacity_offsets.first() == Some(&0)
                && capacity_offsets.windows(2).all(|w| w[0] <= w[1]),
            "capacity offsets must start at 0 and be non-decreasing"
        );
        let rows = capacity_offsets.len() - 1;
        let slots = capacity_offsets[rows];
        HoleyCsrBuilder {
            fill: (0..rows).map(|_| AtomicUsize::new(0)).collect(),
            edges: (0..slots).map(|_| AtomicU32::new(0)).collect(),
            weights: (0..slots).map(|_| AtomicU64::new(0)).collect(),
            capacity_offsets,
        }
    }

    /// Builder whose row `r` can hold `capacities[r]` arcs.
    pub fn with_capacities<R: Runtime + ?Sized>(rt: &R, capacities: &[usize]) -> Self {
        Self::new(offsets_from_counts(rt, capacities))
    }

    pub fn num_rows(&self) -> usize {
        self.fill.len()
    }

    pub fn capacity(&self, row: usize) -> usize {
        self.capacity_offsets[row + 1] - self.capacity_offsets[row]
    }

    pub fn capacity_offsets(&self) -> &[usize] {
        &self.capacity_offsets
    }

    pub fn row_len(&self, row: usize) -> usize {
        self.fill[row].load(Ordering::Acquire)
    }

    /// Appends arc `row -> target` with weight `w`.
    ///
    /// Panics when the row is already at capacity, which means the degree
    /// over-estimate used to size it was wrong.
    pub fn push(&self, row: usize, target: u32, w: f64) {
        let pos = self.fill[row].fetch_add(1, Ordering::AcqRel);
        assert!(pos < self.capacity(row), "row {row} exceeds its capacity");
        let slot = self.capacity_offsets[row] + pos;
        self.edges[slot].store(target, Ordering::Relaxed);
        self.weights[slot].store(w.to_bits(), Ordering::Relaxed);
    }

    /// Occupied arcs of `row`.
    pub fn row(&self, row: usize) -> impl Iterator<Item = (u32, f64)> + '_ {
        let start = self.capacity_offsets[row];
        (start..start + self.row_len(row)).map(move |s| {
            (
                self.edges[s].load(Ordering::Relaxed),
                f64::from_bits(self.weights[s].load(Ordering::Relaxed)),
            )
        })
    }

    /// Drops the holes and returns a dense CSR graph.
    pub fn compact<R: Runtime + ?Sized>(self, rt: &R) -> CsrGraph<f64> {
        let fills: Vec<usize> = self.fill.into_iter().map(AtomicUsize::into_inner).collect();
        let offsets = offsets_from_counts(rt, &fills);
        let total = offsets[fills.len()];
        let mut edges = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        for (row, &len) in fills.iter().enumerate() {
            let start = self.capacity_offsets[row];
            for slot in start..start + len {
                edges.push(self.edges[slot].load(Ordering::Relaxed));
                weights.push(f64::from_bits(self.weights[slot].load(Ordering::Relaxed)));
            }
        }
        CsrGraph::from_parts_unchecked(offsets, edges, weights)
    }
}
