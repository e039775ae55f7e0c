use alloc::vec::Vec;
use core::sync::atomic::{AtomicBool, Ordering};

use crate::accumulator::ScratchPool;
use crate::atomic::AtomicF64;
use crate::graph::{vertex_weights, CsrGraph, Weight};
use crate::parallel::{for_each_chunk, Runtime, DEFAULT_CHUNK};

/// Working set of one pass: vertex weights `K'`, community weights `Σ'`,
/// pruning flags, and one accumulator per worker.
///
/// The accumulators survive across passes; the per-vertex arrays are
/// rebuilt by [`PassState::prepare`] for each pass graph.
#[derive(Debug)]
pub struct PassState {
    k: Vec<f64>,
    sigma: Vec<AtomicF64>,
    processed: Vec<AtomicBool>,
    pub(crate) scratch: ScratchPool,
    total_weight: f64,
}

impl PassState {
    /// State for a runtime with `workers` workers and graphs of at most
    /// `capacity` vertices (larger graphs grow the accumulators).
    pub fn new(workers: usize, capacity: usize, seed: u32) -> Self {
        PassState {
            k: Vec::new(),
            sigma: Vec::new(),
            processed: Vec::new(),
            scratch: ScratchPool::new(workers, capacity, seed),
            total_weight: 0.0,
        }
    }

    /// Loads `K'` for `g` and aggregates `Σ'` by `membership`; clears all
    /// pruning flags. Every id in `membership` must be below
    /// `g.num_vertices()`.
    pub fn prepare<W: Weight, R: Runtime + ?Sized>(
        &mut self,
        g: &CsrGraph<W>,
        membership: &[u32],
        rt: &R,
    ) {
        let n = g.num_vertices();
        assert_eq!(
            membership.len(),
            n,
            "membership length must match the graph"
        );
        assert!(
            rt.workers() <= self.scratch.workers(),
            "runtime has more workers than the pass state was built for"
        );
        self.scratch.reserve_keys(n);
        self.k = vertex_weights(g, rt).into_vec();
        self.total_weight = g.total_weight();
        self.sigma = (0..n).map(|_| AtomicF64::new(0.0)).collect();
        let (k, sigma) = (&self.k, &self.sigma);
        for_each_chunk(rt, n, DEFAULT_CHUNK, |_, range| {
            for i in range {
                sigma[membership[i] as usize].fetch_add(k[i], Ordering::Relaxed);
            }
        });
        self.processed = (0..n).map(|_| AtomicBool::new(false)).collect();
    }

    /// `Σ' ← K'` and all vertices unprocessed, for a singleton membership.
    pub fn reset_singletons(&mut self) {
        for (s, &k) in self.sigma.iter_mut().zip(&self.k) {
            *s = AtomicF64::new(k);
        }
        for p in &mut self.processed {
            *p = AtomicBool::new(false);
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.k.len()
    }

    /// Weighted degree `K'` of every vertex.
    pub fn k(&self) -> &[f64] {
        &self.k
    }

    pub(crate) fn sigma_cells(&self) -> &[AtomicF64] {
        &self.sigma
    }

    pub(crate) fn processed(&self) -> &[AtomicBool] {
        &self.processed
    }

    /// Current `Σ'` of community `c`.
    pub fn sigma(&self, c: u32) -> f64 {
        self.sigma[c as usize].load(Ordering::Relaxed)
    }

    pub fn sigma_snapshot(&self) -> Vec<f64> {
        self.sigma
            .iter()
            .map(|s| s.load(Ordering::Relaxed))
            .collect()
    }

    /// `2m` of the graph the state was prepared for.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }
}
