//! The multi-pass driver and its three phases.
//!
//! Each pass runs local-moving from the carried labels, saves the result
//! as community bounds, refines from singletons inside those bounds, and
//! (unless converged) contracts the refined communities into the next
//! pass's super-vertex graph.

mod aggregate;
mod moving;
mod refine;
mod state;

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::Ordering;

pub use aggregate::{aggregate, community_total_degree, community_vertices};
pub use moving::{local_move, scan_communities};
pub use refine::{claim_isolated, refine, scan_bounded};
pub use state::PassState;

use crate::accumulator::ThreadAccumulator;
use crate::atomic::AtomicF64;
use crate::config::{LabelStrategy, LeidenConfig};
use crate::error::ConfigError;
use crate::graph::{CsrGraph, Weight};
use crate::membership::{
    from_atomic, lookup_dendrogram, renumber_communities, to_atomic, Membership,
};
use crate::parallel::Runtime;

/// Modularity change from moving a vertex with weighted degree `k_i` out
/// of community `d` into community `c`.
///
/// `k_to_c` and `k_to_d` are the vertex's edge weights into `c` and `d`
/// (self-loop excluded), `sigma_c` is the total weight of `c` without the
/// vertex, `sigma_d` that of `d` with it, and `m` is half the total graph
/// weight.
#[inline]
pub fn delta_modularity(
    k_to_c: f64,
    k_to_d: f64,
    k_i: f64,
    sigma_c: f64,
    sigma_d: f64,
    m: f64,
) -> f64 {
    (k_to_c - k_to_d) / m - k_i * (k_i + sigma_c - sigma_d) / (2.0 * m * m)
}

/// Best strictly improving target among the accumulator's communities,
/// lowest id on ties.
#[inline]
pub(crate) fn best_move(
    acc: &ThreadAccumulator,
    own: u32,
    k_i: f64,
    sigma_own: f64,
    sigma: &[AtomicF64],
    m: f64,
) -> Option<(u32, f64)> {
    let k_own = acc.get(own);
    let mut best: Option<(u32, f64)> = None;
    for (c, k_c) in acc.iter() {
        if c == own {
            continue;
        }
        let dq = delta_modularity(
            k_c,
            k_own,
            k_i,
            sigma[c as usize].load(Ordering::Relaxed),
            sigma_own,
            m,
        );
        if dq <= 0.0 {
            continue;
        }
        match best {
            Some((bc, bq)) if bq > dq || (bq == dq && bc < c) => {}
            _ => best = Some((c, dq)),
        }
    }
    best
}

/// Wall time spent per phase, in the runtime's clock.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseSeconds {
    pub local_moving: f64,
    pub refinement: f64,
    pub aggregation: f64,
    /// Everything else: setup, renumbering, dendrogram lookups.
    pub other: f64,
}

impl PhaseSeconds {
    pub fn total(&self) -> f64 {
        self.local_moving + self.refinement + self.aggregation + self.other
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeidenResult {
    /// Final community of every input vertex, ids dense in
    /// `0..num_communities`.
    pub membership: Membership,
    pub num_communities: usize,
    pub passes: usize,
    /// `(local-moving iterations, refinement result)` per pass.
    pub iterations: Vec<(usize, usize)>,
    pub phase_seconds: PhaseSeconds,
}

/// Snapshot handed to the observer of [`leiden_observed`] after each pass.
#[derive(Debug)]
pub struct PassTrace<'a> {
    /// Zero-based pass index.
    pub pass: usize,
    /// Vertices of this pass's graph.
    pub num_vertices: usize,
    pub move_iterations: usize,
    pub refine_iterations: usize,
    /// Input vertex -> vertex of this pass's graph.
    pub top: &'a [u32],
    /// Local-moving communities over this pass's vertices.
    pub bounds: &'a [u32],
    /// Refined communities over this pass's vertices, renumbered.
    pub refined: &'a [u32],
    pub num_refined: usize,
    /// `2m` of this pass's graph.
    pub input_total_weight: f64,
    /// `2m` of the super-vertex graph, if the pass aggregated.
    pub aggregated_total_weight: Option<f64>,
}

impl PassTrace<'_> {
    /// Expresses labels over this pass's vertices in terms of input vertices.
    pub fn flatten(&self, labels: &[u32]) -> Vec<u32> {
        self.top.iter().map(|&v| labels[v as usize]).collect()
    }
}

/// Runs Leiden on `g` with the parallelism of `rt`.
pub fn leiden<W: Weight, R: Runtime + ?Sized>(
    g: &CsrGraph<W>,
    cfg: &LeidenConfig,
    rt: &R,
) -> Result<LeidenResult, ConfigError> {
    leiden_observed(g, cfg, rt, &mut |_| {})
}

/// [`leiden`] with a callback after every pass.
pub fn leiden_observed<W: Weight, R: Runtime + ?Sized>(
    g: &CsrGraph<W>,
    cfg: &LeidenConfig,
    rt: &R,
    observer: &mut dyn FnMut(&PassTrace<'_>),
) -> Result<LeidenResult, ConfigError> {
    cfg.validate()?;
    let start = rt.now();
    let n = g.num_vertices();
    let mut driver = Driver {
        cfg,
        rt,
        observer,
        top: (0..n as u32).collect(),
        carry: None,
        tolerance: cfg.tolerance,
        state: PassState::new(rt.workers(), n, cfg.rng_seed),
        iterations: Vec::new(),
        phases: PhaseSeconds::default(),
    };
    if n > 0 {
        let mut next = driver.pass(g);
        while let Some(super_graph) = next {
            if driver.iterations.len() >= cfg.max_passes {
                break;
            }
            next = driver.pass(&super_graph);
        }
    }
    let flat = match &driver.carry {
        Some(labels) => lookup_dendrogram(rt, &driver.top, labels),
        None => driver.top.clone(),
    };
    let (ids, num_communities) = renumber_communities(&flat);
    let mut phase_seconds = driver.phases;
    phase_seconds.other = (rt.now()
        - start
        - phase_seconds.local_moving
        - phase_seconds.refinement
        - phase_seconds.aggregation)
        .max(0.0);
    Ok(LeidenResult {
        membership: Membership::from(ids),
        num_communities,
        passes: driver.iterations.len(),
        iterations: driver.iterations,
        phase_seconds,
    })
}

struct Driver<'a, R: Runtime + ?Sized> {
    cfg: &'a LeidenConfig,
    rt: &'a R,
    observer: &'a mut dyn FnMut(&PassTrace<'_>),
    /// Input vertex -> vertex of the current pass graph.
    top: Vec<u32>,
    /// Labels over the current pass graph's vertices: the starting
    /// membership of the next pass, or the final one after the last pass.
    carry: Option<Vec<u32>>,
    tolerance: f64,
    state: PassState,
    iterations: Vec<(usize, usize)>,
    phases: PhaseSeconds,
}

impl<R: Runtime + ?Sized> Driver<'_, R> {
    /// Runs one pass on `g`; returns the super-vertex graph if passes should
    /// continue.
    fn pass<W: Weight>(&mut self, g: &CsrGraph<W>) -> Option<CsrGraph<f64>> {
        let (cfg, rt) = (self.cfg, self.rt);
        let n = g.num_vertices();
        let t0 = rt.now();

        let initial = self.carry.take().unwrap_or_else(|| (0..n as u32).collect());
        self.state.prepare(g, &initial, rt);
        let membership = to_atomic(&initial);
        let move_iterations = local_move(g, &self.state, &membership, self.tolerance, cfg, rt);
        let bounds = from_atomic(membership);
        let t1 = rt.now();

        self.state.reset_singletons();
        let membership = to_atomic(&(0..n as u32).collect::<Vec<_>>());
        let refine_iterations = refine(g, &bounds, &membership, &self.state, cfg, rt);
        let refined = from_atomic(membership);
        let t2 = rt.now();
        self.phases.local_moving += t1 - t0;
        self.phases.refinement += t2 - t1;
        self.iterations.push((move_iterations, refine_iterations));

        let (refined, num_refined) = renumber_communities(&refined);
        let globally_converged = move_iterations + refine_iterations <= 1;
        let low_shrink = num_refined as f64 / n as f64 > cfg.aggregation_tolerance;
        if globally_converged || low_shrink {
            (self.observer)(&PassTrace {
                pass: self.iterations.len() - 1,
                num_vertices: n,
                move_iterations,
                refine_iterations,
                top: &self.top,
                bounds: &bounds,
                refined: &refined,
                num_refined,
                input_total_weight: g.total_weight(),
                aggregated_total_weight: None,
            });
            self.carry = Some(refined);
            return None;
        }

        let top = lookup_dendrogram(rt, &self.top, &refined);
        let super_graph = aggregate::aggregate_with(
            g,
            &refined,
            num_refined,
            &self.state.scratch,
            cfg.chunk_size,
            rt,
        );
        self.phases.aggregation += rt.now() - t2;
        (self.observer)(&PassTrace {
            pass: self.iterations.len() - 1,
            num_vertices: n,
            move_iterations,
            refine_iterations,
            top: &self.top,
            bounds: &bounds,
            refined: &refined,
            num_refined,
            input_total_weight: g.total_weight(),
            aggregated_total_weight: Some(super_graph.total_weight()),
        });
        self.top = top;
        self.carry = Some(match cfg.label_strategy {
            LabelStrategy::MoveBased => {
                // Refined communities nest inside bounds, so any member's
                // bound labels the whole super-vertex.
                let mut labels = vec![0u32; num_refined];
                for (v, &s) in refined.iter().enumerate() {
                    labels[s as usize] = bounds[v];
                }
                renumber_communities(&labels).0
            }
            LabelStrategy::RefineBased => (0..num_refined as u32).collect(),
        });
        self.tolerance /= cfg.tolerance_drop;
        Some(super_graph)
    }
}
