//! Local-moving phase.

use core::sync::atomic::{AtomicU32, Ordering};

use super::best_move;
use super::state::PassState;
use crate::accumulator::ThreadAccumulator;
use crate::atomic::AtomicF64;
use crate::config::LeidenConfig;
use crate::graph::{CsrGraph, Weight};
use crate::membership::CommunityLabels;
use crate::parallel::{for_each_chunk_with, Runtime};

/// Adds the weight from `v` to each neighbouring community into `acc`.
/// The self-loop of `v` is skipped unless `include_self` is set.
#[inline]
pub fn scan_communities<W, L>(
    acc: &mut ThreadAccumulator,
    g: &CsrGraph<W>,
    membership: &L,
    v: usize,
    include_self: bool,
) where
    W: Weight,
    L: CommunityLabels + ?Sized,
{
    for (j, w) in g.neighbors(v) {
        if !include_self && j as usize == v {
            continue;
        }
        acc.add(membership.label(j as usize), w.to_f64());
    }
}

/// Moves vertices greedily to the neighbouring community of highest
/// positive delta-modularity until an iteration's total gain is at most
/// `tolerance` or `cfg.max_iterations` iterations have run.
///
/// Workers read memberships of other vertices without synchronisation;
/// community weights and membership stores are atomic. Returns the number
/// of iterations performed, counting the one that met the tolerance.
pub fn local_move<W: Weight, R: Runtime + ?Sized>(
    g: &CsrGraph<W>,
    state: &PassState,
    membership: &[AtomicU32],
    tolerance: f64,
    cfg: &LeidenConfig,
    rt: &R,
) -> usize {
    let n = g.num_vertices();
    let m = state.total_weight() / 2.0;
    let k = state.k();
    let sigma = state.sigma_cells();
    let processed = state.processed();

    for iteration in 0..cfg.max_iterations {
        let total_gain = AtomicF64::new(0.0);
        for_each_chunk_with(
            rt,
            n,
            cfg.chunk_size,
            |worker| (worker, 0.0f64),
            |(worker, gain), range| {
                state.scratch.with(*worker, |scratch| {
                    let acc = &mut scratch.acc;
                    for i in range {
                        if cfg.prune && processed[i].load(Ordering::Relaxed) {
                            continue;
                        }
                        processed[i].store(true, Ordering::Relaxed);
                        let own = membership[i].load(Ordering::Relaxed);
                        acc.clear();
                        scan_communities(acc, g, membership, i, false);
                        let k_i = k[i];
                        let sigma_own = sigma[own as usize].load(Ordering::Relaxed);
                        let Some((target, dq)) = best_move(acc, own, k_i, sigma_own, sigma, m)
                        else {
                            continue;
                        };
                        sigma[own as usize].fetch_sub(k_i, Ordering::Relaxed);
                        sigma[target as usize].fetch_add(k_i, Ordering::Relaxed);
                        membership[i].store(target, Ordering::Relaxed);
                        *gain += dq;
                        if cfg.prune {
                            for &j in g.row(i).0 {
                                processed[j as usize].store(false, Ordering::Relaxed);
                            }
                        }
                    }
                    acc.clear();
                });
            },
            |(_, gain)| {
                total_gain.fetch_add(gain, Ordering::Relaxed);
            },
        );
        if total_gain.into_inner() <= tolerance {
            return iteration + 1;
        }
    }
    cfg.max_iterations
}
