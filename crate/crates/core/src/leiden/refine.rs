//! Refinement phase: constrained merges of isolated vertices inside the
//! local-moving communities.

use core::sync::atomic::{AtomicBool, AtomicU32, Ordering};

use super::best_move;
use super::state::PassState;
use crate::accumulator::{ThreadAccumulator, WorkerScratch};
use crate::atomic::AtomicF64;
use crate::config::{LeidenConfig, RefineStrategy};
use crate::graph::{CsrGraph, Weight};
use crate::membership::CommunityLabels;
use crate::parallel::{for_each_chunk_with, Runtime};

/// Like `scan_communities` without the self-loop, restricted to neighbours
/// that share `v`'s bound.
#[inline]
pub fn scan_bounded<W, B, L>(
    acc: &mut ThreadAccumulator,
    g: &CsrGraph<W>,
    bounds: &B,
    membership: &L,
    v: usize,
) where
    W: Weight,
    B: CommunityLabels + ?Sized,
    L: CommunityLabels + ?Sized,
{
    let bound = bounds.label(v);
    for (j, w) in g.neighbors(v) {
        let j = j as usize;
        if j == v || bounds.label(j) != bound {
            continue;
        }
        acc.add(membership.label(j), w.to_f64());
    }
}

/// Atomically replaces `cell` with `0` if it holds exactly `expected`
/// (bitwise). Returns whether the swap happened.
#[inline]
pub fn claim_isolated(cell: &AtomicF64, expected: f64) -> bool {
    cell.compare_exchange(expected, 0.0, Ordering::AcqRel)
        .is_ok()
}

/// One sweep over all vertices. A vertex may move only while it is alone in
/// its community, and only to a community inside its bound. Returns 1 if any
/// vertex moved, 0 otherwise.
///
/// Expects the singleton membership with `Σ' = K'`.
pub fn refine<W, B, R>(
    g: &CsrGraph<W>,
    bounds: &B,
    membership: &[AtomicU32],
    state: &PassState,
    cfg: &LeidenConfig,
    rt: &R,
) -> usize
where
    W: Weight,
    B: CommunityLabels + ?Sized,
    R: Runtime + ?Sized,
{
    let n = g.num_vertices();
    let m = state.total_weight() / 2.0;
    let k = state.k();
    let sigma = state.sigma_cells();
    let moved = AtomicBool::new(false);

    for_each_chunk_with(
        rt,
        n,
        cfg.chunk_size,
        |worker| worker,
        |worker, range| {
            state.scratch.with(*worker, |scratch| {
                for i in range {
                    let own = membership[i].load(Ordering::Relaxed);
                    let k_i = k[i];
                    if sigma[own as usize].load(Ordering::Relaxed) != k_i {
                        continue;
                    }
                    scratch.acc.clear();
                    scan_bounded(&mut scratch.acc, g, bounds, membership, i);
                    let choice = match cfg.refine_strategy {
                        RefineStrategy::Greedy => best_move(&scratch.acc, own, k_i, k_i, sigma, m),
                        RefineStrategy::Random => random_move(scratch, own, k_i, sigma, m),
                    };
                    let Some((target, _)) = choice else {
                        continue;
                    };
                    if claim_isolated(&sigma[own as usize], k_i) {
                        sigma[target as usize].fetch_add(k_i, Ordering::Relaxed);
                        membership[i].store(target, Ordering::Relaxed);
                        moved.store(true, Ordering::Relaxed);
                    }
                }
                scratch.acc.clear();
            });
        },
        |_| {},
    );
    moved.into_inner() as usize
}

/// Picks among the positive-gain communities in the accumulator with
/// probability proportional to gain.
fn random_move(
    scratch: &mut WorkerScratch,
    own: u32,
    k_i: f64,
    sigma: &[AtomicF64],
    m: f64,
) -> Option<(u32, f64)> {
    let WorkerScratch {
        acc,
        rng,
        candidates,
    } = scratch;
    candidates.clear();
    let k_own = acc.get(own);
    let mut total = 0.0;
    for (c, k_c) in acc.iter() {
        if c == own {
            continue;
        }
        let dq = super::delta_modularity(
            k_c,
            k_own,
            k_i,
            sigma[c as usize].load(Ordering::Relaxed),
            k_i,
            m,
        );
        if dq > 0.0 {
            total += dq;
            candidates.push((c, dq));
        }
    }
    let last = *candidates.last()?;
    let mut r = rng.next_f64() * total;
    for &(c, dq) in candidates.iter() {
        if r < dq {
            return Some((c, dq));
        }
        r -= dq;
    }
    Some(last)
}
