//! Aggregation phase: contract each community into a super-vertex.

use alloc::vec::Vec;
use core::sync::atomic::{AtomicU32, AtomicUsize, Ordering};

use super::moving::scan_communities;
use crate::accumulator::ScratchPool;
use crate::graph::{CsrGraph, Weight};
use crate::holey::HoleyCsrBuilder;
use crate::membership::count_into;
use crate::parallel::{for_each_chunk, for_each_chunk_with, Runtime, DEFAULT_CHUNK};
use crate::scan::offsets_from_counts;

/// Sum of row lengths of each community's members: an upper bound on the
/// number of distinct neighbouring communities of its super-vertex.
pub fn community_total_degree<W: Weight, R: Runtime + ?Sized>(
    g: &CsrGraph<W>,
    membership: &[u32],
    rt: &R,
) -> Vec<usize> {
    let len = membership.iter().max().map_or(0, |&m| m as usize + 1);
    total_degree_into(g, membership, len, rt)
}

fn total_degree_into<W: Weight, R: Runtime + ?Sized>(
    g: &CsrGraph<W>,
    membership: &[u32],
    len: usize,
    rt: &R,
) -> Vec<usize> {
    let deg: Vec<AtomicUsize> = (0..len).map(|_| AtomicUsize::new(0)).collect();
    for_each_chunk(rt, membership.len(), DEFAULT_CHUNK, |_, range| {
        for i in range {
            deg[membership[i] as usize].fetch_add(g.degree(i), Ordering::Relaxed);
        }
    });
    deg.into_iter().map(AtomicUsize::into_inner).collect()
}

/// Members of every community as a CSR: community `c`'s vertices are
/// `vertices[offsets[c]..offsets[c + 1]]`.
pub fn community_vertices<R: Runtime + ?Sized>(
    rt: &R,
    membership: &[u32],
    num_communities: usize,
) -> (Vec<usize>, Vec<u32>) {
    let counts = count_into(rt, membership, num_communities);
    let offsets = offsets_from_counts(rt, &counts);
    let cursor: Vec<AtomicUsize> = offsets[..num_communities]
        .iter()
        .map(|&o| AtomicUsize::new(o))
        .collect();
    let vertices: Vec<AtomicU32> = (0..membership.len()).map(|_| AtomicU32::new(0)).collect();
    for_each_chunk(rt, membership.len(), DEFAULT_CHUNK, |_, range| {
        for i in range {
            let slot = cursor[membership[i] as usize].fetch_add(1, Ordering::Relaxed);
            vertices[slot].store(i as u32, Ordering::Relaxed);
        }
    });
    (
        offsets,
        vertices.into_iter().map(AtomicU32::into_inner).collect(),
    )
}

/// Super-vertex graph of `g` under `membership`, whose ids must be dense
/// in `0..max + 1`. Arc `(c, d)` carries the total weight of arcs from
/// members of `c` to members of `d`; intra-community weight lands on the
/// self-loop `(c, c)`, so the total weight is preserved.
pub fn aggregate<W: Weight, R: Runtime + ?Sized>(
    g: &CsrGraph<W>,
    membership: &[u32],
    rt: &R,
) -> CsrGraph<f64> {
    let num_communities = membership.iter().max().map_or(0, |&m| m as usize + 1);
    let pool = ScratchPool::new(rt.workers(), num_communities, 1);
    aggregate_with(g, membership, num_communities, &pool, DEFAULT_CHUNK, rt)
}

pub(crate) fn aggregate_with<W: Weight, R: Runtime + ?Sized>(
    g: &CsrGraph<W>,
    membership: &[u32],
    num_communities: usize,
    pool: &ScratchPool,
    chunk: usize,
    rt: &R,
) -> CsrGraph<f64> {
    let (members_at, members) = community_vertices(rt, membership, num_communities);
    let degrees = total_degree_into(g, membership, num_communities, rt);
    let builder = HoleyCsrBuilder::with_capacities(rt, &degrees);
    for_each_chunk_with(
        rt,
        num_communities,
        chunk,
        |worker| worker,
        |worker, range| {
            pool.with(*worker, |scratch| {
                let acc = &mut scratch.acc;
                for c in range {
                    acc.clear();
                    for &i in &members[members_at[c]..members_at[c + 1]] {
                        scan_communities(acc, g, membership, i as usize, true);
                    }
                    for (d, w) in acc.iter() {
                        builder.push(c, d, w);
                    }
                }
                acc.clear();
            });
        },
        |_| {},
    );
    builder.compact(rt)
}
