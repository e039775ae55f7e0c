//! Exclusive prefix sums.

use alloc::vec;
use alloc::vec::Vec;

use crate::parallel::{for_each_slice_mut, par_fill, Runtime};

/// Below this length the parallel scan falls back to the sequential one.
const PARALLEL_BLOCK: usize = 1 << 15;

/// `out[r] = values[0] + ... + values[r-1]`, with `out[0] = 0`.
pub fn exclusive_scan(values: &[usize]) -> Vec<usize> {
    let mut acc = 0usize;
    values
        .iter()
        .map(|&v| {
            let out = acc;
            acc += v;
            out
        })
        .collect()
}

/// Parallel exclusive scan; the output is identical to [`exclusive_scan`].
///
/// Two-level blocked scan: block totals in parallel, a sequential scan over
/// the totals, then each block rescans itself from its offset.
pub fn exclusive_scan_par<R: Runtime + ?Sized>(rt: &R, values: &[usize]) -> Vec<usize> {
    if rt.workers() == 1 || values.len() < 2 * PARALLEL_BLOCK {
        return exclusive_scan(values);
    }
    let blocks = values.len().div_ceil(PARALLEL_BLOCK);
    let mut totals = vec![0usize; blocks];
    par_fill(rt, &mut totals, 1, |b| {
        let start = b * PARALLEL_BLOCK;
        values[start..(start + PARALLEL_BLOCK).min(values.len())]
            .iter()
            .sum()
    });
    let block_offsets = exclusive_scan(&totals);
    let mut out = vec![0usize; values.len()];
    for_each_slice_mut(rt, &mut out, PARALLEL_BLOCK, |start, part| {
        let mut acc = block_offsets[start / PARALLEL_BLOCK];
        for (slot, &v) in part.iter_mut().zip(&values[start..]) {
            *slot = acc;
            acc += v;
        }
    });
    out
}

/// CSR offsets (length `counts.len() + 1`) from per-row counts.
pub fn offsets_from_counts<R: Runtime + ?Sized>(rt: &R, counts: &[usize]) -> Vec<usize> {
    let mut offsets = exclusive_scan_par(rt, counts);
    let total = offsets.last().copied().unwrap_or(0) + counts.last().copied().unwrap_or(0);
    offsets.push(total);
    offsets
}
