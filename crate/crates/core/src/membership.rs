//! Community membership vectors and the operations that reshape them.

use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU32, AtomicUsize, Ordering};

use crate::parallel::{for_each_chunk, par_fill, Runtime, DEFAULT_CHUNK};

/// Community id of every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Membership(Vec<u32>);

impl Membership {
    /// Every vertex in its own community.
    pub fn singletons(n: usize) -> Self {
        Membership((0..n as u32).collect())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of distinct ids in use.
    pub fn num_communities(&self) -> usize {
        count_distinct(&self.0)
    }
}

impl From<Vec<u32>> for Membership {
    fn from(v: Vec<u32>) -> Self {
        Membership(v)
    }
}

impl core::ops::Deref for Membership {
    type Target = [u32];
    fn deref(&self) -> &[u32] {
        &self.0
    }
}

/// Read access to community labels, either plain or shared between threads.
pub trait CommunityLabels: Sync {
    fn label(&self, v: usize) -> u32;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl CommunityLabels for [u32] {
    #[inline]
    fn label(&self, v: usize) -> u32 {
        self[v]
    }
    fn len(&self) -> usize {
        <[u32]>::len(self)
    }
}

impl CommunityLabels for Vec<u32> {
    #[inline]
    fn label(&self, v: usize) -> u32 {
        self[v]
    }
    fn len(&self) -> usize {
        Vec::len(self)
    }
}

impl CommunityLabels for [AtomicU32] {
    #[inline]
    fn label(&self, v: usize) -> u32 {
        self[v].load(Ordering::Relaxed)
    }
    fn len(&self) -> usize {
        <[AtomicU32]>::len(self)
    }
}

impl CommunityLabels for Vec<AtomicU32> {
    #[inline]
    fn label(&self, v: usize) -> u32 {
        self[v].load(Ordering::Relaxed)
    }
    fn len(&self) -> usize {
        Vec::len(self)
    }
}

pub(crate) fn to_atomic(ids: &[u32]) -> Vec<AtomicU32> {
    ids.iter().map(|&c| AtomicU32::new(c)).collect()
}

pub(crate) fn from_atomic(ids: Vec<AtomicU32>) -> Vec<u32> {
    ids.into_iter().map(AtomicU32::into_inner).collect()
}

fn count_distinct(ids: &[u32]) -> usize {
    let Some(&max) = ids.iter().max() else {
        return 0;
    };
    let mut seen = vec![false; max as usize + 1];
    ids.iter()
        .filter(|&&c| !core::mem::replace(&mut seen[c as usize], true))
        .count()
}

/// Maps the ids in use onto `0..count`, keeping their relative order.
/// Returns the new labels and `count`.
pub fn renumber_communities(ids: &[u32]) -> (Vec<u32>, usize) {
    let Some(&max) = ids.iter().max() else {
        return (Vec::new(), 0);
    };
    let mut map = vec![u32::MAX; max as usize + 1];
    for &c in ids {
        map[c as usize] = 0;
    }
    let mut next = 0u32;
    for slot in map.iter_mut().filter(|s| **s == 0) {
        *slot = next;
        next += 1;
    }
    (
        ids.iter().map(|&c| map[c as usize]).collect(),
        next as usize,
    )
}

/// Composes two levels of the dendrogram: `out[i] = next[top[i]]`.
///
/// Panics if some `top[i]` is not a valid index into `next`.
pub fn lookup_dendrogram<R: Runtime + ?Sized>(rt: &R, top: &[u32], next: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32; top.len()];
    par_fill(rt, &mut out, DEFAULT_CHUNK, |i| {
        let c = top[i] as usize;
        assert!(
            c < next.len(),
            "dendrogram lookup: vertex {i} maps to {c}, beyond {} super-vertices",
            next.len()
        );
        next[c]
    });
    out
}

/// Number of vertices per community id; the result has `max id + 1`
/// entries, so unused ids below the maximum count zero.
pub fn count_community_vertices<R: Runtime + ?Sized>(rt: &R, ids: &[u32]) -> Vec<usize> {
    let len = ids.iter().max().map_or(0, |&m| m as usize + 1);
    count_into(rt, ids, len)
}

pub(crate) fn count_into<R: Runtime + ?Sized>(rt: &R, ids: &[u32], len: usize) -> Vec<usize> {
    let counts: Vec<AtomicUsize> = (0..len).map(|_| AtomicUsize::new(0)).collect();
    for_each_chunk(rt, ids.len(), DEFAULT_CHUNK, |_, range| {
        for &c in &ids[range] {
            counts[c as usize].fetch_add(1, Ordering::Relaxed);
        }
    });
    counts.into_iter().map(AtomicUsize::into_inner).collect()
}
