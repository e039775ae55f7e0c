//! Weighted undirected graphs in compressed sparse row form.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::GraphError;
use crate::parallel::{par_fill, Runtime, DEFAULT_CHUNK};

/// Storage type of an edge weight. Arithmetic is always done in `f64`.
pub trait Weight: Copy + Send + Sync + PartialOrd + fmt::Debug + 'static {
    fn to_f64(self) -> f64;
    fn from_f64(v: f64) -> Self;
}

impl Weight for f32 {
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
    #[inline]
    fn from_f64(v: f64) -> Self {
        v as f32
    }
}

impl Weight for f64 {
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }
}

/// How [`CsrGraph::from_entries`] interprets its entry list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// Entries are directed arcs. Repeated arcs are summed, then every arc
    /// gains its reverse; if both directions were listed the pair takes the
    /// larger of the two weights.
    General,
    /// Every entry is an undirected edge and yields both arcs. Repeated
    /// edges (in either orientation) are summed.
    Symmetric,
}

/// Immutable weighted undirected graph.
///
/// Both directions of every edge are stored. A self-loop is stored once in
/// its row and counts once towards the vertex weight, so the sum of all
/// stored weights is `2m`.
#[derive(Clone, PartialEq)]
pub struct CsrGraph<W = f32> {
    offsets: Vec<usize>,
    edges: Vec<u32>,
    weights: Vec<W>,
    total_weight: f64,
}

impl<W: Weight> CsrGraph<W> {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        CsrGraph {
            offsets: vec![0; n + 1],
            edges: Vec::new(),
            weights: Vec::new(),
            total_weight: 0.0,
        }
    }

    /// Wraps existing CSR arrays after checking their shape. Symmetry of
    /// the arc set is the caller's responsibility.
    pub fn from_raw_parts(
        offsets: Vec<usize>,
        edges: Vec<u32>,
        weights: Vec<W>,
    ) -> Result<Self, GraphError> {
        if edges.len() != weights.len() {
            return Err(GraphError::LengthMismatch {
                edges: edges.len(),
                weights: weights.len(),
            });
        }
        if offsets.first() != Some(&0)
            || offsets.last() != Some(&edges.len())
            || offsets.windows(2).any(|w| w[0] > w[1])
        {
            return Err(GraphError::InvalidOffsets);
        }
        let n = offsets.len() - 1;
        check_vertex_count(n)?;
        if let Some(&bad) = edges.iter().find(|&&e| e as usize >= n) {
            return Err(GraphError::VertexOutOfRange {
                vertex: bad as u64,
                num_vertices: n,
            });
        }
        for (row, w) in offsets.windows(2).enumerate() {
            for idx in w[0]..w[1] {
                let weight = weights[idx].to_f64();
                if !(weight >= 0.0) {
                    return Err(GraphError::NegativeWeight {
                        source: row as u32,
                        target: edges[idx],
                        weight,
                    });
                }
            }
        }
        Ok(Self::from_parts_unchecked(offsets, edges, weights))
    }

    pub(crate) fn from_parts_unchecked(
        offsets: Vec<usize>,
        edges: Vec<u32>,
        weights: Vec<W>,
    ) -> Self {
        let total_weight = weights.iter().map(|w| w.to_f64()).sum();
        CsrGraph {
            offsets,
            edges,
            weights,
            total_weight,
        }
    }

    /// Builds a graph on `n` vertices from `(source, target, weight)`
    /// entries. Rows come out sorted by target.
    pub fn from_entries(
        n: usize,
        entries: &[(u32, u32, f64)],
        symmetry: Symmetry,
    ) -> Result<Self, GraphError> {
        check_vertex_count(n)?;
        for &(u, v, w) in entries {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::VertexOutOfRange {
                    vertex: u.max(v) as u64,
                    num_vertices: n,
                });
            }
            if !(w >= 0.0) {
                return Err(GraphError::NegativeWeight {
                    source: u,
                    target: v,
                    weight: w,
                });
            }
        }
        let undirected = match symmetry {
            Symmetry::Symmetric => {
                let mut edges: Vec<(u32, u32, f64)> = entries
                    .iter()
                    .map(|&(u, v, w)| (u.min(v), u.max(v), w))
                    .collect();
                merge_duplicates(&mut edges);
                edges
            }
            Symmetry::General => {
                let mut arcs = entries.to_vec();
                merge_duplicates(&mut arcs);
                let mut edges = Vec::with_capacity(arcs.len());
                for &(u, v, w) in &arcs {
                    let reverse = arcs
                        .binary_search_by(|&(a, b, _)| (a, b).cmp(&(v, u)))
                        .ok()
                        .map(|idx| arcs[idx].2);
                    match reverse {
                        // Self-loop, or the pair was already emitted from its
                        // smaller-source direction.
                        _ if u == v => edges.push((u, v, w)),
                        Some(rw) if u < v => edges.push((u, v, w.max(rw))),
                        Some(_) => {}
                        None => edges.push((u.min(v), u.max(v), w)),
                    }
                }
                edges.sort_unstable_by_key(|e| (e.0, e.1));
                edges
            }
        };

        let mut counts = vec![0usize; n];
        for &(u, v, _) in &undirected {
            counts[u as usize] += 1;
            if u != v {
                counts[v as usize] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for c in &counts {
            offsets.push(offsets.last().unwrap() + c);
        }
        let m = offsets[n];
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0u32; m];
        let mut weights = vec![W::from_f64(0.0); m];
        for &(u, v, w) in &undirected {
            let w = W::from_f64(w);
            let slot = &mut cursor[u as usize];
            targets[*slot] = v;
            weights[*slot] = w;
            *slot += 1;
            if u != v {
                let slot = &mut cursor[v as usize];
                targets[*slot] = u;
                weights[*slot] = w;
                *slot += 1;
            }
        }
        Ok(Self::from_parts_unchecked(offsets, targets, weights))
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of stored arcs (both directions of each edge, loops once).
    #[inline]
    pub fn num_arcs(&self) -> usize {
        self.edges.len()
    }

    /// Sum of all stored weights, i.e. `2m`.
    #[inline]
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn edges(&self) -> &[u32] {
        &self.edges
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn row(&self, v: usize) -> (&[u32], &[W]) {
        let r = self.offsets[v]..self.offsets[v + 1];
        (&self.edges[r.clone()], &self.weights[r])
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (u32, W)> + '_ {
        let (e, w) = self.row(v);
        e.iter().copied().zip(w.iter().copied())
    }
}

impl<W: Weight> fmt::Debug for CsrGraph<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CsrGraph")
            .field("num_vertices", &self.num_vertices())
            .field("num_arcs", &self.num_arcs())
            .field("total_weight", &self.total_weight)
            .finish()
    }
}

fn check_vertex_count(n: usize) -> Result<(), GraphError> {
    if n as u64 > u32::MAX as u64 + 1 {
        Err(GraphError::TooManyVertices(n))
    } else {
        Ok(())
    }
}

/// Sorts by `(source, target)` and sums entries with equal endpoints.
fn merge_duplicates(entries: &mut Vec<(u32, u32, f64)>) {
    entries.sort_unstable_by_key(|e| (e.0, e.1));
    entries.dedup_by(|next, kept| {
        if (next.0, next.1) == (kept.0, kept.1) {
            kept.2 += next.2;
            true
        } else {
            false
        }
    });
}

/// Weighted degree `K_i` of every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexWeights(Vec<f64>);

impl VertexWeights {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// `k[i]` is the sum of row `i`'s stored weights.
pub fn vertex_weights<W: Weight, R: Runtime + ?Sized>(g: &CsrGraph<W>, rt: &R) -> VertexWeights {
    let mut k = vec![0.0; g.num_vertices()];
    par_fill(rt, &mut k, DEFAULT_CHUNK, |i| {
        g.row(i).1.iter().map(|w| w.to_f64()).sum()
    });
    VertexWeights(k)
}
