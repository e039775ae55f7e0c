//! Partition quality: modularity, community sizes, and detection of
//! internally disconnected communities.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use crate::error::QualityError;
use crate::graph::{CsrGraph, Weight};
use crate::membership::count_into;
use crate::parallel::{par_fill, Runtime, DEFAULT_CHUNK};

/// Communities per work-list block in [`disconnected_communities`].
pub const AUDIT_CHUNK: usize = 1024;

/// Per-community internal weight `σ_c` (each intra arc as stored, so both
/// directions of an edge and loops once) and total weight `Σ_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityAggregates {
    pub sigma_in: Vec<f64>,
    pub sigma_tot: Vec<f64>,
}

fn check_membership<W: Weight>(g: &CsrGraph<W>, membership: &[u32]) -> Result<(), QualityError> {
    let n = g.num_vertices();
    if membership.len() != n {
        return Err(QualityError::MembershipLength {
            membership: membership.len(),
            vertices: n,
        });
    }
    if let Some((vertex, &community)) = membership
        .iter()
        .enumerate()
        .find(|(_, &c)| c as usize >= n)
    {
        return Err(QualityError::CommunityOutOfRange { vertex, community });
    }
    Ok(())
}

/// Per-community sums. The per-vertex partials are computed in parallel and
/// folded in vertex order, so the result does not depend on the worker count.
pub fn community_aggregates<W: Weight, R: Runtime + ?Sized>(
    g: &CsrGraph<W>,
    membership: &[u32],
    rt: &R,
) -> Result<CommunityAggregates, QualityError> {
    check_membership(g, membership)?;
    let n = g.num_vertices();
    let mut partial = vec![(0.0f64, 0.0f64); n];
    par_fill(rt, &mut partial, DEFAULT_CHUNK, |i| {
        let c = membership[i];
        g.neighbors(i).fold((0.0, 0.0), |(inside, total), (j, w)| {
            let w = w.to_f64();
            let inside = if membership[j as usize] == c {
                inside + w
            } else {
                inside
            };
            (inside, total + w)
        })
    });
    let len = membership.iter().max().map_or(0, |&m| m as usize + 1);
    let mut sigma_in = vec![0.0; len];
    let mut sigma_tot = vec![0.0; len];
    for (&c, &(inside, total)) in membership.iter().zip(&partial) {
        sigma_in[c as usize] += inside;
        sigma_tot[c as usize] += total;
    }
    Ok(CommunityAggregates {
        sigma_in,
        sigma_tot,
    })
}

/// `Q = Σ_c [σ_c / 2m − (Σ_c / 2m)²]`, summed in community-id order.
pub fn modularity<W: Weight, R: Runtime + ?Sized>(
    g: &CsrGraph<W>,
    membership: &[u32],
    rt: &R,
) -> Result<f64, QualityError> {
    let two_m = g.total_weight();
    if !(two_m > 0.0) {
        check_membership(g, membership)?;
        return Err(QualityError::ZeroTotalWeight);
    }
    let agg = community_aggregates(g, membership, rt)?;
    Ok(agg
        .sigma_in
        .iter()
        .zip(&agg.sigma_tot)
        .map(|(&inside, &total)| inside / two_m - (total / two_m) * (total / two_m))
        .sum())
}

/// Vertices per community id, `max id + 1` entries.
pub fn community_sizes<R: Runtime + ?Sized>(rt: &R, membership: &[u32]) -> Vec<usize> {
    let len = membership.iter().max().map_or(0, |&m| m as usize + 1);
    count_into(rt, membership, len)
}

/// Breadth-first traversal from `start`. A vertex is entered when
/// `enter(v)` holds and its `visited` flag was clear; `visit` runs once for
/// every entered vertex, `start` included.
pub fn bfs_visit_for_each<W, P, F>(
    visited: &[AtomicBool],
    g: &CsrGraph<W>,
    start: usize,
    mut enter: P,
    mut visit: F,
) where
    W: Weight,
    P: FnMut(usize) -> bool,
    F: FnMut(usize),
{
    visited[start].store(true, Ordering::Relaxed);
    visit(start);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &j in g.row(v).0 {
            let j = j as usize;
            if enter(j) && !visited[j].swap(true, Ordering::Relaxed) {
                visit(j);
                queue.push_back(j);
            }
        }
    }
}

/// Flags every community whose induced subgraph is disconnected.
pub fn disconnected_communities<W: Weight, R: Runtime + ?Sized>(
    g: &CsrGraph<W>,
    membership: &[u32],
    rt: &R,
) -> Result<Vec<bool>, QualityError> {
    disconnected_communities_chunked(g, membership, AUDIT_CHUNK, rt)
}

/// [`disconnected_communities`] with an explicit work-list block size.
///
/// Worker `t` of `T` owns the communities `c` with `(c / chunk) % T == t`.
/// Every worker scans all vertices in order and, at the first unprocessed
/// vertex of one of its communities, runs a BFS confined to that community.
/// Reaching fewer vertices than the community holds marks it disconnected.
/// Work-lists are disjoint and every vertex is in exactly one community, so
/// the shared `visited` flags are never contended.
pub fn disconnected_communities_chunked<W: Weight, R: Runtime + ?Sized>(
    g: &CsrGraph<W>,
    membership: &[u32],
    chunk: usize,
    rt: &R,
) -> Result<Vec<bool>, QualityError> {
    check_membership(g, membership)?;
    let chunk = chunk.max(1);
    let sizes: Vec<AtomicUsize> = community_sizes(rt, membership)
        .into_iter()
        .map(AtomicUsize::new)
        .collect();
    let disconnected: Vec<AtomicBool> = (0..sizes.len()).map(|_| AtomicBool::new(false)).collect();
    let visited: Vec<AtomicBool> = (0..g.num_vertices())
        .map(|_| AtomicBool::new(false))
        .collect();
    let workers = rt.workers();
    rt.broadcast(&|t| {
        for (i, &c) in membership.iter().enumerate() {
            let size = sizes[c as usize].load(Ordering::Relaxed);
            if size == 0 || (c as usize / chunk) % workers != t {
                continue;
            }
            let mut reached = 0usize;
            bfs_visit_for_each(&visited, g, i, |j| membership[j] == c, |_| reached += 1);
            if reached < size {
                disconnected[c as usize].store(true, Ordering::Relaxed);
            }
            sizes[c as usize].store(0, Ordering::Relaxed);
        }
    });
    Ok(disconnected
        .into_iter()
        .map(AtomicBool::into_inner)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    /// Vertices per community id.
    pub sizes: Vec<usize>,
    pub disconnected: Vec<bool>,
    pub num_communities: usize,
    pub num_disconnected: usize,
    pub modularity: f64,
    /// `num_disconnected / num_communities`, counting non-empty communities.
    pub disconnected_fraction: f64,
}

/// Modularity, sizes and disconnected flags of a partition.
pub fn audit<W: Weight, R: Runtime + ?Sized>(
    g: &CsrGraph<W>,
    membership: &[u32],
    rt: &R,
) -> Result<AuditReport, QualityError> {
    let modularity = modularity(g, membership, rt)?;
    let disconnected = disconnected_communities(g, membership, rt)?;
    let sizes = community_sizes(rt, membership);
    let num_communities = sizes.iter().filter(|&&s| s > 0).count();
    let num_disconnected = disconnected.iter().filter(|&&d| d).count();
    Ok(AuditReport {
        disconnected_fraction: if num_communities == 0 {
            0.0
        } else {
            num_disconnected as f64 / num_communities as f64
        },
        sizes,
        disconnected,
        num_communities,
        num_disconnected,
        modularity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Symmetry;
    use crate::parallel::Sequential;

    fn graph(n: usize, edges: &[(u32, u32)]) -> CsrGraph {
        let e: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
        CsrGraph::from_entries(n, &e, Symmetry::Symmetric).unwrap()
    }

    fn triangle() -> CsrGraph {
        graph(3, &[(0, 1), (1, 2), (0, 2)])
    }

    fn barbell() -> CsrGraph {
        graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    }

    #[test]
    fn modularity_examples() {
        let rt = Sequential;
        assert_eq!(modularity(&triangle(), &[0, 0, 0], &rt).unwrap(), 0.0);
        let q = modularity(&triangle(), &[0, 1, 2], &rt).unwrap();
        assert!((q + 1.0 / 3.0).abs() < 1e-12);
        let q = modularity(&barbell(), &[0, 0, 0, 1, 1, 1], &rt).unwrap();
        assert!((q - 5.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn modularity_of_edgeless_graph_is_an_error() {
        let g: CsrGraph = CsrGraph::empty(3);
        assert_eq!(
            modularity(&g, &[0, 1, 2], &Sequential),
            Err(QualityError::ZeroTotalWeight)
        );
    }

    #[test]
    fn membership_is_validated() {
        let rt = Sequential;
        assert!(matches!(
            modularity(&triangle(), &[0, 0], &rt),
            Err(QualityError::MembershipLength { .. })
        ));
        assert!(matches!(
            modularity(&triangle(), &[0, 0, 5], &rt),
            Err(QualityError::CommunityOutOfRange {
                vertex: 2,
                community: 5
            })
        ));
    }

    #[test]
    fn size_examples() {
        let rt = Sequential;
        assert_eq!(community_sizes(&rt, &[0, 0, 1]), vec![2, 1]);
        assert_eq!(community_sizes(&rt, &[]), Vec::<usize>::new());
        assert_eq!(community_sizes(&rt, &[2, 2, 2]), vec![0, 0, 3]);
    }

    #[test]
    fn disconnected_examples() {
        let rt = Sequential;
        let path = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(
            disconnected_communities(&path, &[0, 1, 0], &rt).unwrap(),
            vec![true, false]
        );
        assert_eq!(
            disconnected_communities(&barbell(), &[0; 6], &rt).unwrap(),
            vec![false]
        );
        assert_eq!(
            disconnected_communities(&barbell(), &[0, 0, 0, 1, 1, 1], &rt).unwrap(),
            vec![false, false]
        );
    }

    #[test]
    fn bfs_examples() {
        let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let visited: Vec<AtomicBool> = (0..4).map(|_| AtomicBool::new(false)).collect();
        let mut count = 0;
        bfs_visit_for_each(&visited, &star, 0, |_| true, |_| count += 1);
        assert_eq!(count, 4);

        let visited: Vec<AtomicBool> = (0..4).map(|_| AtomicBool::new(false)).collect();
        let mut count = 0;
        bfs_visit_for_each(&visited, &star, 0, |_| false, |_| count += 1);
        assert_eq!(count, 1);

        let path = graph(3, &[(0, 1), (1, 2)]);
        let visited: Vec<AtomicBool> = (0..3).map(|_| AtomicBool::new(false)).collect();
        let mut seen = Vec::new();
        bfs_visit_for_each(&visited, &path, 0, |j| j != 1, |v| seen.push(v));
        assert_eq!(seen, vec![0]);
        assert!(!visited[2].load(Ordering::Relaxed));
    }

    #[test]
    fn audit_summary() {
        let path = graph(3, &[(0, 1), (1, 2)]);
        let report = audit(&path, &[0, 1, 0], &Sequential).unwrap();
        assert_eq!(report.num_disconnected, 1);
        assert_eq!(report.num_communities, 2);
        assert_eq!(report.disconnected_fraction, 0.5);
        assert_eq!(report.sizes, vec![2, 1]);
    }
}
