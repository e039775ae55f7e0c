//! Seeded graph generators and small fixtures.

use leiden_core::{CsrGraph, Symmetry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Zachary's karate club, 0-based.
#[rustfmt::skip]
pub const KARATE_EDGES: [(u32, u32); 78] = [
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 10), (0, 11),
    (0, 12), (0, 13), (0, 17), (0, 19), (0, 21), (0, 31), (1, 2), (1, 3), (1, 7), (1, 13),
    (1, 17), (1, 19), (1, 21), (1, 30), (2, 3), (2, 7), (2, 8), (2, 9), (2, 13), (2, 27),
    (2, 28), (2, 32), (3, 7), (3, 12), (3, 13), (4, 6), (4, 10), (5, 6), (5, 10), (5, 16),
    (6, 16), (8, 30), (8, 32), (8, 33), (9, 33), (13, 33), (14, 32), (14, 33), (15, 32),
    (15, 33), (18, 32), (18, 33), (19, 33), (20, 32), (20, 33), (22, 32), (22, 33), (23, 25),
    (23, 27), (23, 29), (23, 32), (23, 33), (24, 25), (24, 27), (24, 31), (25, 31), (26, 29),
    (26, 33), (27, 33), (28, 31), (28, 33), (29, 32), (29, 33), (30, 32), (30, 33), (31, 32),
    (31, 33), (32, 33),
];

fn unit_graph(n: usize, edges: &[(u32, u32)]) -> CsrGraph {
    let entries: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
    CsrGraph::from_entries(n, &entries, Symmetry::Symmetric).expect("fixture is valid")
}

pub fn karate() -> CsrGraph {
    unit_graph(34, &KARATE_EDGES)
}

pub fn triangle() -> CsrGraph {
    unit_graph(3, &[(0, 1), (1, 2), (0, 2)])
}

/// Two unit triangles joined by the bridge 2-3.
pub fn barbell() -> CsrGraph {
    unit_graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
}

/// Uniform random multigraph without self-loops: `n * avg_degree / 2`
/// edges with endpoints drawn uniformly. Weights are drawn from
/// `[0.5, 2)` when `weighted` is set.
pub fn random_graph(seed: u64, n: usize, avg_degree: f64, weighted: bool) -> CsrGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = if n < 2 {
        0
    } else {
        (n as f64 * avg_degree / 2.0).round() as usize
    };
    let entries: Vec<_> = (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n as u32);
            let mut v = rng.gen_range(0..n as u32 - 1);
            if v >= u {
                v += 1;
            }
            let w = if weighted {
                rng.gen_range(0.5..2.0)
            } else {
                1.0
            };
            (u, v, w)
        })
        .collect();
    CsrGraph::from_entries(n, &entries, Symmetry::Symmetric).expect("generated ids are in range")
}

/// Planted partition: `blocks` equal groups; each edge stays inside the
/// group of its first endpoint with probability `1 - mixing`.
pub fn planted_partition(
    seed: u64,
    n: usize,
    blocks: usize,
    avg_degree: f64,
    mixing: f64,
) -> CsrGraph {
    assert!(
        blocks >= 1 && n >= 2 * blocks,
        "need at least two vertices per block"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = n / blocks;
    let m = (n as f64 * avg_degree / 2.0).round() as usize;
    let entries: Vec<_> = (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n as u32);
            let v = loop {
                let v = if rng.gen_bool(mixing) {
                    rng.gen_range(0..n as u32)
                } else {
                    let b = ((u as usize / size).min(blocks - 1) * size) as u32;
                    let end = if (u as usize / size) >= blocks - 1 {
                        n as u32
                    } else {
                        b + size as u32
                    };
                    rng.gen_range(b..end)
                };
                if v != u {
                    break v;
                }
            };
            (u, v, 1.0)
        })
        .collect();
    CsrGraph::from_entries(n, &entries, Symmetry::Symmetric).expect("generated ids are in range")
}
