#![allow(dead_code)]

use leiden_core::{CsrGraph, Runtime, Symmetry, Weight};
use std::time::Instant;

/// `std::thread::scope` runtime for exercising real concurrency.
pub struct Threads {
    n: usize,
    epoch: Instant,
}

impl Threads {
    pub fn new(n: usize) -> Self {
        Threads {
            n,
            epoch: Instant::now(),
        }
    }
}

impl Runtime for Threads {
    fn workers(&self) -> usize {
        self.n
    }

    fn broadcast(&self, job: &(dyn Fn(usize) + Sync)) {
        std::thread::scope(|s| {
            for w in 1..self.n {
                s.spawn(move || job(w));
            }
            job(0);
        });
    }

    fn now(&self) -> f64 {
        self.epoch.elapsed().as_secs_f64()
    }
}

pub fn unit_graph(n: usize, edges: &[(u32, u32)]) -> CsrGraph {
    let e: Vec<_> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
    CsrGraph::from_entries(n, &e, Symmetry::Symmetric).unwrap()
}

pub fn triangle() -> CsrGraph {
    unit_graph(3, &[(0, 1), (1, 2), (0, 2)])
}

pub fn path3() -> CsrGraph {
    unit_graph(3, &[(0, 1), (1, 2)])
}

/// Two triangles joined by the bridge 2-3.
pub fn barbell() -> CsrGraph {
    unit_graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
}

#[rustfmt::skip]
pub const KARATE: [(u32, u32); 78] = [
    (0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (0, 7), (0, 8), (0, 10), (0, 11),
    (0, 12), (0, 13), (0, 17), (0, 19), (0, 21), (0, 31), (1, 2), (1, 3), (1, 7), (1, 13),
    (1, 17), (1, 19), (1, 21), (1, 30), (2, 3), (2, 7), (2, 8), (2, 9), (2, 13), (2, 27),
    (2, 28), (2, 32), (3, 7), (3, 12), (3, 13), (4, 6), (4, 10), (5, 6), (5, 10), (5, 16),
    (6, 16), (8, 30), (8, 32), (8, 33), (9, 33), (13, 33), (14, 32), (14, 33), (15, 32), (15, 33),
    (18, 32), (18, 33), (19, 33), (20, 32), (20, 33), (22, 32), (22, 33), (23, 25), (23, 27), (23, 29),
    (23, 32), (23, 33), (24, 25), (24, 27), (24, 31), (25, 31), (26, 29), (26, 33), (27, 33), (28, 31),
    (28, 33), (29, 32), (29, 33), (30, 32), (30, 33), (31, 32), (31, 33), (32, 33),
];

pub fn karate() -> CsrGraph {
    unit_graph(34, &KARATE)
}

/// Small deterministic generator so test inputs do not depend on the
/// crate's own RNG.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Random undirected graph with `n` vertices and about `n * avg_degree / 2`
/// edges. `weighted` draws weights in [0.5, 3); `loops` allows self-loops.
pub fn random_graph(
    rng: &mut SplitMix,
    n: usize,
    avg_degree: f64,
    weighted: bool,
    loops: bool,
) -> CsrGraph<f64> {
    let edges = ((n as f64 * avg_degree) / 2.0).round() as usize;
    let mut entries = Vec::with_capacity(edges);
    for _ in 0..edges {
        let u = rng.below(n as u64) as u32;
        let v = rng.below(n as u64) as u32;
        if u == v && !loops {
            continue;
        }
        let w = if weighted {
            0.5 + 2.5 * rng.unit()
        } else {
            1.0
        };
        entries.push((u, v, w));
    }
    CsrGraph::from_entries(n, &entries, Symmetry::Symmetric).unwrap()
}

/// Planted partition: `blocks` equal groups, most edges inside a group.
pub fn planted(
    rng: &mut SplitMix,
    n: usize,
    blocks: usize,
    avg_degree: f64,
    mixing: f64,
) -> CsrGraph {
    let edges = ((n as f64 * avg_degree) / 2.0).round() as usize;
    let block_size = n.div_ceil(blocks);
    let mut entries = Vec::with_capacity(edges);
    for _ in 0..edges {
        let u = rng.below(n as u64) as usize;
        let v = if rng.unit() < mixing {
            rng.below(n as u64) as usize
        } else {
            let b = u / block_size;
            let lo = b * block_size;
            let hi = (lo + block_size).min(n);
            lo + rng.below((hi - lo) as u64) as usize
        };
        if u != v {
            entries.push((u as u32, v as u32, 1.0));
        }
    }
    CsrGraph::from_entries(n, &entries, Symmetry::Symmetric).unwrap()
}

/// Modularity straight from its pairwise definition over the dense
/// adjacency matrix: Q = (1/2m) Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j).
pub fn modularity_oracle<W: Weight>(g: &CsrGraph<W>, membership: &[u32]) -> f64 {
    let n = g.num_vertices();
    let mut a = vec![vec![0.0f64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        for (j, w) in g.neighbors(i) {
            row[j as usize] += w.to_f64();
        }
    }
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if membership[i] == membership[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Connected components of each community's induced subgraph, by
/// union-find over intra-community arcs.
pub fn components_per_community<W: Weight>(g: &CsrGraph<W>, membership: &[u32]) -> Vec<usize> {
    let n = g.num_vertices();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for (j, _) in g.neighbors(i) {
            let j = j as usize;
            if membership[i] == membership[j] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let len = membership.iter().max().map_or(0, |&m| m as usize + 1);
    let mut comps = vec![0usize; len];
    for i in 0..n {
        if find(&mut parent, i) == i {
            comps[membership[i] as usize] += 1;
        }
    }
    comps
}

/// Every set partition of `0..n` as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, max: u32, n: usize, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            prefix.push(c);
            rec(prefix, max.max(c), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    let mut prefix = vec![0];
    rec(&mut prefix, 0, n, &mut out);
    out
}

/// Whether `a` and `b` induce the same equivalence classes.
pub fn same_partition(a: &[u32], b: &[u32]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}
