mod common;

use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};

use common::*;
use leiden_core::atomic::AtomicF64;
use leiden_core::leiden::{
    aggregate, claim_isolated, community_total_degree, local_move, refine, scan_bounded,
    scan_communities, PassState,
};
use leiden_core::membership::count_community_vertices;
use leiden_core::{
    delta_modularity, CsrGraph, LeidenConfig, Sequential, Symmetry, ThreadAccumulator,
};

fn atomic(ids: &[u32]) -> Vec<AtomicU32> {
    ids.iter().map(|&c| AtomicU32::new(c)).collect()
}

fn plain(ids: &[AtomicU32]) -> Vec<u32> {
    ids.iter().map(|c| c.load(Ordering::Relaxed)).collect()
}

fn prepared(g: &CsrGraph, membership: &[u32]) -> PassState {
    let mut state = PassState::new(1, g.num_vertices(), 1);
    state.prepare(g, membership, &Sequential);
    state
}

fn sorted(acc: &ThreadAccumulator) -> Vec<(u32, f64)> {
    let mut v: Vec<_> = acc.iter().collect();
    v.sort_by_key(|e| e.0);
    v
}

#[test]
fn delta_modularity_examples() {
    // Q-difference oracle: triangle singletons have Q = -1/3 ... moving 0
    // into {1, 2} gives Q({0}, {1,2}) = -2/9 + 2/9 = 0 - (-2/9).
    let before = modularity_oracle(&triangle(), &[0, 1, 1]);
    let after = modularity_oracle(&triangle(), &[1, 1, 1]);
    let dq = delta_modularity(2.0, 0.0, 2.0, 4.0, 2.0, 3.0);
    assert!((dq - 2.0 / 9.0).abs() < 1e-12);
    assert!((dq - (after - before)).abs() < 1e-12);

    let edge = unit_graph(2, &[(0, 1)]);
    let oracle = modularity_oracle(&edge, &[1, 1]) - modularity_oracle(&edge, &[0, 1]);
    assert_eq!(delta_modularity(1.0, 0.0, 1.0, 1.0, 1.0, 1.0), 0.5);
    assert!((oracle - 0.5).abs() < 1e-12);

    assert_eq!(delta_modularity(0.0, 0.0, 0.0, 5.0, 2.0, 7.0), 0.0);
}

#[test]
fn scan_communities_examples() {
    let g = triangle();
    let mut acc = ThreadAccumulator::new(3);
    scan_communities(&mut acc, &g, &[0u32, 1, 1][..], 0, false);
    assert_eq!(sorted(&acc), vec![(1, 2.0)]);

    let looped: CsrGraph = CsrGraph::from_entries(1, &[(0, 0, 3.0)], Symmetry::General).unwrap();
    let mut acc = ThreadAccumulator::new(1);
    scan_communities(&mut acc, &looped, &[0u32][..], 0, false);
    assert!(acc.is_empty());
    scan_communities(&mut acc, &looped, &[0u32][..], 0, true);
    assert_eq!(sorted(&acc), vec![(0, 3.0)]);
}

#[test]
fn scan_bounded_examples() {
    let g = triangle();
    let mut acc = ThreadAccumulator::new(3);
    scan_bounded(&mut acc, &g, &[0u32, 0, 1][..], &[0u32, 1, 2][..], 0);
    assert_eq!(sorted(&acc), vec![(1, 1.0)]);

    let mut bounded = ThreadAccumulator::new(3);
    let mut free = ThreadAccumulator::new(3);
    for v in 0..3 {
        bounded.clear();
        free.clear();
        scan_bounded(&mut bounded, &g, &[4u32, 4, 4][..], &[0u32, 2, 2][..], v);
        scan_communities(&mut free, &g, &[0u32, 2, 2][..], v, false);
        assert_eq!(sorted(&bounded), sorted(&free));
    }

    acc.clear();
    scan_bounded(&mut acc, &g, &[0u32, 1, 2][..], &[0u32, 1, 2][..], 0);
    assert!(acc.is_empty());
}

#[test]
fn claim_isolated_examples() {
    let cell = AtomicF64::new(2.0);
    assert!(claim_isolated(&cell, 2.0));
    assert_eq!(cell.load(Ordering::Relaxed), 0.0);

    let cell = AtomicF64::new(3.5);
    assert!(!claim_isolated(&cell, 2.0));
    assert_eq!(cell.load(Ordering::Relaxed), 3.5);

    for _ in 0..50 {
        let cell = AtomicF64::new(2.0);
        let wins = AtomicUsize::new(0);
        std::thread::scope(|s| {
            for _ in 0..8 {
                s.spawn(|| {
                    if claim_isolated(&cell, 2.0) {
                        wins.fetch_add(1, Ordering::Relaxed);
                    }
                });
            }
        });
        assert_eq!(wins.into_inner(), 1);
    }
}

#[test]
fn local_move_merges_a_triangle() {
    let g = triangle();
    let state = prepared(&g, &[0, 1, 2]);
    let membership = atomic(&[0, 1, 2]);
    let iterations = local_move(
        &g,
        &state,
        &membership,
        1e-6,
        &LeidenConfig::default(),
        &Sequential,
    );
    let c = plain(&membership);
    assert!(c.iter().all(|&x| x == c[0]), "{c:?}");
    assert_eq!(iterations, 2);
    assert_eq!(state.sigma(c[0]), 6.0);
}

#[test]
fn local_move_at_optimum_does_nothing() {
    let g = unit_graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
    let start = [0, 0, 0, 3, 3, 3];
    let state = prepared(&g, &start);
    let membership = atomic(&start);
    let iterations = local_move(
        &g,
        &state,
        &membership,
        1e-6,
        &LeidenConfig::default(),
        &Sequential,
    );
    assert_eq!(iterations, 1);
    assert_eq!(plain(&membership), start);
}

#[test]
fn local_move_single_edge() {
    let g = unit_graph(2, &[(0, 1)]);
    let state = prepared(&g, &[0, 1]);
    let membership = atomic(&[0, 1]);
    // Tolerance just under the single accepted gain of 0.5: the first
    // iteration does not converge, the second sees no gain.
    let iterations = local_move(
        &g,
        &state,
        &membership,
        0.4999,
        &LeidenConfig::default(),
        &Sequential,
    );
    let c = plain(&membership);
    assert_eq!(c[0], c[1]);
    assert_eq!(iterations, 2);
    let state = prepared(&g, &[0, 1]);
    let membership = atomic(&[0, 1]);
    // With the tolerance at exactly the gain, one iteration suffices.
    assert_eq!(
        local_move(
            &g,
            &state,
            &membership,
            0.5,
            &LeidenConfig::default(),
            &Sequential
        ),
        1
    );
}

#[test]
fn refine_joins_an_edge() {
    let g = unit_graph(2, &[(0, 1)]);
    let state = prepared(&g, &[0, 1]);
    let membership = atomic(&[0, 1]);
    let moved = refine(
        &g,
        &[0u32, 0][..],
        &membership,
        &state,
        &LeidenConfig::default(),
        &Sequential,
    );
    assert_eq!(moved, 1);
    let c = plain(&membership);
    assert_eq!(c[0], c[1]);
    assert_eq!(state.sigma(c[0]), 2.0);
}

#[test]
fn refine_without_bound_edges_keeps_singletons() {
    let g = unit_graph(3, &[(0, 2), (1, 2)]);
    let state = prepared(&g, &[0, 1, 2]);
    let membership = atomic(&[0, 1, 2]);
    let moved = refine(
        &g,
        &[0u32, 0, 1][..],
        &membership,
        &state,
        &LeidenConfig::default(),
        &Sequential,
    );
    assert_eq!(moved, 0);
    assert_eq!(plain(&membership), vec![0, 1, 2]);
}

#[test]
fn refine_walks_a_path() {
    let g = path3();
    let state = prepared(&g, &[0, 1, 2]);
    let membership = atomic(&[0, 1, 2]);
    refine(
        &g,
        &[0u32, 0, 0][..],
        &membership,
        &state,
        &LeidenConfig::default(),
        &Sequential,
    );
    let c = plain(&membership);
    assert_eq!(c, vec![1, 1, 1]);
}

#[test]
fn refine_random_stays_inside_bounds() {
    let cfg = LeidenConfig {
        refine_strategy: leiden_core::RefineStrategy::Random,
        ..LeidenConfig::default()
    };
    let g = karate();
    let bounds: Vec<u32> = (0..34).map(|v| (v % 3) as u32).collect();
    let state = prepared(&g, &(0..34).collect::<Vec<_>>());
    let membership = atomic(&(0..34).collect::<Vec<_>>());
    refine(&g, &bounds[..], &membership, &state, &cfg, &Sequential);
    let c = plain(&membership);
    for i in 0..34 {
        for j in 0..34 {
            if c[i] == c[j] {
                assert_eq!(bounds[i], bounds[j]);
            }
        }
    }
}

#[test]
fn aggregate_examples() {
    let g = triangle();
    let sg = aggregate(&g, &[0, 1, 1], &Sequential);
    let mut arcs: Vec<(u32, u32, f64)> = (0..sg.num_vertices())
        .flat_map(|c| sg.neighbors(c).map(move |(d, w)| (c as u32, d, w)))
        .collect();
    arcs.sort_by_key(|a| (a.0, a.1));
    assert_eq!(arcs, vec![(0, 1, 2.0), (1, 0, 2.0), (1, 1, 2.0)]);
    assert_eq!(sg.total_weight(), 6.0);

    let one = aggregate(&karate(), &[0; 34], &Sequential);
    assert_eq!(one.num_vertices(), 1);
    assert_eq!(one.num_arcs(), 1);
    assert_eq!(one.weights()[0], karate().total_weight());

    let k = karate();
    let ids: Vec<u32> = (0..34).collect();
    let same = aggregate(&k, &ids, &Sequential);
    assert_eq!(same.offsets(), k.offsets());
    for v in 0..34 {
        let mut a: Vec<_> = k.neighbors(v).map(|(j, w)| (j, w as f64)).collect();
        let mut b: Vec<_> = same.neighbors(v).collect();
        a.sort_by_key(|e| e.0);
        b.sort_by_key(|e| e.0);
        assert_eq!(a, b);
    }
}

#[test]
fn aggregate_on_threads_matches_sequential() {
    let mut rng = SplitMix(5);
    let g = planted(&mut rng, 3000, 30, 8.0, 0.1);
    let ids: Vec<u32> = (0..3000u32).map(|v| v / 100).collect();
    let a = aggregate(&g, &ids, &Sequential);
    let b = aggregate(&g, &ids, &Threads::new(4));
    assert_eq!(a.offsets(), b.offsets());
    for v in 0..a.num_vertices() {
        let mut x: Vec<_> = a.neighbors(v).collect();
        let mut y: Vec<_> = b.neighbors(v).collect();
        x.sort_by_key(|e| e.0);
        y.sort_by_key(|e| e.0);
        assert_eq!(x.len(), y.len());
        for (p, q) in x.iter().zip(&y) {
            assert_eq!(p.0, q.0);
            assert!((p.1 - q.1).abs() < 1e-9);
        }
    }
}

#[test]
fn community_counting_examples() {
    let g = triangle();
    assert_eq!(
        count_community_vertices(&Sequential, &[0, 0, 1]),
        vec![2, 1]
    );
    assert_eq!(
        community_total_degree(&g, &[0, 1, 1], &Sequential),
        vec![2, 4]
    );
    assert_eq!(
        community_total_degree(&g, &[0, 1, 2], &Sequential),
        vec![2, 2, 2]
    );
    assert_eq!(community_total_degree(&g, &[0, 0, 0], &Sequential), vec![6]);
}

#[test]
fn sigma_stays_consistent_through_moves() {
    let mut rng = SplitMix(11);
    let g = planted(&mut rng, 400, 8, 10.0, 0.2);
    let ids: Vec<u32> = (0..400).collect();
    let rt = Threads::new(4);
    let cfg = LeidenConfig {
        chunk_size: 16,
        ..LeidenConfig::default()
    };
    let mut state = PassState::new(4, 400, 1);
    state.prepare(&g, &ids, &rt);
    let membership = atomic(&ids);
    local_move(&g, &state, &membership, 1e-6, &cfg, &rt);
    let c = plain(&membership);
    let mut expect = vec![0.0; 400];
    for (i, &k) in state.k().iter().enumerate() {
        expect[c[i] as usize] += k;
    }
    for (s, e) in state.sigma_snapshot().iter().zip(&expect) {
        assert!((s - e).abs() <= 1e-9 * g.total_weight());
    }
}
