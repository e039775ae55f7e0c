mod common;

use common::*;
use leiden_core::leiden::delta_modularity;
use leiden_core::quality::disconnected_communities_chunked;
use leiden_core::scan::exclusive_scan_par;
use leiden_core::*;
use proptest::prelude::*;

type Entries = (usize, Vec<(u32, u32, f64)>);

fn entries(max_n: usize, max_e: usize) -> impl Strategy<Value = Entries> {
    (1..max_n).prop_flat_map(move |n| {
        let e = (0..n as u32, 0..n as u32, 0.25f64..4.0);
        (Just(n), prop::collection::vec(e, 0..max_e))
    })
}

fn graph_and_labels(max_n: usize) -> impl Strategy<Value = (CsrGraph<f64>, Vec<u32>)> {
    entries(max_n, 3 * max_n).prop_flat_map(|(n, es)| {
        let g = CsrGraph::from_entries(n, &es, Symmetry::Symmetric).unwrap();
        (Just(g), prop::collection::vec(0..n as u32, n))
    })
}

fn arc_weight(g: &CsrGraph<f64>, u: u32, v: u32) -> f64 {
    g.neighbors(u as usize)
        .filter(|&(t, _)| t == v)
        .map(|(_, w)| w)
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn loaded_graphs_are_symmetric((n, es) in entries(25, 80)) {
        for sym in [Symmetry::General, Symmetry::Symmetric] {
            let g: CsrGraph<f64> = CsrGraph::from_entries(n, &es, sym).unwrap();
            let mut sum = 0.0;
            for u in 0..n as u32 {
                let row = g.row(u as usize).0;
                prop_assert!(row.windows(2).all(|w| w[0] < w[1]));
                for (v, w) in g.neighbors(u as usize) {
                    prop_assert_eq!(arc_weight(&g, v, u), w);
                    sum += w;
                }
            }
            prop_assert!((sum - g.total_weight()).abs() <= 1e-9 * sum.max(1.0));
        }
    }

    #[test]
    fn holey_round_trip((n, es) in entries(25, 80)) {
        let g: CsrGraph<f64> = CsrGraph::from_entries(n, &es, Symmetry::Symmetric).unwrap();
        let caps: Vec<usize> = (0..n).map(|v| g.degree(v) + (v % 3)).collect();
        let b = HoleyCsrBuilder::with_capacities(&Threads::new(3), &caps);
        for u in 0..n {
            for (v, w) in g.neighbors(u) {
                b.push(u, v, w);
            }
        }
        let h = b.compact(&Sequential);
        prop_assert_eq!(h.offsets(), g.offsets());
        prop_assert_eq!(h.edges(), g.edges());
        prop_assert_eq!(h.weights(), g.weights());
    }

    #[test]
    fn parallel_scan_matches_prefix_sums(values in prop::collection::vec(0usize..1000, 0..100_000)) {
        let serial = exclusive_scan(&values);
        let mut acc = 0;
        for (i, &v) in values.iter().enumerate() {
            prop_assert_eq!(serial[i], acc);
            acc += v;
        }
        prop_assert_eq!(serial.len(), values.len());
        prop_assert_eq!(exclusive_scan_par(&Threads::new(4), &values), serial);
    }

    #[test]
    fn vertex_weights_sum_to_total((g, _) in graph_and_labels(30)) {
        let k = vertex_weights(&g, &Threads::new(2));
        prop_assert!((k.sum() - g.total_weight()).abs() <= 1e-9 * g.total_weight().max(1.0));
    }

    #[test]
    fn renumbering_preserves_the_partition(ids in prop::collection::vec(0u32..50, 0..60)) {
        let (a, count) = renumber_communities(&ids);
        prop_assert!(same_partition(&a, &ids));
        prop_assert!(a.iter().all(|&c| (c as usize) < count));
        let (b, again) = renumber_communities(&a);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(count, again);
    }

    #[test]
    fn delta_modularity_matches_recomputation((g, labels) in graph_and_labels(16), pick in 0usize..16, target in 0u32..16) {
        let n = g.num_vertices();
        prop_assume!(g.total_weight() > 0.0);
        let i = pick % n;
        let c = labels[(target as usize) % n];
        let d = labels[i];
        prop_assume!(c != d);
        let k: Vec<f64> = vertex_weights(&g, &Sequential).into_vec();
        let m = g.total_weight() / 2.0;
        let (mut to_c, mut to_d) = (0.0, 0.0);
        for (j, w) in g.neighbors(i) {
            if j as usize == i { continue; }
            if labels[j as usize] == c { to_c += w; }
            if labels[j as usize] == d { to_d += w; }
        }
        let sigma = |x: u32| (0..n).filter(|&v| labels[v] == x).map(|v| k[v]).sum::<f64>();
        let dq = delta_modularity(to_c, to_d, k[i], sigma(c), sigma(d), m);
        let mut moved = labels.clone();
        moved[i] = c;
        let exact = modularity_oracle(&g, &moved) - modularity_oracle(&g, &labels);
        prop_assert!((dq - exact).abs() < 1e-9, "{} vs {}", dq, exact);
    }

    #[test]
    fn modularity_matches_oracle_and_ignores_labels((g, labels) in graph_and_labels(30)) {
        prop_assume!(g.total_weight() > 0.0);
        let q = modularity(&g, &labels, &Threads::new(3)).unwrap();
        prop_assert!((q - modularity_oracle(&g, &labels)).abs() < 1e-9);
        let n = labels.len() as u32;
        let permuted: Vec<u32> = labels.iter().map(|&c| n - 1 - c).collect();
        prop_assert!((modularity(&g, &permuted, &Sequential).unwrap() - q).abs() < 1e-9);
        let (renumbered, _) = renumber_communities(&labels);
        prop_assert!((modularity(&g, &renumbered, &Sequential).unwrap() - q).abs() < 1e-9);
        prop_assert!((-0.5 - 1e-12..=1.0 + 1e-12).contains(&q));
    }

    #[test]
    fn disconnected_flags_match_union_find((g, labels) in graph_and_labels(40), chunk in 1usize..6, threads in 1usize..5) {
        let flags = disconnected_communities_chunked(&g, &labels, chunk, &Threads::new(threads)).unwrap();
        let parts = components_per_community(&g, &labels);
        prop_assert_eq!(flags.len(), parts.len());
        for (c, (&f, &p)) in flags.iter().zip(&parts).enumerate() {
            prop_assert_eq!(f, p > 1, "community {}", c);
        }
    }

    #[test]
    fn audit_is_thread_count_invariant((g, labels) in graph_and_labels(40)) {
        prop_assume!(g.total_weight() > 0.0);
        let one = audit(&g, &labels, &Sequential).unwrap();
        for t in [2, 4] {
            let many = audit(&g, &labels, &Threads::new(t)).unwrap();
            prop_assert_eq!(one.modularity.to_bits(), many.modularity.to_bits());
            prop_assert_eq!(&one.disconnected, &many.disconnected);
            prop_assert_eq!(&one.sizes, &many.sizes);
        }
    }

    #[test]
    fn leiden_output_is_connected_and_conserving((n, es) in entries(40, 120)) {
        let g: CsrGraph<f64> = CsrGraph::from_entries(n, &es, Symmetry::General).unwrap();
        for c in [LeidenConfig::default(), LeidenConfig { refine_strategy: RefineStrategy::Random, label_strategy: LabelStrategy::RefineBased, ..LeidenConfig::default() }] {
            let r = leiden(&g, &c, &Sequential).unwrap();
            prop_assert_eq!(r.membership.len(), n);
            prop_assert!(components_per_community(&g, &r.membership).iter().all(|&p| p <= 1));
            if g.total_weight() > 0.0 {
                let q = modularity(&g, &r.membership, &Sequential).unwrap();
                prop_assert!(q >= modularity(&g, Membership::singletons(n).as_slice(), &Sequential).unwrap() - 1e-9);
            }
        }
    }
}
