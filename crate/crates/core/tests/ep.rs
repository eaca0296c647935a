mod common;

use common::*;
use immersion_ep::decomposition::{exact_tcw_small, validate_partition, ExactConfig};
use immersion_ep::ep::{
    edge_cover_factor, ep_edge_certify, ep_vertex_report, omega, omega_edges, partition_width_bound, sigma,
    tc_to_tp_pipeline, wall_packing_witness, CertifyOptions,
};
use immersion_ep::generators::{
    complete_graph, cycle_graph, path_graph, plus_graph, random_connected_multigraph, star_graph, theta, wall,
};
use immersion_ep::immersion::{
    find_expansion, pairwise_disjoint, search, validate_model, Budget, Disjointness, HostGraph, Mode, Pattern,
    SearchOptions, SearchStatus,
};
use immersion_ep::Multigraph;
use proptest::prelude::*;

fn connected_host() -> impl Strategy<Value = Multigraph> {
    (2usize..=7, 1usize..=10, 1u32..=3, any::<u64>()).prop_filter_map("capacity", |(n, m, mm, seed)| {
        random_connected_multigraph(n, m.max(n - 1), mm, seed).ok()
    })
}

fn disjoint_union(a: &Multigraph, b: &Multigraph) -> Multigraph {
    let mut g = a.clone();
    g.disjoint_union_with(b);
    g
}

#[test]
fn gadget_pattern_sizes() {
    for (_, h) in patterns() {
        let (hp, _) = plus_graph(&h);
        assert_eq!(hp.edge_count(), h.edge_count() + 4 * h.vertex_count());
        assert_eq!(hp.vertex_count(), 3 * h.vertex_count());
    }
}

#[test]
fn omega_sigma_consistency() {
    let mut hs: Vec<Multigraph> = patterns().into_iter().map(|(_, h)| h).collect();
    hs.push(complete_graph(4));
    for h in &hs {
        let (hp, _) = plus_graph(h);
        for w in 0..=12u64 {
            let r = partition_width_bound(w);
            assert!(omega(&hp, r) <= edge_cover_factor(h, w), "w = {w}");
        }
    }
    // With r rounded up instead, odd (w+1) overshoots: (s+1)(3s+5)/8 > (3s²+2s)/8.
    let hp = plus_graph(&theta(2)).0;
    let s = 9u64;
    assert!(omega(&hp, s.div_ceil(2)) > sigma(2) * hp.edge_count() as u64);
}

#[test]
fn pipeline_on_cycles_and_thetas() {
    for g in [cycle_graph(5).unwrap(), theta(3), path_graph(4), complete_graph(4)] {
        let (w, d) = exact_tcw_small(&g, ExactConfig::default()).unwrap();
        let out = tc_to_tp_pipeline(&g, &d).unwrap();
        assert_eq!(out.input_width, w);
        assert!(out.within_bound());
        assert_eq!(validate_partition(&out.graph, &out.partition).unwrap().width, out.partition_width);
    }
}

#[test]
fn original_pattern_vertices_land_on_original_host_vertices() {
    for (g, h) in [
        (path_graph(2), theta(2)),
        (cycle_graph(3).unwrap(), theta(2)),
        (theta(2), path_graph(2)),
        (path_graph(3), path_graph(2)),
    ] {
        let (star, sm) = star_graph(&g);
        let (hp, pm) = plus_graph(&h);
        let host = HostGraph::new(&star);
        let pat = Pattern::new(&hp).unwrap();
        let opts = SearchOptions {
            mode: Mode::Immersion,
            budget: Budget::nodes(50_000_000),
            canonical_instances: false,
            break_symmetry: false,
        };
        let mut models = 0;
        let mut ok = true;
        let (status, _) = search(&host, &host.all_edges(), &host.all_vertices(), &pat, opts, &mut |m| {
            models += 1;
            ok &= pm.original.iter().all(|x| sm.original.contains(&m.phi[x]));
            false
        });
        assert_eq!(status, SearchStatus::Completed);
        assert!(ok, "{} models", models);
    }
}

#[test]
fn theta2_on_two_cycles() {
    let g = disjoint_union(&cycle_graph(6).unwrap(), &cycle_graph(4).unwrap());
    let h = theta(2);
    let r = ep_edge_certify(&g, &h, &CertifyOptions { oracles: true, ..CertifyOptions::default() }).unwrap();
    assert!(r.verified(), "{:?}", r.failures().collect::<Vec<_>>());
    assert_eq!(naive_edge_packing(&g, &h), 2);
    assert_eq!(naive_edge_cover(&g, &h), 2);
    assert_eq!(r.oracle_packing, Some(2));
    assert_eq!(r.oracle_cover, Some(2));
    assert!(r.packing.len() >= 2);
}

#[test]
fn theta2_on_k4() {
    let g = complete_graph(4);
    let h = theta(2);
    let r = ep_edge_certify(&g, &h, &CertifyOptions { oracles: true, ..CertifyOptions::default() }).unwrap();
    assert!(r.verified());
    assert_eq!(r.oracle_packing, Some(naive_edge_packing(&g, &h)));
    assert_eq!(r.oracle_cover, Some(naive_edge_cover(&g, &h)));
    let v = ep_vertex_report(&g, &h, Budget::UNLIMITED, "k4").unwrap();
    assert!(v.verified());
    assert_eq!(v.oracle_packing, Some(naive_vertex_packing(&g, &h)));
    assert_eq!(v.oracle_cover, Some(naive_vertex_cover(&g, &h)));
    assert_eq!(v.treewidth, Some(3));
}

#[test]
fn wall_packing_witness_sizes() {
    let tri = cycle_graph(3).unwrap();
    let single = wall_packing_witness(&tri, 3, 0, Mode::Immersion, Budget::UNLIMITED).unwrap();
    assert_eq!(single.models.len(), 1);
    assert!(validate_model(&single.tiling.big.graph, &tri, &single.models[0]).unwrap().is_valid());
    // The one tile is a copy of wall(3), where plain search also succeeds.
    assert_eq!(single.tiling.small.graph, wall(3).unwrap().graph);
    assert!(find_expansion(&wall(3).unwrap().graph, &tri, Mode::Immersion, Budget::UNLIMITED).unwrap().is_some());
    for k in 1..=3 {
        let wp = wall_packing_witness(&tri, 3, k, Mode::Immersion, Budget::UNLIMITED).unwrap();
        assert!(wp.models.len() as u32 > k);
        for m in &wp.models {
            assert!(validate_model(&wp.tiling.big.graph, &tri, m).unwrap().is_valid());
        }
        assert!(pairwise_disjoint(&wp.models, Disjointness::Edge));
    }
}

#[test]
fn gap_arithmetic_examples() {
    assert_eq!(omega_edges(2, 1), 4);
    assert_eq!(omega(&theta(2), 3), 30);
    assert_eq!(sigma(0), 1);
    assert_eq!(sigma(3), (3 * 256 + 2 * 16u64).div_ceil(8));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pipeline_keeps_its_promises(g in connected_host()) {
        let (_, d) = exact_tcw_small(&g, ExactConfig::default()).unwrap();
        let out = tc_to_tp_pipeline(&g, &d).unwrap();
        prop_assert!(out.within_bound());
        prop_assert_eq!(&out.adhesions_before, &out.adhesions_after);
        prop_assert_eq!(validate_partition(&out.graph, &out.partition).unwrap().width, out.partition_width);
        let image: std::collections::BTreeSet<_> = out.maps.to_star(&out.graph.edge_refs().collect::<Vec<_>>()).unwrap().into_iter().collect();
        prop_assert_eq!(image, out.star.edge_refs().collect());
    }

    #[test]
    fn certified_runs_are_sound(g in connected_host(), pi in 0usize..4) {
        let (_, h) = &patterns()[pi];
        let r = ep_edge_certify(&g, h, &CertifyOptions::default()).unwrap();
        prop_assert_eq!(r.exit_code(), 0, "{:?}", r.failures().collect::<Vec<_>>());
        for name in ["cover-valid", "packing-valid", "cover-within-sigma", "pullback-not-larger", "partition-width-bound"] {
            prop_assert_eq!(r.check(name).map(|c| c.outcome), Some(immersion_ep::ep::CheckOutcome::Pass), "{}", name);
        }
        prop_assert!(pairwise_disjoint(&r.packing, Disjointness::Edge));
        if let Some(w) = r.tree_cut_width {
            prop_assert!(r.cover.len() as u64 <= edge_cover_factor(h, w as u64) * r.packing.len() as u64);
        }
    }
}
