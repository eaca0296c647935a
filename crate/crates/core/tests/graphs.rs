use std::collections::BTreeSet;

use immersion_ep::generators::{
    disjoint_subwalls, grid, is_subgraph_embedding, plus_graph, random_connected_multigraph, random_multigraph,
    star_graph, wall, wall_plus,
};
use immersion_ep::io::{parse_graph, serialize_graph, GraphJson};
use immersion_ep::{EdgeRef, Error, Multigraph, VertexId};
use proptest::prelude::*;

fn any_graph() -> impl Strategy<Value = Multigraph> {
    (2usize..=7, 0usize..=14, 1u32..=3, any::<u64>())
        .prop_filter_map("capacity", |(n, m, mm, seed)| random_multigraph(n, m, mm, seed).ok())
}

/// Two incident instances, picked by index among all incident pairs.
fn incident_pair(g: &Multigraph, pick: usize) -> Option<(EdgeRef, EdgeRef)> {
    let edges: Vec<EdgeRef> = g.edge_refs().collect();
    let mut pairs = Vec::new();
    for (i, a) in edges.iter().enumerate() {
        for b in &edges[i + 1..] {
            let shared = [a.u, a.v].iter().filter(|x| b.has_endpoint(**x)).count();
            if shared == 1 || (a.u == b.u && a.v == b.v) {
                pairs.push((*a, *b));
            }
        }
    }
    (!pairs.is_empty()).then(|| pairs[pick % pairs.len()])
}

#[test]
fn serialize_round_trip_sweep() {
    for seed in 0..100u64 {
        let n = 2 + (seed % 8) as usize;
        let cap = 3 * n * (n - 1) / 2;
        let g = random_multigraph(n, (seed as usize * 7) % (cap + 1), 3, seed).unwrap();
        let back = parse_graph(&serialize_graph(&g)).unwrap();
        assert_eq!(back, g, "seed {seed}");
    }
}

#[test]
fn serialized_edges_are_sorted() {
    let g = Multigraph::from_edges(4, &[(3, 4, 1), (1, 3, 2), (2, 1, 1)]).unwrap();
    assert_eq!(serialize_graph(&g), "p mgraph 4 3\ne 1 2 1\ne 1 3 2\ne 3 4 1\n");
}

#[test]
fn generator_capacity_and_determinism() {
    assert!(matches!(random_multigraph(4, 13, 2, 1), Err(Error::Infeasible(_))));
    assert_eq!(random_multigraph(5, 0, 1, 9).unwrap().edge_count(), 0);
    assert_eq!(random_multigraph(6, 10, 2, 4).unwrap(), random_multigraph(6, 10, 2, 4).unwrap());
}

#[test]
fn walls_grids_and_enriched_walls() {
    for k in 2..=6 {
        let w = wall(k).unwrap();
        assert!(w.graph.is_simple() && w.graph.max_mdeg() <= 3, "wall({k})");
        let wp = wall_plus(k).unwrap();
        assert_eq!(wp.graph.max_mult(), 2);
        let (g, _) = grid(k, k + 1).unwrap();
        assert!(g.is_simple());
    }
}

#[test]
fn subwalls_are_disjoint_copies() {
    for (h, k) in [(2, 3), (2, 1), (3, 2)] {
        let t = disjoint_subwalls(h, k).unwrap();
        assert!(t.tiles.len() as u32 > k);
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        for emb in &t.tiles {
            assert!(is_subgraph_embedding(&t.small.graph, &t.big.graph, emb));
            for v in emb.values() {
                assert!(seen.insert(*v), "tiles overlap at {v}");
            }
        }
    }
    assert_eq!(disjoint_subwalls(2, 3).unwrap().tiles.len(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn text_and_json_round_trip(g in any_graph()) {
        prop_assert_eq!(&parse_graph(&serialize_graph(&g)).unwrap(), &g);
        let j = serde_json::to_string(&GraphJson::from_graph(&g)).unwrap();
        prop_assert_eq!(&serde_json::from_str::<GraphJson>(&j).unwrap().to_graph().unwrap(), &g);
    }

    #[test]
    fn lift_changes_counts_and_is_pure(g in any_graph(), pick in any::<usize>()) {
        if let Some((a, b)) = incident_pair(&g, pick) {
            let before = g.clone();
            let shared = if a.u == b.u && a.v == b.v { None } else { [a.u, a.v].into_iter().find(|x| b.has_endpoint(*x)) };
            let l = g.lift(a, b).unwrap();
            prop_assert_eq!(&g, &before);
            let drop = match shared {
                None => 2,
                Some(y) if a.other(y) == b.other(y) => 2,
                Some(_) => 1,
            };
            prop_assert_eq!(l.edge_count() + drop, g.edge_count());
            prop_assert_eq!(l.vertex_count(), g.vertex_count());
        }
    }

    #[test]
    fn dissolve_and_subdivide_counts(g in any_graph(), pick in any::<usize>()) {
        let edges: Vec<EdgeRef> = g.edge_refs().collect();
        if !edges.is_empty() {
            let e = edges[pick % edges.len()];
            let (s, v) = g.subdivide(e).unwrap();
            prop_assert_eq!(s.vertex_count(), g.vertex_count() + 1);
            prop_assert_eq!(s.edge_count(), g.edge_count() + 1);
            prop_assert!(!g.contains_vertex(v));
            let back = s.dissolve(v).unwrap();
            prop_assert_eq!(back.edge_count(), g.edge_count());
            prop_assert_eq!(back.mult(e.u, e.v), g.mult(e.u, e.v));
        }
        for v in g.vertices().filter(|&v| g.mdeg(v) == 2) {
            let d = g.dissolve(v).unwrap();
            prop_assert_eq!(d.vertex_count() + 1, g.vertex_count());
            let lost = g.edge_count() - d.edge_count();
            prop_assert!(lost == 1 || lost == 2);
        }
    }

    #[test]
    fn graph_sits_inside_its_gadget_graphs(n in 2usize..=6, m in 1usize..=9, seed in any::<u64>()) {
        if let Ok(g) = random_connected_multigraph(n, m.max(n - 1), 3, seed) {
            let id = g.vertices().map(|v| (v, v)).collect();
            let (p, pm) = plus_graph(&g);
            let (s, sm) = star_graph(&g);
            prop_assert!(is_subgraph_embedding(&g, &p, &id));
            prop_assert!(is_subgraph_embedding(&g, &s, &id));
            prop_assert!(p.min_mdeg() >= 3);
            prop_assert_eq!(p.edge_count(), g.edge_count() + 4 * g.vertex_count());
            prop_assert_eq!(sm.zones.len() as u32, g.vertices().map(|v| g.mdeg(v)).sum::<u32>());
            prop_assert_eq!(pm.zones.len(), g.vertex_count());
        }
    }

    #[test]
    fn random_generators_hit_their_edge_count(n in 2usize..=8, m in 0usize..=20, mm in 1u32..=3, seed in any::<u64>()) {
        let cap = mm as usize * n * (n - 1) / 2;
        match random_multigraph(n, m, mm, seed) {
            Ok(g) => {
                prop_assert!(m <= cap);
                prop_assert_eq!(g.edge_count(), m);
                prop_assert!(g.max_mult() <= mm);
                prop_assert_eq!(&g, &random_multigraph(n, m, mm, seed).unwrap());
            }
            Err(_) => prop_assert!(m > cap),
        }
        if m + 1 >= n && m <= cap {
            let g = random_connected_multigraph(n, m, mm, seed).unwrap();
            prop_assert!(g.is_connected());
            prop_assert_eq!(g.edge_count(), m);
        }
    }
}
