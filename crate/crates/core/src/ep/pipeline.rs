use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::decomposition::{
    adhesions, make_nice, validate_partition, validate_tcd, RootedTreeCutDecomposition, RootedTreePartition,
};
use crate::error::{Error, Result};
use crate::generators::{star_graph, StarZoneMap, Zone};
use crate::multigraph::{EdgeRef, Multigraph, VertexId};

/// Bookkeeping that links `G'` back to `G*` and `G`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineMappings {
    pub zones: StarZoneMap,
    /// Every edge of `G'` to the edge of `G*` it was cut from.
    pub subdivision: BTreeMap<EdgeRef, EdgeRef>,
    /// Vertices created by subdivision, with the bag they were put in.
    pub subdivision_vertices: BTreeMap<VertexId, usize>,
    /// The child bag added for each zone, as `(parent node, new node, zone)`.
    pub extension: Vec<(usize, usize, Zone)>,
}

impl PipelineMappings {
    /// Image in `G*` of a set of `G'` edges, duplicates collapsed.
    pub fn to_star(&self, edges: &[EdgeRef]) -> Result<Vec<EdgeRef>> {
        let mut out = BTreeSet::new();
        for e in edges {
            out.insert(*self.subdivision.get(e).ok_or(Error::UnknownEdge(*e))?);
        }
        Ok(out.into_iter().collect())
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub star: Multigraph,
    /// The extended, nice decomposition of `G*` before subdivision.
    pub star_decomposition: RootedTreeCutDecomposition,
    pub graph: Multigraph,
    pub partition: RootedTreePartition,
    pub maps: PipelineMappings,
    pub input_width: usize,
    pub partition_width: usize,
    pub adhesions_before: Vec<usize>,
    pub adhesions_after: Vec<usize>,
}

impl PipelineOutput {
    /// `2·tpw(D') ≤ (w+1)²`.
    pub fn within_bound(&self) -> bool {
        2 * self.partition_width <= (self.input_width + 1) * (self.input_width + 1)
    }
}

/// Turns a tree-cut decomposition of a connected `G` into a tree-partition of a
/// subdivision `G'` of `G*`.
pub fn tc_to_tp_pipeline(g: &Multigraph, d: &RootedTreeCutDecomposition) -> Result<PipelineOutput> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let input_width = validate_tcd(g, d)?.width;
    let (star, zones) = star_graph(g);

    let mut ext = d.clone();
    let owner = d.node_of();
    let mut extension = Vec::new();
    for z in &zones.zones {
        let p = owner[&z.center];
        ext.parent.push(Some(p));
        ext.bags.push([z.prime, z.double_prime].into_iter().collect());
        extension.push((p, ext.len() - 1, *z));
    }

    let nice = make_nice(&star, &ext)?.without_empty_leaves();
    let shape = nice.shape()?;
    let adhesions_before = adhesions(&star, &nice, &shape);

    let owner = nice.node_of();
    let mut graph = star.clone();
    let mut bags = nice.bags.clone();
    let mut subdivision = BTreeMap::new();
    let mut subdivision_vertices = BTreeMap::new();
    for (u, v, m) in star.multiedges() {
        let path = shape.path(owner[&u], owner[&v]);
        let inner = if path.len() > 2 { &path[1..path.len() - 1] } else { &[][..] };
        if inner.is_empty() {
            for i in 1..=m {
                let e = EdgeRef::new(u, v, i);
                subdivision.insert(e, e);
            }
            continue;
        }
        // Walk from the endpoint whose bag starts the path.
        let (from, to) = if owner[&u] == path[0] { (u, v) } else { (v, u) };
        for i in 1..=m {
            let parent = EdgeRef::new(u, v, i);
            graph.remove_edge(EdgeRef::new(u, v, graph.mult(u, v)))?;
            let mut prev = from;
            for &t in inner {
                let s = graph.add_vertex();
                bags[t].insert(s);
                subdivision_vertices.insert(s, t);
                graph.add_edge(prev, s, 1)?;
                subdivision.insert(EdgeRef::new(prev, s, 1), parent);
                prev = s;
            }
            graph.add_edge(prev, to, 1)?;
            subdivision.insert(EdgeRef::new(prev, to, 1), parent);
        }
    }

    let sub_tcd = RootedTreeCutDecomposition {
        parent: nice.parent.clone(),
        bags,
    };
    let adhesions_after = adhesions(&graph, &sub_tcd, &sub_tcd.shape()?);
    let cleaned = drop_empty_chain(sub_tcd.without_empty_leaves())?;
    let partition = RootedTreePartition {
        parent: cleaned.parent,
        bags: cleaned.bags,
    };
    let partition_width = validate_partition(&graph, &partition)?.width;

    Ok(PipelineOutput {
        star,
        star_decomposition: nice,
        graph,
        partition,
        maps: PipelineMappings {
            zones,
            subdivision,
            subdivision_vertices,
            extension,
        },
        input_width,
        partition_width,
        adhesions_before,
        adhesions_after,
    })
}

/// Removes an empty root with a single child, repeatedly.
fn drop_empty_chain(mut d: RootedTreeCutDecomposition) -> Result<RootedTreeCutDecomposition> {
    loop {
        let shape = d.shape()?;
        let r = shape.root;
        if !d.bags[r].is_empty() || shape.children[r].len() != 1 {
            return Ok(d);
        }
        let child = shape.children[r][0];
        d.parent[child] = None;
        d.parent[r] = Some(child);
        d = d.without_nodes(&[r].into_iter().collect());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle_graph, path_graph};

    #[test]
    fn single_edge() {
        let g = path_graph(2);
        let out = tc_to_tp_pipeline(&g, &RootedTreeCutDecomposition::single_bag(&g)).unwrap();
        assert!(out.within_bound());
        assert_eq!(out.maps.zones.zones.len(), 2);
        assert_eq!(out.maps.subdivision.len(), out.graph.edge_count());
    }

    #[test]
    fn crossing_edges_are_subdivided() {
        // C4 with bags {0},{1},{2},{3} on a path: the closing edge crosses two bags.
        let g = cycle_graph(4).unwrap();
        let vs: Vec<VertexId> = g.vertices().collect();
        let d = RootedTreeCutDecomposition {
            parent: vec![None, Some(0), Some(1), Some(2)],
            bags: vs.iter().map(|&v| [v].into_iter().collect()).collect(),
        };
        let out = tc_to_tp_pipeline(&g, &d).unwrap();
        assert!(!out.maps.subdivision_vertices.is_empty());
        assert_eq!(out.adhesions_before, out.adhesions_after);
        let image: BTreeSet<EdgeRef> = out.maps.subdivision.values().copied().collect();
        let star: BTreeSet<EdgeRef> = out.star.edge_refs().collect();
        assert_eq!(image, star);
        assert!(out.within_bound());
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let g = Multigraph::with_vertices(2);
        let d = RootedTreeCutDecomposition::single_bag(&g);
        assert!(matches!(tc_to_tp_pipeline(&g, &d), Err(Error::Disconnected)));
    }
}
