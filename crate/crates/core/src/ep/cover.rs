use std::collections::{BTreeMap, BTreeSet};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::decomposition::{validate_partition, RootedTreePartition};
use crate::error::{Error, Result};
use crate::immersion::{find_in, Budget, CertifyingPath, HostGraph, ImmersionModel, Mode, Pattern, SearchOutcome};
use crate::multigraph::{EdgeRef, Multigraph};

use super::gap::omega;
use super::pipeline::PipelineMappings;

/// Which bag edges an iteration removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BagRule {
    /// Only the model's own edges inside `G[X_t]`.
    #[default]
    ModelEdges,
    /// Every edge of `G[X_t]`.
    WholeBag,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverRound {
    pub node: usize,
    pub height: usize,
    pub children_met: usize,
    pub bag_edges: usize,
    pub cut_edges: usize,
}

impl CoverRound {
    pub fn removed(&self) -> usize {
        self.bag_edges + self.cut_edges
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverResult {
    pub cover: Vec<EdgeRef>,
    pub packing: Vec<ImmersionModel>,
    pub rounds: Vec<CoverRound>,
    pub width: usize,
    pub omega: u64,
}

impl CoverResult {
    pub fn within_bound(&self) -> bool {
        self.cover.len() as u64 <= self.omega * self.packing.len() as u64
    }

    pub fn rounds_within_bound(&self) -> bool {
        self.rounds.iter().all(|r| r.removed() as u64 <= self.omega)
    }
}

/// Greedy cover and packing of immersion expansions of `h` driven by a
/// tree-partition of `g`.
pub fn cover_from_partition(
    g: &Multigraph,
    h: &Multigraph,
    d: &RootedTreePartition,
    budget: Budget,
) -> Result<CoverResult> {
    cover_from_partition_with(g, h, d, budget, BagRule::default())
}

pub fn cover_from_partition_with(
    g: &Multigraph,
    h: &Multigraph,
    d: &RootedTreePartition,
    budget: Budget,
    rule: BagRule,
) -> Result<CoverResult> {
    let pat = Pattern::new(h)?;
    let width = validate_partition(g, d)?.width;
    let om = omega(h, width as u64);
    let shape = d.shape()?;
    let host = HostGraph::new(g);
    let n_nodes = d.parent.len();

    let mut bag_of = vec![0; host.n()];
    for (t, bag) in d.bags.iter().enumerate() {
        for v in bag {
            bag_of[host.index[v]] = t;
        }
    }
    let subtree: Vec<FixedBitSet> = (0..n_nodes)
        .map(|t| {
            let mut s = FixedBitSet::with_capacity(host.n());
            for b in shape.subtree(t) {
                for v in &d.bags[b] {
                    s.insert(host.index[v]);
                }
            }
            s
        })
        .collect();
    let mut order: Vec<usize> = (0..n_nodes).collect();
    order.sort_by_key(|&t| (shape.height[t], t));

    let mut alive = host.all_edges();
    let mut clean = vec![false; n_nodes];
    let mut cover = BTreeSet::new();
    let mut packing = Vec::new();
    let mut rounds = Vec::new();
    loop {
        let mut hit = None;
        for &t in &order {
            if clean[t] {
                continue;
            }
            match find_in(&host, &alive, &subtree[t], &pat, Mode::Immersion, budget) {
                SearchOutcome::Found(m) => {
                    hit = Some((t, m));
                    break;
                }
                SearchOutcome::NoneExists => clean[t] = true,
                SearchOutcome::BudgetExhausted => {
                    return Err(Error::BudgetExhausted(budget.limit.unwrap_or(u64::MAX)))
                }
            }
        }
        let Some((t, m)) = hit else { break };

        let used = host.edge_ids(m.psi.iter().flat_map(|cp| cp.edges.iter())).expect("model edges are host edges");
        let mut touched = m.branch_vertices();
        for cp in &m.psi {
            touched.extend(m.path_vertices(cp).unwrap_or_default());
        }
        let met: Vec<usize> = shape.children[t]
            .iter()
            .copied()
            .filter(|&c| touched.iter().any(|v| subtree[c].contains(host.index[v])))
            .collect();

        let mut removal = FixedBitSet::with_capacity(host.m());
        let mut bag_edges = 0;
        let mut cut_edges = 0;
        for e in alive.ones() {
            let (a, b) = host.ends[e];
            let (ta, tb) = (bag_of[a], bag_of[b]);
            let inside = ta == t && tb == t && (rule == BagRule::WholeBag || used.contains(e));
            let cut = (ta == t && met.contains(&tb)) || (tb == t && met.contains(&ta));
            if inside {
                bag_edges += 1;
            } else if cut {
                cut_edges += 1;
            } else {
                continue;
            }
            removal.insert(e);
        }
        alive.difference_with(&removal);
        cover.extend(host.edge_refs_of(&removal));
        packing.push(m);
        rounds.push(CoverRound {
            node: t,
            height: shape.height[t],
            children_met: met.len(),
            bag_edges,
            cut_edges,
        });
    }

    Ok(CoverResult {
        cover: cover.into_iter().collect(),
        packing,
        rounds,
        width,
        omega: om,
    })
}

/// Pulls a cover of `G'` back to `G`: zone edges become all edges of `G` at the
/// zone's center.
pub fn pullback_cover(cover: &[EdgeRef], maps: &PipelineMappings, g: &Multigraph) -> Result<Vec<EdgeRef>> {
    pullback_star_cover(&maps.to_star(cover)?, maps, g)
}

/// Second stage of [`pullback_cover`], for a cover already expressed in `G*`.
pub fn pullback_star_cover(star_cover: &[EdgeRef], maps: &PipelineMappings, g: &Multigraph) -> Result<Vec<EdgeRef>> {
    let mut out = BTreeSet::new();
    for e in star_cover {
        if maps.zones.is_original_edge(e) {
            if !g.contains_edge(*e) {
                return Err(Error::UnknownEdge(*e));
            }
            out.insert(*e);
        } else {
            let z = maps.zones.zone_of_edge(e).ok_or(Error::UnknownEdge(*e))?;
            out.extend(g.incident_edge_refs(z.center));
        }
    }
    Ok(out.into_iter().collect())
}

/// Maps a model in `G'` onto `G*` by contracting subdivided paths.
pub fn model_to_star(m: &ImmersionModel, maps: &PipelineMappings) -> Result<ImmersionModel> {
    let mut psi = Vec::with_capacity(m.psi.len());
    for cp in &m.psi {
        let mut edges: Vec<EdgeRef> = Vec::new();
        for e in &cp.edges {
            let p = *maps.subdivision.get(e).ok_or(Error::UnknownEdge(*e))?;
            if edges.last() != Some(&p) {
                edges.push(p);
            }
        }
        psi.push(CertifyingPath {
            pattern_edge: cp.pattern_edge,
            edges,
        });
    }
    let phi: BTreeMap<_, _> = m.phi.clone();
    for v in phi.values() {
        if maps.subdivision_vertices.contains_key(v) {
            return Err(Error::MalformedModel(format!("branch vertex {v} is a subdivision vertex")));
        }
    }
    Ok(ImmersionModel { mode: m.mode, phi, psi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle_graph, theta};
    use crate::immersion::{contains, pairwise_disjoint, Disjointness};
    use crate::multigraph::VertexId;

    #[test]
    fn no_expansion_gives_empty_result() {
        let g = cycle_graph(5).unwrap();
        let p = crate::generators::path_graph(4);
        let d = RootedTreePartition::single_bag(&p);
        let r = cover_from_partition(&p, &theta(2), &d, Budget::UNLIMITED).unwrap();
        assert!(r.cover.is_empty() && r.packing.is_empty());
        let r = cover_from_partition(&g, &theta(2), &RootedTreePartition::single_bag(&g), Budget::UNLIMITED).unwrap();
        assert_eq!(r.packing.len(), 1);
    }

    #[test]
    fn two_triangles() {
        let g = Multigraph::from_edges(6, &[(1, 2, 1), (2, 3, 1), (1, 3, 1), (4, 5, 1), (5, 6, 1), (4, 6, 1)]).unwrap();
        // A triangle has no singleton tree-partition, so pair two of its vertices.
        let set = |vs: &[u32]| vs.iter().map(|&v| VertexId(v)).collect();
        let d = RootedTreePartition {
            parent: vec![None, Some(0), Some(0), Some(2)],
            bags: vec![set(&[1]), set(&[2, 3]), set(&[4]), set(&[5, 6])],
        };
        let r = cover_from_partition(&g, &theta(2), &d, Budget::UNLIMITED).unwrap();
        assert_eq!(r.packing.len(), 2);
        assert!(r.within_bound() && r.rounds_within_bound());
        assert!(pairwise_disjoint(&r.packing, Disjointness::Edge));
        let rest = g.without_edges(&r.cover).unwrap();
        assert!(!contains(&rest, &theta(2), Mode::Immersion).unwrap());
    }

    #[test]
    fn whole_bag_rule_removes_parallel_edges() {
        let g = Multigraph::from_edges(2, &[(1, 2, 20)]).unwrap();
        let d = RootedTreePartition::single_bag(&g);
        let model_only = cover_from_partition(&g, &theta(2), &d, Budget::UNLIMITED).unwrap();
        assert_eq!(model_only.packing.len(), 10);
        assert!(model_only.within_bound() && model_only.rounds_within_bound());
        let whole = cover_from_partition_with(&g, &theta(2), &d, Budget::UNLIMITED, BagRule::WholeBag).unwrap();
        assert_eq!((whole.cover.len(), whole.packing.len()), (20, 1));
        assert!(!whole.rounds_within_bound());
    }
}
