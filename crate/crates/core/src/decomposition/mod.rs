//! Rooted tree-partitions and tree-cut decompositions: validation, widths,
//! torsos, 3-centers, nice-ification and small exact widths.

mod exact;
mod tree;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{Multigraph, VertexId};

pub use exact::{
    exact_tcw_small, exact_tpw_small, exact_treewidth_small, heuristic_tcd, heuristic_tpd, treewidth_upper_bound, ExactConfig, DEFAULT_TREEWIDTH_CAP,
    DEFAULT_WIDTH_CAP,
};
pub use tree::Shape;

/// A rooted tree with one vertex set per node, given as a parent array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTreeCutDecomposition {
    pub parent: Vec<Option<usize>>,
    pub bags: Vec<BTreeSet<VertexId>>,
}

/// Same layout as a tree-cut decomposition, with non-empty bags and edges
/// confined to equal or adjacent bags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTreePartition {
    pub parent: Vec<Option<usize>>,
    pub bags: Vec<BTreeSet<VertexId>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionWidthReport {
    pub max_bag: usize,
    /// Largest `|E_f|` over tree edges.
    pub max_cut: usize,
    pub width: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TcdWidthReport {
    pub adhesion: Vec<usize>,
    /// Vertex count of the 3-center of each torso.
    pub center: Vec<usize>,
    pub width: usize,
}

impl RootedTreeCutDecomposition {
    pub fn single_bag(g: &Multigraph) -> Self {
        RootedTreeCutDecomposition {
            parent: vec![None],
            bags: vec![g.vertices().collect()],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn shape(&self) -> Result<Shape> {
        if self.bags.len() != self.parent.len() {
            return Err(Error::InvalidDecomposition(format!(
                "{} bags for {} nodes",
                self.bags.len(),
                self.parent.len()
            )));
        }
        Shape::new(&self.parent)
    }

    /// Node holding each vertex.
    pub fn node_of(&self) -> HashMap<VertexId, usize> {
        let mut m = HashMap::new();
        for (t, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                m.insert(v, t);
            }
        }
        m
    }

    pub fn subtree_vertices(&self, shape: &Shape, t: usize) -> BTreeSet<VertexId> {
        shape.subtree(t).into_iter().flat_map(|b| self.bags[b].iter().copied()).collect()
    }

    /// Removes the given nodes (which must not include the root), re-hanging
    /// their children on the nearest kept ancestor. Node ids are compacted.
    pub fn without_nodes(&self, drop: &BTreeSet<usize>) -> Self {
        let mut new_id = vec![usize::MAX; self.len()];
        let mut k = 0;
        for (t, slot) in new_id.iter_mut().enumerate() {
            if !drop.contains(&t) {
                *slot = k;
                k += 1;
            }
        }
        let mut parent = Vec::with_capacity(k);
        let mut bags = Vec::with_capacity(k);
        for t in 0..self.len() {
            if drop.contains(&t) {
                continue;
            }
            let mut p = self.parent[t];
            while let Some(q) = p {
                if !drop.contains(&q) {
                    break;
                }
                p = self.parent[q];
            }
            parent.push(p.map(|q| new_id[q]));
            bags.push(self.bags[t].clone());
        }
        RootedTreeCutDecomposition { parent, bags }
    }

    /// Repeatedly drops empty leaves (the root is kept).
    pub fn without_empty_leaves(&self) -> Self {
        let mut d = self.clone();
        loop {
            let Ok(shape) = d.shape() else { return d };
            let drop: BTreeSet<usize> = (0..d.len())
                .filter(|&t| t != shape.root && shape.children[t].is_empty() && d.bags[t].is_empty())
                .collect();
            if drop.is_empty() {
                return d;
            }
            d = d.without_nodes(&drop);
        }
    }
}

impl RootedTreePartition {
    pub fn single_bag(g: &Multigraph) -> Self {
        RootedTreePartition {
            parent: vec![None],
            bags: vec![g.vertices().collect()],
        }
    }

    pub fn as_tree_cut(&self) -> RootedTreeCutDecomposition {
        RootedTreeCutDecomposition {
            parent: self.parent.clone(),
            bags: self.bags.clone(),
        }
    }

    pub fn shape(&self) -> Result<Shape> {
        self.as_tree_cut().shape()
    }
}

fn check_near_partition(g: &Multigraph, bags: &[BTreeSet<VertexId>], allow_empty: bool) -> Result<HashMap<VertexId, usize>> {
    let mut owner = HashMap::new();
    for (t, bag) in bags.iter().enumerate() {
        if bag.is_empty() && !allow_empty {
            return Err(Error::InvalidDecomposition(format!("bag {t} is empty")));
        }
        for &v in bag {
            if !g.contains_vertex(v) {
                return Err(Error::InvalidDecomposition(format!("bag {t} holds {v}, which is not a vertex")));
            }
            if let Some(s) = owner.insert(v, t) {
                return Err(Error::InvalidDecomposition(format!("vertex {v} lies in bags {s} and {t}")));
            }
        }
    }
    if let Some(v) = g.vertices().find(|v| !owner.contains_key(v)) {
        return Err(Error::InvalidDecomposition(format!("vertex {v} is in no bag")));
    }
    Ok(owner)
}

/// Checks a tree-partition and computes its width.
pub fn validate_partition(g: &Multigraph, d: &RootedTreePartition) -> Result<PartitionWidthReport> {
    let shape = d.shape()?;
    let owner = check_near_partition(g, &d.bags, false)?;
    let mut cut: HashMap<(usize, usize), usize> = HashMap::new();
    for (u, v, m) in g.multiedges() {
        let (a, b) = (owner[&u], owner[&v]);
        if a == b {
            continue;
        }
        if !shape.adjacent(a, b) {
            return Err(Error::InvalidDecomposition(format!(
                "edge {{{u},{v}}} joins bags {a} and {b}, which are not adjacent"
            )));
        }
        *cut.entry((a.min(b), a.max(b))).or_default() += m as usize;
    }
    let max_bag = d.bags.iter().map(BTreeSet::len).max().unwrap_or(0);
    let max_cut = cut.values().copied().max().unwrap_or(0);
    Ok(PartitionWidthReport {
        max_bag,
        max_cut,
        width: max_bag.max(max_cut),
    })
}

/// Number of edge instances leaving `G_t`, for every node.
pub fn adhesions(g: &Multigraph, d: &RootedTreeCutDecomposition, shape: &Shape) -> Vec<usize> {
    let owner = d.node_of();
    let mut adh = vec![0; d.len()];
    for (u, v, m) in g.multiedges() {
        let (a, b) = (owner[&u], owner[&v]);
        let l = shape.lca(a, b);
        for mut x in [a, b] {
            while x != l {
                adh[x] += m as usize;
                x = shape.parent[x].unwrap();
            }
        }
    }
    adh
}

/// A torso with the consolidated vertices and the tree components they stand for.
#[derive(Debug, Clone)]
pub struct Torso {
    pub graph: Multigraph,
    pub bag: BTreeSet<VertexId>,
    pub consolidated: Vec<(VertexId, Vec<usize>)>,
}

fn torso_with(g: &Multigraph, d: &RootedTreeCutDecomposition, shape: &Shape, t: usize) -> Torso {
    if d.len() == 1 {
        return Torso {
            graph: g.clone(),
            bag: d.bags[t].clone(),
            consolidated: Vec::new(),
        };
    }
    let mut components: Vec<Vec<usize>> = shape.children[t].iter().map(|&c| shape.subtree(c)).collect();
    if shape.parent[t].is_some() {
        components.push((0..d.len()).filter(|&b| !shape.in_subtree(t, b)).collect());
    }
    let next = g.vertices().map(|v| v.0).max().unwrap_or(0) + 1;
    let mut image: HashMap<VertexId, VertexId> = d.bags[t].iter().map(|&v| (v, v)).collect();
    let mut graph = Multigraph::new();
    for &v in &d.bags[t] {
        graph.add_vertex_with_id(v);
    }
    let mut consolidated = Vec::new();
    for (i, comp) in components.into_iter().enumerate() {
        let z = VertexId(next + i as u32);
        graph.add_vertex_with_id(z);
        for &b in &comp {
            for &v in &d.bags[b] {
                image.insert(v, z);
            }
        }
        consolidated.push((z, comp));
    }
    for (u, v, m) in g.multiedges() {
        let (a, b) = (image[&u], image[&v]);
        if a != b {
            graph.add_edge(a, b, m).expect("torso vertices exist");
        }
    }
    Torso {
        graph,
        bag: d.bags[t].clone(),
        consolidated,
    }
}

/// The torso `H_t`.
pub fn torso(g: &Multigraph, d: &RootedTreeCutDecomposition, t: usize) -> Result<Torso> {
    let shape = d.shape()?;
    if t >= d.len() {
        return Err(Error::InvalidNode(t));
    }
    Ok(torso_with(g, d, &shape, t))
}

/// Order in which reducible vertices are processed by [`three_center_ordered`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionOrder {
    Ascending,
    Descending,
}

/// The 3-center of `(G, X)`: vertices outside `X` of multidegree at most 1 are
/// deleted and those of multidegree 2 dissolved, to a fixed point.
pub fn three_center(g: &Multigraph, x: &BTreeSet<VertexId>) -> Multigraph {
    three_center_ordered(g, x, ReductionOrder::Ascending)
}

pub fn three_center_ordered(g: &Multigraph, x: &BTreeSet<VertexId>, order: ReductionOrder) -> Multigraph {
    let mut h = g.clone();
    loop {
        let candidates = h.vertices().filter(|v| !x.contains(v) && h.mdeg(*v) <= 2);
        let next = match order {
            ReductionOrder::Ascending => candidates.min(),
            ReductionOrder::Descending => candidates.max(),
        };
        let Some(v) = next else { return h };
        if h.mdeg(v) <= 1 {
            h.remove_vertex(v).expect("vertex exists");
        } else {
            h = h.dissolve(v).expect("multidegree is 2");
        }
    }
}

/// Checks a tree-cut decomposition and computes adhesions, 3-center sizes and width.
pub fn validate_tcd(g: &Multigraph, d: &RootedTreeCutDecomposition) -> Result<TcdWidthReport> {
    let shape = d.shape()?;
    check_near_partition(g, &d.bags, true)?;
    let adhesion = adhesions(g, d, &shape);
    let center: Vec<usize> = (0..d.len())
        .map(|t| three_center(&torso_with(g, d, &shape, t).graph, &d.bags[t]).vertex_count())
        .collect();
    let width = adhesion.iter().zip(&center).map(|(a, c)| *a.max(c)).max().unwrap_or(0);
    Ok(TcdWidthReport { adhesion, center, width })
}

/// A thin node with an edge into a sibling subtree, as `(node, sibling)`.
fn nice_violation(g: &Multigraph, d: &RootedTreeCutDecomposition, shape: &Shape, adh: &[usize]) -> Option<(usize, usize)> {
    let owner = d.node_of();
    // Sibling pairs joined by an edge, keyed by the pair of children of their lca.
    let mut joined: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (u, v, _) in g.multiedges() {
        let (a, b) = (owner[&u], owner[&v]);
        let l = shape.lca(a, b);
        if l == a || l == b {
            continue;
        }
        let top = |mut x: usize| {
            while shape.parent[x] != Some(l) {
                x = shape.parent[x].unwrap();
            }
            x
        };
        let (ta, tb) = (top(a), top(b));
        joined.insert((ta, tb));
        joined.insert((tb, ta));
    }
    let mut thin: Vec<usize> = (0..d.len())
        .filter(|&t| shape.parent[t].is_some() && adh[t] <= 2)
        .collect();
    thin.sort_by_key(|&t| (std::cmp::Reverse(shape.depth[t]), t));
    thin.into_iter().find_map(|t| {
        shape.children[shape.parent[t].unwrap()]
            .iter()
            .copied()
            .find(|&b| b != t && joined.contains(&(t, b)))
            .map(|b| (t, b))
    })
}

pub fn is_nice(g: &Multigraph, d: &RootedTreeCutDecomposition) -> Result<bool> {
    let shape = d.shape()?;
    let adh = adhesions(g, d, &shape);
    Ok(nice_violation(g, d, &shape, &adh).is_none())
}

/// Transforms a decomposition into a nice one without increasing its width.
///
/// A deepest thin node with an edge into a sibling subtree is moved below that
/// sibling (lowest id first) until none is left. Each move is re-validated.
pub fn make_nice(g: &Multigraph, d: &RootedTreeCutDecomposition) -> Result<RootedTreeCutDecomposition> {
    make_nice_with(g, d, |_| {})
}

/// [`make_nice`] reporting every intermediate decomposition.
pub fn make_nice_with(
    g: &Multigraph,
    d: &RootedTreeCutDecomposition,
    mut on_step: impl FnMut(&RootedTreeCutDecomposition),
) -> Result<RootedTreeCutDecomposition> {
    let mut width = validate_tcd(g, d)?.width;
    let mut cur = d.clone();
    let limit = d.len() * d.len();
    for _ in 0..=limit {
        let shape = cur.shape()?;
        let adh = adhesions(g, &cur, &shape);
        let Some((t, b)) = nice_violation(g, &cur, &shape, &adh) else {
            return Ok(cur);
        };
        cur.parent[t] = Some(b);
        let after = validate_tcd(g, &cur)?.width;
        if after > width {
            return Err(Error::WidthIncreased { before: width, after });
        }
        width = after;
        on_step(&cur);
    }
    Err(Error::IterationBudgetExceeded(limit))
}

/// Serialized decomposition: parent array, bags and the recomputed width.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub kind: DecompositionKind,
    pub parent: Vec<Option<usize>>,
    pub bags: Vec<Vec<VertexId>>,
    pub width: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecompositionKind {
    TreeCut,
    TreePartition,
}

impl DecompositionFile {
    pub fn from_tree_cut(g: &Multigraph, d: &RootedTreeCutDecomposition) -> Result<Self> {
        Ok(DecompositionFile {
            kind: DecompositionKind::TreeCut,
            parent: d.parent.clone(),
            bags: d.bags.iter().map(|b| b.iter().copied().collect()).collect(),
            width: validate_tcd(g, d)?.width,
        })
    }

    pub fn from_partition(g: &Multigraph, d: &RootedTreePartition) -> Result<Self> {
        Ok(DecompositionFile {
            kind: DecompositionKind::TreePartition,
            parent: d.parent.clone(),
            bags: d.bags.iter().map(|b| b.iter().copied().collect()).collect(),
            width: validate_partition(g, d)?.width,
        })
    }

    fn bag_sets(&self) -> Vec<BTreeSet<VertexId>> {
        self.bags.iter().map(|b| b.iter().copied().collect()).collect()
    }

    fn check_width(&self, recomputed: usize) -> Result<()> {
        if recomputed != self.width {
            return Err(Error::InvalidDecomposition(format!(
                "stored width {} does not match recomputed width {recomputed}",
                self.width
            )));
        }
        Ok(())
    }

    /// Loads as a tree-cut decomposition, re-validating and checking the stored width.
    pub fn to_tree_cut(&self, g: &Multigraph) -> Result<RootedTreeCutDecomposition> {
        let d = RootedTreeCutDecomposition {
            parent: self.parent.clone(),
            bags: self.bag_sets(),
        };
        if self.kind == DecompositionKind::TreeCut {
            self.check_width(validate_tcd(g, &d)?.width)?;
        } else {
            self.check_width(validate_partition(g, &RootedTreePartition {
                parent: d.parent.clone(),
                bags: d.bags.clone(),
            })?.width)?;
        }
        Ok(d)
    }

    pub fn to_partition(&self, g: &Multigraph) -> Result<RootedTreePartition> {
        if self.kind != DecompositionKind::TreePartition {
            return Err(Error::InvalidDecomposition("file holds a tree-cut decomposition".into()));
        }
        let d = RootedTreePartition {
            parent: self.parent.clone(),
            bags: self.bag_sets(),
        };
        self.check_width(validate_partition(g, &d)?.width)?;
        Ok(d)
    }
}

/// Bags as a map from vertex to node, for callers that need a stable order.
pub fn bag_index(bags: &[BTreeSet<VertexId>]) -> BTreeMap<VertexId, usize> {
    bags.iter()
        .enumerate()
        .flat_map(|(t, b)| b.iter().map(move |&v| (v, t)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle_graph, path_graph};

    fn set(xs: &[u32]) -> BTreeSet<VertexId> {
        xs.iter().map(|&x| VertexId(x)).collect()
    }

    #[test]
    fn partition_examples() {
        let p3 = path_graph(3);
        let single = RootedTreePartition::single_bag(&p3);
        assert_eq!(validate_partition(&p3, &single).unwrap().width, 3);
        let path = RootedTreePartition {
            parent: vec![None, Some(0), Some(1)],
            bags: vec![set(&[1]), set(&[2]), set(&[3])],
        };
        assert_eq!(validate_partition(&p3, &path).unwrap().width, 1);
        // Star centred on the {1} node: edge {2,3} joins two leaves.
        let star = RootedTreePartition {
            parent: vec![None, Some(0), Some(0)],
            bags: vec![set(&[1]), set(&[2]), set(&[3])],
        };
        assert!(matches!(validate_partition(&p3, &star), Err(Error::InvalidDecomposition(_))));
    }

    #[test]
    fn partition_rejects_overlaps_and_gaps() {
        let p3 = path_graph(3);
        let overlap = RootedTreePartition {
            parent: vec![None, Some(0)],
            bags: vec![set(&[1, 2]), set(&[2, 3])],
        };
        assert!(validate_partition(&p3, &overlap).is_err());
        let gap = RootedTreePartition {
            parent: vec![None, Some(0)],
            bags: vec![set(&[1]), set(&[2])],
        };
        assert!(validate_partition(&p3, &gap).is_err());
    }

    #[test]
    fn tcd_examples() {
        let c5 = cycle_graph(5).unwrap();
        assert_eq!(validate_tcd(&c5, &RootedTreeCutDecomposition::single_bag(&c5)).unwrap().width, 5);

        let edge = path_graph(2);
        let two = RootedTreeCutDecomposition {
            parent: vec![None, Some(0)],
            bags: vec![set(&[1]), set(&[2])],
        };
        let rep = validate_tcd(&edge, &two).unwrap();
        assert_eq!(rep.adhesion, vec![0, 1]);
        assert_eq!(rep.center, vec![1, 1]);
        assert_eq!(rep.width, 1);

        let with_empty_leaf = RootedTreeCutDecomposition {
            parent: vec![None, Some(0), Some(0)],
            bags: vec![set(&[1]), set(&[2]), set(&[])],
        };
        assert_eq!(validate_tcd(&edge, &with_empty_leaf).unwrap().width, 1);
        assert_eq!(with_empty_leaf.without_empty_leaves(), two);
    }

    #[test]
    fn torso_examples() {
        let p3 = path_graph(3);
        let single = RootedTreeCutDecomposition::single_bag(&p3);
        assert_eq!(torso(&p3, &single, 0).unwrap().graph, p3);

        let path = RootedTreeCutDecomposition {
            parent: vec![None, Some(0), Some(1)],
            bags: vec![set(&[1]), set(&[2]), set(&[3])],
        };
        let t = torso(&p3, &path, 1).unwrap();
        assert_eq!(t.graph.vertex_count(), 3);
        assert_eq!(t.graph.edge_count(), 2);
        assert_eq!(t.graph.mdeg(VertexId(2)), 2);
        assert!(matches!(torso(&p3, &path, 5), Err(Error::InvalidNode(5))));
    }

    #[test]
    fn three_center_examples() {
        let p6 = path_graph(6);
        assert_eq!(three_center(&p6, &p6.vertices().collect()), p6);
        let reduced = three_center(&p6, &set(&[1, 6]));
        assert_eq!(reduced.vertex_count(), 2);
        assert_eq!(reduced.mult(VertexId(1), VertexId(6)), 1);

        let mut pendant = path_graph(5);
        let leaf = pendant.add_vertex();
        pendant.add_edge(VertexId(3), leaf, 1).unwrap();
        let reduced = three_center(&pendant, &set(&[1, 5]));
        assert_eq!(reduced.vertex_count(), 2);
        assert_eq!(reduced.edge_count(), 1);
    }

    #[test]
    fn three_center_on_free_cycle_vanishes() {
        let c5 = cycle_graph(5).unwrap();
        assert_eq!(three_center(&c5, &BTreeSet::new()).vertex_count(), 0);
        assert_eq!(three_center(&c5, &set(&[1])).vertex_count(), 1);
    }

    #[test]
    fn make_nice_rehangs_thin_sibling() {
        // Root {1} with leaves {2}, {3}; the leaves are joined by an edge.
        let g = Multigraph::from_edges(3, &[(1, 2, 1), (2, 3, 1), (1, 3, 1)]).unwrap();
        let d = RootedTreeCutDecomposition {
            parent: vec![None, Some(0), Some(0)],
            bags: vec![set(&[1]), set(&[2]), set(&[3])],
        };
        assert!(!is_nice(&g, &d).unwrap());
        let nice = make_nice(&g, &d).unwrap();
        assert!(is_nice(&g, &nice).unwrap());
        assert_eq!(nice.parent, vec![None, Some(2), Some(0)]);
        assert!(validate_tcd(&g, &nice).unwrap().width <= validate_tcd(&g, &d).unwrap().width);
    }

    #[test]
    fn decomposition_file_roundtrip() {
        let c4 = cycle_graph(4).unwrap();
        let d = RootedTreeCutDecomposition::single_bag(&c4);
        let f = DecompositionFile::from_tree_cut(&c4, &d).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: DecompositionFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_tree_cut(&c4).unwrap(), d);
        let mut tampered = back.clone();
        tampered.width = 1;
        assert!(tampered.to_tree_cut(&c4).is_err());
    }
}
