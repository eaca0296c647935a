use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::multigraph::{EdgeRef, Multigraph, VertexId};

/// Index-based view of a multigraph where every edge instance has a stable id.
///
/// Vertex indices follow insertion order and edge ids follow
/// [`Multigraph::edge_refs`], so searches over this view are deterministic.
#[derive(Debug, Clone)]
pub struct HostGraph {
    pub ids: Vec<VertexId>,
    pub index: HashMap<VertexId, usize>,
    pub ends: Vec<(usize, usize)>,
    pub refs: Vec<EdgeRef>,
    pub edge_index: HashMap<EdgeRef, usize>,
    /// `(edge id, other endpoint)` per vertex.
    pub inc: Vec<Vec<(usize, usize)>>,
}

impl HostGraph {
    pub fn new(g: &Multigraph) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut ends = Vec::new();
        let mut refs = Vec::new();
        let mut inc = vec![Vec::new(); ids.len()];
        for e in g.edge_refs() {
            let (a, b) = (index[&e.u], index[&e.v]);
            let id = ends.len();
            ends.push((a, b));
            refs.push(e);
            inc[a].push((id, b));
            inc[b].push((id, a));
        }
        let edge_index = refs.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        HostGraph {
            ids,
            index,
            ends,
            refs,
            edge_index,
            inc,
        }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.ends.len()
    }

    pub fn all_edges(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.m());
        s.insert_range(..);
        s
    }

    pub fn all_vertices(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.n());
        s.insert_range(..);
        s
    }

    /// Alive edges with both endpoints in `vertices`.
    pub fn induced_edges(&self, alive: &FixedBitSet, vertices: &FixedBitSet) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.m());
        for e in alive.ones() {
            let (a, b) = self.ends[e];
            if vertices.contains(a) && vertices.contains(b) {
                s.insert(e);
            }
        }
        s
    }

    /// Edge ids of a set of references; `None` if one is absent.
    pub fn edge_ids<'a>(&self, refs: impl IntoIterator<Item = &'a EdgeRef>) -> Option<FixedBitSet> {
        let mut s = FixedBitSet::with_capacity(self.m());
        for e in refs {
            s.insert(*self.edge_index.get(e)?);
        }
        Some(s)
    }

    pub fn vertex_ids<'a>(&self, vs: impl IntoIterator<Item = &'a VertexId>) -> Option<FixedBitSet> {
        let mut s = FixedBitSet::with_capacity(self.n());
        for v in vs {
            s.insert(*self.index.get(v)?);
        }
        Some(s)
    }

    pub fn edge_refs_of(&self, set: &FixedBitSet) -> Vec<EdgeRef> {
        set.ones().map(|e| self.refs[e]).collect()
    }

    pub fn vertices_of(&self, set: &FixedBitSet) -> Vec<VertexId> {
        set.ones().map(|v| self.ids[v]).collect()
    }

    /// Connected components of the subgraph with the given alive edges and vertices,
    /// as a component label per vertex (`usize::MAX` for excluded vertices).
    pub fn component_labels(&self, alive: &FixedBitSet, vertices: &FixedBitSet) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n()];
        let mut count = 0;
        for s in vertices.ones() {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &(e, y) in &self.inc[x] {
                    if alive.contains(e) && vertices.contains(y) && label[y] == usize::MAX {
                        label[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }
}
