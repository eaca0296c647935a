//! Loopless multigraphs with stable vertex identifiers.
//!
//! A [`Multigraph`] stores, for every vertex, the multiplicity of each incident
//! multiedge. Edge *instances* of a multiedge `{u,v}` of multiplicity `m` are
//! addressed as `{u,v}_1 .. {u,v}_m` through [`EdgeRef`]. Instances of the same
//! multiedge are interchangeable: removing one decrements the multiplicity.
//!
//! Vertex identifiers are never reused, and iteration follows insertion order,
//! so every search built on top of this type is reproducible.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One instance `{u,v}_index` of a multiedge. Endpoints are stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "(u32, u32, u32)", try_from = "(u32, u32, u32)")]
pub struct EdgeRef {
    pub u: VertexId,
    pub v: VertexId,
    pub index: u32,
}

impl EdgeRef {
    /// Normalizes the endpoint order. Panics on a loop or a zero index.
    pub fn new(a: VertexId, b: VertexId, index: u32) -> Self {
        assert!(a != b, "loop edge reference at {a}");
        assert!(index >= 1, "edge instance indices start at 1");
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        EdgeRef { u, v, index }
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    pub fn has_endpoint(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint opposite to `x`, if `x` is an endpoint.
    pub fn other(&self, x: VertexId) -> Option<VertexId> {
        if self.u == x {
            Some(self.v)
        } else if self.v == x {
            Some(self.u)
        } else {
            None
        }
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}_{}", self.u, self.v, self.index)
    }
}

impl From<EdgeRef> for (u32, u32, u32) {
    fn from(e: EdgeRef) -> Self {
        (e.u.0, e.v.0, e.index)
    }
}

impl TryFrom<(u32, u32, u32)> for EdgeRef {
    type Error = String;

    fn try_from((a, b, i): (u32, u32, u32)) -> std::result::Result<Self, String> {
        if a == b {
            return Err(format!("loop edge ({a},{b})"));
        }
        if i == 0 {
            return Err("edge instance indices start at 1".into());
        }
        Ok(EdgeRef::new(VertexId(a), VertexId(b), i))
    }
}

#[derive(Debug, Clone, Default)]
pub struct Multigraph {
    adj: IndexMap<VertexId, IndexMap<VertexId, u32>>,
    next_id: u32,
}

impl PartialEq for Multigraph {
    /// Structural equality: same vertex set and same multiplicities.
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Multigraph {}

impl Multigraph {
    pub fn new() -> Self {
        Multigraph {
            adj: IndexMap::new(),
            next_id: 1,
        }
    }

    /// A graph on `n` isolated vertices with ids `1..=n`.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Multigraph::new();
        for _ in 0..n {
            g.add_vertex();
        }
        g
    }

    /// Builds a graph on ids `1..=n` from `(u, v, mult)` triples given as 1-based labels.
    pub fn from_edges(n: usize, edges: &[(u32, u32, u32)]) -> Result<Self> {
        let mut g = Multigraph::with_vertices(n);
        for &(u, v, m) in edges {
            g.add_edge(VertexId(u), VertexId(v), m)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let id = VertexId(self.next_id.max(1));
        self.next_id = id.0 + 1;
        self.adj.insert(id, IndexMap::new());
        id
    }

    /// Inserts a vertex with a caller-chosen id. Later fresh ids are allocated above it.
    pub fn add_vertex_with_id(&mut self, id: VertexId) -> bool {
        if self.adj.contains_key(&id) {
            return false;
        }
        self.adj.insert(id, IndexMap::new());
        self.next_id = self.next_id.max(id.0 + 1);
        true
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> Result<()> {
        let nbrs = self.adj.shift_remove(&v).ok_or(Error::MissingVertex(v))?;
        for w in nbrs.keys() {
            if let Some(m) = self.adj.get_mut(w) {
                m.shift_remove(&v);
            }
        }
        Ok(())
    }

    /// Adds `mult` instances of `{u,v}`. `mult = 0` is a no-op.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, mult: u32) -> Result<()> {
        if u == v {
            return Err(Error::Loop(u));
        }
        if !self.adj.contains_key(&u) {
            return Err(Error::MissingVertex(u));
        }
        if !self.adj.contains_key(&v) {
            return Err(Error::MissingVertex(v));
        }
        if mult == 0 {
            return Ok(());
        }
        *self.adj[&u].entry(v).or_insert(0) += mult;
        *self.adj[&v].entry(u).or_insert(0) += mult;
        Ok(())
    }

    /// Removes one instance of the multiedge addressed by `e`.
    pub fn remove_edge(&mut self, e: EdgeRef) -> Result<()> {
        let m = self.mult(e.u, e.v);
        if e.index == 0 || e.index > m {
            return Err(Error::MissingEdge(e));
        }
        self.decrement(e.u, e.v, 1);
        Ok(())
    }

    fn decrement(&mut self, u: VertexId, v: VertexId, by: u32) {
        for (a, b) in [(u, v), (v, u)] {
            let row = &mut self.adj[&a];
            let m = row[&b];
            if m <= by {
                row.shift_remove(&b);
            } else {
                row[&b] = m - by;
            }
        }
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn contains_edge(&self, e: EdgeRef) -> bool {
        e.index >= 1 && e.index <= self.mult(e.u, e.v)
    }

    pub fn mult(&self, u: VertexId, v: VertexId) -> u32 {
        self.adj
            .get(&u)
            .and_then(|row| row.get(&v))
            .copied()
            .unwrap_or(0)
    }

    /// Number of distinct neighbours.
    pub fn deg(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, |row| row.len())
    }

    /// Number of incident edge instances.
    pub fn mdeg(&self, v: VertexId) -> u32 {
        self.adj.get(&v).map_or(0, |row| row.values().sum())
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// `|E(G)|`, counting multiplicities.
    pub fn edge_count(&self) -> usize {
        self.multiedges().map(|(_, _, m)| m as usize).sum()
    }

    pub fn multiedge_count(&self) -> usize {
        self.multiedges().count()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, u32)> + '_ {
        self.adj
            .get(&v)
            .into_iter()
            .flat_map(|row| row.iter().map(|(&w, &m)| (w, m)))
    }

    /// Multiedges `(u, v, mult)` with `u < v`, in vertex insertion order.
    pub fn multiedges(&self) -> impl Iterator<Item = (VertexId, VertexId, u32)> + '_ {
        self.adj.iter().flat_map(|(&u, row)| {
            row.iter()
                .filter(move |(&v, _)| u < v)
                .map(move |(&v, &m)| (u, v, m))
        })
    }

    /// All edge instances, in the same order as [`Multigraph::multiedges`].
    pub fn edge_refs(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.multiedges()
            .flat_map(|(u, v, m)| (1..=m).map(move |i| EdgeRef::new(u, v, i)))
    }

    pub fn incident_edge_refs(&self, v: VertexId) -> Vec<EdgeRef> {
        self.neighbors(v)
            .flat_map(|(w, m)| (1..=m).map(move |i| EdgeRef::new(v, w, i)))
            .collect()
    }

    pub fn max_mult(&self) -> u32 {
        self.multiedges().map(|(_, _, m)| m).max().unwrap_or(0)
    }

    pub fn min_mdeg(&self) -> u32 {
        self.vertices().map(|v| self.mdeg(v)).min().unwrap_or(0)
    }

    pub fn max_mdeg(&self) -> u32 {
        self.vertices().map(|v| self.mdeg(v)).max().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.max_mult() <= 1
    }

    /// Same vertices, every multiedge reduced to multiplicity one.
    pub fn underlying_simple(&self) -> Multigraph {
        let mut g = self.empty_copy();
        for (u, v, _) in self.multiedges() {
            g.add_edge(u, v, 1).expect("endpoints exist");
        }
        g
    }

    /// The vertex set of `self` with no edges, keeping ids and the id allocator.
    pub fn empty_copy(&self) -> Multigraph {
        Multigraph {
            adj: self.adj.keys().map(|&v| (v, IndexMap::new())).collect(),
            next_id: self.next_id,
        }
    }

    pub fn induced_subgraph(&self, keep: &HashSet<VertexId>) -> Multigraph {
        let mut g = Multigraph {
            adj: IndexMap::new(),
            next_id: self.next_id,
        };
        for v in self.vertices().filter(|v| keep.contains(v)) {
            g.adj.insert(v, IndexMap::new());
        }
        for (u, v, m) in self.multiedges() {
            if keep.contains(&u) && keep.contains(&v) {
                g.add_edge(u, v, m).expect("endpoints kept");
            }
        }
        g
    }

    /// `G ∖ F` for a set of edge instances. Instances on the same multiedge
    /// are counted, so `{u,v}_1` and `{u,v}_2` remove two instances.
    pub fn without_edges<'a>(&self, edges: impl IntoIterator<Item = &'a EdgeRef>) -> Result<Multigraph> {
        let mut per_pair: BTreeMap<(VertexId, VertexId), HashSet<u32>> = BTreeMap::new();
        for e in edges {
            if !self.contains_edge(*e) {
                return Err(Error::MissingEdge(*e));
            }
            per_pair.entry(e.endpoints()).or_default().insert(e.index);
        }
        let mut g = self.clone();
        for ((u, v), idx) in per_pair {
            g.decrement(u, v, idx.len() as u32);
        }
        Ok(g)
    }

    pub fn without_vertices<'a>(&self, vs: impl IntoIterator<Item = &'a VertexId>) -> Multigraph {
        let drop: HashSet<VertexId> = vs.into_iter().copied().collect();
        let keep: HashSet<VertexId> = self.vertices().filter(|v| !drop.contains(v)).collect();
        self.induced_subgraph(&keep)
    }

    /// Connected components as vertex lists, each in insertion order.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let mut seen: HashSet<VertexId> = HashSet::new();
        let mut out = Vec::new();
        for s in self.vertices() {
            if !seen.insert(s) {
                continue;
            }
            let mut comp = IndexSet::new();
            comp.insert(s);
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for (y, _) in self.neighbors(x) {
                    if seen.insert(y) {
                        comp.insert(y);
                        queue.push_back(y);
                    }
                }
            }
            let mut comp: Vec<VertexId> = comp.into_iter().collect();
            comp.sort_by_key(|v| self.adj.get_index_of(v));
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Position of `v` in insertion order.
    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.adj.get_index_of(&v)
    }

    /// Copy with vertices relabelled `1..=n` in insertion order, plus the old→new map.
    pub fn relabeled_compact(&self) -> (Multigraph, BTreeMap<VertexId, VertexId>) {
        let map: BTreeMap<VertexId, VertexId> = self
            .vertices()
            .enumerate()
            .map(|(i, v)| (v, VertexId(i as u32 + 1)))
            .collect();
        let mut g = Multigraph::with_vertices(self.vertex_count());
        for (u, v, m) in self.multiedges() {
            g.add_edge(map[&u], map[&v], m).expect("relabelled endpoints exist");
        }
        (g, map)
    }

    /// Lift of two incident edge instances `e1 = {x,y}` and `e2 = {y,z}`:
    /// both are removed and, if `x ≠ z`, one instance of `{x,z}` is added.
    ///
    /// Two distinct instances of the same multiedge are accepted and fall in
    /// the `x = z` case.
    pub fn lift(&self, e1: EdgeRef, e2: EdgeRef) -> Result<Multigraph> {
        for e in [e1, e2] {
            if !self.contains_edge(e) {
                return Err(Error::MissingEdge(e));
            }
        }
        if e1 == e2 {
            return Err(Error::NotIncident(e1, e2));
        }
        let mut g = self.clone();
        if e1.endpoints() == e2.endpoints() {
            g.decrement(e1.u, e1.v, 2);
            return Ok(g);
        }
        let shared = [e1.u, e1.v]
            .into_iter()
            .find(|&y| e2.has_endpoint(y))
            .ok_or(Error::NotIncident(e1, e2))?;
        let x = e1.other(shared).expect("shared endpoint");
        let z = e2.other(shared).expect("shared endpoint");
        g.decrement(e1.u, e1.v, 1);
        g.decrement(e2.u, e2.v, 1);
        g.add_edge(x, z, 1)?;
        Ok(g)
    }

    /// Dissolution of a vertex with exactly two incident edge instances.
    /// When both instances reach the same neighbour, the vertex is deleted
    /// and nothing is added.
    pub fn dissolve(&self, v: VertexId) -> Result<Multigraph> {
        if !self.contains_vertex(v) {
            return Err(Error::MissingVertex(v));
        }
        let mdeg = self.mdeg(v);
        if mdeg != 2 {
            return Err(Error::BadDegree { vertex: v, mdeg });
        }
        let ends: Vec<VertexId> = self
            .neighbors(v)
            .flat_map(|(w, m)| std::iter::repeat(w).take(m as usize))
            .collect();
        let mut g = self.clone();
        g.remove_vertex(v)?;
        if ends[0] != ends[1] {
            g.add_edge(ends[0], ends[1], 1)?;
        }
        Ok(g)
    }

    /// Replaces the instance `e = {u,v}_i` by a path `u – s – v` through a fresh vertex `s`.
    pub fn subdivide(&self, e: EdgeRef) -> Result<(Multigraph, VertexId)> {
        if !self.contains_edge(e) {
            return Err(Error::MissingEdge(e));
        }
        let mut g = self.clone();
        g.decrement(e.u, e.v, 1);
        let s = g.add_vertex();
        g.add_edge(e.u, s, 1)?;
        g.add_edge(s, e.v, 1)?;
        Ok((g, s))
    }

    /// Vertex-disjoint union; vertices of `other` receive fresh ids.
    /// Returns the id map of `other`.
    pub fn disjoint_union_with(&mut self, other: &Multigraph) -> BTreeMap<VertexId, VertexId> {
        let map: BTreeMap<VertexId, VertexId> =
            other.vertices().map(|v| (v, self.add_vertex())).collect();
        for (u, v, m) in other.multiedges() {
            self.add_edge(map[&u], map[&v], m).expect("fresh endpoints");
        }
        map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VertexId {
        VertexId(i)
    }

    fn e(a: u32, b: u32, i: u32) -> EdgeRef {
        EdgeRef::new(v(a), v(b), i)
    }

    #[test]
    fn lift_on_path_joins_ends() {
        let g = Multigraph::from_edges(3, &[(1, 2, 1), (2, 3, 1)]).unwrap();
        let h = g.lift(e(1, 2, 1), e(2, 3, 1)).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.mult(v(1), v(3)), 1);
        assert_eq!(h.deg(v(2)), 0);
        // input untouched
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn lift_increments_existing_multiplicity() {
        let g = Multigraph::from_edges(3, &[(1, 2, 2), (2, 3, 1), (1, 3, 1)]).unwrap();
        let h = g.lift(e(1, 2, 2), e(2, 3, 1)).unwrap();
        assert_eq!(h.mult(v(1), v(3)), 2);
        assert_eq!(h.mult(v(1), v(2)), 1);
        assert_eq!(h.mult(v(2), v(3)), 0);
    }

    #[test]
    fn lift_of_parallel_pair_removes_both() {
        let g = Multigraph::from_edges(2, &[(1, 2, 2)]).unwrap();
        let h = g.lift(e(1, 2, 1), e(1, 2, 2)).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 0);
    }

    #[test]
    fn lift_errors() {
        let g = Multigraph::from_edges(4, &[(1, 2, 1), (3, 4, 1)]).unwrap();
        assert!(matches!(g.lift(e(1, 2, 1), e(3, 4, 1)), Err(Error::NotIncident(..))));
        assert!(matches!(g.lift(e(1, 2, 1), e(1, 2, 1)), Err(Error::NotIncident(..))));
        assert!(matches!(g.lift(e(1, 2, 2), e(3, 4, 1)), Err(Error::MissingEdge(_))));
    }

    #[test]
    fn dissolve_cases() {
        let path = Multigraph::from_edges(3, &[(1, 2, 1), (2, 3, 1)]).unwrap();
        let d = path.dissolve(v(2)).unwrap();
        assert_eq!(d.vertices().collect::<Vec<_>>(), vec![v(1), v(3)]);
        assert_eq!(d.mult(v(1), v(3)), 1);

        let tri = Multigraph::from_edges(3, &[(1, 2, 1), (2, 3, 1), (1, 3, 1)]).unwrap();
        let d = tri.dissolve(v(3)).unwrap();
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.mult(v(1), v(2)), 2);

        let theta = Multigraph::from_edges(2, &[(1, 2, 2)]).unwrap();
        let d = theta.dissolve(v(2)).unwrap();
        assert_eq!(d.vertex_count(), 1);
        assert_eq!(d.edge_count(), 0);

        let star = Multigraph::from_edges(4, &[(1, 2, 1), (1, 3, 1), (1, 4, 1)]).unwrap();
        assert!(matches!(star.dissolve(v(1)), Err(Error::BadDegree { mdeg: 3, .. })));
    }

    #[test]
    fn subdivide_then_dissolve_restores() {
        let theta = Multigraph::from_edges(2, &[(1, 2, 2)]).unwrap();
        let (s, x) = theta.subdivide(e(1, 2, 1)).unwrap();
        assert_eq!(s.vertex_count(), 3);
        assert_eq!(s.mult(v(1), v(2)), 1);
        assert_eq!(s.mult(v(1), x), 1);
        assert_eq!(s.mult(x, v(2)), 1);
        assert_eq!(s.dissolve(x).unwrap(), theta);
        assert!(matches!(theta.subdivide(e(1, 2, 3)), Err(Error::MissingEdge(_))));
    }

    #[test]
    fn fresh_ids_are_not_reused() {
        let mut g = Multigraph::with_vertices(3);
        g.remove_vertex(v(3)).unwrap();
        assert_eq!(g.add_vertex(), v(4));
    }

    #[test]
    fn loops_rejected() {
        let mut g = Multigraph::with_vertices(2);
        assert!(matches!(g.add_edge(v(1), v(1), 1), Err(Error::Loop(_))));
    }

    #[test]
    fn without_edges_counts_instances() {
        let g = Multigraph::from_edges(2, &[(1, 2, 3)]).unwrap();
        let h = g.without_edges(&[e(1, 2, 1), e(1, 2, 3)]).unwrap();
        assert_eq!(h.mult(v(1), v(2)), 1);
    }
}
