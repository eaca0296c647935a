use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{EdgeRef, Multigraph, VertexId};

/// Which containment relation a model certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Edge-disjoint certifying paths.
    Immersion,
    /// Additionally no branch vertex is internal to a certifying path.
    StrongImmersion,
    /// Additionally certifying paths are internally vertex-disjoint.
    TopologicalMinor,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Immersion => "immersion",
            Mode::StrongImmersion => "strong-immersion",
            Mode::TopologicalMinor => "topological-minor",
        })
    }
}

/// Disjointness required between the members of a packing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Disjointness {
    Edge,
    Vertex,
}

/// The image `ψ(e)` of one pattern edge instance: a path of host edge instances
/// starting at `φ(e.u)` and ending at `φ(e.v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyingPath {
    pub pattern_edge: EdgeRef,
    pub edges: Vec<EdgeRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImmersionModel {
    pub mode: Mode,
    pub phi: BTreeMap<VertexId, VertexId>,
    pub psi: Vec<CertifyingPath>,
}

/// The subgraph of the host realised by a model.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeRef>,
}

impl ImmersionModel {
    pub fn branch_vertices(&self) -> BTreeSet<VertexId> {
        self.phi.values().copied().collect()
    }

    /// Vertex sequence of a certifying path, or `None` if the edges do not
    /// chain from `φ(u)`.
    pub fn path_vertices(&self, cp: &CertifyingPath) -> Option<Vec<VertexId>> {
        let mut cur = *self.phi.get(&cp.pattern_edge.u)?;
        let mut seq = vec![cur];
        for e in &cp.edges {
            cur = e.other(cur)?;
            seq.push(cur);
        }
        Some(seq)
    }

    pub fn expansion(&self) -> Expansion {
        let mut x = Expansion {
            vertices: self.branch_vertices(),
            edges: BTreeSet::new(),
        };
        for cp in &self.psi {
            if let Some(seq) = self.path_vertices(cp) {
                x.vertices.extend(seq);
            }
            x.edges.extend(cp.edges.iter().copied());
        }
        x
    }

    /// Restriction of `(φ, ψ)` to a subgraph of the pattern.
    pub fn restrict(&self, sub_pattern: &Multigraph) -> ImmersionModel {
        ImmersionModel {
            mode: self.mode,
            phi: self
                .phi
                .iter()
                .filter(|(x, _)| sub_pattern.contains_vertex(**x))
                .map(|(&x, &y)| (x, y))
                .collect(),
            psi: self
                .psi
                .iter()
                .filter(|cp| sub_pattern.contains_edge(cp.pattern_edge))
                .cloned()
                .collect(),
        }
    }

    /// Transports the model along a host embedding (injective vertex map whose
    /// image graph carries every used edge as instance 1..m of the image pair).
    pub fn translate(&self, emb: &BTreeMap<VertexId, VertexId>) -> Option<ImmersionModel> {
        let map_edge = |e: &EdgeRef| Some(EdgeRef::new(*emb.get(&e.u)?, *emb.get(&e.v)?, e.index));
        Some(ImmersionModel {
            mode: self.mode,
            phi: self
                .phi
                .iter()
                .map(|(&x, y)| Some((x, *emb.get(y)?)))
                .collect::<Option<_>>()?,
            psi: self
                .psi
                .iter()
                .map(|cp| {
                    Some(CertifyingPath {
                        pattern_edge: cp.pattern_edge,
                        edges: cp.edges.iter().map(map_edge).collect::<Option<_>>()?,
                    })
                })
                .collect::<Option<_>>()?,
        })
    }
}

/// First reason a model fails its checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Violation {
    NonInjective { host_vertex: VertexId },
    MissingPath { pattern_edge: EdgeRef },
    DuplicatePath { pattern_edge: EdgeRef },
    BrokenPath { pattern_edge: EdgeRef },
    EdgeReused { edge: EdgeRef },
    InternalBranchVertex { vertex: VertexId, pattern_edge: EdgeRef },
    SharedInternalVertex { vertex: VertexId },
    DegreeBound { pattern_vertex: VertexId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub mode: Mode,
    pub injective: bool,
    pub complete: bool,
    pub paths_well_formed: bool,
    pub edge_disjoint: bool,
    pub no_internal_branch_vertex: bool,
    pub internally_vertex_disjoint: bool,
    pub degree_bound: bool,
    /// First violation of a check required by `mode`.
    pub witness: Option<Violation>,
}

impl ValidityReport {
    pub fn valid_as(&self, mode: Mode) -> bool {
        let base = self.injective && self.complete && self.paths_well_formed && self.edge_disjoint && self.degree_bound;
        match mode {
            Mode::Immersion => base,
            Mode::StrongImmersion => base && self.no_internal_branch_vertex,
            Mode::TopologicalMinor => base && self.no_internal_branch_vertex && self.internally_vertex_disjoint,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.valid_as(self.mode)
    }
}

/// Checks a model against the definition of its mode. Never fails on a
/// well-formed model; references to absent vertices or edges are
/// [`Error::MalformedModel`].
pub fn validate_model(g: &Multigraph, h: &Multigraph, m: &ImmersionModel) -> Result<ValidityReport> {
    for (&x, &y) in &m.phi {
        if !h.contains_vertex(x) {
            return Err(Error::MalformedModel(format!("φ maps {x}, which is not a pattern vertex")));
        }
        if !g.contains_vertex(y) {
            return Err(Error::MalformedModel(format!("φ({x}) = {y} is not a host vertex")));
        }
    }
    if let Some(x) = h.vertices().find(|x| !m.phi.contains_key(x)) {
        return Err(Error::MalformedModel(format!("φ is undefined on pattern vertex {x}")));
    }
    for cp in &m.psi {
        if !h.contains_edge(cp.pattern_edge) {
            return Err(Error::MalformedModel(format!("ψ maps {}, which is not a pattern edge", cp.pattern_edge)));
        }
        if let Some(e) = cp.edges.iter().find(|e| !g.contains_edge(**e)) {
            return Err(Error::MalformedModel(format!("path of {} uses absent host edge {e}", cp.pattern_edge)));
        }
    }

    let mut witnesses: Vec<(u8, Violation)> = Vec::new();

    let mut injective = true;
    let mut seen = HashSet::new();
    for &y in m.phi.values() {
        if !seen.insert(y) {
            injective = false;
            witnesses.push((0, Violation::NonInjective { host_vertex: y }));
            break;
        }
    }

    let mut complete = true;
    let mut covered: HashMap<EdgeRef, usize> = HashMap::new();
    for cp in &m.psi {
        *covered.entry(cp.pattern_edge).or_default() += 1;
    }
    for e in h.edge_refs() {
        match covered.get(&e).copied().unwrap_or(0) {
            0 => {
                complete = false;
                witnesses.push((1, Violation::MissingPath { pattern_edge: e }));
            }
            1 => {}
            _ => {
                complete = false;
                witnesses.push((1, Violation::DuplicatePath { pattern_edge: e }));
            }
        }
    }

    let mut paths_well_formed = true;
    let mut sequences: Vec<Option<Vec<VertexId>>> = Vec::new();
    for cp in &m.psi {
        let seq = m.path_vertices(cp).filter(|seq| {
            let distinct: HashSet<_> = seq.iter().collect();
            !cp.edges.is_empty() && distinct.len() == seq.len() && seq.last() == m.phi.get(&cp.pattern_edge.v)
        });
        if seq.is_none() {
            paths_well_formed = false;
            witnesses.push((2, Violation::BrokenPath { pattern_edge: cp.pattern_edge }));
        }
        sequences.push(seq);
    }

    let mut edge_disjoint = true;
    let mut used = HashSet::new();
    'outer: for cp in &m.psi {
        for e in &cp.edges {
            if !used.insert(*e) {
                edge_disjoint = false;
                witnesses.push((3, Violation::EdgeReused { edge: *e }));
                break 'outer;
            }
        }
    }

    let branch = m.branch_vertices();
    let mut no_internal_branch_vertex = true;
    let mut internally_vertex_disjoint = true;
    let mut internal_owner: HashSet<VertexId> = HashSet::new();
    for (cp, seq) in m.psi.iter().zip(&sequences) {
        let Some(seq) = seq else { continue };
        for &w in &seq[1..seq.len() - 1] {
            if branch.contains(&w) && no_internal_branch_vertex {
                no_internal_branch_vertex = false;
                witnesses.push((4, Violation::InternalBranchVertex { vertex: w, pattern_edge: cp.pattern_edge }));
            }
            if !internal_owner.insert(w) && internally_vertex_disjoint {
                internally_vertex_disjoint = false;
                witnesses.push((5, Violation::SharedInternalVertex { vertex: w }));
            }
        }
    }

    let mut degree_bound = true;
    for (&x, &y) in &m.phi {
        if h.mdeg(x) > g.mdeg(y) {
            degree_bound = false;
            witnesses.push((6, Violation::DegreeBound { pattern_vertex: x }));
            break;
        }
    }

    let required = |rank: u8| match m.mode {
        Mode::Immersion => rank != 4 && rank != 5,
        Mode::StrongImmersion => rank != 5,
        Mode::TopologicalMinor => true,
    };
    witnesses.sort_by_key(|(r, _)| *r);
    let witness = witnesses.into_iter().find(|(r, _)| required(*r)).map(|(_, w)| w);

    Ok(ValidityReport {
        mode: m.mode,
        injective,
        complete,
        paths_well_formed,
        edge_disjoint,
        no_internal_branch_vertex,
        internally_vertex_disjoint,
        degree_bound,
        witness,
    })
}

/// Number of connected components of `G ∖ X` that contain a vertex of the expansion.
pub fn components_met(g: &Multigraph, expansion: &Expansion, x: &BTreeSet<VertexId>) -> usize {
    let rest = g.without_vertices(x.iter());
    rest.connected_components()
        .into_iter()
        .filter(|c| c.iter().any(|v| expansion.vertices.contains(v)))
        .count()
}

/// Pairwise disjointness of a list of models' expansions.
pub fn pairwise_disjoint(models: &[ImmersionModel], disjointness: Disjointness) -> bool {
    let exps: Vec<Expansion> = models.iter().map(|m| m.expansion()).collect();
    for (i, a) in exps.iter().enumerate() {
        for b in &exps[i + 1..] {
            let clash = match disjointness {
                Disjointness::Edge => a.edges.intersection(&b.edges).next().is_some(),
                Disjointness::Vertex => a.vertices.intersection(&b.vertices).next().is_some(),
            };
            if clash {
                return false;
            }
        }
    }
    true
}
