use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::host::HostGraph;
use super::model::{Disjointness, ImmersionModel, Mode};
use super::search::{search, Budget, Pattern, SearchOptions, SearchStatus};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeRef, Multigraph, VertexId};

/// Inclusion-minimal element sets (edge ids or vertex ids) of all expansions,
/// each with one model realising it.
#[derive(Debug, Clone)]
pub struct Family {
    pub disjointness: Disjointness,
    pub sets: Vec<FixedBitSet>,
    pub witnesses: Vec<ImmersionModel>,
    /// Set when the enumeration ran out of budget; `sets` is then partial.
    pub complete: bool,
}

fn element_set(host: &HostGraph, m: &ImmersionModel, d: Disjointness) -> FixedBitSet {
    let x = m.expansion();
    match d {
        Disjointness::Edge => host.edge_ids(&x.edges).expect("model edges are host edges"),
        Disjointness::Vertex => host.vertex_ids(&x.vertices).expect("model vertices are host vertices"),
    }
}

/// Enumerates every expansion in the masked subgraph of `host`.
pub fn family_in(
    host: &HostGraph,
    alive: &FixedBitSet,
    allowed: &FixedBitSet,
    pat: &Pattern,
    mode: Mode,
    disjointness: Disjointness,
    budget: Budget,
) -> Family {
    let mut found: HashMap<FixedBitSet, ImmersionModel> = HashMap::new();
    let opts = SearchOptions {
        mode,
        budget,
        // Vertex sets do not depend on which parallel instance a path takes.
        canonical_instances: disjointness == Disjointness::Vertex,
        break_symmetry: true,
    };
    let (status, _) = search(host, alive, allowed, pat, opts, &mut |m| {
        found.entry(element_set(host, m, disjointness)).or_insert_with(|| m.clone());
        false
    });
    let mut all: Vec<(FixedBitSet, ImmersionModel)> = found.into_iter().collect();
    all.sort_by(|a, b| {
        a.0.count_ones(..)
            .cmp(&b.0.count_ones(..))
            .then_with(|| a.0.ones().cmp(b.0.ones()))
    });
    let mut sets: Vec<FixedBitSet> = Vec::new();
    let mut witnesses = Vec::new();
    for (s, m) in all {
        if sets.iter().all(|t| !t.is_subset(&s)) {
            sets.push(s);
            witnesses.push(m);
        }
    }
    Family {
        disjointness,
        sets,
        witnesses,
        complete: status != SearchStatus::Exhausted,
    }
}

pub fn expansion_family(g: &Multigraph, h: &Multigraph, mode: Mode, disjointness: Disjointness, budget: Budget) -> Result<(HostGraph, Family)> {
    let pat = Pattern::new(h)?;
    let host = HostGraph::new(g);
    let fam = family_in(&host, &host.all_edges(), &host.all_vertices(), &pat, mode, disjointness, budget);
    Ok((host, fam))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Packing {
    pub models: Vec<ImmersionModel>,
    /// `false` when the budget ran out and `models` is only a lower bound.
    pub exact: bool,
}

impl Packing {
    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }
}

/// A cover: edge instances or vertices whose removal kills every expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "elements")]
pub enum CoverSet {
    Edges(Vec<EdgeRef>),
    Vertices(Vec<VertexId>),
}

impl CoverSet {
    pub fn len(&self) -> usize {
        match self {
            CoverSet::Edges(e) => e.len(),
            CoverSet::Vertices(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The host with the cover removed.
    pub fn remove_from(&self, g: &Multigraph) -> Result<Multigraph> {
        match self {
            CoverSet::Edges(e) => g.without_edges(e),
            CoverSet::Vertices(v) => Ok(g.without_vertices(v)),
        }
    }
}

/// Maximum number of pairwise disjoint sets, by branch and bound.
/// Returns chosen indices and whether the search completed within budget.
pub fn max_set_packing(sets: &[FixedBitSet], universe: usize, budget: Budget) -> (Vec<usize>, bool) {
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by_key(|&i| sets[i].count_ones(..));
    let sizes: Vec<usize> = order.iter().map(|&i| sets[i].count_ones(..).max(1)).collect();

    struct St<'a> {
        sets: &'a [FixedBitSet],
        order: &'a [usize],
        sizes: &'a [usize],
        best: Vec<usize>,
        nodes: u64,
        limit: Option<u64>,
        exhausted: bool,
    }
    fn go(st: &mut St, i: usize, used: &mut FixedBitSet, free: usize, chosen: &mut Vec<usize>) {
        st.nodes += 1;
        if st.limit.is_some_and(|l| st.nodes > l) {
            st.exhausted = true;
            return;
        }
        if chosen.len() > st.best.len() {
            st.best = chosen.clone();
        }
        if i == st.order.len() {
            return;
        }
        // Sizes are sorted, so the free elements fit at most free / sizes[i] more sets.
        let upper = (st.order.len() - i).min(free / st.sizes[i]);
        if chosen.len() + upper <= st.best.len() {
            return;
        }
        let s = &st.sets[st.order[i]];
        if s.is_disjoint(used) {
            used.union_with(s);
            chosen.push(st.order[i]);
            go(st, i + 1, used, free - s.count_ones(..), chosen);
            chosen.pop();
            used.difference_with(s);
            if st.exhausted {
                return;
            }
        }
        go(st, i + 1, used, free, chosen);
    }

    let mut st = St {
        sets,
        order: &order,
        sizes: &sizes,
        best: Vec::new(),
        nodes: 0,
        limit: budget.limit,
        exhausted: false,
    };
    let mut used = FixedBitSet::with_capacity(universe);
    go(&mut st, 0, &mut used, universe, &mut Vec::new());
    let mut best = st.best;
    best.sort_unstable();
    (best, !st.exhausted)
}

/// Lexicographically first minimum hitting set, enumerated by cardinality.
/// `Err` carries the node count when the budget runs out.
pub fn min_hitting_set(sets: &[FixedBitSet], budget: Budget) -> std::result::Result<Vec<usize>, u64> {
    if sets.is_empty() {
        return Ok(Vec::new());
    }
    let mut universe: Vec<usize> = sets.iter().flat_map(|s| s.ones()).collect();
    universe.sort_unstable();
    universe.dedup();
    let maxes: Vec<usize> = sets.iter().map(|s| s.ones().last().unwrap_or(0)).collect();

    struct St<'a> {
        sets: &'a [FixedBitSet],
        maxes: &'a [usize],
        universe: &'a [usize],
        nodes: u64,
        limit: Option<u64>,
    }
    fn go(st: &mut St, start: usize, slots: usize, hit: &mut Vec<u32>, chosen: &mut Vec<usize>) -> std::result::Result<bool, ()> {
        st.nodes += 1;
        if st.limit.is_some_and(|l| st.nodes > l) {
            return Err(());
        }
        let Some(first) = hit.iter().position(|&c| c == 0) else {
            return Ok(slots == 0);
        };
        if slots == 0 {
            return Ok(false);
        }
        for pos in start..st.universe.len() {
            let e = st.universe[pos];
            if e > st.maxes[first] {
                break;
            }
            // In a minimum hitting set every element hits a set no earlier element hits.
            if !st.sets.iter().zip(hit.iter()).any(|(s, &c)| c == 0 && s.contains(e)) {
                continue;
            }
            for (s, c) in st.sets.iter().zip(hit.iter_mut()) {
                if s.contains(e) {
                    *c += 1;
                }
            }
            chosen.push(e);
            let done = go(st, pos + 1, slots - 1, hit, chosen)?;
            if done {
                return Ok(true);
            }
            chosen.pop();
            for (s, c) in st.sets.iter().zip(hit.iter_mut()) {
                if s.contains(e) {
                    *c -= 1;
                }
            }
        }
        Ok(false)
    }

    let mut st = St {
        sets,
        maxes: &maxes,
        universe: &universe,
        nodes: 0,
        limit: budget.limit,
    };
    for size in 1..=universe.len() {
        let mut hit = vec![0u32; sets.len()];
        let mut chosen = Vec::new();
        match go(&mut st, 0, size, &mut hit, &mut chosen) {
            Ok(true) => return Ok(chosen),
            Ok(false) => {}
            Err(()) => return Err(st.nodes),
        }
    }
    unreachable!("the whole universe hits every set")
}

/// Minimal multiedge usage vectors of all expansions. Parallel instances are
/// interchangeable, so these carry the same packing and cover information as
/// the instance-level edge sets.
#[derive(Debug, Clone)]
pub struct CountFamily {
    /// `(u, v, multiplicity)` per multiedge index.
    pub multiedges: Vec<(VertexId, VertexId, u32)>,
    pub vectors: Vec<Vec<u32>>,
    pub witnesses: Vec<ImmersionModel>,
    pub complete: bool,
}

impl CountFamily {
    fn position(&self) -> HashMap<(VertexId, VertexId), usize> {
        self.multiedges.iter().enumerate().map(|(i, &(u, v, _))| ((u, v), i)).collect()
    }

    /// Moves each chosen witness onto fresh parallel instances.
    fn realise(&self, chosen: &[usize]) -> Vec<ImmersionModel> {
        let pos = self.position();
        let mut next = vec![0u32; self.multiedges.len()];
        chosen
            .iter()
            .map(|&i| {
                let m = &self.witnesses[i];
                let mut remap: HashMap<EdgeRef, EdgeRef> = HashMap::new();
                for e in m.psi.iter().flat_map(|cp| cp.edges.iter()) {
                    if !remap.contains_key(e) {
                        let f = pos[&(e.u, e.v)];
                        next[f] += 1;
                        remap.insert(*e, EdgeRef::new(e.u, e.v, next[f]));
                    }
                }
                let mut out = m.clone();
                for cp in &mut out.psi {
                    for e in &mut cp.edges {
                        *e = remap[e];
                    }
                }
                out
            })
            .collect()
    }
}

pub fn count_family(g: &Multigraph, h: &Multigraph, mode: Mode, budget: Budget) -> Result<CountFamily> {
    let pat = Pattern::new(h)?;
    let host = HostGraph::new(g);
    let multiedges: Vec<(VertexId, VertexId, u32)> = g
        .multiedges()
        .map(|(u, v, m)| if u < v { (u, v, m) } else { (v, u, m) })
        .collect();
    let pos: HashMap<(VertexId, VertexId), usize> =
        multiedges.iter().enumerate().map(|(i, &(u, v, _))| ((u, v), i)).collect();
    let mut found: HashMap<Vec<u32>, ImmersionModel> = HashMap::new();
    let opts = SearchOptions {
        mode,
        budget,
        canonical_instances: true,
        break_symmetry: true,
    };
    let (status, _) = search(&host, &host.all_edges(), &host.all_vertices(), &pat, opts, &mut |m| {
        let mut a = vec![0u32; multiedges.len()];
        for e in m.psi.iter().flat_map(|cp| cp.edges.iter()) {
            a[pos[&(e.u, e.v)]] += 1;
        }
        found.entry(a).or_insert_with(|| m.clone());
        false
    });
    let mut all: Vec<(Vec<u32>, ImmersionModel)> = found.into_iter().collect();
    all.sort_by(|a, b| a.0.iter().sum::<u32>().cmp(&b.0.iter().sum::<u32>()).then_with(|| b.0.cmp(&a.0)));
    let mut vectors: Vec<Vec<u32>> = Vec::new();
    let mut witnesses = Vec::new();
    for (a, m) in all {
        if vectors.iter().all(|b| b.iter().zip(&a).any(|(x, y)| x > y)) {
            vectors.push(a);
            witnesses.push(m);
        }
    }
    Ok(CountFamily {
        multiedges,
        vectors,
        witnesses,
        complete: status != SearchStatus::Exhausted,
    })
}

/// Largest multiset of vectors fitting under the multiplicities. Returns the
/// chosen indices (with repetition) and whether the search completed.
pub fn max_count_packing(fam: &CountFamily, budget: Budget) -> (Vec<usize>, bool) {
    let mut order: Vec<usize> = (0..fam.vectors.len()).collect();
    order.sort_by_key(|&i| fam.vectors[i].iter().sum::<u32>());
    struct St<'a> {
        fam: &'a CountFamily,
        order: &'a [usize],
        best: Vec<usize>,
        nodes: u64,
        limit: Option<u64>,
        exhausted: bool,
    }
    fn go(st: &mut St, i: usize, cap: &mut [u32], free: u32, chosen: &mut Vec<usize>) {
        st.nodes += 1;
        if st.limit.is_some_and(|l| st.nodes > l) {
            st.exhausted = true;
            return;
        }
        if chosen.len() > st.best.len() {
            st.best = chosen.clone();
        }
        if i == st.order.len() {
            return;
        }
        let a = &st.fam.vectors[st.order[i]];
        let weight: u32 = a.iter().sum::<u32>().max(1);
        if chosen.len() + (free / weight) as usize <= st.best.len() {
            return;
        }
        if a.iter().zip(cap.iter()).all(|(x, c)| x <= c) {
            cap.iter_mut().zip(a).for_each(|(c, x)| *c -= x);
            chosen.push(st.order[i]);
            go(st, i, cap, free - weight, chosen);
            chosen.pop();
            cap.iter_mut().zip(a).for_each(|(c, x)| *c += x);
            if st.exhausted {
                return;
            }
        }
        go(st, i + 1, cap, free, chosen);
    }
    let mut cap: Vec<u32> = fam.multiedges.iter().map(|&(_, _, m)| m).collect();
    let free = cap.iter().sum();
    let mut st = St {
        fam,
        order: &order,
        best: Vec::new(),
        nodes: 0,
        limit: budget.limit,
        exhausted: false,
    };
    go(&mut st, 0, &mut cap, free, &mut Vec::new());
    let mut best = st.best;
    best.sort_unstable();
    (best, !st.exhausted)
}

/// Minimum removal counts per multiedge leaving no vector in place, by
/// iterative deepening on the total. `Err` carries the node count.
pub fn min_count_cover(fam: &CountFamily, budget: Budget) -> std::result::Result<Vec<u32>, u64> {
    let mult: Vec<u32> = fam.multiedges.iter().map(|&(_, _, m)| m).collect();
    let mut nodes = 0u64;
    fn go(fam: &CountFamily, mult: &[u32], c: &mut [u32], slack: u32, nodes: &mut u64, limit: Option<u64>) -> std::result::Result<bool, ()> {
        *nodes += 1;
        if limit.is_some_and(|l| *nodes > l) {
            return Err(());
        }
        let alive = |a: &Vec<u32>, c: &[u32]| a.iter().enumerate().all(|(f, &x)| x + c[f] <= mult[f]);
        let Some(a) = fam.vectors.iter().find(|a| alive(a, c)) else {
            return Ok(true);
        };
        for f in 0..a.len() {
            if a[f] == 0 {
                continue;
            }
            let need = mult[f] - a[f] + 1;
            let delta = need - c[f];
            if delta > slack {
                continue;
            }
            let old = c[f];
            c[f] = need;
            if go(fam, mult, c, slack - delta, nodes, limit)? {
                return Ok(true);
            }
            c[f] = old;
        }
        Ok(false)
    }
    let total: u32 = mult.iter().sum();
    for k in 0..=total {
        let mut c = vec![0u32; mult.len()];
        match go(fam, &mult, &mut c, k, &mut nodes, budget.limit) {
            Ok(true) => return Ok(c),
            Ok(false) => {}
            Err(()) => return Err(nodes),
        }
    }
    unreachable!("removing every edge leaves nothing")
}

/// Maximum packing of pairwise disjoint expansions.
pub fn max_packing(g: &Multigraph, h: &Multigraph, mode: Mode, disjointness: Disjointness, budget: Budget) -> Result<Packing> {
    if disjointness == Disjointness::Edge {
        let fam = count_family(g, h, mode, budget)?;
        let (chosen, complete) = max_count_packing(&fam, budget);
        return Ok(Packing {
            models: fam.realise(&chosen),
            exact: complete && fam.complete,
        });
    }
    let (host, fam) = expansion_family(g, h, mode, disjointness, budget)?;
    let (chosen, complete) = max_set_packing(&fam.sets, host.n(), budget);
    Ok(Packing {
        models: chosen.into_iter().map(|i| fam.witnesses[i].clone()).collect(),
        exact: complete && fam.complete,
    })
}

/// Minimum cover, exact.
pub fn min_cover(g: &Multigraph, h: &Multigraph, mode: Mode, disjointness: Disjointness, budget: Budget) -> Result<CoverSet> {
    let exhausted = || Error::BudgetExhausted(budget.limit.unwrap_or(u64::MAX));
    if disjointness == Disjointness::Edge {
        let fam = count_family(g, h, mode, budget)?;
        if !fam.complete {
            return Err(exhausted());
        }
        let c = min_count_cover(&fam, budget).map_err(Error::BudgetExhausted)?;
        let edges = fam
            .multiedges
            .iter()
            .zip(&c)
            .flat_map(|(&(u, v, _), &k)| (1..=k).map(move |i| EdgeRef::new(u, v, i)))
            .collect();
        return Ok(CoverSet::Edges(edges));
    }
    let (host, fam) = expansion_family(g, h, mode, disjointness, budget)?;
    if !fam.complete {
        return Err(exhausted());
    }
    let chosen = min_hitting_set(&fam.sets, budget).map_err(Error::BudgetExhausted)?;
    Ok(CoverSet::Vertices(chosen.into_iter().map(|v| host.ids[v]).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, cycle_graph, theta};
    use crate::immersion::model::pairwise_disjoint;
    use crate::immersion::search::contains;

    fn two_triangles() -> Multigraph {
        Multigraph::from_edges(6, &[(1, 2, 1), (2, 3, 1), (1, 3, 1), (4, 5, 1), (5, 6, 1), (4, 6, 1)]).unwrap()
    }

    #[test]
    fn theta2_values() {
        let u = Budget::UNLIMITED;
        let p = max_packing(&two_triangles(), &theta(2), Mode::Immersion, Disjointness::Edge, u).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.exact && pairwise_disjoint(&p.models, Disjointness::Edge));
        let c6 = cycle_graph(6).unwrap();
        assert_eq!(max_packing(&c6, &theta(2), Mode::Immersion, Disjointness::Edge, u).unwrap().len(), 1);
        assert_eq!(min_cover(&c6, &theta(2), Mode::Immersion, Disjointness::Edge, u).unwrap().len(), 1);
        assert_eq!(min_cover(&two_triangles(), &theta(2), Mode::Immersion, Disjointness::Edge, u).unwrap().len(), 2);
    }

    #[test]
    fn cover_is_lexicographically_first_and_valid() {
        let c = min_cover(&cycle_graph(4).unwrap(), &theta(2), Mode::Immersion, Disjointness::Edge, Budget::UNLIMITED).unwrap();
        let first = cycle_graph(4).unwrap().edge_refs().next().unwrap();
        assert_eq!(c, CoverSet::Edges(vec![first]));
        let k4 = complete_graph(4);
        let c = min_cover(&k4, &theta(2), Mode::Immersion, Disjointness::Edge, Budget::UNLIMITED).unwrap();
        assert!(!contains(&c.remove_from(&k4).unwrap(), &theta(2), Mode::Immersion).unwrap());
    }

    #[test]
    fn parallel_host_edges_all_need_covering() {
        let g = theta(3);
        let c = min_cover(&g, &theta(2), Mode::Immersion, Disjointness::Edge, Budget::UNLIMITED).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn hitting_set_small() {
        let mk = |xs: &[usize]| {
            let mut s = FixedBitSet::with_capacity(6);
            xs.iter().for_each(|&x| s.insert(x));
            s
        };
        let sets = vec![mk(&[0, 1]), mk(&[1, 2]), mk(&[3, 4])];
        assert_eq!(min_hitting_set(&sets, Budget::UNLIMITED).unwrap(), vec![1, 3]);
        let (p, ok) = max_set_packing(&sets, 6, Budget::UNLIMITED);
        assert!(ok);
        assert_eq!(p.len(), 2);
    }
}
