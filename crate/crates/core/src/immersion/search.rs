use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::host::HostGraph;
use super::model::{CertifyingPath, ImmersionModel, Mode};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeRef, Multigraph, VertexId};

/// Search-node budget. `None` means unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Budget {
    pub limit: Option<u64>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget { limit: None };

    pub fn nodes(n: u64) -> Self {
        Budget { limit: Some(n) }
    }

    pub fn is_unlimited(&self) -> bool {
        self.limit.is_none()
    }
}

/// Three-valued search result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(ImmersionModel),
    NoneExists,
    BudgetExhausted,
}

impl SearchOutcome {
    pub fn into_result(self, budget: Budget) -> Result<Option<ImmersionModel>> {
        match self {
            SearchOutcome::Found(m) => Ok(Some(m)),
            SearchOutcome::NoneExists => Ok(None),
            SearchOutcome::BudgetExhausted => Err(Error::BudgetExhausted(budget.limit.unwrap_or(u64::MAX))),
        }
    }
}

/// How an enumeration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Completed,
    Stopped,
    Exhausted,
}

/// Options for [`search`].
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub mode: Mode,
    pub budget: Budget,
    /// Only try the lowest unused instance of a parallel host edge. Sound for
    /// existence, but hides instance-permuted copies of an expansion.
    pub canonical_instances: bool,
    /// Report one model per orbit of pattern automorphisms. Every expansion
    /// edge set is still reached.
    pub break_symmetry: bool,
}

#[derive(Debug, Clone)]
struct RouteItem {
    pattern_edge: EdgeRef,
    from: usize,
    to: usize,
    parallel_with_prev: bool,
}

#[derive(Debug, Clone)]
enum Step {
    Place(usize),
    Route(usize),
}

/// Pattern graph preprocessed into a placement and routing schedule.
#[derive(Debug, Clone)]
pub struct Pattern {
    ids: Vec<VertexId>,
    mdeg: Vec<u32>,
    items: Vec<RouteItem>,
    steps: Vec<Step>,
    /// Earlier-placed neighbour used to seed candidate generation.
    anchor: Vec<Option<usize>>,
    /// Pairs `(a, b)` such that one model per automorphism orbit has `φ(a) < φ(b)`.
    less: Vec<(usize, usize)>,
}

/// Automorphisms beyond which symmetry breaking is skipped.
const AUTOMORPHISM_CAP: usize = 20_000;

/// All multiplicity-preserving permutations, or `None` past the cap.
fn automorphisms(mult: &[Vec<u32>], mdeg: &[u32]) -> Option<Vec<Vec<usize>>> {
    fn go(
        i: usize,
        mult: &[Vec<u32>],
        mdeg: &[u32],
        perm: &mut Vec<usize>,
        taken: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        let n = mult.len();
        if i == n {
            out.push(perm.clone());
            return out.len() <= AUTOMORPHISM_CAP;
        }
        for c in 0..n {
            if taken[c] || mdeg[c] != mdeg[i] || (0..i).any(|j| mult[i][j] != mult[c][perm[j]]) {
                continue;
            }
            taken[c] = true;
            perm.push(c);
            let ok = go(i + 1, mult, mdeg, perm, taken, out);
            perm.pop();
            taken[c] = false;
            if !ok {
                return false;
            }
        }
        true
    }
    let mut out = Vec::new();
    let ok = go(0, mult, mdeg, &mut Vec::new(), &mut vec![false; mult.len()], &mut out);
    ok.then_some(out)
}

/// Ordering constraints along a stabiliser chain, taking vertices in `order`.
fn symmetry_conditions(mut group: Vec<Vec<usize>>, order: &[usize]) -> Vec<(usize, usize)> {
    let mut less = Vec::new();
    for &v in order {
        let orbit: BTreeSet<usize> = group.iter().map(|p| p[v]).collect();
        for &w in &orbit {
            if w != v {
                less.push((v, w));
            }
        }
        group.retain(|p| p[v] == v);
        if group.len() <= 1 {
            break;
        }
    }
    less
}

impl Pattern {
    pub fn new(h: &Multigraph) -> Result<Self> {
        if h.edge_count() == 0 || !h.is_connected() {
            return Err(Error::BadPattern);
        }
        let ids: Vec<VertexId> = h.vertices().collect();
        let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = ids.len();
        let mdeg: Vec<u32> = ids.iter().map(|&v| h.mdeg(v)).collect();
        let mut mult = vec![vec![0u32; n]; n];
        for (u, v, m) in h.multiedges() {
            mult[index[&u]][index[&v]] = m;
            mult[index[&v]][index[&u]] = m;
        }

        let first = (0..n).max_by_key(|&i| (mdeg[i], std::cmp::Reverse(i))).expect("non-empty pattern");
        let mut order = vec![first];
        let mut placed = vec![false; n];
        placed[first] = true;
        while order.len() < n {
            let next = (0..n)
                .filter(|&i| !placed[i])
                .max_by_key(|&i| {
                    let links: u32 = order.iter().map(|&j| mult[i][j]).sum();
                    // Prefer staying next to the most recently placed vertices.
                    let recent = order.iter().rposition(|&j| mult[i][j] > 0);
                    (links, recent, mdeg[i], std::cmp::Reverse(i))
                })
                .expect("unplaced vertex");
            placed[next] = true;
            order.push(next);
        }

        let mut items = Vec::new();
        let mut steps = Vec::new();
        let mut anchor = vec![None; n];
        for (pos, &x) in order.iter().enumerate() {
            steps.push(Step::Place(x));
            anchor[x] = order[..pos].iter().copied().find(|&y| mult[x][y] > 0);
            for &y in &order[..pos] {
                let (a, b) = if ids[x] < ids[y] { (x, y) } else { (y, x) };
                for i in 1..=mult[x][y] {
                    steps.push(Step::Route(items.len()));
                    items.push(RouteItem {
                        pattern_edge: EdgeRef::new(ids[a], ids[b], i),
                        from: a,
                        to: b,
                        parallel_with_prev: i > 1,
                    });
                }
            }
        }
        let less = automorphisms(&mult, &mdeg).map_or_else(Vec::new, |g| symmetry_conditions(g, &order));
        Ok(Pattern {
            ids,
            mdeg,
            items,
            steps,
            anchor,
            less,
        })
    }
}

struct Engine<'a, 'v> {
    host: &'a HostGraph,
    alive: &'a FixedBitSet,
    allowed: &'a FixedBitSet,
    pat: &'a Pattern,
    opts: SearchOptions,
    visit: &'v mut dyn FnMut(&ImmersionModel) -> bool,
    nodes: u64,
    exhausted: bool,
    phi: Vec<Option<usize>>,
    branch: Vec<bool>,
    used: Vec<bool>,
    internal: Vec<u32>,
    free_deg: Vec<u32>,
    remaining: Vec<u32>,
    paths: Vec<Vec<usize>>,
}

impl Engine<'_, '_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if let Some(limit) = self.opts.budget.limit {
            if self.nodes > limit {
                self.exhausted = true;
            }
        }
        self.exhausted
    }

    fn strong(&self) -> bool {
        self.opts.mode != Mode::Immersion
    }

    /// Whether `w` may be an internal vertex of a new path.
    fn passable(&self, w: usize) -> bool {
        match self.opts.mode {
            Mode::Immersion => true,
            Mode::StrongImmersion => !self.branch[w],
            Mode::TopologicalMinor => !self.branch[w] && self.internal[w] == 0,
        }
    }

    /// BFS distances from `src` over free edges, expanding only through passable vertices.
    fn distances(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.host.n()];
        dist[src] = 0;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            if x != src && !self.passable(x) {
                continue;
            }
            for &(e, y) in &self.host.inc[x] {
                if self.alive.contains(e) && !self.used[e] && self.allowed.contains(y) && dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    fn degrees_feasible(&self) -> bool {
        self.phi
            .iter()
            .zip(&self.remaining)
            .all(|(p, &r)| p.map_or(true, |v| self.free_deg[v] >= r))
    }

    fn step(&mut self, k: usize) -> bool {
        if self.tick() {
            return true;
        }
        if k == self.pat.steps.len() {
            let model = self.model();
            return (self.visit)(&model);
        }
        match self.pat.steps[k] {
            Step::Place(x) => self.place(k, x),
            Step::Route(i) => self.route(k, i),
        }
    }

    fn place(&mut self, k: usize, x: usize) -> bool {
        let need = self.pat.mdeg[x];
        let ok = |s: &Self, v: usize| {
            !s.branch[v] && s.free_deg[v] >= need && (!s.strong() || s.internal[v] == 0)
        };
        let mut cands: Vec<(u32, usize)> = match self.pat.anchor[x] {
            None => self.allowed.ones().filter(|&v| ok(self, v)).map(|v| (0, v)).collect(),
            Some(y) => {
                let dist = self.distances(self.phi[y].expect("anchor placed"));
                (0..self.host.n())
                    .filter(|&v| dist[v] != u32::MAX && ok(self, v))
                    .map(|v| (dist[v], v))
                    .collect()
            }
        };
        cands.sort_unstable();
        if self.opts.break_symmetry {
            let phi = &self.phi;
            cands.retain(|&(_, v)| {
                self.pat.less.iter().all(|&(a, b)| {
                    if a == x {
                        phi[b].map_or(true, |pb| v < pb)
                    } else if b == x {
                        phi[a].map_or(true, |pa| pa < v)
                    } else {
                        true
                    }
                })
            });
        }
        for (_, v) in cands {
            self.phi[x] = Some(v);
            self.branch[v] = true;
            let stop = self.step(k + 1);
            self.branch[v] = false;
            self.phi[x] = None;
            if stop {
                return true;
            }
        }
        false
    }

    fn route(&mut self, k: usize, i: usize) -> bool {
        let item = &self.pat.items[i];
        let s = self.phi[item.from].expect("placed");
        let t = self.phi[item.to].expect("placed");
        let dist = self.distances(t);
        if dist[s] == u32::MAX {
            return false;
        }
        let bound = if item.parallel_with_prev {
            Some(self.paths[i - 1][0])
        } else {
            None
        };
        let mut on_path = vec![false; self.host.n()];
        on_path[s] = true;
        let mut path = Vec::new();
        self.extend(k, i, s, t, &dist, bound, &mut on_path, &mut path)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &mut self,
        k: usize,
        i: usize,
        cur: usize,
        t: usize,
        dist: &[u32],
        bound: Option<usize>,
        on_path: &mut [bool],
        path: &mut Vec<usize>,
    ) -> bool {
        if self.tick() {
            return true;
        }
        let mut options: Vec<(u32, usize, usize)> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for &(e, y) in &self.host.inc[cur] {
            if !self.alive.contains(e) || self.used[e] || !self.allowed.contains(y) || on_path[y] {
                continue;
            }
            if self.opts.canonical_instances {
                if seen.contains(&y) {
                    continue;
                }
                seen.push(y);
            }
            if path.is_empty() && bound.is_some_and(|b| e <= b) {
                continue;
            }
            if y != t && (!self.passable(y) || dist[y] == u32::MAX) {
                continue;
            }
            options.push((if y == t { 0 } else { dist[y] }, e, y));
        }
        options.sort_unstable();
        for (_, e, y) in options {
            path.push(e);
            let stop = if y == t {
                self.commit(k, i, path)
            } else {
                on_path[y] = true;
                let stop = self.extend(k, i, y, t, dist, bound, on_path, path);
                on_path[y] = false;
                stop
            };
            path.pop();
            if stop {
                return true;
            }
        }
        false
    }

    fn commit(&mut self, k: usize, i: usize, path: &[usize]) -> bool {
        let item = &self.pat.items[i];
        let (a, b) = (item.from, item.to);
        let mut cur = self.phi[a].expect("placed");
        let mut interior = Vec::with_capacity(path.len().saturating_sub(1));
        for (j, &e) in path.iter().enumerate() {
            self.used[e] = true;
            let (x, y) = self.host.ends[e];
            self.free_deg[x] -= 1;
            self.free_deg[y] -= 1;
            cur = if x == cur { y } else { x };
            if j + 1 < path.len() {
                interior.push(cur);
            }
        }
        for &w in &interior {
            self.internal[w] += 1;
        }
        self.remaining[a] -= 1;
        self.remaining[b] -= 1;
        self.paths[i] = path.to_vec();

        let stop = self.degrees_feasible() && self.step(k + 1);

        self.remaining[a] += 1;
        self.remaining[b] += 1;
        for &w in &interior {
            self.internal[w] -= 1;
        }
        for &e in path {
            self.used[e] = false;
            let (x, y) = self.host.ends[e];
            self.free_deg[x] += 1;
            self.free_deg[y] += 1;
        }
        stop
    }

    fn model(&self) -> ImmersionModel {
        let phi: BTreeMap<VertexId, VertexId> = self
            .phi
            .iter()
            .enumerate()
            .map(|(x, v)| (self.pat.ids[x], self.host.ids[v.expect("complete model")]))
            .collect();
        let psi = self
            .pat
            .items
            .iter()
            .zip(&self.paths)
            .map(|(item, p)| CertifyingPath {
                pattern_edge: item.pattern_edge,
                edges: p.iter().map(|&e| self.host.refs[e]).collect(),
            })
            .collect();
        ImmersionModel {
            mode: self.opts.mode,
            phi,
            psi,
        }
    }
}

/// Enumerates models of `pat` inside the subgraph of `host` spanned by the
/// `allowed` vertices and `alive` edges. `visit` returns `true` to stop.
/// Returns the status and the number of search nodes spent.
pub fn search(
    host: &HostGraph,
    alive: &FixedBitSet,
    allowed: &FixedBitSet,
    pat: &Pattern,
    opts: SearchOptions,
    visit: &mut dyn FnMut(&ImmersionModel) -> bool,
) -> (SearchStatus, u64) {
    let n = host.n();
    let mut free_deg = vec![0u32; n];
    for e in alive.ones() {
        let (x, y) = host.ends[e];
        if allowed.contains(x) && allowed.contains(y) {
            free_deg[x] += 1;
            free_deg[y] += 1;
        }
    }
    // Edges leaving the allowed set are never usable.
    let mut live = alive.clone();
    for e in alive.ones() {
        let (x, y) = host.ends[e];
        if !allowed.contains(x) || !allowed.contains(y) {
            live.set(e, false);
        }
    }
    let mut engine = Engine {
        host,
        alive: &live,
        allowed,
        pat,
        opts,
        visit,
        nodes: 0,
        exhausted: false,
        phi: vec![None; pat.ids.len()],
        branch: vec![false; n],
        used: vec![false; host.m()],
        internal: vec![0; n],
        free_deg,
        remaining: pat.mdeg.clone(),
        paths: vec![Vec::new(); pat.items.len()],
    };
    let stopped = engine.step(0);
    let status = if engine.exhausted {
        SearchStatus::Exhausted
    } else if stopped {
        SearchStatus::Stopped
    } else {
        SearchStatus::Completed
    };
    (status, engine.nodes)
}

/// First model inside a masked subgraph of `host`.
pub fn find_in(
    host: &HostGraph,
    alive: &FixedBitSet,
    allowed: &FixedBitSet,
    pat: &Pattern,
    mode: Mode,
    budget: Budget,
) -> SearchOutcome {
    let mut found = None;
    let opts = SearchOptions {
        mode,
        budget,
        canonical_instances: true,
        break_symmetry: true,
    };
    let (status, _) = search(host, alive, allowed, pat, opts, &mut |m| {
        found = Some(m.clone());
        true
    });
    match (status, found) {
        (_, Some(m)) => SearchOutcome::Found(m),
        (SearchStatus::Exhausted, None) => SearchOutcome::BudgetExhausted,
        _ => SearchOutcome::NoneExists,
    }
}

/// Three-valued expansion search over the whole of `g`.
pub fn search_expansion(g: &Multigraph, h: &Multigraph, mode: Mode, budget: Budget) -> Result<SearchOutcome> {
    let pat = Pattern::new(h)?;
    let host = HostGraph::new(g);
    Ok(find_in(&host, &host.all_edges(), &host.all_vertices(), &pat, mode, budget))
}

/// A model of `h` in `g`, `None` if none exists, or [`Error::BudgetExhausted`].
pub fn find_expansion(g: &Multigraph, h: &Multigraph, mode: Mode, budget: Budget) -> Result<Option<ImmersionModel>> {
    search_expansion(g, h, mode, budget)?.into_result(budget)
}

/// Whether `g` contains `h` in the given mode, exhaustively.
pub fn contains(g: &Multigraph, h: &Multigraph, mode: Mode) -> Result<bool> {
    Ok(find_expansion(g, h, mode, Budget::UNLIMITED)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, cycle_graph, path_graph, star, theta, wall};
    use crate::immersion::model::validate_model;

    fn check(g: &Multigraph, h: &Multigraph, mode: Mode) -> Option<ImmersionModel> {
        let m = find_expansion(g, h, mode, Budget::UNLIMITED).unwrap();
        if let Some(m) = &m {
            assert!(validate_model(g, h, m).unwrap().is_valid(), "{m:?}");
        }
        m
    }

    #[test]
    fn theta2_in_cycles() {
        for n in 3..8 {
            let g = cycle_graph(n).unwrap();
            assert!(check(&g, &theta(2), Mode::TopologicalMinor).is_some());
        }
        assert!(check(&path_graph(5), &theta(2), Mode::Immersion).is_none());
    }

    #[test]
    fn k4_in_wall4() {
        let w = wall(4).unwrap();
        assert!(check(&w.graph, &complete_graph(4), Mode::Immersion).is_some());
    }

    #[test]
    fn degree_pruning_rejects_high_degree_pattern() {
        let w = wall(3).unwrap();
        assert!(check(&w.graph, &star(4), Mode::Immersion).is_none());
    }

    #[test]
    fn immersion_but_not_topological() {
        // The cut vertex of the bowtie is internal to two paths of any C4 model.
        let bowtie = Multigraph::from_edges(5, &[(1, 2, 1), (2, 3, 1), (1, 3, 1), (3, 4, 1), (4, 5, 1), (3, 5, 1)]).unwrap();
        let c4 = cycle_graph(4).unwrap();
        assert!(check(&bowtie, &c4, Mode::Immersion).is_some());
        assert!(check(&bowtie, &c4, Mode::StrongImmersion).is_some());
        assert!(check(&bowtie, &c4, Mode::TopologicalMinor).is_none());
    }

    #[test]
    fn budget_is_three_valued() {
        let w = wall(3).unwrap();
        let out = search_expansion(&w.graph, &complete_graph(4), Mode::Immersion, Budget::nodes(3)).unwrap();
        assert_eq!(out, SearchOutcome::BudgetExhausted);
        assert!(matches!(
            find_expansion(&w.graph, &complete_graph(4), Mode::Immersion, Budget::nodes(3)),
            Err(Error::BudgetExhausted(3))
        ));
    }

    #[test]
    fn disconnected_pattern_rejected() {
        let h = Multigraph::from_edges(4, &[(1, 2, 1), (3, 4, 1)]).unwrap();
        assert!(matches!(Pattern::new(&h), Err(Error::BadPattern)));
    }
}
