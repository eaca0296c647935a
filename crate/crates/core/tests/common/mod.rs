//! Brute-force oracles written independently of the search code: every
//! injection of the pattern's vertices, then every system of simple paths.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use immersion_ep::immersion::Mode;
use immersion_ep::{EdgeRef, Multigraph, VertexId};

/// Edge set and vertex set of one expansion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NaiveExpansion {
    pub edges: BTreeSet<EdgeRef>,
    pub vertices: BTreeSet<VertexId>,
}

struct Ctx<'a> {
    g: &'a Multigraph,
    mode: Mode,
    targets: Vec<(VertexId, VertexId)>,
    branch: BTreeSet<VertexId>,
    used: BTreeSet<EdgeRef>,
    internal: BTreeSet<VertexId>,
    path_vertices: BTreeSet<VertexId>,
    out: HashSet<NaiveExpansion>,
    stop_at_first: bool,
}

impl Ctx<'_> {
    fn route(&mut self, k: usize) {
        if self.stop_at_first && !self.out.is_empty() {
            return;
        }
        if k == self.targets.len() {
            let mut vertices = self.branch.clone();
            vertices.extend(self.path_vertices.iter().copied());
            self.out.insert(NaiveExpansion {
                edges: self.used.clone(),
                vertices,
            });
            return;
        }
        let (s, t) = self.targets[k];
        let mut trail = vec![s];
        let mut edges = Vec::new();
        self.walk(k, s, t, &mut trail, &mut edges);
    }

    fn walk(&mut self, k: usize, at: VertexId, t: VertexId, trail: &mut Vec<VertexId>, edges: &mut Vec<EdgeRef>) {
        if at == t {
            let inner: Vec<VertexId> = trail[1..trail.len() - 1].to_vec();
            if self.mode == Mode::TopologicalMinor && inner.iter().any(|v| self.internal.contains(v)) {
                return;
            }
            let saved_path = self.path_vertices.clone();
            let saved_internal = self.internal.clone();
            self.path_vertices.extend(trail.iter().copied());
            self.internal.extend(inner);
            self.route(k + 1);
            self.path_vertices = saved_path;
            self.internal = saved_internal;
            return;
        }
        let nbrs: Vec<(VertexId, u32)> = self.g.neighbors(at).collect();
        for (w, m) in nbrs {
            if trail.contains(&w) {
                continue;
            }
            if w != t && self.mode != Mode::Immersion && self.branch.contains(&w) {
                continue;
            }
            for i in 1..=m {
                let e = EdgeRef::new(at, w, i);
                if self.used.contains(&e) {
                    continue;
                }
                self.used.insert(e);
                trail.push(w);
                edges.push(e);
                self.walk(k, w, t, trail, edges);
                edges.pop();
                trail.pop();
                self.used.remove(&e);
            }
        }
    }
}

fn injections(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in 0..n {
        if !cur.contains(&i) {
            cur.push(i);
            injections(n, k, cur, out);
            cur.pop();
        }
    }
}

fn run(g: &Multigraph, h: &Multigraph, mode: Mode, stop_at_first: bool) -> HashSet<NaiveExpansion> {
    let gv: Vec<VertexId> = g.vertices().collect();
    let hv: Vec<VertexId> = h.vertices().collect();
    let mut maps = Vec::new();
    if hv.len() <= gv.len() {
        injections(gv.len(), hv.len(), &mut Vec::new(), &mut maps);
    }
    let mut ctx = Ctx {
        g,
        mode,
        targets: Vec::new(),
        branch: BTreeSet::new(),
        used: BTreeSet::new(),
        internal: BTreeSet::new(),
        path_vertices: BTreeSet::new(),
        out: HashSet::new(),
        stop_at_first,
    };
    for map in maps {
        let phi = |x: VertexId| gv[map[hv.iter().position(|&y| y == x).unwrap()]];
        ctx.targets = h.edge_refs().map(|e| (phi(e.u), phi(e.v))).collect();
        ctx.branch = map.iter().map(|&i| gv[i]).collect();
        ctx.route(0);
        if stop_at_first && !ctx.out.is_empty() {
            break;
        }
    }
    ctx.out
}

/// Every distinct expansion of `h` in `g`.
pub fn naive_expansions(g: &Multigraph, h: &Multigraph, mode: Mode) -> Vec<NaiveExpansion> {
    let mut v: Vec<NaiveExpansion> = run(g, h, mode, false).into_iter().collect();
    v.sort();
    v
}

pub fn naive_contains(g: &Multigraph, h: &Multigraph, mode: Mode) -> bool {
    !run(g, h, mode, true).is_empty()
}

fn max_disjoint<T: Ord>(sets: &[&BTreeSet<T>], taken: &mut Vec<usize>, from: usize, best: &mut usize) {
    *best = (*best).max(taken.len());
    for i in from..sets.len() {
        if taken.iter().all(|&j| sets[j].is_disjoint(sets[i])) {
            taken.push(i);
            max_disjoint(sets, taken, i + 1, best);
            taken.pop();
        }
    }
}

/// Maximum number of pairwise edge-disjoint expansions.
pub fn naive_edge_packing(g: &Multigraph, h: &Multigraph) -> usize {
    let exps = naive_expansions(g, h, Mode::Immersion);
    let sets: Vec<&BTreeSet<EdgeRef>> = exps.iter().map(|x| &x.edges).collect();
    let mut best = 0;
    max_disjoint(&sets, &mut Vec::new(), 0, &mut best);
    best
}

/// Maximum number of pairwise vertex-disjoint expansions.
pub fn naive_vertex_packing(g: &Multigraph, h: &Multigraph) -> usize {
    let exps = naive_expansions(g, h, Mode::Immersion);
    let sets: Vec<&BTreeSet<VertexId>> = exps.iter().map(|x| &x.vertices).collect();
    let mut best = 0;
    max_disjoint(&sets, &mut Vec::new(), 0, &mut best);
    best
}

fn subsets_of_size<T: Copy>(items: &[T], k: usize, from: usize, cur: &mut Vec<T>, f: &mut dyn FnMut(&[T]) -> bool) -> bool {
    if cur.len() == k {
        return f(cur);
    }
    for i in from..items.len() {
        cur.push(items[i]);
        if subsets_of_size(items, k, i + 1, cur, f) {
            return true;
        }
        cur.pop();
    }
    false
}

/// Size of a smallest edge set meeting every expansion, by increasing size.
pub fn naive_edge_cover(g: &Multigraph, h: &Multigraph) -> usize {
    let exps = naive_expansions(g, h, Mode::Immersion);
    let edges: Vec<EdgeRef> = g.edge_refs().collect();
    for k in 0..=edges.len() {
        let hit = subsets_of_size(&edges, k, 0, &mut Vec::new(), &mut |s| {
            exps.iter().all(|x| s.iter().any(|e| x.edges.contains(e)))
        });
        if hit {
            return k;
        }
    }
    unreachable!("removing every edge kills every expansion")
}

/// Size of a smallest vertex set meeting every expansion.
pub fn naive_vertex_cover(g: &Multigraph, h: &Multigraph) -> usize {
    let exps = naive_expansions(g, h, Mode::Immersion);
    let vs: Vec<VertexId> = g.vertices().collect();
    for k in 0..=vs.len() {
        let hit = subsets_of_size(&vs, k, 0, &mut Vec::new(), &mut |s| {
            exps.iter().all(|x| s.iter().any(|v| x.vertices.contains(v)))
        });
        if hit {
            return k;
        }
    }
    unreachable!()
}

/// Treewidth as the minimum over all elimination orderings of the largest
/// later-neighbourhood in the fill-in graph.
pub fn ordering_treewidth(g: &Multigraph) -> usize {
    let vs: Vec<VertexId> = g.vertices().collect();
    let n = vs.len();
    if n == 0 {
        return 0;
    }
    let mut adj = vec![vec![false; n]; n];
    for (u, v, _) in g.multiedges() {
        let (a, b) = (vs.iter().position(|&x| x == u).unwrap(), vs.iter().position(|&x| x == v).unwrap());
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = n - 1;
    permute(&mut perm, 0, &mut |order| {
        let mut a = adj.clone();
        let mut eliminated = vec![false; n];
        let mut width = 0;
        for &v in order {
            let nb: Vec<usize> = (0..n).filter(|&w| !eliminated[w] && a[v][w]).collect();
            width = width.max(nb.len());
            if width >= best {
                return;
            }
            for &x in &nb {
                for &y in &nb {
                    if x != y {
                        a[x][y] = true;
                    }
                }
            }
            eliminated[v] = true;
        }
        best = best.min(width);
    });
    best
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// Small patterns used across the suites.
pub fn patterns() -> Vec<(&'static str, Multigraph)> {
    use immersion_ep::generators::{cycle_graph, path_graph, star, theta};
    vec![
        ("theta2", theta(2)),
        ("theta3", theta(3)),
        ("path3", path_graph(3)),
        ("triangle", cycle_graph(3).unwrap()),
        ("claw", star(3)),
    ]
}
