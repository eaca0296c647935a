use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{validate_tcd, RootedTreeCutDecomposition, RootedTreePartition};
use crate::error::{Error, Result};
use crate::immersion::Budget;
use crate::multigraph::{Multigraph, VertexId};

pub const DEFAULT_WIDTH_CAP: usize = 8;
pub const DEFAULT_TREEWIDTH_CAP: usize = 10;

/// Vertex cap and node budget for the exact width searches.
#[derive(Debug, Clone, Copy)]
pub struct ExactConfig {
    pub cap: usize,
    pub budget: Budget,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            cap: DEFAULT_WIDTH_CAP,
            budget: Budget::UNLIMITED,
        }
    }
}

/// Bitmask view of a graph with at most 32 vertices.
struct Small {
    ids: Vec<VertexId>,
    mult: Vec<Vec<u32>>,
    adj: Vec<u32>,
}

impl Small {
    fn new(g: &Multigraph, cap: usize) -> Result<Self> {
        let n = g.vertex_count();
        if n > cap || n > 32 {
            return Err(Error::TooLarge { n, cap: cap.min(32) });
        }
        let ids: Vec<VertexId> = g.vertices().collect();
        let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut mult = vec![vec![0; n]; n];
        let mut adj = vec![0u32; n];
        for (u, v, m) in g.multiedges() {
            let (a, b) = (index[&u], index[&v]);
            mult[a][b] = m;
            mult[b][a] = m;
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(Small { ids, mult, adj })
    }

    fn n(&self) -> usize {
        self.ids.len()
    }

    fn full(&self) -> u32 {
        if self.n() == 32 {
            u32::MAX
        } else {
            (1u32 << self.n()) - 1
        }
    }

    fn edges_between(&self, a: u32, b: u32) -> usize {
        bits(a).map(|i| bits(b).map(|j| self.mult[i][j] as usize).sum::<usize>()).sum()
    }

    fn neighbourhood(&self, s: u32) -> u32 {
        bits(s).fold(0, |acc, i| acc | self.adj[i]) & !s
    }

    fn components(&self, s: u32) -> Vec<u32> {
        let mut left = s;
        let mut out = Vec::new();
        while left != 0 {
            let mut comp = left & left.wrapping_neg();
            loop {
                let grown = comp | (self.neighbourhood(comp) & s);
                if grown == comp {
                    break;
                }
                comp = grown;
            }
            out.push(comp);
            left &= !comp;
        }
        out
    }

    fn set(&self, mask: u32) -> BTreeSet<VertexId> {
        bits(mask).map(|i| self.ids[i]).collect()
    }
}

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Submasks of `m` in increasing numeric order, `0` included.
fn submasks(m: u32) -> impl Iterator<Item = u32> {
    let mut s: u32 = 0;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let cur = s;
        if s == m {
            done = true;
        } else {
            s = (s.wrapping_sub(m)) & m;
        }
        Some(cur)
    })
}

/// Vertex count of the 3-center of a multigraph given as a matrix, keeping the
/// first `keep` vertices.
fn center_size(mut m: Vec<Vec<u32>>, keep: usize) -> usize {
    let k = m.len();
    let mut alive = vec![true; k];
    loop {
        let mut changed = false;
        for v in keep..k {
            if !alive[v] {
                continue;
            }
            let deg: u32 = (0..k).filter(|&u| alive[u]).map(|u| m[v][u]).sum();
            if deg > 2 {
                continue;
            }
            let nbrs: Vec<usize> = (0..k).filter(|&u| alive[u] && m[v][u] > 0).collect();
            if let [a, b] = nbrs[..] {
                m[a][b] += 1;
                m[b][a] += 1;
            }
            for u in 0..k {
                m[v][u] = 0;
                m[u][v] = 0;
            }
            alive[v] = false;
            changed = true;
        }
        if !changed {
            return alive.iter().filter(|&&a| a).count();
        }
    }
}

struct Counter {
    nodes: u64,
    limit: Option<u64>,
}

impl Counter {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        match self.limit {
            Some(l) if self.nodes > l => Err(Error::BudgetExhausted(l)),
            _ => Ok(()),
        }
    }
}

struct TcwSearch<'a> {
    sg: &'a Small,
    w: usize,
    memo: HashMap<u32, Option<(u32, Vec<u32>)>>,
    counter: &'a mut Counter,
}

impl TcwSearch<'_> {
    fn cost(&self, y: u32, x: u32, blocks: &[u32]) -> usize {
        let xs: Vec<usize> = bits(x).collect();
        let outside = self.sg.full() & !y;
        let mut classes: Vec<u32> = xs.iter().map(|&i| 1 << i).collect();
        classes.extend_from_slice(blocks);
        if outside != 0 {
            classes.push(outside);
        }
        let k = classes.len();
        let mut m = vec![vec![0u32; k]; k];
        for a in 0..k {
            for b in a + 1..k {
                let e = self.sg.edges_between(classes[a], classes[b]) as u32;
                m[a][b] = e;
                m[b][a] = e;
            }
        }
        center_size(m, xs.len())
    }

    fn feasible(&mut self, y: u32) -> Result<bool> {
        if let Some(r) = self.memo.get(&y) {
            return Ok(r.is_some());
        }
        self.counter.tick()?;
        let mut found = None;
        for x in submasks(y) {
            if x.count_ones() as usize > self.w {
                continue;
            }
            let mut blocks = Vec::new();
            if self.partitions(y, x, y & !x, &mut blocks)? {
                found = Some((x, blocks));
                break;
            }
        }
        let ok = found.is_some();
        self.memo.insert(y, found);
        Ok(ok)
    }

    /// Splits `rest` into feasible child blocks such that the torso at the node fits.
    fn partitions(&mut self, y: u32, x: u32, rest: u32, blocks: &mut Vec<u32>) -> Result<bool> {
        if rest == 0 {
            return Ok(!(x == 0 && blocks.len() < 2) && self.cost(y, x, blocks) <= self.w);
        }
        let low = rest & rest.wrapping_neg();
        for extra in submasks(rest & !low) {
            let b = low | extra;
            if x == 0 && b == y {
                continue;
            }
            self.counter.tick()?;
            if self.sg.edges_between(b, self.sg.full() & !b) > self.w || !self.feasible(b)? {
                continue;
            }
            blocks.push(b);
            if self.partitions(y, x, rest & !b, blocks)? {
                return Ok(true);
            }
            blocks.pop();
        }
        Ok(false)
    }

    fn build(&self, y: u32, parent: Option<usize>, out: &mut RootedTreeCutDecomposition) {
        let (x, blocks) = self.memo[&y].clone().expect("feasible subtree");
        let t = out.parent.len();
        out.parent.push(parent);
        out.bags.push(self.sg.set(x));
        for b in blocks {
            self.build(b, Some(t), out);
        }
    }
}

/// Exact tree-cut width with an optimal decomposition, by iterative deepening
/// over the width and memoised search over subtree vertex sets.
pub fn exact_tcw_small(g: &Multigraph, cfg: ExactConfig) -> Result<(usize, RootedTreeCutDecomposition)> {
    let sg = Small::new(g, cfg.cap)?;
    if sg.n() == 0 {
        return Ok((0, RootedTreeCutDecomposition::single_bag(g)));
    }
    let mut counter = Counter {
        nodes: 0,
        limit: cfg.budget.limit,
    };
    for w in 1..=sg.n() {
        let mut s = TcwSearch {
            sg: &sg,
            w,
            memo: HashMap::new(),
            counter: &mut counter,
        };
        if s.feasible(sg.full())? {
            let mut d = RootedTreeCutDecomposition {
                parent: Vec::new(),
                bags: Vec::new(),
            };
            s.build(sg.full(), None, &mut d);
            debug_assert_eq!(validate_tcd(g, &d).map(|r| r.width).ok(), Some(w));
            return Ok((w, d));
        }
    }
    unreachable!("a single bag always has width |V(G)|")
}

struct TpwSearch<'a> {
    sg: &'a Small,
    w: usize,
    memo: HashMap<(u32, u32), Option<Vec<(u32, u32)>>>,
    counter: &'a mut Counter,
}

impl TpwSearch<'_> {
    /// Whether the subtree on `y` with root bag `x` fits; records `(component, bag)` children.
    fn feasible(&mut self, y: u32, x: u32) -> Result<bool> {
        if let Some(r) = self.memo.get(&(y, x)) {
            return Ok(r.is_some());
        }
        self.counter.tick()?;
        let mut children = Vec::new();
        let mut ok = true;
        for c in self.sg.components(y & !x) {
            if self.sg.edges_between(x, c) > self.w {
                ok = false;
                break;
            }
            let need = self.sg.neighbourhood(x) & c;
            let mut chosen = None;
            for extra in submasks(c & !need) {
                let xc = need | extra;
                if xc == 0 || xc.count_ones() as usize > self.w {
                    continue;
                }
                if self.feasible(c, xc)? {
                    chosen = Some(xc);
                    break;
                }
            }
            match chosen {
                Some(xc) => children.push((c, xc)),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        self.memo.insert((y, x), ok.then_some(children));
        Ok(ok)
    }

    fn build(&self, y: u32, x: u32, parent: Option<usize>, out: &mut RootedTreePartition) {
        let children = self.memo[&(y, x)].clone().expect("feasible subtree");
        let t = out.parent.len();
        out.parent.push(parent);
        out.bags.push(self.sg.set(x));
        for (c, xc) in children {
            self.build(c, xc, Some(t), out);
        }
    }
}

/// Exact tree-partition width with an optimal partition.
pub fn exact_tpw_small(g: &Multigraph, cfg: ExactConfig) -> Result<(usize, RootedTreePartition)> {
    let sg = Small::new(g, cfg.cap)?;
    if sg.n() == 0 {
        return Ok((0, RootedTreePartition::single_bag(g)));
    }
    let mut counter = Counter {
        nodes: 0,
        limit: cfg.budget.limit,
    };
    let full = sg.full();
    for w in 1..=sg.n() {
        let mut s = TpwSearch {
            sg: &sg,
            w,
            memo: HashMap::new(),
            counter: &mut counter,
        };
        for x in submasks(full) {
            if x == 0 || x.count_ones() as usize > w {
                continue;
            }
            if s.feasible(full, x)? {
                let mut d = RootedTreePartition {
                    parent: Vec::new(),
                    bags: Vec::new(),
                };
                s.build(full, x, None, &mut d);
                return Ok((w, d));
            }
        }
    }
    unreachable!("a single bag always has width |V(G)|")
}

/// Exact treewidth of the underlying simple graph by dynamic programming over
/// elimination prefixes.
pub fn exact_treewidth_small(g: &Multigraph, cap: usize) -> Result<usize> {
    let sg = Small::new(g, cap)?;
    let n = sg.n();
    if n == 0 {
        return Ok(0);
    }
    let full = sg.full() as usize;
    let mut dp = vec![i32::MAX; full + 1];
    dp[0] = -1;
    for s in 1..=full {
        let s32 = s as u32;
        for v in bits(s32) {
            let prev = s32 & !(1 << v);
            // Vertices outside prev ∪ {v} reachable from v through prev.
            let mut seen = 1u32 << v;
            let mut frontier = seen;
            let mut q = 0u32;
            while frontier != 0 {
                let nb = sg.neighbourhood(frontier) & !seen;
                seen |= nb;
                q |= nb & !prev;
                frontier = nb & prev;
            }
            let val = dp[prev as usize].max(q.count_ones() as i32);
            dp[s] = dp[s].min(val);
        }
    }
    Ok(dp[full].max(0) as usize)
}

fn spanning_tree_decomposition(g: &Multigraph, comp: &[VertexId], breadth_first: bool) -> RootedTreeCutDecomposition {
    let mut parent = Vec::new();
    let mut bags = Vec::new();
    let mut node: HashMap<VertexId, usize> = HashMap::new();
    let root = comp[0];
    let mut frontier: VecDeque<(VertexId, Option<usize>)> = VecDeque::from([(root, None)]);
    while let Some((v, p)) = if breadth_first { frontier.pop_front() } else { frontier.pop_back() } {
        if node.contains_key(&v) {
            continue;
        }
        node.insert(v, parent.len());
        parent.push(p);
        bags.push(BTreeSet::from([v]));
        let me = node[&v];
        let mut nbrs: Vec<VertexId> = g.neighbors(v).map(|(u, _)| u).filter(|u| !node.contains_key(u)).collect();
        nbrs.sort();
        if !breadth_first {
            nbrs.reverse();
        }
        for u in nbrs {
            frontier.push_back((u, Some(me)));
        }
    }
    RootedTreeCutDecomposition { parent, bags }
}

/// Hangs per-component decompositions below an empty root; a single component is returned as is.
fn join(mut parts: Vec<RootedTreeCutDecomposition>) -> RootedTreeCutDecomposition {
    if parts.len() == 1 {
        return parts.pop().unwrap();
    }
    let mut out = RootedTreeCutDecomposition {
        parent: vec![None],
        bags: vec![BTreeSet::new()],
    };
    for p in parts {
        let off = out.len();
        for (t, par) in p.parent.iter().enumerate() {
            out.parent.push(Some(par.map_or(0, |q| q + off)));
            out.bags.push(p.bags[t].clone());
        }
    }
    out
}

/// Deterministic valid decomposition: the narrowest of a single bag and
/// per-vertex bags along DFS and BFS spanning trees of each component.
pub fn heuristic_tcd(g: &Multigraph) -> RootedTreeCutDecomposition {
    let comps = g.connected_components();
    let mut candidates = vec![RootedTreeCutDecomposition::single_bag(g)];
    if !comps.is_empty() {
        for bfs in [false, true] {
            candidates.push(join(comps.iter().map(|c| spanning_tree_decomposition(g, c, bfs)).collect()));
        }
        if comps.len() > 1 {
            candidates.push(join(
                comps
                    .iter()
                    .map(|c| RootedTreeCutDecomposition {
                        parent: vec![None],
                        bags: vec![c.iter().copied().collect()],
                    })
                    .collect(),
            ));
        }
    }
    candidates
        .into_iter()
        .map(|d| (validate_tcd(g, &d).expect("constructed decompositions are valid").width, d))
        .min_by_key(|(w, _)| *w)
        .map(|(_, d)| d)
        .expect("at least one candidate")
}

/// Path-shaped tree-partition from BFS layers of each component. Later
/// components hang below the first layer of the previous one.
pub fn heuristic_tpd(g: &Multigraph) -> RootedTreePartition {
    let mut out = RootedTreePartition {
        parent: Vec::new(),
        bags: Vec::new(),
    };
    let mut anchor: Option<usize> = None;
    for comp in g.connected_components() {
        let mut depth: HashMap<VertexId, usize> = HashMap::from([(comp[0], 0)]);
        let mut queue = VecDeque::from([comp[0]]);
        let mut layers: Vec<BTreeSet<VertexId>> = vec![BTreeSet::from([comp[0]])];
        while let Some(v) = queue.pop_front() {
            let d = depth[&v];
            let mut nbrs: Vec<VertexId> = g.neighbors(v).map(|(u, _)| u).collect();
            nbrs.sort();
            for u in nbrs {
                if !depth.contains_key(&u) {
                    depth.insert(u, d + 1);
                    if layers.len() <= d + 1 {
                        layers.push(BTreeSet::new());
                    }
                    layers[d + 1].insert(u);
                    queue.push_back(u);
                }
            }
        }
        let first = out.parent.len();
        for (i, layer) in layers.into_iter().enumerate() {
            out.parent.push(if i == 0 { anchor } else { Some(first + i - 1) });
            out.bags.push(layer);
        }
        anchor = Some(first);
    }
    if out.bags.is_empty() {
        return RootedTreePartition::single_bag(g);
    }
    out
}

/// Treewidth upper bound from the min-degree elimination order.
pub fn treewidth_upper_bound(g: &Multigraph) -> usize {
    let mut adj: HashMap<VertexId, BTreeSet<VertexId>> =
        g.vertices().map(|v| (v, g.neighbors(v).map(|(u, _)| u).collect())).collect();
    let mut width = 0;
    while let Some(v) = adj.iter().min_by_key(|(v, n)| (n.len(), **v)).map(|(v, _)| *v) {
        let nbrs = adj.remove(&v).unwrap();
        width = width.max(nbrs.len());
        for &a in &nbrs {
            let set = adj.get_mut(&a).unwrap();
            set.remove(&v);
            set.extend(nbrs.iter().copied().filter(|&b| b != a));
        }
    }
    width
}
