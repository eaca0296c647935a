//! Graph families: grids, walls, enriched walls, the `G⁺` / `G*` gadget
//! constructions, disjoint sub-wall tilings and seeded random instances.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{EdgeRef, Multigraph, VertexId};

/// Version tag of the random instance stream. Bump when the sampling changes.
pub const RANDOM_STREAM_VERSION: &str = "chacha8-v1";

/// Integer coordinates `(x, y)` of grid and wall vertices; `x` indexes rows.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallCoordinates {
    coords: BTreeMap<VertexId, (u32, u32)>,
    #[serde(skip)]
    by_pos: HashMap<(u32, u32), VertexId>,
}

impl WallCoordinates {
    fn insert(&mut self, v: VertexId, pos: (u32, u32)) {
        let fresh = self.by_pos.insert(pos, v).is_none();
        debug_assert!(fresh, "duplicate coordinate {pos:?}");
        self.coords.insert(v, pos);
    }

    pub fn position(&self, v: VertexId) -> Option<(u32, u32)> {
        self.coords.get(&v).copied()
    }

    pub fn vertex_at(&self, x: u32, y: u32) -> Option<VertexId> {
        self.by_pos.get(&(x, y)).copied()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, (u32, u32))> + '_ {
        self.coords.iter().map(|(&v, &p)| (v, p))
    }

    /// Rebuilds the reverse index after deserialization.
    pub fn reindex(&mut self) {
        self.by_pos = self.coords.iter().map(|(&v, &p)| (p, v)).collect();
    }
}

/// The `(k × r)`-grid with row-major vertex ids.
pub fn grid(k: u32, r: u32) -> Result<(Multigraph, WallCoordinates)> {
    if k < 2 || r < 2 {
        return Err(Error::BadSize(format!("grid needs k, r >= 2, got {k}x{r}")));
    }
    let mut g = Multigraph::new();
    let mut coords = WallCoordinates::default();
    for x in 1..=k {
        for y in 1..=r {
            let v = g.add_vertex();
            coords.insert(v, (x, y));
        }
    }
    for x in 1..=k {
        for y in 1..=r {
            let v = coords.vertex_at(x, y).unwrap();
            if y < r {
                g.add_edge(v, coords.vertex_at(x, y + 1).unwrap(), 1)?;
            }
            if x < k {
                g.add_edge(v, coords.vertex_at(x + 1, y).unwrap(), 1)?;
            }
        }
    }
    Ok((g, coords))
}

/// A wall together with its coordinates and its vertical and horizontal paths.
#[derive(Debug, Clone)]
pub struct Wall {
    pub height: u32,
    pub graph: Multigraph,
    pub coords: WallCoordinates,
    /// `vertical_paths[j-1]` runs from `(1,2j)` to `(k+1,2j)` inside columns `2j-1, 2j`.
    pub vertical_paths: Vec<Vec<VertexId>>,
    /// `horizontal_paths[i-1]` is row `i` from its first to its last surviving vertex.
    pub horizontal_paths: Vec<Vec<VertexId>>,
}

impl Wall {
    pub fn vertex_at(&self, x: u32, y: u32) -> Option<VertexId> {
        self.coords.vertex_at(x, y)
    }

    /// Edges of a vertex path as unordered pairs `(min, max)`.
    pub fn path_edges(path: &[VertexId]) -> Vec<(VertexId, VertexId)> {
        path.windows(2)
            .map(|w| if w[0] < w[1] { (w[0], w[1]) } else { (w[1], w[0]) })
            .collect()
    }
}

/// Surviving coordinates and edges of the `k`-wall, computed on plain coordinates.
fn wall_layout(k: u32) -> (BTreeSet<(u32, u32)>, Vec<((u32, u32), (u32, u32))>) {
    let rows = k + 1;
    let cols = 2 * k + 2;
    let mut alive: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut edges: BTreeSet<((u32, u32), (u32, u32))> = BTreeSet::new();
    for x in 1..=rows {
        for y in 1..=cols {
            alive.insert((x, y));
            if y < cols {
                edges.insert(((x, y), (x, y + 1)));
            }
            if x < rows && (x + y) % 2 == 0 {
                edges.insert(((x, y), (x + 1, y)));
            }
        }
    }
    loop {
        let mut degree: HashMap<(u32, u32), usize> = HashMap::new();
        for (a, b) in &edges {
            *degree.entry(*a).or_default() += 1;
            *degree.entry(*b).or_default() += 1;
        }
        let leaves: Vec<(u32, u32)> = alive
            .iter()
            .copied()
            .filter(|p| degree.get(p).copied().unwrap_or(0) == 1)
            .collect();
        if leaves.is_empty() {
            break;
        }
        for p in &leaves {
            alive.remove(p);
        }
        edges.retain(|(a, b)| alive.contains(a) && alive.contains(b));
    }
    (alive, edges.into_iter().collect())
}

fn bfs_path(g: &Multigraph, from: VertexId, to: VertexId, allowed: impl Fn(VertexId) -> bool) -> Option<Vec<VertexId>> {
    let mut prev: HashMap<VertexId, VertexId> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    let mut seen = HashSet::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            let mut path = vec![to];
            let mut cur = to;
            while let Some(&p) = prev.get(&cur) {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for (y, _) in g.neighbors(x) {
            if allowed(y) && seen.insert(y) {
                prev.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    None
}

/// The `k`-wall `W_k`: the `(k+1) × (2k+2)` grid without the vertical edges
/// `{(x,y),(x+1,y)}` for odd `x+y`, pruned of degree-1 vertices.
pub fn wall(k: u32) -> Result<Wall> {
    if k < 2 {
        return Err(Error::BadSize(format!("wall needs k >= 2, got {k}")));
    }
    let (alive, edges) = wall_layout(k);
    let mut graph = Multigraph::new();
    let mut coords = WallCoordinates::default();
    for &p in &alive {
        let v = graph.add_vertex();
        coords.insert(v, p);
    }
    for (a, b) in edges {
        graph.add_edge(coords.vertex_at(a.0, a.1).unwrap(), coords.vertex_at(b.0, b.1).unwrap(), 1)?;
    }
    let mut vertical_paths = Vec::new();
    for j in 1..=k {
        let from = coords.vertex_at(1, 2 * j).expect("top of vertical path");
        let to = coords.vertex_at(k + 1, 2 * j).expect("bottom of vertical path");
        let path = bfs_path(&graph, from, to, |v| {
            let (_, y) = coords.position(v).unwrap();
            y == 2 * j || y == 2 * j - 1
        })
        .expect("vertical path exists");
        vertical_paths.push(path);
    }
    let horizontal_paths = (1..=k + 1)
        .map(|x| {
            (1..=2 * k + 2)
                .filter_map(|y| coords.vertex_at(x, y))
                .collect()
        })
        .collect();
    Ok(Wall {
        height: k,
        graph,
        coords,
        vertical_paths,
        horizontal_paths,
    })
}

/// Pairs lying on both a vertical and a horizontal path of `w`.
pub fn vertical_horizontal_intersection(w: &Wall) -> BTreeSet<(VertexId, VertexId)> {
    let vertical: BTreeSet<_> = w
        .vertical_paths
        .iter()
        .flat_map(|p| Wall::path_edges(p))
        .collect();
    let horizontal: BTreeSet<_> = w
        .horizontal_paths
        .iter()
        .flat_map(|p| Wall::path_edges(p))
        .collect();
    vertical.intersection(&horizontal).copied().collect()
}

/// `W⁺_k`: the wall with every edge of a vertical path that also lies on a
/// horizontal path doubled.
pub fn wall_plus(k: u32) -> Result<Wall> {
    let mut w = wall(k)?;
    for (u, v) in vertical_horizontal_intersection(&w) {
        w.graph.add_edge(u, v, 1)?;
    }
    Ok(w)
}

/// One pendant gadget `{v, v', v''}` with edges `{v',v''}` (twice), `{v,v'}`, `{v,v''}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Zone {
    pub center: VertexId,
    /// 1-based index among the gadgets of `center`.
    pub index: u32,
    pub prime: VertexId,
    pub double_prime: VertexId,
}

impl Zone {
    pub fn edges(&self) -> [EdgeRef; 4] {
        [
            EdgeRef::new(self.center, self.prime, 1),
            EdgeRef::new(self.center, self.double_prime, 1),
            EdgeRef::new(self.prime, self.double_prime, 1),
            EdgeRef::new(self.prime, self.double_prime, 2),
        ]
    }
}

/// Original/auxiliary bookkeeping for [`plus_graph`] and [`star_graph`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetMap {
    pub original: BTreeSet<VertexId>,
    pub zones: Vec<Zone>,
    aux_zone: BTreeMap<VertexId, usize>,
}

/// Zones of `G*`, one per vertex and unit of multidegree.
pub type StarZoneMap = GadgetMap;

impl GadgetMap {
    pub fn is_original_vertex(&self, v: VertexId) -> bool {
        self.original.contains(&v)
    }

    pub fn is_original_edge(&self, e: &EdgeRef) -> bool {
        self.is_original_vertex(e.u) && self.is_original_vertex(e.v)
    }

    /// Zone owning an auxiliary vertex.
    pub fn zone_of_vertex(&self, v: VertexId) -> Option<&Zone> {
        self.aux_zone.get(&v).map(|&i| &self.zones[i])
    }

    /// Zone containing an auxiliary edge; `None` for original edges.
    pub fn zone_of_edge(&self, e: &EdgeRef) -> Option<&Zone> {
        self.zone_of_vertex(e.u).or_else(|| self.zone_of_vertex(e.v))
    }

    pub fn zones_of(&self, v: VertexId) -> impl Iterator<Item = &Zone> + '_ {
        self.zones.iter().filter(move |z| z.center == v)
    }

    fn push(&mut self, zone: Zone) {
        let i = self.zones.len();
        self.aux_zone.insert(zone.prime, i);
        self.aux_zone.insert(zone.double_prime, i);
        self.zones.push(zone);
    }

    pub fn rebuild_index(&mut self) {
        self.aux_zone.clear();
        for (i, z) in self.zones.iter().enumerate() {
            self.aux_zone.insert(z.prime, i);
            self.aux_zone.insert(z.double_prime, i);
        }
    }
}

fn attach_gadget(g: &mut Multigraph, v: VertexId, index: u32) -> Zone {
    let prime = g.add_vertex();
    let double_prime = g.add_vertex();
    g.add_edge(prime, double_prime, 2).expect("fresh vertices");
    g.add_edge(v, prime, 1).expect("fresh vertices");
    g.add_edge(v, double_prime, 1).expect("fresh vertices");
    Zone {
        center: v,
        index,
        prime,
        double_prime,
    }
}

/// `G⁺`: one gadget per vertex. Minimum multidegree of the result is at least 3.
pub fn plus_graph(g: &Multigraph) -> (Multigraph, GadgetMap) {
    let mut out = g.clone();
    let mut map = GadgetMap {
        original: g.vertices().collect(),
        ..Default::default()
    };
    for v in g.vertices() {
        let zone = attach_gadget(&mut out, v, 1);
        map.push(zone);
    }
    (out, map)
}

/// `G*`: `mdeg(v)` gadgets per vertex `v`, zone `Z_{v,i}` for `i ∈ [1, mdeg(v)]`.
pub fn star_graph(g: &Multigraph) -> (Multigraph, StarZoneMap) {
    let mut out = g.clone();
    let mut map = GadgetMap {
        original: g.vertices().collect(),
        ..Default::default()
    };
    for v in g.vertices() {
        for i in 1..=g.mdeg(v) {
            let zone = attach_gadget(&mut out, v, i);
            map.push(zone);
        }
    }
    (out, map)
}

/// A big wall holding pairwise vertex-disjoint copies of a smaller wall.
#[derive(Debug, Clone)]
pub struct SubwallTiling {
    pub tile_height: u32,
    pub small: Wall,
    pub big: Wall,
    /// One embedding `small vertex → big vertex` per tile.
    pub tiles: Vec<BTreeMap<VertexId, VertexId>>,
}

fn ceil_sqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s * s < n {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= n {
        s -= 1;
    }
    s
}

/// Tiles `wall((h+1)·⌈√(k+1)⌉)` with `⌈√(k+1)⌉²` ≥ `k+1` disjoint copies of `wall(h)`.
///
/// Tile `(a, b)` is translated by `a·(h+1)` rows and `b·(2h+2)` columns, plus one
/// extra column when the row offset is odd so vertical edges keep their parity.
pub fn disjoint_subwalls(h: u32, k: u32) -> Result<SubwallTiling> {
    if h < 2 {
        return Err(Error::BadSize(format!("sub-wall height must be >= 2, got {h}")));
    }
    let side = ceil_sqrt(k as u64 + 1) as u32;
    let big = wall((h + 1) * side)?;
    let small = wall(h)?;
    let mut tiles = Vec::new();
    for a in 0..side {
        for b in 0..side {
            let dx = a * (h + 1);
            let dy = b * (2 * h + 2) + dx % 2;
            let mut emb = BTreeMap::new();
            for (v, (x, y)) in small.coords.iter() {
                let target = big.vertex_at(x + dx, y + dy).ok_or_else(|| {
                    Error::BadSize(format!("tile ({a},{b}) leaves the big wall at ({},{})", x + dx, y + dy))
                })?;
                emb.insert(v, target);
            }
            tiles.push(emb);
        }
    }
    Ok(SubwallTiling {
        tile_height: h,
        small,
        big,
        tiles,
    })
}

/// Checks that `emb` is an injective map under which every edge instance of
/// `small` exists in `big`.
pub fn is_subgraph_embedding(small: &Multigraph, big: &Multigraph, emb: &BTreeMap<VertexId, VertexId>) -> bool {
    let image: HashSet<VertexId> = emb.values().copied().collect();
    if image.len() != emb.len() || small.vertices().any(|v| !emb.contains_key(&v)) {
        return false;
    }
    small
        .multiedges()
        .all(|(u, v, m)| big.mult(emb[&u], emb[&v]) >= m)
}

/// Seeded random loopless multigraph on `n` vertices with exactly `m` edge
/// instances, each multiedge of multiplicity at most `max_mult`.
pub fn random_multigraph(n: usize, m: usize, max_mult: u32, seed: u64) -> Result<Multigraph> {
    if n < 2 || max_mult < 1 {
        return Err(Error::BadSize(format!("random_multigraph needs n >= 2 and max_mult >= 1, got n={n}, max_mult={max_mult}")));
    }
    let capacity = max_mult as usize * n * (n - 1) / 2;
    if m > capacity {
        return Err(Error::Infeasible(format!("{m} edge instances exceed capacity {capacity}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Multigraph::with_vertices(n);
    let mut slots: Vec<(u32, u32)> = Vec::with_capacity(capacity);
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            for _ in 0..max_mult {
                slots.push((a, b));
            }
        }
    }
    let (chosen, _) = slots.partial_shuffle(&mut rng, m);
    for &(a, b) in chosen.iter() {
        g.add_edge(VertexId(a), VertexId(b), 1)?;
    }
    Ok(g)
}

/// Like [`random_multigraph`] but connected: a random recursive spanning tree
/// first, then the remaining instances uniformly among free slots.
pub fn random_connected_multigraph(n: usize, m: usize, max_mult: u32, seed: u64) -> Result<Multigraph> {
    if n < 1 || max_mult < 1 {
        return Err(Error::BadSize(format!("need n >= 1 and max_mult >= 1, got n={n}")));
    }
    if m + 1 < n {
        return Err(Error::Infeasible(format!("{m} edge instances cannot connect {n} vertices")));
    }
    let capacity = max_mult as usize * n * n.saturating_sub(1) / 2;
    if m > capacity {
        return Err(Error::Infeasible(format!("{m} edge instances exceed capacity {capacity}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Multigraph::with_vertices(n);
    for b in 2..=n as u32 {
        let a = rng.gen_range(1..b);
        g.add_edge(VertexId(a), VertexId(b), 1)?;
    }
    let mut slots: Vec<(u32, u32)> = Vec::new();
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            let used = g.mult(VertexId(a), VertexId(b));
            for _ in used..max_mult {
                slots.push((a, b));
            }
        }
    }
    let extra = m + 1 - n;
    let (chosen, _) = slots.partial_shuffle(&mut rng, extra);
    for &(a, b) in chosen.iter() {
        g.add_edge(VertexId(a), VertexId(b), 1)?;
    }
    Ok(g)
}

pub fn path_graph(n: usize) -> Multigraph {
    let mut g = Multigraph::with_vertices(n);
    for i in 1..n as u32 {
        g.add_edge(VertexId(i), VertexId(i + 1), 1).unwrap();
    }
    g
}

pub fn cycle_graph(n: usize) -> Result<Multigraph> {
    if n < 3 {
        return Err(Error::BadSize(format!("cycle needs n >= 3, got {n}")));
    }
    let mut g = path_graph(n);
    g.add_edge(VertexId(n as u32), VertexId(1), 1)?;
    Ok(g)
}

pub fn complete_graph(n: usize) -> Multigraph {
    let mut g = Multigraph::with_vertices(n);
    for a in 1..=n as u32 {
        for b in a + 1..=n as u32 {
            g.add_edge(VertexId(a), VertexId(b), 1).unwrap();
        }
    }
    g
}

/// `θ_r`: two vertices joined by `r` parallel edges.
pub fn theta(r: u32) -> Multigraph {
    Multigraph::from_edges(2, &[(1, 2, r)]).unwrap()
}

/// `K_{1,k}` with the centre as vertex 1.
pub fn star(k: usize) -> Multigraph {
    let mut g = Multigraph::with_vertices(k + 1);
    for i in 2..=k as u32 + 1 {
        g.add_edge(VertexId(1), VertexId(i), 1).unwrap();
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Straight-line execution of the wall recipe on the 3×6 grid for k = 2.
    #[test]
    fn wall_two_matches_direct_enumeration() {
        // Grid 3x6: horizontal edges 3*5 = 15, vertical candidates 2*6 = 12.
        // Vertical kept when x+y even: x=1 → y ∈ {1,3,5}; x=2 → y ∈ {2,4,6}: 6 kept.
        // Degree-1 vertices: (1,6) (only (1,5)) and (3,1) (only (3,2)); removing both
        // deletes two horizontal edges. Nothing else drops to degree 1.
        let w = wall(2).unwrap();
        assert_eq!(w.graph.vertex_count(), 18 - 2);
        assert_eq!(w.graph.edge_count(), 15 + 6 - 2);
        assert!(w.vertex_at(1, 6).is_none());
        assert!(w.vertex_at(3, 1).is_none());
    }

    #[test]
    fn walls_are_subcubic_with_min_degree_two() {
        for k in 2..=7 {
            let w = wall(k).unwrap();
            for v in w.graph.vertices() {
                let d = w.graph.deg(v);
                assert!(d == 2 || d == 3, "k={k}, vertex {v} has degree {d}");
            }
            assert!(w.graph.is_simple());
            assert_eq!(w.graph.vertex_count(), (2 * (k + 1) * (k + 1) - 2) as usize);
        }
    }

    #[test]
    fn vertical_paths_disjoint_and_in_their_columns() {
        for k in 2..=6 {
            let w = wall(k).unwrap();
            assert_eq!(w.vertical_paths.len(), k as usize);
            assert_eq!(w.horizontal_paths.len(), k as usize + 1);
            let mut seen = HashSet::new();
            for (j, p) in w.vertical_paths.iter().enumerate() {
                let j = j as u32 + 1;
                for &v in p {
                    assert!(seen.insert(v), "vertical paths share {v}");
                    let (_, y) = w.coords.position(v).unwrap();
                    assert!(y == 2 * j || y == 2 * j - 1);
                }
            }
        }
    }

    #[test]
    fn wall_plus_doubles_exactly_the_intersection() {
        for k in 2..=6 {
            let w = wall(k).unwrap();
            let wp = wall_plus(k).unwrap();
            let both = vertical_horizontal_intersection(&w);
            assert_eq!(wp.graph.edge_count() - w.graph.edge_count(), both.len());
            assert_eq!(wp.graph.underlying_simple(), w.graph);
            assert_eq!(wp.graph.max_mult(), 2);
            let vertical: HashSet<_> = w.vertical_paths.iter().flat_map(|p| Wall::path_edges(p)).collect();
            for (u, v, m) in wp.graph.multiedges() {
                if m == 2 {
                    assert!(vertical.contains(&(u, v)));
                }
            }
        }
    }

    #[test]
    fn grid_counts() {
        for (k, r) in [(2, 2), (3, 3), (2, 5), (4, 3)] {
            let (g, c) = grid(k, r).unwrap();
            assert_eq!(g.vertex_count(), (k * r) as usize);
            assert_eq!(g.edge_count(), (k * (r - 1) + r * (k - 1)) as usize);
            assert_eq!(c.len(), (k * r) as usize);
        }
        assert!(grid(1, 4).is_err());
    }

    #[test]
    fn plus_graph_counts_and_min_multidegree() {
        let single = Multigraph::with_vertices(1);
        let (p, map) = plus_graph(&single);
        assert_eq!(p.vertex_count(), 3);
        assert_eq!(p.max_mult(), 2);
        assert_eq!(p.edge_count(), 4);
        assert_eq!(map.zones.len(), 1);

        let g = random_multigraph(6, 9, 2, 7).unwrap();
        let (p, _) = plus_graph(&g);
        assert_eq!(p.vertex_count(), 18);
        assert_eq!(p.edge_count(), 9 + 24);
        for v in p.vertices() {
            if p.mdeg(v) < 3 {
                assert!(g.contains_vertex(v) && g.mdeg(v) == 0 && p.mdeg(v) == 2);
            }
        }
        let connected = random_connected_multigraph(6, 9, 2, 7).unwrap();
        assert!(plus_graph(&connected).0.min_mdeg() >= 3);
    }

    #[test]
    fn star_graph_counts_and_zones() {
        let (s, map) = star_graph(&theta(2));
        assert_eq!(s.vertex_count(), 10);
        assert_eq!(s.edge_count(), 18);
        assert_eq!(map.zones.len(), 4);

        let g = random_multigraph(5, 8, 3, 11).unwrap();
        let (s, map) = star_graph(&g);
        assert_eq!(s.vertex_count(), 5 + 4 * 8);
        assert_eq!(s.edge_count(), 9 * 8);
        for z in &map.zones {
            // 2-edge cut: only the two edges at the centre leave the zone
            for x in [z.prime, z.double_prime] {
                for (y, _) in s.neighbors(x) {
                    assert!(y == z.center || y == z.prime || y == z.double_prime);
                }
            }
            assert!(z.index >= 1 && z.index <= g.mdeg(z.center));
        }
        for v in g.vertices() {
            assert_eq!(map.zones_of(v).count(), g.mdeg(v) as usize);
        }
    }

    #[test]
    fn subwall_tilings() {
        let t = disjoint_subwalls(2, 0).unwrap();
        assert_eq!(t.big.height, 3);
        assert_eq!(t.tiles.len(), 1);

        let t = disjoint_subwalls(2, 3).unwrap();
        assert_eq!(t.big.height, 6);
        assert_eq!(t.tiles.len(), 4);
        for (i, a) in t.tiles.iter().enumerate() {
            assert!(is_subgraph_embedding(&t.small.graph, &t.big.graph, a));
            for b in &t.tiles[i + 1..] {
                let sa: HashSet<_> = a.values().collect();
                assert!(b.values().all(|v| !sa.contains(v)));
            }
        }
        for (h, k) in [(3, 2), (3, 4), (4, 1), (5, 3)] {
            let t = disjoint_subwalls(h, k).unwrap();
            assert!(t.tiles.len() > k as usize);
            for a in &t.tiles {
                assert!(is_subgraph_embedding(&t.small.graph, &t.big.graph, a));
            }
        }
    }

    #[test]
    fn random_generators() {
        assert_eq!(random_multigraph(5, 0, 1, 3).unwrap().edge_count(), 0);
        assert_eq!(random_multigraph(6, 10, 2, 42).unwrap(), random_multigraph(6, 10, 2, 42).unwrap());
        assert!(matches!(random_multigraph(4, 13, 2, 1), Err(Error::Infeasible(_))));
        let g = random_multigraph(4, 12, 2, 1).unwrap();
        assert_eq!(g.edge_count(), 12);
        for seed in 0..20 {
            let g = random_connected_multigraph(7, 10, 2, seed).unwrap();
            assert!(g.is_connected());
            assert_eq!(g.edge_count(), 10);
            assert!(g.max_mult() <= 2);
        }
    }
}
